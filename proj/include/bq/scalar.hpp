#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "bq/error.hpp"

namespace bq {

class Scalar;

/// The base field: the rationals (characteristic 0) or a prime field F_p.
class Field {
  public:
    Field() = default;

    static Field rationals() { return Field{}; }

    static Field prime(std::uint32_t p) {
        if (!is_prime(p)) {
            throw DomainError("characteristic " + std::to_string(p) + " is not a prime");
        }
        Field f;
        f.p_ = p;
        return f;
    }

    /// 0 selects the rationals, anything else must be prime.
    static Field of_characteristic(std::uint32_t p) { return p == 0 ? rationals() : prime(p); }

    [[nodiscard]] std::uint32_t characteristic() const { return p_; }

    [[nodiscard]] Scalar zero() const;
    [[nodiscard]] Scalar one() const;
    [[nodiscard]] Scalar from_integer(long value) const;
    /// Reduces a rational into this field; throws if the denominator vanishes mod p.
    [[nodiscard]] Scalar from_rational(const mpq_class& value) const;

    friend bool operator==(const Field&, const Field&) = default;

  private:
    static bool is_prime(std::uint32_t p) {
        if (p < 2) {
            return false;
        }
        for (std::uint32_t d = 2; d * d <= p; ++d) {
            if (p % d == 0) {
                return false;
            }
        }
        return true;
    }

    std::uint32_t p_ = 0;
};

/// An exact field element. In characteristic p the value is kept as an
/// integer representative in [0, p).
class Scalar {
  public:
    Scalar() = default;

    [[nodiscard]] Field field() const { return Field::of_characteristic(p_); }
    [[nodiscard]] std::uint32_t characteristic() const { return p_; }
    [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
    [[nodiscard]] bool is_one() const { return value_ == 1; }
    [[nodiscard]] const mpq_class& value() const { return value_; }

    Scalar& operator+=(const Scalar& o) {
        check(o);
        value_ += o.value_;
        normalize();
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        check(o);
        value_ -= o.value_;
        normalize();
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        check(o);
        value_ *= o.value_;
        normalize();
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        check(o);
        *this *= o.inverse();
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend Scalar operator-(Scalar a) {
        a.value_ = -a.value_;
        a.normalize();
        return a;
    }

    [[nodiscard]] Scalar inverse() const {
        if (is_zero()) {
            throw DomainError("division by zero");
        }
        Scalar r = *this;
        if (p_ == 0) {
            r.value_ = 1 / value_;
        } else {
            mpz_class inv;
            mpz_class mod = p_;
            mpz_invert(inv.get_mpz_t(), value_.get_num_mpz_t(), mod.get_mpz_t());
            r.value_ = inv;
        }
        return r;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.p_ == b.p_ && a.value_ == b.value_;
    }

    /// Integers print bare, fractions as a/b.
    [[nodiscard]] std::string to_string() const { return value_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

    [[nodiscard]] std::size_t hash() const {
        return std::hash<std::string>{}(value_.get_str()) ^ (static_cast<std::size_t>(p_) << 1);
    }

  private:
    friend class Field;

    void check(const Scalar& o) const {
        if (o.p_ != p_) {
            throw DomainError("arithmetic between scalars of characteristic " + std::to_string(p_) +
                              " and " + std::to_string(o.p_));
        }
    }

    void normalize() {
        if (p_ == 0) {
            value_.canonicalize();
            return;
        }
        // Values stay integral in characteristic p, only the sign/range needs fixing.
        mpz_class mod = p_;
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), value_.get_num_mpz_t(), mod.get_mpz_t());
        value_ = r;
    }

    mpq_class value_ = 0;
    std::uint32_t p_ = 0;
};

inline Scalar Field::zero() const {
    Scalar s;
    s.p_ = p_;
    return s;
}

inline Scalar Field::one() const { return from_integer(1); }

inline Scalar Field::from_integer(long value) const {
    Scalar s;
    s.p_ = p_;
    s.value_ = value;
    s.normalize();
    return s;
}

inline Scalar Field::from_rational(const mpq_class& value) const {
    if (p_ == 0) {
        Scalar s;
        s.value_ = value;
        s.value_.canonicalize();
        return s;
    }
    Scalar num;
    num.p_ = p_;
    num.value_ = value.get_num();
    num.normalize();
    Scalar den;
    den.p_ = p_;
    den.value_ = value.get_den();
    den.normalize();
    if (den.is_zero()) {
        throw DomainError("coefficient " + value.get_str() + " has a denominator divisible by " +
                          std::to_string(p_));
    }
    return num / den;
}

/// Parses "a" or "a/b" (optional sign) into a rational.
inline mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0) {
        throw ParseError("invalid scalar '" + text + "'", 0, 0);
    }
    if (q.get_den() == 0) {
        throw ParseError("zero denominator in '" + text + "'", 0, 0);
    }
    q.canonicalize();
    return q;
}

} // namespace bq
