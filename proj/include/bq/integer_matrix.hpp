#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "bq/error.hpp"

namespace bq {

using IntVector = std::vector<mpz_class>;

/// Dense integer matrix, row major.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void append_row(const IntVector& row) {
        if (rows_ == 0 && data_.empty()) {
            cols_ = row.size();
        }
        if (row.size() != cols_) {
            throw DomainError("row length mismatch");
        }
        data_.insert(data_.end(), row.begin(), row.end());
        ++rows_;
    }

    [[nodiscard]] IntVector row(std::size_t r) const {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t c = 0; c < cols_; ++c) {
            std::swap((*this)(a, c), (*this)(b, c));
        }
    }
    void swap_cols(std::size_t a, std::size_t b) {
        for (std::size_t r = 0; r < rows_; ++r) {
            std::swap((*this)(r, a), (*this)(r, b));
        }
    }
    /// row[dst] += k * row[src]
    void add_row(std::size_t dst, std::size_t src, const mpz_class& k) {
        for (std::size_t c = 0; c < cols_; ++c) {
            (*this)(dst, c) += k * (*this)(src, c);
        }
    }
    /// col[dst] += k * col[src]
    void add_col(std::size_t dst, std::size_t src, const mpz_class& k) {
        for (std::size_t r = 0; r < rows_; ++r) {
            (*this)(r, dst) += k * (*this)(r, src);
        }
    }
    void negate_col(std::size_t c) {
        for (std::size_t r = 0; r < rows_; ++r) {
            (*this)(r, c) = -(*this)(r, c);
        }
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<mpz_class> data_;
};

inline IntVector row_times(const IntVector& x, const IntMatrix& m) {
    IntVector out(m.cols(), 0);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            out[c] += x[r] * m(r, c);
        }
    }
    return out;
}

/// Free rank and invariant factors d1 | d2 | ... (all > 1).
struct AbelianInvariants {
    std::size_t rank = 0;
    std::vector<mpz_class> torsion;

    [[nodiscard]] bool is_trivial() const { return rank == 0 && torsion.empty(); }

    /// Order of the group, 0 when infinite.
    [[nodiscard]] mpz_class order() const {
        if (rank > 0) {
            return 0;
        }
        mpz_class o = 1;
        for (const auto& d : torsion) {
            o *= d;
        }
        return o;
    }

    [[nodiscard]] std::string to_string() const {
        if (is_trivial()) {
            return "1";
        }
        std::string s;
        for (std::size_t i = 0; i < rank; ++i) {
            s += s.empty() ? "Z" : " x Z";
        }
        for (const auto& d : torsion) {
            s += (s.empty() ? "Z/" : " x Z/") + d.get_str();
        }
        return s;
    }

    friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Smith normal form U*A*V = diag(d_1, ..., d_r, 0, ...). Only V is kept,
/// which is what row-vector membership tests need: x lies in the row
/// lattice of A iff x*V is divisible by d_i in slot i (and 0 past rank).
class SmithForm {
  public:
    explicit SmithForm(IntMatrix a) : cols_(a.cols()), v_(IntMatrix::identity(a.cols())) {
        reduce(a);
    }

    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] const std::vector<mpz_class>& diagonal() const { return diagonal_; }
    [[nodiscard]] const IntMatrix& column_transform() const { return v_; }

    [[nodiscard]] AbelianInvariants invariants() const {
        AbelianInvariants inv;
        inv.rank = cols_ - diagonal_.size();
        for (const auto& d : diagonal_) {
            if (d > 1) {
                inv.torsion.push_back(d);
            }
        }
        return inv;
    }

    /// Coordinates of x in Z^n / rowspace(A): slot i is reduced mod d_i
    /// for i < rank, free slots are returned as is. Zero iff x is in the lattice.
    [[nodiscard]] IntVector image(const IntVector& x) const {
        if (x.size() != cols_) {
            throw DomainError("vector length does not match the presentation");
        }
        IntVector y = row_times(x, v_);
        for (std::size_t i = 0; i < diagonal_.size(); ++i) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), y[i].get_mpz_t(), diagonal_[i].get_mpz_t());
            y[i] = r;
        }
        return y;
    }

    [[nodiscard]] bool in_lattice(const IntVector& x) const {
        IntVector y = image(x);
        return std::all_of(y.begin(), y.end(), [](const mpz_class& c) { return c == 0; });
    }

  private:
    void reduce(IntMatrix& a) {
        const std::size_t m = a.rows();
        const std::size_t n = a.cols();
        std::size_t t = 0;
        while (t < m && t < n) {
            // Pivot: smallest nonzero absolute value in the remaining block.
            std::size_t pr = m;
            std::size_t pc = n;
            for (std::size_t r = t; r < m; ++r) {
                for (std::size_t c = t; c < n; ++c) {
                    if (a(r, c) != 0 && (pr == m || abs(a(r, c)) < abs(a(pr, pc)))) {
                        pr = r;
                        pc = c;
                    }
                }
            }
            if (pr == m) {
                break;
            }
            a.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v_.swap_cols(t, pc);
            bool clean = false;
            while (!clean) {
                clean = true;
                for (std::size_t r = t + 1; r < m; ++r) {
                    if (a(r, t) != 0) {
                        mpz_class q;
                        mpz_fdiv_q(q.get_mpz_t(), a(r, t).get_mpz_t(), a(t, t).get_mpz_t());
                        a.add_row(r, t, -q);
                        if (a(r, t) != 0) {
                            a.swap_rows(t, r);
                            clean = false;
                        }
                    }
                }
                for (std::size_t c = t + 1; c < n; ++c) {
                    if (a(t, c) != 0) {
                        mpz_class q;
                        mpz_fdiv_q(q.get_mpz_t(), a(t, c).get_mpz_t(), a(t, t).get_mpz_t());
                        a.add_col(c, t, -q);
                        v_.add_col(c, t, -q);
                        if (a(t, c) != 0) {
                            a.swap_cols(t, c);
                            v_.swap_cols(t, c);
                            clean = false;
                        }
                    }
                }
                if (!clean) {
                    continue;
                }
                // Divisibility: the pivot must divide the rest of the block.
                for (std::size_t r = t + 1; r < m && clean; ++r) {
                    for (std::size_t c = t + 1; c < n; ++c) {
                        if (a(r, c) % a(t, t) != 0) {
                            a.add_row(t, r, 1);
                            clean = false;
                            break;
                        }
                    }
                }
            }
            if (a(t, t) < 0) {
                a.negate_col(t);
                v_.negate_col(t);
            }
            diagonal_.push_back(a(t, t));
            ++t;
        }
    }

    std::size_t cols_;
    IntMatrix v_;
    std::vector<mpz_class> diagonal_;
};

inline AbelianInvariants smith_invariants(const IntMatrix& a) { return SmithForm(a).invariants(); }

} // namespace bq
