#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bq/error.hpp"
#include "bq/ideal.hpp"
#include "bq/quiver.hpp"
#include "bq/scalar.hpp"

namespace bq {

/// phi_{alpha,u,tau}: alpha -> alpha + tau*u, every other arrow fixed.
struct Transvection {
    Bypass bypass;
    Scalar tau;

    [[nodiscard]] Transvection inverse() const { return Transvection{bypass, -tau}; }

    friend bool operator==(const Transvection&, const Transvection&) = default;
};

inline std::string to_string(const Quiver& q, const Transvection& t) {
    return "phi(" + q.arrow(t.bypass.arrow).name + ", " + to_string(q, t.bypass.path) + ", " + t.tau.to_string() +
           ")";
}

inline Transvection make_transvection(const Quiver& q, ArrowId alpha, const Path& u, const Scalar& tau) {
    const Arrow& a = q.arrow(alpha);
    if (u.source != a.source || u.target != a.target) {
        throw DomainError("path " + to_string(q, u) + " is not parallel to arrow " + a.name);
    }
    if (u.length() == 1 && u.arrows.front() == alpha) {
        throw DomainError("a bypass needs a path different from its arrow");
    }
    return Transvection{Bypass{alpha, u}, tau};
}

/// Arrow-wise rescaling by nonzero scalars.
struct Dilatation {
    std::vector<Scalar> scale;

    static Dilatation identity(const Quiver& q, const Field& f) { return Dilatation{std::vector<Scalar>(q.arrow_count(), f.one())}; }

    [[nodiscard]] bool is_identity() const {
        return std::all_of(scale.begin(), scale.end(), [](const Scalar& s) { return s.is_one(); });
    }

    /// Product of the scale factors along a path.
    [[nodiscard]] Scalar weight(const Path& p, const Field& f) const {
        Scalar w = f.one();
        for (ArrowId a : p.arrows) {
            w *= scale.at(a);
        }
        return w;
    }

    friend bool operator==(const Dilatation&, const Dilatation&) = default;
};

inline std::string to_string(const Quiver& q, const Dilatation& d) {
    std::string s;
    for (ArrowId a = 0; a < d.scale.size(); ++a) {
        if (!d.scale[a].is_one()) {
            s += (s.empty() ? "" : ",") + q.arrow(a).name + "=" + d.scale[a].to_string();
        }
    }
    return "D(" + s + ")";
}

/// An algebra automorphism of kQ fixing every vertex, given by arrow images.
class PathAutomorphism {
  public:
    PathAutomorphism(std::shared_ptr<const Quiver> q, Field f, std::vector<Relation> images)
        : quiver_(std::move(q)), field_(f), images_(std::move(images)) {
        if (images_.size() != quiver_->arrow_count()) {
            throw DomainError("automorphism needs one image per arrow");
        }
        for (ArrowId a = 0; a < images_.size(); ++a) {
            const Arrow& arr = quiver_->arrow(a);
            if (images_[a].source != arr.source || images_[a].target != arr.target) {
                throw DomainError("image of arrow " + arr.name + " has the wrong endpoints");
            }
            for (const auto& [p, c] : images_[a].terms) {
                if (quiver_->path(p).length() == 0) {
                    throw DomainError("image of arrow " + arr.name + " has a trivial path term");
                }
            }
        }
        if (!linear_part_invertible()) {
            throw DomainError("automorphism has a non-invertible linear part");
        }
    }

    static PathAutomorphism identity(std::shared_ptr<const Quiver> q, Field f) {
        std::vector<Relation> images;
        for (ArrowId a = 0; a < q->arrow_count(); ++a) {
            images.push_back(single_path(*q, q->arrow_path(a), f));
        }
        return PathAutomorphism(std::move(q), f, std::move(images));
    }

    static PathAutomorphism from(std::shared_ptr<const Quiver> q, Field f, const Transvection& t) {
        PathAutomorphism phi = identity(q, f);
        add_term(phi.images_[t.bypass.arrow], q->path_id(t.bypass.path), t.tau);
        return phi;
    }

    static PathAutomorphism from(std::shared_ptr<const Quiver> q, Field f, const Dilatation& d) {
        if (d.scale.size() != q->arrow_count()) {
            throw DomainError("dilatation needs one factor per arrow");
        }
        std::vector<Relation> images;
        for (ArrowId a = 0; a < q->arrow_count(); ++a) {
            if (d.scale[a].is_zero()) {
                throw DomainError("dilatation factor of arrow " + q->arrow(a).name + " is zero");
            }
            images.push_back(scaled(single_path(*q, q->arrow_path(a), f), d.scale[a]));
        }
        return PathAutomorphism(std::move(q), f, std::move(images));
    }

    [[nodiscard]] const Quiver& quiver() const { return *quiver_; }
    [[nodiscard]] const std::shared_ptr<const Quiver>& quiver_ptr() const { return quiver_; }
    [[nodiscard]] const Field& field() const { return field_; }
    [[nodiscard]] const std::vector<Relation>& images() const { return images_; }
    [[nodiscard]] const Relation& image(ArrowId a) const { return images_.at(a); }

    /// Image of a path: the product of its arrow images.
    [[nodiscard]] Relation apply(PathId p) const {
        const Path& path = quiver_->path(p);
        Relation out = single_path(*quiver_, quiver_->trivial_path(path.source), field_);
        for (ArrowId a : path.arrows) {
            out = multiply(*quiver_, images_[a], out);
        }
        return out;
    }

    [[nodiscard]] Relation apply(const Relation& r) const {
        Relation out{r.source, r.target, {}};
        for (const auto& [p, c] : r.terms) {
            add_multiple(out, apply(p), c);
        }
        return out;
    }

    /// Coefficient of arrow b in the image of arrow a.
    [[nodiscard]] Scalar linear_coefficient(ArrowId a, ArrowId b) const {
        return images_[a].coefficient(quiver_->arrow_path(b), field_);
    }

    /// Arrows grouped by (source, target), each class in declaration order.
    [[nodiscard]] std::vector<std::vector<ArrowId>> parallel_classes() const {
        std::map<std::pair<VertexId, VertexId>, std::vector<ArrowId>> classes;
        for (ArrowId a = 0; a < quiver_->arrow_count(); ++a) {
            classes[{quiver_->arrow(a).source, quiver_->arrow(a).target}].push_back(a);
        }
        std::vector<std::vector<ArrowId>> out;
        for (auto& [key, c] : classes) {
            out.push_back(std::move(c));
        }
        return out;
    }

    [[nodiscard]] bool linear_part_invertible() const {
        for (const auto& cls : parallel_classes()) {
            const std::size_t n = cls.size();
            std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    m[i][j] = linear_coefficient(cls[j], cls[i]);
                }
            }
            // Gaussian elimination for the rank.
            for (std::size_t col = 0; col < n; ++col) {
                std::size_t piv = col;
                while (piv < n && m[piv][col].is_zero()) {
                    ++piv;
                }
                if (piv == n) {
                    return false;
                }
                std::swap(m[piv], m[col]);
                for (std::size_t r = col + 1; r < n; ++r) {
                    Scalar k = m[r][col] / m[col][col];
                    for (std::size_t c = col; c < n; ++c) {
                        m[r][c] -= k * m[col][c];
                    }
                }
            }
        }
        return true;
    }

    /// Linear part is the identity and the rest is strictly longer.
    [[nodiscard]] bool is_unipotent() const {
        for (ArrowId a = 0; a < quiver_->arrow_count(); ++a) {
            for (const auto& [p, c] : images_[a].terms) {
                if (quiver_->path(p).length() == 1 && !(p == quiver_->arrow_path(a) && c.is_one())) {
                    return false;
                }
            }
            if (images_[a].coefficient(quiver_->arrow_path(a), field_) != field_.one()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const PathAutomorphism& a, const PathAutomorphism& b) {
        return a.quiver() == b.quiver() && a.field_ == b.field_ && a.images_ == b.images_;
    }

  private:
    std::shared_ptr<const Quiver> quiver_;
    Field field_;
    std::vector<Relation> images_;
};

/// (f o g)(alpha) = f(g(alpha)).
inline PathAutomorphism compose(const PathAutomorphism& f, const PathAutomorphism& g) {
    if (!(f.quiver() == g.quiver()) || f.field() != g.field()) {
        throw DomainError("automorphisms live on different quivers or fields");
    }
    std::vector<Relation> images;
    for (ArrowId a = 0; a < f.quiver().arrow_count(); ++a) {
        images.push_back(f.apply(g.image(a)));
    }
    return PathAutomorphism(f.quiver_ptr(), f.field(), std::move(images));
}

inline Ideal apply_automorphism(const PathAutomorphism& phi, const Ideal& ideal) {
    if (!(phi.quiver() == ideal.quiver()) || phi.field() != ideal.field()) {
        throw DomainError("automorphism and ideal live on different quivers or fields");
    }
    std::vector<Relation> gens;
    for (const Relation& r : minimal_relations(ideal)) {
        gens.push_back(phi.apply(r));
    }
    return Ideal(ideal.quiver_ptr(), ideal.field(), std::move(gens));
}

inline Ideal apply_automorphism(const Transvection& t, const Ideal& ideal) {
    return apply_automorphism(PathAutomorphism::from(ideal.quiver_ptr(), ideal.field(), t), ideal);
}

inline Ideal apply_automorphism(const Dilatation& d, const Ideal& ideal) {
    return apply_automorphism(PathAutomorphism::from(ideal.quiver_ptr(), ideal.field(), d), ideal);
}

/// phi = t_n o ... o t_1 o D: the dilatation acts first, then the
/// transvections in list order.
struct DTDecomposition {
    Dilatation dilatation;
    std::vector<Transvection> transvections;
};

inline PathAutomorphism recompose(const std::shared_ptr<const Quiver>& q, const Field& f, const DTDecomposition& dt) {
    PathAutomorphism phi = PathAutomorphism::from(q, f, dt.dilatation);
    for (const Transvection& t : dt.transvections) {
        phi = compose(PathAutomorphism::from(q, f, t), phi);
    }
    return phi;
}

/// D phi_{alpha,u,tau} D^-1 = phi_{alpha,u,tau*D(u)/D(alpha)}.
inline Transvection conjugate(const Dilatation& d, const Transvection& t, const Field& f) {
    Scalar ratio = d.weight(t.bypass.path, f) / d.scale.at(t.bypass.arrow);
    return Transvection{t.bypass, t.tau * ratio};
}

/// Writes phi as transvections after a dilatation. Parallel arrows are
/// first made diagonal by column operations (transvections along
/// parallel-arrow bypasses), then the longer tails are stripped one
/// path at a time, shortest first.
inline DTDecomposition decompose_DT(const PathAutomorphism& phi) {
    const Quiver& q = phi.quiver();
    const Field& f = phi.field();
    const auto& qp = phi.quiver_ptr();
    // Right factors T_1, T_2, ... with phi o T_1 o T_2 o ... = D.
    std::vector<Transvection> right;
    PathAutomorphism cur = phi;
    auto push = [&](ArrowId alpha, PathId u, const Scalar& tau) {
        Transvection t{Bypass{alpha, q.path(u)}, tau};
        right.push_back(t);
        cur = compose(cur, PathAutomorphism::from(qp, f, t));
    };
    for (const auto& cls : phi.parallel_classes()) {
        const std::size_t n = cls.size();
        auto entry = [&](std::size_t row, std::size_t col) { return cur.linear_coefficient(cls[col], cls[row]); };
        for (std::size_t i = 0; i < n; ++i) {
            if (entry(i, i).is_zero()) {
                std::size_t k = i + 1;
                while (k < n && entry(i, k).is_zero()) {
                    ++k;
                }
                if (k == n) {
                    throw DomainError("automorphism has a non-invertible linear part");
                }
                push(cls[i], q.arrow_path(cls[k]), f.one());
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && !entry(i, j).is_zero()) {
                    push(cls[j], q.arrow_path(cls[i]), -(entry(i, j) / entry(i, i)));
                }
            }
        }
    }
    Dilatation d;
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        d.scale.push_back(cur.linear_coefficient(a, a));
    }
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        while (true) {
            const Relation& img = cur.image(a);
            auto it = std::find_if(img.terms.begin(), img.terms.end(),
                                   [&](const auto& t) { return q.path(t.first).length() >= 2; });
            if (it == img.terms.end()) {
                break;
            }
            Scalar mu = d.weight(q.path(it->first), f);
            push(a, it->first, -(it->second / mu));
        }
    }
    DTDecomposition out;
    out.dilatation = d;
    // phi = D o T_N^-1 o ... o T_1^-1 = c(T_N^-1) o ... o c(T_1^-1) o D.
    for (const Transvection& t : right) {
        out.transvections.push_back(conjugate(d, t.inverse(), f));
    }
    if (!(recompose(qp, f, out) == phi)) {
        throw Error("internal: decomposition does not recompose");
    }
    return out;
}

/// A derivation of kQ vanishing on vertices, given by arrow images.
struct Derivation {
    std::vector<Relation> arrow_images;
};

/// Leibniz rule on a path: sum over positions of the path with one arrow replaced by its image.
inline Relation apply_derivation(const Quiver& q, const Derivation& nu, const Field& f, PathId pid) {
    const Path& p = q.path(pid);
    Relation out{p.source, p.target, {}};
    for (std::size_t i = 0; i < p.arrows.size(); ++i) {
        Path before{p.source, q.arrow(p.arrows[i]).source,
                    std::vector<ArrowId>(p.arrows.begin(), p.arrows.begin() + static_cast<std::ptrdiff_t>(i))};
        Path after{q.arrow(p.arrows[i]).target, p.target,
                   std::vector<ArrowId>(p.arrows.begin() + static_cast<std::ptrdiff_t>(i) + 1, p.arrows.end())};
        Relation piece = multiply(q, single_path(q, q.path_id(after), f),
                                  multiply(q, nu.arrow_images.at(p.arrows[i]), single_path(q, q.path_id(before), f)));
        add_multiple(out, piece, f.one());
    }
    return out;
}

inline Relation apply_derivation(const Quiver& q, const Derivation& nu, const Field& f, const Relation& r) {
    Relation out{r.source, r.target, {}};
    for (const auto& [p, c] : r.terms) {
        add_multiple(out, apply_derivation(q, nu, f, p), c);
    }
    return out;
}

inline void require_nilpotent_shape(const Quiver& q, const Derivation& nu) {
    if (nu.arrow_images.size() != q.arrow_count()) {
        throw DomainError("derivation needs one image per arrow");
    }
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        const Relation& r = nu.arrow_images[a];
        if (r.is_zero()) {
            continue;
        }
        if (r.source != q.arrow(a).source || r.target != q.arrow(a).target) {
            throw DomainError("derivation image of arrow " + q.arrow(a).name + " has the wrong endpoints");
        }
        for (const auto& [p, c] : r.terms) {
            if (q.path(p).length() < 2) {
                throw DomainError("derivation is not nilpotent: image of arrow " + q.arrow(a).name +
                                  " is not strictly longer");
            }
        }
    }
}

/// exp(nu)(alpha) = sum_k nu^k(alpha)/k!, finite since nu raises length.
inline PathAutomorphism exp_derivation(const std::shared_ptr<const Quiver>& q, const Field& f, const Derivation& nu) {
    require_nilpotent_shape(*q, nu);
    std::vector<Relation> images;
    for (ArrowId a = 0; a < q->arrow_count(); ++a) {
        Relation term = single_path(*q, q->arrow_path(a), f);
        Relation sum = term;
        for (long k = 1;; ++k) {
            term = apply_derivation(*q, nu, f, term);
            if (term.is_zero()) {
                break;
            }
            if (f.characteristic() != 0 && static_cast<unsigned long>(k) >= f.characteristic()) {
                throw DomainError("exponential needs 1/" + std::to_string(k) + "! which does not exist in characteristic " +
                                  std::to_string(f.characteristic()));
            }
            term = scaled(term, f.from_integer(k).inverse());
            add_multiple(sum, term, f.one());
        }
        images.push_back(std::move(sum));
    }
    return PathAutomorphism(q, f, std::move(images));
}

/// log(phi)(alpha) = sum_k (-1)^(k+1) (phi - Id)^k(alpha) / k.
inline Derivation log_unipotent(const PathAutomorphism& phi) {
    if (!phi.is_unipotent()) {
        throw DomainError("automorphism is not unipotent");
    }
    const Quiver& q = phi.quiver();
    const Field& f = phi.field();
    Derivation nu;
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        Relation power = single_path(q, q.arrow_path(a), f);
        Relation sum{power.source, power.target, {}};
        for (long k = 1;; ++k) {
            Relation next = phi.apply(power);
            add_multiple(next, power, -f.one());
            power = std::move(next);
            if (power.is_zero()) {
                break;
            }
            if (f.characteristic() != 0 && static_cast<unsigned long>(k) % f.characteristic() == 0) {
                throw DomainError("logarithm needs 1/" + std::to_string(k) + " which does not exist in characteristic " +
                                  std::to_string(f.characteristic()));
            }
            Scalar c = f.from_integer(k % 2 == 1 ? 1 : -1) / f.from_integer(k);
            add_multiple(sum, power, c);
        }
        nu.arrow_images.push_back(std::move(sum));
    }
    return nu;
}

} // namespace bq
