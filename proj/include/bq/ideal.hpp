#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bq/error.hpp"
#include "bq/quiver.hpp"
#include "bq/scalar.hpp"

namespace bq {

/// A linear combination of parallel paths, in normal form: path ids map to
/// nonzero coefficients. The canonical path order is the id order, so the
/// leading path is the largest key.
struct Relation {
    VertexId source = 0;
    VertexId target = 0;
    std::map<PathId, Scalar> terms;

    [[nodiscard]] bool is_zero() const { return terms.empty(); }
    [[nodiscard]] PathId leading() const { return terms.rbegin()->first; }
    [[nodiscard]] const Scalar& leading_coefficient() const { return terms.rbegin()->second; }

    [[nodiscard]] Scalar coefficient(PathId p, const Field& f) const {
        auto it = terms.find(p);
        return it == terms.end() ? f.zero() : it->second;
    }

    [[nodiscard]] std::vector<PathId> support() const {
        std::vector<PathId> s;
        s.reserve(terms.size());
        for (const auto& [p, c] : terms) {
            s.push_back(p);
        }
        return s;
    }

    friend bool operator==(const Relation&, const Relation&) = default;
};

/// r += c * s.
inline void add_multiple(Relation& r, const Relation& s, const Scalar& c) {
    if (c.is_zero()) {
        return;
    }
    for (const auto& [p, coeff] : s.terms) {
        auto it = r.terms.find(p);
        if (it == r.terms.end()) {
            r.terms.emplace(p, c * coeff);
        } else {
            it->second += c * coeff;
            if (it->second.is_zero()) {
                r.terms.erase(it);
            }
        }
    }
}

inline void add_term(Relation& r, PathId p, const Scalar& c) {
    if (c.is_zero()) {
        return;
    }
    auto it = r.terms.find(p);
    if (it == r.terms.end()) {
        r.terms.emplace(p, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) {
            r.terms.erase(it);
        }
    }
}

inline Relation scaled(Relation r, const Scalar& c) {
    if (c.is_zero()) {
        r.terms.clear();
        return r;
    }
    for (auto& [p, coeff] : r.terms) {
        coeff *= c;
    }
    return r;
}

inline Relation single_path(const Quiver& q, PathId p, const Field& f) {
    const Path& path = q.path(p);
    Relation r{path.source, path.target, {}};
    r.terms.emplace(p, f.one());
    return r;
}

/// Builds a relation from (coefficient, path) pairs, merging repeated paths.
inline Relation make_relation(const Quiver& q, const Field& f, const std::vector<std::pair<mpq_class, Path>>& terms) {
    if (terms.empty()) {
        throw DomainError("empty relation");
    }
    Relation r{terms.front().second.source, terms.front().second.target, {}};
    for (const auto& [c, p] : terms) {
        if (p.source != r.source || p.target != r.target) {
            throw DomainError("relation mixes non-parallel paths " + to_string(q, terms.front().second) + " and " +
                              to_string(q, p));
        }
        add_term(r, q.path_id(p), f.from_rational(c));
    }
    return r;
}

/// The product outer * r * inner of paths around a relation.
inline Relation sandwich(const Quiver& q, PathId outer, const Relation& r, PathId inner) {
    Relation out{q.path(inner).source, q.path(outer).target, {}};
    for (const auto& [p, c] : r.terms) {
        auto left = q.compose(p, inner);
        auto both = left ? q.compose(outer, *left) : std::nullopt;
        if (!both) {
            throw DomainError("paths do not compose around relation");
        }
        add_term(out, *both, c);
    }
    return out;
}

/// The product a * b in kQ (b traversed first). Zero when not composable.
inline Relation multiply(const Quiver& q, const Relation& a, const Relation& b) {
    Relation out{b.source, a.target, {}};
    if (b.target != a.source) {
        return out;
    }
    for (const auto& [pa, ca] : a.terms) {
        for (const auto& [pb, cb] : b.terms) {
            add_term(out, *q.compose(pa, pb), ca * cb);
        }
    }
    return out;
}

/// Writes the relation leading term first, e.g. `d*c*b - d*a`.
inline std::string to_string(const Quiver& q, const Relation& r) {
    if (r.is_zero()) {
        return "0";
    }
    std::string s;
    for (auto it = r.terms.rbegin(); it != r.terms.rend(); ++it) {
        const Scalar& c = it->second;
        mpq_class v = c.value();
        bool negative = c.characteristic() == 0 && sgn(v) < 0;
        if (negative) {
            v = -v;
        }
        if (s.empty()) {
            s += negative ? "-" : "";
        } else {
            s += negative ? " - " : " + ";
        }
        if (v != 1) {
            s += v.get_str() + "*";
        }
        s += to_string(q, q.path(it->first));
    }
    return s;
}

/// Reduced row echelon basis of a subspace of a hom-space, rows sorted by
/// increasing leading path. Leading coefficients are 1 and no leading
/// path occurs in another row.
class EchelonBasis {
  public:
    explicit EchelonBasis(Field f = {}) : field_(f) {}

    [[nodiscard]] const std::vector<Relation>& rows() const { return rows_; }
    [[nodiscard]] std::size_t dimension() const { return rows_.size(); }

    /// The remainder of r modulo the subspace.
    [[nodiscard]] Relation reduce(Relation r) const {
        for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
            auto t = r.terms.find(it->leading());
            if (t != r.terms.end()) {
                Scalar c = -t->second;
                add_multiple(r, *it, c);
            }
        }
        return r;
    }

    [[nodiscard]] bool contains(const Relation& r) const { return reduce(r).is_zero(); }

    /// Adds r to the spanning set; returns false if r was already in the span.
    bool insert(const Relation& r) {
        Relation rem = reduce(r);
        if (rem.is_zero()) {
            return false;
        }
        rem = scaled(std::move(rem), rem.leading_coefficient().inverse());
        PathId lead = rem.leading();
        for (Relation& row : rows_) {
            auto t = row.terms.find(lead);
            if (t != row.terms.end()) {
                Scalar c = -t->second;
                add_multiple(row, rem, c);
            }
        }
        auto pos = std::lower_bound(rows_.begin(), rows_.end(), lead,
                                    [](const Relation& row, PathId l) { return row.leading() < l; });
        rows_.insert(pos, std::move(rem));
        return true;
    }

  private:
    Field field_;
    std::vector<Relation> rows_;
};

/// An admissible ideal of kQ, stored as one echelon basis per hom-pair.
class Ideal {
  public:
    Ideal(std::shared_ptr<const Quiver> quiver, Field field, std::vector<Relation> generators, std::string name = "")
        : quiver_(std::move(quiver)), field_(field), generators_(std::move(generators)), name_(std::move(name)) {
        close();
    }

    [[nodiscard]] const Quiver& quiver() const { return *quiver_; }
    [[nodiscard]] const std::shared_ptr<const Quiver>& quiver_ptr() const { return quiver_; }
    [[nodiscard]] const Field& field() const { return field_; }
    [[nodiscard]] const std::vector<Relation>& generators() const { return generators_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Reduced echelon basis of the x -> y component (empty if zero).
    [[nodiscard]] const std::vector<Relation>& groebner_basis(VertexId x, VertexId y) const {
        static const std::vector<Relation> none;
        auto it = spaces_.find({x, y});
        return it == spaces_.end() ? none : it->second.rows();
    }

    [[nodiscard]] std::size_t dimension(VertexId x, VertexId y) const { return groebner_basis(x, y).size(); }

    [[nodiscard]] std::size_t quotient_dimension(VertexId x, VertexId y) const {
        return quiver_->paths_between(x, y).size() - dimension(x, y);
    }

    [[nodiscard]] std::size_t total_dimension() const {
        std::size_t d = 0;
        for (const auto& [key, space] : spaces_) {
            d += space.dimension();
        }
        return d;
    }

    [[nodiscard]] Relation reduce(const Relation& r) const {
        auto it = spaces_.find({r.source, r.target});
        return it == spaces_.end() ? r : it->second.reduce(r);
    }

    [[nodiscard]] bool contains(const Relation& r) const { return reduce(r).is_zero(); }

    [[nodiscard]] bool contains_path(PathId p) const { return contains(single_path(*quiver_, p, field_)); }

    /// Smallest n such that every path of length >= n lies in the ideal.
    [[nodiscard]] std::size_t radical_length() const { return radical_length_; }

    /// The hom-pairs with a nonzero component, in (source, target) order.
    [[nodiscard]] std::vector<std::pair<VertexId, VertexId>> hom_pairs() const {
        std::vector<std::pair<VertexId, VertexId>> out;
        for (const auto& [key, space] : spaces_) {
            if (space.dimension() > 0) {
                out.push_back(key);
            }
        }
        return out;
    }

  private:
    void close() {
        const Quiver& q = *quiver_;
        for (const Relation& g : generators_) {
            if (g.is_zero()) {
                continue;
            }
            for (const auto& [p, c] : g.terms) {
                const Path& path = q.path(p);
                if (path.source != g.source || path.target != g.target) {
                    throw DomainError("generator has a term not parallel to its endpoints");
                }
                if (path.length() < 2) {
                    throw DomainError("generator " + to_string(q, g) + " is not admissible: path " +
                                      to_string(q, path) + " has length " + std::to_string(path.length()));
                }
                if (c.characteristic() != field_.characteristic()) {
                    throw DomainError("generator coefficients are not in characteristic " +
                                      std::to_string(field_.characteristic()));
                }
            }
            // Span of w * g * w' over all paths w' ending at s(g), w starting at t(g).
            for (PathId inner : q.paths_to(g.source)) {
                for (PathId outer : q.paths_from(g.target)) {
                    Relation r = sandwich(q, outer, g, inner);
                    auto key = std::make_pair(r.source, r.target);
                    auto it = spaces_.find(key);
                    if (it == spaces_.end()) {
                        it = spaces_.emplace(key, EchelonBasis(field_)).first;
                    }
                    it->second.insert(r);
                }
            }
        }
        radical_length_ = 2;
        for (PathId p = 0; p < q.path_count(); ++p) {
            std::size_t len = q.path(p).length();
            if (len + 1 > radical_length_ && !contains_path(p)) {
                radical_length_ = len + 1;
            }
        }
    }

    std::shared_ptr<const Quiver> quiver_;
    Field field_;
    std::vector<Relation> generators_;
    std::string name_;
    std::map<std::pair<VertexId, VertexId>, EchelonBasis> spaces_;
    std::size_t radical_length_ = 2;
};

/// Two-sided ideal generated by `generators`, with echelon bases per hom-pair.
inline Ideal close_ideal(std::shared_ptr<const Quiver> q, Field field, std::vector<Relation> generators,
                         std::string name = "") {
    return Ideal(std::move(q), field, std::move(generators), std::move(name));
}

inline const std::vector<Relation>& groebner_basis(const Ideal& ideal, VertexId x, VertexId y) {
    return ideal.groebner_basis(x, y);
}

/// The union of all Groebner bases: a generating set of minimal relations.
inline std::vector<Relation> minimal_relations(const Ideal& ideal) {
    std::vector<Relation> out;
    for (auto [x, y] : ideal.hom_pairs()) {
        const auto& basis = ideal.groebner_basis(x, y);
        out.insert(out.end(), basis.begin(), basis.end());
    }
    return out;
}

namespace detail {

inline Relation restrict_to(const Relation& r, const std::vector<PathId>& support, std::uint32_t mask) {
    Relation out{r.source, r.target, {}};
    for (std::size_t i = 0; i < support.size(); ++i) {
        if ((mask >> i) & 1U) {
            out.terms.emplace(support[i], r.terms.at(support[i]));
        }
    }
    return out;
}

} // namespace detail

/// Supports up to this size are checked for minimality by subset enumeration.
inline constexpr std::size_t minimality_brute_force_limit = 12;

/// Finds a nonempty proper subset S of supp(r) whose restriction lies in the
/// ideal, preferring the smallest. Returns 0 when r is minimal (or too large to check).
inline std::uint32_t find_splitting_subset(const Ideal& ideal, const Relation& r) {
    auto support = r.support();
    const std::size_t n = support.size();
    if (n < 2 || n > minimality_brute_force_limit) {
        return 0;
    }
    std::uint32_t best = 0;
    int best_size = static_cast<int>(n);
    const std::uint32_t full = (1U << n) - 1U;
    // Subsets containing element 0 suffice: S splits iff its complement does.
    for (std::uint32_t mask = 1; mask < full; mask += 2) {
        int size = std::popcount(mask);
        int smaller = std::min(size, static_cast<int>(n) - size);
        if (smaller >= best_size) {
            continue;
        }
        if (ideal.contains(detail::restrict_to(r, support, mask))) {
            best = size <= static_cast<int>(n) - size ? mask : (full & ~mask);
            best_size = smaller;
        }
    }
    return best;
}

/// True iff r is a nonzero element of the ideal that does not split into two
/// members with disjoint supports. Supports larger than the brute force
/// limit are assumed minimal when r is a Groebner basis element.
inline bool is_minimal(const Ideal& ideal, const Relation& r) {
    if (r.is_zero() || !ideal.contains(r)) {
        return false;
    }
    return find_splitting_subset(ideal, r) == 0;
}

/// Writes r (an element of the ideal) as a sum of minimal relations with
/// pairwise disjoint supports. Components of the support-overlap graph of the
/// Groebner basis elements used by r give the first split; each part is then
/// refined by subset search.
inline std::vector<Relation> decompose_minimal(const Ideal& ideal, const Relation& r) {
    if (r.is_zero()) {
        return {};
    }
    if (!ideal.contains(r)) {
        throw DomainError("relation " + to_string(ideal.quiver(), r) + " is not in the ideal");
    }
    const auto& basis = ideal.groebner_basis(r.source, r.target);
    // r = sum c_j g_j where c_j is the coefficient of lead(g_j) in r.
    std::vector<std::pair<Scalar, const Relation*>> used;
    for (const Relation& g : basis) {
        auto it = r.terms.find(g.leading());
        if (it != r.terms.end()) {
            used.emplace_back(it->second, &g);
        }
    }
    std::vector<std::size_t> parent(used.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t i = 0; i < used.size(); ++i) {
        for (std::size_t j = i + 1; j < used.size(); ++j) {
            bool overlap = std::any_of(used[i].second->terms.begin(), used[i].second->terms.end(),
                                       [&](const auto& t) { return used[j].second->terms.count(t.first) != 0; });
            if (overlap) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::map<std::size_t, Relation> parts;
    for (std::size_t i = 0; i < used.size(); ++i) {
        auto [it, fresh] = parts.try_emplace(find(i), Relation{r.source, r.target, {}});
        add_multiple(it->second, *used[i].second, used[i].first);
    }
    std::vector<Relation> pending;
    for (auto& [root, part] : parts) {
        if (!part.is_zero()) {
            pending.push_back(std::move(part));
        }
    }
    std::vector<Relation> out;
    while (!pending.empty()) {
        Relation cur = std::move(pending.back());
        pending.pop_back();
        std::uint32_t mask = find_splitting_subset(ideal, cur);
        if (mask == 0) {
            out.push_back(std::move(cur));
            continue;
        }
        auto support = cur.support();
        const std::uint32_t full = (1U << support.size()) - 1U;
        pending.push_back(detail::restrict_to(cur, support, mask));
        pending.push_back(detail::restrict_to(cur, support, full & ~mask));
    }
    std::sort(out.begin(), out.end(), [](const Relation& a, const Relation& b) { return a.leading() < b.leading(); });
    return out;
}

/// Classes of the support equivalence on the paths x -> y: paths sharing a
/// Groebner basis element, closed transitively. Classes are ordered by their
/// smallest path.
inline std::vector<std::vector<PathId>> support_equivalence(const Ideal& ideal, VertexId x, VertexId y) {
    const auto& paths = ideal.quiver().paths_between(x, y);
    std::map<PathId, PathId> parent;
    for (PathId p : paths) {
        parent[p] = p;
    }
    auto find = [&](PathId p) {
        while (parent[p] != p) {
            p = parent[p] = parent[parent[p]];
        }
        return p;
    };
    for (const Relation& g : ideal.groebner_basis(x, y)) {
        PathId first = g.terms.begin()->first;
        for (const auto& [p, c] : g.terms) {
            parent[find(p)] = find(first);
        }
    }
    std::map<PathId, std::vector<PathId>> classes;
    for (PathId p : paths) {
        classes[find(p)].push_back(p);
    }
    std::vector<std::vector<PathId>> out;
    for (auto& [root, members] : classes) {
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every arrow's hom-space has a one-dimensional quotient.
inline bool is_constricted(const Ideal& ideal) {
    const Quiver& q = ideal.quiver();
    return std::all_of(q.arrows().begin(), q.arrows().end(),
                       [&](const Arrow& a) { return ideal.quotient_dimension(a.source, a.target) == 1; });
}

inline void require_compatible(const Ideal& a, const Ideal& b) {
    if (!(a.quiver() == b.quiver())) {
        throw DomainError("ideals live on different quivers");
    }
    if (a.field() != b.field()) {
        throw DomainError("ideals are over different fields (characteristic " +
                          std::to_string(a.field().characteristic()) + " vs " +
                          std::to_string(b.field().characteristic()) + ")");
    }
}

/// Equal iff every hom-pair has the same Groebner basis.
inline bool ideals_equal(const Ideal& a, const Ideal& b) {
    require_compatible(a, b);
    const Quiver& q = a.quiver();
    for (VertexId x = 0; x < q.vertex_count(); ++x) {
        for (VertexId y = 0; y < q.vertex_count(); ++y) {
            if (a.groebner_basis(x, y) != b.groebner_basis(x, y)) {
                return false;
            }
        }
    }
    return true;
}

/// Hash of the Groebner data, consistent with ideals_equal.
inline std::size_t ideal_hash(const Ideal& ideal) {
    std::size_t h = 1469598103934665603ULL;
    auto mix = [&](std::size_t v) { h = (h ^ v) * 1099511628211ULL; };
    for (auto [x, y] : ideal.hom_pairs()) {
        mix(x);
        mix(y);
        for (const Relation& r : ideal.groebner_basis(x, y)) {
            for (const auto& [p, c] : r.terms) {
                mix(p);
                mix(c.hash());
            }
        }
    }
    return h;
}

} // namespace bq
