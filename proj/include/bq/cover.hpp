#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bq/error.hpp"
#include "bq/finite_group.hpp"
#include "bq/gamma.hpp"
#include "bq/homotopy.hpp"
#include "bq/ideal.hpp"
#include "bq/transform.hpp"

namespace bq {

/// A cover automorphism given by its vertex and arrow permutations.
/// Entries are npos where the image leaves a truncated cover.
struct DeckTransformation {
    std::string label;
    std::vector<VertexId> vertex_map;
    std::vector<ArrowId> arrow_map;

    friend bool operator==(const DeckTransformation&, const DeckTransformation&) = default;
};

/// A bound quiver (total quiver with ideal) mapped onto a base bound quiver.
struct CoverQuiver {
    std::shared_ptr<const Ideal> total;
    std::shared_ptr<const Ideal> base;
    std::vector<VertexId> vertex_projection;
    std::vector<ArrowId> arrow_projection;
    std::vector<DeckTransformation> action;
    bool complete = true;
    /// Ball radius for universal covers, 0 otherwise.
    std::size_t radius = 0;
    /// Universal covers only: BFS depth and a base walk from the base point per vertex.
    std::vector<std::size_t> depth;
    std::vector<Walk> representatives;
    HomotopyPtr relation;
    /// Total vertex used as origin (lies over the base point).
    VertexId base_point = 0;
    std::string kind;

    [[nodiscard]] const Quiver& total_quiver() const { return total->quiver(); }
    [[nodiscard]] const Quiver& base_quiver() const { return base->quiver(); }

    [[nodiscard]] std::vector<VertexId> fiber(VertexId x) const {
        std::vector<VertexId> out;
        for (VertexId v = 0; v < vertex_projection.size(); ++v) {
            if (vertex_projection[v] == x) {
                out.push_back(v);
            }
        }
        return out;
    }

    /// Whether the neighborhood needed by the covering checks lies inside the cover.
    [[nodiscard]] bool is_interior(VertexId v) const {
        if (complete) {
            return true;
        }
        if (depth.empty()) {
            return false;
        }
        return depth[v] + base_quiver().longest_path_length() <= radius;
    }

    [[nodiscard]] std::optional<ArrowId> lift_arrow_from(VertexId v, ArrowId alpha) const {
        for (ArrowId a : total_quiver().outgoing(v)) {
            if (arrow_projection[a] == alpha) {
                return a;
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] std::optional<ArrowId> lift_arrow_to(VertexId v, ArrowId alpha) const {
        for (ArrowId a : total_quiver().incoming(v)) {
            if (arrow_projection[a] == alpha) {
                return a;
            }
        }
        return std::nullopt;
    }

    /// Lift of a base path starting at v.
    [[nodiscard]] std::optional<Path> lift_path(VertexId v, const Path& p) const {
        Path out{v, v, {}};
        for (ArrowId a : p.arrows) {
            auto b = lift_arrow_from(out.target, a);
            if (!b) {
                return std::nullopt;
            }
            out.arrows.push_back(*b);
            out.target = total_quiver().arrow(*b).target;
        }
        return out;
    }

    /// Lift of a base path ending at v.
    [[nodiscard]] std::optional<Path> lift_path_to(VertexId v, const Path& p) const {
        std::vector<ArrowId> rev;
        VertexId at = v;
        for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) {
            auto b = lift_arrow_to(at, *it);
            if (!b) {
                return std::nullopt;
            }
            rev.push_back(*b);
            at = total_quiver().arrow(*b).source;
        }
        return Path{at, v, std::vector<ArrowId>(rev.rbegin(), rev.rend())};
    }

    /// End of the lift of a base walk starting at v.
    [[nodiscard]] std::optional<VertexId> lift_walk_end(VertexId v, const Walk& w) const {
        VertexId at = v;
        for (const Letter& l : w.letters) {
            auto b = l.inverse ? lift_arrow_to(at, l.arrow) : lift_arrow_from(at, l.arrow);
            if (!b) {
                return std::nullopt;
            }
            at = l.inverse ? total_quiver().arrow(*b).source : total_quiver().arrow(*b).target;
        }
        return at;
    }

    /// Base relation image of a total relation.
    [[nodiscard]] Relation project(const Relation& r) const {
        const Quiver& tq = total_quiver();
        const Quiver& bq = base_quiver();
        Relation out{vertex_projection[r.source], vertex_projection[r.target], {}};
        for (const auto& [p, c] : r.terms) {
            const Path& path = tq.path(p);
            Path image{vertex_projection[path.source], vertex_projection[path.target], {}};
            for (ArrowId a : path.arrows) {
                image.arrows.push_back(arrow_projection[a]);
            }
            add_term(out, bq.path_id(image), c);
        }
        return out;
    }
};

using CoverPtr = std::shared_ptr<const CoverQuiver>;

namespace detail {

/// Lifts of every minimal relation of `base` at every total vertex where the lift exists.
inline std::vector<Relation> lifted_relations(const CoverQuiver& cov, const Quiver& total) {
    std::vector<Relation> gens;
    const Quiver& bq = cov.base_quiver();
    for (VertexId v = 0; v < total.vertex_count(); ++v) {
        VertexId x = cov.vertex_projection[v];
        for (VertexId y = 0; y < bq.vertex_count(); ++y) {
            for (const Relation& r : cov.base->groebner_basis(x, y)) {
                Relation lift{v, v, {}};
                bool ok = true;
                std::optional<VertexId> end;
                for (const auto& [p, c] : r.terms) {
                    auto lp = cov.lift_path(v, bq.path(p));
                    if (!lp || (end && *end != lp->target)) {
                        ok = false;
                        break;
                    }
                    end = lp->target;
                    add_term(lift, total.path_id(*lp), c);
                }
                if (ok && end) {
                    lift.target = *end;
                    gens.push_back(std::move(lift));
                }
            }
        }
    }
    return gens;
}

/// Builds the total quiver from (name, projection) tables and the arrow
/// table, then attaches the lifted ideal.
inline void finish_cover(CoverQuiver& cov, const std::string& name, std::vector<std::string> vertex_names,
                         std::vector<Arrow> arrows) {
    auto total = std::make_shared<const Quiver>(name, std::move(vertex_names), std::move(arrows));
    // lift_path needs the total quiver, so attach a zero ideal first.
    cov.total = std::make_shared<const Ideal>(total, cov.base->field(), std::vector<Relation>{});
    auto gens = lifted_relations(cov, *total);
    cov.total = std::make_shared<const Ideal>(total, cov.base->field(), std::move(gens));
}

} // namespace detail

/// Universal cover: vertices are homotopy classes of walks from x0 of
/// length at most `radius`, arrows the pairs (alpha, [w]).
inline CoverQuiver universal_cover(const std::shared_ptr<const Ideal>& ideal, VertexId x0, std::size_t radius = 0,
                                   HomotopyOptions opt = {}, std::size_t vertex_limit = 4000) {
    const Quiver& q = ideal->quiver();
    if (radius == 0) {
        radius = 2 * q.arrow_count() + 2;
    }
    opt.base_point = x0;
    HomotopyPtr h = homotopy_relation(ideal, opt);
    std::vector<Walk> reps{trivial_walk(x0)};
    std::vector<std::size_t> depth{0};
    std::map<std::pair<VertexId, IntVector>, std::vector<std::size_t>> buckets;
    auto key_of = [&](const Walk& w) { return std::make_pair(w.target, h->abelian_image(h->word_of(w))); };
    buckets[key_of(reps[0])].push_back(0);
    auto locate = [&](const Walk& w) -> std::optional<std::size_t> {
        auto it = buckets.find(key_of(w));
        if (it == buckets.end()) {
            return std::nullopt;
        }
        for (std::size_t c : it->second) {
            HomotopyDecision d = h->decide(w, reps[c]);
            if (d.verdict == Verdict::Homotopic) {
                return c;
            }
            if (d.verdict == Verdict::Unknown) {
                throw DomainError("cannot decide whether " + to_string(q, w) + " and " + to_string(q, reps[c]) +
                                  " are homotopic");
            }
        }
        return std::nullopt;
    };
    std::map<std::pair<ArrowId, std::size_t>, std::size_t> arrows; // (alpha, source class) -> target class
    bool truncated = false;
    std::deque<std::size_t> todo{0};
    while (!todo.empty()) {
        std::size_t c = todo.front();
        todo.pop_front();
        VertexId at = reps[c].target;
        for (ArrowId a = 0; a < q.arrow_count(); ++a) {
            const Arrow& arr = q.arrow(a);
            for (bool inv : {false, true}) {
                if ((inv ? arr.target : arr.source) != at) {
                    continue;
                }
                Walk w = walk_reduce(then(reps[c], Walk{at, inv ? arr.source : arr.target, {Letter{a, inv}}}));
                auto found = locate(w);
                if (!found) {
                    if (depth[c] + 1 > radius || reps.size() >= vertex_limit) {
                        truncated = true;
                        continue;
                    }
                    found = reps.size();
                    reps.push_back(w);
                    depth.push_back(depth[c] + 1);
                    buckets[key_of(w)].push_back(*found);
                    todo.push_back(*found);
                }
                if (inv) {
                    arrows[{a, *found}] = c;
                } else {
                    arrows[{a, c}] = *found;
                }
            }
        }
    }
    CoverQuiver cov;
    cov.base = ideal;
    cov.complete = !truncated;
    cov.radius = radius;
    cov.depth = depth;
    cov.representatives = reps;
    cov.relation = h;
    cov.base_point = 0;
    cov.kind = "universal";
    std::vector<std::string> names;
    for (std::size_t c = 0; c < reps.size(); ++c) {
        names.push_back("[w" + std::to_string(c) + "]");
        cov.vertex_projection.push_back(reps[c].target);
    }
    std::vector<Arrow> tarrows;
    std::map<std::pair<ArrowId, std::size_t>, ArrowId> arrow_index;
    for (const auto& [key, tgt] : arrows) {
        arrow_index[key] = tarrows.size();
        tarrows.push_back(Arrow{q.arrow(key.first).name + "[w" + std::to_string(key.second) + "]", key.second, tgt});
        cov.arrow_projection.push_back(key.first);
    }
    detail::finish_cover(cov, q.name() + "_cover", std::move(names), std::move(tarrows));
    // Deck generators: one per chord, g.[w] = [gamma^-1 w].
    const SpanningTree& tree = h->tree();
    for (ArrowId chord : tree.chords) {
        const Arrow& arr = q.arrow(chord);
        Walk gamma = walk_reduce(then(then(tree.tree_walk[arr.source], Walk{arr.source, arr.target, {Letter{chord, false}}}),
                                      inverse(tree.tree_walk[arr.target])));
        DeckTransformation g;
        g.label = arr.name;
        for (std::size_t c = 0; c < reps.size(); ++c) {
            auto img = locate(walk_reduce(then(inverse(gamma), reps[c])));
            if (!img && cov.complete) {
                throw Error("internal: deck transformation leaves a complete cover");
            }
            g.vertex_map.push_back(img ? *img : npos);
        }
        for (const auto& [key, idx] : arrow_index) {
            VertexId s = g.vertex_map[key.second];
            auto it = s == npos ? arrow_index.end() : arrow_index.find({key.first, s});
            g.arrow_map.push_back(it == arrow_index.end() ? npos : it->second);
        }
        cov.action.push_back(std::move(g));
    }
    return cov;
}

inline CoverQuiver universal_cover(const Ideal& ideal, VertexId x0, std::size_t radius = 0, HomotopyOptions opt = {}) {
    return universal_cover(std::make_shared<const Ideal>(ideal), x0, radius, std::move(opt));
}

/// Class of a base walk from the base point inside a universal cover.
inline std::optional<VertexId> locate_walk(const CoverQuiver& cov, const Walk& w) {
    if (!cov.relation || cov.representatives.empty()) {
        throw DomainError("cover does not carry walk representatives");
    }
    for (VertexId v : cov.fiber(w.target)) {
        HomotopyDecision d = cov.relation->decide(w, cov.representatives[v]);
        if (d.verdict == Verdict::Homotopic) {
            return v;
        }
        if (d.verdict == Verdict::Unknown) {
            throw DomainError("cannot place walk " + to_string(cov.base_quiver(), w) + " in the cover");
        }
    }
    return std::nullopt;
}

/// The cover given by the identity map.
inline CoverQuiver identity_cover(const std::shared_ptr<const Ideal>& ideal) {
    CoverQuiver cov;
    cov.base = ideal;
    cov.total = ideal;
    const Quiver& q = ideal->quiver();
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        cov.vertex_projection.push_back(v);
    }
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        cov.arrow_projection.push_back(a);
    }
    cov.kind = "identity";
    return cov;
}

inline std::size_t path_degree(const Grading& g, const Path& p) {
    std::size_t d = g.group.identity();
    for (ArrowId a : p.arrows) {
        d = g.group.multiply(g.degree.at(a), d);
    }
    return d;
}

/// Smash product: vertices (x, s), an arrow alpha from (x, s) to
/// (y, s * deg(alpha)^-1); G acts by left multiplication on the second slot.
inline CoverQuiver smash_product(const std::shared_ptr<const Ideal>& ideal, const Grading& grading) {
    const Quiver& q = ideal->quiver();
    const FiniteGroup& G = grading.group;
    if (grading.degree.size() != q.arrow_count()) {
        throw DomainError("grading needs one degree per arrow");
    }
    for (const Relation& r : minimal_relations(*ideal)) {
        std::optional<std::size_t> deg;
        for (const auto& [p, c] : r.terms) {
            std::size_t d = path_degree(grading, q.path(p));
            if (deg && *deg != d) {
                throw DomainError("minimal relation " + to_string(q, r) + " is not homogeneous");
            }
            deg = d;
        }
    }
    const std::size_t n = G.order();
    auto vid = [&](VertexId x, std::size_t s) { return x * n + s; };
    CoverQuiver cov;
    cov.base = ideal;
    cov.kind = "smash";
    std::vector<std::string> names;
    for (VertexId x = 0; x < q.vertex_count(); ++x) {
        for (std::size_t s = 0; s < n; ++s) {
            names.push_back(q.vertex_name(x) + "@" + G.label(s));
            cov.vertex_projection.push_back(x);
        }
    }
    std::vector<Arrow> arrows;
    std::vector<std::vector<ArrowId>> arrow_at(q.arrow_count(), std::vector<ArrowId>(n));
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arr = q.arrow(a);
        for (std::size_t s = 0; s < n; ++s) {
            std::size_t t = G.multiply(s, G.inverse(grading.degree[a]));
            arrow_at[a][s] = arrows.size();
            arrows.push_back(Arrow{arr.name + "@" + G.label(s), vid(arr.source, s), vid(arr.target, t)});
            cov.arrow_projection.push_back(a);
        }
    }
    cov.base_point = vid(0, G.identity());
    for (std::size_t g = 0; g < G.generators().size(); ++g) {
        DeckTransformation d;
        d.label = "g" + std::to_string(g + 1);
        std::size_t ge = G.generator(g);
        for (VertexId x = 0; x < q.vertex_count(); ++x) {
            for (std::size_t s = 0; s < n; ++s) {
                d.vertex_map.push_back(vid(x, G.multiply(ge, s)));
            }
        }
        d.arrow_map.resize(arrows.size());
        for (ArrowId a = 0; a < q.arrow_count(); ++a) {
            for (std::size_t s = 0; s < n; ++s) {
                d.arrow_map[arrow_at[a][s]] = arrow_at[a][G.multiply(ge, s)];
            }
        }
        cov.action.push_back(std::move(d));
    }
    detail::finish_cover(cov, q.name() + "_smash", std::move(names), std::move(arrows));
    return cov;
}

/// Cover with `sheets` copies of every vertex; arrow alpha sends sheet i to
/// sheet perms[alpha][i]. Minimal relations must induce one permutation.
inline CoverQuiver cover_from_permutations(const std::shared_ptr<const Ideal>& ideal, std::size_t sheets,
                                           const std::vector<Permutation>& perms) {
    const Quiver& q = ideal->quiver();
    if (perms.size() != q.arrow_count()) {
        throw DomainError("need one permutation per arrow");
    }
    for (const auto& p : perms) {
        if (p.size() != sheets || !is_permutation(p)) {
            throw DomainError("arrow permutation is not a permutation of the sheets");
        }
    }
    auto path_perm = [&](const Path& p) {
        Permutation r(sheets);
        for (std::size_t i = 0; i < sheets; ++i) {
            r[i] = i;
        }
        for (ArrowId a : p.arrows) {
            r = perm_then(r, perms[a]);
        }
        return r;
    };
    for (const Relation& r : minimal_relations(*ideal)) {
        std::optional<Permutation> first;
        for (const auto& [p, c] : r.terms) {
            Permutation pp = path_perm(q.path(p));
            if (first && *first != pp) {
                throw DomainError("minimal relation " + to_string(q, r) + " does not lift to every sheet");
            }
            first = pp;
        }
    }
    CoverQuiver cov;
    cov.base = ideal;
    cov.kind = "permutation";
    std::vector<std::string> names;
    for (VertexId x = 0; x < q.vertex_count(); ++x) {
        for (std::size_t i = 0; i < sheets; ++i) {
            names.push_back(q.vertex_name(x) + "#" + std::to_string(i));
            cov.vertex_projection.push_back(x);
        }
    }
    std::vector<Arrow> arrows;
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arr = q.arrow(a);
        for (std::size_t i = 0; i < sheets; ++i) {
            arrows.push_back(Arrow{arr.name + "#" + std::to_string(i), arr.source * sheets + i,
                                   arr.target * sheets + perms[a][i]});
            cov.arrow_projection.push_back(a);
        }
    }
    detail::finish_cover(cov, q.name() + "_sheets" + std::to_string(sheets), std::move(names), std::move(arrows));
    return cov;
}

/// Removes one total arrow (relations through it are dropped). Used to
/// produce broken covers.
inline CoverQuiver delete_arrow(const CoverQuiver& cov, ArrowId doomed) {
    const Quiver& tq = cov.total_quiver();
    CoverQuiver out = cov;
    std::vector<Arrow> arrows;
    std::vector<ArrowId> renumber(tq.arrow_count(), npos);
    out.arrow_projection.clear();
    for (ArrowId a = 0; a < tq.arrow_count(); ++a) {
        if (a != doomed) {
            renumber[a] = arrows.size();
            arrows.push_back(tq.arrow(a));
            out.arrow_projection.push_back(cov.arrow_projection[a]);
        }
    }
    auto q = std::make_shared<const Quiver>(tq.name(), tq.vertex_names(), arrows);
    std::vector<Relation> gens;
    for (const Relation& r : minimal_relations(*cov.total)) {
        Relation nr{r.source, r.target, {}};
        bool ok = true;
        for (const auto& [p, c] : r.terms) {
            Path np = tq.path(p);
            for (ArrowId& a : np.arrows) {
                if (renumber[a] == npos) {
                    ok = false;
                }
                a = renumber[a];
            }
            if (!ok) {
                break;
            }
            add_term(nr, q->path_id(np), c);
        }
        if (ok) {
            gens.push_back(std::move(nr));
        }
    }
    out.total = std::make_shared<const Ideal>(q, cov.base->field(), std::move(gens));
    for (DeckTransformation& d : out.action) {
        std::vector<ArrowId> m;
        for (ArrowId a = 0; a < tq.arrow_count(); ++a) {
            if (a != doomed) {
                ArrowId img = d.arrow_map[a];
                m.push_back(img == npos ? npos : renumber[img]);
            }
        }
        d.arrow_map = std::move(m);
    }
    return out;
}

struct CoveringReport {
    std::vector<std::string> violations;
    std::size_t checked_vertices = 0;
    std::size_t skipped_vertices = 0;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Covering conditions at every interior vertex: nonempty fibers, bijections
/// on outgoing and incoming arrows, and lifting of minimal relations at
/// both ends. Also checks projection and action compatibility.
inline CoveringReport check_covering(const CoverQuiver& cov) {
    CoveringReport rep;
    const Quiver& tq = cov.total_quiver();
    const Quiver& bq = cov.base_quiver();
    auto vname = [&](VertexId v) { return tq.vertex_name(v); };
    if (cov.vertex_projection.size() != tq.vertex_count() || cov.arrow_projection.size() != tq.arrow_count()) {
        rep.violations.push_back("projection tables do not match the total quiver");
        return rep;
    }
    for (ArrowId a = 0; a < tq.arrow_count(); ++a) {
        const Arrow& ta = tq.arrow(a);
        const Arrow& ba = bq.arrow(cov.arrow_projection[a]);
        if (cov.vertex_projection[ta.source] != ba.source || cov.vertex_projection[ta.target] != ba.target) {
            rep.violations.push_back("arrow " + ta.name + " does not project onto " + ba.name);
        }
    }
    if (!rep.ok()) {
        return rep;
    }
    for (VertexId x = 0; x < bq.vertex_count(); ++x) {
        if (cov.fiber(x).empty()) {
            rep.violations.push_back("empty fiber over " + bq.vertex_name(x));
        }
    }
    for (VertexId v = 0; v < tq.vertex_count(); ++v) {
        if (!cov.is_interior(v)) {
            ++rep.skipped_vertices;
            continue;
        }
        ++rep.checked_vertices;
        VertexId x = cov.vertex_projection[v];
        for (bool out : {true, false}) {
            std::vector<ArrowId> seen;
            for (ArrowId a : out ? tq.outgoing(v) : tq.incoming(v)) {
                seen.push_back(cov.arrow_projection[a]);
            }
            std::vector<ArrowId> want = out ? bq.outgoing(x) : bq.incoming(x);
            std::sort(seen.begin(), seen.end());
            std::sort(want.begin(), want.end());
            if (seen != want) {
                rep.violations.push_back(std::string(out ? "outgoing" : "incoming") + " arrows at " + vname(v) +
                                         " are not in bijection with those at " + bq.vertex_name(x));
            }
        }
        for (VertexId y = 0; y < bq.vertex_count(); ++y) {
            for (bool forward : {true, false}) {
                const auto& basis = forward ? cov.base->groebner_basis(x, y) : cov.base->groebner_basis(y, x);
                for (const Relation& r : basis) {
                    Relation lift{v, v, {}};
                    std::optional<VertexId> other;
                    bool ok = true;
                    for (const auto& [p, c] : r.terms) {
                        auto lp = forward ? cov.lift_path(v, bq.path(p)) : cov.lift_path_to(v, bq.path(p));
                        VertexId end = lp ? (forward ? lp->target : lp->source) : npos;
                        if (!lp || (other && *other != end)) {
                            ok = false;
                            break;
                        }
                        other = end;
                        add_term(lift, tq.path_id(*lp), c);
                    }
                    if (ok && other) {
                        (forward ? lift.target : lift.source) = *other;
                        ok = cov.total->contains(lift);
                    }
                    if (!ok) {
                        rep.violations.push_back("minimal relation " + to_string(bq, r) + " does not lift " +
                                                 (forward ? "from " : "to ") + vname(v));
                    }
                }
            }
        }
    }
    for (const Relation& r : minimal_relations(*cov.total)) {
        if (!cov.base->contains(cov.project(r))) {
            rep.violations.push_back("relation " + to_string(tq, r) + " does not project into the base ideal");
        }
    }
    for (const DeckTransformation& g : cov.action) {
        for (VertexId v = 0; v < g.vertex_map.size(); ++v) {
            VertexId w = g.vertex_map[v];
            if (w == npos) {
                continue;
            }
            if (cov.vertex_projection[w] != cov.vertex_projection[v]) {
                rep.violations.push_back("action " + g.label + " moves " + vname(v) + " out of its fiber");
            }
        }
        bool identity = true;
        bool fixes = false;
        for (VertexId v = 0; v < g.vertex_map.size(); ++v) {
            if (g.vertex_map[v] != npos && g.vertex_map[v] != v) {
                identity = false;
            }
            if (g.vertex_map[v] == v) {
                fixes = true;
            }
        }
        if (!identity && fixes) {
            rep.violations.push_back("action " + g.label + " is not free");
        }
    }
    return rep;
}

enum class GaloisStatus { Galois, NotGalois, Truncated };

inline std::string to_string(GaloisStatus s) {
    switch (s) {
    case GaloisStatus::Galois:
        return "Galois";
    case GaloisStatus::NotGalois:
        return "NotGalois";
    default:
        return "Truncated";
    }
}

struct GaloisReport {
    GaloisStatus status = GaloisStatus::Truncated;
    std::size_t group_order = 0;
    std::size_t fiber_size = 0;
    std::optional<VertexId> witness;
    std::vector<DeckTransformation> automorphisms;
    std::string message;
};

namespace detail {

/// The cover automorphism sending `from` to `to`, if any. Rigidity: such a
/// map is forced along arrows, so one BFS decides it.
inline std::optional<DeckTransformation> extend_automorphism(const CoverQuiver& cov, VertexId from, VertexId to) {
    const Quiver& tq = cov.total_quiver();
    DeckTransformation d;
    d.vertex_map.assign(tq.vertex_count(), npos);
    d.arrow_map.assign(tq.arrow_count(), npos);
    d.vertex_map[from] = to;
    std::deque<VertexId> todo{from};
    while (!todo.empty()) {
        VertexId v = todo.front();
        todo.pop_front();
        VertexId w = d.vertex_map[v];
        for (bool out : {true, false}) {
            for (ArrowId a : out ? tq.outgoing(v) : tq.incoming(v)) {
                ArrowId alpha = cov.arrow_projection[a];
                auto b = out ? cov.lift_arrow_from(w, alpha) : cov.lift_arrow_to(w, alpha);
                if (!b) {
                    return std::nullopt;
                }
                if (d.arrow_map[a] != npos && d.arrow_map[a] != *b) {
                    return std::nullopt;
                }
                d.arrow_map[a] = *b;
                VertexId nv = out ? tq.arrow(a).target : tq.arrow(a).source;
                VertexId nw = out ? tq.arrow(*b).target : tq.arrow(*b).source;
                if (d.vertex_map[nv] == npos) {
                    d.vertex_map[nv] = nw;
                    todo.push_back(nv);
                } else if (d.vertex_map[nv] != nw) {
                    return std::nullopt;
                }
            }
        }
    }
    std::vector<bool> hit_v(tq.vertex_count(), false);
    for (VertexId v : d.vertex_map) {
        if (v == npos || hit_v[v]) {
            return std::nullopt;
        }
        hit_v[v] = true;
    }
    std::vector<bool> hit_a(tq.arrow_count(), false);
    for (ArrowId a : d.arrow_map) {
        if (a == npos || hit_a[a]) {
            return std::nullopt;
        }
        hit_a[a] = true;
    }
    // The ideal must be preserved.
    for (const Relation& r : minimal_relations(*cov.total)) {
        Relation img{d.vertex_map[r.source], d.vertex_map[r.target], {}};
        for (const auto& [p, c] : r.terms) {
            Path np = tq.path(p);
            np.source = d.vertex_map[np.source];
            np.target = d.vertex_map[np.target];
            for (ArrowId& a : np.arrows) {
                a = d.arrow_map[a];
            }
            add_term(img, tq.path_id(np), c);
        }
        if (!cov.total->contains(img)) {
            return std::nullopt;
        }
    }
    d.label = tq.vertex_name(from) + "->" + tq.vertex_name(to);
    return d;
}

} // namespace detail

/// Computes Aut(p) by extending each choice of image of the base point's
/// lift; Galois iff every fiber element is reached.
inline GaloisReport is_galois(const CoverQuiver& cov) {
    GaloisReport r;
    if (!cov.complete) {
        r.status = GaloisStatus::Truncated;
        r.message = "cover is truncated at radius " + std::to_string(cov.radius);
        return r;
    }
    const Quiver& tq = cov.total_quiver();
    if (!tq.is_connected()) {
        r.status = GaloisStatus::NotGalois;
        r.message = "total quiver is not connected";
        return r;
    }
    VertexId x0 = cov.base_point;
    auto fiber = cov.fiber(cov.vertex_projection[x0]);
    r.fiber_size = fiber.size();
    for (VertexId y : fiber) {
        if (auto d = detail::extend_automorphism(cov, x0, y)) {
            r.automorphisms.push_back(std::move(*d));
        } else if (!r.witness) {
            r.witness = y;
        }
    }
    r.group_order = r.automorphisms.size();
    if (r.group_order == fiber.size()) {
        r.status = GaloisStatus::Galois;
        r.message = "group order " + std::to_string(r.group_order);
    } else {
        r.status = GaloisStatus::NotGalois;
        r.message = "no automorphism reaches " + tq.vertex_name(*r.witness) + "; Aut(p) has order " +
                    std::to_string(r.group_order) + " but the fiber has " + std::to_string(fiber.size());
    }
    return r;
}

/// Kernel of the abelianized map pi_1(I) ->> pi_1(J) induced by the identity on walks.
struct KernelInfo {
    std::size_t free_rank = 0;
    /// Order when finite (free_rank == 0).
    mpz_class order = 1;

    [[nodiscard]] std::string to_string() const {
        if (free_rank == 0) {
            return order == 1 ? "1" : "finite of order " + order.get_str();
        }
        return "free rank " + std::to_string(free_rank);
    }
};

inline KernelInfo abelian_kernel(const AbelianInvariants& from, const AbelianInvariants& to) {
    KernelInfo k;
    k.free_rank = from.rank >= to.rank ? from.rank - to.rank : 0;
    if (k.free_rank == 0) {
        mpz_class a = 1;
        mpz_class b = 1;
        for (const auto& d : from.torsion) {
            a *= d;
        }
        for (const auto& d : to.torsion) {
            b *= d;
        }
        k.order = a / b;
    }
    return k;
}

/// A morphism between covers: vertex map plus an image relation per arrow.
struct CoverMorphism {
    CoverPtr source;
    CoverPtr target;
    std::vector<VertexId> vertex_map;
    std::vector<std::optional<Relation>> arrow_images;
    /// Underlying quiver map (alpha,[w]) -> (alpha, psi[w]).
    std::vector<ArrowId> arrow_map;
    KernelInfo kernel;
    std::vector<std::string> violations;
    std::size_t checked_arrows = 0;
    std::size_t skipped_arrows = 0;
    std::size_t equivariance_checks = 0;
    /// Number of source vertices over each target vertex.
    std::vector<std::size_t> fiber_sizes;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

namespace detail {

/// psi applied to a total path of the source, as a relation in the target.
inline std::optional<Relation> map_path(const CoverMorphism& m, const Path& p) {
    const Quiver& sq = m.source->total_quiver();
    const Quiver& tq = m.target->total_quiver();
    const Field& f = m.target->base->field();
    VertexId s = m.vertex_map[p.source];
    if (s == npos) {
        return std::nullopt;
    }
    Relation out = single_path(tq, tq.trivial_path(s), f);
    for (ArrowId a : p.arrows) {
        if (!m.arrow_images[a]) {
            return std::nullopt;
        }
        out = multiply(tq, *m.arrow_images[a], out);
    }
    (void)sq;
    return out;
}

/// Fills in the checks shared by both lifts: commuting square against
/// `base_map`, ideal compatibility, equivariance, fibers.
inline void verify_morphism(CoverMorphism& m, const PathAutomorphism& base_map) {
    const CoverQuiver& src = *m.source;
    const CoverQuiver& tgt = *m.target;
    const Quiver& sq = src.total_quiver();
    const Quiver& tq = tgt.total_quiver();
    for (VertexId v = 0; v < sq.vertex_count(); ++v) {
        VertexId w = m.vertex_map[v];
        if (w != npos && tgt.vertex_projection[w] != src.vertex_projection[v]) {
            m.violations.push_back("vertex " + sq.vertex_name(v) + " changes fiber");
        }
    }
    for (ArrowId a = 0; a < sq.arrow_count(); ++a) {
        if (!m.arrow_images[a]) {
            ++m.skipped_arrows;
            continue;
        }
        ++m.checked_arrows;
        Relation down = tgt.project(*m.arrow_images[a]);
        Relation want = base_map.image(src.arrow_projection[a]);
        if (!(down == want)) {
            m.violations.push_back("square does not commute at arrow " + sq.arrow(a).name);
        }
    }
    for (const Relation& r : minimal_relations(*src.total)) {
        Relation img;
        bool ok = true;
        bool first = true;
        for (const auto& [p, c] : r.terms) {
            auto mp = map_path(m, sq.path(p));
            if (!mp) {
                ok = false;
                break;
            }
            if (first) {
                img = Relation{mp->source, mp->target, {}};
                first = false;
            }
            add_multiple(img, *mp, c);
        }
        if (ok && !tgt.total->contains(img)) {
            m.violations.push_back("relation " + to_string(sq, r) + " is not sent into the target ideal");
        }
    }
    // psi o g = lambda(g) o psi, with lambda matching deck generators by label.
    for (const DeckTransformation& g : src.action) {
        auto it = std::find_if(tgt.action.begin(), tgt.action.end(),
                               [&](const DeckTransformation& h) { return h.label == g.label; });
        if (it == tgt.action.end()) {
            m.violations.push_back("no image for deck generator " + g.label);
            continue;
        }
        for (VertexId v = 0; v < sq.vertex_count(); ++v) {
            VertexId gv = g.vertex_map[v];
            VertexId pv = m.vertex_map[v];
            if (gv == npos || pv == npos || m.vertex_map[gv] == npos || it->vertex_map[pv] == npos) {
                continue;
            }
            ++m.equivariance_checks;
            if (m.vertex_map[gv] != it->vertex_map[pv]) {
                m.violations.push_back("equivariance fails for " + g.label + " at " + sq.vertex_name(v));
            }
        }
    }
    m.fiber_sizes.assign(tq.vertex_count(), 0);
    for (VertexId w : m.vertex_map) {
        if (w != npos) {
            ++m.fiber_sizes[w];
        }
    }
}

inline std::shared_ptr<const HomotopyRelation> require_relation(const CoverQuiver& cov) {
    if (cov.kind != "universal" || !cov.relation) {
        throw DomainError("a universal cover is required");
    }
    return cov.relation;
}

} // namespace detail

/// Lifts a dilatation D to an isomorphism from the universal cover of I onto
/// that of D(I): vertices fixed, (alpha,[w]) -> D(alpha)(alpha,[w]).
inline CoverMorphism lift_dilatation(const CoverPtr& cov0, const Dilatation& D) {
    auto h = detail::require_relation(*cov0);
    const Ideal& I = *cov0->base;
    auto J = std::make_shared<const Ideal>(apply_automorphism(D, I));
    CoverMorphism m;
    m.source = cov0;
    m.target = std::make_shared<const CoverQuiver>(
        universal_cover(J, cov0->representatives[0].source, cov0->radius, h->options()));
    const Quiver& sq = cov0->total_quiver();
    const Quiver& tq = m.target->total_quiver();
    for (VertexId v = 0; v < sq.vertex_count(); ++v) {
        auto w = locate_walk(*m.target, cov0->representatives[v]);
        m.vertex_map.push_back(w ? *w : npos);
    }
    for (ArrowId a = 0; a < sq.arrow_count(); ++a) {
        VertexId s = m.vertex_map[sq.arrow(a).source];
        ArrowId alpha = cov0->arrow_projection[a];
        auto b = s == npos ? std::nullopt : m.target->lift_arrow_from(s, alpha);
        m.arrow_map.push_back(b ? *b : npos);
        if (b) {
            m.arrow_images.push_back(scaled(single_path(tq, tq.arrow_path(*b), J->field()), D.scale[alpha]));
        } else {
            m.arrow_images.emplace_back(std::nullopt);
        }
    }
    m.kernel = KernelInfo{};
    detail::verify_morphism(m, PathAutomorphism::from(I.quiver_ptr(), I.field(), D));
    for (std::size_t w = 0; w < m.fiber_sizes.size(); ++w) {
        if (m.fiber_sizes[w] > 1) {
            m.violations.push_back("dilatation lift is not injective at " + tq.vertex_name(w));
        }
    }
    return m;
}

/// Lifts phi = phi_{alpha,u,tau} (with alpha ~ u after it) to the covering
/// morphism (alpha,[w]) -> (alpha,[w]) + tau (u,[w]) between universal covers.
inline CoverMorphism lift_transvection(const CoverPtr& cov0, const Transvection& t) {
    auto h = detail::require_relation(*cov0);
    const Ideal& I = *cov0->base;
    const Quiver& q = I.quiver();
    auto J = std::make_shared<const Ideal>(apply_automorphism(t, I));
    HomotopyOptions opt = h->options();
    auto hj = homotopy_relation(J, opt);
    auto [pa, pu] = bypass_paths(q, t.bypass);
    if (!t.tau.is_zero() && hj->decide_paths(pa, pu).verdict != Verdict::Homotopic) {
        throw DomainError(q.arrow(t.bypass.arrow).name + " is not homotopic to " + to_string(q, t.bypass.path) +
                          " after the transvection: the lift is not defined");
    }
    CoverMorphism m;
    m.source = cov0;
    m.target = std::make_shared<const CoverQuiver>(universal_cover(J, cov0->representatives[0].source, cov0->radius, opt));
    const Quiver& sq = cov0->total_quiver();
    const Quiver& tq = m.target->total_quiver();
    for (VertexId v = 0; v < sq.vertex_count(); ++v) {
        auto w = locate_walk(*m.target, cov0->representatives[v]);
        m.vertex_map.push_back(w ? *w : npos);
    }
    for (ArrowId a = 0; a < sq.arrow_count(); ++a) {
        VertexId s = m.vertex_map[sq.arrow(a).source];
        ArrowId alpha = cov0->arrow_projection[a];
        auto b = s == npos ? std::nullopt : m.target->lift_arrow_from(s, alpha);
        m.arrow_map.push_back(b ? *b : npos);
        if (!b) {
            m.arrow_images.emplace_back(std::nullopt);
            continue;
        }
        Relation img = single_path(tq, tq.arrow_path(*b), J->field());
        if (alpha == t.bypass.arrow && !t.tau.is_zero()) {
            auto lu = m.target->lift_path(s, t.bypass.path);
            if (!lu) {
                m.arrow_images.emplace_back(std::nullopt);
                continue;
            }
            if (lu->target != tq.arrow(*b).target) {
                m.violations.push_back("lift of " + to_string(q, t.bypass.path) + " from " + tq.vertex_name(s) +
                                       " does not end with the lift of the arrow");
                m.arrow_images.emplace_back(std::nullopt);
                continue;
            }
            add_term(img, tq.path_id(*lu), t.tau);
        }
        m.arrow_images.push_back(std::move(img));
    }
    m.kernel = abelian_kernel(h->presentation().abelian_invariants, hj->presentation().abelian_invariants);
    detail::verify_morphism(m, PathAutomorphism::from(I.quiver_ptr(), I.field(), t));
    // Underlying quiver map must be a covering: local bijections at interior vertices.
    for (VertexId v = 0; v < sq.vertex_count(); ++v) {
        if (!cov0->is_interior(v) || m.vertex_map[v] == npos) {
            continue;
        }
        for (bool out : {true, false}) {
            std::set<ArrowId> imgs;
            bool defined = true;
            for (ArrowId a : out ? sq.outgoing(v) : sq.incoming(v)) {
                if (m.arrow_map[a] == npos) {
                    defined = false;
                    break;
                }
                imgs.insert(m.arrow_map[a]);
            }
            const auto& want = out ? tq.outgoing(m.vertex_map[v]) : tq.incoming(m.vertex_map[v]);
            if (defined && (imgs.size() != want.size() || imgs != std::set<ArrowId>(want.begin(), want.end()))) {
                m.violations.push_back("lift is not a local bijection at " + sq.vertex_name(v));
            }
        }
    }
    if (cov0->complete && m.target->complete && m.kernel.free_rank == 0) {
        for (std::size_t w = 0; w < m.fiber_sizes.size(); ++w) {
            if (mpz_class(static_cast<unsigned long>(m.fiber_sizes[w])) != m.kernel.order) {
                m.violations.push_back("fiber over " + tq.vertex_name(w) + " has " + std::to_string(m.fiber_sizes[w]) +
                                       " elements, kernel order is " + m.kernel.order.get_str());
            }
        }
    }
    return m;
}

struct PipelineReport {
    TransvectionChain chain;
    std::vector<CoverMorphism> lifts;
    /// Universal cover of the privileged presentation.
    CoverPtr start;
    /// Classifying map from the last universal cover into the target cover.
    std::vector<VertexId> classifying_map;
    /// Composite vertex map start -> target (npos outside the ball).
    std::vector<VertexId> composite;
    /// lambda on the chord generators of pi_1(I0): index into deck automorphisms of the target.
    std::vector<std::string> lambda_images;
    std::size_t image_order = 0;
    std::size_t group_order = 0;
    bool surjective = false;
    AbelianInvariants privileged_pi1;
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Chains lifts of the transvections from the privileged presentation to
/// the target's base ideal, then maps into the target cover along walks.
inline PipelineReport covering_pipeline(const Ideal& privileged, const CoverPtr& target, std::size_t radius = 0,
                                         const GammaOptions& opt = {}) {
    PipelineReport rep;
    const Quiver& q = privileged.quiver();
    VertexId x0 = target->vertex_projection[target->base_point];
    HomotopyOptions hopt = opt.homotopy;
    hopt.base_point = x0;
    rep.chain = find_transvection_chain(privileged, *target->base, opt);
    if (!rep.chain.dilatation.is_identity()) {
        throw DomainError("chains ending in a dilatation are not supported");
    }
    auto cur = std::make_shared<const CoverQuiver>(universal_cover(privileged, x0, radius, hopt));
    rep.start = cur;
    rep.privileged_pi1 = cur->relation->presentation().abelian_invariants;
    rep.composite.resize(cur->total_quiver().vertex_count());
    for (VertexId v = 0; v < rep.composite.size(); ++v) {
        rep.composite[v] = v;
    }
    for (const Transvection& t : rep.chain.steps) {
        CoverMorphism m = lift_transvection(cur, t);
        for (const auto& v : m.violations) {
            rep.violations.push_back("lift " + to_string(q, t) + ": " + v);
        }
        for (VertexId& v : rep.composite) {
            v = v == npos ? npos : m.vertex_map[v];
        }
        cur = m.target;
        rep.lifts.push_back(std::move(m));
    }
    // Classifying map: [w] -> end of the lift of w from the target's origin.
    const Quiver& cq = cur->total_quiver();
    const Quiver& tq = target->total_quiver();
    for (VertexId v = 0; v < cq.vertex_count(); ++v) {
        auto e = target->lift_walk_end(target->base_point, cur->representatives[v]);
        rep.classifying_map.push_back(e ? *e : npos);
    }
    for (ArrowId a = 0; a < cq.arrow_count(); ++a) {
        VertexId s = rep.classifying_map[cq.arrow(a).source];
        VertexId t = rep.classifying_map[cq.arrow(a).target];
        if (s == npos || t == npos) {
            continue;
        }
        auto b = target->lift_arrow_from(s, cur->arrow_projection[a]);
        if (!b || tq.arrow(*b).target != t) {
            rep.violations.push_back("classifying map does not commute at arrow " + cq.arrow(a).name);
        }
    }
    for (VertexId& v : rep.composite) {
        v = v == npos ? npos : rep.classifying_map[v];
    }
    // lambda: chord loops of pi_1(I0) -> deck transformations of the target.
    GaloisReport gal = is_galois(*target);
    if (gal.status != GaloisStatus::Galois) {
        rep.violations.push_back("target cover is not a complete Galois cover: " + gal.message);
        return rep;
    }
    rep.group_order = gal.group_order;
    const SpanningTree& tree = rep.start->relation->tree();
    std::vector<std::size_t> images;
    for (ArrowId chord : tree.chords) {
        const Arrow& arr = q.arrow(chord);
        Walk gamma = walk_reduce(then(then(tree.tree_walk[arr.source], Walk{arr.source, arr.target, {Letter{chord, false}}}),
                                      inverse(tree.tree_walk[arr.target])));
        auto e = target->lift_walk_end(target->base_point, gamma);
        std::size_t k = 0;
        while (k < gal.automorphisms.size() && gal.automorphisms[k].vertex_map[target->base_point] != e) {
            ++k;
        }
        if (!e || k == gal.automorphisms.size()) {
            rep.violations.push_back("loop of chord " + arr.name + " has no deck image");
            continue;
        }
        images.push_back(k);
        rep.lambda_images.push_back(arr.name + " -> " + tq.vertex_name(*e));
    }
    // Order of the subgroup generated by the images (as vertex permutations).
    std::set<std::vector<VertexId>> sub;
    std::vector<std::vector<VertexId>> frontier;
    std::vector<VertexId> id(tq.vertex_count());
    for (VertexId v = 0; v < id.size(); ++v) {
        id[v] = v;
    }
    sub.insert(id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        auto cur_perm = frontier.back();
        frontier.pop_back();
        for (std::size_t k : images) {
            std::vector<VertexId> next(id.size());
            for (VertexId v = 0; v < id.size(); ++v) {
                next[v] = gal.automorphisms[k].vertex_map[cur_perm[v]];
            }
            if (sub.insert(next).second) {
                frontier.push_back(next);
            }
        }
    }
    rep.image_order = sub.size();
    rep.surjective = rep.image_order == rep.group_order;
    if (!rep.surjective) {
        rep.violations.push_back("lambda is not surjective");
    }
    return rep;
}

} // namespace bq
