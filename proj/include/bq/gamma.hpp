#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bq/error.hpp"
#include "bq/homotopy.hpp"
#include "bq/ideal.hpp"
#include "bq/transform.hpp"

namespace bq {

struct GammaOptions {
    HomotopyOptions homotopy;
    /// Probing values for tau. Empty picks {1,-1,2,1/2,3} over Q and all of F_p^* otherwise.
    std::vector<mpq_class> tau_schedule;
    /// Extra ideals kept per vertex (presentations with the same homotopy relation).
    std::size_t representative_limit = 16;
    std::size_t vertex_limit = 256;
};

inline std::vector<Scalar> tau_schedule(const Field& f, const std::vector<mpq_class>& custom = {}) {
    std::vector<Scalar> out;
    auto push = [&](const Scalar& s) {
        if (!s.is_zero() && std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(s);
        }
    };
    if (!custom.empty()) {
        for (const auto& c : custom) {
            push(f.from_rational(c));
        }
        return out;
    }
    if (f.characteristic() == 0) {
        for (const mpq_class& c : {mpq_class(1), mpq_class(-1), mpq_class(2), mpq_class(1, 2), mpq_class(3)}) {
            push(f.from_rational(c));
        }
    } else {
        for (long k = 1; k < static_cast<long>(f.characteristic()); ++k) {
            push(f.from_integer(k));
        }
    }
    return out;
}

/// Arrow path and bypass path ids of a bypass.
inline std::pair<PathId, PathId> bypass_paths(const Quiver& q, const Bypass& b) {
    return {q.arrow_path(b.arrow), q.path_id(b.path)};
}

struct GammaStep {
    Transvection transvection;
    std::shared_ptr<const Ideal> ideal;
    HomotopyPtr relation;
};

struct StepSearch {
    std::vector<GammaStep> steps;
    /// Presentations reached by a transvection that keep the homotopy relation.
    std::vector<GammaStep> same_relation;
    std::vector<std::string> diagnostics;
};

namespace detail {

inline HomotopyPtr relation_of(const std::shared_ptr<const Ideal>& ideal, const GammaOptions& opt) {
    return homotopy_relation(ideal, opt.homotopy);
}

inline Verdict bypass_verdict(const HomotopyRelation& h, const Bypass& b) {
    auto [pa, pu] = bypass_paths(h.quiver(), b);
    return h.verdict(pa, pu);
}

inline void require_certified(const HomotopyRelation& h, const std::string& what) {
    if (h.fingerprint().has_unknown()) {
        throw DomainError("homotopy relation of " + what +
                          " has undecided path pairs; raise --cap or enable coset enumeration");
    }
}

} // namespace detail

/// Relations reached from `ideal` by one transvection phi_{alpha,u,tau}
/// with alpha not homotopic to u before and homotopic after.
inline StepSearch direct_successors(const std::shared_ptr<const Ideal>& ideal, const GammaOptions& opt = {},
                                    HomotopyPtr relation = nullptr) {
    const Quiver& q = ideal->quiver();
    StepSearch out;
    HomotopyPtr h = relation ? relation : detail::relation_of(ideal, opt);
    auto taus = tau_schedule(ideal->field(), opt.tau_schedule);
    for (const Bypass& b : find_bypasses(q)) {
        Verdict before = detail::bypass_verdict(*h, b);
        if (before == Verdict::Unknown) {
            out.diagnostics.push_back("bypass " + to_string(q, b) + ": undecided before the transvection");
            continue;
        }
        if (before != Verdict::NotHomotopic) {
            continue;
        }
        bool found = false;
        bool inconclusive = false;
        for (const Scalar& tau : taus) {
            Transvection t{b, tau};
            auto j = std::make_shared<const Ideal>(apply_automorphism(t, *ideal));
            auto hj = detail::relation_of(j, opt);
            Verdict after = detail::bypass_verdict(*hj, b);
            if (after == Verdict::Homotopic) {
                bool dup = std::any_of(out.steps.begin(), out.steps.end(), [&](const GammaStep& s) {
                    return s.relation->fingerprint() == hj->fingerprint();
                });
                if (!dup) {
                    out.steps.push_back(GammaStep{t, j, hj});
                }
                found = true;
                break;
            }
            if (after == Verdict::Unknown) {
                inconclusive = true;
            }
        }
        if (!found) {
            out.diagnostics.push_back("bypass " + to_string(q, b) +
                                      (inconclusive ? ": undecided for some tau" : ": no successor found (schedule exhausted)"));
        }
    }
    return out;
}

/// Candidate tau cancelling a term v*u*w against v*alpha*w in some basis element.
inline std::vector<Scalar> predecessor_candidates(const Ideal& ideal, const Bypass& b) {
    const Quiver& q = ideal.quiver();
    std::vector<Scalar> out;
    PathId upath = q.path_id(b.path);
    for (const Relation& r : minimal_relations(ideal)) {
        for (const auto& [p, lambda] : r.terms) {
            const Path& path = q.path(p);
            auto pos = std::find(path.arrows.begin(), path.arrows.end(), b.arrow);
            if (pos == path.arrows.end()) {
                continue;
            }
            auto i = static_cast<std::size_t>(pos - path.arrows.begin());
            Path before{path.source, q.arrow(b.arrow).source,
                        std::vector<ArrowId>(path.arrows.begin(), path.arrows.begin() + static_cast<std::ptrdiff_t>(i))};
            Path after{q.arrow(b.arrow).target, path.target,
                       std::vector<ArrowId>(path.arrows.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.arrows.end())};
            auto swapped = q.compose(q.path_id(after), *q.compose(upath, q.path_id(before)));
            auto it = r.terms.find(*swapped);
            if (it == r.terms.end()) {
                continue;
            }
            Scalar tau = -(it->second / lambda);
            if (std::find(out.begin(), out.end(), tau) == out.end()) {
                out.push_back(tau);
            }
        }
    }
    return out;
}

/// Relations from which `ideal` is a direct successor. Each step holds the
/// transvection phi with J = phi(ideal); the Gamma edge runs J -> ideal
/// with witness phi^-1. Steps that keep the relation are returned separately.
inline StepSearch direct_predecessors(const std::shared_ptr<const Ideal>& ideal, const GammaOptions& opt = {},
                                      HomotopyPtr relation = nullptr) {
    const Quiver& q = ideal->quiver();
    StepSearch out;
    HomotopyPtr h = relation ? relation : detail::relation_of(ideal, opt);
    for (const Bypass& b : find_bypasses(q)) {
        Verdict before = detail::bypass_verdict(*h, b);
        if (before == Verdict::Unknown) {
            out.diagnostics.push_back("bypass " + to_string(q, b) + ": undecided");
            continue;
        }
        if (before != Verdict::Homotopic) {
            continue;
        }
        auto taus = predecessor_candidates(*ideal, b);
        for (const Scalar& s : tau_schedule(ideal->field(), opt.tau_schedule)) {
            if (std::find(taus.begin(), taus.end(), s) == taus.end()) {
                taus.push_back(s);
            }
        }
        for (const Scalar& tau : taus) {
            Transvection t{b, tau};
            auto j = std::make_shared<const Ideal>(apply_automorphism(t, *ideal));
            if (ideals_equal(*j, *ideal)) {
                continue;
            }
            auto hj = detail::relation_of(j, opt);
            Verdict after = detail::bypass_verdict(*hj, b);
            if (after == Verdict::NotHomotopic) {
                bool dup = std::any_of(out.steps.begin(), out.steps.end(), [&](const GammaStep& s) {
                    return s.relation->fingerprint() == hj->fingerprint();
                });
                if (!dup) {
                    out.steps.push_back(GammaStep{t, j, hj});
                }
            } else if (after == Verdict::Homotopic) {
                if (hj->fingerprint() == h->fingerprint()) {
                    out.same_relation.push_back(GammaStep{t, j, hj});
                }
            } else {
                out.diagnostics.push_back("bypass " + to_string(q, b) + ", tau " + tau.to_string() + ": undecided");
            }
        }
    }
    return out;
}

struct GammaVertex {
    HomotopyPtr relation;
    std::vector<std::shared_ptr<const Ideal>> representatives;
    AbelianInvariants pi1;

    [[nodiscard]] const Fingerprint& fingerprint() const { return relation->fingerprint(); }
    [[nodiscard]] const Ideal& ideal() const { return *representatives.front(); }
};

struct GammaEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    /// to = witness(representative of `from` at index `representative`).
    Transvection witness;
    std::size_t representative = 0;
};

struct GammaQuiver {
    std::shared_ptr<const Quiver> quiver;
    Field field;
    std::vector<GammaVertex> vertices;
    std::vector<GammaEdge> edges;
    std::vector<std::string> diagnostics;
    std::size_t bypass_count = 0;
    bool has_double_bypass = false;

    [[nodiscard]] std::size_t in_degree(std::size_t v) const {
        return static_cast<std::size_t>(
            std::count_if(edges.begin(), edges.end(), [&](const GammaEdge& e) { return e.to == v; }));
    }
    [[nodiscard]] std::size_t out_degree(std::size_t v) const {
        return static_cast<std::size_t>(
            std::count_if(edges.begin(), edges.end(), [&](const GammaEdge& e) { return e.from == v; }));
    }
    [[nodiscard]] std::vector<std::size_t> source_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            if (in_degree(v) == 0) {
                out.push_back(v);
            }
        }
        return out;
    }
    [[nodiscard]] std::optional<std::size_t> find(const Fingerprint& fp) const {
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            if (vertices[v].fingerprint() == fp) {
                return v;
            }
        }
        return std::nullopt;
    }
};

/// Closure of {~_I} under direct successors and predecessors.
inline GammaQuiver explore_gamma(const std::shared_ptr<const Ideal>& start, const GammaOptions& opt = {}) {
    GammaQuiver g;
    g.quiver = start->quiver_ptr();
    g.field = start->field();
    g.bypass_count = find_bypasses(*g.quiver).size();
    g.has_double_bypass = !find_double_bypasses(*g.quiver).empty();

    auto add_vertex = [&](const std::shared_ptr<const Ideal>& ideal, const HomotopyPtr& h) -> std::pair<std::size_t, bool> {
        detail::require_certified(*h, "a Gamma vertex");
        if (auto v = g.find(h->fingerprint())) {
            return {*v, false};
        }
        if (g.vertices.size() >= opt.vertex_limit) {
            throw DomainError("Gamma exceeds the vertex limit");
        }
        g.vertices.push_back(GammaVertex{h, {ideal}, h->presentation().abelian_invariants});
        return {g.vertices.size() - 1, true};
    };
    auto add_rep = [&](std::size_t v, const std::shared_ptr<const Ideal>& ideal) {
        auto& reps = g.vertices[v].representatives;
        if (reps.size() >= opt.representative_limit) {
            return;
        }
        if (std::none_of(reps.begin(), reps.end(), [&](const auto& r) { return ideals_equal(*r, *ideal); })) {
            reps.push_back(ideal);
        }
    };
    auto add_edge = [&](std::size_t from, std::size_t to, const Transvection& t, std::size_t rep) {
        if (from == to) {
            throw Error("internal: self edge in Gamma");
        }
        bool dup = std::any_of(g.edges.begin(), g.edges.end(),
                               [&](const GammaEdge& e) { return e.from == from && e.to == to; });
        if (!dup) {
            g.edges.push_back(GammaEdge{from, to, t, rep});
        }
    };

    add_vertex(start, detail::relation_of(start, opt));
    // Work items: (vertex, representative index), processed in order.
    std::deque<std::pair<std::size_t, std::size_t>> todo{{0, 0}};
    std::set<std::pair<std::size_t, std::size_t>> done;
    while (!todo.empty()) {
        auto [v, ri] = todo.front();
        todo.pop_front();
        if (!done.insert({v, ri}).second) {
            continue;
        }
        auto rep = g.vertices[v].representatives[ri];
        HomotopyPtr h = ri == 0 ? g.vertices[v].relation : detail::relation_of(rep, opt);

        StepSearch succ = direct_successors(rep, opt, h);
        for (const GammaStep& s : succ.steps) {
            auto [w, fresh] = add_vertex(s.ideal, s.relation);
            if (!fresh) {
                add_rep(w, s.ideal);
            }
            add_edge(v, w, s.transvection, ri);
        }
        StepSearch pred = direct_predecessors(rep, opt, h);
        for (const GammaStep& s : pred.steps) {
            auto [w, fresh] = add_vertex(s.ideal, s.relation);
            std::size_t wrep = 0;
            if (!fresh) {
                add_rep(w, s.ideal);
                auto& reps = g.vertices[w].representatives;
                for (std::size_t k = 0; k < reps.size(); ++k) {
                    if (ideals_equal(*reps[k], *s.ideal)) {
                        wrep = k;
                    }
                }
            }
            add_edge(w, v, s.transvection.inverse(), wrep);
        }
        for (const GammaStep& s : pred.same_relation) {
            add_rep(v, s.ideal);
        }
        for (const auto& d : succ.diagnostics) {
            g.diagnostics.push_back(d);
        }
        for (const auto& d : pred.diagnostics) {
            g.diagnostics.push_back(d);
        }
        for (std::size_t w = 0; w < g.vertices.size(); ++w) {
            for (std::size_t k = 0; k < g.vertices[w].representatives.size(); ++k) {
                if (done.count({w, k}) == 0) {
                    todo.emplace_back(w, k);
                }
            }
        }
    }
    std::sort(g.diagnostics.begin(), g.diagnostics.end());
    g.diagnostics.erase(std::unique(g.diagnostics.begin(), g.diagnostics.end()), g.diagnostics.end());
    return g;
}

inline GammaQuiver explore_gamma(const Ideal& start, const GammaOptions& opt = {}) {
    return explore_gamma(std::make_shared<const Ideal>(start), opt);
}

struct SourceReport {
    std::vector<std::size_t> sources;
    std::vector<std::string> warnings;
};

inline SourceReport find_sources(const GammaQuiver& g) {
    SourceReport r;
    r.sources = g.source_indices();
    if (g.has_double_bypass) {
        r.warnings.push_back("quiver has a double bypass: a unique source is not guaranteed");
    }
    if (g.field.characteristic() != 0) {
        r.warnings.push_back("characteristic " + std::to_string(g.field.characteristic()) +
                             ": a unique source is not guaranteed");
    }
    if (r.sources.size() > 1) {
        r.warnings.push_back(std::to_string(r.sources.size()) + " sources");
    }
    return r;
}

/// Acyclic, connected, no self edge, out-degree and path length at most the number of bypasses.
inline std::vector<std::string> check_gamma_invariants(const GammaQuiver& g) {
    std::vector<std::string> bad;
    const std::size_t n = g.vertices.size();
    const std::size_t m = g.bypass_count;
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const GammaEdge& e : g.edges) {
        if (e.from == e.to) {
            bad.push_back("self edge at vertex " + std::to_string(e.from));
        }
        out[e.from].push_back(e.to);
        parent[find(e.from)] = find(e.to);
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (find(v) != find(0)) {
            bad.push_back("vertex " + std::to_string(v) + " is disconnected");
        }
        if (out[v].size() > m) {
            bad.push_back("vertex " + std::to_string(v) + " has out-degree " + std::to_string(out[v].size()) +
                          " > " + std::to_string(m));
        }
    }
    // Longest path by memoized DFS, detecting cycles on the way.
    std::vector<int> state(n, 0);
    std::vector<std::size_t> longest(n, 0);
    bool cyclic = false;
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
        state[v] = 1;
        for (std::size_t w : out[v]) {
            if (state[w] == 1) {
                cyclic = true;
            } else if (state[w] == 0) {
                dfs(w);
            }
            longest[v] = std::max(longest[v], longest[w] + 1);
        }
        state[v] = 2;
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (state[v] == 0) {
            dfs(v);
        }
    }
    if (cyclic) {
        bad.push_back("oriented cycle");
    } else {
        for (std::size_t v = 0; v < n; ++v) {
            if (longest[v] > m) {
                bad.push_back("path of length " + std::to_string(longest[v]) + " > " + std::to_string(m));
                break;
            }
        }
    }
    return bad;
}

enum class Outcome { Confirmed, Refuted, Unknown };

inline std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::Confirmed:
        return "Confirmed";
    case Outcome::Refuted:
        return "Refuted";
    default:
        return "Unknown";
    }
}

struct SurjectionReport {
    Outcome outcome = Outcome::Unknown;
    std::optional<std::pair<PathId, PathId>> witness;
    AbelianInvariants source_pi1;
    AbelianInvariants target_pi1;
    std::string message;
};

/// The identity on walks induces pi_1(source) -> pi_1(target) iff every
/// generating pair of the source is homotopic under the target.
inline SurjectionReport check_surjection(const Ideal& source, const Ideal& target, const HomotopyOptions& opt = {}) {
    require_compatible(source, target);
    auto hs = homotopy_relation(source, opt);
    auto ht = homotopy_relation(target, opt);
    SurjectionReport r;
    r.source_pi1 = hs->presentation().abelian_invariants;
    r.target_pi1 = ht->presentation().abelian_invariants;
    bool unknown = false;
    for (auto [p, q] : hs->generating_pairs()) {
        HomotopyDecision d = ht->decide_paths(p, q);
        if (d.verdict == Verdict::NotHomotopic) {
            r.outcome = Outcome::Refuted;
            r.witness = std::make_pair(p, q);
            r.message = to_string(source.quiver(), source.quiver().path(p)) + " and " +
                        to_string(source.quiver(), source.quiver().path(q)) + " are not homotopic in the target";
            return r;
        }
        if (d.verdict == Verdict::Unknown && !unknown) {
            unknown = true;
            r.witness = std::make_pair(p, q);
        }
    }
    // Abelian shadow: the source relator lattice sits inside the target's.
    for (const Word& rel : hs->presentation().relators) {
        if (!ht->smith().in_lattice(exponent_vector(rel, hs->tree().chords.size()))) {
            r.outcome = Outcome::Refuted;
            r.message = "a source relator survives in the target abelianization";
            return r;
        }
    }
    if (unknown) {
        r.outcome = Outcome::Unknown;
        r.message = "some generating pair is undecided in the target";
        return r;
    }
    r.outcome = Outcome::Confirmed;
    r.message = r.source_pi1.to_string() + " ->> " + r.target_pi1.to_string();
    return r;
}

/// A factorization target = D o phi_n o ... o phi_1 (source) in which each
/// phi_i = phi_{alpha_i,u_i,tau_i} has alpha_i ~ u_i after it is applied.
struct TransvectionChain {
    std::vector<Transvection> steps;
    Dilatation dilatation;
    std::vector<std::shared_ptr<const Ideal>> ideals; // I_0 = source, ..., I_n
};

inline TransvectionChain find_transvection_chain(const Ideal& source, const Ideal& target, const GammaOptions& opt = {},
                                               std::size_t node_limit = 4000) {
    require_compatible(source, target);
    const Quiver& q = source.quiver();
    TransvectionChain chain;
    chain.dilatation = Dilatation::identity(q, source.field());
    auto src = std::make_shared<const Ideal>(source);
    if (ideals_equal(source, target)) {
        chain.ideals.push_back(src);
        return chain;
    }
    const auto bypasses = find_bypasses(q);
    const std::size_t depth_limit = 2 * bypasses.size() + 2;
    struct Node {
        std::shared_ptr<const Ideal> ideal;
        std::size_t parent;
        std::optional<Transvection> step;
        std::size_t depth;
    };
    std::vector<Node> nodes{{src, 0, std::nullopt, 0}};
    std::multimap<std::size_t, std::size_t> seen{{ideal_hash(source), 0}};
    auto known = [&](const Ideal& ideal) {
        auto [lo, hi] = seen.equal_range(ideal_hash(ideal));
        for (auto it = lo; it != hi; ++it) {
            if (ideals_equal(*nodes[it->second].ideal, ideal)) {
                return true;
            }
        }
        return false;
    };
    std::optional<std::size_t> goal;
    for (std::size_t i = 0; i < nodes.size() && !goal; ++i) {
        if (nodes[i].depth >= depth_limit) {
            continue;
        }
        auto cur = nodes[i].ideal;
        for (const Bypass& b : bypasses) {
            // Candidates: schedule, cancellations, and ratios matching the target.
            std::vector<Scalar> taus = tau_schedule(cur->field(), opt.tau_schedule);
            auto add = [&](const Scalar& s) {
                if (!s.is_zero() && std::find(taus.begin(), taus.end(), s) == taus.end()) {
                    taus.insert(taus.begin(), s);
                }
            };
            for (const Scalar& s : predecessor_candidates(*cur, b)) {
                add(s);
            }
            PathId upath = q.path_id(b.path);
            for (const Relation& r : minimal_relations(*cur)) {
                for (const auto& [p, lambda] : r.terms) {
                    const Path& path = q.path(p);
                    auto pos = std::find(path.arrows.begin(), path.arrows.end(), b.arrow);
                    if (pos == path.arrows.end()) {
                        continue;
                    }
                    auto k = static_cast<std::size_t>(pos - path.arrows.begin());
                    Path before{path.source, q.arrow(b.arrow).source,
                                std::vector<ArrowId>(path.arrows.begin(), path.arrows.begin() + static_cast<std::ptrdiff_t>(k))};
                    Path after{q.arrow(b.arrow).target, path.target,
                               std::vector<ArrowId>(path.arrows.begin() + static_cast<std::ptrdiff_t>(k) + 1, path.arrows.end())};
                    PathId swapped = *q.compose(q.path_id(after), *q.compose(upath, q.path_id(before)));
                    Scalar mu = r.coefficient(swapped, cur->field());
                    for (const Relation& t : minimal_relations(target)) {
                        auto lt = t.terms.find(p);
                        auto mt = t.terms.find(swapped);
                        if (lt != t.terms.end() && mt != t.terms.end()) {
                            add(mt->second / lt->second - mu / lambda);
                        }
                    }
                }
            }
            for (const Scalar& tau : taus) {
                Transvection t{b, tau};
                auto next = std::make_shared<const Ideal>(apply_automorphism(t, *cur));
                if (known(*next)) {
                    continue;
                }
                auto h = homotopy_relation(next, opt.homotopy);
                auto [pa, pu] = bypass_paths(q, b);
                if (h->decide_paths(pa, pu).verdict != Verdict::Homotopic) {
                    continue;
                }
                seen.emplace(ideal_hash(*next), nodes.size());
                nodes.push_back(Node{next, i, t, nodes[i].depth + 1});
                if (ideals_equal(*next, target)) {
                    goal = nodes.size() - 1;
                    break;
                }
                if (nodes.size() >= node_limit) {
                    throw DomainError("transvection chain search exceeded its node limit");
                }
            }
            if (goal) {
                break;
            }
        }
    }
    if (!goal) {
        throw DomainError("target is not reachable from the source by certified transvections");
    }
    std::vector<std::size_t> trail;
    for (std::size_t n = *goal; n != 0; n = nodes[n].parent) {
        trail.push_back(n);
    }
    std::reverse(trail.begin(), trail.end());
    chain.ideals.push_back(src);
    for (std::size_t n : trail) {
        chain.steps.push_back(*nodes[n].step);
        chain.ideals.push_back(nodes[n].ideal);
    }
    return chain;
}

enum class TransvectionCase { A, B, BReverse, C, Unknown };

inline std::string to_string(TransvectionCase c) {
    switch (c) {
    case TransvectionCase::A:
        return "a";
    case TransvectionCase::B:
        return "b";
    case TransvectionCase::BReverse:
        return "b'";
    case TransvectionCase::C:
        return "c";
    default:
        return "unknown";
    }
}

/// Which of the four situations (alpha ~ u before / after) a transvection
/// falls into, with the consequence for ~_I and ~_J checked.
struct TransvectionReport {
    TransvectionCase kind = TransvectionCase::Unknown;
    std::shared_ptr<const Ideal> image;
    /// The consequence predicted for this case holds.
    bool holds = false;
    std::string message;
};

inline TransvectionReport classify_transvection(const std::shared_ptr<const Ideal>& ideal, const Transvection& t,
                                                const HomotopyOptions& opt = {}) {
    TransvectionReport r;
    const Quiver& q = ideal->quiver();
    r.image = std::make_shared<const Ideal>(apply_automorphism(t, *ideal));
    auto hi = homotopy_relation(ideal, opt);
    auto hj = homotopy_relation(r.image, opt);
    auto [pa, pu] = bypass_paths(q, t.bypass);
    Verdict vi = hi->decide_paths(pa, pu).verdict;
    Verdict vj = hj->decide_paths(pa, pu).verdict;
    if (vi == Verdict::Unknown || vj == Verdict::Unknown) {
        r.message = "undecided: " + to_string(q, t);
        return r;
    }
    bool before = vi == Verdict::Homotopic;
    bool after = vj == Verdict::Homotopic;
    // Relation generated by the smaller side plus the pair (alpha, u).
    auto generated = [&](const HomotopyRelation& h) {
        auto pairs = h.generating_pairs();
        pairs.emplace_back(pa, pu);
        return homotopy_relation_from_pairs(ideal->quiver_ptr(), std::move(pairs), opt);
    };
    Comparison cmp = Comparison::Unknown;
    if (before && after) {
        r.kind = TransvectionCase::A;
        cmp = relations_equal(*hi, *hj).result;
    } else if (!before && after) {
        r.kind = TransvectionCase::B;
        cmp = relations_equal(*generated(*hi), *hj).result;
    } else if (before && !after) {
        r.kind = TransvectionCase::BReverse;
        cmp = relations_equal(*generated(*hj), *hi).result;
    } else {
        r.kind = TransvectionCase::C;
        cmp = relations_equal(*hi, *hj).result;
        if (cmp == Comparison::Equal && !ideals_equal(*ideal, *r.image)) {
            cmp = Comparison::Different;
            r.message = "ideals differ";
        }
    }
    if (cmp == Comparison::Unknown) {
        r.kind = TransvectionCase::Unknown;
        r.message = "undecided comparison for " + to_string(q, t);
        return r;
    }
    r.holds = cmp == Comparison::Equal;
    return r;
}

} // namespace bq
