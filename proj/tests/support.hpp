#pragma once
// Shared fixtures for the test binaries: bundled data, random instances and
// oracles that do not go through the library's own algorithms.

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bq/bq.hpp"

#ifndef BQ_DATA_DIR
#define BQ_DATA_DIR "data"
#endif

namespace bqt {

using namespace bq;

inline std::string data_path(const std::string& name) { return std::string(BQ_DATA_DIR) + "/" + name; }

inline const Document& exple1() {
    static const Document d = load_document(data_path("exple1.bq"));
    return d;
}

inline const Document& twobypass() {
    static const Document d = load_document(data_path("twobypass.bq"));
    return d;
}

inline Relation rel(const Ideal& I, const std::vector<std::pair<mpq_class, std::string>>& terms) {
    std::vector<std::pair<mpq_class, Path>> t;
    for (const auto& [c, p] : terms) {
        t.emplace_back(c, parse_path(I.quiver(), p));
    }
    return make_relation(I.quiver(), I.field(), t);
}

inline Transvection tv(const Quiver& q, const Field& f, const std::string& arrow, const std::string& path,
                       const mpq_class& tau) {
    return make_transvection(q, q.arrow_id(arrow), parse_path(q, path), f.from_rational(tau));
}

// ---- oracles ----

/// Paths counted by dynamic programming over arrows (trivial paths included).
inline std::size_t count_paths_oracle(const Quiver& q) {
    const std::size_t n = q.vertex_count();
    // ways[x][y]: number of nontrivial paths x -> y; relax n times (acyclic, so n rounds suffice).
    std::vector<std::vector<std::size_t>> ways(n, std::vector<std::size_t>(n, 0));
    for (std::size_t round = 0; round < n; ++round) {
        std::vector<std::vector<std::size_t>> next(n, std::vector<std::size_t>(n, 0));
        for (const Arrow& a : q.arrows()) {
            next[a.source][a.target] += 1;
            for (std::size_t x = 0; x < n; ++x) {
                next[x][a.target] += ways[x][a.source];
            }
        }
        ways = next;
    }
    std::size_t total = n;
    for (const auto& row : ways) {
        for (std::size_t w : row) {
            total += w;
        }
    }
    return total;
}

/// Dense rank over Q of the span of all w*g*w' (char 0 only).
class SpanOracle {
  public:
    SpanOracle(const Quiver& q, const std::vector<Relation>& gens) : q_(q) {
        for (const Relation& g : gens) {
            for (const Path& before : q.paths()) {
                if (before.target != g.source) {
                    continue;
                }
                for (const Path& after : q.paths()) {
                    if (after.source != g.target) {
                        continue;
                    }
                    std::vector<mpq_class> row(q.path_count(), 0);
                    for (const auto& [p, c] : g.terms) {
                        Path full{before.source, after.target, before.arrows};
                        const Path& mid = q.path(p);
                        full.arrows.insert(full.arrows.end(), mid.arrows.begin(), mid.arrows.end());
                        full.arrows.insert(full.arrows.end(), after.arrows.begin(), after.arrows.end());
                        row[*q.find_path(full)] += c.value();
                    }
                    insert(row);
                }
            }
        }
    }

    [[nodiscard]] std::size_t dimension() const { return rows_.size(); }

    [[nodiscard]] bool contains(const Relation& r) const {
        std::vector<mpq_class> v(q_.path_count(), 0);
        for (const auto& [p, c] : r.terms) {
            v[p] = c.value();
        }
        reduce(v);
        return std::all_of(v.begin(), v.end(), [](const mpq_class& x) { return x == 0; });
    }

  private:
    void reduce(std::vector<mpq_class>& v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const mpq_class c = v[pivots_[i]];
            if (c != 0) {
                for (std::size_t k = 0; k < v.size(); ++k) {
                    v[k] -= c * rows_[i][k];
                }
            }
        }
    }

    void insert(std::vector<mpq_class> v) {
        reduce(v);
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k] != 0) {
                const mpq_class c = v[k];
                for (auto& x : v) {
                    x /= c;
                }
                for (auto& row : rows_) {
                    const mpq_class d = row[k];
                    if (d != 0) {
                        for (std::size_t j = 0; j < v.size(); ++j) {
                            row[j] -= d * v[j];
                        }
                    }
                }
                rows_.push_back(std::move(v));
                pivots_.push_back(k);
                return;
            }
        }
    }

    const Quiver& q_;
    std::vector<std::vector<mpq_class>> rows_;
    std::vector<std::size_t> pivots_;
};

// ---- random instances ----

/// Connected acyclic quiver on n vertices (arrows go from lower to higher
/// index) with at least one bypass. `simple` forbids two arrows x -> y.
inline std::shared_ptr<const Quiver> random_quiver(std::mt19937_64& rng, std::size_t n, std::size_t extra,
                                                   bool simple = false) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(i + 1));
    }
    std::vector<Arrow> arrows;
    auto add = [&](std::size_t s, std::size_t t) {
        arrows.push_back(Arrow{std::string(1, static_cast<char>('a' + arrows.size())), s, t});
    };
    for (std::size_t k = 1; k < n; ++k) {
        add(std::uniform_int_distribution<std::size_t>(0, k - 1)(rng), k);
    }
    for (std::size_t e = 0; e < extra; ++e) {
        std::size_t s = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
        std::size_t t = std::uniform_int_distribution<std::size_t>(s + 1, n - 1)(rng);
        bool taken = std::any_of(arrows.begin(), arrows.end(),
                                 [&](const Arrow& a) { return a.source == s && a.target == t; });
        if (!(simple && taken)) {
            add(s, t);
        }
    }
    auto q = std::make_shared<const Quiver>("rq", names, arrows);
    if (!find_bypasses(*q).empty()) {
        return q;
    }
    // Add an arrow parallel to some path of length >= 2.
    for (const Path& p : q->paths()) {
        if (p.length() >= 2) {
            add(p.source, p.target);
            return std::make_shared<const Quiver>("rq", names, arrows);
        }
    }
    // Star-shaped tree: rebuild as a chain with one bypass.
    arrows.clear();
    add(0, 1);
    add(1, 2);
    add(0, 2);
    for (std::size_t k = 3; k < n; ++k) {
        add(k - 1, k);
    }
    return std::make_shared<const Quiver>("rq", names, arrows);
}

inline mpq_class random_coefficient(std::mt19937_64& rng) {
    static const int table[][2] = {{1, 1}, {-1, 1}, {2, 1}, {1, 2}, {-2, 1}, {3, 1}, {-1, 2}};
    const auto& e = table[std::uniform_int_distribution<std::size_t>(0, 6)(rng)];
    return mpq_class(e[0], e[1]);
}

/// Random nonzero scalar of f.
inline Scalar random_scalar(std::mt19937_64& rng, const Field& f) {
    for (;;) {
        mpq_class c = random_coefficient(rng);
        const std::uint32_t p = f.characteristic();
        if (p == 0 || (c.get_den() % p != 0 && c.get_num() % p != 0)) {
            return f.from_rational(c);
        }
    }
}

/// Admissible ideal with a few random relations on hom-spaces that hold
/// paths of length >= 2.
inline std::shared_ptr<const Ideal> random_ideal(std::mt19937_64& rng, const std::shared_ptr<const Quiver>& q,
                                                 const Field& f) {
    std::map<std::pair<VertexId, VertexId>, std::vector<PathId>> long_paths;
    for (PathId p = 0; p < q->path_count(); ++p) {
        if (q->path(p).length() >= 2) {
            long_paths[{q->path(p).source, q->path(p).target}].push_back(p);
        }
    }
    std::vector<Relation> gens;
    if (long_paths.empty()) {
        return std::make_shared<const Ideal>(q, f, gens);
    }
    std::size_t count = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    for (std::size_t i = 0; i < count; ++i) {
        auto it = long_paths.begin();
        std::advance(it, std::uniform_int_distribution<std::size_t>(0, long_paths.size() - 1)(rng));
        const auto& paths = it->second;
        Relation r{it->first.first, it->first.second, {}};
        std::size_t terms = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, paths.size()))(rng);
        for (std::size_t k = 0; k < terms; ++k) {
            PathId p = paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)];
            add_term(r, p, random_scalar(rng, f));
        }
        if (!r.is_zero()) {
            gens.push_back(std::move(r));
        }
    }
    return std::make_shared<const Ideal>(q, f, gens);
}

inline Transvection random_transvection(std::mt19937_64& rng, const Quiver& q, const Field& f) {
    auto bypasses = find_bypasses(q);
    const Bypass& b = bypasses[std::uniform_int_distribution<std::size_t>(0, bypasses.size() - 1)(rng)];
    return Transvection{b, random_scalar(rng, f)};
}

inline Dilatation random_dilatation(std::mt19937_64& rng, const Quiver& q, const Field& f) {
    Dilatation d = Dilatation::identity(q, f);
    for (auto& s : d.scale) {
        s = random_scalar(rng, f);
    }
    return d;
}

/// Nilpotent derivation: each arrow goes to a random combination of the
/// longer paths parallel to it.
inline Derivation random_derivation(std::mt19937_64& rng, const Quiver& q, const Field& f) {
    Derivation nu;
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arr = q.arrow(a);
        Relation r{arr.source, arr.target, {}};
        for (PathId p : q.paths_between(arr.source, arr.target)) {
            if (q.path(p).length() >= 2 && std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
                add_term(r, p, random_scalar(rng, f));
            }
        }
        nu.arrow_images.push_back(std::move(r));
    }
    return nu;
}

/// Constricted ideal: every path parallel to an arrow is killed; some
/// commutativity relations are added on hom-spaces without arrows.
inline std::shared_ptr<const Ideal> random_constricted(std::mt19937_64& rng, const std::shared_ptr<const Quiver>& q,
                                                       const Field& f) {
    std::vector<Relation> gens;
    std::map<std::pair<VertexId, VertexId>, std::vector<PathId>> free_pairs;
    for (PathId p = 0; p < q->path_count(); ++p) {
        const Path& path = q->path(p);
        if (path.length() < 2) {
            continue;
        }
        bool parallel_to_arrow = false;
        for (ArrowId a : q->outgoing(path.source)) {
            parallel_to_arrow = parallel_to_arrow || q->arrow(a).target == path.target;
        }
        if (parallel_to_arrow) {
            gens.push_back(single_path(*q, p, f));
        } else {
            free_pairs[{path.source, path.target}].push_back(p);
        }
    }
    for (const auto& [key, paths] : free_pairs) {
        if (paths.size() >= 2 && std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
            Relation r{key.first, key.second, {}};
            add_term(r, paths[0], f.one());
            add_term(r, paths[1], random_scalar(rng, f));
            gens.push_back(std::move(r));
        }
    }
    return std::make_shared<const Ideal>(q, f, gens);
}

} // namespace bqt
