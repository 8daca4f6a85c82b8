#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bq/error.hpp"
#include "bq/group.hpp"
#include "bq/ideal.hpp"
#include "bq/integer_matrix.hpp"
#include "bq/quiver.hpp"

namespace bq {

enum class Verdict { Homotopic, NotHomotopic, Unknown };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Homotopic:
        return "Homotopic";
    case Verdict::NotHomotopic:
        return "NotHomotopic";
    default:
        return "Unknown";
    }
}

/// BFS spanning tree of the underlying graph. Arrows outside the tree
/// ("chords") index the generators of the fundamental group.
struct SpanningTree {
    VertexId root = 0;
    std::vector<int> chord_index; // per arrow, -1 for tree arrows
    std::vector<ArrowId> chords;
    std::vector<Walk> tree_walk; // root -> v inside the tree
};

/// `priority` lists the arrows in the order they are tried (default: declaration order).
inline SpanningTree bfs_spanning_tree(const Quiver& q, VertexId root, std::vector<ArrowId> priority = {}) {
    if (priority.empty()) {
        priority.resize(q.arrow_count());
        std::iota(priority.begin(), priority.end(), 0);
    }
    if (priority.size() != q.arrow_count()) {
        throw DomainError("arrow priority must list every arrow once");
    }
    if (root >= q.vertex_count()) {
        throw DomainError("base point out of range");
    }
    SpanningTree t;
    t.root = root;
    t.chord_index.assign(q.arrow_count(), -1);
    t.tree_walk.assign(q.vertex_count(), Walk{});
    std::vector<bool> seen(q.vertex_count(), false);
    std::vector<bool> in_tree(q.arrow_count(), false);
    seen[root] = true;
    t.tree_walk[root] = trivial_walk(root);
    std::queue<VertexId> todo;
    todo.push(root);
    while (!todo.empty()) {
        VertexId v = todo.front();
        todo.pop();
        for (ArrowId a : priority) {
            const Arrow& arr = q.arrow(a);
            if (arr.source == v && !seen[arr.target]) {
                seen[arr.target] = true;
                in_tree[a] = true;
                t.tree_walk[arr.target] = then(t.tree_walk[v], Walk{v, arr.target, {Letter{a, false}}});
                todo.push(arr.target);
            } else if (arr.target == v && !seen[arr.source]) {
                seen[arr.source] = true;
                in_tree[a] = true;
                t.tree_walk[arr.source] = then(t.tree_walk[v], Walk{v, arr.source, {Letter{a, true}}});
                todo.push(arr.source);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw DomainError("quiver " + q.name() + " is not connected");
    }
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        if (!in_tree[a]) {
            t.chord_index[a] = static_cast<int>(t.chords.size());
            t.chords.push_back(a);
        }
    }
    return t;
}

/// One elementary move: the walk `result` is the free reduction of
///   current[0, position) * c * p * q^-1 * c^-1 * current[position, end)
/// where (p, q) is generating pair `pair` (swapped when `reversed`) and c is
/// `conjugator`, a walk from the vertex at `position` to the common source of p and q.
struct HomotopyMove {
    std::size_t position = 0;
    Walk conjugator;
    std::size_t pair = 0;
    bool reversed = false;
    Walk result;
};

struct HomotopyDecision {
    Verdict verdict = Verdict::Unknown;
    Walk from; // reduced u
    Walk to;   // reduced v
    std::vector<HomotopyMove> chain;
    /// NotHomotopic: abelian image of the loop u * v^-1 (nonzero).
    IntVector abelian_image;
    /// NotHomotopic via coset enumeration: size of the finite quotient used.
    std::size_t coset_count = 0;
    /// NotHomotopic via a free quotient: image of each chord generator.
    std::vector<Word> free_images;
    /// NotHomotopic via a permutation quotient: image of each chord generator.
    std::vector<PermImage> perm_images;
    std::size_t states_explored = 0;
    std::string note;
};

/// Every pair of distinct parallel paths with its classification.
struct Fingerprint {
    std::vector<std::pair<PathId, PathId>> pairs;
    std::vector<Verdict> verdicts;

    [[nodiscard]] bool has_unknown() const {
        return std::find(verdicts.begin(), verdicts.end(), Verdict::Unknown) != verdicts.end();
    }

    [[nodiscard]] Verdict verdict(PathId p, PathId q) const {
        if (p == q) {
            return Verdict::Homotopic;
        }
        auto key = std::minmax(p, q);
        auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(key.first, key.second));
        if (it == pairs.end() || *it != std::make_pair(key.first, key.second)) {
            throw DomainError("paths are not parallel");
        }
        return verdicts[static_cast<std::size_t>(it - pairs.begin())];
    }

    [[nodiscard]] std::size_t homotopic_count() const {
        return static_cast<std::size_t>(std::count(verdicts.begin(), verdicts.end(), Verdict::Homotopic));
    }

    [[nodiscard]] std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            h = (h ^ (pairs[i].first * 31 + pairs[i].second)) * 1099511628211ULL;
            h = (h ^ static_cast<std::size_t>(verdicts[i])) * 1099511628211ULL;
        }
        return h;
    }

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct HomotopyOptions {
    VertexId base_point = 0;
    /// Bound on the chord-word length of intermediate states; 0 picks 2 * longest path + 4.
    std::size_t cap = 0;
    std::size_t state_limit = 20000;
    bool coset_enumeration = false;
    std::size_t coset_limit = 10000;
    /// Classify hom-pairs on several threads.
    bool parallel = false;
    std::vector<ArrowId> tree_priority;
};

/// The homotopy relation generated by a set of pairs of parallel paths,
/// usually the pairs sharing a minimal relation of an ideal.
class HomotopyRelation {
  public:
    HomotopyRelation(std::shared_ptr<const Ideal> ideal, HomotopyOptions options = {})
        : quiver_(ideal->quiver_ptr()), ideal_(std::move(ideal)), options_(std::move(options)) {
        for (const Relation& r : minimal_relations(*ideal_)) {
            auto support = r.support();
            for (std::size_t i = 0; i < support.size(); ++i) {
                for (std::size_t j = i + 1; j < support.size(); ++j) {
                    pairs_.emplace_back(support[i], support[j]);
                }
            }
        }
        build();
    }

    HomotopyRelation(std::shared_ptr<const Quiver> quiver, std::vector<std::pair<PathId, PathId>> pairs,
                     HomotopyOptions options = {})
        : quiver_(std::move(quiver)), pairs_(std::move(pairs)), options_(std::move(options)) {
        for (auto [p, q] : pairs_) {
            const Path& a = quiver_->path(p);
            const Path& b = quiver_->path(q);
            if (a.source != b.source || a.target != b.target) {
                throw DomainError("generating pair " + to_string(*quiver_, a) + ", " + to_string(*quiver_, b) +
                                  " is not parallel");
            }
        }
        build();
    }

    HomotopyRelation(const HomotopyRelation&) = delete;
    HomotopyRelation& operator=(const HomotopyRelation&) = delete;

    [[nodiscard]] const Quiver& quiver() const { return *quiver_; }
    [[nodiscard]] const std::shared_ptr<const Quiver>& quiver_ptr() const { return quiver_; }
    /// Null when built from explicit pairs.
    [[nodiscard]] const std::shared_ptr<const Ideal>& ideal() const { return ideal_; }
    [[nodiscard]] VertexId base_point() const { return tree_.root; }
    [[nodiscard]] const SpanningTree& tree() const { return tree_; }
    [[nodiscard]] const std::vector<std::pair<PathId, PathId>>& generating_pairs() const { return pairs_; }
    [[nodiscard]] const GroupPresentation& presentation() const { return presentation_; }
    [[nodiscard]] const SmithForm& smith() const { return *smith_; }
    [[nodiscard]] const HomotopyOptions& options() const { return options_; }

    [[nodiscard]] std::size_t default_cap() const {
        return options_.cap != 0 ? options_.cap : 2 * quiver_->longest_path_length() + 4;
    }

    /// Chord letters of a walk, i.e. its class in the free group pi_1(Q).
    [[nodiscard]] Word word_of(const Walk& w) const {
        Word out;
        for (const Letter& l : w.letters) {
            int g = tree_.chord_index[l.arrow];
            if (g >= 0) {
                out.push_back(l.inverse ? -(g + 1) : g + 1);
            }
        }
        return free_reduce(out);
    }

    /// The reduced walk x -> y whose chord word is w.
    [[nodiscard]] Walk walk_of_word(const Word& w, VertexId x, VertexId y) const {
        Walk cur = inverse(tree_.tree_walk[x]);
        for (int l : w) {
            ArrowId a = tree_.chords.at(static_cast<std::size_t>(std::abs(l)) - 1);
            const Arrow& arr = quiver_->arrow(a);
            Walk loop = then(then(tree_.tree_walk[arr.source], Walk{arr.source, arr.target, {Letter{a, false}}}),
                             inverse(tree_.tree_walk[arr.target]));
            cur = then(cur, l > 0 ? loop : inverse(loop));
        }
        return walk_reduce(then(cur, tree_.tree_walk[y]));
    }

    /// Abelian class of a loop word.
    [[nodiscard]] IntVector abelian_image(const Word& w) const {
        return smith_->image(exponent_vector(w, tree_.chords.size()));
    }

    [[nodiscard]] HomotopyDecision decide(const Walk& u, const Walk& v, std::size_t cap = 0) const {
        if (!is_valid_walk(*quiver_, u) || !is_valid_walk(*quiver_, v)) {
            throw DomainError("invalid walk");
        }
        if (u.source != v.source || u.target != v.target) {
            throw DomainError("walks " + to_string(*quiver_, u) + " and " + to_string(*quiver_, v) +
                              " are not parallel");
        }
        HomotopyDecision d;
        d.from = walk_reduce(u);
        d.to = walk_reduce(v);
        Word wu = word_of(u);
        Word wv = word_of(v);
        Word loop = concat(wu, inverse_word(wv));
        IntVector img = abelian_image(loop);
        if (std::any_of(img.begin(), img.end(), [](const mpz_class& c) { return c != 0; })) {
            d.verdict = Verdict::NotHomotopic;
            d.abelian_image = std::move(img);
            d.note = "loop has nonzero image in the abelianization";
            return d;
        }
        const TietzeReduction& tz = tietze();
        const Word reduced = map_word(loop, tz.images);
        if (tz.is_free() && !reduced.empty()) {
            d.verdict = Verdict::NotHomotopic;
            d.free_images = tz.images;
            d.note = "loop survives in a free quotient";
            return d;
        }
        if (!reduced.empty() && separated_by_known_quotient(reduced, d)) {
            return d;
        }
        const std::size_t c = cap == 0 ? default_cap() : cap;
        if (search(wu, wv, u.source, u.target, c, d)) {
            d.verdict = Verdict::Homotopic;
            return d;
        }
        if (tz.is_free()) {
            // reduced is empty: trivial in pi_1, retry the chain with more room
            HomotopyDecision wide = d;
            if (search(wu, wv, u.source, u.target, 2 * c + loop.size(), wide)) {
                wide.verdict = Verdict::Homotopic;
                return wide;
            }
            d.verdict = Verdict::Homotopic;
            d.note = "trivial after eliminating generators; no explicit chain within the cap";
            return d;
        }
        if (!reduced.empty()) {
            if (auto perms = separating_permutations(tz.generator_count, tz.relators, reduced)) {
                {
                    std::lock_guard<std::mutex> lock(quotient_mutex_);
                    quotients_.push_back(*perms);
                }
                record_quotient(*perms, d);
                return d;
            }
        }
        if (options_.coset_enumeration) {
            if (const CosetTable* table = coset_table()) {
                if (!table->is_trivial(loop)) {
                    d.verdict = Verdict::NotHomotopic;
                    d.coset_count = table->size();
                    d.note = "loop acts nontrivially on a finite coset table";
                    return d;
                }
                d.note = "trivial in the finite quotient but no chain found within the cap";
            }
        }
        if (d.note.empty()) {
            d.note = "no chain within the cap and the abelianization is blind";
        }
        return d;
    }

    [[nodiscard]] const TietzeReduction& tietze() const {
        std::call_once(tietze_once_, [this] { tietze_ = tietze_reduce(presentation_); });
        return tietze_;
    }

    [[nodiscard]] HomotopyDecision decide_paths(PathId p, PathId q, std::size_t cap = 0) const {
        return decide(walk_of(quiver_->path(p)), walk_of(quiver_->path(q)), cap);
    }

    /// Classification of all parallel path pairs (computed on first use).
    [[nodiscard]] const Fingerprint& fingerprint() const {
        std::call_once(fingerprint_once_, [this] { compute_fingerprint(); });
        return fingerprint_;
    }

    [[nodiscard]] Verdict verdict(PathId p, PathId q) const { return fingerprint().verdict(p, q); }

  private:
    void build() {
        if (!quiver_->is_connected()) {
            throw DomainError("quiver " + quiver_->name() + " is not connected");
        }
        tree_ = bfs_spanning_tree(*quiver_, options_.base_point, options_.tree_priority);
        std::vector<std::string> names;
        for (ArrowId a : tree_.chords) {
            names.push_back(quiver_->arrow(a).name);
        }
        for (auto [p, q] : pairs_) {
            relator_words_.push_back(
                concat(word_of(walk_of(quiver_->path(p))), inverse_word(word_of(walk_of(quiver_->path(q))))));
        }
        presentation_ = make_presentation(names, relator_words_);
        smith_ = std::make_shared<SmithForm>(presentation_.relator_matrix());
    }

    void record_quotient(const std::vector<PermImage>& perms, HomotopyDecision& d) const {
        const std::size_t n = perms.empty() ? 0 : perms.front().size();
        for (const Word& img : tietze().images) {
            d.perm_images.push_back(perm_word(img, perms, n));
        }
        d.verdict = Verdict::NotHomotopic;
        d.note = "loop acts nontrivially in a permutation quotient";
    }

    bool separated_by_known_quotient(const Word& reduced, HomotopyDecision& d) const {
        std::vector<std::vector<PermImage>> known;
        {
            std::lock_guard<std::mutex> lock(quotient_mutex_);
            known = quotients_;
        }
        for (const auto& perms : known) {
            const std::size_t n = perms.empty() ? 0 : perms.front().size();
            PermImage id(n);
            std::iota(id.begin(), id.end(), 0);
            if (perm_word(reduced, perms, n) != id) {
                record_quotient(perms, d);
                return true;
            }
        }
        return false;
    }

    struct SearchMove {
        std::size_t position;
        std::size_t pair;
        bool reversed;
        std::size_t rotation;
    };

    /// Best-first search from word a to word b, inserting conjugates of
    /// relators. States are reduced words no longer than cap.
    bool search(const Word& a, const Word& b, VertexId x, VertexId y, std::size_t cap, HomotopyDecision& d) const {
        if (a == b) {
            return true;
        }
        std::map<Word, std::size_t> index;
        std::vector<Word> states;
        std::vector<std::pair<std::size_t, SearchMove>> parent;
        using Entry = std::pair<std::size_t, std::size_t>; // (length, state)
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
        index.emplace(a, 0);
        states.push_back(a);
        parent.push_back({0, SearchMove{}});
        open.emplace(a.size(), 0);
        std::optional<std::size_t> goal;
        while (!open.empty() && !goal) {
            auto [len, s] = open.top();
            open.pop();
            const Word cur = states[s];
            for (std::size_t pos = 0; pos <= cur.size() && !goal; ++pos) {
                for (std::size_t k = 0; k < relator_words_.size() && !goal; ++k) {
                    for (bool rev : {false, true}) {
                        const Word rel = rev ? inverse_word(relator_words_[k]) : relator_words_[k];
                        for (std::size_t rot = 0; rot < std::max<std::size_t>(rel.size(), 1); ++rot) {
                            Word rho(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(rot));
                            Word ins = concat(concat(inverse_word(rho), rel), rho);
                            Word next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(pos));
                            next.insert(next.end(), ins.begin(), ins.end());
                            next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(pos), cur.end());
                            next = free_reduce(next);
                            if (next.size() > cap || index.count(next) != 0) {
                                continue;
                            }
                            index.emplace(next, states.size());
                            states.push_back(next);
                            parent.push_back({s, SearchMove{pos, k, rev, rot}});
                            if (next == b) {
                                goal = states.size() - 1;
                                break;
                            }
                            open.emplace(next.size(), states.size() - 1);
                            if (states.size() >= options_.state_limit) {
                                d.states_explored = states.size();
                                return false;
                            }
                        }
                        if (goal) {
                            break;
                        }
                    }
                }
            }
        }
        d.states_explored = states.size();
        if (!goal) {
            return false;
        }
        std::vector<std::size_t> trail;
        for (std::size_t s = *goal; s != 0; s = parent[s].first) {
            trail.push_back(s);
        }
        std::reverse(trail.begin(), trail.end());
        Walk cur = walk_of_word(a, x, y);
        for (std::size_t s : trail) {
            d.chain.push_back(translate(cur, parent[s].second, states[parent[s].first]));
            cur = d.chain.back().result;
            if (word_of(cur) != states[s]) {
                throw Error("internal: homotopy move does not match its word");
            }
        }
        return true;
    }

    /// Turns a word-level insertion into a walk-level move on `cur`.
    HomotopyMove translate(const Walk& cur, const SearchMove& m, const Word& word) const {
        (void)word;
        HomotopyMove mv;
        mv.pair = m.pair;
        mv.reversed = m.reversed;
        // Walk position right after the m.position-th chord letter.
        std::size_t chords_seen = 0;
        std::size_t pos = 0;
        if (m.position > 0) {
            for (std::size_t i = 0; i < cur.letters.size(); ++i) {
                if (tree_.chord_index[cur.letters[i].arrow] >= 0) {
                    ++chords_seen;
                    if (chords_seen == m.position) {
                        pos = i + 1;
                        break;
                    }
                }
            }
        }
        mv.position = pos;
        VertexId z = walk_vertex_at(*quiver_, cur, pos);
        auto [p, q] = pairs_[m.pair];
        const Path& pp = quiver_->path(m.reversed ? q : p);
        const Word rel = m.reversed ? inverse_word(relator_words_[m.pair]) : relator_words_[m.pair];
        Word rho(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(m.rotation));
        Walk g = walk_of_word(rho, tree_.root, tree_.root);
        mv.conjugator =
            walk_reduce(then(then(inverse(tree_.tree_walk[z]), inverse(g)), tree_.tree_walk[pp.source]));
        mv.result = apply_move(cur, mv);
        return mv;
    }

  public:
    /// Replays a single move on `cur` (no check of the stored result).
    [[nodiscard]] Walk apply_move(const Walk& cur, const HomotopyMove& mv) const {
        auto [p, q] = pairs_.at(mv.pair);
        if (mv.reversed) {
            std::swap(p, q);
        }
        Walk loop = then(then(then(mv.conjugator, walk_of(quiver_->path(p))), inverse(walk_of(quiver_->path(q)))),
                         inverse(mv.conjugator));
        Walk head{cur.source, walk_vertex_at(*quiver_, cur, mv.position),
                  std::vector<Letter>(cur.letters.begin(),
                                      cur.letters.begin() + static_cast<std::ptrdiff_t>(mv.position))};
        Walk tail{head.target, cur.target,
                  std::vector<Letter>(cur.letters.begin() + static_cast<std::ptrdiff_t>(mv.position),
                                      cur.letters.end())};
        return walk_reduce(then(then(head, loop), tail));
    }

  private:
    const CosetTable* coset_table() const {
        std::call_once(coset_once_, [this] {
            auto t = enumerate_cosets(presentation_, options_.coset_limit);
            if (t) {
                coset_table_ = std::make_shared<CosetTable>(std::move(*t));
            }
        });
        return coset_table_.get();
    }

    void classify_hom(const std::vector<PathId>& paths, std::map<std::pair<PathId, PathId>, Verdict>& out) const {
        const std::size_t n = paths.size();
        std::vector<IntVector> images;
        for (PathId p : paths) {
            images.push_back(abelian_image(word_of(walk_of(quiver_->path(p)))));
        }
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
            return parent[i] == i ? i : parent[i] = find(parent[i]);
        };
        std::vector<std::vector<Verdict>> v(n, std::vector<Verdict>(n, Verdict::Unknown));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (images[i] != images[j]) {
                    v[i][j] = Verdict::NotHomotopic;
                } else if (find(i) == find(j)) {
                    v[i][j] = Verdict::Homotopic;
                } else {
                    HomotopyDecision d = decide_paths(paths[i], paths[j]);
                    v[i][j] = d.verdict;
                    if (d.verdict == Verdict::Homotopic) {
                        parent[find(i)] = find(j);
                    }
                }
            }
        }
        // Transitivity fixes pairs left open.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (v[i][j] != Verdict::Unknown) {
                    continue;
                }
                if (find(i) == find(j)) {
                    v[i][j] = Verdict::Homotopic;
                    continue;
                }
                for (std::size_t k = 0; k < n && v[i][j] == Verdict::Unknown; ++k) {
                    for (std::size_t l = k + 1; l < n; ++l) {
                        bool same_classes = (find(k) == find(i) && find(l) == find(j)) ||
                                            (find(k) == find(j) && find(l) == find(i));
                        if (same_classes && v[k][l] == Verdict::NotHomotopic) {
                            v[i][j] = Verdict::NotHomotopic;
                            break;
                        }
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                out[std::minmax(paths[i], paths[j])] = v[i][j];
            }
        }
    }

    void compute_fingerprint() const {
        std::vector<const std::vector<PathId>*> homs;
        for (VertexId x = 0; x < quiver_->vertex_count(); ++x) {
            for (VertexId y = 0; y < quiver_->vertex_count(); ++y) {
                const auto& ps = quiver_->paths_between(x, y);
                if (ps.size() >= 2) {
                    homs.push_back(&ps);
                }
            }
        }
        std::vector<std::map<std::pair<PathId, PathId>, Verdict>> parts(homs.size());
        if (options_.parallel && homs.size() > 1) {
            std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < homs.size(); i += workers) {
                            classify_hom(*homs[i], parts[i]);
                        }
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) {
                t.join();
            }
            for (auto& e : errors) {
                if (e) {
                    std::rethrow_exception(e);
                }
            }
        } else {
            for (std::size_t i = 0; i < homs.size(); ++i) {
                classify_hom(*homs[i], parts[i]);
            }
        }
        std::map<std::pair<PathId, PathId>, Verdict> all;
        for (auto& part : parts) {
            all.insert(part.begin(), part.end());
        }
        for (auto& [key, v] : all) {
            fingerprint_.pairs.push_back(key);
            fingerprint_.verdicts.push_back(v);
        }
    }

    std::shared_ptr<const Quiver> quiver_;
    std::shared_ptr<const Ideal> ideal_;
    std::vector<std::pair<PathId, PathId>> pairs_;
    HomotopyOptions options_;
    SpanningTree tree_;
    std::vector<Word> relator_words_;
    GroupPresentation presentation_;
    mutable std::once_flag tietze_once_;
    mutable TietzeReduction tietze_;
    mutable std::mutex quotient_mutex_;
    mutable std::vector<std::vector<PermImage>> quotients_; // on the reduced generators
    std::shared_ptr<SmithForm> smith_;
    mutable std::once_flag fingerprint_once_;
    mutable Fingerprint fingerprint_;
    mutable std::once_flag coset_once_;
    mutable std::shared_ptr<CosetTable> coset_table_;
};

using HomotopyPtr = std::shared_ptr<const HomotopyRelation>;

inline HomotopyPtr homotopy_relation(std::shared_ptr<const Ideal> ideal, HomotopyOptions options = {}) {
    return std::make_shared<const HomotopyRelation>(std::move(ideal), std::move(options));
}

inline HomotopyPtr homotopy_relation(const Ideal& ideal, HomotopyOptions options = {}) {
    return homotopy_relation(std::make_shared<const Ideal>(ideal), std::move(options));
}

inline HomotopyPtr homotopy_relation_from_pairs(std::shared_ptr<const Quiver> q,
                                                std::vector<std::pair<PathId, PathId>> pairs,
                                                HomotopyOptions options = {}) {
    return std::make_shared<const HomotopyRelation>(std::move(q), std::move(pairs), std::move(options));
}

inline HomotopyDecision decide_homotopic(const HomotopyRelation& h, const Walk& u, const Walk& v,
                                         std::size_t cap = 0) {
    return h.decide(u, v, cap);
}

inline const GroupPresentation& pi1_presentation(const HomotopyRelation& h) { return h.presentation(); }

/// Replays a Homotopic chain move by move.
inline bool verify_chain(const HomotopyRelation& h, const Walk& u, const Walk& v,
                         const std::vector<HomotopyMove>& chain) {
    const Quiver& q = h.quiver();
    Walk cur = walk_reduce(u);
    for (const HomotopyMove& mv : chain) {
        if (mv.position > cur.length() || mv.pair >= h.generating_pairs().size()) {
            return false;
        }
        auto [p, r] = h.generating_pairs()[mv.pair];
        VertexId start = q.path(mv.reversed ? r : p).source;
        if (!is_valid_walk(q, mv.conjugator) || mv.conjugator.source != walk_vertex_at(q, cur, mv.position) ||
            mv.conjugator.target != start) {
            return false;
        }
        Walk next = h.apply_move(cur, mv);
        if (!(next == mv.result)) {
            return false;
        }
        cur = next;
    }
    return cur == walk_reduce(v);
}

/// Recomputes the abelian certificate of a NotHomotopic decision.
/// Checks a free or permutation quotient stored in `d`: every relator dies,
/// the loop u * v^-1 does not.
inline bool verify_quotient_certificate(const HomotopyRelation& h, const Walk& u, const Walk& v,
                                        const HomotopyDecision& d) {
    const auto& rels = h.presentation().relators;
    Word loop = concat(h.word_of(u), inverse_word(h.word_of(v)));
    const std::size_t gens = h.presentation().generator_count();
    if (d.free_images.size() == gens && gens > 0) {
        return std::all_of(rels.begin(), rels.end(), [&](const Word& r) { return map_word(r, d.free_images).empty(); }) &&
               !map_word(loop, d.free_images).empty();
    }
    if (d.perm_images.size() == gens && gens > 0) {
        const std::size_t n = d.perm_images.front().size();
        PermImage id(n);
        std::iota(id.begin(), id.end(), 0);
        return std::all_of(rels.begin(), rels.end(), [&](const Word& r) { return perm_word(r, d.perm_images, n) == id; }) &&
               perm_word(loop, d.perm_images, n) != id;
    }
    return false;
}

inline bool verify_abelian_certificate(const HomotopyRelation& h, const Walk& u, const Walk& v) {
    IntVector img = h.abelian_image(concat(h.word_of(u), inverse_word(h.word_of(v))));
    return std::any_of(img.begin(), img.end(), [](const mpz_class& c) { return c != 0; });
}

enum class Comparison { Equal, Different, Unknown };

struct RelationComparison {
    Comparison result = Comparison::Unknown;
    std::optional<std::pair<PathId, PathId>> witness;
    Verdict first = Verdict::Unknown;
    Verdict second = Verdict::Unknown;
};

inline RelationComparison relations_equal(const HomotopyRelation& a, const HomotopyRelation& b) {
    if (!(a.quiver() == b.quiver())) {
        throw DomainError("homotopy relations live on different quivers");
    }
    const Fingerprint& fa = a.fingerprint();
    const Fingerprint& fb = b.fingerprint();
    RelationComparison out;
    bool unknown = false;
    for (std::size_t i = 0; i < fa.pairs.size(); ++i) {
        Verdict va = fa.verdicts[i];
        Verdict vb = fb.verdicts[i];
        if (va == Verdict::Unknown || vb == Verdict::Unknown) {
            unknown = true;
            continue;
        }
        if (va != vb) {
            out.result = Comparison::Different;
            out.witness = fa.pairs[i];
            out.first = va;
            out.second = vb;
            return out;
        }
    }
    out.result = unknown ? Comparison::Unknown : Comparison::Equal;
    return out;
}

} // namespace bq
