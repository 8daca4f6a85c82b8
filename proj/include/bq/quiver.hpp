#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bq/error.hpp"

namespace bq {

using VertexId = std::size_t;
using ArrowId = std::size_t;
using PathId = std::size_t;

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Arrow {
    std::string name;
    VertexId source = 0;
    VertexId target = 0;

    friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// An oriented path. `arrows` lists the arrows in the order they are
/// traversed, so the path written d*c*b is stored as {b, c, d}.
struct Path {
    VertexId source = 0;
    VertexId target = 0;
    std::vector<ArrowId> arrows;

    [[nodiscard]] std::size_t length() const { return arrows.size(); }
    [[nodiscard]] bool is_trivial() const { return arrows.empty(); }

    friend bool operator==(const Path&, const Path&) = default;
};

/// Canonical total order on paths: length, then lexicographic in arrow
/// declaration order, then source (which only separates trivial paths).
struct PathLess {
    bool operator()(const Path& a, const Path& b) const {
        if (a.length() != b.length()) {
            return a.length() < b.length();
        }
        if (a.arrows != b.arrows) {
            return a.arrows < b.arrows;
        }
        return a.source < b.source;
    }
};

/// One letter of a walk: an arrow or its formal inverse.
struct Letter {
    ArrowId arrow = 0;
    bool inverse = false;

    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// An unoriented path; letters are listed in traversal order.
struct Walk {
    VertexId source = 0;
    VertexId target = 0;
    std::vector<Letter> letters;

    [[nodiscard]] std::size_t length() const { return letters.size(); }

    friend bool operator==(const Walk&, const Walk&) = default;
};

/// A finite quiver without oriented cycles. Construction validates the
/// input and precomputes the canonical list of all paths.
class Quiver {
  public:
    Quiver() : Quiver("empty", {"x"}, {}) {}

    Quiver(std::string name, std::vector<std::string> vertices, std::vector<Arrow> arrows)
        : name_(std::move(name)), vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
        validate();
        build_paths();
    }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
    [[nodiscard]] std::size_t arrow_count() const { return arrows_.size(); }
    [[nodiscard]] const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
    [[nodiscard]] const std::vector<std::string>& vertex_names() const { return vertices_; }
    [[nodiscard]] const Arrow& arrow(ArrowId a) const { return arrows_.at(a); }
    [[nodiscard]] const std::vector<Arrow>& arrows() const { return arrows_; }

    [[nodiscard]] std::optional<VertexId> find_vertex(const std::string& name) const {
        auto it = vertex_index_.find(name);
        if (it == vertex_index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    [[nodiscard]] std::optional<ArrowId> find_arrow(const std::string& name) const {
        auto it = arrow_index_.find(name);
        if (it == arrow_index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    [[nodiscard]] VertexId vertex(const std::string& name) const {
        auto v = find_vertex(name);
        if (!v) {
            throw DomainError("unknown vertex '" + name + "' in quiver " + name_);
        }
        return *v;
    }

    [[nodiscard]] ArrowId arrow_id(const std::string& name) const {
        auto a = find_arrow(name);
        if (!a) {
            throw DomainError("unknown arrow '" + name + "' in quiver " + name_);
        }
        return *a;
    }

    /// Arrows starting (resp. ending) at v, in declaration order.
    [[nodiscard]] const std::vector<ArrowId>& outgoing(VertexId v) const { return out_.at(v); }
    [[nodiscard]] const std::vector<ArrowId>& incoming(VertexId v) const { return in_.at(v); }

    /// Every path, trivial ones included, in canonical order. Path ids index this list.
    [[nodiscard]] const std::vector<Path>& paths() const { return paths_; }
    [[nodiscard]] const Path& path(PathId id) const { return paths_.at(id); }
    [[nodiscard]] std::size_t path_count() const { return paths_.size(); }

    /// Ids of the paths x -> y, ascending.
    [[nodiscard]] const std::vector<PathId>& paths_between(VertexId x, VertexId y) const {
        static const std::vector<PathId> none;
        auto it = hom_.find({x, y});
        return it == hom_.end() ? none : it->second;
    }
    [[nodiscard]] const std::vector<PathId>& paths_from(VertexId x) const { return from_.at(x); }
    [[nodiscard]] const std::vector<PathId>& paths_to(VertexId y) const { return to_.at(y); }

    [[nodiscard]] std::optional<PathId> find_path(const Path& p) const {
        if (p.is_trivial()) {
            return trivial_.at(p.source);
        }
        auto it = path_index_.find(p.arrows);
        if (it == path_index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    [[nodiscard]] PathId path_id(const Path& p) const {
        auto id = find_path(p);
        if (!id) {
            throw DomainError("not a path of quiver " + name_);
        }
        return *id;
    }

    [[nodiscard]] PathId trivial_path(VertexId v) const { return trivial_.at(v); }
    [[nodiscard]] PathId arrow_path(ArrowId a) const { return arrow_paths_.at(a); }

    /// The product outer * inner (inner traversed first); nullopt if not composable.
    [[nodiscard]] std::optional<PathId> compose(PathId outer, PathId inner) const {
        const Path& o = paths_[outer];
        const Path& i = paths_[inner];
        if (i.target != o.source) {
            return std::nullopt;
        }
        if (i.is_trivial()) {
            return outer;
        }
        if (o.is_trivial()) {
            return inner;
        }
        std::vector<ArrowId> joined = i.arrows;
        joined.insert(joined.end(), o.arrows.begin(), o.arrows.end());
        return path_index_.at(joined);
    }

    [[nodiscard]] std::size_t longest_path_length() const { return paths_.empty() ? 0 : paths_.back().length(); }

    /// Connected as an undirected graph.
    [[nodiscard]] bool is_connected() const {
        if (vertices_.empty()) {
            return true;
        }
        std::vector<bool> seen(vertices_.size(), false);
        std::queue<VertexId> todo;
        todo.push(0);
        seen[0] = true;
        std::size_t count = 1;
        while (!todo.empty()) {
            VertexId v = todo.front();
            todo.pop();
            auto visit = [&](VertexId w) {
                if (!seen[w]) {
                    seen[w] = true;
                    ++count;
                    todo.push(w);
                }
            };
            for (ArrowId a : out_[v]) {
                visit(arrows_[a].target);
            }
            for (ArrowId a : in_[v]) {
                visit(arrows_[a].source);
            }
        }
        return count == vertices_.size();
    }

    friend bool operator==(const Quiver& a, const Quiver& b) {
        return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_;
    }

  private:
    void validate() {
        if (vertices_.empty()) {
            throw DomainError("quiver " + name_ + " has no vertices");
        }
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (!vertex_index_.emplace(vertices_[i], i).second) {
                throw DomainError("duplicate vertex id '" + vertices_[i] + "' in quiver " + name_);
            }
        }
        out_.assign(vertices_.size(), {});
        in_.assign(vertices_.size(), {});
        for (std::size_t a = 0; a < arrows_.size(); ++a) {
            const Arrow& arr = arrows_[a];
            if (!arrow_index_.emplace(arr.name, a).second) {
                throw DomainError("duplicate arrow id '" + arr.name + "' in quiver " + name_);
            }
            if (arr.source >= vertices_.size() || arr.target >= vertices_.size()) {
                throw DomainError("arrow '" + arr.name + "' has a dangling endpoint");
            }
            if (vertex_index_.count(arr.name) != 0) {
                throw DomainError("id '" + arr.name + "' is used for both a vertex and an arrow");
            }
            out_[arr.source].push_back(a);
            in_[arr.target].push_back(a);
        }
        // Kahn's algorithm; leftovers lie on an oriented cycle.
        std::vector<std::size_t> indeg(vertices_.size(), 0);
        for (const Arrow& arr : arrows_) {
            ++indeg[arr.target];
        }
        std::queue<VertexId> ready;
        for (VertexId v = 0; v < vertices_.size(); ++v) {
            if (indeg[v] == 0) {
                ready.push(v);
            }
        }
        std::size_t removed = 0;
        while (!ready.empty()) {
            VertexId v = ready.front();
            ready.pop();
            ++removed;
            for (ArrowId a : out_[v]) {
                if (--indeg[arrows_[a].target] == 0) {
                    ready.push(arrows_[a].target);
                }
            }
        }
        if (removed != vertices_.size()) {
            throw DomainError("quiver " + name_ + " has an oriented cycle");
        }
    }

    void build_paths() {
        std::vector<Path> all;
        for (VertexId v = 0; v < vertices_.size(); ++v) {
            all.push_back(Path{v, v, {}});
        }
        // Extend every path by each outgoing arrow; terminates by acyclicity.
        std::vector<Path> frontier;
        for (ArrowId a = 0; a < arrows_.size(); ++a) {
            frontier.push_back(Path{arrows_[a].source, arrows_[a].target, {a}});
        }
        while (!frontier.empty()) {
            std::vector<Path> next;
            for (const Path& p : frontier) {
                for (ArrowId a : out_[p.target]) {
                    Path q = p;
                    q.arrows.push_back(a);
                    q.target = arrows_[a].target;
                    next.push_back(std::move(q));
                }
                all.push_back(p);
            }
            frontier = std::move(next);
        }
        std::sort(all.begin(), all.end(), PathLess{});
        paths_ = std::move(all);
        trivial_.assign(vertices_.size(), 0);
        arrow_paths_.assign(arrows_.size(), 0);
        from_.assign(vertices_.size(), {});
        to_.assign(vertices_.size(), {});
        for (PathId id = 0; id < paths_.size(); ++id) {
            const Path& p = paths_[id];
            if (p.is_trivial()) {
                trivial_[p.source] = id;
            } else {
                path_index_.emplace(p.arrows, id);
                if (p.length() == 1) {
                    arrow_paths_[p.arrows.front()] = id;
                }
            }
            hom_[{p.source, p.target}].push_back(id);
            from_[p.source].push_back(id);
            to_[p.target].push_back(id);
        }
    }

    std::string name_;
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::unordered_map<std::string, VertexId> vertex_index_;
    std::unordered_map<std::string, ArrowId> arrow_index_;
    std::vector<std::vector<ArrowId>> out_;
    std::vector<std::vector<ArrowId>> in_;
    std::vector<Path> paths_;
    std::map<std::vector<ArrowId>, PathId> path_index_;
    std::vector<PathId> trivial_;
    std::vector<PathId> arrow_paths_;
    std::map<std::pair<VertexId, VertexId>, std::vector<PathId>> hom_;
    std::vector<std::vector<PathId>> from_;
    std::vector<std::vector<PathId>> to_;
};

/// All paths of q (trivial ones included) in canonical order.
inline std::vector<Path> enumerate_paths(const Quiver& q) { return q.paths(); }

/// An arrow together with a different path parallel to it.
struct Bypass {
    ArrowId arrow = 0;
    Path path;

    friend bool operator==(const Bypass&, const Bypass&) = default;
};

using DoubleBypass = std::pair<Bypass, Bypass>;

/// Bypasses ordered by arrow, then by the canonical order of the path.
inline std::vector<Bypass> find_bypasses(const Quiver& q) {
    std::vector<Bypass> out;
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arr = q.arrow(a);
        for (PathId id : q.paths_between(arr.source, arr.target)) {
            if (id != q.arrow_path(a)) {
                out.push_back(Bypass{a, q.path(id)});
            }
        }
    }
    return out;
}

/// Pairs ((alpha,u),(beta,v)) of bypasses where beta occurs in u.
inline std::vector<DoubleBypass> find_double_bypasses(const Quiver& q) {
    std::vector<Bypass> all = find_bypasses(q);
    std::vector<DoubleBypass> out;
    for (const Bypass& first : all) {
        for (const Bypass& second : all) {
            if (std::find(first.path.arrows.begin(), first.path.arrows.end(), second.arrow) !=
                first.path.arrows.end()) {
                out.emplace_back(first, second);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Walks

inline Walk trivial_walk(VertexId v) { return Walk{v, v, {}}; }

inline Walk walk_of(const Path& p) {
    Walk w{p.source, p.target, {}};
    for (ArrowId a : p.arrows) {
        w.letters.push_back(Letter{a, false});
    }
    return w;
}

inline VertexId letter_source(const Quiver& q, Letter l) {
    return l.inverse ? q.arrow(l.arrow).target : q.arrow(l.arrow).source;
}

inline VertexId letter_target(const Quiver& q, Letter l) {
    return l.inverse ? q.arrow(l.arrow).source : q.arrow(l.arrow).target;
}

inline Walk inverse(const Walk& w) {
    Walk r{w.target, w.source, {}};
    r.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        r.letters.push_back(Letter{it->arrow, !it->inverse});
    }
    return r;
}

/// `first` followed by `second`.
inline Walk then(const Walk& first, const Walk& second) {
    if (first.target != second.source) {
        throw DomainError("walks are not composable");
    }
    Walk r{first.source, second.target, first.letters};
    r.letters.insert(r.letters.end(), second.letters.begin(), second.letters.end());
    return r;
}

/// Free reduction: cancels adjacent letter/inverse pairs.
inline Walk walk_reduce(const Walk& w) {
    Walk r{w.source, w.target, {}};
    r.letters.reserve(w.letters.size());
    for (const Letter& l : w.letters) {
        if (!r.letters.empty() && r.letters.back().arrow == l.arrow && r.letters.back().inverse != l.inverse) {
            r.letters.pop_back();
        } else {
            r.letters.push_back(l);
        }
    }
    return r;
}

/// Checks that consecutive letters chain up from source to target.
inline bool is_valid_walk(const Quiver& q, const Walk& w) {
    VertexId at = w.source;
    for (const Letter& l : w.letters) {
        if (l.arrow >= q.arrow_count() || letter_source(q, l) != at) {
            return false;
        }
        at = letter_target(q, l);
    }
    return at == w.target;
}

/// Vertex reached after the first `count` letters.
inline VertexId walk_vertex_at(const Quiver& q, const Walk& w, std::size_t count) {
    VertexId at = w.source;
    for (std::size_t i = 0; i < count; ++i) {
        at = letter_target(q, w.letters[i]);
    }
    return at;
}

/// Returns the path if every letter is forward.
inline std::optional<Path> as_path(const Walk& w) {
    Path p{w.source, w.target, {}};
    for (const Letter& l : w.letters) {
        if (l.inverse) {
            return std::nullopt;
        }
        p.arrows.push_back(l.arrow);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Text forms. Paths and walks are written right to left: d*c*b applies b first.

inline std::string to_string(const Quiver& q, const Path& p) {
    if (p.is_trivial()) {
        return "id(" + q.vertex_name(p.source) + ")";
    }
    std::string s;
    for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) {
        if (!s.empty()) {
            s += "*";
        }
        s += q.arrow(*it).name;
    }
    return s;
}

inline std::string to_string(const Quiver& q, const Walk& w) {
    if (w.letters.empty()) {
        return "id(" + q.vertex_name(w.source) + ")";
    }
    std::string s;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if (!s.empty()) {
            s += "*";
        }
        s += q.arrow(it->arrow).name;
        if (it->inverse) {
            s += "^-1";
        }
    }
    return s;
}

inline std::string to_string(const Quiver& q, const Bypass& b) {
    return "(" + q.arrow(b.arrow).name + ", " + to_string(q, b.path) + ")";
}

namespace detail {

inline std::vector<std::string> split_factors(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == '*') {
            parts.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::optional<VertexId> parse_identity(const Quiver& q, const std::string& text) {
    std::string t;
    for (char c : text) {
        if (c != ' ' && c != '\t') {
            t += c;
        }
    }
    if (t.size() > 4 && t.rfind("id(", 0) == 0 && t.back() == ')') {
        return q.vertex(t.substr(3, t.size() - 4));
    }
    return std::nullopt;
}

} // namespace detail

/// Parses `d*c*b` (or `id(x)`) into a path of q.
inline Path parse_path(const Quiver& q, const std::string& text) {
    if (auto v = detail::parse_identity(q, text)) {
        return Path{*v, *v, {}};
    }
    auto parts = detail::split_factors(text);
    Path p;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (it->empty()) {
            throw ParseError("empty factor in path '" + text + "'", 0, 0);
        }
        ArrowId a = q.arrow_id(*it);
        if (p.arrows.empty()) {
            p.source = q.arrow(a).source;
        } else if (q.arrow(p.arrows.back()).target != q.arrow(a).source) {
            throw DomainError("arrows of '" + text + "' do not compose");
        }
        p.arrows.push_back(a);
        p.target = q.arrow(a).target;
    }
    return p;
}

/// Parses `d^-1*d*a` into a walk of q.
inline Walk parse_walk(const Quiver& q, const std::string& text) {
    if (auto v = detail::parse_identity(q, text)) {
        return trivial_walk(*v);
    }
    auto parts = detail::split_factors(text);
    Walk w;
    bool first = true;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        std::string name = *it;
        bool inv = false;
        if (name.size() > 3 && name.compare(name.size() - 3, 3, "^-1") == 0) {
            inv = true;
            name.resize(name.size() - 3);
        }
        if (name.empty()) {
            throw ParseError("empty factor in walk '" + text + "'", 0, 0);
        }
        Letter l{q.arrow_id(name), inv};
        if (first) {
            w.source = letter_source(q, l);
            first = false;
        } else if (letter_source(q, l) != w.target) {
            throw DomainError("letters of '" + text + "' do not chain");
        }
        w.letters.push_back(l);
        w.target = letter_target(q, l);
    }
    return w;
}

} // namespace bq
