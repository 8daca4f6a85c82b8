#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bq/cover.hpp"
#include "bq/error.hpp"
#include "bq/finite_group.hpp"
#include "bq/ideal.hpp"
#include "bq/quiver.hpp"
#include "bq/scalar.hpp"

namespace bq {

struct RelationSpec {
    std::vector<std::pair<mpq_class, std::string>> terms; // coefficient, path text
    std::size_t line = 0;
};

/// Ideals keep rational coefficients so the field can be chosen at load time.
struct IdealSpec {
    std::string name;
    std::string quiver;
    std::uint32_t characteristic = 0;
    std::vector<RelationSpec> relations;
    std::size_t line = 0;
};

struct GradingSpec {
    std::string name;
    std::string ideal;
    bool cyclic = true;
    std::size_t order = 1;    // cyclic groups
    std::size_t degree = 1;   // permutation groups
    std::vector<Permutation> generators;
    std::vector<std::pair<std::string, std::string>> degrees; // arrow, word
    std::size_t line = 0;
};

struct CoverSpec {
    std::string name;
    std::string base;
    std::string total;
    std::vector<std::pair<std::string, std::string>> projection;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> action;
    std::vector<std::pair<std::string, std::string>> representatives; // vertex, walk text
    bool complete = true;
    std::size_t radius = 0;
    std::string base_point;
    std::string kind = "file";
    std::size_t line = 0;
};

class Document {
  public:
    std::vector<std::shared_ptr<const Quiver>> quivers;
    std::vector<IdealSpec> ideals;
    std::vector<GradingSpec> gradings;
    std::vector<CoverSpec> covers;

    [[nodiscard]] std::shared_ptr<const Quiver> quiver(const std::string& name) const {
        for (const auto& q : quivers) {
            if (q->name() == name) {
                return q;
            }
        }
        throw DomainError("no quiver named '" + name + "'");
    }

    [[nodiscard]] const IdealSpec& ideal_spec(const std::string& name) const {
        for (const auto& s : ideals) {
            if (s.name == name) {
                return s;
            }
        }
        throw DomainError("no ideal named '" + name + "'");
    }

    /// `characteristic` overrides the declared one.
    [[nodiscard]] std::shared_ptr<const Ideal> ideal(const std::string& name,
                                                     std::optional<std::uint32_t> characteristic = {}) const {
        const IdealSpec& s = ideal_spec(name);
        auto q = quiver(s.quiver);
        Field f = Field::of_characteristic(characteristic ? *characteristic : s.characteristic);
        std::vector<Relation> gens;
        for (const RelationSpec& r : s.relations) {
            std::vector<std::pair<mpq_class, Path>> terms;
            try {
                for (const auto& [c, text] : r.terms) {
                    terms.emplace_back(c, parse_path(*q, text));
                }
                gens.push_back(make_relation(*q, f, terms));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), r.line, 0);
            } catch (const DomainError& e) {
                throw DomainError("ideal " + name + " line " + std::to_string(r.line) + ": " + e.what());
            }
        }
        return std::make_shared<const Ideal>(q, f, std::move(gens), name);
    }

    [[nodiscard]] const GradingSpec& grading_spec(const std::string& name) const {
        for (const auto& s : gradings) {
            if (s.name == name) {
                return s;
            }
        }
        throw DomainError("no grading named '" + name + "'");
    }

    [[nodiscard]] Grading grading(const std::string& name) const {
        const GradingSpec& s = grading_spec(name);
        const Quiver& q = *quiver(ideal_spec(s.ideal).quiver);
        Grading g{s.cyclic ? FiniteGroup::cyclic(s.order) : FiniteGroup(s.degree, s.generators), {}};
        g.degree.assign(q.arrow_count(), g.group.identity());
        for (const auto& [arrow, word] : s.degrees) {
            g.degree[q.arrow_id(arrow)] = group_word(g.group, s.cyclic, word);
        }
        return g;
    }

    [[nodiscard]] const CoverSpec& cover_spec(const std::string& name) const {
        for (const auto& s : covers) {
            if (s.name == name) {
                return s;
            }
        }
        throw DomainError("no cover named '" + name + "'");
    }

    [[nodiscard]] CoverQuiver cover(const std::string& name, std::optional<std::uint32_t> characteristic = {}) const {
        const CoverSpec& s = cover_spec(name);
        CoverQuiver cov;
        cov.base = ideal(s.base, characteristic);
        cov.total = ideal(s.total, characteristic);
        cov.complete = s.complete;
        cov.radius = s.radius;
        cov.kind = s.kind;
        const Quiver& tq = cov.total_quiver();
        const Quiver& bq = cov.base_quiver();
        cov.vertex_projection.assign(tq.vertex_count(), npos);
        cov.arrow_projection.assign(tq.arrow_count(), npos);
        for (const auto& [from, to] : s.projection) {
            auto v = tq.find_vertex(from);
            auto a = tq.find_arrow(from);
            if (v && a) {
                throw DomainError("cover " + name + ": '" + from + "' names both a vertex and an arrow");
            }
            if (v) {
                cov.vertex_projection[*v] = bq.vertex(to);
            } else if (a) {
                cov.arrow_projection[*a] = bq.arrow_id(to);
            } else {
                throw DomainError("cover " + name + ": unknown total vertex or arrow '" + from + "'");
            }
        }
        for (VertexId v = 0; v < tq.vertex_count(); ++v) {
            if (cov.vertex_projection[v] == npos) {
                throw DomainError("cover " + name + ": vertex " + tq.vertex_name(v) + " has no projection");
            }
        }
        for (ArrowId a = 0; a < tq.arrow_count(); ++a) {
            if (cov.arrow_projection[a] == npos) {
                throw DomainError("cover " + name + ": arrow " + tq.arrow(a).name + " has no projection");
            }
        }
        for (const auto& [label, pairs] : s.action) {
            DeckTransformation d;
            d.label = label;
            d.vertex_map.assign(tq.vertex_count(), npos);
            d.arrow_map.assign(tq.arrow_count(), npos);
            for (const auto& [from, to] : pairs) {
                if (auto v = tq.find_vertex(from)) {
                    d.vertex_map[*v] = tq.vertex(to);
                } else {
                    d.arrow_map[tq.arrow_id(from)] = tq.arrow_id(to);
                }
            }
            cov.action.push_back(std::move(d));
        }
        cov.base_point = s.base_point.empty() ? 0 : tq.vertex(s.base_point);
        if (!s.representatives.empty()) {
            cov.representatives.assign(tq.vertex_count(), Walk{});
            cov.depth.assign(tq.vertex_count(), 0);
            std::vector<bool> seen(tq.vertex_count(), false);
            for (const auto& [v, text] : s.representatives) {
                VertexId id = tq.vertex(v);
                cov.representatives[id] = walk_reduce(parse_walk(bq, text));
                cov.depth[id] = cov.representatives[id].length();
                seen[id] = true;
            }
            for (VertexId v = 0; v < tq.vertex_count(); ++v) {
                if (!seen[v]) {
                    throw DomainError("cover " + name + ": vertex " + tq.vertex_name(v) + " has no representative");
                }
            }
            if (s.kind == "universal") {
                HomotopyOptions opt;
                opt.base_point = cov.representatives[cov.base_point].source;
                cov.relation = homotopy_relation(cov.base, opt);
            }
        }
        return cov;
    }

    static std::size_t group_word(const FiniteGroup& g, bool cyclic, const std::string& word) {
        std::string w;
        for (char c : word) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                w += c;
            }
        }
        if (cyclic && !w.empty() && (std::isdigit(static_cast<unsigned char>(w[0])) || w[0] == '-')) {
            long k = std::stol(w);
            long n = static_cast<long>(g.order());
            k = ((k % n) + n) % n;
            std::size_t e = g.identity();
            for (long i = 0; i < k; ++i) {
                e = g.multiply(e, g.generator(0));
            }
            return e;
        }
        std::size_t e = g.identity();
        if (w == "e" || w.empty()) {
            return e;
        }
        for (const auto& part : detail::split_factors(w)) {
            std::string f = part;
            bool inv = false;
            if (f.size() > 3 && f.compare(f.size() - 3, 3, "^-1") == 0) {
                inv = true;
                f.resize(f.size() - 3);
            }
            if (f.size() < 2 || f[0] != 'g' ||
                !std::all_of(f.begin() + 1, f.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
                throw DomainError("bad group word '" + word + "'");
            }
            std::size_t k = std::stoul(f.substr(1));
            if (k == 0 || k > g.generators().size()) {
                throw DomainError("group word '" + word + "' uses an unknown generator");
            }
            std::size_t x = g.generator(k - 1);
            e = g.multiply(e, inv ? g.inverse(x) : x);
        }
        return e;
    }
};

namespace detail {

inline bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '#' || c == '\'' || c == '.' ||
           c == '[' || c == ']';
}

struct Token {
    enum Kind { Ident, Punct, End } kind = End;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {
        std::size_t i = 0;
        std::size_t line = 1;
        std::size_t col = 1;
        auto advance = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (text_[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
                ++i;
            }
        };
        while (i < text_.size()) {
            char c = text_[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '/') {
                while (i < text_.size() && text_[i] != '\n') {
                    advance(1);
                }
            } else if (ident_char(c)) {
                Token t{Token::Ident, "", line, col, i};
                std::size_t j = i;
                while (j < text_.size() && ident_char(text_[j])) {
                    ++j;
                }
                t.text = text_.substr(i, j - i);
                tokens_.push_back(t);
                advance(j - i);
            } else if (c == '-' && i + 1 < text_.size() && text_[i + 1] == '>') {
                tokens_.push_back(Token{Token::Punct, "->", line, col, i});
                advance(2);
            } else if (std::string("{};:*/+-()=^,").find(c) != std::string::npos) {
                tokens_.push_back(Token{Token::Punct, std::string(1, c), line, col, i});
                advance(1);
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            }
        }
        tokens_.push_back(Token{Token::End, "", line, col, text_.size()});
    }

    const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < tokens_.size() - 1) {
            ++pos_;
        }
        return t;
    }
    bool at(const std::string& s) const { return peek().kind != Token::End && peek().text == s; }
    bool accept(const std::string& s) {
        if (at(s)) {
            next();
            return true;
        }
        return false;
    }
    const Token& expect(const std::string& s) {
        if (!at(s)) {
            fail("expected '" + s + "'");
        }
        return next();
    }
    std::string ident(const std::string& what) {
        if (peek().kind != Token::Ident) {
            fail("expected " + what);
        }
        return next().text;
    }
    /// Source text from the current token up to (not including) the next `stop`.
    std::string raw_until(const std::string& stop) {
        std::size_t start = peek().offset;
        while (!at(stop)) {
            if (peek().kind == Token::End) {
                fail("expected '" + stop + "'");
            }
            next();
        }
        std::string s = text_.substr(start, peek().offset - start);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
            s.pop_back();
        }
        return s;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        throw ParseError(what + (t.kind == Token::End ? " at end of input" : ", found '" + t.text + "'"), t.line,
                         t.column);
    }

  private:
    const std::string& text_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

inline bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline std::size_t parse_count(Lexer& lx, const std::string& what) {
    if (!all_digits(lx.peek().text)) {
        lx.fail("expected " + what);
    }
    return std::stoul(lx.next().text);
}

inline std::shared_ptr<const Quiver> parse_quiver_block(Lexer& lx) {
    std::size_t line = lx.peek().line;
    std::string name = lx.ident("quiver name");
    lx.expect("{");
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<std::pair<std::string, std::string>> ends;
    std::map<std::string, std::size_t> arrow_line;
    while (!lx.accept("}")) {
        if (lx.accept("vertices")) {
            lx.expect(":");
            while (!lx.at(";")) {
                vertices.push_back(lx.ident("vertex name"));
            }
            lx.expect(";");
        } else if (lx.accept("arrow")) {
            std::size_t aline = lx.peek().line;
            std::string id = lx.ident("arrow id");
            lx.expect(":");
            std::string s = lx.ident("source vertex");
            lx.expect("->");
            std::string t = lx.ident("target vertex");
            lx.expect(";");
            arrows.push_back(Arrow{id, 0, 0});
            ends.emplace_back(s, t);
            arrow_line[id] = aline;
        } else {
            lx.fail("expected 'vertices', 'arrow' or '}'");
        }
    }
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        for (int side = 0; side < 2; ++side) {
            const std::string& v = side == 0 ? ends[i].first : ends[i].second;
            auto it = std::find(vertices.begin(), vertices.end(), v);
            if (it == vertices.end()) {
                throw ParseError("arrow " + arrows[i].name + " has dangling endpoint '" + v + "'",
                                 arrow_line[arrows[i].name], 0);
            }
            (side == 0 ? arrows[i].source : arrows[i].target) = static_cast<VertexId>(it - vertices.begin());
        }
    }
    try {
        return std::make_shared<const Quiver>(name, std::move(vertices), std::move(arrows));
    } catch (const DomainError& e) {
        throw ParseError("quiver " + name + ": " + e.what(), line, 0);
    }
}

inline mpq_class parse_scalar(Lexer& lx) {
    mpq_class v(lx.next().text);
    if (lx.accept("/")) {
        if (!all_digits(lx.peek().text)) {
            lx.fail("expected denominator");
        }
        mpz_class d(lx.next().text);
        if (d == 0) {
            lx.fail("zero denominator");
        }
        v /= d;
        v.canonicalize();
    }
    return v;
}

inline RelationSpec parse_relation(Lexer& lx) {
    RelationSpec r;
    r.line = lx.peek().line;
    bool first = true;
    while (!lx.at(";")) {
        mpq_class sign = 1;
        if (lx.accept("-")) {
            sign = -1;
        } else if (!lx.accept("+") && !first) {
            lx.fail("expected '+' or '-'");
        }
        first = false;
        mpq_class c = 1;
        if (all_digits(lx.peek().text) && (lx.peek(1).text == "*" || lx.peek(1).text == "/")) {
            c = parse_scalar(lx);
            lx.expect("*");
        }
        std::string path = lx.ident("path");
        while (lx.accept("*")) {
            path += "*" + lx.ident("arrow id");
        }
        if (lx.accept("(")) {
            // id(x)
            path += "(" + lx.ident("vertex") + ")";
            lx.expect(")");
        }
        r.terms.emplace_back(sign * c, path);
    }
    lx.expect(";");
    if (r.terms.empty()) {
        throw ParseError("empty relation", r.line, 0);
    }
    return r;
}

inline IdealSpec parse_ideal_block(Lexer& lx) {
    IdealSpec s;
    s.line = lx.peek().line;
    s.name = lx.ident("ideal name");
    lx.expect("over");
    s.quiver = lx.ident("quiver name");
    if (lx.accept("(")) {
        s.characteristic = static_cast<std::uint32_t>(parse_count(lx, "characteristic"));
        lx.expect(")");
    }
    lx.expect("{");
    while (!lx.accept("}")) {
        lx.expect("rel");
        s.relations.push_back(parse_relation(lx));
    }
    return s;
}

inline GradingSpec parse_grading_block(Lexer& lx) {
    GradingSpec s;
    s.line = lx.peek().line;
    s.name = lx.ident("grading name");
    lx.expect("over");
    s.ideal = lx.ident("ideal name");
    lx.expect("{");
    while (!lx.accept("}")) {
        if (lx.accept("group")) {
            if (lx.accept("cyclic")) {
                s.cyclic = true;
                s.order = parse_count(lx, "group order");
            } else if (lx.accept("perm")) {
                s.cyclic = false;
                s.degree = parse_count(lx, "permutation degree");
                lx.expect(":");
                while (lx.accept("(")) {
                    Permutation p;
                    while (!lx.accept(")")) {
                        p.push_back(parse_count(lx, "point"));
                    }
                    s.generators.push_back(std::move(p));
                }
            } else {
                lx.fail("expected 'cyclic' or 'perm'");
            }
            lx.expect(";");
        } else if (lx.accept("deg")) {
            std::string arrow = lx.ident("arrow id");
            lx.expect("=");
            s.degrees.emplace_back(arrow, lx.raw_until(";"));
            lx.expect(";");
        } else {
            lx.fail("expected 'group', 'deg' or '}'");
        }
    }
    return s;
}

inline std::vector<std::pair<std::string, std::string>> parse_map_block(Lexer& lx) {
    std::vector<std::pair<std::string, std::string>> out;
    lx.expect("{");
    while (!lx.accept("}")) {
        std::string a = lx.ident("name");
        lx.expect("->");
        std::string b = lx.ident("name");
        lx.expect(";");
        out.emplace_back(a, b);
    }
    return out;
}

inline CoverSpec parse_cover_block(Lexer& lx) {
    CoverSpec s;
    s.line = lx.peek().line;
    s.name = lx.ident("cover name");
    lx.expect("over");
    s.base = lx.ident("ideal name");
    lx.expect("{");
    while (!lx.accept("}")) {
        if (lx.accept("total")) {
            s.total = lx.ident("ideal name");
            lx.expect(";");
        } else if (lx.accept("projection")) {
            auto m = parse_map_block(lx);
            s.projection.insert(s.projection.end(), m.begin(), m.end());
        } else if (lx.accept("action")) {
            lx.expect("{");
            while (!lx.accept("}")) {
                std::string label = lx.ident("generator label");
                s.action.emplace_back(label, parse_map_block(lx));
            }
        } else if (lx.accept("rep")) {
            std::string v = lx.ident("vertex");
            lx.expect("=");
            s.representatives.emplace_back(v, lx.raw_until(";"));
            lx.expect(";");
        } else if (lx.accept("complete")) {
            s.complete = parse_count(lx, "0 or 1") != 0;
            lx.expect(";");
        } else if (lx.accept("radius")) {
            s.radius = parse_count(lx, "radius");
            lx.expect(";");
        } else if (lx.accept("base")) {
            s.base_point = lx.ident("vertex");
            lx.expect(";");
        } else if (lx.accept("kind")) {
            s.kind = lx.ident("kind");
            lx.expect(";");
        } else {
            lx.fail("unexpected cover entry");
        }
    }
    if (s.total.empty()) {
        throw ParseError("cover " + s.name + " has no total ideal", s.line, 0);
    }
    return s;
}

} // namespace detail

inline Document parse_document(const std::string& text) {
    detail::Lexer lx(text);
    Document doc;
    std::map<std::string, std::size_t> names;
    auto claim = [&](const std::string& n, std::size_t line) {
        if (names.count(n) != 0) {
            throw ParseError("duplicate name '" + n + "' (first used on line " + std::to_string(names[n]) + ")", line, 0);
        }
        names[n] = line;
    };
    // Dangling references and bad relations are reported at their block.
    auto at = [](std::size_t line, const auto& check) {
        try {
            check();
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line, 0);
        }
    };
    while (lx.peek().kind != detail::Token::End) {
        std::size_t line = lx.peek().line;
        if (lx.accept("quiver")) {
            auto q = detail::parse_quiver_block(lx);
            claim(q->name(), line);
            doc.quivers.push_back(q);
        } else if (lx.accept("ideal")) {
            auto s = detail::parse_ideal_block(lx);
            claim(s.name, line);
            doc.ideals.push_back(std::move(s));
            at(line, [&] { (void)doc.ideal(doc.ideals.back().name); });
        } else if (lx.accept("grading")) {
            auto s = detail::parse_grading_block(lx);
            claim(s.name, line);
            doc.gradings.push_back(std::move(s));
            at(line, [&] { (void)doc.grading(doc.gradings.back().name); });
        } else if (lx.accept("cover")) {
            auto s = detail::parse_cover_block(lx);
            claim(s.name, line);
            doc.covers.push_back(std::move(s));
        } else {
            lx.fail("expected 'quiver', 'ideal', 'grading' or 'cover'");
        }
    }
    return doc;
}

/// The first quiver declared in `text`.
inline std::shared_ptr<const Quiver> parse_quiver(const std::string& text) {
    Document d = parse_document(text);
    if (d.quivers.empty()) {
        throw ParseError("no quiver declared", 0, 0);
    }
    return d.quivers.front();
}

} // namespace bq
