#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bq/cover.hpp"
#include "bq/dsl.hpp"
#include "bq/gamma.hpp"
#include "bq/homotopy.hpp"

namespace bq {

using Json = nlohmann::ordered_json;

// ---- specs from live objects ----

/// An ideal written out through its Groebner basis, so reloading it gives
/// back the same spaces.
inline IdealSpec spec_of(const Ideal& ideal, const std::string& name) {
    const Quiver& q = ideal.quiver();
    IdealSpec s;
    s.name = name;
    s.quiver = q.name();
    s.characteristic = ideal.field().characteristic();
    for (VertexId x = 0; x < q.vertex_count(); ++x) {
        for (VertexId y = 0; y < q.vertex_count(); ++y) {
            for (const Relation& r : ideal.groebner_basis(x, y)) {
                RelationSpec rs;
                for (auto it = r.terms.rbegin(); it != r.terms.rend(); ++it) {
                    rs.terms.emplace_back(it->second.value(), to_string(q, q.path(it->first)));
                }
                s.relations.push_back(std::move(rs));
            }
        }
    }
    return s;
}

inline void add_quiver(Document& doc, const std::shared_ptr<const Quiver>& q) {
    for (const auto& have : doc.quivers) {
        if (have->name() == q->name()) {
            return;
        }
    }
    doc.quivers.push_back(q);
}

inline void add_ideal(Document& doc, const Ideal& ideal, const std::string& name) {
    add_quiver(doc, ideal.quiver_ptr());
    for (auto& s : doc.ideals) {
        if (s.name == name) {
            s = spec_of(ideal, name);
            return;
        }
    }
    doc.ideals.push_back(spec_of(ideal, name));
}

inline void add_cover(Document& doc, const CoverQuiver& cov, const std::string& name, const std::string& base_name) {
    add_ideal(doc, *cov.base, base_name);
    add_ideal(doc, *cov.total, name + "_total");
    const Quiver& tq = cov.total_quiver();
    const Quiver& bq = cov.base_quiver();
    CoverSpec s;
    s.name = name;
    s.base = base_name;
    s.total = name + "_total";
    for (VertexId v = 0; v < tq.vertex_count(); ++v) {
        s.projection.emplace_back(tq.vertex_name(v), bq.vertex_name(cov.vertex_projection[v]));
    }
    for (ArrowId a = 0; a < tq.arrow_count(); ++a) {
        s.projection.emplace_back(tq.arrow(a).name, bq.arrow(cov.arrow_projection[a]).name);
    }
    for (const DeckTransformation& d : cov.action) {
        std::vector<std::pair<std::string, std::string>> m;
        for (VertexId v = 0; v < d.vertex_map.size(); ++v) {
            if (d.vertex_map[v] != npos) {
                m.emplace_back(tq.vertex_name(v), tq.vertex_name(d.vertex_map[v]));
            }
        }
        for (ArrowId a = 0; a < d.arrow_map.size(); ++a) {
            if (d.arrow_map[a] != npos) {
                m.emplace_back(tq.arrow(a).name, tq.arrow(d.arrow_map[a]).name);
            }
        }
        s.action.emplace_back(d.label, std::move(m));
    }
    for (VertexId v = 0; v < cov.representatives.size(); ++v) {
        s.representatives.emplace_back(tq.vertex_name(v), to_string(bq, cov.representatives[v]));
    }
    s.complete = cov.complete;
    s.radius = cov.radius;
    s.base_point = tq.vertex_name(cov.base_point);
    s.kind = cov.kind;
    doc.covers.push_back(std::move(s));
}

// ---- DSL text ----

inline std::string to_dsl(const Quiver& q) {
    std::ostringstream os;
    os << "quiver " << q.name() << " {\n  vertices:";
    for (const auto& v : q.vertex_names()) {
        os << ' ' << v;
    }
    os << ";\n";
    for (const Arrow& a : q.arrows()) {
        os << "  arrow " << a.name << ": " << q.vertex_name(a.source) << " -> " << q.vertex_name(a.target) << ";\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string relation_text(const RelationSpec& r) {
    std::string s;
    for (const auto& [c, path] : r.terms) {
        mpq_class v = c;
        bool neg = sgn(v) < 0;
        if (neg) {
            v = -v;
        }
        s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (v != 1) {
            s += v.get_str() + "*";
        }
        s += path;
    }
    return s;
}

inline std::string to_dsl(const IdealSpec& s) {
    std::ostringstream os;
    os << "ideal " << s.name << " over " << s.quiver << "(" << s.characteristic << ") {\n";
    for (const auto& r : s.relations) {
        os << "  rel " << relation_text(r) << ";\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string to_dsl(const GradingSpec& s) {
    std::ostringstream os;
    os << "grading " << s.name << " over " << s.ideal << " {\n  group ";
    if (s.cyclic) {
        os << "cyclic " << s.order << ";\n";
    } else {
        os << "perm " << s.degree << ":";
        for (const auto& p : s.generators) {
            os << " (";
            for (std::size_t i = 0; i < p.size(); ++i) {
                os << (i ? " " : "") << p[i];
            }
            os << ")";
        }
        os << ";\n";
    }
    for (const auto& [a, w] : s.degrees) {
        os << "  deg " << a << " = " << w << ";\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string to_dsl(const CoverSpec& s) {
    std::ostringstream os;
    os << "cover " << s.name << " over " << s.base << " {\n  total " << s.total << ";\n  kind " << s.kind
       << ";\n  complete " << (s.complete ? 1 : 0) << ";\n  radius " << s.radius << ";\n";
    if (!s.base_point.empty()) {
        os << "  base " << s.base_point << ";\n";
    }
    os << "  projection {\n";
    for (const auto& [a, b] : s.projection) {
        os << "    " << a << " -> " << b << ";\n";
    }
    os << "  }\n";
    if (!s.action.empty()) {
        os << "  action {\n";
        for (const auto& [label, m] : s.action) {
            os << "    " << label << " {";
            for (const auto& [a, b] : m) {
                os << ' ' << a << " -> " << b << ';';
            }
            os << " }\n";
        }
        os << "  }\n";
    }
    for (const auto& [v, w] : s.representatives) {
        os << "  rep " << v << " = " << w << ";\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string to_dsl(const Document& doc) {
    std::string out;
    for (const auto& q : doc.quivers) {
        out += to_dsl(*q);
    }
    for (const auto& s : doc.ideals) {
        out += to_dsl(s);
    }
    for (const auto& s : doc.gradings) {
        out += to_dsl(s);
    }
    for (const auto& s : doc.covers) {
        out += to_dsl(s);
    }
    return out;
}

// ---- JSON ----

inline Json pairs_json(const std::vector<std::pair<std::string, std::string>>& m) {
    Json j = Json::array();
    for (const auto& [a, b] : m) {
        j.push_back({a, b});
    }
    return j;
}

inline std::vector<std::pair<std::string, std::string>> pairs_from(const Json& j) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : j) {
        out.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    return out;
}

inline Json to_json(const Quiver& q) {
    Json arrows = Json::array();
    for (const Arrow& a : q.arrows()) {
        arrows.push_back({{"id", a.name}, {"source", q.vertex_name(a.source)}, {"target", q.vertex_name(a.target)}});
    }
    return {{"name", q.name()}, {"vertices", q.vertex_names()}, {"arrows", arrows}};
}

inline Json to_json(const IdealSpec& s) {
    Json rels = Json::array();
    for (const auto& r : s.relations) {
        Json terms = Json::array();
        for (const auto& [c, p] : r.terms) {
            terms.push_back({{"coef", c.get_str()}, {"path", p}});
        }
        rels.push_back(terms);
    }
    return {{"name", s.name}, {"quiver", s.quiver}, {"char", s.characteristic}, {"relations", rels}};
}

inline Json to_json(const GradingSpec& s) {
    Json g = s.cyclic ? Json{{"cyclic", s.order}} : Json{{"perm", s.degree}, {"generators", s.generators}};
    return {{"name", s.name}, {"ideal", s.ideal}, {"group", g}, {"degrees", pairs_json(s.degrees)}};
}

inline Json to_json(const CoverSpec& s) {
    Json action = Json::array();
    for (const auto& [label, m] : s.action) {
        action.push_back({{"label", label}, {"map", pairs_json(m)}});
    }
    return {{"name", s.name},       {"base", s.base},     {"total", s.total},
            {"kind", s.kind},       {"complete", s.complete}, {"radius", s.radius},
            {"base_point", s.base_point}, {"projection", pairs_json(s.projection)},
            {"action", action},     {"reps", pairs_json(s.representatives)}};
}

inline Json to_json(const Document& doc) {
    Json j;
    j["quivers"] = Json::array();
    for (const auto& q : doc.quivers) {
        j["quivers"].push_back(to_json(*q));
    }
    j["ideals"] = Json::array();
    for (const auto& s : doc.ideals) {
        j["ideals"].push_back(to_json(s));
    }
    j["gradings"] = Json::array();
    for (const auto& s : doc.gradings) {
        j["gradings"].push_back(to_json(s));
    }
    j["covers"] = Json::array();
    for (const auto& s : doc.covers) {
        j["covers"].push_back(to_json(s));
    }
    return j;
}

inline Document document_from_json(const Json& j) {
    Document doc;
    try {
        for (const auto& jq : j.value("quivers", Json::array())) {
            std::vector<std::string> vertices = jq.at("vertices").get<std::vector<std::string>>();
            std::vector<Arrow> arrows;
            for (const auto& ja : jq.at("arrows")) {
                auto find = [&](const std::string& v) {
                    auto it = std::find(vertices.begin(), vertices.end(), v);
                    if (it == vertices.end()) {
                        throw DomainError("arrow " + ja.at("id").get<std::string>() + " has dangling endpoint '" + v +
                                          "'");
                    }
                    return static_cast<VertexId>(it - vertices.begin());
                };
                arrows.push_back(Arrow{ja.at("id").get<std::string>(), find(ja.at("source").get<std::string>()),
                                       find(ja.at("target").get<std::string>())});
            }
            doc.quivers.push_back(
                std::make_shared<const Quiver>(jq.at("name").get<std::string>(), std::move(vertices), std::move(arrows)));
        }
        for (const auto& ji : j.value("ideals", Json::array())) {
            IdealSpec s;
            s.name = ji.at("name").get<std::string>();
            s.quiver = ji.at("quiver").get<std::string>();
            s.characteristic = ji.value("char", 0u);
            for (const auto& jr : ji.at("relations")) {
                RelationSpec r;
                for (const auto& t : jr) {
                    r.terms.emplace_back(parse_rational(t.at("coef").get<std::string>()), t.at("path").get<std::string>());
                }
                s.relations.push_back(std::move(r));
            }
            doc.ideals.push_back(std::move(s));
        }
        for (const auto& jg : j.value("gradings", Json::array())) {
            GradingSpec s;
            s.name = jg.at("name").get<std::string>();
            s.ideal = jg.at("ideal").get<std::string>();
            const Json& g = jg.at("group");
            if (g.contains("cyclic")) {
                s.cyclic = true;
                s.order = g.at("cyclic").get<std::size_t>();
            } else {
                s.cyclic = false;
                s.degree = g.at("perm").get<std::size_t>();
                s.generators = g.at("generators").get<std::vector<Permutation>>();
            }
            s.degrees = pairs_from(jg.at("degrees"));
            doc.gradings.push_back(std::move(s));
        }
        for (const auto& jc : j.value("covers", Json::array())) {
            CoverSpec s;
            s.name = jc.at("name").get<std::string>();
            s.base = jc.at("base").get<std::string>();
            s.total = jc.at("total").get<std::string>();
            s.kind = jc.value("kind", std::string("file"));
            s.complete = jc.value("complete", true);
            s.radius = jc.value("radius", std::size_t{0});
            s.base_point = jc.value("base_point", std::string());
            s.projection = pairs_from(jc.at("projection"));
            for (const auto& ja : jc.value("action", Json::array())) {
                s.action.emplace_back(ja.at("label").get<std::string>(), pairs_from(ja.at("map")));
            }
            s.representatives = pairs_from(jc.value("reps", Json::array()));
            doc.covers.push_back(std::move(s));
        }
    } catch (const Json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what(), 0, 0);
    }
    return doc;
}

inline Document parse_any(const std::string& text) {
    std::size_t k = text.find_first_not_of(" \t\r\n");
    if (k != std::string::npos && text[k] == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw ParseError(e.what(), 0, 0);
        }
        return document_from_json(j);
    }
    return parse_document(text);
}

inline Document load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_any(ss.str());
}

// ---- reports ----

inline Json to_json(const AbelianInvariants& a) {
    Json t = Json::array();
    for (const auto& d : a.torsion) {
        t.push_back(d.get_ui());
    }
    return {{"abelian_rank", a.rank}, {"torsion", t}};
}

inline Json to_json(const Quiver& q, const Relation& r) { return to_string(q, r); }

inline Json groebner_json(const Ideal& ideal) {
    const Quiver& q = ideal.quiver();
    Json out = Json::array();
    for (VertexId x = 0; x < q.vertex_count(); ++x) {
        for (VertexId y = 0; y < q.vertex_count(); ++y) {
            const auto& b = ideal.groebner_basis(x, y);
            if (b.empty()) {
                continue;
            }
            Json rows = Json::array();
            for (const Relation& r : b) {
                rows.push_back(to_string(q, r));
            }
            out.push_back({{"from", q.vertex_name(x)}, {"to", q.vertex_name(y)}, {"basis", rows}});
        }
    }
    return out;
}

inline Json to_json(const Quiver& q, const HomotopyDecision& d) {
    Json chain = Json::array();
    for (const HomotopyMove& m : d.chain) {
        chain.push_back(to_string(q, m.result));
    }
    return {{"verdict", to_string(d.verdict)}, {"chain", chain}, {"note", d.note}};
}

inline std::string fingerprint_hex(const Fingerprint& f) {
    std::ostringstream os;
    os << std::hex << f.hash();
    return os.str();
}

inline Json to_json(const GammaQuiver& g) {
    const Quiver& q = *g.quiver;
    Json vs = Json::array();
    for (const GammaVertex& v : g.vertices) {
        Json rels = Json::array();
        for (const Relation& r : minimal_relations(v.ideal())) {
            rels.push_back(to_string(q, r));
        }
        vs.push_back({{"fingerprint", fingerprint_hex(v.fingerprint())},
                      {"pi1", to_json(v.pi1)},
                      {"homotopic_pairs", v.fingerprint().homotopic_count()},
                      {"representative", rels}});
    }
    Json es = Json::array();
    for (const GammaEdge& e : g.edges) {
        es.push_back({{"from", e.from}, {"to", e.to}, {"transvection", to_string(q, e.witness)}});
    }
    return {{"vertices", vs}, {"edges", es}, {"sources", g.source_indices()}};
}

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

inline std::string to_dot(const GammaQuiver& g) {
    const Quiver& q = *g.quiver;
    std::ostringstream os;
    os << "digraph gamma {\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        os << "  v" << v << " [label=" << dot_quote("pi1=" + g.vertices[v].pi1.to_string()) << "];\n";
    }
    for (const GammaEdge& e : g.edges) {
        os << "  v" << e.from << " -> v" << e.to << " [label=" << dot_quote(to_string(q, e.witness)) << "];\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string to_dot(const Quiver& q) {
    std::ostringstream os;
    os << "digraph " << dot_quote(q.name()) << " {\n";
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        os << "  " << dot_quote(q.vertex_name(v)) << ";\n";
    }
    for (const Arrow& a : q.arrows()) {
        os << "  " << dot_quote(q.vertex_name(a.source)) << " -> " << dot_quote(q.vertex_name(a.target))
           << " [label=" << dot_quote(a.name) << "];\n";
    }
    os << "}\n";
    return os.str();
}

inline Json cover_summary(const CoverQuiver& cov, const CoveringReport& rep, const GaloisReport& gal) {
    const Quiver& bq = cov.base_quiver();
    Json fibers = Json::object();
    for (VertexId x = 0; x < bq.vertex_count(); ++x) {
        fibers[bq.vertex_name(x)] = cov.fiber(x).size();
    }
    return {{"kind", cov.kind},
            {"vertices", cov.total_quiver().vertex_count()},
            {"arrows", cov.total_quiver().arrow_count()},
            {"complete", cov.complete},
            {"radius", cov.radius},
            {"fibers", cov.complete ? fibers : Json()},
            {"covering_ok", rep.ok()},
            {"violations", rep.violations},
            {"galois", to_string(gal.status)},
            {"group_order", gal.status == GaloisStatus::Galois ? Json(gal.group_order) : Json()}};
}

} // namespace bq
