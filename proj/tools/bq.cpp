// bq: command-line front end for bound quivers, homotopy relations, the
// transvection graph and covers.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bq/bq.hpp"

#ifndef BQ_DATA_DIR
#define BQ_DATA_DIR "data"
#endif

namespace {

using namespace bq;

enum Exit { Ok = 0, Refuted = 1, Undecided = 2, InputError = 3 };

struct Options {
    std::string file;
    std::string ideal;
    std::optional<std::uint32_t> characteristic;
    std::string base;
    std::size_t cap = 0;
    std::size_t radius = 0;
    std::string tau_schedule;
    bool json = false;
    std::string dot;
    std::uint64_t seed = 0;
    std::string transvection;
    std::string dilatation;
    std::string grading;
    std::string cover;
    std::string emit;
    std::vector<std::string> words;
    std::string data_dir = BQ_DATA_DIR;
    bool write = false;
};

struct Loaded {
    Document doc;
    std::shared_ptr<const Ideal> ideal;
};

Document load(const Options& o) { return load_document(o.file); }

std::shared_ptr<const Ideal> pick_ideal(const Document& doc, const Options& o, const std::string& name) {
    if (!name.empty()) {
        return doc.ideal(name, o.characteristic);
    }
    if (doc.ideals.size() == 1) {
        return doc.ideal(doc.ideals.front().name, o.characteristic);
    }
    throw DomainError("several ideals declared: choose one with --ideal");
}

HomotopyOptions homotopy_options(const Options& o, const Quiver& q) {
    HomotopyOptions h;
    h.cap = o.cap;
    if (!o.base.empty()) {
        h.base_point = q.vertex(o.base);
    }
    if (o.seed != 0) {
        std::mt19937_64 rng(o.seed);
        h.tree_priority.resize(q.arrow_count());
        for (ArrowId a = 0; a < q.arrow_count(); ++a) {
            h.tree_priority[a] = a;
        }
        std::shuffle(h.tree_priority.begin(), h.tree_priority.end(), rng);
    }
    return h;
}

GammaOptions gamma_options(const Options& o, const Quiver& q) {
    GammaOptions g;
    g.homotopy = homotopy_options(o, q);
    if (!o.tau_schedule.empty()) {
        std::stringstream ss(o.tau_schedule);
        std::string item;
        while (std::getline(ss, item, ',')) {
            g.tau_schedule.push_back(parse_rational(item));
        }
    }
    return g;
}

void write_dot(const Options& o, const std::string& text) {
    if (o.dot.empty()) {
        return;
    }
    std::ofstream out(o.dot);
    if (!out) {
        throw DomainError("cannot write " + o.dot);
    }
    out << text;
}

void print(const Json& j) { std::cout << j.dump() << "\n"; }

// ---- subcommands ----

int cmd_check(const Options& o) {
    Document doc = load(o);
    for (const auto& q : doc.quivers) {
        std::cout << "quiver " << q->name() << ": " << q->vertex_count() << " vertices, " << q->arrow_count()
                  << " arrows, " << q->path_count() << " paths\n";
    }
    for (const auto& s : doc.ideals) {
        auto I = doc.ideal(s.name, o.characteristic);
        std::cout << "ideal " << s.name << ": admissible, dim " << I->total_dimension() << ", "
                  << minimal_relations(*I).size() << " minimal relations\n";
    }
    for (const auto& s : doc.gradings) {
        Grading g = doc.grading(s.name);
        std::cout << "grading " << s.name << ": group of order " << g.group.order() << "\n";
    }
    for (const auto& s : doc.covers) {
        CoverQuiver c = doc.cover(s.name, o.characteristic);
        CoveringReport r = check_covering(c);
        std::cout << "cover " << s.name << ": " << (r.ok() ? "ok" : "violations") << "\n";
        for (const auto& v : r.violations) {
            std::cout << "  " << v << "\n";
        }
        if (!r.ok()) {
            return Refuted;
        }
    }
    return Ok;
}

int cmd_paths(const Options& o) {
    Document doc = load(o);
    auto q = o.ideal.empty() ? doc.quivers.at(0) : doc.quiver(doc.ideal_spec(o.ideal).quiver);
    if (o.json) {
        Json j = Json::array();
        for (const Path& p : q->paths()) {
            j.push_back(to_string(*q, p));
        }
        print(j);
        return Ok;
    }
    for (const Path& p : q->paths()) {
        std::cout << to_string(*q, p) << "\n";
    }
    write_dot(o, to_dot(*q));
    return Ok;
}

int cmd_groebner(const Options& o) {
    Document doc = load(o);
    auto I = pick_ideal(doc, o, o.ideal);
    if (o.json) {
        print(groebner_json(*I));
        return Ok;
    }
    const Quiver& q = I->quiver();
    for (VertexId x = 0; x < q.vertex_count(); ++x) {
        for (VertexId y = 0; y < q.vertex_count(); ++y) {
            for (const Relation& r : I->groebner_basis(x, y)) {
                std::cout << q.vertex_name(x) << " -> " << q.vertex_name(y) << ": " << to_string(q, r) << "\n";
            }
        }
    }
    return Ok;
}

int cmd_pi1(const Options& o) {
    Document doc = load(o);
    auto I = pick_ideal(doc, o, o.ideal);
    auto h = homotopy_relation(I, homotopy_options(o, I->quiver()));
    const GroupPresentation& gp = h->presentation();
    if (o.json) {
        print(to_json(gp.abelian_invariants));
        return Ok;
    }
    std::cout << "presentation: " << gp.to_string() << "\n";
    std::cout << "abelianization: " << gp.abelian_invariants.to_string() << "\n";
    return Ok;
}

int cmd_homotopic(const Options& o) {
    if (o.words.size() != 2) {
        throw DomainError("homotopic needs two walks");
    }
    Document doc = load(o);
    auto I = pick_ideal(doc, o, o.ideal);
    const Quiver& q = I->quiver();
    Walk u = parse_walk(q, o.words[0]);
    Walk v = parse_walk(q, o.words[1]);
    HomotopyOptions hopt = homotopy_options(o, q);
    hopt.base_point = u.source;
    auto h = homotopy_relation(I, hopt);
    HomotopyDecision d = h->decide(u, v, o.cap);
    if (o.json) {
        print(to_json(q, d));
    } else {
        std::cout << to_string(d.verdict) << "\n";
        if (d.verdict == Verdict::Homotopic) {
            std::cout << "  " << to_string(q, d.from) << "\n";
            for (const HomotopyMove& m : d.chain) {
                std::cout << "  ~ " << to_string(q, m.result) << "\n";
            }
            std::cout << "chain replays: " << (verify_chain(*h, u, v, d.chain) ? "yes" : "no") << "\n";
        }
        if (!d.note.empty()) {
            std::cout << d.note << "\n";
        }
    }
    switch (d.verdict) {
    case Verdict::Homotopic:
        return Ok;
    case Verdict::NotHomotopic:
        return Refuted;
    default:
        return Undecided;
    }
}

bool tainted(const GammaQuiver& g) {
    return std::any_of(g.vertices.begin(), g.vertices.end(),
                       [](const GammaVertex& v) { return v.fingerprint().has_unknown(); });
}

int cmd_gamma(const Options& o) {
    Document doc = load(o);
    auto I = pick_ideal(doc, o, o.ideal);
    GammaQuiver g = explore_gamma(I, gamma_options(o, I->quiver()));
    write_dot(o, to_dot(g));
    if (o.json) {
        print(to_json(g));
    } else {
        const Quiver& q = *g.quiver;
        std::cout << g.vertices.size() << " vertices, " << g.edges.size() << " edges\n";
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            std::cout << "  v" << v << "  pi1 " << g.vertices[v].pi1.to_string() << "  [";
            bool first = true;
            for (const Relation& r : minimal_relations(g.vertices[v].ideal())) {
                std::cout << (first ? "" : "; ") << to_string(q, r);
                first = false;
            }
            std::cout << "]\n";
        }
        for (const GammaEdge& e : g.edges) {
            std::cout << "  v" << e.from << " -> v" << e.to << "  " << to_string(q, e.witness) << "\n";
        }
        for (const auto& d : g.diagnostics) {
            std::cerr << "note: " << d << "\n";
        }
    }
    for (const auto& bad : check_gamma_invariants(g)) {
        std::cerr << "invariant violated: " << bad << "\n";
        return Refuted;
    }
    return tainted(g) ? Undecided : Ok;
}

int cmd_source(const Options& o) {
    Document doc = load(o);
    auto I = pick_ideal(doc, o, o.ideal);
    GammaQuiver g = explore_gamma(I, gamma_options(o, I->quiver()));
    SourceReport s = find_sources(g);
    for (const auto& w : s.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    if (o.json) {
        Json j = Json::array();
        for (std::size_t v : s.sources) {
            Json rels = Json::array();
            for (const Relation& r : minimal_relations(g.vertices[v].ideal())) {
                rels.push_back(to_string(*g.quiver, r));
            }
            j.push_back({{"vertex", v}, {"pi1", to_json(g.vertices[v].pi1)}, {"representative", rels}});
        }
        print({{"sources", j}});
    } else {
        std::cout << s.sources.size() << (s.sources.size() == 1 ? " source\n" : " sources\n");
        for (std::size_t v : s.sources) {
            std::cout << "  v" << v << "  pi1 " << g.vertices[v].pi1.to_string() << "  [";
            bool first = true;
            for (const Relation& r : minimal_relations(g.vertices[v].ideal())) {
                std::cout << (first ? "" : "; ") << to_string(*g.quiver, r);
                first = false;
            }
            std::cout << "]\n";
        }
    }
    return tainted(g) ? Undecided : Ok;
}

int cmd_surjection(const Options& o) {
    if (o.words.size() != 2) {
        throw DomainError("surjection needs two ideal names");
    }
    Document doc = load(o);
    auto A = doc.ideal(o.words[0], o.characteristic);
    auto B = doc.ideal(o.words[1], o.characteristic);
    SurjectionReport r = check_surjection(*A, *B, homotopy_options(o, A->quiver()));
    if (o.json) {
        print({{"outcome", to_string(r.outcome)},
               {"source_pi1", to_json(r.source_pi1)},
               {"target_pi1", to_json(r.target_pi1)},
               {"message", r.message}});
    } else {
        std::cout << to_string(r.outcome) << ": pi1(" << o.words[0] << ") = " << r.source_pi1.to_string() << " -> pi1("
                  << o.words[1] << ") = " << r.target_pi1.to_string() << "\n";
        if (!r.message.empty()) {
            std::cout << r.message << "\n";
        }
    }
    switch (r.outcome) {
    case Outcome::Confirmed:
        return Ok;
    case Outcome::Refuted:
        return Refuted;
    default:
        return Undecided;
    }
}

int report_cover(const Options& o, const CoverQuiver& cov, const std::string& base_name) {
    CoveringReport rep = check_covering(cov);
    GaloisReport gal = is_galois(cov);
    write_dot(o, to_dot(cov.total_quiver()));
    if (!o.emit.empty()) {
        Document out;
        add_cover(out, cov, base_name + "_" + cov.kind, base_name);
        std::ofstream f(o.emit);
        if (!f) {
            throw DomainError("cannot write " + o.emit);
        }
        if (o.emit.size() > 5 && o.emit.compare(o.emit.size() - 5, 5, ".json") == 0) {
            f << to_json(out).dump(2) << "\n";
        } else {
            f << to_dsl(out);
        }
    }
    if (o.json) {
        print(cover_summary(cov, rep, gal));
    } else {
        std::cout << cov.kind << " cover: " << cov.total_quiver().vertex_count() << " vertices, "
                  << cov.total_quiver().arrow_count() << " arrows, " << (cov.complete ? "complete" : "truncated")
                  << "\n";
        std::cout << "covering conditions: " << (rep.ok() ? "ok" : "violated") << " (" << rep.checked_vertices
                  << " vertices checked)\n";
        for (const auto& v : rep.violations) {
            std::cout << "  " << v << "\n";
        }
        std::cout << to_string(gal.status) << ": " << gal.message << "\n";
    }
    if (!rep.ok()) {
        return Refuted;
    }
    return gal.status == GaloisStatus::Truncated ? Undecided : Ok;
}

int cmd_cover(const Options& o) {
    Document doc = load(o);
    if (!o.cover.empty()) {
        CoverQuiver cov = doc.cover(o.cover, o.characteristic);
        return report_cover(o, cov, doc.cover_spec(o.cover).base);
    }
    auto I = pick_ideal(doc, o, o.ideal);
    const Quiver& q = I->quiver();
    HomotopyOptions h = homotopy_options(o, q);
    CoverQuiver cov = universal_cover(I, h.base_point, o.radius, h);
    return report_cover(o, cov, I->name());
}

int cmd_smash(const Options& o) {
    Document doc = load(o);
    const GradingSpec& gs = doc.grading_spec(o.grading);
    auto I = doc.ideal(gs.ideal, o.characteristic);
    CoverQuiver cov = smash_product(I, doc.grading(o.grading));
    return report_cover(o, cov, I->name());
}

Transvection parse_transvection(const Quiver& q, const Field& f, const std::string& text) {
    auto c1 = text.find(':');
    auto c2 = text.rfind(':');
    if (c1 == std::string::npos || c1 == c2) {
        throw DomainError("transvection must look like ARROW:PATH:TAU");
    }
    return make_transvection(q, q.arrow_id(text.substr(0, c1)), parse_path(q, text.substr(c1 + 1, c2 - c1 - 1)),
                             f.from_rational(parse_rational(text.substr(c2 + 1))));
}

Dilatation parse_dilatation(const Quiver& q, const Field& f, const std::string& text) {
    Dilatation d = Dilatation::identity(q, f);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw DomainError("dilatation entries look like ARROW=SCALAR");
        }
        Scalar s = f.from_rational(parse_rational(item.substr(eq + 1)));
        if (s.is_zero()) {
            throw DomainError("dilatation scale for " + item.substr(0, eq) + " is zero");
        }
        d.scale[q.arrow_id(item.substr(0, eq))] = s;
    }
    return d;
}

int cmd_lift(const Options& o) {
    Document doc = load(o);
    auto I = pick_ideal(doc, o, o.ideal);
    const Quiver& q = I->quiver();
    HomotopyOptions h = homotopy_options(o, q);
    auto cov = std::make_shared<const CoverQuiver>(universal_cover(I, h.base_point, o.radius, h));
    CoverMorphism m;
    if (!o.transvection.empty()) {
        m = lift_transvection(cov, parse_transvection(q, I->field(), o.transvection));
    } else if (!o.dilatation.empty()) {
        m = lift_dilatation(cov, parse_dilatation(q, I->field(), o.dilatation));
    } else {
        throw DomainError("lift needs --transvection or --dilatation");
    }
    std::size_t lo = npos;
    std::size_t hi = 0;
    for (std::size_t k : m.fiber_sizes) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    if (o.json) {
        print({{"checked_arrows", m.checked_arrows},
               {"skipped_arrows", m.skipped_arrows},
               {"equivariance_checks", m.equivariance_checks},
               {"kernel", m.kernel.to_string()},
               {"fiber_min", lo},
               {"fiber_max", hi},
               {"violations", m.violations}});
    } else {
        std::cout << "arrows checked: " << m.checked_arrows << " (" << m.skipped_arrows << " outside the ball)\n";
        std::cout << "equivariance checks: " << m.equivariance_checks << "\n";
        std::cout << "kernel at abelian level: " << m.kernel.to_string() << "\n";
        std::cout << "fiber sizes of psi: " << lo << ".." << hi << "\n";
        for (const auto& v : m.violations) {
            std::cout << "  " << v << "\n";
        }
    }
    return m.ok() ? Ok : Refuted;
}

int cmd_pipeline(const Options& o) {
    Document doc = load(o);
    auto I0 = pick_ideal(doc, o, o.ideal);
    CoverPtr target;
    if (!o.grading.empty()) {
        const GradingSpec& gs = doc.grading_spec(o.grading);
        target = std::make_shared<const CoverQuiver>(
            smash_product(doc.ideal(gs.ideal, o.characteristic), doc.grading(o.grading)));
    } else if (!o.cover.empty()) {
        target = std::make_shared<const CoverQuiver>(doc.cover(o.cover, o.characteristic));
    } else {
        throw DomainError("pipeline needs a target: --grading or --cover");
    }
    PipelineReport r = covering_pipeline(*I0, target, o.radius, gamma_options(o, I0->quiver()));
    const Quiver& q = I0->quiver();
    if (o.json) {
        Json steps = Json::array();
        for (const auto& t : r.chain.steps) {
            steps.push_back(to_string(q, t));
        }
        print({{"chain", steps},
               {"privileged_pi1", to_json(r.privileged_pi1)},
               {"lambda", r.lambda_images},
               {"image_order", r.image_order},
               {"group_order", r.group_order},
               {"surjective", r.surjective},
               {"violations", r.violations}});
    } else {
        std::cout << "chain:";
        for (const auto& t : r.chain.steps) {
            std::cout << " " << to_string(q, t);
        }
        std::cout << (r.chain.steps.empty() ? " (empty)\n" : "\n");
        std::cout << "pi1 of the privileged presentation: " << r.privileged_pi1.to_string() << "\n";
        for (const auto& l : r.lambda_images) {
            std::cout << "  lambda: " << l << "\n";
        }
        std::cout << "image of lambda: order " << r.image_order << " of " << r.group_order
                  << (r.surjective ? " (surjective)" : "") << "\n";
        std::cout << "N has index " << r.image_order << " in pi1 = " << r.privileged_pi1.to_string() << "\n";
        for (const auto& v : r.violations) {
            std::cout << "  " << v << "\n";
        }
    }
    return r.ok() ? Ok : Refuted;
}

// ---- bundled examples ----

std::vector<std::pair<std::string, Json>> run_examples(const std::string& dir) {
    std::vector<std::pair<std::string, Json>> out;
    Document e1 = load_document(dir + "/exple1.bq");
    Document tb = load_document(dir + "/twobypass.bq");
    auto I = e1.ideal("I");
    auto J = e1.ideal("J");
    const Quiver& q1 = I->quiver();
    {
        Json j;
        j["I"] = to_json(homotopy_relation(I)->presentation().abelian_invariants);
        j["J"] = to_json(homotopy_relation(J)->presentation().abelian_invariants);
        Walk a = parse_walk(q1, "a");
        Walk cb = parse_walk(q1, "c*b");
        j["a~cb under I"] = to_string(homotopy_relation(I)->decide(a, cb).verdict);
        j["a~cb under J"] = to_string(homotopy_relation(J)->decide(a, cb).verdict);
        out.emplace_back("exple1_pi1", j);
    }
    out.emplace_back("exple1_gamma", to_json(explore_gamma(I)));
    out.emplace_back("exple1_surjection", Json{{"I->J", to_string(check_surjection(*I, *J).outcome)}});
    {
        Grading z2 = e1.grading("Z2");
        CoverQuiver s = smash_product(I, z2);
        out.emplace_back("exple1_smash", cover_summary(s, check_covering(s), is_galois(s)));
    }
    {
        auto cov = std::make_shared<const CoverQuiver>(universal_cover(I, 0, 6));
        CoverMorphism m = lift_transvection(cov, make_transvection(q1, q1.arrow_id("a"), parse_path(q1, "c*b"),
                                                                   I->field().from_integer(-1)));
        out.emplace_back("exple1_lift", Json{{"checked_arrows", m.checked_arrows},
                                             {"equivariance_checks", m.equivariance_checks},
                                             {"kernel", m.kernel.to_string()},
                                             {"violations", m.violations}});
    }
    for (std::uint32_t p : {0u, 2u}) {
        auto I0 = tb.ideal("I0", p);
        auto I1 = tb.ideal("I1", p);
        auto I2 = tb.ideal("I2", p);
        Json j;
        j["pi1"] = {{"I0", to_json(homotopy_relation(I0)->presentation().abelian_invariants)},
                    {"I1", to_json(homotopy_relation(I1)->presentation().abelian_invariants)},
                    {"I2", to_json(homotopy_relation(I2)->presentation().abelian_invariants)}};
        j["I2"] = groebner_json(*I2);
        j["gamma"] = to_json(explore_gamma(p == 0 ? I2 : I1));
        j["surjection I2->I0"] = to_string(check_surjection(*I2, *I0).outcome);
        j["surjection I0->I1"] = to_string(check_surjection(*I0, *I1).outcome);
        out.emplace_back("twobypass_char" + std::to_string(p), j);
    }
    {
        auto I0 = tb.ideal("I0");
        CoverQuiver c = universal_cover(I0, 0);
        out.emplace_back("twobypass_cover", cover_summary(c, check_covering(c), is_galois(c)));
    }
    return out;
}

int cmd_examples(const Options& o) {
    int status = Ok;
    for (const auto& [name, j] : run_examples(o.data_dir)) {
        std::string path = o.data_dir + "/golden/" + name + ".json";
        if (o.write) {
            std::ofstream(path) << j.dump(2) << "\n";
            std::cout << "wrote " << path << "\n";
            continue;
        }
        std::ifstream in(path);
        if (!in) {
            std::cout << "MISSING " << name << "\n";
            status = Refuted;
            continue;
        }
        Json want = Json::parse(in);
        if (want == j) {
            std::cout << "ok      " << name << "\n";
        } else {
            std::cout << "DIFF    " << name << "\n";
            std::cout << "  want " << want.dump() << "\n  got  " << j.dump() << "\n";
            status = Refuted;
        }
    }
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bq: bound quivers, homotopy relations and covers"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* c, bool with_file = true) {
        if (with_file) {
            c->add_option("file", o.file, "input file (.bq or .json)")->required();
        }
        c->add_option("--ideal", o.ideal, "ideal name");
        c->add_option("--char", o.characteristic, "field characteristic (0 or a prime)");
        c->add_option("--base", o.base, "base vertex");
        c->add_option("--cap", o.cap, "bound on intermediate word length");
        c->add_option("--radius", o.radius, "cover radius");
        c->add_option("--tau-schedule", o.tau_schedule, "comma separated scalars");
        c->add_flag("--json", o.json, "JSON output");
        c->add_option("--dot", o.dot, "write DOT to this path");
        c->add_option("--seed", o.seed, "seed for the spanning tree order (0 keeps declaration order)");
        return c;
    };
    std::map<std::string, int (*)(const Options&)> run;
    auto sub = [&](const std::string& name, const std::string& help, int (*fn)(const Options&)) {
        run[name] = fn;
        return common(app.add_subcommand(name, help));
    };
    sub("check", "parse and check admissibility", cmd_check);
    sub("paths", "list paths", cmd_paths);
    sub("groebner", "Groebner basis per hom-space", cmd_groebner);
    sub("pi1", "fundamental group", cmd_pi1);
    sub("homotopic", "decide whether two walks are homotopic", cmd_homotopic)
        ->add_option("walks", o.words, "two walks")
        ->expected(2);
    sub("gamma", "explore the transvection graph", cmd_gamma);
    sub("source", "sources of the transvection graph", cmd_source);
    sub("surjection", "does pi1 of one ideal surject onto the other", cmd_surjection)
        ->add_option("ideals", o.words, "source and target ideal")
        ->expected(2);
    auto* cover = sub("cover", "universal cover, or check a declared cover", cmd_cover);
    cover->add_option("--cover", o.cover, "declared cover to check");
    cover->add_option("--emit", o.emit, "write the cover as .bq or .json");
    auto* smash = sub("smash", "smash product of a grading", cmd_smash);
    smash->add_option("--grading", o.grading, "grading name")->required();
    smash->add_option("--emit", o.emit, "write the cover as .bq or .json");
    auto* lift = sub("lift", "lift a transvection or dilatation to universal covers", cmd_lift);
    lift->add_option("--transvection", o.transvection, "ARROW:PATH:TAU");
    lift->add_option("--dilatation", o.dilatation, "ARROW=SCALAR,...");
    auto* pipe = sub("pipeline", "map the privileged presentation's cover onto a Galois cover", cmd_pipeline);
    pipe->add_option("--grading", o.grading, "target is the smash product of this grading");
    pipe->add_option("--cover", o.cover, "target is this declared cover");
    run["examples"] = cmd_examples;
    auto* ex = app.add_subcommand("examples", "run bundled examples against golden files");
    ex->add_option("--data", o.data_dir, "data directory");
    ex->add_flag("--write", o.write, "rewrite golden files");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return InputError;
    }
    try {
        for (auto* c : app.get_subcommands()) {
            return run.at(c->get_name())(o);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputError;
    }
    return InputError;
}
