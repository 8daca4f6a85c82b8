// Acceptance run: one PASS/FAIL line per criterion, exit status = number of failures.
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace bqt;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

// Every Gamma built anywhere in this run goes through here.
struct GammaAudit {
    std::size_t graphs = 0;
    std::vector<std::string> problems;

    GammaQuiver operator()(GammaQuiver g) {
        ++graphs;
        for (const auto& p : check_gamma_invariants(g)) {
            problems.push_back(p);
        }
        return g;
    }
} audit;

std::uint64_t seed = 20240611;

Result fail(const std::string& why) { return {false, why}; }

std::size_t vertex_with(const GammaQuiver& g, const Fingerprint& f) {
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (g.vertices[v].fingerprint() == f) {
            return v;
        }
    }
    return npos;
}

Result c1_exple1_pi1() {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    auto hI = homotopy_relation(I);
    auto hJ = homotopy_relation(J);
    const auto& aI = hI->presentation().abelian_invariants;
    if (aI.rank != 1 || !aI.torsion.empty()) {
        return fail("pi1(I) abelianization is " + aI.to_string());
    }
    // Single chord, and some relator freely reduces to it.
    const GroupPresentation& pJ = hJ->presentation();
    bool kills = pJ.generators.size() == 1 &&
                 std::any_of(pJ.relators.begin(), pJ.relators.end(), [](const Word& w) {
                     Word r = free_reduce(w);
                     return r.size() == 1;
                 });
    if (!kills) {
        return fail("pi1(J) presentation " + pJ.to_string() + " does not kill its chord");
    }
    auto t = enumerate_cosets(pJ);
    if (!t || t->size() != 1) {
        return fail("coset enumeration for pi1(J) is not trivial");
    }
    const Quiver& q = I->quiver();
    Walk a = parse_walk(q, "a");
    Walk cb = parse_walk(q, "c*b");
    HomotopyDecision dI = hI->decide(a, cb);
    HomotopyDecision dJ = hJ->decide(a, cb);
    if (dI.verdict != Verdict::NotHomotopic || !verify_abelian_certificate(*hI, a, cb)) {
        return fail("a vs c*b under I: " + to_string(dI.verdict));
    }
    if (dJ.verdict != Verdict::Homotopic || !verify_chain(*hJ, a, cb, dJ.chain)) {
        return fail("a vs c*b under J: " + to_string(dJ.verdict));
    }
    return {true, "pi1(I) = Z, pi1(J) = 1, NotHomotopic/Homotopic with certificates (" +
                      std::to_string(dJ.chain.size()) + " move chain)"};
}

Result c2_exple1_gamma() {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    GammaQuiver g = audit(explore_gamma(I));
    if (g.vertices.size() != 2 || g.edges.size() != 1) {
        return fail(std::to_string(g.vertices.size()) + " vertices, " + std::to_string(g.edges.size()) + " edges");
    }
    auto src = g.source_indices();
    std::size_t vi = vertex_with(g, homotopy_relation(I)->fingerprint());
    std::size_t vj = vertex_with(g, homotopy_relation(J)->fingerprint());
    if (src.size() != 1 || src[0] != vi || vj == npos || g.edges[0].from != vi || g.edges[0].to != vj) {
        return fail("Gamma is not ~I -> ~J with source ~I");
    }
    SurjectionReport s = check_surjection(*I, *J);
    if (s.outcome != Outcome::Confirmed || s.source_pi1.to_string() != "Z" || s.target_pi1.to_string() != "1") {
        return fail("surjection " + to_string(s.outcome) + ": " + s.message);
    }
    return {true, "2 vertices, 1 edge, unique source ~I; Z ->> 1 confirmed"};
}

Result c3_twobypass_char0() {
    const Document& d = twobypass();
    auto I0 = d.ideal("I0");
    auto I1 = d.ideal("I1");
    auto I2 = d.ideal("I2");
    const Quiver& q = I0->quiver();
    const Field& f = I0->field();
    Ideal expect = apply_automorphism(tv(q, f, "a", "c*b", -1), apply_automorphism(tv(q, f, "d", "f*e", -1), *I0));
    if (!ideals_equal(expect, *I2)) {
        return fail("I2 differs from the image of I0 under the two transvections");
    }
    GammaQuiver g = audit(explore_gamma(I2));
    std::size_t v0 = vertex_with(g, homotopy_relation(I0)->fingerprint());
    std::size_t v1 = vertex_with(g, homotopy_relation(I1)->fingerprint());
    std::size_t v2 = vertex_with(g, homotopy_relation(I2)->fingerprint());
    auto src = g.source_indices();
    if (g.vertices.size() != 2 || g.edges.size() != 1 || v0 == npos || v1 == npos || v1 != v2 ||
        g.edges[0].from != v0 || g.edges[0].to != v1 || src.size() != 1 || src[0] != v0) {
        return fail("Gamma from I2 is not ~I0 -> ~I1 (" + std::to_string(g.vertices.size()) + " vertices)");
    }
    auto inv = [](const std::shared_ptr<const Ideal>& I) { return homotopy_relation(I)->presentation().abelian_invariants; };
    if (inv(I0).to_string() != "Z/2" || !inv(I1).is_trivial() || !inv(I2).is_trivial()) {
        return fail("pi1: I0 " + inv(I0).to_string() + ", I1 " + inv(I1).to_string() + ", I2 " + inv(I2).to_string());
    }
    return {true, "Gamma = ~I0 -> ~I1, unique source; pi1: Z/2, 1, 1"};
}

Result c4_twobypass_char2() {
    const Document& d = twobypass();
    auto I0 = d.ideal("I0", 2);
    auto I1 = d.ideal("I1", 2);
    auto I2 = d.ideal("I2", 2);
    Ideal hand(I2->quiver_ptr(), I2->field(), {rel(*I2, {{1, "d*a"}}), rel(*I2, {{1, "f*e*a"}, {1, "d*c*b"}})});
    if (!ideals_equal(hand, *I2)) {
        return fail("I2 over F2 is not <da, va+du>");
    }
    std::ostringstream detail;
    for (const auto& start : {I1, I2}) {
        GammaQuiver g = audit(explore_gamma(start));
        if (g.vertices.size() != 3 || g.edges.size() != 2 || g.source_indices().size() != 2) {
            return fail("Gamma from " + start->name() + ": " + std::to_string(g.vertices.size()) + " vertices, " +
                        std::to_string(g.edges.size()) + " edges, " + std::to_string(g.source_indices().size()) +
                        " sources");
        }
    }
    const auto& a2 = homotopy_relation(I2)->presentation().abelian_invariants;
    if (a2.rank != 1) {
        return fail("pi1(I2) over F2 is " + a2.to_string());
    }
    SurjectionReport s = check_surjection(*I2, *I0);
    if (s.outcome != Outcome::Confirmed) {
        return fail("surjection I2 -> I0: " + to_string(s.outcome));
    }
    return {true, "I2 = <da, va+du>; Gamma: 3 vertices, 2 edges, 2 sources; pi1(I2) rank 1; Z ->> Z/2"};
}

Result c5_trichotomy() {
    std::mt19937_64 rng(seed);
    std::map<std::string, std::size_t> tally;
    for (int i = 0; i < 200; ++i) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(3, 6)(rng);
        auto q = random_quiver(rng, n, std::uniform_int_distribution<std::size_t>(1, 3)(rng));
        Field f = i % 4 == 3 ? Field::prime(3) : Field::rationals();
        auto I = random_ideal(rng, q, f);
        Transvection t = random_transvection(rng, *q, f);
        TransvectionReport r = classify_transvection(I, t);
        if (r.kind == TransvectionCase::Unknown) {
            return fail("instance " + std::to_string(i) + ": " + r.message);
        }
        if (!r.holds) {
            return fail("instance " + std::to_string(i) + " case " + to_string(r.kind) + " violated " + r.message);
        }
        ++tally[to_string(r.kind)];
        if (i < 20) {
            audit(explore_gamma(I));
        }
    }
    std::string detail = "200 instances:";
    for (const auto& [k, v] : tally) {
        detail += " " + k + "=" + std::to_string(v);
    }
    return {true, detail + ", 0 unknown"};
}

Result c6_dt_round_trip() {
    std::mt19937_64 rng(seed + 1);
    for (int i = 0; i < 100; ++i) {
        auto q = random_quiver(rng, std::uniform_int_distribution<std::size_t>(3, 6)(rng),
                               std::uniform_int_distribution<std::size_t>(1, 4)(rng));
        Field f = Field::rationals();
        PathAutomorphism phi = PathAutomorphism::from(q, f, random_dilatation(rng, *q, f));
        std::size_t k = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
        for (std::size_t j = 0; j < k; ++j) {
            phi = compose(PathAutomorphism::from(q, f, random_transvection(rng, *q, f)), phi);
        }
        DTDecomposition dt = decompose_DT(phi);
        if (recompose(q, f, dt).images() != phi.images()) {
            return fail("instance " + std::to_string(i) + " does not recompose");
        }
    }
    return {true, "100 automorphisms recomposed exactly"};
}

Result c7_exp_log() {
    std::mt19937_64 rng(seed + 2);
    for (int i = 0; i < 50; ++i) {
        auto q = random_quiver(rng, std::uniform_int_distribution<std::size_t>(3, 6)(rng),
                               std::uniform_int_distribution<std::size_t>(1, 4)(rng));
        Field f = Field::rationals();
        Derivation nu = random_derivation(rng, *q, f);
        Derivation back = log_unipotent(exp_derivation(q, f, nu));
        if (back.arrow_images != nu.arrow_images) {
            return fail("log(exp(nu)) != nu on instance " + std::to_string(i));
        }
    }
    auto I = exple1().ideal("I");
    const Quiver& q = I->quiver();
    for (const mpq_class& tau : {mpq_class(1), mpq_class(-1), mpq_class(1, 2), mpq_class(3)}) {
        Transvection t = tv(q, I->field(), "a", "c*b", tau);
        Derivation nu;
        for (ArrowId a = 0; a < q.arrow_count(); ++a) {
            nu.arrow_images.push_back(Relation{q.arrow(a).source, q.arrow(a).target, {}});
        }
        add_term(nu.arrow_images[q.arrow_id("a")], q.path_id(parse_path(q, "c*b")), I->field().from_rational(tau));
        if (exp_derivation(I->quiver_ptr(), I->field(), nu).images() !=
            PathAutomorphism::from(I->quiver_ptr(), I->field(), t).images()) {
            return fail("exp of a single-pair derivation is not the transvection (tau " + tau.get_str() + ")");
        }
    }
    return {true, "50 derivations round-trip; single-pair exp = transvection"};
}

Result c8_constricted() {
    std::mt19937_64 rng(seed + 3);
    for (int i = 0; i < 20; ++i) {
        auto q = random_quiver(rng, std::uniform_int_distribution<std::size_t>(3, 6)(rng),
                               std::uniform_int_distribution<std::size_t>(1, 3)(rng), true);
        Field f = Field::rationals();
        auto I = random_constricted(rng, q, f);
        if (!is_constricted(*I)) {
            return fail("generated ideal " + std::to_string(i) + " is not constricted");
        }
        for (const Bypass& b : find_bypasses(*q)) {
            for (const Scalar& tau : tau_schedule(f)) {
                if (!ideals_equal(apply_automorphism(Transvection{b, tau}, *I), *I)) {
                    return fail("a transvection moves constricted ideal " + std::to_string(i));
                }
            }
        }
        GammaQuiver g = audit(explore_gamma(I));
        if (g.vertices.size() != 1 || !g.edges.empty()) {
            return fail("Gamma of constricted ideal " + std::to_string(i) + " has " +
                        std::to_string(g.vertices.size()) + " vertices");
        }
    }
    return {true, "20 constricted ideals fixed by every transvection, Gamma a single vertex"};
}

Result c9_universal_cover() {
    auto I0 = twobypass().ideal("I0");
    CoverQuiver c = universal_cover(I0, 0);
    if (!c.complete || c.total_quiver().vertex_count() != 10) {
        return fail(std::string(c.complete ? "complete" : "truncated") + " with " +
                    std::to_string(c.total_quiver().vertex_count()) + " vertices");
    }
    for (VertexId x = 0; x < I0->quiver().vertex_count(); ++x) {
        if (c.fiber(x).size() != 2) {
            return fail("fiber over " + I0->quiver().vertex_name(x) + " has " + std::to_string(c.fiber(x).size()));
        }
    }
    CoveringReport r = check_covering(c);
    if (!r.ok()) {
        return fail(r.violations.front());
    }
    GaloisReport g = is_galois(c);
    if (g.status != GaloisStatus::Galois || g.group_order != 2) {
        return fail(g.message);
    }
    return {true, "complete at radius " + std::to_string(c.radius) + ", 10 vertices, fibers 2, Galois of order 2"};
}

Result c10_smash() {
    auto I = exple1().ideal("I");
    CoverQuiver s = smash_product(I, exple1().grading("Z2"));
    CoveringReport r = check_covering(s);
    GaloisReport g = is_galois(s);
    if (!r.ok() || g.status != GaloisStatus::Galois || g.group_order != 2) {
        return fail("Z/2 smash: " + (r.ok() ? g.message : r.violations.front()));
    }
    Grading trivial{FiniteGroup::cyclic(1), std::vector<std::size_t>(I->quiver().arrow_count(), 0)};
    CoverQuiver t = smash_product(I, trivial);
    const Quiver& tq = t.total_quiver();
    const Quiver& q = I->quiver();
    if (tq.vertex_count() != q.vertex_count() || tq.arrow_count() != q.arrow_count() || !t.action.empty()) {
        return fail("trivial smash has a different shape");
    }
    for (VertexId v = 0; v < tq.vertex_count(); ++v) {
        if (t.vertex_projection[v] != v) {
            return fail("trivial smash projection is not the identity on vertices");
        }
    }
    for (ArrowId a = 0; a < tq.arrow_count(); ++a) {
        if (t.arrow_projection[a] != a) {
            return fail("trivial smash projection is not the identity on arrows");
        }
    }
    std::vector<Relation> down;
    for (const Relation& rr : minimal_relations(*t.total)) {
        down.push_back(t.project(rr));
    }
    if (!ideals_equal(Ideal(I->quiver_ptr(), I->field(), down), *I) || !check_covering(t).ok()) {
        return fail("trivial smash ideal does not match");
    }
    return {true, "Z/2 smash: covering, Galois of order 2; trivial smash is the identity cover"};
}

Result c11_lift() {
    auto I = exple1().ideal("I");
    const Quiver& q = I->quiver();
    Transvection t = tv(q, I->field(), "a", "c*b", -1);
    std::size_t widest[2] = {0, 0};
    CoverMorphism m;
    for (int k = 0; k < 2; ++k) {
        auto cov = std::make_shared<const CoverQuiver>(universal_cover(I, 0, k == 0 ? 6 : 8));
        CoverMorphism mk = lift_transvection(cov, t);
        if (!mk.ok()) {
            return fail(mk.violations.front());
        }
        for (std::size_t s : mk.fiber_sizes) {
            widest[k] = std::max(widest[k], s);
        }
        if (k == 0) {
            m = mk;
        }
    }
    if (m.checked_arrows != m.source->total_quiver().arrow_count() || m.skipped_arrows != 0) {
        return fail("only " + std::to_string(m.checked_arrows) + " arrows checked");
    }
    if (m.equivariance_checks == 0) {
        return fail("no equivariance check ran");
    }
    if (m.kernel.free_rank != 1) {
        return fail("kernel at abelian level is " + m.kernel.to_string());
    }
    if (widest[0] < 2 || widest[1] <= widest[0]) {
        return fail("fibers of psi do not grow with the radius");
    }
    return {true, "square commutes on " + std::to_string(m.checked_arrows) + " arrows at radius 6; " +
                      std::to_string(m.equivariance_checks) + " equivariance checks; kernel " + m.kernel.to_string() +
                      "; widest fiber " + std::to_string(widest[0]) + " -> " + std::to_string(widest[1]) +
                      " at radius 8"};
}

Result c12_gamma_invariants() {
    // A few more graphs so the audit covers more than the examples.
    std::mt19937_64 rng(seed + 4);
    for (int i = 0; i < 10; ++i) {
        auto q = random_quiver(rng, std::uniform_int_distribution<std::size_t>(3, 6)(rng),
                               std::uniform_int_distribution<std::size_t>(1, 3)(rng));
        audit(explore_gamma(random_ideal(rng, q, Field::rationals())));
    }
    if (!audit.problems.empty()) {
        return fail(audit.problems.front());
    }
    return {true, std::to_string(audit.graphs) + " graphs: acyclic, connected, out-degree and paths bounded by m"};
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--seed") {
            seed = std::strtoull(argv[i + 1], nullptr, 10);
        }
    }
    std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"exple1 fundamental groups and homotopy certificates", c1_exple1_pi1},
        {"exple1 Gamma and surjection", c2_exple1_gamma},
        {"two-bypass example over Q", c3_twobypass_char0},
        {"two-bypass example over F2", c4_twobypass_char2},
        {"transvection trichotomy on random pairs", c5_trichotomy},
        {"dilatation-transvection round trip", c6_dt_round_trip},
        {"exp and log", c7_exp_log},
        {"constricted ideals", c8_constricted},
        {"universal cover of the two-bypass I0", c9_universal_cover},
        {"smash products", c10_smash},
        {"lift of a transvection on exple1", c11_lift},
        {"Gamma structural invariants", c12_gamma_invariants},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = fail(std::string("exception: ") + e.what());
        }
        failures += r.pass ? 0 : 1;
        std::cout << (r.pass ? "PASS " : "FAIL ") << (i + 1 < 10 ? " " : "") << i + 1 << "  " << criteria[i].first
                  << ": " << r.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures;
}
