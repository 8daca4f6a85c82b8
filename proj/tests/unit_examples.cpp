// Small worked cases, one operation at a time.
#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace bqt;

namespace {

std::size_t classes(const StepSearch& s) {
    std::set<std::size_t> seen;
    for (const GammaStep& st : s.steps) {
        seen.insert(st.relation->fingerprint().hash());
    }
    return seen.size();
}

std::shared_ptr<const Ideal> over(const std::shared_ptr<const Ideal>& like, std::vector<Relation> gens) {
    return std::make_shared<const Ideal>(like->quiver_ptr(), like->field(), std::move(gens));
}

std::shared_ptr<const Ideal> zero_on(const std::shared_ptr<const Ideal>& like) { return over(like, {}); }

} // namespace

TEST(Examples, QuiverBasics) {
    const Quiver& q = *exple1().quiver("exple1");
    EXPECT_EQ(q.vertex_count(), 4u);
    EXPECT_EQ(q.arrow_count(), 4u);
    Quiver one("pt", {"x"}, {});
    EXPECT_EQ(one.path_count(), 1u);
    EXPECT_TRUE(find_bypasses(one).empty());
    try {
        Quiver("cyc", {"1", "2"}, {{"a", 0, 1}, {"b", 1, 0}});
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("oriented cycle"), std::string::npos);
    }
}

TEST(Examples, IdealDimensions) {
    auto I = exple1().ideal("I");
    const Quiver& q = I->quiver();
    VertexId one = q.vertex("1");
    VertexId four = q.vertex("4");
    EXPECT_EQ(I->dimension(one, four), 1u);
    EXPECT_EQ(I->quotient_dimension(one, four), 1u);
    EXPECT_EQ(I->total_dimension(), 1u);
    EXPECT_EQ(zero_on(I)->total_dimension(), 0u);
    auto I0 = twobypass().ideal("I0");
    EXPECT_EQ(I0->dimension(I0->quiver().vertex("1"), I0->quiver().vertex("5")), 2u);
}

TEST(Examples, EchelonBasisNormalized) {
    auto J = exple1().ideal("J");
    const Quiver& q = J->quiver();
    const auto& b = J->groebner_basis(q.vertex("1"), q.vertex("4"));
    ASSERT_EQ(b.size(), 1u);
    EXPECT_TRUE(b[0] == rel(*J, {{1, "d*c*b"}, {-1, "d*a"}}));
    EXPECT_TRUE(J->groebner_basis(q.vertex("1"), q.vertex("3")).empty());
    auto I0 = twobypass().ideal("I0");
    const Quiver& q2 = I0->quiver();
    const auto& b0 = I0->groebner_basis(q2.vertex("1"), q2.vertex("5"));
    ASSERT_EQ(b0.size(), 2u);
    // distinct leading paths, neither appearing in the other row
    PathId l0 = b0[0].terms.rbegin()->first;
    PathId l1 = b0[1].terms.rbegin()->first;
    EXPECT_NE(l0, l1);
    EXPECT_EQ(b0[0].terms.count(l1), 0u);
    EXPECT_EQ(b0[1].terms.count(l0), 0u);
}

TEST(Examples, MinimalRelationsAndSupports) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    auto mI = minimal_relations(*I);
    ASSERT_EQ(mI.size(), 1u);
    EXPECT_TRUE(mI[0] == rel(*I, {{1, "d*a"}}));
    EXPECT_TRUE(minimal_relations(*zero_on(I)).empty());
    auto I0 = twobypass().ideal("I0");
    auto m0 = minimal_relations(*I0);
    EXPECT_EQ(m0.size(), 2u);
    for (const Relation& r : m0) {
        EXPECT_TRUE(is_minimal(*I0, r));
    }
    Relation sum = rel(*I0, {{1, "d*a"}, {1, "f*e*c*b"}, {1, "f*e*a"}, {1, "d*c*b"}});
    auto parts = decompose_minimal(*I0, sum);
    ASSERT_EQ(parts.size(), 2u);
    std::set<std::set<PathId>> supports;
    for (const Relation& p : parts) {
        std::set<PathId> s;
        for (const auto& [path, c] : p.terms) {
            s.insert(path);
        }
        supports.insert(s);
    }
    const Quiver& q2 = I0->quiver();
    auto pid = [&](const char* p) { return q2.path_id(parse_path(q2, p)); };
    EXPECT_EQ(supports, (std::set<std::set<PathId>>{{pid("d*a"), pid("f*e*c*b")}, {pid("f*e*a"), pid("d*c*b")}}));
    EXPECT_EQ(decompose_minimal(*I0, m0[0]).size(), 1u);
    EXPECT_TRUE(decompose_minimal(*I0, Relation{0, 0, {}}).empty());

    const Quiver& q = J->quiver();
    auto one = q.vertex("1");
    auto four = q.vertex("4");
    EXPECT_EQ(support_equivalence(*J, one, four).size(), 1u);
    EXPECT_EQ(support_equivalence(*I, one, four).size(), 2u);
    EXPECT_EQ(support_equivalence(*zero_on(I), one, four).size(), 2u);
}

TEST(Examples, ConstrictedAndEquality) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    EXPECT_TRUE(is_constricted(*over(I, {rel(*I, {{1, "c*b"}})})));
    EXPECT_FALSE(is_constricted(*I));
    auto chain = std::make_shared<const Quiver>("chain", std::vector<std::string>{"1", "2", "3"},
                                                std::vector<Arrow>{{"a", 0, 1}, {"b", 1, 2}});
    EXPECT_TRUE(is_constricted(Ideal(chain, Field::rationals(), {})));
    std::vector<Relation> rows;
    for (const auto& [x, y] : I->hom_pairs()) {
        for (const Relation& r : I->groebner_basis(x, y)) {
            rows.push_back(r);
        }
    }
    EXPECT_TRUE(ideals_equal(*I, close_ideal(I->quiver_ptr(), I->field(), rows)));
    EXPECT_FALSE(ideals_equal(*I, *J));
    EXPECT_THROW((void)ideals_equal(*twobypass().ideal("I2", 2), *twobypass().ideal("I2")), DomainError);
}

TEST(Examples, GeneratingPairsAndFingerprints) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    const Quiver& q = I->quiver();
    PathId a = q.path_id(parse_path(q, "a"));
    PathId cb = q.path_id(parse_path(q, "c*b"));
    PathId da = q.path_id(parse_path(q, "d*a"));
    PathId dcb = q.path_id(parse_path(q, "d*c*b"));
    auto hI = homotopy_relation(I);
    auto hJ = homotopy_relation(J);
    EXPECT_TRUE(hI->generating_pairs().empty());
    ASSERT_EQ(hJ->generating_pairs().size(), 1u);
    EXPECT_EQ(std::minmax(hJ->generating_pairs()[0].first, hJ->generating_pairs()[0].second), std::minmax(da, dcb));
    EXPECT_EQ(hI->fingerprint().verdict(a, cb), Verdict::NotHomotopic);
    EXPECT_EQ(hI->fingerprint().verdict(da, dcb), Verdict::NotHomotopic);
    EXPECT_EQ(hJ->fingerprint().verdict(a, cb), Verdict::Homotopic);
    EXPECT_EQ(hJ->fingerprint().verdict(da, dcb), Verdict::Homotopic);
    auto h0 = homotopy_relation(zero_on(I));
    EXPECT_TRUE(h0->generating_pairs().empty());
    EXPECT_EQ(h0->fingerprint().homotopic_count(), 0u);
    EXPECT_FALSE(h0->fingerprint().has_unknown());
}

TEST(Examples, WalkReduction) {
    const Quiver& q = *exple1().quiver("exple1");
    EXPECT_EQ(walk_reduce(parse_walk(q, "a^-1*a")), trivial_walk(q.vertex("1")));
    EXPECT_EQ(walk_reduce(parse_walk(q, "d*c*c^-1*c*b")), walk_reduce(parse_walk(q, "d*c*b")));
    Walk w = parse_walk(q, "d*a*b^-1*c^-1");
    EXPECT_EQ(walk_reduce(w), w);
    EXPECT_EQ(walk_reduce(walk_reduce(w)), walk_reduce(w));
}

TEST(Examples, DecideAndPresentations) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    const Quiver& q = J->quiver();
    auto hJ = homotopy_relation(J);
    HomotopyDecision same = hJ->decide(parse_walk(q, "c*b"), parse_walk(q, "c*b"));
    EXPECT_EQ(same.verdict, Verdict::Homotopic);
    EXPECT_TRUE(same.chain.empty());
    auto hI = homotopy_relation(I);
    EXPECT_EQ(hI->presentation().generator_count(), 1u);
    EXPECT_TRUE(hI->presentation().relators.empty());
    EXPECT_EQ(hJ->presentation().generator_count(), 1u);
    EXPECT_EQ(hJ->presentation().relators.size(), 1u);
    EXPECT_EQ(abelianization(make_presentation({"g"}, {{1, 1}})).to_string(), "Z/2");
    EXPECT_EQ(abelianization(make_presentation({"g"}, {})).to_string(), "Z");
    EXPECT_EQ(abelianization(make_presentation({"g1", "g2"}, {{1, -2}})).rank, 1u);
}

TEST(Examples, RelationComparison) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    auto hI = homotopy_relation(I);
    EXPECT_EQ(relations_equal(*hI, *homotopy_relation(I)).result, Comparison::Equal);
    RelationComparison c = relations_equal(*hI, *homotopy_relation(J));
    EXPECT_EQ(c.result, Comparison::Different);
    const Quiver& q = I->quiver();
    ASSERT_TRUE(c.witness.has_value());
    EXPECT_EQ(std::minmax(c.witness->first, c.witness->second),
              std::minmax(q.path_id(parse_path(q, "a")), q.path_id(parse_path(q, "c*b"))));
    Dilatation d = Dilatation::identity(q, I->field());
    d.scale[q.arrow_id("d")] = I->field().from_integer(5);
    EXPECT_EQ(relations_equal(*hI, *homotopy_relation(apply_automorphism(d, *I))).result, Comparison::Equal);
}

TEST(Examples, TransvectionsOnIdeals) {
    auto I = exple1().ideal("I");
    const Quiver& q = I->quiver();
    const Field& f = I->field();
    Ideal moved = apply_automorphism(tv(q, f, "a", "c*b", 1), *I);
    EXPECT_TRUE(ideals_equal(moved, Ideal(I->quiver_ptr(), f, {rel(*I, {{1, "d*a"}, {1, "d*c*b"}})})));
    EXPECT_TRUE(ideals_equal(apply_automorphism(tv(q, f, "a", "c*b", -1), moved), *I));
    EXPECT_TRUE(ideals_equal(apply_automorphism(tv(q, f, "a", "c*b", 0), *I), *I));
    auto I0 = twobypass().ideal("I0");
    auto I1 = twobypass().ideal("I1");
    const Quiver& q2 = I0->quiver();
    EXPECT_TRUE(ideals_equal(apply_automorphism(tv(q2, f, "a", "c*b", 1), *I0), *I1));
}

TEST(Examples, ConjugationByDilatation) {
    auto q = exple1().quiver("exple1");
    Field f = Field::rationals();
    Dilatation d = Dilatation::identity(*q, f);
    d.scale[q->arrow_id("a")] = f.from_integer(3);
    d.scale[q->arrow_id("b")] = f.from_integer(2);
    d.scale[q->arrow_id("c")] = f.from_integer(5);
    Dilatation dinv = d;
    for (auto& s : dinv.scale) {
        s = s.inverse();
    }
    Transvection t = tv(*q, f, "a", "c*b", 7);
    auto D = PathAutomorphism::from(q, f, d);
    auto Dinv = PathAutomorphism::from(q, f, dinv);
    PathAutomorphism direct = compose(D, compose(PathAutomorphism::from(q, f, t), Dinv));
    Transvection c = conjugate(d, t, f);
    EXPECT_EQ(c.tau, f.from_rational(mpq_class(70, 3)));
    EXPECT_EQ(PathAutomorphism::from(q, f, c).images(), direct.images());
}

TEST(Examples, DecompositionCases) {
    auto q = exple1().quiver("exple1");
    Field f = Field::rationals();
    Dilatation d = Dilatation::identity(*q, f);
    d.scale[q->arrow_id("d")] = f.from_integer(-1);
    DTDecomposition pure = decompose_DT(PathAutomorphism::from(q, f, d));
    EXPECT_EQ(pure.dilatation, d);
    EXPECT_TRUE(pure.transvections.empty());
    Transvection t3 = tv(*q, f, "a", "c*b", 3);
    DTDecomposition one = decompose_DT(PathAutomorphism::from(q, f, t3));
    EXPECT_TRUE(one.dilatation.is_identity());
    ASSERT_EQ(one.transvections.size(), 1u);
    EXPECT_EQ(one.transvections[0], t3);
    // a -> 2a + cb
    std::vector<Relation> images = PathAutomorphism::identity(q, f).images();
    images[q->arrow_id("a")] = make_relation(*q, f, {{2, parse_path(*q, "a")}, {1, parse_path(*q, "c*b")}});
    DTDecomposition mixed = decompose_DT(PathAutomorphism(q, f, images));
    Dilatation want = Dilatation::identity(*q, f);
    want.scale[q->arrow_id("a")] = f.from_integer(2);
    EXPECT_EQ(mixed.dilatation, want);
    ASSERT_EQ(mixed.transvections.size(), 1u);
    EXPECT_EQ(mixed.transvections[0], tv(*q, f, "a", "c*b", mpq_class(1, 2)));
}

TEST(Examples, ExpLogSinglePair) {
    auto q = exple1().quiver("exple1");
    Field f = Field::rationals();
    for (const mpq_class& tau : {mpq_class(1), mpq_class(-2, 3)}) {
        Derivation nu = log_unipotent(PathAutomorphism::from(q, f, tv(*q, f, "a", "c*b", tau)));
        for (ArrowId a = 0; a < q->arrow_count(); ++a) {
            if (q->arrow(a).name == "a") {
                EXPECT_TRUE(nu.arrow_images[a] == make_relation(*q, f, {{tau, parse_path(*q, "c*b")}}));
            } else {
                EXPECT_TRUE(nu.arrow_images[a].is_zero());
            }
        }
    }
}

TEST(Examples, SuccessorsAndPredecessors) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    StepSearch sI = direct_successors(I);
    EXPECT_EQ(classes(sI), 1u);
    ASSERT_FALSE(sI.steps.empty());
    EXPECT_EQ(sI.steps[0].relation->fingerprint(), homotopy_relation(J)->fingerprint());
    EXPECT_EQ(classes(direct_successors(J)), 0u);
    StepSearch pJ = direct_predecessors(J);
    EXPECT_EQ(classes(pJ), 1u);
    EXPECT_EQ(pJ.steps.at(0).relation->fingerprint(), homotopy_relation(I)->fingerprint());
    EXPECT_EQ(classes(direct_predecessors(I)), 0u);
    auto I0 = twobypass().ideal("I0");
    StepSearch s0 = direct_successors(I0);
    EXPECT_EQ(classes(s0), 1u);
    EXPECT_EQ(s0.steps.at(0).relation->fingerprint(), homotopy_relation(twobypass().ideal("I1"))->fingerprint());
    auto I1f2 = twobypass().ideal("I1", 2);
    StepSearch p1 = direct_predecessors(I1f2);
    EXPECT_EQ(classes(p1), 2u);
    std::set<std::size_t> want = {homotopy_relation(twobypass().ideal("I0", 2))->fingerprint().hash(),
                                  homotopy_relation(twobypass().ideal("I2", 2))->fingerprint().hash()};
    std::set<std::size_t> got;
    for (const GammaStep& s : p1.steps) {
        got.insert(s.relation->fingerprint().hash());
    }
    EXPECT_EQ(got, want);
}

TEST(Examples, SurjectionsAndChains) {
    auto I0 = twobypass().ideal("I0");
    auto I1 = twobypass().ideal("I1");
    SurjectionReport s = check_surjection(*I0, *I1);
    EXPECT_EQ(s.outcome, Outcome::Confirmed);
    EXPECT_EQ(s.source_pi1.to_string(), "Z/2");
    EXPECT_TRUE(s.target_pi1.is_trivial());
    TransvectionChain c = find_transvection_chain(*I0, *I1);
    ASSERT_EQ(c.steps.size(), 1u);
    EXPECT_EQ(c.steps[0], tv(I0->quiver(), I0->field(), "a", "c*b", 1));
    EXPECT_TRUE(find_transvection_chain(*I0, *I0).steps.empty());
    auto I = exple1().ideal("I");
    TransvectionChain e = find_transvection_chain(*I, *exple1().ideal("J"));
    ASSERT_EQ(e.steps.size(), 1u);
    EXPECT_EQ(e.steps[0], tv(I->quiver(), I->field(), "a", "c*b", -1));
}

TEST(Examples, UniversalCovers) {
    auto I0 = twobypass().ideal("I0");
    CoverQuiver c8 = universal_cover(I0, 0, 8);
    EXPECT_TRUE(c8.complete);
    EXPECT_EQ(c8.total_quiver().vertex_count(), 10u);
    // exple1 I: the strip keeps growing
    auto I = exple1().ideal("I");
    std::size_t last = 0;
    for (std::size_t r : {4u, 8u, 12u}) {
        CoverQuiver c = universal_cover(I, 0, r);
        EXPECT_FALSE(c.complete);
        std::size_t fib = c.fiber(0).size();
        EXPECT_GT(fib, last);
        last = fib;
    }
    EXPECT_EQ(is_galois(identity_cover(I)).group_order, 1u);
    EXPECT_EQ(is_galois(identity_cover(I)).status, GaloisStatus::Galois);
}

TEST(Examples, SmashDetails) {
    auto I = exple1().ideal("I");
    CoverQuiver s = smash_product(I, exple1().grading("Z2"));
    EXPECT_EQ(s.total_quiver().vertex_count(), 8u);
    auto J = exple1().ideal("J");
    Grading bad{FiniteGroup::cyclic(2), std::vector<std::size_t>(J->quiver().arrow_count(), 0)};
    bad.degree[J->quiver().arrow_id("a")] = 1;
    try {
        (void)smash_product(J, bad);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("d*a"), std::string::npos) << e.what();
    }
}

TEST(Examples, LiftDetails) {
    auto I = exple1().ideal("I");
    const Quiver& q = I->quiver();
    auto cov = std::make_shared<const CoverQuiver>(universal_cover(I, 0, 6));
    Dilatation d = Dilatation::identity(q, I->field());
    d.scale[q.arrow_id("a")] = I->field().from_integer(2);
    CoverMorphism m = lift_dilatation(cov, d);
    ASSERT_TRUE(m.ok());
    for (VertexId v = 0; v < m.vertex_map.size(); ++v) {
        EXPECT_EQ(m.vertex_map[v], v);
    }
    CoverMorphism id = lift_dilatation(cov, Dilatation::identity(q, I->field()));
    for (ArrowId a = 0; a < id.arrow_map.size(); ++a) {
        EXPECT_EQ(id.arrow_map[a], a);
    }
    CoverMorphism zero = lift_transvection(cov, tv(q, I->field(), "a", "c*b", 0));
    EXPECT_TRUE(zero.ok());
    for (VertexId v = 0; v < zero.vertex_map.size(); ++v) {
        EXPECT_EQ(zero.vertex_map[v], v);
    }
    auto I0 = twobypass().ideal("I0");
    auto c0 = std::make_shared<const CoverQuiver>(universal_cover(I0, 0));
    Dilatation d0 = Dilatation::identity(I0->quiver(), I0->field());
    d0.scale[0] = I0->field().from_integer(-1);
    CoverMorphism md = lift_dilatation(c0, d0);
    EXPECT_TRUE(md.ok());
    EXPECT_GT(md.equivariance_checks, 0u);
    CoverMorphism m1 = lift_transvection(c0, tv(I0->quiver(), I0->field(), "a", "c*b", 1));
    ASSERT_TRUE(m1.ok());
    EXPECT_EQ(m1.kernel.to_string(), "finite of order 2");
    for (std::size_t s : m1.fiber_sizes) {
        EXPECT_EQ(s, 2u);
    }
}

TEST(Examples, PipelineOnOwnCover) {
    auto I0 = twobypass().ideal("I0");
    PipelineReport r = covering_pipeline(*I0, std::make_shared<const CoverQuiver>(universal_cover(I0, 0)));
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.chain.steps.empty());
    EXPECT_EQ(r.image_order, r.group_order);
    EXPECT_EQ(r.privileged_pi1.to_string(), "Z/2");
}
