#include <gtest/gtest.h>

#include "support.hpp"

using namespace bqt;

namespace {

// 1 -b-> 2 -c-> 3 -d-> 4 with a: 1 -> 3 and g: 1 -> 4; (g, d*a) contains the bypassed a.
std::shared_ptr<const Quiver> nested() {
    return parse_quiver(R"(quiver nested {
      vertices: 1 2 3 4;
      arrow b: 1 -> 2; arrow c: 2 -> 3; arrow d: 3 -> 4;
      arrow a: 1 -> 3; arrow g: 1 -> 4;
    })");
}

PathAutomorphism aut(const std::shared_ptr<const Quiver>& q, const Transvection& t) {
    return PathAutomorphism::from(q, Field::rationals(), t);
}

bool mentions(const Path& p, ArrowId a) { return std::find(p.arrows.begin(), p.arrows.end(), a) != p.arrows.end(); }

// exp by summing the series term by term.
std::vector<Relation> exp_series(const Quiver& q, const Field& f, const Derivation& nu) {
    std::vector<Relation> out;
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        Relation term = single_path(q, q.path_id(Path{q.arrow(a).source, q.arrow(a).target, {a}}), f);
        Relation sum = term;
        for (long k = 1; !term.is_zero(); ++k) {
            term = scaled(apply_derivation(q, nu, f, term), f.from_integer(k).inverse());
            add_multiple(sum, term, f.one());
        }
        out.push_back(sum);
    }
    return out;
}

} // namespace

TEST(Transform, InverseAndComposition) {
    auto I = exple1().ideal("I");
    auto q = I->quiver_ptr();
    Transvection t = tv(*q, I->field(), "a", "c*b", mpq_class(2, 3));
    auto id = PathAutomorphism::identity(q, I->field());
    EXPECT_EQ(compose(aut(q, t), aut(q, t.inverse())).images(), id.images());
    // phi(a, cb, s) o phi(a, cb, t) = phi(a, cb, s + t)
    Transvection s = tv(*q, I->field(), "a", "c*b", 5);
    EXPECT_EQ(compose(aut(q, s), aut(q, t)).images(), aut(q, tv(*q, I->field(), "a", "c*b", mpq_class(17, 3))).images());
    EXPECT_THROW(tv(*q, I->field(), "a", "d", 1), DomainError);
}

TEST(Transform, AutomorphismsAreMultiplicative) {
    auto q = nested();
    Field f = Field::rationals();
    PathAutomorphism phi = compose(aut(q, tv(*q, f, "g", "d*a", 2)), aut(q, tv(*q, f, "a", "c*b", -1)));
    for (PathId p = 0; p < q->path_count(); ++p) {
        const Path& path = q->path(p);
        if (path.length() < 2) {
            continue;
        }
        Relation expect = phi.image(path.arrows.front());
        for (std::size_t k = 1; k < path.length(); ++k) {
            expect = multiply(*q, phi.image(path.arrows[k]), expect);
        }
        EXPECT_EQ(phi.apply(p), expect) << to_string(*q, path);
    }
}

TEST(Transform, CommutationAndDoubleBypasses) {
    auto q = nested();
    Field f = Field::rationals();
    EXPECT_FALSE(find_double_bypasses(*q).empty());
    auto bypasses = find_bypasses(*q);
    std::size_t clashes = 0;
    for (const Bypass& x : bypasses) {
        for (const Bypass& y : bypasses) {
            auto fx = aut(q, Transvection{x, f.from_integer(2)});
            auto fy = aut(q, Transvection{y, f.from_integer(3)});
            bool commute = compose(fx, fy).images() == compose(fy, fx).images();
            bool nested_pair = mentions(x.path, y.arrow) || mentions(y.path, x.arrow);
            EXPECT_EQ(commute, !nested_pair) << to_string(*q, x) << " " << to_string(*q, y);
            clashes += nested_pair ? 1 : 0;
        }
    }
    EXPECT_GT(clashes, 0u);
    // no double bypass: everything commutes
    auto q2 = twobypass().quiver("twobypass");
    ASSERT_TRUE(find_double_bypasses(*q2).empty());
    auto b2 = find_bypasses(*q2);
    for (const Bypass& x : b2) {
        for (const Bypass& y : b2) {
            auto fx = aut(q2, Transvection{x, f.from_integer(-1)});
            auto fy = aut(q2, Transvection{y, f.from_rational(mpq_class(1, 2))});
            EXPECT_EQ(compose(fx, fy).images(), compose(fy, fx).images());
        }
    }
}

TEST(Transform, DecompositionOrder) {
    auto q = nested();
    Field f = Field::rationals();
    Dilatation d = Dilatation::identity(*q, f);
    d.scale[q->arrow_id("a")] = f.from_integer(2);
    d.scale[q->arrow_id("g")] = f.from_integer(-3);
    Transvection t1 = tv(*q, f, "a", "c*b", 1);
    Transvection t2 = tv(*q, f, "g", "d*a", 5);
    // dilatation first, then t1, then t2
    PathAutomorphism phi = compose(aut(q, t2), compose(aut(q, t1), PathAutomorphism::from(q, f, d)));
    DTDecomposition dt = decompose_DT(phi);
    EXPECT_EQ(dt.dilatation, d);
    EXPECT_EQ(recompose(q, f, dt).images(), phi.images());
    PathAutomorphism by_hand = PathAutomorphism::from(q, f, dt.dilatation);
    for (const Transvection& t : dt.transvections) {
        by_hand = compose(aut(q, t), by_hand);
    }
    EXPECT_EQ(by_hand.images(), phi.images());
}

TEST(Transform, DecompositionOverPrimeField) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        auto q = random_quiver(rng, 3 + i % 4, 1 + i % 3);
        Field f = Field::prime(i % 2 ? 3 : 7);
        PathAutomorphism phi = PathAutomorphism::from(q, f, random_dilatation(rng, *q, f));
        for (int k = 0; k < 4; ++k) {
            phi = compose(PathAutomorphism::from(q, f, random_transvection(rng, *q, f)), phi);
        }
        EXPECT_EQ(recompose(q, f, decompose_DT(phi)).images(), phi.images());
    }
}

TEST(Transform, ExpMatchesSeries) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 30; ++i) {
        auto q = random_quiver(rng, 3 + i % 4, 1 + i % 4);
        Field f = i % 3 == 2 ? Field::prime(7) : Field::rationals();
        Derivation nu = random_derivation(rng, *q, f);
        PathAutomorphism e = exp_derivation(q, f, nu);
        EXPECT_EQ(e.images(), exp_series(*q, f, nu));
        EXPECT_TRUE(e.is_unipotent());
    }
}

TEST(Transform, LogRejectsNonUnipotent) {
    auto q = nested();
    Field f = Field::rationals();
    Dilatation d = Dilatation::identity(*q, f);
    d.scale[0] = f.from_integer(2);
    EXPECT_THROW(log_unipotent(PathAutomorphism::from(q, f, d)), DomainError);
}

TEST(Gamma, DilatationsKeepTheRelation) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        auto q = random_quiver(rng, 3 + i % 4, 1 + i % 3);
        Field f = Field::rationals();
        auto I = random_ideal(rng, q, f);
        auto D = std::make_shared<const Ideal>(apply_automorphism(random_dilatation(rng, *q, f), *I));
        EXPECT_EQ(homotopy_relation(I)->fingerprint(), homotopy_relation(D)->fingerprint());
    }
}

TEST(Gamma, EdgesAreCertified) {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 15; ++i) {
        auto q = random_quiver(rng, 3 + i % 4, 1 + i % 3);
        auto I = random_ideal(rng, q, Field::rationals());
        GammaQuiver g = explore_gamma(I);
        EXPECT_TRUE(check_gamma_invariants(g).empty());
        ASSERT_NE(g.find(homotopy_relation(I)->fingerprint()), std::nullopt);
        for (const GammaEdge& e : g.edges) {
            const Ideal& rep = *g.vertices[e.from].representatives.at(e.representative);
            auto image = homotopy_relation(apply_automorphism(e.witness, rep));
            EXPECT_EQ(image->fingerprint(), g.vertices[e.to].fingerprint());
            auto [pa, pu] = bypass_paths(*q, e.witness.bypass);
            EXPECT_EQ(image->decide_paths(pa, pu).verdict, Verdict::Homotopic);
            EXPECT_NE(g.vertices[e.from].relation->decide_paths(pa, pu).verdict, Verdict::Homotopic);
        }
        for (const GammaVertex& v : g.vertices) {
            for (const auto& rep : v.representatives) {
                EXPECT_EQ(homotopy_relation(rep)->fingerprint(), v.fingerprint());
            }
            EXPECT_EQ(v.pi1, v.relation->presentation().abelian_invariants);
        }
    }
}

TEST(Gamma, SourcesOfExamples) {
    auto g = explore_gamma(exple1().ideal("J"));
    SourceReport s = find_sources(g);
    ASSERT_EQ(s.sources.size(), 1u);
    EXPECT_EQ(g.vertices[s.sources[0]].pi1.to_string(), "Z");
    auto g2 = explore_gamma(twobypass().ideal("I0", 2));
    EXPECT_EQ(find_sources(g2).sources.size(), 2u);
    EXPECT_FALSE(find_sources(g2).warnings.empty());
}

TEST(Gamma, TrichotomyOnExple1) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    const Quiver& q = I->quiver();
    EXPECT_EQ(classify_transvection(I, tv(q, I->field(), "a", "c*b", 1)).kind, TransvectionCase::B);
    EXPECT_EQ(classify_transvection(J, tv(q, J->field(), "a", "c*b", 1)).kind, TransvectionCase::BReverse);
    EXPECT_EQ(classify_transvection(J, tv(q, J->field(), "a", "c*b", -1)).kind, TransvectionCase::A);
    auto K = std::make_shared<const Ideal>(I->quiver_ptr(), I->field(),
                                           std::vector<Relation>{rel(*I, {{1, "d*a"}}), rel(*I, {{1, "d*c*b"}})});
    TransvectionReport c = classify_transvection(K, tv(q, K->field(), "a", "c*b", 3));
    EXPECT_EQ(c.kind, TransvectionCase::C);
    EXPECT_TRUE(c.holds);
}

TEST(Gamma, SurjectionRefutedAndChains) {
    auto I = exple1().ideal("I");
    auto J = exple1().ideal("J");
    SurjectionReport r = check_surjection(*J, *I);
    EXPECT_EQ(r.outcome, Outcome::Refuted);
    EXPECT_TRUE(r.witness.has_value());
    TransvectionChain c = find_transvection_chain(*I, *J);
    ASSERT_EQ(c.steps.size(), 1u);
    EXPECT_TRUE(ideals_equal(apply_automorphism(c.steps[0], *I), *c.ideals.back()));
    EXPECT_EQ(homotopy_relation(c.ideals.back())->fingerprint(), homotopy_relation(J)->fingerprint());
    EXPECT_THROW(find_transvection_chain(*J, *I), DomainError);
    auto t2 = twobypass().ideal("I2");
    auto t0 = twobypass().ideal("I0");
    TransvectionChain c2 = find_transvection_chain(*t0, *t2);
    EXPECT_EQ(c2.steps.size(), 2u);
    EXPECT_TRUE(ideals_equal(*c2.ideals.back(), *t2));
}

TEST(Gamma, TauScheduleDefaults) {
    EXPECT_EQ(tau_schedule(Field::rationals()).size(), 5u);
    EXPECT_EQ(tau_schedule(Field::prime(5)).size(), 4u);
    EXPECT_EQ(tau_schedule(Field::rationals(), {mpq_class(7)}).size(), 1u);
}
