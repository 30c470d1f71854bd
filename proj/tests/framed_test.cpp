#include <gtest/gtest.h>

#include "milnork/framed.hpp"
#include "milnork/selftest.hpp"

using namespace milnork;

namespace {

FieldElement fe(const FieldPtr& k, int64_t n) { return FieldElement::from_int(k, n); }

Polynomial lin(const FieldPtr& k, int64_t root) {
    return Polynomial::variable(k) - Polynomial::from_ints(k, {root});
}

// Resultant-based oracle for rho_1 (independent of the factorization route).
CanonicalForm rho1_oracle(const FieldPtr& k, const Polynomial& f, const RationalFunction& g) {
    FieldElement acc = FieldElement::one(k);
    for (const auto& [sj, mult] : squarefree_decomposition(f.monic()))
        acc = acc * (resultant(sj, g.num()) / resultant(sj, g.den())).pow(mult);
    return canonical(MilnorElement::symbol(k, {acc}));
}

}  // namespace

TEST(Sigma, Examples) {
    auto F7 = prime_field(7);
    FramedDatum d = sigma(F7, {fe(F7, 2), fe(F7, 3)});
    EXPECT_EQ(d.f, Polynomial::variable(F7));
    ASSERT_EQ(d.targets.size(), 2u);
    EXPECT_EQ(d.targets[0].constant_value(), fe(F7, 2));
    EXPECT_EQ(d.targets[1].constant_value(), fe(F7, 3));

    // m = 0: the unit class
    EXPECT_EQ(rho(sigma(F7, {})).k0(), 1);

    // an entry equal to 1 collapses the value
    EXPECT_TRUE(rho(sigma(F7, {fe(F7, 1), fe(F7, 5)})).is_zero());

    EXPECT_THROW(sigma(F7, {fe(F7, 0)}), DomainError);
}

TEST(Support, Examples) {
    auto F7 = prime_field(7);
    Polynomial f = lin(F7, 2) * lin(F7, 2) * lin(F7, 3);
    auto pts = support(make_framed(F7, f, {}));
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].pi, lin(F7, 3));
    EXPECT_EQ(pts[0].multiplicity, 1);
    EXPECT_TRUE(same_field(pts[0].residue, F7));
    EXPECT_EQ(pts[1].pi, lin(F7, 2));
    EXPECT_EQ(pts[1].multiplicity, 2);

    auto F3 = prime_field(3);
    Polynomial irr = Polynomial::from_ints(F3, {1, 0, 1});
    auto pts3 = support(make_framed(F3, irr, {}));
    ASSERT_EQ(pts3.size(), 1u);
    EXPECT_EQ(pts3[0].pi, irr);
    EXPECT_EQ(pts3[0].multiplicity, 1);
    EXPECT_EQ(pts3[0].residue->size(), 9);

    // unit scaling is discarded
    Polynomial scaled = Polynomial::constant(fe(F7, 5)) * Polynomial::variable(F7);
    auto pts5 = support(make_framed(F7, scaled, {}));
    ASSERT_EQ(pts5.size(), 1u);
    EXPECT_EQ(pts5[0].pi, Polynomial::variable(F7));
}

TEST(Rho, Examples) {
    auto F7 = prime_field(7);
    // f = (x-2)^2 (x-3), g = x: class of 2^2 * 3 = 5
    Polynomial f = lin(F7, 2) * lin(F7, 2) * lin(F7, 3);
    RhoValue v = rho(make_framed(F7, f, {RationalFunction::variable(F7)}));
    EXPECT_EQ(v.k1_exponent(), 5);  // dlog_3(5) = 5

    // k = F_3, f = x^2+1, g = x: N(xbar) = 1, the class dies
    auto F3 = prime_field(3);
    RhoValue z = rho(make_framed(F3, Polynomial::from_ints(F3, {1, 0, 1}),
                                 {RationalFunction::variable(F3)}));
    EXPECT_TRUE(z.is_zero());
}

TEST(Rho, SigmaRoundTripSmoke) {
    Rng rng(61);
    std::vector<FieldPtr> fields = {prime_field(7), extension_field(3, 2),
                                    rational_function_field(prime_field(5), "u")};
    for (const auto& k : fields)
        for (int m = 0; m <= 3; ++m)
            for (int i = 0; i < 50; ++i) {
                std::vector<FieldElement> entries;
                for (int j = 0; j < m; ++j) entries.push_back(random_nonzero_of(rng, k, 3));
                EXPECT_TRUE(rho(sigma(k, entries)) == canonical(MilnorElement::symbol(k, entries)));
            }
}

TEST(Rho, InvertibilityViolationReported) {
    auto F7 = prime_field(7);
    Polynomial f = lin(F7, 2);
    try {
        make_framed(F7, f, {RationalFunction(Polynomial::from_ints(F7, {1}), lin(F7, 2))});
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("g_1"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("x+5"), std::string::npos);
    }
}

TEST(Rho, ResultantOracleRandomized) {
    Rng rng(67);
    for (const auto& k : {prime_field(7), extension_field(3, 2)}) {
        for (int i = 0; i < 500; ++i) {
            Polynomial f;
            RationalFunction g;
            for (;;) {
                f = random_poly(rng, k, 7);
                if (f.degree() < 1) continue;
                g = random_ratfunc(rng, k, 3);
                if (g.is_zero()) continue;
                if (resultant(f, g.num()).is_zero() || resultant(f, g.den()).is_zero()) continue;
                break;
            }
            EXPECT_TRUE(rho(make_framed(k, f, {g})) == rho1_oracle(k, f, g));
        }
    }
}

TEST(Rho, DisjointAdditivity) {
    Rng rng(71);
    auto F7 = prime_field(7);
    for (int i = 0; i < 400; ++i) {
        Polynomial f1 = random_poly(rng, F7, 4);
        Polynomial f2 = random_poly(rng, F7, 4);
        if (f1.degree() < 1 || f2.degree() < 1 || gcd(f1, f2).degree() != 0) continue;
        RationalFunction g = random_ratfunc(rng, F7, 3);
        if (g.is_zero()) continue;
        Polynomial prod = f1 * f2;
        if (resultant(prod, g.num()).is_zero() || resultant(prod, g.den()).is_zero()) continue;
        // K_1 classes add as exponents
        int64_t e1 = rho(make_framed(F7, f1, {g})).k1_exponent();
        int64_t e2 = rho(make_framed(F7, f2, {g})).k1_exponent();
        int64_t e = rho(make_framed(F7, prod, {g})).k1_exponent();
        EXPECT_EQ(e, (e1 + e2) % 6);
        // and K_0 degrees add
        EXPECT_EQ(rho(make_framed(F7, prod, {})).k0(),
                  rho(make_framed(F7, f1, {})).k0() + rho(make_framed(F7, f2, {})).k0());
    }
}

TEST(Rho, UnitScalingInvariance) {
    Rng rng(73);
    auto F9 = extension_field(3, 2);
    for (int i = 0; i < 300; ++i) {
        Polynomial f = random_poly(rng, F9, 5);
        if (f.degree() < 1) continue;
        RationalFunction g = random_ratfunc(rng, F9, 3);
        if (g.is_zero() || resultant(f, g.num()).is_zero() || resultant(f, g.den()).is_zero())
            continue;
        FieldElement mu = random_nonzero(rng, F9);
        Polynomial fs = Polynomial::constant(mu) * f;
        EXPECT_TRUE(rho(make_framed(F9, f, {g})) == rho(make_framed(F9, fs, {g})));
    }
}

TEST(Rho, TargetOneForcesZero) {
    auto F7 = prime_field(7);
    Polynomial f = lin(F7, 2) * lin(F7, 3);
    RhoValue v = rho(make_framed(F7, f, {RationalFunction::from_int(F7, 1),
                                         RationalFunction::variable(F7)}));
    EXPECT_TRUE(v.is_zero());
}

TEST(Rho, FunctionFieldBase) {
    auto F5 = prime_field(5);
    auto ku = rational_function_field(F5, "u");
    FieldElement u = FieldElement::from_ratfunc(ku, RationalFunction::variable(F5));
    Polynomial x = Polynomial::variable(ku);

    // split framing: (x - u)^2 (x - (u+1)), target x
    Polynomial f = (x - Polynomial::constant(u)) * (x - Polynomial::constant(u)) *
                   (x - Polynomial::constant(u + FieldElement::one(ku)));
    RhoValue v = rho(make_framed(ku, f, {RationalFunction::variable(ku)}));
    // expected: {u^2 (u+1)}
    FieldElement expect = u * u * (u + FieldElement::one(ku));
    EXPECT_TRUE(v == canonical(MilnorElement::symbol(ku, {expect})));

    // support enumeration matches the construction
    auto pts = support(make_framed(ku, f, {}));
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].multiplicity + pts[1].multiplicity, 3);

    // irreducible quadratic support: m = 1 goes through resultant norms
    Polynomial f2 = x * x - Polynomial::constant(u);
    RhoValue v2 = rho(make_framed(ku, f2, {RationalFunction::variable(ku)}));
    EXPECT_TRUE(v2 == canonical(MilnorElement::symbol(ku, {-u})));

    // m >= 2 over a degree-2 point is an unsupported transfer
    EXPECT_THROW(rho(make_framed(ku, f2,
                                 {RationalFunction::variable(ku),
                                  RationalFunction::variable(ku) + RationalFunction::from_int(ku, 1)})),
                 DomainError);
    EXPECT_THROW(support(make_framed(ku, f2, {})), DomainError);
}

TEST(Multilinearity, FamilyFibers) {
    auto F7 = prime_field(7);
    HomotopyDatum h = multilinearity_family(F7, fe(F7, 2), fe(F7, 3), 0, {});
    Polynomial f0 = specialize(h, FieldElement::zero(F7)).f;
    Polynomial f1 = specialize(h, FieldElement::one(F7)).f;
    EXPECT_EQ(f0, lin(F7, 2) * lin(F7, 3));
    EXPECT_EQ(f1, lin(F7, 6) * lin(F7, 1));

    // rho at both ends: 2*3 = 6 and 1*6 = 6
    HomotopyCheck hc = homotopy_check(h);
    EXPECT_TRUE(hc.equal);
    EXPECT_TRUE(hc.guaranteed);
    EXPECT_EQ(hc.rho0.k1_exponent(), 3);  // dlog_3(6)
    EXPECT_EQ(hc.rho1.k1_exponent(), 3);

    // the identity it witnesses: {2}+{3} = {6}
    auto lhs = MilnorElement::symbol(F7, {fe(F7, 2)}) + MilnorElement::symbol(F7, {fe(F7, 3)});
    EXPECT_TRUE(canonical(lhs) == hc.rho0);

    // g' = g'' = 1: both fibers (x-1)^2 and rho = 0
    HomotopyDatum triv = multilinearity_family(F7, fe(F7, 1), fe(F7, 1), 0, {});
    EXPECT_EQ(specialize(triv, FieldElement::zero(F7)).f, lin(F7, 1) * lin(F7, 1));
    HomotopyCheck tc = homotopy_check(triv);
    EXPECT_TRUE(tc.equal);
    EXPECT_TRUE(tc.rho0.is_zero());
}

TEST(Multilinearity, ExtraSlots) {
    auto F7 = prime_field(7);
    HomotopyDatum h = multilinearity_family(F7, fe(F7, 2), fe(F7, 3), 1, {fe(F7, 5)});
    EXPECT_EQ(h.weight(), 2);
    // slot 1 carries x, slot 0 the constant 5
    EXPECT_TRUE(h.targets[0].is_constant());
    HomotopyCheck hc = homotopy_check(h);
    EXPECT_TRUE(hc.equal);  // K_2 of a finite field: both ends vanish
    EXPECT_TRUE(hc.rho0.is_zero());
}

TEST(Specialize, ConstantFamilyAndErrors) {
    auto F7 = prime_field(7);
    FieldPtr kt = rational_function_field(F7, "t");
    // constant family: same datum at both ends
    Polynomial f(kt, {FieldElement::from_int(kt, 6), FieldElement::from_int(kt, 1)});
    HomotopyDatum h = make_homotopy(F7, f, {RationalFunction::variable(kt)}, HomotopyMode::Strict);
    FramedDatum d0 = specialize(h, FieldElement::zero(F7));
    FramedDatum d1 = specialize(h, FieldElement::one(F7));
    EXPECT_EQ(d0.f, d1.f);
    EXPECT_TRUE(homotopy_check(h).equal);

    // a target coefficient with a pole in t specializes everywhere but there
    FieldElement t = FieldElement::from_ratfunc(kt, RationalFunction::variable(F7));
    FieldElement pole_coeff = (t - FieldElement::from_int(kt, 2)).inverse();
    RationalFunction g(Polynomial::from_ints(kt, {1}),
                       Polynomial(kt, {-pole_coeff, FieldElement::one(kt)}));  // x - 1/(t-2)
    HomotopyDatum h2 = make_homotopy(F7, f, {g}, HomotopyMode::Endpoint);
    EXPECT_NO_THROW(specialize(h2, FieldElement::zero(F7)));
    EXPECT_THROW(specialize(h2, FieldElement::from_int(F7, 2)), DomainError);
}

TEST(Homotopy, EndpointModeComputedButNotGuaranteed) {
    // F = x^2 - 4, target x / (x - t + 1): the denominator sweeps through the
    // support at t = 3 (the resultant is nonconstant), so strict mode rejects
    // the family while endpoint mode evaluates both ends and reports equal=false.
    auto F5 = prime_field(5);
    FieldPtr kt = rational_function_field(F5, "t");
    FieldElement t = FieldElement::from_ratfunc(kt, RationalFunction::variable(F5));
    Polynomial f(kt, {FieldElement::from_int(kt, -4), FieldElement::zero(kt), FieldElement::one(kt)});
    Polynomial x = Polynomial::variable(kt);
    RationalFunction g(x, x - Polynomial::constant(t - FieldElement::one(kt)));

    EXPECT_THROW(make_homotopy(F5, f, {g}, HomotopyMode::Strict), DomainError);
    HomotopyDatum h = make_homotopy(F5, f, {g}, HomotopyMode::Endpoint);
    HomotopyCheck hc = homotopy_check(h);
    EXPECT_FALSE(hc.guaranteed);
    EXPECT_FALSE(hc.equal);  // {3} at t = 0, collapsed at t = 1 where g = 1
    EXPECT_TRUE(hc.rho1.is_zero());
}

TEST(Homotopy, StrictRandomFamiliesSmoke) {
    Rng rng(79);
    for (const auto& k : {prime_field(5), extension_field(3, 2)}) {
        for (int i = 0; i < 60; ++i) {
            HomotopyDatum h = random_strict_family(rng, k, 5, 1 + static_cast<int>(rng.below(2)));
            EXPECT_TRUE(homotopy_check(h).equal);
        }
    }
}

TEST(Homotopy, FunctionFieldBaseRejected) {
    auto ku = rational_function_field(prime_field(5), "u");
    FieldPtr kt = rational_function_field(prime_field(5), "t");
    Polynomial f(kt, {FieldElement::from_int(kt, 1), FieldElement::from_int(kt, 1)});
    EXPECT_THROW(make_homotopy(ku, f, {}, HomotopyMode::Strict), DomainError);
}
