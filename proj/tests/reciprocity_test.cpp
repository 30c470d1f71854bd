#include <gtest/gtest.h>

#include "milnork/reciprocity.hpp"
#include "milnork/selftest.hpp"

using namespace milnork;

namespace {

struct Fixture {
    FieldPtr F5 = prime_field(5);
    FieldPtr F5t = rational_function_field(prime_field(5), "t");

    FieldElement t() const { return FieldElement::from_ratfunc(F5t, RationalFunction::variable(F5)); }
    FieldElement rf(std::vector<int64_t> num, std::vector<int64_t> den = {1}) const {
        return FieldElement::from_ratfunc(F5t, RationalFunction(Polynomial::from_ints(F5, num),
                                                                Polynomial::from_ints(F5, den)));
    }
};

}  // namespace

TEST(SupportPlaces, Examples) {
    Fixture fx;
    auto places = support_places(fx.F5t, {fx.t()});
    ASSERT_EQ(places.size(), 2u);
    EXPECT_EQ(places[0].pi, Polynomial::variable(fx.F5));
    EXPECT_TRUE(places[1].infinity);

    places = support_places(fx.F5t, {fx.rf({-1, 1}), fx.t()});
    ASSERT_EQ(places.size(), 3u);
    EXPECT_EQ(places[0].pi, Polynomial::variable(fx.F5));
    EXPECT_EQ(places[1].pi, Polynomial::from_ints(fx.F5, {4, 1}));  // t - 1
    EXPECT_TRUE(places[2].infinity);

    EXPECT_TRUE(support_places(fx.F5t, {fx.rf({3})}).empty());
    EXPECT_THROW(support_places(fx.F5t, {FieldElement::zero(fx.F5t)}), DomainError);
}

TEST(ResidueAt, Examples) {
    Fixture fx;
    auto a = MilnorElement::symbol(fx.F5t, {fx.rf({-1, 1}), fx.t()});  // {t-1, t}

    // at (t): class of -1
    auto r = residue_at(a, Place::finite(Polynomial::variable(fx.F5)));
    EXPECT_TRUE(canonical(r) ==
                canonical(MilnorElement::symbol(fx.F5, {FieldElement::from_int(fx.F5, 4)})));

    // at (t^2+1): both entries are units
    auto off = residue_at(a, Place::finite(Polynomial::from_ints(fx.F5, {1, 0, 1})));
    EXPECT_TRUE(off.is_zero_formal());

    // at infinity both entries have valuation -1; the residue is again 2-torsion
    auto inf = residue_at(a, Place::at_infinity());
    EXPECT_EQ(canonical(inf).k1_exponent(), 2);
}

TEST(VerifyWeil, SpecExample) {
    Fixture fx;
    auto a = MilnorElement::symbol(fx.F5t, {fx.rf({-1, 1}), fx.t()});
    ResidueReport rep = verify_weil(a);
    EXPECT_TRUE(rep.zero);
    ASSERT_EQ(rep.entries.size(), 3u);
    // every place of the support appears exactly once, finite then infinity
    EXPECT_EQ(rep.entries[0].place.pi, Polynomial::variable(fx.F5));
    EXPECT_EQ(rep.entries[1].place.pi, Polynomial::from_ints(fx.F5, {4, 1}));
    EXPECT_TRUE(rep.entries[2].place.infinity);
    // residues: {-1} at (t), nothing at (t-1), {-1}^{-1} at infinity
    EXPECT_EQ(canonical(rep.entries[0].residue).k1_exponent(), 2);
    EXPECT_TRUE(rep.entries[1].residue.is_zero_formal());
    EXPECT_EQ(canonical(rep.entries[2].residue).k1_exponent(), 2);
}

TEST(VerifyWeil, ConstantSymbol) {
    Fixture fx;
    ResidueReport rep = verify_weil(MilnorElement::symbol(fx.F5t, {fx.rf({3})}));
    EXPECT_TRUE(rep.entries.empty());
    EXPECT_TRUE(rep.zero);
}

TEST(VerifyWeil, DegreeOneDivisorIdentity) {
    // for m+1 = 1 the reciprocity total is deg div(f) = 0
    Fixture fx;
    Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        FieldElement f = random_ratfunc_element(rng, fx.F5t, 5);
        ResidueReport rep = verify_weil(MilnorElement::symbol(fx.F5t, {f}));
        EXPECT_TRUE(rep.zero) << to_string(f);
    }
}

TEST(VerifyWeil, RandomizedSmoke) {
    auto F7t = rational_function_field(prime_field(7), "t");
    Rng rng(43);
    for (int i = 0; i < 150; ++i) {
        std::vector<FieldElement> entries;
        int m1 = 1 + static_cast<int>(rng.below(3));
        for (int j = 0; j < m1; ++j) entries.push_back(random_ratfunc_element(rng, F7t, 4));
        ResidueReport rep = verify_weil(MilnorElement::symbol(F7t, entries));
        EXPECT_TRUE(rep.zero);
    }
}

TEST(ResidueAt, AdditiveOffSupportZero) {
    Fixture fx;
    Rng rng(47);
    Place nu = Place::finite(Polynomial::from_ints(fx.F5, {2, 1}));  // t + 2
    for (int i = 0; i < 200; ++i) {
        auto a = MilnorElement::symbol(
            fx.F5t, {random_ratfunc_element(rng, fx.F5t, 3), random_ratfunc_element(rng, fx.F5t, 3)});
        auto b = MilnorElement::symbol(
            fx.F5t, {random_ratfunc_element(rng, fx.F5t, 3), random_ratfunc_element(rng, fx.F5t, 3)});
        EXPECT_TRUE(canonical(residue_at(a + b, nu)) ==
                    canonical(residue_at(a, nu) + residue_at(b, nu)));
    }
    // off the support the residue vanishes formally
    auto c = MilnorElement::symbol(fx.F5t, {fx.t(), fx.rf({-1, 1})});
    EXPECT_TRUE(residue_at(c, Place::finite(Polynomial::from_ints(fx.F5, {3, 1}))).is_zero_formal());
}

TEST(SmoothCurve, PreconditionViolationRejected) {
    // f = (t-2)(t-3) has a double pole at infinity; g = t is not a unit there
    Fixture fx;
    auto f = fx.rf({1, 0, 1});  // t^2 + 1, support includes infinity
    EXPECT_THROW(smooth_curve_check(fx.F5t, {fx.t()}, f), DomainError);

    auto F7 = prime_field(7);
    auto F7t = rational_function_field(F7, "t");
    auto mk = [&](std::vector<int64_t> num, std::vector<int64_t> den = {1}) {
        return FieldElement::from_ratfunc(
            F7t, RationalFunction(Polynomial::from_ints(F7, num), Polynomial::from_ints(F7, den)));
    };
    // f = (t-2)(t-3) = t^2+2t+6 over F_7
    auto f2 = mk({6, 2, 1});
    auto tvar = FieldElement::from_ratfunc(F7t, RationalFunction::variable(F7));
    EXPECT_THROW(smooth_curve_check(F7t, {tvar}, f2), DomainError);
}

TEST(SmoothCurve, EvaluatedExampleOverF11) {
    // f = (t-2)(t-3)/(t-1)^2, g = (t-4)/(t-5) over F_11:
    //   zero side {g(2)} + {g(3)}, pole side 2*{g(1)}; direct evaluation gives
    //   g(2) = 8, g(3) = 6, g(1) = 9, and 8*6 = 81 = 4 mod 11 on both sides.
    auto F11 = prime_field(11);
    auto kt = rational_function_field(F11, "t");
    auto P = [&](std::vector<int64_t> c) { return Polynomial::from_ints(F11, c); };
    Polynomial t = Polynomial::variable(F11);
    RationalFunction f((t - P({2})) * (t - P({3})), (t - P({1})) * (t - P({1})));
    RationalFunction g(t - P({4}), t - P({5}));

    auto fe = [&](int64_t n) { return FieldElement::from_int(F11, n); };
    EXPECT_EQ(g.eval(fe(2)), fe(8));
    EXPECT_EQ(g.eval(fe(3)), fe(6));
    EXPECT_EQ(g.eval(fe(1)), fe(9));
    EXPECT_EQ(fe(8) * fe(6), fe(4));
    EXPECT_EQ(fe(9) * fe(9), fe(4));

    CurveCheck cc = smooth_curve_check(kt, {FieldElement::from_ratfunc(kt, g)},
                                       FieldElement::from_ratfunc(kt, f));
    EXPECT_TRUE(cc.equal);
    EXPECT_TRUE(cc.zero_side == canonical(MilnorElement::symbol(F11, {fe(4)})));
    EXPECT_TRUE(cc.pole_side == canonical(MilnorElement::symbol(F11, {fe(4)})));
    // f is not congruent to 1 on the support of g, so equality was not
    // guaranteed by the two-sided identity; it holds for these values
    EXPECT_FALSE(cc.guaranteed);
}

TEST(SmoothCurve, DegreeZeroSides) {
    // m = 0: both sides count the divisor degree
    Fixture fx;
    auto f = fx.rf({6, 2, 1}, {4, 1});  // (t^2+2t+6)/(t+4): deg num 2, pole at (t+4) and infinity
    CurveCheck cc = smooth_curve_check(fx.F5t, {}, f);
    EXPECT_TRUE(cc.equal);
    EXPECT_EQ(cc.zero_side.k0(), 2);
    EXPECT_EQ(cc.pole_side.k0(), 2);
}

TEST(SmoothCurve, NotGuaranteedSidesCanDiffer) {
    // g a unit on supp(f) is enough to compute both sides but not to force
    // equality: f = t, g = (t-1)/(t-2) over F_5 gives {3} vs {1}.
    Fixture fx;
    CurveCheck cc = smooth_curve_check(fx.F5t, {fx.rf({-1, 1}, {-2, 1})}, fx.t());
    EXPECT_FALSE(cc.guaranteed);
    EXPECT_FALSE(cc.equal);
    EXPECT_EQ(cc.zero_side.k1_exponent(),
              discrete_log(FieldElement::from_int(fx.F5, 3), find_generator(fx.F5)));
    EXPECT_TRUE(cc.pole_side.is_zero());
}

TEST(SmoothCurve, GuaranteedInstancesAlwaysEqual) {
    // construct f = 1 + c * prod pi_nu / D with the pi_nu covering the support
    // of g and deg D > deg num: then f = 1 at every zero and pole of g
    // (including infinity) and the lemma forces equality.
    Rng rng(53);
    for (const auto& q : {int64_t(5), int64_t(7)}) {
        FieldPtr k = prime_field(q);
        FieldPtr kt = rational_function_field(k, "t");
        int built = 0;
        while (built < 120) {
            RationalFunction g = random_ratfunc(rng, k, 2);
            if (g.is_constant()) continue;
            Polynomial prod = Polynomial::from_ints(k, {1});
            for (const auto& [pi, m] : poly_factor(g.num()).factors) prod = prod * pi;
            for (const auto& [pi, m] : poly_factor(g.den()).factors) prod = prod * pi;
            Polynomial den = Polynomial::from_ints(k, {1});
            while (den.degree() <= prod.degree()) {
                Polynomial lin = Polynomial::variable(k) - Polynomial::constant(random_element(rng, k));
                den = den * lin;
            }
            if (gcd(den, prod).degree() > 0) continue;
            FieldElement c = random_nonzero(rng, k);
            RationalFunction f =
                RationalFunction::from_int(k, 1) + RationalFunction(Polynomial::constant(c) * prod, den);
            if (f.is_zero() || f.is_one()) continue;
            CurveCheck cc;
            try {
                cc = smooth_curve_check(kt, {FieldElement::from_ratfunc(kt, g)},
                                        FieldElement::from_ratfunc(kt, f));
            } catch (const DomainError&) {
                continue;  // support overlap after normalization; regenerate
            }
            EXPECT_TRUE(cc.guaranteed) << to_string(f, "t") << " | " << to_string(g, "t");
            EXPECT_TRUE(cc.equal) << to_string(f, "t") << " | " << to_string(g, "t");
            ++built;
        }
    }
}
