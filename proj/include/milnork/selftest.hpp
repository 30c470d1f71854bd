// The acceptance property suites, runnable from the CLI (`selftest`) and from
// the test harness. Every suite is driven by an explicit seed and produces a
// deterministic result; the printed report is byte-reproducible for a fixed
// seed.
#pragma once

#include <string>
#include <vector>

#include "milnork/cli.hpp"
#include "milnork/framed.hpp"
#include "milnork/framing_matrix.hpp"
#include "milnork/reciprocity.hpp"

namespace milnork {

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

inline FieldElement random_element(Rng& rng, const FieldPtr& k) {
    return element_from_index(k, static_cast<int64_t>(rng.below(static_cast<uint64_t>(k->size()))));
}

inline FieldElement random_nonzero(Rng& rng, const FieldPtr& k) {
    return element_from_index(k,
                              1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(k->size() - 1))));
}

inline Polynomial random_poly(Rng& rng, const FieldPtr& k, int max_deg) {
    int deg = static_cast<int>(rng.below(static_cast<uint64_t>(max_deg + 1)));
    std::vector<FieldElement> c;
    c.reserve(static_cast<size_t>(deg) + 1);
    for (int i = 0; i < deg; ++i) c.push_back(random_element(rng, k));
    c.push_back(random_nonzero(rng, k));  // exact degree
    return Polynomial(k, std::move(c));
}

inline Polynomial random_monic(Rng& rng, const FieldPtr& k, int deg) {
    std::vector<FieldElement> c;
    c.reserve(static_cast<size_t>(deg) + 1);
    for (int i = 0; i < deg; ++i) c.push_back(random_element(rng, k));
    c.push_back(FieldElement::one(k));
    return Polynomial(k, std::move(c));
}

inline Polynomial random_monic_squarefree(Rng& rng, const FieldPtr& k, int deg) {
    for (;;) {
        Polynomial f = random_monic(rng, k, deg);
        Polynomial fp = f.derivative();
        if (!fp.is_zero() && gcd(f, fp).degree() == 0) return f;
    }
}

/// Nonzero rational function with numerator and denominator degrees <= max_deg.
inline RationalFunction random_ratfunc(Rng& rng, const FieldPtr& base, int max_deg) {
    Polynomial num = random_poly(rng, base, max_deg);
    Polynomial den = random_poly(rng, base, max_deg);
    return RationalFunction(std::move(num), std::move(den));
}

inline FieldElement random_ratfunc_element(Rng& rng, const FieldPtr& kt, int max_deg) {
    return FieldElement::from_ratfunc(kt, random_ratfunc(rng, kt->base(), max_deg));
}

inline FieldElement random_nonzero_of(Rng& rng, const FieldPtr& k, int max_deg) {
    if (k->finite()) return random_nonzero(rng, k);
    return random_ratfunc_element(rng, k, max_deg);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteResult {
    SuiteResult(int c, std::string n) : criterion(c), name(std::move(n)) {}

    int criterion = 0;
    std::string name;
    int64_t cases = 0;
    int64_t failures = 0;
    bool pass() const { return failures == 0; }
    std::string detail;  // first failure, if any

    std::string line() const {
        std::string s = "criterion=" + std::to_string(criterion) + " name=" + name +
                        " cases=" + std::to_string(cases) + " failures=" + std::to_string(failures) +
                        (pass() ? " pass=true" : " pass=false");
        if (!detail.empty()) s += " detail=[" + detail + "]";
        return s;
    }
};

namespace selftest_detail {

inline std::vector<FieldPtr> acceptance_fields() {
    return {prime_field(5), prime_field(7), extension_field(3, 2), prime_field(11),
            rational_function_field(prime_field(5), "u")};
}

inline void record_failure(SuiteResult& r, const std::string& what) {
    ++r.failures;
    if (r.detail.empty()) r.detail = what;
}

}  // namespace selftest_detail

/// Criterion 1: canonical(rho(sigma(g))) == canonical({g}) for m <= 3 over
/// F_5, F_7, F_9, F_11 and F_5(u) with rational entries.
inline SuiteResult suite_rho_sigma(uint64_t seed, int cases_per_cell = 1000) {
    SuiteResult res{1, "rho-sigma-identity"};
    Rng rng(mix_seed(seed, 1));
    for (const FieldPtr& k : selftest_detail::acceptance_fields()) {
        for (int m = 0; m <= 3; ++m) {
            for (int c = 0; c < cases_per_cell; ++c) {
                std::vector<FieldElement> entries;
                for (int i = 0; i < m; ++i) entries.push_back(random_nonzero_of(rng, k, 3));
                ++res.cases;
                RhoValue lhs = rho(sigma(k, entries));
                CanonicalForm rhs = canonical(MilnorElement::symbol(k, entries));
                if (!(lhs == rhs))
                    selftest_detail::record_failure(res, "field " + k->name() + " m=" +
                                                             std::to_string(m));
            }
        }
    }
    return res;
}

/// Criterion 2: the multilinearity family factors as (x-g')(x-g'') at t=0 and
/// (x-g'g'')(x-1) at t=1, its two rho values agree, and {g'}+{g''} = {g'g''}.
inline SuiteResult suite_multilinearity(uint64_t seed, int cases_per_field = 500) {
    SuiteResult res{2, "multilinearity-homotopy"};
    Rng rng(mix_seed(seed, 2));
    for (const FieldPtr& k : {prime_field(5), prime_field(7), extension_field(3, 2), prime_field(11)}) {
        for (int c = 0; c < cases_per_field; ++c) {
            FieldElement gp = random_nonzero(rng, k), gpp = random_nonzero(rng, k);
            ++res.cases;
            HomotopyDatum h = multilinearity_family(k, gp, gpp, 0, {});
            Polynomial x = Polynomial::variable(k);
            Polynomial f0 = specialize(h, FieldElement::zero(k)).f;
            Polynomial f1 = specialize(h, FieldElement::one(k)).f;
            bool ok = f0 == (x - Polynomial::constant(gp)) * (x - Polynomial::constant(gpp)) &&
                      f1 == (x - Polynomial::constant(gp * gpp)) *
                                (x - Polynomial::constant(FieldElement::one(k)));
            ok = ok && homotopy_check(h).equal;
            MilnorElement sum = MilnorElement::symbol(k, {gp}) + MilnorElement::symbol(k, {gpp});
            ok = ok && canonical(sum) == canonical(MilnorElement::symbol(k, {gp * gpp}));
            if (!ok)
                selftest_detail::record_failure(res, "field " + k->name() + " g'=" + to_string(gp) +
                                                         " g''=" + to_string(gpp));
        }
    }
    return res;
}

/// Criterion 3: Steinberg and derived relations, exhaustive over F_q^* for
/// q <= 11 and randomized over F_q(t).
inline SuiteResult suite_steinberg(uint64_t seed, int random_cases = 10000) {
    SuiteResult res{3, "steinberg-relations"};
    Rng rng(mix_seed(seed, 3));
    std::vector<FieldPtr> finite = {prime_field(2),        prime_field(3),  extension_field(2, 2),
                                    prime_field(5),        prime_field(7),  extension_field(2, 3),
                                    extension_field(3, 2), prime_field(11)};
    for (const FieldPtr& k : finite) {
        const FieldElement one = FieldElement::one(k);
        for (int64_t i = 1; i < k->size(); ++i) {
            FieldElement a = element_from_index(k, i);
            if (!(one - a).is_zero()) {
                ++res.cases;
                if (!canonical(MilnorElement::symbol(k, {a, one - a})).is_zero())
                    selftest_detail::record_failure(res, "steinberg " + k->name());
            }
            ++res.cases;
            if (!canonical(MilnorElement::symbol(k, {a, -a})).is_zero())
                selftest_detail::record_failure(res, "a,-a " + k->name());
            for (int64_t j = 1; j < k->size(); ++j) {
                FieldElement b = element_from_index(k, j);
                ++res.cases;
                MilnorElement s = MilnorElement::symbol(k, {a, b}) + MilnorElement::symbol(k, {b, a});
                if (!canonical(s).is_zero())
                    selftest_detail::record_failure(res, "anticommutativity " + k->name());
            }
        }
    }
    std::vector<FieldPtr> kts = {rational_function_field(prime_field(5), "t"),
                                 rational_function_field(prime_field(7), "t"),
                                 rational_function_field(extension_field(3, 2), "t"),
                                 rational_function_field(prime_field(11), "t")};
    const int per_field = random_cases / static_cast<int>(kts.size());
    for (const FieldPtr& kt : kts) {
        const FieldElement one = FieldElement::one(kt);
        for (int c = 0; c < per_field; ++c) {
            FieldElement a = random_ratfunc_element(rng, kt, 4);
            if (a.is_one()) continue;
            FieldElement b = random_ratfunc_element(rng, kt, 4);
            ++res.cases;
            bool ok = canonical(MilnorElement::symbol(kt, {a, one - a})).is_zero() &&
                      canonical(MilnorElement::symbol(kt, {a, -a})).is_zero();
            MilnorElement s = MilnorElement::symbol(kt, {a, b}) + MilnorElement::symbol(kt, {b, a});
            ok = ok && canonical(s).is_zero();
            if (!ok)
                selftest_detail::record_failure(res, kt->name() + " a=" + to_string(a) +
                                                         " b=" + to_string(b));
        }
    }
    return res;
}

/// Criterion 4: Weil reciprocity for random symbols of degree <= 3 with entry
/// degrees <= 6 over F_q(t).
inline SuiteResult suite_weil(uint64_t seed, int cases = 1000) {
    SuiteResult res{4, "weil-reciprocity"};
    Rng rng(mix_seed(seed, 4));
    std::vector<FieldPtr> kts = {rational_function_field(prime_field(5), "t"),
                                 rational_function_field(prime_field(7), "t"),
                                 rational_function_field(extension_field(3, 2), "t"),
                                 rational_function_field(prime_field(11), "t")};
    const int per_field = cases / static_cast<int>(kts.size());
    for (const FieldPtr& kt : kts) {
        for (int c = 0; c < per_field; ++c) {
            int m1 = 1 + static_cast<int>(rng.below(3));  // degree m+1 in {1,2,3}
            std::vector<FieldElement> entries;
            for (int i = 0; i < m1; ++i) entries.push_back(random_ratfunc_element(rng, kt, 6));
            ++res.cases;
            ResidueReport rep = verify_weil(MilnorElement::symbol(kt, entries));
            if (!rep.zero)
                selftest_detail::record_failure(res, kt->name() + " degree " + std::to_string(m1));
        }
    }
    return res;
}

/// Criterion 5: rho_1 against the independent resultant oracle.
inline SuiteResult suite_resultant_oracle(uint64_t seed, int cases = 10000) {
    SuiteResult res{5, "rho1-resultant-oracle"};
    Rng rng(mix_seed(seed, 5));
    std::vector<FieldPtr> fields = {prime_field(5), prime_field(7), extension_field(3, 2),
                                    prime_field(11)};

    auto oracle_class = [](const Polynomial& f, const RationalFunction& g) {
        // product over squarefree parts s_j of monic f of
        // (Res(s_j, num)/Res(s_j, den))^j
        FieldElement acc = FieldElement::one(f.field());
        for (const auto& [sj, mult] : squarefree_decomposition(f.monic()))
            acc = acc * (resultant(sj, g.num()) / resultant(sj, g.den())).pow(mult);
        return acc;
    };

    const int finite_cases = (cases * 4) / 5;
    const int per_field = finite_cases / static_cast<int>(fields.size());
    for (const FieldPtr& k : fields) {
        for (int c = 0; c < per_field; ++c) {
            Polynomial f;
            RationalFunction g;
            for (;;) {
                f = random_poly(rng, k, 8);
                if (f.degree() < 1) continue;
                g = random_ratfunc(rng, k, 4);
                if (g.is_zero()) continue;
                if (resultant(f, g.num()).is_zero() || resultant(f, g.den()).is_zero()) continue;
                break;
            }
            ++res.cases;
            RhoValue got = rho(make_framed(k, f, {g}));
            CanonicalForm want = canonical(MilnorElement::symbol(k, {oracle_class(f, g)}));
            if (!(got == want)) selftest_detail::record_failure(res, k->name());
        }
    }

    // over F_5(u), with framings built to split into linear factors
    FieldPtr ku = rational_function_field(prime_field(5), "u");
    const int ratfunc_cases = cases - static_cast<int>(res.cases);
    for (int c = 0; c < ratfunc_cases; ++c) {
        Polynomial f = Polynomial::constant(random_nonzero_of(rng, ku, 1));
        int deg = 1 + static_cast<int>(rng.below(3));
        for (int i = 0; i < deg; ++i) {
            FieldElement root = random_ratfunc_element(rng, ku, 1);
            Polynomial lin = Polynomial::variable(ku) - Polynomial::constant(root);
            int mult = 1 + static_cast<int>(rng.below(2));
            for (int l = 0; l < mult; ++l) f = f * lin;
        }
        RationalFunction g;
        for (;;) {
            Polynomial num(ku, {random_ratfunc_element(rng, ku, 1), random_ratfunc_element(rng, ku, 1)});
            Polynomial den(ku, {random_ratfunc_element(rng, ku, 1), FieldElement::one(ku)});
            if (num.is_zero()) continue;
            g = RationalFunction(num, den);
            if (!resultant(f, g.num()).is_zero() && !resultant(f, g.den()).is_zero()) break;
        }
        ++res.cases;
        RhoValue got = rho(make_framed(ku, f, {g}));
        CanonicalForm want = canonical(MilnorElement::symbol(ku, {oracle_class(f, g)}));
        if (!(got == want)) selftest_detail::record_failure(res, ku->name());
    }
    return res;
}

/// Random strict-mode family: F(t,x) = f_0(x) + (sum_i t^i r_i(x)) * prod_j
/// (x - v_j), with targets drawn from the probe values v_j so that every
/// resultant against F is constant in t by construction.
inline HomotopyDatum random_strict_family(Rng& rng, const FieldPtr& k, int max_deg, int weight) {
    FieldPtr kt = rational_function_field(k, "t");
    auto lift = [&](const FieldElement& c) {
        return FieldElement::from_ratfunc(kt, RationalFunction::constant(c));
    };
    for (;;) {
        int D = 2 + static_cast<int>(rng.below(static_cast<uint64_t>(max_deg - 1)));
        int probes = static_cast<int>(rng.below(3));
        if (weight > 0 && probes == 0) probes = 1;
        if (probes > D - 1) probes = D - 1;
        if (probes < 0) probes = 0;

        // distinct probe values with nonzero f_0
        std::vector<FieldElement> vs;
        bool bad = false;
        for (int i = 0; i < probes; ++i) {
            FieldElement v = random_element(rng, k);
            for (const auto& w : vs)
                if (w == v) bad = true;
            vs.push_back(v);
        }
        if (bad) continue;

        Polynomial f0 = random_monic_squarefree(rng, k, D);
        for (const auto& v : vs)
            if (f0.eval(v).is_zero()) bad = true;
        if (bad) continue;

        // probe product and the t-dependent bump
        Polynomial probe_prod = Polynomial::from_ints(k, {1});
        for (const auto& v : vs) probe_prod = probe_prod * (Polynomial::variable(k) - Polynomial::constant(v));
        int bump_deg = D - 1 - probes;

        Polynomial x_kt = Polynomial::variable(kt);
        Polynomial f(kt);
        {
            std::vector<FieldElement> c;
            for (int i = 0; i <= f0.degree(); ++i) c.push_back(lift(f0.coeff(i)));
            f = Polynomial(kt, std::move(c));
        }
        int tdeg = 1 + static_cast<int>(rng.below(3));
        for (int ti = 1; ti <= tdeg; ++ti) {
            if (bump_deg < 0) break;
            Polynomial r = random_poly(rng, k, bump_deg);
            if (r.is_zero()) continue;
            Polynomial bump_k = r * probe_prod;  // x-degree < D, so lc stays constant
            std::vector<FieldElement> c;
            for (int i = 0; i <= bump_k.degree(); ++i)
                c.push_back(FieldElement::from_ratfunc(
                    kt, RationalFunction(Polynomial::monomial(bump_k.coeff(i), ti))));
            f = f + Polynomial(kt, std::move(c));
        }

        // targets: products of probes with exponents in {-1,0,1}, scaled
        std::vector<RationalFunction> targets;
        bool target_bad = false;
        for (int gi = 0; gi < weight; ++gi) {
            RationalFunction g = RationalFunction::constant(lift(random_nonzero(rng, k)));
            for (const auto& v : vs) {
                int e = static_cast<int>(rng.below(3)) - 1;
                if (e == 0) continue;
                RationalFunction lin(x_kt - Polynomial::constant(lift(v)));
                g = e > 0 ? g * lin : g / lin;
            }
            if (g.is_zero()) target_bad = true;
            targets.push_back(std::move(g));
        }
        if (target_bad) continue;

        try {
            return make_homotopy(k, f, std::move(targets), HomotopyMode::Strict);
        } catch (const DomainError&) {
            continue;  // rejection: regenerate
        }
    }
}

/// Criterion 6: strict-mode families always have equal endpoint values.
inline SuiteResult suite_homotopy_invariance(uint64_t seed, int cases_per_field = 1000) {
    SuiteResult res{6, "homotopy-invariance"};
    Rng rng(mix_seed(seed, 6));
    for (const FieldPtr& k : {prime_field(5), prime_field(7), extension_field(3, 2), prime_field(11)}) {
        for (int c = 0; c < cases_per_field; ++c) {
            int weight = static_cast<int>(rng.below(3));
            HomotopyDatum h = random_strict_family(rng, k, 5, weight);
            ++res.cases;
            HomotopyCheck hc = homotopy_check(h);
            if (!hc.equal)
                selftest_detail::record_failure(
                    res, k->name() + " F=" + to_string(h.f, "x") + " m=" + std::to_string(weight));
        }
    }
    return res;
}

/// Criterion 7: transfer(restriction(a)) = d*a for finite tower pairs.
inline SuiteResult suite_projection_formula(uint64_t seed, int cases_per_pair = 1000) {
    SuiteResult res{7, "transfer-projection-formula"};
    Rng rng(mix_seed(seed, 7));
    std::vector<FieldPtr> bases = {prime_field(2),        prime_field(3),  extension_field(2, 2),
                                   prime_field(5),        prime_field(7),  extension_field(2, 3),
                                   extension_field(3, 2)};
    for (const FieldPtr& k : bases) {
        for (int d = 2; d <= 3; ++d) {
            FieldPtr e = extension_field(k, default_modulus(k, d), "z", false);
            for (int c = 0; c < cases_per_pair; ++c) {
                int m = static_cast<int>(rng.below(3));
                // random element: a few random symbols with small coefficients
                MilnorElement a = MilnorElement::zero(k, m);
                int terms = 1 + static_cast<int>(rng.below(3));
                for (int ti = 0; ti < terms; ++ti) {
                    std::vector<FieldElement> entries;
                    for (int i = 0; i < m; ++i) entries.push_back(random_nonzero(rng, k));
                    int64_t coeff = static_cast<int64_t>(rng.below(5)) - 2;
                    a += MilnorElement::symbol(k, entries).scaled(coeff);
                }
                ++res.cases;
                MilnorElement back = transfer(restriction(a, e), k);
                if (!(canonical(back) == canonical(a.scaled(d))))
                    selftest_detail::record_failure(res, k->name() + " d=" + std::to_string(d) +
                                                             " m=" + std::to_string(m));
            }
        }
    }
    return res;
}

/// Criterion 8: framing reduction A * prod E = [I_n | 0] on random full-rank
/// matrices, plus exact stabilization commutation and shuffle coherence.
inline SuiteResult suite_framing_reduction(uint64_t seed, int cases = 10000) {
    SuiteResult res{8, "framing-reduction"};
    Rng rng(mix_seed(seed, 8));
    std::vector<FieldPtr> fields = {prime_field(2), prime_field(3), prime_field(5), prime_field(7)};
    for (int c = 0; c < cases; ++c) {
        const FieldPtr& k = fields[c % fields.size()];
        int n = 1 + static_cast<int>(rng.below(4));
        int N = n + 1 + static_cast<int>(rng.below(static_cast<uint64_t>(7 - n)));
        Matrix a(k, n, N);
        for (;;) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < N; ++j) a.at(i, j) = random_element(rng, k);
            if (a.rank() == n) break;
        }
        ++res.cases;
        std::vector<Transvection> ops = reduce_to_projection(a);
        Matrix m = a;
        for (const auto& t : ops) apply_transvection(m, t);
        bool ok = m == Matrix::projection(k, n, N) &&
                  static_cast<int>(ops.size()) <= n * (N + 2);
        if (!ok) selftest_detail::record_failure(res, "reduction n=" + std::to_string(n));

        if (c % 10 == 0) {
            // stabilizations commute
            Matrix v(k, n, 1);
            for (int i = 0; i < n; ++i) v.at(i, 0) = random_element(rng, k);
            auto [an, vn] = stabilize_n(a, v);
            Matrix lhs = stabilize_N(an);
            auto [rhs, vr] = stabilize_n(stabilize_N(a), v);
            ++res.cases;
            if (!(lhs == rhs && vn == vr))
                selftest_detail::record_failure(res, "stabilization commutation");

            // shuffle coherence on a random triple of levels
            int dims[6];
            for (int& d : dims) d = 1 + static_cast<int>(rng.below(2));
            Matrix t1 = external_shuffle(k, dims[0], dims[1], dims[2], dims[3]);
            Matrix t2 = external_shuffle(k, dims[0] + dims[2], dims[1] + dims[3], dims[4], dims[5]);
            Matrix t3 = external_shuffle(k, dims[2], dims[3], dims[4], dims[5]);
            Matrix t4 = external_shuffle(k, dims[0], dims[1], dims[2] + dims[4], dims[3] + dims[5]);
            Matrix lhs2 = direct_sum(t1, Matrix::identity(k, dims[4] + dims[5])) * t2;
            Matrix rhs2 = direct_sum(Matrix::identity(k, dims[0] + dims[1]), t3) * t4;
            ++res.cases;
            if (!(lhs2 == rhs2)) selftest_detail::record_failure(res, "shuffle coherence");

            // external product of projections is a projection
            Matrix p1 = Matrix::projection(k, dims[0], dims[0] + dims[1]);
            Matrix p2 = Matrix::projection(k, dims[2], dims[2] + dims[3]);
            ++res.cases;
            if (!(external_product(p1, p2) ==
                  Matrix::projection(k, dims[0] + dims[2], dims[0] + dims[1] + dims[2] + dims[3])))
                selftest_detail::record_failure(res, "projection product");
        }
    }
    return res;
}

inline std::vector<SuiteResult> run_all_suites(uint64_t seed) {
    return {suite_rho_sigma(seed),          suite_multilinearity(seed),
            suite_steinberg(seed),          suite_weil(seed),
            suite_resultant_oracle(seed),   suite_homotopy_invariance(seed),
            suite_projection_formula(seed), suite_framing_reduction(seed)};
}

/// Deterministic selftest report; identical seeds give byte-identical text.
inline std::string selftest_report(uint64_t seed) {
    std::string out = "selftest seed=" + std::to_string(seed) + "\n";
    bool all = true;
    for (const SuiteResult& r : run_all_suites(seed)) {
        out += r.line() + "\n";
        all = all && r.pass();
    }
    out += all ? "result=pass\n" : "result=fail\n";
    return out;
}

}  // namespace milnork
