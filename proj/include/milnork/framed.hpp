// Desk-scale level-1 framed correspondences over a point: a framing
// polynomial f in k[x] together with target functions invertible on its
// vanishing locus. sigma sends a symbol to the constant correspondence with
// framing x; rho sums transferred symbol values over the support of f,
// weighted by multiplicities; specialization and the multilinearity family
// drive the homotopy-invariance checks.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "milnork/milnor.hpp"

namespace milnork {

struct FramedDatum {
    FieldPtr k;                              // finite field or F_q(u)
    Polynomial f;                            // framing, nonzero, in x over k
    std::vector<RationalFunction> targets;   // g_1..g_m in x over k

    int weight() const { return static_cast<int>(targets.size()); }
};

struct SupportPoint {
    Polynomial pi;     // monic irreducible factor of the framing
    int multiplicity;  // exponent of pi in f = Artin-local length at the point
    FieldPtr residue;  // k[x]/(pi); k itself when deg pi = 1
};

using RhoValue = CanonicalForm;

/// Validates the invertibility invariant: every target must be a unit on
/// V(f), i.e. Res(f, num) and Res(f, den) nonzero.
inline FramedDatum make_framed(const FieldPtr& k, Polynomial f, std::vector<RationalFunction> targets) {
    if (!k) throw DomainError("framed datum over null field");
    if (!k->finite() && k->kind() != FieldKind::RatFunc)
        throw DomainError("framed base must be a finite field or F_q(u)");
    if (!same_field(f.field(), k)) throw DomainError("framing over the wrong field");
    if (f.is_zero()) throw DomainError("framing polynomial must be nonzero");
    for (size_t i = 0; i < targets.size(); ++i) {
        const RationalFunction& g = targets[i];
        if (!same_field(g.field(), k)) throw DomainError("target over the wrong field");
        if (g.is_zero()) throw DomainError("target g_" + std::to_string(i + 1) + " is zero");
        if (f.degree() >= 1) {
            if (resultant(f, g.num()).is_zero()) {
                Polynomial witness = gcd(f, g.num()).monic();
                throw DomainError("invertibility violation: g_" + std::to_string(i + 1) +
                                  " vanishes on the support at (" + to_string(witness, "x") + ")");
            }
            if (resultant(f, g.den()).is_zero()) {
                Polynomial witness = gcd(f, g.den()).monic();
                throw DomainError("invertibility violation: g_" + std::to_string(i + 1) +
                                  " has a pole on the support at (" + to_string(witness, "x") + ")");
            }
        }
    }
    return FramedDatum{k, std::move(f), std::move(targets)};
}

/// sigma_m at desk scale: framing x, constant targets.
inline FramedDatum sigma(const FieldPtr& k, const std::vector<FieldElement>& entries) {
    std::vector<RationalFunction> targets;
    targets.reserve(entries.size());
    for (const auto& g : entries) {
        if (!same_field(g.field(), k)) throw DomainError("sigma entry over the wrong field");
        if (g.is_zero()) throw DomainError("sigma entry must be nonzero");
        targets.push_back(RationalFunction::constant(g));
    }
    return make_framed(k, Polynomial::variable(k), std::move(targets));
}

namespace detail {
// Rational roots of a squarefree s in F_q(u)[x]. Complete: a root P/Q in
// lowest terms has P dividing the cleared constant term and Q dividing the
// cleared leading term, both univariate over F_q and hence factorable.
inline std::pair<std::vector<FieldElement>, Polynomial> linear_roots_over_ratfunc(const Polynomial& s_in) {
    const FieldPtr& k = s_in.field();
    const FieldPtr& base = k->base();
    Polynomial s = s_in.monic();
    std::vector<FieldElement> roots;

    // x = 0
    while (s.degree() > 0 && s.coeff(0).is_zero()) {
        roots.push_back(FieldElement::zero(k));
        s = s / Polynomial::variable(k);
    }
    if (s.degree() < 1) return {std::move(roots), s};

    // clear denominators
    Polynomial den_lcm = Polynomial::from_ints(base, {1});
    for (int i = 0; i <= s.degree(); ++i) {
        const Polynomial& d = s.coeff(i).ratfunc().den();
        den_lcm = (den_lcm * d) / gcd(den_lcm, d);
    }
    auto cleared = [&](int i) {
        RationalFunction c = s.coeff(i).ratfunc() * RationalFunction(den_lcm);
        return c.num();  // den is 1 after clearing
    };
    Polynomial c0 = cleared(0), cn = cleared(s.degree());

    auto monic_divisors = [](const Polynomial& h) {
        std::vector<Polynomial> divs{Polynomial::from_ints(h.field(), {1})};
        for (const auto& [pi, m] : poly_factor(h).factors) {
            std::vector<Polynomial> next;
            for (const auto& d : divs) {
                Polynomial acc = d;
                next.push_back(acc);
                for (int e = 1; e <= m; ++e) {
                    acc = acc * pi;
                    next.push_back(acc);
                }
            }
            divs = std::move(next);
        }
        return divs;
    };

    std::vector<Polynomial> ps = monic_divisors(c0), qs = monic_divisors(cn);
    const int64_t qsize = base->size();
    for (const auto& pnum : ps) {
        for (const auto& qden : qs) {
            for (int64_t lam = 1; lam < qsize; ++lam) {
                Polynomial num = pnum * Polynomial::constant(element_from_index(base, lam));
                if (gcd(num, qden).degree() > 0) continue;
                FieldElement cand = FieldElement::from_ratfunc(k, RationalFunction(num, qden));
                while (s.degree() > 0 && s.eval(cand).is_zero()) {
                    roots.push_back(cand);
                    s = s / (Polynomial::variable(k) - Polynomial::constant(cand));
                }
            }
        }
    }
    return {std::move(roots), s};
}
}  // namespace detail

/// Factorization of the framing with multiplicities; the leading coefficient
/// only scales the framing and is discarded. Over F_q(u) the support can be
/// enumerated only when the framing splits into linear factors.
inline std::vector<SupportPoint> support(const FramedDatum& d) {
    std::vector<SupportPoint> out;
    if (d.f.degree() == 0) return out;
    if (d.k->finite()) {
        for (const auto& [pi, m] : poly_factor(d.f).factors)
            out.push_back(SupportPoint{pi, m, residue_field(pi)});
        return out;
    }
    for (const auto& [sf, mult] : squarefree_decomposition(d.f)) {
        auto [roots, rest] = detail::linear_roots_over_ratfunc(sf);
        if (rest.degree() > 0)
            throw DomainError("support enumeration over " + d.k->name() +
                              " requires a framing that splits into linear factors");
        for (const auto& a : roots) {
            Polynomial pi = Polynomial::variable(d.k) - Polynomial::constant(a);
            out.push_back(SupportPoint{pi, mult, d.k});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SupportPoint& a, const SupportPoint& b) { return poly_less(a.pi, b.pi); });
    return out;
}

/// rho at level 1: canonical form of sum d_i Tr {g_1 mod pi_i, ..., g_m mod pi_i}.
/// Over F_q(u), support points of degree > 1 are handled for m <= 1 by the
/// resultant norm (degree for m = 0, Res(pi, num)/Res(pi, den) for m = 1) and
/// rejected for m >= 2 as unsupported transfers.
inline RhoValue rho(const FramedDatum& d) {
    const int m = d.weight();
    MilnorElement acc = MilnorElement::zero(d.k, m);

    if (d.k->finite()) {
        if (d.f.degree() > 0) {
            for (const auto& [pi, mult] : poly_factor(d.f).factors) {
                FieldPtr R = residue_field(pi);
                std::vector<FieldElement> entries;
                entries.reserve(d.targets.size());
                for (size_t j = 0; j < d.targets.size(); ++j) {
                    try {
                        entries.push_back(reduce_mod(d.targets[j], pi));
                    } catch (const DomainError&) {
                        throw DomainError("invertibility violation: g_" + std::to_string(j + 1) +
                                          " at (" + to_string(pi, "x") + ")");
                    }
                }
                acc += transfer(MilnorElement::symbol(R, std::move(entries)), d.k).scaled(mult);
            }
        }
        return canonical(acc);
    }

    // k = F_q(u)
    if (d.f.degree() > 0) {
        for (const auto& [sf, mult] : squarefree_decomposition(d.f)) {
            auto [roots, rest] = detail::linear_roots_over_ratfunc(sf);
            for (const auto& a : roots) {
                std::vector<FieldElement> entries;
                for (size_t j = 0; j < d.targets.size(); ++j) {
                    FieldElement den = d.targets[j].den().eval(a);
                    FieldElement num = d.targets[j].num().eval(a);
                    if (den.is_zero() || num.is_zero())
                        throw DomainError("invertibility violation: g_" + std::to_string(j + 1) +
                                          " at a rational support point");
                    entries.push_back(num / den);
                }
                acc += MilnorElement::symbol(d.k, std::move(entries)).scaled(mult);
            }
            if (rest.degree() > 0) {
                if (m == 0) {
                    acc += MilnorElement::unit(d.k).scaled(int64_t(mult) * rest.degree());
                } else if (m == 1) {
                    FieldElement val =
                        resultant(rest, d.targets[0].num()) / resultant(rest, d.targets[0].den());
                    acc += MilnorElement::symbol(d.k, {val}).scaled(mult);
                } else {
                    throw DomainError(
                        "unsupported transfer: the framing has a support point of degree > 1 over " +
                        d.k->name());
                }
            }
        }
    }
    return canonical(acc);
}

// ---------------------------------------------------------------------------
// Homotopies
// ---------------------------------------------------------------------------

enum class HomotopyMode { Strict, Endpoint };

/// One-parameter family of framed data: F(t,x) in k[t][x] with constant
/// leading x-coefficient (so the support stays finite over the t-line),
/// targets rational in (t,x). Strict mode requires the target resultants
/// against F to be nonzero constants in t, which makes the two endpoint
/// values of rho provably equal; endpoint mode only requires the data to
/// specialize at t = 0 and t = 1.
struct HomotopyDatum {
    FieldPtr k;    // finite base field
    FieldPtr kt;   // k(t)
    Polynomial f;  // over kt, in x
    std::vector<RationalFunction> targets;
    HomotopyMode mode = HomotopyMode::Strict;

    int weight() const { return static_cast<int>(targets.size()); }
};

inline HomotopyDatum make_homotopy(const FieldPtr& k, Polynomial f,
                                   std::vector<RationalFunction> targets, HomotopyMode mode) {
    if (!k) throw DomainError("homotopy over null field");
    if (!k->finite())
        throw DomainError("homotopies over function-field bases are not supported");
    FieldPtr kt = rational_function_field(k, "t");
    if (!same_field(f.field(), kt)) throw DomainError("homotopy polynomial must be over k(t)");
    if (f.is_zero()) throw DomainError("homotopy polynomial must be nonzero");
    for (int i = 0; i <= f.degree(); ++i)
        if (!f.coeff(i).ratfunc().den().is_one())
            throw DomainError("homotopy polynomial coefficients must be polynomial in t");
    if (!f.leading().ratfunc().is_constant() || f.leading().is_zero())
        throw DomainError("leading x-coefficient must be a nonzero constant of k");

    for (size_t i = 0; i < targets.size(); ++i) {
        const RationalFunction& g = targets[i];
        if (!same_field(g.field(), kt)) throw DomainError("homotopy target over the wrong field");
        if (g.is_zero()) throw DomainError("homotopy target g_" + std::to_string(i + 1) + " is zero");
        FieldElement rn = resultant(f, g.num());
        FieldElement rd = resultant(f, g.den());
        if (mode == HomotopyMode::Strict) {
            if (rn.is_zero() || !rn.ratfunc().is_constant() || rd.is_zero() ||
                !rd.ratfunc().is_constant())
                throw DomainError("strict homotopy requires constant nonzero resultants (target g_" +
                                  std::to_string(i + 1) + ")");
        } else {
            for (int64_t t0 : {int64_t(0), int64_t(1)}) {
                FieldElement at = FieldElement::from_int(k, t0);
                auto ok = [&](const FieldElement& r) {
                    if (r.is_zero()) return false;
                    const RationalFunction& rr = r.ratfunc();
                    return !rr.den().eval(at).is_zero() && !rr.num().eval(at).is_zero();
                };
                if (!ok(rn) || !ok(rd))
                    throw DomainError("endpoint homotopy: resultant of g_" + std::to_string(i + 1) +
                                      " vanishes at t = " + std::to_string(t0));
            }
        }
    }
    return HomotopyDatum{k, kt, std::move(f), std::move(targets), mode};
}

/// Substitutes t = t0 throughout; the result satisfies the FramedDatum
/// invariants or a DomainError explains which zero/pole got hit.
inline FramedDatum specialize(const HomotopyDatum& h, const FieldElement& t0) {
    if (!same_field(t0.field(), h.k)) throw DomainError("specialization point must lie in k");
    auto eval_coeff = [&](const FieldElement& c) {
        const RationalFunction& r = c.ratfunc();
        FieldElement den = r.den().eval(t0);
        if (den.is_zero())
            throw DomainError("specialization hits a pole of a coefficient at t = " + to_string(t0));
        return r.num().eval(t0) / den;
    };
    auto eval_poly = [&](const Polynomial& p) {
        std::vector<FieldElement> c;
        c.reserve(static_cast<size_t>(p.degree() + 1));
        for (int i = 0; i <= p.degree(); ++i) c.push_back(eval_coeff(p.coeff(i)));
        return Polynomial(h.k, std::move(c));
    };
    Polynomial f0 = eval_poly(h.f);
    std::vector<RationalFunction> targets;
    targets.reserve(h.targets.size());
    for (const auto& g : h.targets) {
        Polynomial num = eval_poly(g.num()), den = eval_poly(g.den());
        if (den.is_zero() || num.is_zero())
            throw DomainError("specialization hits a zero/pole of a target at t = " + to_string(t0));
        targets.push_back(RationalFunction(std::move(num), std::move(den)));
    }
    try {
        return make_framed(h.k, std::move(f0), std::move(targets));
    } catch (const DomainError& e) {
        throw DomainError(std::string("specialization hits a zero/pole on the support: ") + e.what());
    }
}

/// The explicit multilinearity homotopy: F(t,x) = x^2 + (-g'-g'' +
/// t(g'+g''-g'g''-1))x + g'g''. Its t=0 fiber factors as (x-g')(x-g'') and
/// its t=1 fiber as (x-g'g'')(x-1); the chosen slot carries the target x,
/// the other slots carry the given constants.
inline HomotopyDatum multilinearity_family(const FieldPtr& k, const FieldElement& gp,
                                           const FieldElement& gpp, size_t slot,
                                           const std::vector<FieldElement>& others) {
    if (gp.is_zero() || gpp.is_zero()) throw DomainError("multilinearity inputs must be nonzero");
    if (slot > others.size()) throw DomainError("slot index out of range");
    FieldPtr kt = rational_function_field(k, "t");
    auto lift = [&](const FieldElement& c) {
        return FieldElement::from_ratfunc(kt, RationalFunction::constant(c));
    };
    FieldElement t = FieldElement::from_ratfunc(kt, RationalFunction::variable(k));
    FieldElement one = FieldElement::one(kt);
    FieldElement a = lift(gp), b = lift(gpp);
    FieldElement mid = -a - b + t * (a + b - a * b - one);
    Polynomial f(kt, {a * b, mid, one});

    std::vector<RationalFunction> targets;
    for (size_t i = 0; i <= others.size(); ++i) {
        if (i == slot) {
            targets.push_back(RationalFunction::variable(kt));
        } else {
            const FieldElement& c = others[i < slot ? i : i - 1];
            if (c.is_zero()) throw DomainError("multilinearity constant slot must be nonzero");
            targets.push_back(RationalFunction::constant(lift(c)));
        }
    }
    return make_homotopy(k, std::move(f), std::move(targets), HomotopyMode::Strict);
}

struct HomotopyCheck {
    RhoValue rho0;
    RhoValue rho1;
    bool equal = false;
    bool guaranteed = false;  // strict mode
};

inline HomotopyCheck homotopy_check(const HomotopyDatum& h) {
    HomotopyCheck out;
    out.rho0 = rho(specialize(h, FieldElement::zero(h.k)));
    out.rho1 = rho(specialize(h, FieldElement::one(h.k)));
    out.equal = out.rho0 == out.rho1;
    out.guaranteed = h.mode == HomotopyMode::Strict;
    return out;
}

}  // namespace milnork
