// Univariate polynomial factorization over finite fields (squarefree +
// distinct-degree + equal-degree), irreducibility testing, deterministic
// modulus selection, and resultants over arbitrary coefficient fields.
#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "milnork/common.hpp"
#include "milnork/field.hpp"

namespace milnork {

// Res(f, g) by Euclidean recursion; works over any coefficient field.
// Conventions: Res of two nonzero constants is 1; Res(f, c) = c^deg f;
// a single zero argument gives 0; both zero is an error.
inline FieldElement resultant(const Polynomial& f, const Polynomial& g) {
    if (!same_field(f.field(), g.field())) throw DomainError("resultant: field mismatch");
    const FieldPtr& k = f.field();
    if (f.is_zero() && g.is_zero()) throw DomainError("resultant of two zero polynomials");
    if (f.is_zero() || g.is_zero()) return FieldElement::zero(k);
    FieldElement acc = FieldElement::one(k);
    Polynomial a = f, b = g;
    bool negate = false;
    for (;;) {
        if (a.degree() < b.degree()) {
            if ((a.degree() & 1) && (b.degree() & 1)) negate = !negate;
            std::swap(a, b);
        }
        if (b.degree() == 0) {
            acc = acc * b.leading().pow(a.degree());
            break;
        }
        // deg a >= deg b >= 1
        Polynomial r = a % b;
        if ((a.degree() & 1) && (b.degree() & 1)) negate = !negate;
        acc = acc * b.leading().pow(a.degree() - std::max(r.degree(), 0));
        if (r.is_zero()) return FieldElement::zero(k);
        a = std::move(b);
        b = std::move(r);
    }
    return negate ? -acc : acc;
}

// ---------------------------------------------------------------------------
// p-th roots (needed by squarefree decomposition in characteristic p)
// ---------------------------------------------------------------------------

// a^(1/p). Over a finite field this is a^(q/p); over F_q(u) the fraction must
// be a p-th power structurally (perfect-field coefficients, exponents
// divisible by p), otherwise the input is inseparable and we refuse.
FieldElement pth_root(const FieldElement& a);

namespace detail {
inline Polynomial pth_root_poly_coeffwise(const Polynomial& f) {
    const int64_t p = f.field()->characteristic();
    std::vector<FieldElement> c;
    for (int i = 0; i <= f.degree(); ++i) {
        if (i % p != 0) {
            if (!f.coeff(i).is_zero()) throw DomainError("polynomial is not a p-th power");
            continue;
        }
        c.push_back(pth_root(f.coeff(i)));
    }
    return Polynomial(f.field(), std::move(c));
}
}  // namespace detail

inline FieldElement pth_root(const FieldElement& a) {
    const FieldPtr& k = a.field();
    const int64_t p = k->characteristic();
    if (k->finite()) {
        // Frobenius is bijective; inverse is a -> a^(q/p).
        return a.pow(k->size() / p);
    }
    if (k->kind() == FieldKind::RatFunc) {
        const RationalFunction& rf = a.ratfunc();
        if (rf.is_zero()) return a;
        return FieldElement::from_ratfunc(
            k, RationalFunction(detail::pth_root_poly_coeffwise(rf.num()),
                                detail::pth_root_poly_coeffwise(rf.den())));
    }
    throw DomainError("p-th root unsupported over " + k->name());
}

// ---------------------------------------------------------------------------
// Squarefree decomposition (characteristic p aware)
// ---------------------------------------------------------------------------

// f monic nonzero -> list of (monic squarefree g_i, multiplicity m_i), the g_i
// pairwise coprime, with prod g_i^{m_i} = f. Works over finite fields and
// F_q(u) (the latter as long as every derivative-zero part is a genuine p-th
// power; inseparable irreducibles over F_q(u) are rejected).
inline std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& f_in) {
    if (f_in.is_zero()) throw DomainError("squarefree decomposition of zero");
    const FieldPtr& k = f_in.field();
    const int64_t p = k->characteristic();
    Polynomial f = f_in.monic();
    std::map<int, Polynomial> parts;  // multiplicity -> product of factors

    std::vector<std::pair<Polynomial, int>> stack{{f, 1}};  // (poly, multiplicity scale)
    while (!stack.empty()) {
        auto [g, scale] = stack.back();
        stack.pop_back();
        if (g.degree() == 0) continue;
        Polynomial gp = g.derivative();
        if (gp.is_zero()) {
            // g = h(x^p); recurse with multiplicities scaled by p
            std::vector<FieldElement> hc;
            for (int i = 0; i <= g.degree(); i += static_cast<int>(p))
                hc.push_back(pth_root(g.coeff(i)));
            stack.push_back({Polynomial(k, std::move(hc)), scale * static_cast<int>(p)});
            continue;
        }
        Polynomial t = gcd(g, gp);
        Polynomial v = g / t;  // product of factors of multiplicity not divisible by p
        int j = 1;
        while (v.degree() > 0) {
            Polynomial w = gcd(t, v);
            Polynomial s = v / w;
            if (s.degree() > 0) {
                auto it = parts.find(j * scale);
                if (it == parts.end())
                    parts.emplace(j * scale, s);
                else
                    it->second = it->second * s;
            }
            v = std::move(w);
            t = t / v;
            ++j;
        }
        // leftover t: factors with multiplicity divisible by p; its derivative
        // vanishes, so the next pass takes the p-th root (and scales by p)
        if (t.degree() > 0) stack.push_back({t, scale});
    }

    std::vector<std::pair<Polynomial, int>> out;
    for (auto& [m, g] : parts) out.emplace_back(g.monic(), m);
    return out;
}

// ---------------------------------------------------------------------------
// Factorization over finite fields
// ---------------------------------------------------------------------------

namespace detail {

// x^(q^d) mod f by iterated q-th powers.
inline Polynomial frobenius_power(const Polynomial& x, int d, const Polynomial& f, int64_t q) {
    Polynomial h = x % f;
    for (int i = 0; i < d; ++i) h = powmod(h, q, f);
    return h;
}

// Equal-degree splitting (Cantor-Zassenhaus for odd q, trace method for
// even q). f monic squarefree, all irreducible factors of degree d.
inline void equal_degree_split(const Polynomial& f, int d, Rng& rng,
                               std::vector<Polynomial>& out) {
    const FieldPtr& k = f.field();
    const int64_t q = k->size();
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    const Polynomial one = Polynomial::from_ints(k, {1});
    for (;;) {
        // random polynomial of degree < deg f
        std::vector<FieldElement> c;
        for (int i = 0; i < f.degree(); ++i)
            c.push_back(element_from_index(k, static_cast<int64_t>(rng.below(static_cast<uint64_t>(q)))));
        Polynomial a(k, std::move(c));
        if (a.degree() < 1) continue;
        Polynomial g = gcd(a, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(f / g, d, rng, out);
            return;
        }
        Polynomial b;
        if (q % 2 == 1) {
            // b = a^((q^d-1)/2) mod f, via a^(1+q+...+q^(d-1)) then ^((q-1)/2)
            Polynomial c1 = a % f;
            Polynomial acc = c1;
            for (int i = 1; i < d; ++i) acc = (powmod(acc, q, f) * c1) % f;
            b = powmod(acc, (q - 1) / 2, f);
            b = b - one;
        } else {
            // absolute trace to F_2: sum of a^(2^i), i < e*d where q = 2^e
            int e2 = 0;
            for (int64_t t = q; t > 1; t /= 2) ++e2;
            Polynomial s = a % f;
            Polynomial term = a % f;
            for (int i = 1; i < e2 * d; ++i) {
                term = (term * term) % f;
                s = s + term;
            }
            b = s % f;
        }
        if (b.is_zero()) continue;
        g = gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(f / g, d, rng, out);
            return;
        }
    }
}

inline uint64_t coeff_hash(const FieldElement& a, uint64_t h);

inline uint64_t poly_hash(const Polynomial& f, uint64_t h) {
    h = splitmix64(h ^ static_cast<uint64_t>(f.degree() + 1));
    for (int i = 0; i <= f.degree(); ++i) h = coeff_hash(f.coeff(i), h);
    return h;
}

inline uint64_t coeff_hash(const FieldElement& a, uint64_t h) {
    switch (a.field()->kind()) {
        case FieldKind::Prime:
            return splitmix64(h ^ static_cast<uint64_t>(a.prime_value()));
        case FieldKind::Extension:
            for (const auto& c : a.coeffs()) h = coeff_hash(c, h);
            return h;
        case FieldKind::RatFunc:
            h = poly_hash(a.ratfunc().num(), h);
            return poly_hash(a.ratfunc().den(), h);
    }
    return h;
}

}  // namespace detail

struct FactorResult {
    FieldElement leading;
    std::vector<std::pair<Polynomial, int>> factors;  // monic irreducible, multiplicity
};

/// Full factorization over a finite field: f = leading * prod pi_i^{d_i}.
/// Factors are sorted by (degree, coefficient order). The equal-degree stage
/// draws randomness from a PRNG seeded by the input coefficients, so results
/// are bit-reproducible.
inline FactorResult poly_factor(const Polynomial& f) {
    if (f.is_zero()) throw DomainError("factorization of the zero polynomial");
    const FieldPtr& k = f.field();
    if (!k->finite()) throw DomainError("poly_factor requires a finite coefficient field");
    FactorResult res;
    res.leading = f.leading();
    if (f.degree() == 0) return res;

    Rng rng(detail::poly_hash(f, 0x9e3779b97f4a7c15ULL));
    const int64_t q = k->size();
    const Polynomial x = Polynomial::variable(k);

    for (auto& [sf, mult] : squarefree_decomposition(f)) {
        // distinct-degree on each squarefree part
        Polynomial rest = sf;
        Polynomial h = x % rest;
        for (int d = 1; rest.degree() >= 2 * d; ++d) {
            h = powmod(h, q, rest);
            Polynomial g = gcd(h - (x % rest), rest);
            if (g.degree() > 0) {
                std::vector<Polynomial> eq;
                detail::equal_degree_split(g.monic(), d, rng, eq);
                for (auto& irr : eq) res.factors.emplace_back(irr, mult);
                rest = rest / g;
                h = h % rest;
            }
        }
        if (rest.degree() > 0) res.factors.emplace_back(rest.monic(), mult);
    }

    std::sort(res.factors.begin(), res.factors.end(),
              [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
    return res;
}

/// Rabin irreducibility test over a finite field.
inline bool is_irreducible(const Polynomial& f) {
    const FieldPtr& k = f.field();
    if (!k->finite()) throw DomainError("irreducibility test requires a finite field");
    int n = f.degree();
    if (n < 1) return false;
    if (n == 1) return true;
    if (f.coeff(0).is_zero()) return false;  // divisible by x
    const int64_t q = k->size();
    const Polynomial x = Polynomial::variable(k);
    Polynomial xq = x % f;
    std::vector<int> prime_divs;
    int m = n;
    for (int d = 2; d * d <= m; ++d)
        while (m % d == 0) {
            if (prime_divs.empty() || prime_divs.back() != d) prime_divs.push_back(d);
            m /= d;
        }
    if (m > 1) prime_divs.push_back(m);
    for (int r : prime_divs) {
        Polynomial h = detail::frobenius_power(x, n / r, f, q);
        if (gcd(h - (x % f), f).degree() != 0) return false;
    }
    Polynomial h = detail::frobenius_power(x, n, f, q);
    return (h - (x % f)).is_zero();
}

inline FieldPtr extension_field(const FieldPtr& base, const Polynomial& modulus,
                                const std::string& var, bool check) {
    if (!base) throw InputError("extension over null field");
    if (!same_field(modulus.field(), base)) throw InputError("modulus is not over the base field");
    if (modulus.degree() < 1) throw InputError("extension modulus must have degree >= 1");
    if (!modulus.is_monic()) throw InputError("extension modulus must be monic");
    if (base->kind() == FieldKind::RatFunc) {
        // no feasible irreducibility test over F_q(u); trusted input
    } else if (check && !is_irreducible(modulus)) {
        throw InputError("extension modulus is reducible");
    }
    auto d = std::shared_ptr<FieldDescriptor>(new FieldDescriptor());
    d->kind_ = FieldKind::Extension;
    d->p_ = base->characteristic();
    d->base_ = base;
    d->modulus_ = std::make_shared<Polynomial>(modulus);
    d->ext_degree_ = modulus.degree();
    d->var_ = var;
    if (base->finite()) {
        int64_t q = 1;
        for (int i = 0; i < modulus.degree(); ++i) {
            q *= base->size();
            if (q >= FieldDescriptor::kMaxFiniteSize)
                throw InputError("finite field too large (size must stay below 2^31)");
        }
        d->size_ = q;
    } else {
        d->size_ = 0;
    }
    return d;
}

/// Deterministic modulus: the first monic irreducible of the given degree
/// over a finite base, scanning non-leading coefficient vectors in canonical
/// value order.
inline Polynomial default_modulus(const FieldPtr& base, int degree) {
    if (!base || !base->finite()) throw InputError("default modulus needs a finite base field");
    if (degree < 1) throw InputError("extension degree must be >= 1");
    const int64_t q = base->size();
    std::vector<int64_t> a(static_cast<size_t>(degree), 0);
    for (;;) {
        std::vector<FieldElement> c;
        for (int64_t ai : a) c.push_back(element_from_index(base, ai));
        c.push_back(FieldElement::one(base));
        Polynomial f(base, std::move(c));
        if (is_irreducible(f)) return f;
        int i = 0;
        while (i < degree && ++a[static_cast<size_t>(i)] == q) a[static_cast<size_t>(i++)] = 0;
        if (i == degree) throw DomainError("no irreducible polynomial found (unreachable)");
    }
}

/// F_{p^e} with the deterministic default modulus in variable `var`.
inline FieldPtr extension_field(int64_t p, int degree, const std::string& var = "y") {
    FieldPtr fp = prime_field(p);
    if (degree == 1) return fp;
    return extension_field(fp, default_modulus(fp, degree), var, false);
}

}  // namespace milnork
