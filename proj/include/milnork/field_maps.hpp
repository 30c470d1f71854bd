// Maps between fields: tower embeddings, norm and trace, multiplicative
// generators, baby-step giant-step discrete logarithms, and reduction of
// rational functions at places.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "milnork/factor.hpp"
#include "milnork/field.hpp"

namespace milnork {

/// True when `sub` occurs in the construction chain under `sup` (including
/// sub == sup); steps down through extensions and function fields.
inline bool is_subfield_chain(const FieldPtr& sub, const FieldPtr& sup) {
    FieldPtr cur = sup;
    for (;;) {
        if (same_field(sub, cur)) return true;
        if (cur->kind() == FieldKind::Prime) return false;
        cur = cur->base();
    }
}

/// [sup : sub] along the tower chain.
inline int64_t tower_degree(const FieldPtr& sub, const FieldPtr& sup) {
    int64_t d = 1;
    FieldPtr cur = sup;
    while (!same_field(sub, cur)) {
        if (cur->kind() != FieldKind::Extension)
            throw DomainError("not a subfield along the extension tower");
        d *= cur->extension_degree();
        cur = cur->base();
    }
    return d;
}

/// Inclusion of a chain subfield element into `sup` (extensions as constant
/// coefficient vectors, function fields as constant rational functions).
inline FieldElement embed(const FieldElement& a, const FieldPtr& sup) {
    if (same_field(a.field(), sup)) return a;
    if (!is_subfield_chain(a.field(), sup))
        throw DomainError("unsupported embedding into " + sup->name());
    if (sup->kind() == FieldKind::Extension) {
        std::vector<FieldElement> c{embed(a, sup->base())};
        return FieldElement::from_coeffs(sup, std::move(c));
    }
    if (sup->kind() == FieldKind::RatFunc)
        return FieldElement::from_ratfunc(
            sup, RationalFunction::constant(embed(a, sup->base())));
    throw DomainError("unsupported embedding into " + sup->name());
}

namespace detail {
// Norm and trace for one tower step E = B[y]/(m): products/sums of a^(Q^i)
// with Q = |B|. Requires a finite base.
inline std::pair<FieldElement, FieldElement> norm_trace_step(const FieldElement& a) {
    const FieldPtr& e = a.field();
    const FieldPtr& b = e->base();
    if (!b->finite()) throw DomainError("norm/trace step over infinite base");
    const int64_t q = b->size();
    const int d = e->extension_degree();
    FieldElement n = a, t = a, frob = a;
    for (int i = 1; i < d; ++i) {
        frob = frob.pow(q);
        n = n * frob;
        t = t + frob;
    }
    return {n, t};
}

// The result of a full norm/trace lies in the base; project the payload.
inline FieldElement project_to_base(const FieldElement& a) {
    const auto& c = a.coeffs();
    for (size_t i = 1; i < c.size(); ++i)
        if (!c[i].is_zero()) throw DomainError("norm/trace did not land in the base field");
    return c[0];
}
}  // namespace detail

/// (norm, trace) of `a` down to the tower subfield `down`.
inline std::pair<FieldElement, FieldElement> norm_trace(const FieldElement& a, const FieldPtr& down) {
    if (same_field(a.field(), down)) return {a, a};
    if (!is_subfield_chain(down, a.field()))
        throw DomainError("norm/trace target is not a subfield of " + a.field()->name());
    auto [n, t] = detail::norm_trace_step(a);
    FieldElement nb = detail::project_to_base(n);
    FieldElement tb = detail::project_to_base(t);
    return {norm_trace(nb, down).first, norm_trace(tb, down).second};
}

inline FieldElement field_norm(const FieldElement& a, const FieldPtr& down) {
    return norm_trace(a, down).first;
}
inline FieldElement field_trace(const FieldElement& a, const FieldPtr& down) {
    return norm_trace(a, down).second;
}

inline std::vector<int64_t> prime_factors_int(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            if (out.empty() || out.back() != d) out.push_back(d);
            n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

inline bool is_generator(const FieldElement& g) {
    const FieldPtr& k = g.field();
    if (!k->finite()) throw DomainError("generator test needs a finite field");
    if (g.is_zero()) return false;
    const int64_t n = k->size() - 1;
    if (n == 1) return true;
    for (int64_t r : prime_factors_int(n))
        if (g.pow(n / r).is_one()) return false;
    return true;
}

/// Smallest multiplicative generator in the canonical element order.
inline FieldElement find_generator(const FieldPtr& k) {
    if (!k || !k->finite()) throw DomainError("find_generator needs a finite field");
    for (int64_t i = 1; i < k->size(); ++i) {
        FieldElement g = element_from_index(k, i);
        if (is_generator(g)) return g;
    }
    throw DomainError("no generator found (unreachable)");
}

/// Baby-step giant-step: the e in [0, q-2] with g^e = a. `g` must generate.
inline int64_t discrete_log(const FieldElement& a, const FieldElement& g) {
    check_same_field(a, g);
    const FieldPtr& k = a.field();
    if (!k->finite()) throw DomainError("discrete log needs a finite field");
    if (a.is_zero()) throw DomainError("discrete log of zero");
    const int64_t n = k->size() - 1;
    if (n == 1 || a.is_one()) return 0;
    int64_t m = 1;
    while (m * m < n) ++m;
    struct Less {
        bool operator()(const FieldElement& x, const FieldElement& y) const {
            return element_less(x, y);
        }
    };
    std::map<FieldElement, int64_t, Less> baby;
    FieldElement cur = FieldElement::one(k);
    for (int64_t j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = cur * g;
    }
    const FieldElement giant = g.pow(m).inverse();
    FieldElement y = a;
    for (int64_t i = 0; i < m + 1; ++i) {
        auto it = baby.find(y);
        if (it != baby.end()) {
            int64_t e = i * m + it->second;
            return e % n;
        }
        y = y * giant;
    }
    throw DomainError("discrete log failed: base is not a generator");
}

/// Residue field of a monic irreducible pi over a finite field or F_q(u).
/// Degree-1 places evaluate into the coefficient field itself; higher degrees
/// produce the extension with pi as its modulus.
inline FieldPtr residue_field(const Polynomial& pi) {
    if (pi.degree() < 1) throw DomainError("residue field of a constant");
    if (!pi.is_monic()) throw DomainError("place polynomial must be monic");
    if (pi.degree() == 1) return pi.field();
    return extension_field(pi.field(), pi, "x", false);
}

/// The class of g in the residue field at pi. Errors if g has a zero or pole
/// at the place.
inline FieldElement reduce_mod(const RationalFunction& g, const Polynomial& pi) {
    if (!same_field(g.field(), pi.field())) throw DomainError("reduce_mod: field mismatch");
    if (pi.degree() < 1 || !pi.is_monic()) throw DomainError("reduce_mod needs a monic place polynomial");
    if (g.is_zero()) throw DomainError("reduce_mod of the zero function");
    if (pi.degree() == 1) {
        FieldElement root = -pi.coeff(0);
        FieldElement den = g.den().eval(root);
        if (den.is_zero()) throw DomainError("pole at the point");
        FieldElement num = g.num().eval(root);
        if (num.is_zero()) throw DomainError("zero at the point");
        return num / den;
    }
    FieldPtr rf = residue_field(pi);
    Polynomial nr = g.num() % pi, dr = g.den() % pi;
    if (nr.is_zero()) throw DomainError("zero at the point");
    if (dr.is_zero()) throw DomainError("pole at the point");
    auto lift = [&](const Polynomial& h) {
        std::vector<FieldElement> c = h.coeffs();
        return FieldElement::from_coeffs(rf, std::move(c));
    };
    return lift(nr) / lift(dr);
}

/// pi-adic valuation of a nonzero rational function.
inline int valuation(const RationalFunction& g, const Polynomial& pi) {
    if (g.is_zero()) throw DomainError("valuation of zero");
    auto count = [&](Polynomial h) {
        int v = 0;
        for (;;) {
            auto [q, r] = divrem(h, pi);
            if (!r.is_zero()) return v;
            h = std::move(q);
            ++v;
        }
    };
    return count(g.num()) - count(g.den());
}

}  // namespace milnork
