// Milnor K-theory elements as integer combinations of symbols, tame symbols
// at places of F_q(t), transfers and restrictions, and the complete canonical
// form over finite fields and their rational function fields.
//
// Canonical forms over F_q(t) split an element into a constant part (the
// leading-coefficient specialization, valued in K_m(F_q)) and one tame
// residue per finite place (valued in K_{m-1} of the residue field). That
// this decides equality rests on Milnor's split exact sequence
//   0 -> K_m(F) -> K_m(F(t)) -> sum_pi K_{m-1}(F[t]/pi) -> 0,
// standard theory; the splitting is unit-tested rather than assumed silently.
#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "milnork/factor.hpp"
#include "milnork/field.hpp"
#include "milnork/field_maps.hpp"

namespace milnork {

struct Symbol {
    std::vector<FieldElement> entries;

    int weight() const { return static_cast<int>(entries.size()); }
    bool operator==(const Symbol& o) const { return entries == o.entries; }
};

struct SymbolLess {
    bool operator()(const Symbol& a, const Symbol& b) const {
        if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size();
        for (size_t i = 0; i < a.entries.size(); ++i) {
            int c = compare_elements(a.entries[i], b.entries[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

/// Formal integer combination of weight-m symbols over one field. Symbols
/// containing the entry 1 collapse to zero at construction; stored symbols
/// therefore never contain 1, and no zero coefficients are kept.
class MilnorElement {
public:
    using TermMap = std::map<Symbol, int64_t, SymbolLess>;

    static MilnorElement zero(const FieldPtr& k, int m) {
        MilnorElement e;
        e.k_ = k;
        e.m_ = m;
        return e;
    }

    /// The class of the empty symbol: the unit of K_0 = Z.
    static MilnorElement unit(const FieldPtr& k) { return symbol(k, {}); }

    static MilnorElement symbol(const FieldPtr& k, std::vector<FieldElement> entries) {
        MilnorElement e = zero(k, static_cast<int>(entries.size()));
        for (const auto& g : entries) {
            if (!same_field(g.field(), k)) throw DomainError("symbol entry over the wrong field");
            if (g.is_zero()) throw DomainError("zero entry in symbol");
            if (g.is_one()) return e;  // any symbol containing 1 vanishes
        }
        e.terms_.emplace(Symbol{std::move(entries)}, 1);
        return e;
    }

    const FieldPtr& field() const { return k_; }
    int degree() const { return m_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero_formal() const { return terms_.empty(); }

    MilnorElement operator-() const {
        MilnorElement e = *this;
        for (auto& [s, c] : e.terms_) c = -c;
        return e;
    }

    MilnorElement scaled(int64_t n) const {
        if (n == 0) return zero(k_, m_);
        MilnorElement e = *this;
        for (auto& [s, c] : e.terms_) c *= n;
        return e;
    }

    friend MilnorElement operator+(const MilnorElement& a, const MilnorElement& b) {
        if (!same_field(a.k_, b.k_) || a.m_ != b.m_)
            throw DomainError("Milnor element mismatch (field or degree)");
        MilnorElement e = a;
        for (const auto& [s, c] : b.terms_) {
            auto [it, inserted] = e.terms_.emplace(s, c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) e.terms_.erase(it);
            }
        }
        return e;
    }
    friend MilnorElement operator-(const MilnorElement& a, const MilnorElement& b) { return a + (-b); }
    MilnorElement& operator+=(const MilnorElement& b) { return *this = *this + b; }
    MilnorElement& operator-=(const MilnorElement& b) { return *this = *this - b; }

private:
    FieldPtr k_;
    int m_ = 0;
    TermMap terms_;
};

/// Juxtaposition product {a...}*{b...} = {a...,b...}, extended bilinearly.
inline MilnorElement concat_product(const MilnorElement& a, const MilnorElement& b) {
    if (!same_field(a.field(), b.field())) throw DomainError("product over mismatched fields");
    MilnorElement out = MilnorElement::zero(a.field(), a.degree() + b.degree());
    for (const auto& [sa, ca] : a.terms())
        for (const auto& [sb, cb] : b.terms()) {
            std::vector<FieldElement> e = sa.entries;
            e.insert(e.end(), sb.entries.begin(), sb.entries.end());
            out += MilnorElement::symbol(a.field(), std::move(e)).scaled(ca * cb);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Places of P^1 over a finite field
// ---------------------------------------------------------------------------

struct Place {
    bool infinity = false;
    Polynomial pi;  // monic irreducible in t; empty for the place at infinity

    static Place at_infinity() { return Place{true, Polynomial()}; }
    static Place finite(Polynomial p) { return Place{false, std::move(p)}; }

    bool operator==(const Place& o) const {
        if (infinity != o.infinity) return false;
        return infinity || pi == o.pi;
    }
};

inline bool place_less(const Place& a, const Place& b) {
    if (a.infinity != b.infinity) return !a.infinity;  // finite places first
    if (a.infinity) return false;
    return poly_less(a.pi, b.pi);
}

inline std::string to_string(const Place& p, const std::string& var) {
    return p.infinity ? "infinity" : to_string(p.pi, var);
}

// ---------------------------------------------------------------------------
// Tame symbol
// ---------------------------------------------------------------------------

namespace detail {
// g(1/t) as a reduced rational function (the coordinate flip used at the
// place at infinity; t -> 1/t is a field automorphism of F_q(t)).
inline RationalFunction invert_variable(const RationalFunction& g) {
    if (g.is_zero()) return g;
    const FieldPtr& k = g.field();
    int dn = g.num().degree(), dd = g.den().degree();
    int m = std::max(dn, dd);
    Polynomial t = Polynomial::variable(k);
    Polynomial num = g.num().reversed() * poly_pow(t, m - dn);
    Polynomial den = g.den().reversed() * poly_pow(t, m - dd);
    return RationalFunction(std::move(num), std::move(den));
}

// Strips all powers of pi from num and den; returns (valuation, unit part).
inline std::pair<int, RationalFunction> split_at_place(const RationalFunction& g, const Polynomial& pi) {
    if (g.is_zero()) throw DomainError("split of zero at a place");
    int v = 0;
    Polynomial num = g.num(), den = g.den();
    for (;;) {
        auto [q, r] = divrem(num, pi);
        if (!r.is_zero()) break;
        num = std::move(q);
        ++v;
    }
    for (;;) {
        auto [q, r] = divrem(den, pi);
        if (!r.is_zero()) break;
        den = std::move(q);
        --v;
    }
    return {v, RationalFunction(std::move(num), std::move(den))};
}
}  // namespace detail

inline FieldPtr tame_residue_field(const FieldPtr& kt, const Place& nu) {
    if (!kt || kt->kind() != FieldKind::RatFunc) throw DomainError("tame symbol needs a function field");
    if (nu.infinity) return kt->base();
    if (!same_field(nu.pi.field(), kt->base())) throw DomainError("place not over the right field");
    return residue_field(nu.pi);
}

/// Residue map K_m(F_q(t)) -> K_{m-1}(k(nu)), Bass-Tate convention with the
/// uniformizer in the first slot: d{pi, u_2,...,u_m} = {u_2 bar,...,u_m bar},
/// d of unit-only symbols = 0. At infinity the substitution t -> 1/t is
/// applied first (uniformizer 1/t, v_inf = -deg).
inline MilnorElement tame_symbol(const MilnorElement& a, const Place& nu) {
    const FieldPtr& kt = a.field();
    if (!kt || kt->kind() != FieldKind::RatFunc) throw DomainError("tame symbol needs a function field");
    if (a.degree() < 1) throw DomainError("tame symbol needs degree >= 1");

    if (nu.infinity) {
        MilnorElement flipped = MilnorElement::zero(kt, a.degree());
        for (const auto& [s, c] : a.terms()) {
            std::vector<FieldElement> e;
            e.reserve(s.entries.size());
            for (const auto& g : s.entries)
                e.push_back(FieldElement::from_ratfunc(kt, detail::invert_variable(g.ratfunc())));
            flipped += MilnorElement::symbol(kt, std::move(e)).scaled(c);
        }
        return tame_symbol(flipped, Place::finite(Polynomial::variable(kt->base())));
    }

    const Polynomial& pi = nu.pi;
    if (!same_field(pi.field(), kt->base())) throw DomainError("place not over the right field");
    FieldPtr R = residue_field(pi);
    const int m = a.degree();
    MilnorElement out = MilnorElement::zero(R, m - 1);
    const FieldElement minus_one_res = -FieldElement::one(R);

    for (const auto& [s, c] : a.terms()) {
        std::vector<int> vals(s.entries.size());
        std::vector<FieldElement> units(s.entries.size());
        std::vector<int> carriers;  // slots with nonzero valuation
        for (size_t i = 0; i < s.entries.size(); ++i) {
            auto [v, u] = detail::split_at_place(s.entries[i].ratfunc(), pi);
            vals[i] = v;
            units[i] = reduce_mod(u, pi);
            if (v != 0) carriers.push_back(static_cast<int>(i));
        }
        if (carriers.empty()) continue;  // all units: residue zero

        // Bilinear expansion: each slot splits as {unit part} + v_i * {pi}.
        // For a subset S of carrier slots taking the pi branch, the term is
        // prod_{i in S} v_i times the symbol with pi in the S slots. Moving
        // the pi's to the front, merging {pi,pi} = {-1,pi}, and applying d
        // leaves (|S|-1) copies of -1 followed by the unit residues.
        const size_t nsub = size_t(1) << carriers.size();
        for (size_t mask = 1; mask < nsub; ++mask) {
            int64_t coeff = c;
            int k = 0;
            int inversions = 0;
            std::vector<bool> in_s(s.entries.size(), false);
            for (size_t b = 0; b < carriers.size(); ++b) {
                if (!(mask & (size_t(1) << b))) continue;
                int pos = carriers[b];
                coeff *= vals[static_cast<size_t>(pos)];
                inversions += pos - k;
                ++k;
                in_s[static_cast<size_t>(pos)] = true;
            }
            if ((inversions + (k - 1)) % 2 != 0) coeff = -coeff;
            std::vector<FieldElement> e;
            e.reserve(static_cast<size_t>(m - 1));
            for (int j = 0; j < k - 1; ++j) e.push_back(minus_one_res);
            for (size_t i = 0; i < s.entries.size(); ++i)
                if (!in_s[i]) e.push_back(units[i]);
            out += MilnorElement::symbol(R, std::move(e)).scaled(coeff);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transfer and restriction
// ---------------------------------------------------------------------------

/// Norm map K_m(E) -> K_m(k). Supported: E = k; finite tower pairs (any m,
/// with K_m = 0 for m >= 2 making the map zero); and E = F_q(u)[x]/(pi) down
/// to F_q(u) for m <= 1, where the K_1 norm is a resultant against pi.
inline MilnorElement transfer(const MilnorElement& a, const FieldPtr& down) {
    const FieldPtr& e = a.field();
    const int m = a.degree();
    if (same_field(e, down)) return a;

    if (e->finite() && down->finite() && is_subfield_chain(down, e)) {
        const int64_t d = tower_degree(down, e);
        if (m == 0) {
            int64_t total = 0;
            for (const auto& [s, c] : a.terms()) total += c;
            return MilnorElement::unit(down).scaled(total * d);
        }
        if (m == 1) {
            MilnorElement out = MilnorElement::zero(down, 1);
            for (const auto& [s, c] : a.terms())
                out += MilnorElement::symbol(down, {field_norm(s.entries[0], down)}).scaled(c);
            return out;
        }
        return MilnorElement::zero(down, m);  // K_m of a finite field vanishes
    }

    if (e->kind() == FieldKind::Extension && same_field(e->base(), down) &&
        down->kind() == FieldKind::RatFunc) {
        const Polynomial& pi = e->modulus();
        if (m == 0) {
            int64_t total = 0;
            for (const auto& [s, c] : a.terms()) total += c;
            return MilnorElement::unit(down).scaled(total * pi.degree());
        }
        if (m == 1) {
            MilnorElement out = MilnorElement::zero(down, 1);
            for (const auto& [s, c] : a.terms()) {
                Polynomial rep(down, s.entries[0].coeffs());
                out += MilnorElement::symbol(down, {resultant(pi, rep)}).scaled(c);
            }
            return out;
        }
        throw DomainError("unsupported transfer: K_" + std::to_string(m) + " norm from " + e->name() +
                          " to " + down->name() + " is outside the implemented fragment");
    }
    throw DomainError("unsupported transfer from " + e->name() + " to " + down->name());
}

/// Scalar extension K_m(k) -> K_m(E) along a tower embedding.
inline MilnorElement restriction(const MilnorElement& a, const FieldPtr& up) {
    if (same_field(a.field(), up)) return a;
    if (!is_subfield_chain(a.field(), up))
        throw DomainError("unsupported embedding from " + a.field()->name() + " to " + up->name());
    MilnorElement out = MilnorElement::zero(up, a.degree());
    for (const auto& [s, c] : a.terms()) {
        std::vector<FieldElement> e;
        e.reserve(s.entries.size());
        for (const auto& g : s.entries) e.push_back(embed(g, up));
        out += MilnorElement::symbol(up, std::move(e)).scaled(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

/// Decided normal form of a Milnor element. Finite fields: an integer for
/// K_0, an exponent mod q-1 with respect to the canonical generator for K_1,
/// and the zero group for K_m, m >= 2. Function fields F_q(t): a constant
/// part over F_q plus one K_{m-1} form per finite place with nonzero residue
/// (the place at infinity is determined by reciprocity and deliberately
/// excluded).
class CanonicalForm {
public:
    CanonicalForm() = default;

    const FieldPtr& field() const { return k_; }
    int degree() const { return m_; }

    int64_t k0() const { return k0_; }
    int64_t k1_exponent() const { return k1_exp_; }
    const CanonicalForm& constant_part() const { return *constant_; }
    const std::map<Polynomial, CanonicalForm, PolyLess>& places() const { return places_; }

    bool is_zero() const {
        if (k_->kind() == FieldKind::RatFunc) return constant_->is_zero() && places_.empty();
        if (m_ == 0) return k0_ == 0;
        if (m_ == 1) return k1_exp_ == 0;
        return true;
    }

    bool operator==(const CanonicalForm& o) const {
        if (!same_field(k_, o.k_) || m_ != o.m_)
            throw DomainError("comparing canonical forms over different groups");
        if (k_->kind() == FieldKind::RatFunc) {
            if (!(*constant_ == *o.constant_)) return false;
            auto it = places_.begin();
            auto jt = o.places_.begin();
            for (; it != places_.end() && jt != o.places_.end(); ++it, ++jt) {
                if (!(it->first == jt->first)) return false;
                if (!(it->second == jt->second)) return false;
            }
            return it == places_.end() && jt == o.places_.end();
        }
        if (m_ == 0) return k0_ == o.k0_;
        if (m_ == 1) return k1_exp_ == o.k1_exp_;
        return true;
    }
    bool operator!=(const CanonicalForm& o) const { return !(*this == o); }

private:
    FieldPtr k_;
    int m_ = 0;
    int64_t k0_ = 0;
    int64_t k1_exp_ = 0;
    std::shared_ptr<const CanonicalForm> constant_;
    std::map<Polynomial, CanonicalForm, PolyLess> places_;

    friend CanonicalForm canonical(const MilnorElement&);
};

inline CanonicalForm canonical(const MilnorElement& a) {
    const FieldPtr& k = a.field();
    const int m = a.degree();
    CanonicalForm cf;
    cf.k_ = k;
    cf.m_ = m;

    if (k->finite()) {
        if (m == 0) {
            for (const auto& [s, c] : a.terms()) cf.k0_ += c;
        } else if (m == 1) {
            // K_1(F_q) = F_q^*: a single product element, then one dlog.
            FieldElement prod = FieldElement::one(k);
            for (const auto& [s, c] : a.terms()) prod = prod * s.entries[0].pow(c);
            cf.k1_exp_ = prod.is_one() ? 0 : discrete_log(prod, find_generator(k));
        }
        return cf;  // m >= 2: the group vanishes
    }

    if (k->kind() != FieldKind::RatFunc)
        throw DomainError("canonical form unsupported over " + k->name());
    const FieldPtr& base = k->base();

    // Constant part: leading coefficients are a group homomorphism
    // F_q(t)^* -> F_q^* (denominators are monic), applied entrywise.
    MilnorElement constant = MilnorElement::zero(base, m);
    for (const auto& [s, c] : a.terms()) {
        std::vector<FieldElement> e;
        e.reserve(s.entries.size());
        for (const auto& g : s.entries) e.push_back(g.ratfunc().num().leading());
        constant += MilnorElement::symbol(base, std::move(e)).scaled(c);
    }
    cf.constant_ = std::make_shared<CanonicalForm>(canonical(constant));

    // Finite places: residues in K_{m-1} of the residue fields. For
    // m - 1 >= 2 those groups vanish over finite residue fields, so the
    // place map stays empty.
    if (m >= 1 && m - 1 < 2) {
        std::map<Polynomial, bool, PolyLess> support;
        for (const auto& [s, c] : a.terms())
            for (const auto& g : s.entries) {
                for (const auto& [pi, mult] : poly_factor(g.ratfunc().num()).factors)
                    support.emplace(pi, true);
                for (const auto& [pi, mult] : poly_factor(g.ratfunc().den()).factors)
                    support.emplace(pi, true);
            }
        for (const auto& [pi, unused] : support) {
            CanonicalForm r = canonical(tame_symbol(a, Place::finite(pi)));
            if (!r.is_zero()) cf.places_.emplace(pi, std::move(r));
        }
    }
    return cf;
}

}  // namespace milnork
