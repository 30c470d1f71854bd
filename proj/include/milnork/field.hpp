// Exact arithmetic in prime fields F_p, extension towers F_q = B[y]/(m), and
// rational function fields F_q(t). All values are immutable after
// construction; every operation is pure.
//
// FieldElement, Polynomial and RationalFunction are mutually recursive:
// an extension element holds a coefficient vector over its base field, a
// function-field element holds a reduced fraction of polynomials over the
// base field, and polynomials hold field elements. The whole core therefore
// lives in one header.
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "milnork/common.hpp"

namespace milnork {

class FieldDescriptor;
class FieldElement;
class Polynomial;
class RationalFunction;

using FieldPtr = std::shared_ptr<const FieldDescriptor>;

enum class FieldKind { Prime, Extension, RatFunc };

namespace detail {
inline bool is_prime_int(int64_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (int64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

inline int64_t mod_positive(int64_t a, int64_t p) {
    int64_t r = a % p;
    return r < 0 ? r + p : r;
}

// Inverse of a mod p via extended Euclid; a need not be reduced.
inline int64_t mod_inverse(int64_t a, int64_t p) {
    a = mod_positive(a, p);
    if (a == 0) throw DomainError("division by zero in F_p");
    int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1) throw DomainError("element not invertible mod p");
    return mod_positive(s0, p);
}
}  // namespace detail

/// Immutable description of a field. Three variants:
///   Prime      — F_p, 2 <= p < 2^31;
///   Extension  — B[y]/(modulus), B a previously built field (towers allowed);
///   RatFunc    — B(t), B a finite field.
/// Finite extension towers carry their size; extensions over function fields
/// (residue fields of places over F_q(u)) are infinite and report size() == 0.
class FieldDescriptor : public std::enable_shared_from_this<FieldDescriptor> {
public:
    static constexpr int64_t kMaxFiniteSize = int64_t(1) << 31;

    FieldKind kind() const { return kind_; }
    int64_t characteristic() const { return p_; }

    /// Number of elements; 0 for infinite fields.
    int64_t size() const { return size_; }
    bool finite() const { return size_ > 0; }

    /// Extension: base of the top tower step. RatFunc: coefficient field.
    const FieldPtr& base() const { return base_; }
    const Polynomial& modulus() const;
    int extension_degree() const { return ext_degree_; }
    const std::string& var() const { return var_; }

    bool equals(const FieldDescriptor& o) const;
    std::string name() const;

private:
    FieldDescriptor() = default;

    FieldKind kind_ = FieldKind::Prime;
    int64_t p_ = 0;
    int64_t size_ = 0;
    int ext_degree_ = 0;
    FieldPtr base_;
    std::shared_ptr<const Polynomial> modulus_;
    std::string var_;

    friend FieldPtr prime_field(int64_t);
    friend FieldPtr extension_field(const FieldPtr&, const Polynomial&, const std::string&, bool);
    friend FieldPtr rational_function_field(const FieldPtr&, const std::string&);
};

inline bool same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    return a->equals(*b);
}

/// An element of a field, tagged with its descriptor.
class FieldElement {
public:
    FieldElement() = default;  // null element; usable only after assignment

    static FieldElement from_int(const FieldPtr& k, int64_t n);
    static FieldElement zero(const FieldPtr& k) { return from_int(k, 0); }
    static FieldElement one(const FieldPtr& k) { return from_int(k, 1); }
    /// Extension element from base-field coefficients (lowest power first).
    static FieldElement from_coeffs(const FieldPtr& k, std::vector<FieldElement> coeffs);
    static FieldElement from_ratfunc(const FieldPtr& k, RationalFunction rf);

    const FieldPtr& field() const { return f_; }
    bool valid() const { return f_ != nullptr; }

    bool is_zero() const;
    bool is_one() const;

    int64_t prime_value() const { return iv_; }
    const std::vector<FieldElement>& coeffs() const { return vec_; }
    const RationalFunction& ratfunc() const;

    FieldElement operator-() const;
    FieldElement inverse() const;
    FieldElement pow(int64_t e) const;

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
    FieldElement& operator/=(const FieldElement& b) { return *this = *this / b; }

    bool operator==(const FieldElement& b) const;
    bool operator!=(const FieldElement& b) const { return !(*this == b); }

private:
    FieldPtr f_;
    int64_t iv_ = 0;                            // Prime payload
    std::vector<FieldElement> vec_;             // Extension payload, length = degree
    std::shared_ptr<const RationalFunction> rf_;  // RatFunc payload

    friend void check_same_field(const FieldElement& a, const FieldElement& b);
};

/// Total order on elements of one field, used wherever determinism requires a
/// canonical enumeration: prime fields by residue value, extensions
/// lexicographically from the top coefficient down, function fields by
/// (numerator, denominator).
int compare_elements(const FieldElement& a, const FieldElement& b);
inline bool element_less(const FieldElement& a, const FieldElement& b) {
    return compare_elements(a, b) < 0;
}

std::string to_string(const FieldElement& a);

/// Univariate polynomial over an explicit coefficient field. Coefficients are
/// stored lowest power first with no trailing zeros; the zero polynomial has
/// an empty coefficient vector and degree() == -1. The variable name is
/// contextual (supplied when printing).
class Polynomial {
public:
    Polynomial() = default;  // null
    explicit Polynomial(FieldPtr k) : k_(std::move(k)) {}
    Polynomial(FieldPtr k, std::vector<FieldElement> coeffs) : k_(std::move(k)), c_(std::move(coeffs)) {
        trim();
    }

    static Polynomial from_ints(const FieldPtr& k, const std::vector<int64_t>& v) {
        std::vector<FieldElement> c;
        c.reserve(v.size());
        for (int64_t n : v) c.push_back(FieldElement::from_int(k, n));
        return Polynomial(k, std::move(c));
    }
    static Polynomial constant(const FieldElement& a) { return Polynomial(a.field(), {a}); }
    static Polynomial variable(const FieldPtr& k) {
        return Polynomial(k, {FieldElement::zero(k), FieldElement::one(k)});
    }
    static Polynomial monomial(const FieldElement& a, int deg) {
        std::vector<FieldElement> c(static_cast<size_t>(deg) + 1, FieldElement::zero(a.field()));
        c.back() = a;
        return Polynomial(a.field(), std::move(c));
    }

    const FieldPtr& field() const { return k_; }
    bool valid() const { return k_ != nullptr; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

    const std::vector<FieldElement>& coeffs() const { return c_; }
    FieldElement coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return FieldElement::zero(k_);
        return c_[static_cast<size_t>(i)];
    }
    FieldElement leading() const {
        if (c_.empty()) return FieldElement::zero(k_);
        return c_.back();
    }
    FieldElement constant_term() const { return coeff(0); }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    FieldElement eval(const FieldElement& x) const {
        FieldElement acc = FieldElement::zero(k_);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Polynomial derivative() const {
        std::vector<FieldElement> d;
        for (size_t i = 1; i < c_.size(); ++i)
            d.push_back(c_[i] * FieldElement::from_int(k_, static_cast<int64_t>(i)));
        return Polynomial(k_, std::move(d));
    }

    Polynomial monic() const {
        if (is_zero() || c_.back().is_one()) return *this;
        return *this * Polynomial::constant(c_.back().inverse());
    }

    /// Coefficients reversed: x^deg * f(1/x). Used for the place at infinity.
    Polynomial reversed() const {
        std::vector<FieldElement> r(c_.rbegin(), c_.rend());
        return Polynomial(k_, std::move(r));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const;
    friend std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator/(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b);

    bool operator==(const Polynomial& b) const;
    bool operator!=(const Polynomial& b) const { return !(*this == b); }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldPtr k_;
    std::vector<FieldElement> c_;
};

int compare_polys(const Polynomial& a, const Polynomial& b);
inline bool poly_less(const Polynomial& a, const Polynomial& b) { return compare_polys(a, b) < 0; }
struct PolyLess {
    bool operator()(const Polynomial& a, const Polynomial& b) const { return poly_less(a, b); }
};

Polynomial gcd(const Polynomial& a, const Polynomial& b);
// Returns (g, s, t) with s*a + t*b = g, g monic (or zero).
std::tuple<Polynomial, Polynomial, Polynomial> extended_gcd(const Polynomial& a, const Polynomial& b);
Polynomial powmod(const Polynomial& base, int64_t e, const Polynomial& mod);
Polynomial poly_pow(const Polynomial& base, int64_t e);

std::string to_string(const Polynomial& f, const std::string& var);

/// Reduced fraction of polynomials: gcd(num, den) = 1 and den monic. Zero is
/// represented as 0/1.
class RationalFunction {
public:
    RationalFunction() = default;  // null
    explicit RationalFunction(Polynomial num)
        : num_(std::move(num)), den_(Polynomial::from_ints(num_.field(), {1})) {}
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static RationalFunction from_int(const FieldPtr& k, int64_t n) {
        return RationalFunction(Polynomial::from_ints(k, {n}));
    }
    static RationalFunction constant(const FieldElement& a) {
        return RationalFunction(Polynomial::constant(a));
    }
    static RationalFunction variable(const FieldPtr& k) {
        return RationalFunction(Polynomial::variable(k));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    const FieldPtr& field() const { return num_.field(); }
    bool valid() const { return num_.valid(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    FieldElement constant_value() const {
        if (!is_constant()) throw DomainError("rational function is not constant");
        return num_.constant_term();
    }

    /// deg num - deg den; the valuation at infinity is the negative of this.
    int degree() const {
        if (is_zero()) throw DomainError("degree of the zero rational function");
        return num_.degree() - den_.degree();
    }

    FieldElement eval(const FieldElement& x) const {
        FieldElement d = den_.eval(x);
        if (d.is_zero()) throw DomainError("pole while evaluating rational function");
        return num_.eval(x) / d;
    }

    RationalFunction inverse() const {
        if (is_zero()) throw DomainError("inverse of zero rational function");
        return RationalFunction(den_, num_);
    }
    RationalFunction operator-() const { return RationalFunction(-num_, den_); }
    RationalFunction pow(int64_t e) const;

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw DomainError("division by zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    bool operator==(const RationalFunction& b) const { return num_ == b.num_ && den_ == b.den_; }
    bool operator!=(const RationalFunction& b) const { return !(*this == b); }

private:
    void normalize() {
        if (!num_.valid() || !den_.valid()) throw DomainError("rational function from null polynomial");
        if (den_.is_zero()) throw DomainError("zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial::from_ints(num_.field(), {1});
            return;
        }
        Polynomial g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        FieldElement lc = den_.leading();
        if (!lc.is_one()) {
            Polynomial s = Polynomial::constant(lc.inverse());
            num_ = num_ * s;
            den_ = den_ * s;
        }
    }

    Polynomial num_, den_;
};

std::string to_string(const RationalFunction& g, const std::string& var);

// ---------------------------------------------------------------------------
// Descriptor factories
// ---------------------------------------------------------------------------

inline FieldPtr prime_field(int64_t p) {
    if (p < 2 || p >= FieldDescriptor::kMaxFiniteSize)
        throw InputError("prime field characteristic out of range [2, 2^31)");
    if (!detail::is_prime_int(p)) throw InputError("field size is not prime: " + std::to_string(p));
    auto d = std::shared_ptr<FieldDescriptor>(new FieldDescriptor());
    d->kind_ = FieldKind::Prime;
    d->p_ = p;
    d->size_ = p;
    d->ext_degree_ = 1;
    return d;
}

// Declared here, defined in factor.hpp (needs the factorization machinery).
bool is_irreducible(const Polynomial& f);

/// Extension of `base` by a monic irreducible `modulus` of degree >= 1.
/// `check` controls the irreducibility test; it is skipped over function-field
/// bases, where deciding irreducibility is outside this library's scope and
/// the caller carries the precondition. Defined in factor.hpp.
FieldPtr extension_field(const FieldPtr& base, const Polynomial& modulus,
                         const std::string& var = "y", bool check = true);

inline FieldPtr rational_function_field(const FieldPtr& base, const std::string& var) {
    if (!base) throw InputError("function field over null field");
    if (!base->finite()) throw InputError("function field base must be a finite field");
    auto d = std::shared_ptr<FieldDescriptor>(new FieldDescriptor());
    d->kind_ = FieldKind::RatFunc;
    d->p_ = base->characteristic();
    d->base_ = base;
    d->size_ = 0;
    d->var_ = var;
    return d;
}

inline const Polynomial& FieldDescriptor::modulus() const {
    if (kind_ != FieldKind::Extension) throw DomainError("modulus() on non-extension field");
    return *modulus_;
}

inline bool FieldDescriptor::equals(const FieldDescriptor& o) const {
    if (this == &o) return true;
    if (kind_ != o.kind_ || p_ != o.p_) return false;
    switch (kind_) {
        case FieldKind::Prime:
            return true;
        case FieldKind::Extension:
            return same_field(base_, o.base_) && *modulus_ == *o.modulus_;
        case FieldKind::RatFunc:
            return var_ == o.var_ && same_field(base_, o.base_);
    }
    return false;
}

inline std::string FieldDescriptor::name() const {
    switch (kind_) {
        case FieldKind::Prime:
            return "F" + std::to_string(p_);
        case FieldKind::Extension:
            if (finite()) return "F" + std::to_string(size_);
            return base_->name() + "[" + var_ + "]/(" + to_string(*modulus_, var_) + ")";
        case FieldKind::RatFunc:
            return base_->name() + "(" + var_ + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

inline void check_same_field(const FieldElement& a, const FieldElement& b) {
    if (!a.valid() || !b.valid()) throw DomainError("operation on null field element");
    if (!same_field(a.field(), b.field()))
        throw DomainError("field descriptor mismatch: " + a.field()->name() + " vs " + b.field()->name());
}

inline FieldElement FieldElement::from_int(const FieldPtr& k, int64_t n) {
    if (!k) throw DomainError("element of null field");
    FieldElement e;
    e.f_ = k;
    switch (k->kind()) {
        case FieldKind::Prime:
            e.iv_ = detail::mod_positive(n, k->characteristic());
            break;
        case FieldKind::Extension: {
            e.vec_.assign(static_cast<size_t>(k->extension_degree()), FieldElement::zero(k->base()));
            e.vec_[0] = FieldElement::from_int(k->base(), n);
            break;
        }
        case FieldKind::RatFunc:
            e.rf_ = std::make_shared<RationalFunction>(RationalFunction::from_int(k->base(), n));
            break;
    }
    return e;
}

inline FieldElement FieldElement::from_coeffs(const FieldPtr& k, std::vector<FieldElement> coeffs) {
    if (!k || k->kind() != FieldKind::Extension) throw DomainError("from_coeffs on non-extension field");
    const size_t e = static_cast<size_t>(k->extension_degree());
    if (coeffs.size() > e) throw DomainError("coefficient vector longer than extension degree");
    for (const auto& c : coeffs)
        if (!same_field(c.field(), k->base())) throw DomainError("coefficient not over the base field");
    coeffs.resize(e, FieldElement::zero(k->base()));
    FieldElement out;
    out.f_ = k;
    out.vec_ = std::move(coeffs);
    return out;
}

inline FieldElement FieldElement::from_ratfunc(const FieldPtr& k, RationalFunction rf) {
    if (!k || k->kind() != FieldKind::RatFunc) throw DomainError("from_ratfunc on non-function field");
    if (!same_field(rf.field(), k->base())) throw DomainError("rational function not over the base field");
    FieldElement out;
    out.f_ = k;
    out.rf_ = std::make_shared<RationalFunction>(std::move(rf));
    return out;
}

inline const RationalFunction& FieldElement::ratfunc() const {
    if (!f_ || f_->kind() != FieldKind::RatFunc) throw DomainError("ratfunc() on non-function-field element");
    return *rf_;
}

inline bool FieldElement::is_zero() const {
    if (!f_) throw DomainError("is_zero on null element");
    switch (f_->kind()) {
        case FieldKind::Prime:
            return iv_ == 0;
        case FieldKind::Extension:
            return std::all_of(vec_.begin(), vec_.end(), [](const FieldElement& c) { return c.is_zero(); });
        case FieldKind::RatFunc:
            return rf_->is_zero();
    }
    return false;
}

inline bool FieldElement::is_one() const {
    if (!f_) throw DomainError("is_one on null element");
    switch (f_->kind()) {
        case FieldKind::Prime:
            return iv_ == 1;
        case FieldKind::Extension: {
            if (!vec_[0].is_one()) return false;
            for (size_t i = 1; i < vec_.size(); ++i)
                if (!vec_[i].is_zero()) return false;
            return true;
        }
        case FieldKind::RatFunc:
            return rf_->is_one();
    }
    return false;
}

namespace detail {
// Extension payload as a polynomial over the base (for reuse of the generic
// polynomial routines).
inline Polynomial payload_poly(const FieldElement& a) {
    return Polynomial(a.field()->base(), a.coeffs());
}

inline FieldElement from_payload(const FieldPtr& k, const Polynomial& f) {
    return FieldElement::from_coeffs(k, f.coeffs());
}
}  // namespace detail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check_same_field(a, b);
    FieldElement out = a;
    switch (a.field()->kind()) {
        case FieldKind::Prime:
            out.iv_ = (a.iv_ + b.iv_) % a.field()->characteristic();
            break;
        case FieldKind::Extension:
            for (size_t i = 0; i < out.vec_.size(); ++i) out.vec_[i] = a.vec_[i] + b.vec_[i];
            break;
        case FieldKind::RatFunc:
            out.rf_ = std::make_shared<RationalFunction>(*a.rf_ + *b.rf_);
            break;
    }
    return out;
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check_same_field(a, b);
    FieldElement out = a;
    switch (a.field()->kind()) {
        case FieldKind::Prime:
            out.iv_ = detail::mod_positive(a.iv_ - b.iv_, a.field()->characteristic());
            break;
        case FieldKind::Extension:
            for (size_t i = 0; i < out.vec_.size(); ++i) out.vec_[i] = a.vec_[i] - b.vec_[i];
            break;
        case FieldKind::RatFunc:
            out.rf_ = std::make_shared<RationalFunction>(*a.rf_ - *b.rf_);
            break;
    }
    return out;
}

inline FieldElement FieldElement::operator-() const {
    return FieldElement::zero(f_) - *this;
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same_field(a, b);
    FieldElement out = a;
    switch (a.field()->kind()) {
        case FieldKind::Prime:
            out.iv_ = (a.iv_ * b.iv_) % a.field()->characteristic();
            break;
        case FieldKind::Extension: {
            Polynomial prod = detail::payload_poly(a) * detail::payload_poly(b);
            out = detail::from_payload(a.field(), prod % a.field()->modulus());
            break;
        }
        case FieldKind::RatFunc:
            out.rf_ = std::make_shared<RationalFunction>(*a.rf_ * *b.rf_);
            break;
    }
    return out;
}

inline FieldElement FieldElement::inverse() const {
    if (!f_) throw DomainError("inverse of null element");
    switch (f_->kind()) {
        case FieldKind::Prime: {
            FieldElement out = *this;
            out.iv_ = detail::mod_inverse(iv_, f_->characteristic());
            return out;
        }
        case FieldKind::Extension: {
            if (is_zero()) throw DomainError("division by zero in " + f_->name());
            auto [g, s, t] = extended_gcd(detail::payload_poly(*this), f_->modulus());
            (void)t;
            if (g.degree() != 0)
                throw DomainError("element not invertible (modulus not irreducible?)");
            // g is monic constant 1 after normalization, so s is the inverse.
            return detail::from_payload(f_, s % f_->modulus());
        }
        case FieldKind::RatFunc:
            if (rf_->is_zero()) throw DomainError("division by zero in " + f_->name());
            return FieldElement::from_ratfunc(f_, rf_->inverse());
    }
    throw DomainError("unreachable");
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return a * b.inverse();
}

inline FieldElement FieldElement::pow(int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement acc = FieldElement::one(f_);
    FieldElement base = *this;
    uint64_t n = static_cast<uint64_t>(e);
    while (n > 0) {
        if (n & 1U) acc = acc * base;
        base = base * base;
        n >>= 1U;
    }
    return acc;
}

inline bool FieldElement::operator==(const FieldElement& b) const {
    check_same_field(*this, b);
    switch (f_->kind()) {
        case FieldKind::Prime:
            return iv_ == b.iv_;
        case FieldKind::Extension:
            return vec_ == b.vec_;
        case FieldKind::RatFunc:
            return *rf_ == *b.rf_;
    }
    return false;
}

inline int compare_elements(const FieldElement& a, const FieldElement& b) {
    check_same_field(a, b);
    switch (a.field()->kind()) {
        case FieldKind::Prime:
            return a.prime_value() < b.prime_value() ? -1 : a.prime_value() > b.prime_value() ? 1 : 0;
        case FieldKind::Extension: {
            const auto& u = a.coeffs();
            const auto& v = b.coeffs();
            for (size_t i = u.size(); i-- > 0;) {
                int c = compare_elements(u[i], v[i]);
                if (c != 0) return c;
            }
            return 0;
        }
        case FieldKind::RatFunc: {
            int c = compare_polys(a.ratfunc().num(), b.ratfunc().num());
            if (c != 0) return c;
            return compare_polys(a.ratfunc().den(), b.ratfunc().den());
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Polynomial operations
// ---------------------------------------------------------------------------

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (!same_field(a.k_, b.k_)) throw DomainError("polynomial field mismatch");
    std::vector<FieldElement> c(std::max(a.c_.size(), b.c_.size()), FieldElement::zero(a.k_));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
    return Polynomial(a.k_, std::move(c));
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    if (!same_field(a.k_, b.k_)) throw DomainError("polynomial field mismatch");
    std::vector<FieldElement> c(std::max(a.c_.size(), b.c_.size()), FieldElement::zero(a.k_));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] - b.c_[i];
    return Polynomial(a.k_, std::move(c));
}

inline Polynomial Polynomial::operator-() const {
    std::vector<FieldElement> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(-x);
    return Polynomial(k_, std::move(c));
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (!same_field(a.k_, b.k_)) throw DomainError("polynomial field mismatch");
    if (a.is_zero() || b.is_zero()) return Polynomial(a.k_);
    std::vector<FieldElement> c(a.c_.size() + b.c_.size() - 1, FieldElement::zero(a.k_));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    }
    return Polynomial(a.k_, std::move(c));
}

inline std::pair<Polynomial, Polynomial> divrem(const Polynomial& a, const Polynomial& b) {
    if (!same_field(a.k_, b.k_)) throw DomainError("polynomial field mismatch");
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (a.degree() < b.degree()) return {Polynomial(a.k_), a};
    FieldElement lc_inv = b.leading().inverse();
    std::vector<FieldElement> rem = a.c_;
    std::vector<FieldElement> quo(static_cast<size_t>(a.degree() - b.degree()) + 1,
                                  FieldElement::zero(a.k_));
    for (int i = a.degree(); i >= b.degree(); --i) {
        FieldElement c = rem[static_cast<size_t>(i)];
        if (c.is_zero()) continue;
        FieldElement q = c * lc_inv;
        quo[static_cast<size_t>(i - b.degree())] = q;
        for (int j = 0; j <= b.degree(); ++j) {
            size_t idx = static_cast<size_t>(i - b.degree() + j);
            rem[idx] = rem[idx] - q * b.c_[static_cast<size_t>(j)];
        }
    }
    return {Polynomial(a.k_, std::move(quo)), Polynomial(a.k_, std::move(rem))};
}

inline Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divrem(a, b).first; }
inline Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divrem(a, b).second; }

inline bool Polynomial::operator==(const Polynomial& b) const {
    if (!same_field(k_, b.k_)) throw DomainError("polynomial field mismatch");
    if (c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != b.c_[i]) return false;
    return true;
}

inline int compare_polys(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (int i = a.degree(); i >= 0; --i) {
        int c = compare_elements(a.coeff(i), b.coeff(i));
        if (c != 0) return c;
    }
    return 0;
}

inline Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    Polynomial r0 = a, r1 = b;
    while (!r1.is_zero()) {
        Polynomial r2 = r0 % r1;
        r0 = std::move(r1);
        r1 = std::move(r2);
    }
    return r0.monic();
}

inline std::tuple<Polynomial, Polynomial, Polynomial> extended_gcd(const Polynomial& a, const Polynomial& b) {
    const FieldPtr& k = a.field();
    Polynomial r0 = a, r1 = b;
    Polynomial s0 = Polynomial::from_ints(k, {1}), s1(k);
    Polynomial t0(k), t1 = Polynomial::from_ints(k, {1});
    while (!r1.is_zero()) {
        auto [q, r2] = divrem(r0, r1);
        Polynomial s2 = s0 - q * s1;
        Polynomial t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!r0.is_zero() && !r0.leading().is_one()) {
        Polynomial scale = Polynomial::constant(r0.leading().inverse());
        r0 = r0 * scale;
        s0 = s0 * scale;
        t0 = t0 * scale;
    }
    return {r0, s0, t0};
}

inline Polynomial powmod(const Polynomial& base, int64_t e, const Polynomial& mod) {
    if (e < 0) throw DomainError("powmod with negative exponent");
    Polynomial acc = Polynomial::from_ints(base.field(), {1}) % mod;
    Polynomial b = base % mod;
    uint64_t n = static_cast<uint64_t>(e);
    while (n > 0) {
        if (n & 1U) acc = (acc * b) % mod;
        b = (b * b) % mod;
        n >>= 1U;
    }
    return acc;
}

inline Polynomial poly_pow(const Polynomial& base, int64_t e) {
    if (e < 0) throw DomainError("poly_pow with negative exponent");
    Polynomial acc = Polynomial::from_ints(base.field(), {1});
    Polynomial b = base;
    uint64_t n = static_cast<uint64_t>(e);
    while (n > 0) {
        if (n & 1U) acc = acc * b;
        b = b * b;
        n >>= 1U;
    }
    return acc;
}

inline RationalFunction RationalFunction::pow(int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    return RationalFunction(poly_pow(num_, e), poly_pow(den_, e));
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {
inline bool needs_parens(const std::string& s) {
    return s.find_first_of("+-*/^") != std::string::npos;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Canonical enumeration of finite fields: index 0..q-1 <-> element, matching
// compare_elements (index order is the canonical element order).
// ---------------------------------------------------------------------------

inline FieldElement element_from_index(const FieldPtr& k, int64_t idx) {
    if (!k || !k->finite()) throw DomainError("element_from_index needs a finite field");
    if (idx < 0 || idx >= k->size()) throw DomainError("element index out of range");
    if (k->kind() == FieldKind::Prime) return FieldElement::from_int(k, idx);
    std::vector<FieldElement> digits;
    const int64_t bq = k->base()->size();
    for (int j = 0; j < k->extension_degree(); ++j) {
        digits.push_back(element_from_index(k->base(), idx % bq));
        idx /= bq;
    }
    return FieldElement::from_coeffs(k, std::move(digits));
}

inline int64_t element_index(const FieldElement& a) {
    const FieldPtr& k = a.field();
    if (!k || !k->finite()) throw DomainError("element_index needs a finite field");
    if (k->kind() == FieldKind::Prime) return a.prime_value();
    int64_t idx = 0;
    const int64_t bq = k->base()->size();
    const auto& c = a.coeffs();
    for (size_t j = c.size(); j-- > 0;) idx = idx * bq + element_index(c[j]);
    return idx;
}

inline std::string to_string(const FieldElement& a) {
    if (!a.valid()) return "<null>";
    switch (a.field()->kind()) {
        case FieldKind::Prime:
            return std::to_string(a.prime_value());
        case FieldKind::Extension:
            return to_string(Polynomial(a.field()->base(), a.coeffs()), a.field()->var());
        case FieldKind::RatFunc:
            return to_string(a.ratfunc(), a.field()->var());
    }
    return "?";
}

inline std::string to_string(const Polynomial& f, const std::string& var) {
    if (!f.valid()) return "<null>";
    if (f.is_zero()) return "0";
    std::string out;
    for (int i = f.degree(); i >= 0; --i) {
        FieldElement c = f.coeff(i);
        if (c.is_zero()) continue;
        if (!out.empty()) out += "+";
        std::string cs = to_string(c);
        if (i == 0) {
            out += detail::needs_parens(cs) ? "(" + cs + ")" : cs;
            continue;
        }
        if (!c.is_one()) {
            out += detail::needs_parens(cs) ? "(" + cs + ")" : cs;
            out += "*";
        }
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

inline std::string to_string(const RationalFunction& g, const std::string& var) {
    if (!g.valid()) return "<null>";
    if (g.den().is_one()) return to_string(g.num(), var);
    return "(" + to_string(g.num(), var) + ")/(" + to_string(g.den(), var) + ")";
}

}  // namespace milnork
