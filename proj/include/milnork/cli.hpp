// Textual front end: a small grammar for fields, polynomials, symbols,
// framed data and matrices, plus the deterministic report renderer used by
// the command-line tool. Reports are key=value lines followed by the
// canonical serialization of any canonical form; a JSON mirror carries the
// same data for tooling.
#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "milnork/framed.hpp"
#include "milnork/framing_matrix.hpp"
#include "milnork/reciprocity.hpp"

namespace milnork {

enum class OpKind { Normalize, Tame, Reciprocity, Rho, Homotopy, ReduceFraming };

struct ParseOptions {
    std::optional<std::string> field_override;
    std::optional<HomotopyMode> mode_override;
};

struct InputDocument {
    FieldPtr field;
    OpKind op = OpKind::Normalize;
    MilnorElement element;  // normalize / tame / reciprocity
    Place place;            // tame
    FramedDatum framed;     // rho
    HomotopyDatum homotopy; // homotopy
    Matrix matrix;          // reduce-framing
};

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace cli_detail {

struct Token {
    enum Kind { Int, Ident, Punct, End } kind = End;
    std::string text;
    int64_t value = 0;
    int line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(msg + " at line " + std::to_string(tok_.line) + ", column " +
                         std::to_string(tok_.col));
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_.kind = Token::Int;
            tok_.text = src_.substr(start, pos_ - start);
            try {
                tok_.value = std::stoll(tok_.text);
            } catch (const std::exception&) {
                throw InputError("integer literal out of range at line " + std::to_string(line_) +
                                 ", column " + std::to_string(col_));
            }
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        static const std::string punct = "{}()[],;=+-*/^";
        if (punct.find(c) != std::string::npos) {
            tok_.kind = Token::Punct;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
            return;
        }
        throw InputError(std::string("unexpected character '") + c + "' at line " +
                         std::to_string(line_) + ", column " + std::to_string(col_));
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// Recursive descent expression evaluator into rational functions over a
// coefficient field, with named indeterminates/constants supplied by the
// operation context.
class ExprParser {
public:
    using Vars = std::vector<std::pair<std::string, RationalFunction>>;

    ExprParser(Lexer& lx, FieldPtr kc, Vars vars)
        : lx_(lx), kc_(std::move(kc)), vars_(std::move(vars)) {}

    RationalFunction parse() { return sum(); }

private:
    RationalFunction sum() {
        RationalFunction acc = product();
        for (;;) {
            if (is_punct("+")) {
                lx_.take();
                acc = acc + product();
            } else if (is_punct("-")) {
                lx_.take();
                acc = acc - product();
            } else {
                return acc;
            }
        }
    }

    RationalFunction product() {
        RationalFunction acc = factor();
        for (;;) {
            if (is_punct("*")) {
                lx_.take();
                acc = acc * factor();
            } else if (is_punct("/")) {
                Token op = lx_.take();
                RationalFunction d = factor();
                if (d.is_zero())
                    throw InputError("division by zero at line " + std::to_string(op.line) +
                                     ", column " + std::to_string(op.col));
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    RationalFunction factor() {
        if (is_punct("-")) {
            lx_.take();
            return -factor();
        }
        RationalFunction base = atom();
        if (is_punct("^")) {
            lx_.take();
            if (lx_.peek().kind != Token::Int) lx_.fail("expected integer exponent");
            int64_t e = lx_.take().value;
            return base.pow(e);
        }
        return base;
    }

    RationalFunction atom() {
        const Token& t = lx_.peek();
        if (t.kind == Token::Int) {
            return RationalFunction::from_int(kc_, lx_.take().value);
        }
        if (t.kind == Token::Ident) {
            for (const auto& [name, value] : vars_)
                if (name == t.text) {
                    lx_.take();
                    return value;
                }
            lx_.fail("unknown variable '" + t.text + "'");
        }
        if (t.kind == Token::Punct && t.text == "(") {
            lx_.take();
            RationalFunction inner = sum();
            expect_punct(")");
            return inner;
        }
        lx_.fail("expected expression");
        return RationalFunction();  // unreachable
    }

    bool is_punct(const char* s) const {
        return lx_.peek().kind == Token::Punct && lx_.peek().text == s;
    }
    void expect_punct(const char* s) {
        if (!is_punct(s)) lx_.fail(std::string("expected '") + s + "'");
        lx_.take();
    }

    Lexer& lx_;
    FieldPtr kc_;
    Vars vars_;
};

inline bool is_prime_power(int64_t q, int64_t& p, int& e) {
    if (q < 2) return false;
    int64_t m = q;
    for (int64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            p = d;
            e = 0;
            while (m % d == 0) {
                m /= d;
                ++e;
            }
            return m == 1;
        }
    }
    p = q;
    e = 1;
    return true;
}

}  // namespace cli_detail

/// Parses a field descriptor: `F7`, `F9 mod y^2+1`, `F5(t)`,
/// `F9(t) mod y^2+1`. Finite sizes are capped at 2^20.
inline FieldPtr parse_field_descriptor(const std::string& text) {
    using namespace cli_detail;
    Lexer lx(text);
    const Token t = lx.take();
    if (t.kind != Token::Ident || t.text.size() < 2 || t.text[0] != 'F')
        throw InputError("expected field descriptor like F7, F9, F5(t) at line " +
                         std::to_string(t.line) + ", column " + std::to_string(t.col));
    int64_t q = 0;
    for (size_t i = 1; i < t.text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
            throw InputError("malformed field size in '" + t.text + "'");
        q = q * 10 + (t.text[i] - '0');
        if (q > (int64_t(1) << 40)) throw InputError("field size out of range");
    }
    int64_t p = 0;
    int e = 0;
    if (!is_prime_power(q, p, e))
        throw InputError("field size " + std::to_string(q) + " is not a prime power");
    if (q > (int64_t(1) << 20))
        throw InputError("finite fields are supported up to size 2^20");

    std::string ratvar;
    if (lx.peek().kind == Token::Punct && lx.peek().text == "(") {
        lx.take();
        if (lx.peek().kind != Token::Ident) lx.fail("expected variable name");
        ratvar = lx.take().text;
        if (!(lx.peek().kind == Token::Punct && lx.peek().text == ")")) lx.fail("expected ')'");
        lx.take();
    }

    FieldPtr finite;
    if (lx.peek().kind == Token::Ident && lx.peek().text == "mod") {
        lx.take();
        if (e == 1) throw InputError("prime fields take no modulus");
        FieldPtr fp = prime_field(p);
        ExprParser ep(lx, fp, {{"y", RationalFunction::variable(fp)}});
        RationalFunction mod = ep.parse();
        if (!mod.den().is_one()) throw InputError("modulus must be a polynomial");
        if (mod.num().degree() != e)
            throw InputError("modulus degree does not match the field size");
        finite = extension_field(fp, mod.num().monic(), "y", true);
    } else {
        finite = e == 1 ? prime_field(p) : extension_field(p, e);
    }
    if (lx.peek().kind != Token::End) lx.fail("trailing input after field descriptor");
    return ratvar.empty() ? finite : rational_function_field(finite, ratvar);
}

// ---------------------------------------------------------------------------
// Document parser
// ---------------------------------------------------------------------------

namespace cli_detail {

// Variable bindings for expressions over field k. `outer` optionally names an
// indeterminate (x for framed data); the field's own generators are bound as
// constants. Entries of F_q(t) (outer == nullptr) are parsed directly as
// rational functions over F_q.
inline std::pair<FieldPtr, ExprParser::Vars> expr_context(const FieldPtr& k, const char* outer) {
    ExprParser::Vars vars;
    FieldPtr kc;
    if (k->kind() == FieldKind::RatFunc && outer == nullptr) {
        kc = k->base();
        vars.emplace_back(k->var(), RationalFunction::variable(kc));
    } else {
        kc = k;
        if (k->kind() == FieldKind::RatFunc)
            vars.emplace_back(
                k->var(), RationalFunction::constant(
                              FieldElement::from_ratfunc(k, RationalFunction::variable(k->base()))));
    }
    const FieldPtr fin = kc->kind() == FieldKind::RatFunc ? kc->base() : kc;
    if (fin->kind() == FieldKind::Extension) {
        const FieldPtr& b = fin->base();
        FieldElement gen =
            FieldElement::from_coeffs(fin, {FieldElement::zero(b), FieldElement::one(b)});
        FieldElement lifted = kc->kind() == FieldKind::RatFunc
                                  ? FieldElement::from_ratfunc(kc, RationalFunction::constant(gen))
                                  : gen;
        vars.emplace_back(fin->var(), RationalFunction::constant(lifted));
    }
    if (outer != nullptr) vars.emplace_back(outer, RationalFunction::variable(kc));
    return {kc, std::move(vars)};
}

inline FieldElement to_entry(const FieldPtr& k, const RationalFunction& rf) {
    if (k->kind() == FieldKind::RatFunc) return FieldElement::from_ratfunc(k, rf);
    if (!rf.is_constant()) throw InputError("entry must be constant over " + k->name());
    return rf.constant_value();
}

// symbol sum: [+|-] [INT *] { e1, e2, ... } joined by + / -
inline MilnorElement parse_symbol_sum(Lexer& lx, const FieldPtr& k) {
    auto [kc, vars] = expr_context(k, nullptr);
    std::optional<MilnorElement> acc;
    int64_t sign = 1;
    if (lx.peek().kind == Token::Punct && (lx.peek().text == "+" || lx.peek().text == "-"))
        sign = lx.take().text == "+" ? 1 : -1;
    for (;;) {
        int64_t coeff = sign;
        if (lx.peek().kind == Token::Int) {
            coeff *= lx.take().value;
            if (lx.peek().kind == Token::Punct && lx.peek().text == "*")
                lx.take();
            else
                lx.fail("expected '*' between coefficient and symbol");
        }
        if (!(lx.peek().kind == Token::Punct && lx.peek().text == "{")) lx.fail("expected '{'");
        lx.take();
        std::vector<FieldElement> entries;
        if (!(lx.peek().kind == Token::Punct && lx.peek().text == "}")) {
            for (;;) {
                ExprParser ep(lx, kc, vars);
                entries.push_back(to_entry(k, ep.parse()));
                if (lx.peek().kind == Token::Punct && lx.peek().text == ",") {
                    lx.take();
                    continue;
                }
                break;
            }
        }
        if (!(lx.peek().kind == Token::Punct && lx.peek().text == "}")) lx.fail("expected '}'");
        lx.take();
        MilnorElement term = MilnorElement::symbol(k, std::move(entries)).scaled(coeff);
        acc = acc ? *acc + term : term;
        if (lx.peek().kind == Token::Punct && (lx.peek().text == "+" || lx.peek().text == "-")) {
            sign = lx.take().text == "+" ? 1 : -1;
            continue;
        }
        return *acc;
    }
}

inline void expect_punct(Lexer& lx, const char* s) {
    if (!(lx.peek().kind == Token::Punct && lx.peek().text == s))
        lx.fail(std::string("expected '") + s + "'");
    lx.take();
}

inline void expect_ident(Lexer& lx, const char* s) {
    if (!(lx.peek().kind == Token::Ident && lx.peek().text == s))
        lx.fail(std::string("expected '") + s + "'");
    lx.take();
}

inline std::vector<RationalFunction> parse_bracket_list(Lexer& lx, const FieldPtr& kc,
                                                        const ExprParser::Vars& vars) {
    expect_punct(lx, "[");
    std::vector<RationalFunction> out;
    if (!(lx.peek().kind == Token::Punct && lx.peek().text == "]")) {
        for (;;) {
            ExprParser ep(lx, kc, vars);
            out.push_back(ep.parse());
            if (lx.peek().kind == Token::Punct && lx.peek().text == ",") {
                lx.take();
                continue;
            }
            break;
        }
    }
    expect_punct(lx, "]");
    return out;
}

}  // namespace cli_detail

/// Parses a full document: `field <desc>; <operation ...>;`
inline InputDocument parse(const std::string& text, const ParseOptions& opts = {}) {
    using namespace cli_detail;
    Lexer lx(text);
    InputDocument doc;

    expect_ident(lx, "field");
    {
        // consume tokens until ';' and reparse as a descriptor
        std::string desc;
        while (!(lx.peek().kind == Token::Punct && lx.peek().text == ";")) {
            if (lx.peek().kind == Token::End) lx.fail("unterminated field declaration");
            if (!desc.empty()) desc += " ";
            desc += lx.take().text;
        }
        lx.take();  // ';'
        doc.field = parse_field_descriptor(opts.field_override ? *opts.field_override : desc);
    }
    const FieldPtr& k = doc.field;

    if (lx.peek().kind != Token::Ident) lx.fail("expected an operation keyword");
    const Token op_tok = lx.peek();
    std::string op = lx.take().text;

    if (op == "symbol" || op == "normalize") {
        doc.op = OpKind::Normalize;
        doc.element = parse_symbol_sum(lx, k);
        expect_punct(lx, ";");
    } else if (op == "tame") {
        doc.op = OpKind::Tame;
        if (k->kind() != FieldKind::RatFunc)
            throw InputError("tame requires a function field (declare e.g. F5(t))");
        doc.element = parse_symbol_sum(lx, k);
        expect_ident(lx, "at");
        if (lx.peek().kind == Token::Ident && lx.peek().text == "infinity") {
            lx.take();
            doc.place = Place::at_infinity();
        } else {
            FieldPtr base = k->base();
            ExprParser ep(lx, base, {{k->var(), RationalFunction::variable(base)}});
            RationalFunction rf = ep.parse();
            if (!rf.den().is_one() || rf.num().degree() < 1)
                throw InputError("place must be a nonconstant polynomial in " + k->var());
            Polynomial pi = rf.num().monic();
            if (!is_irreducible(pi))
                throw InputError("place polynomial is reducible: " + to_string(pi, k->var()));
            doc.place = Place::finite(std::move(pi));
        }
        expect_punct(lx, ";");
    } else if (op == "reciprocity") {
        doc.op = OpKind::Reciprocity;
        if (k->kind() != FieldKind::RatFunc)
            throw InputError("reciprocity requires a function field (declare e.g. F5(t))");
        doc.element = parse_symbol_sum(lx, k);
        expect_punct(lx, ";");
    } else if (op == "rho") {
        doc.op = OpKind::Rho;
        auto [kc, vars] = expr_context(k, "x");
        expect_ident(lx, "f");
        expect_punct(lx, "=");
        ExprParser ep(lx, kc, vars);
        RationalFunction f = ep.parse();
        if (!f.den().is_one()) throw InputError("framing f must be a polynomial in x");
        expect_punct(lx, ";");
        expect_ident(lx, "g");
        expect_punct(lx, "=");
        std::vector<RationalFunction> targets = parse_bracket_list(lx, kc, vars);
        expect_punct(lx, ";");
        doc.framed = make_framed(k, f.num(), std::move(targets));
    } else if (op == "homotopy") {
        doc.op = OpKind::Homotopy;
        if (k->kind() == FieldKind::RatFunc)
            throw InputError("homotopies are supported over finite base fields only");
        FieldPtr kt = rational_function_field(k, "t");
        auto [kc, vars] = expr_context(kt, "x");
        expect_ident(lx, "F");
        expect_punct(lx, "=");
        ExprParser ep(lx, kc, vars);
        RationalFunction f = ep.parse();
        if (!f.den().is_one()) throw InputError("homotopy polynomial F must be polynomial in x");
        expect_punct(lx, ";");
        expect_ident(lx, "g");
        expect_punct(lx, "=");
        std::vector<RationalFunction> targets = parse_bracket_list(lx, kc, vars);
        expect_punct(lx, ";");
        HomotopyMode mode = HomotopyMode::Strict;
        if (lx.peek().kind == Token::Ident && lx.peek().text == "mode") {
            lx.take();
            if (lx.peek().kind != Token::Ident) lx.fail("expected 'strict' or 'endpoint'");
            std::string m = lx.take().text;
            if (m == "strict")
                mode = HomotopyMode::Strict;
            else if (m == "endpoint")
                mode = HomotopyMode::Endpoint;
            else
                lx.fail("expected 'strict' or 'endpoint'");
            expect_punct(lx, ";");
        }
        if (opts.mode_override) mode = *opts.mode_override;
        doc.homotopy = make_homotopy(k, f.num(), std::move(targets), mode);
    } else if (op == "matrix") {
        doc.op = OpKind::ReduceFraming;
        auto [kc, vars] = expr_context(k, nullptr);
        expect_punct(lx, "[");
        std::vector<std::vector<FieldElement>> rows;
        auto parse_row = [&]() {
            std::vector<FieldElement> row;
            for (;;) {
                ExprParser ep(lx, kc, vars);
                RationalFunction v = ep.parse();
                row.push_back(to_entry(k, v));
                if (lx.peek().kind == Token::Punct && lx.peek().text == ",") {
                    lx.take();
                    continue;
                }
                break;
            }
            return row;
        };
        if (lx.peek().kind == Token::Punct && lx.peek().text == "[") {
            for (;;) {
                expect_punct(lx, "[");
                rows.push_back(parse_row());
                expect_punct(lx, "]");
                if (lx.peek().kind == Token::Punct && lx.peek().text == ",") {
                    lx.take();
                    continue;
                }
                break;
            }
        } else {
            rows.push_back(parse_row());
        }
        expect_punct(lx, "]");
        expect_punct(lx, ";");
        if (k->kind() == FieldKind::RatFunc) throw InputError("matrices need a finite field");
        size_t cols = rows[0].size();
        for (const auto& r : rows)
            if (r.size() != cols) throw InputError("matrix rows have unequal lengths");
        Matrix m(k, static_cast<int>(rows.size()), static_cast<int>(cols));
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols; ++j)
                m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
        doc.matrix = std::move(m);
    } else {
        throw InputError("unknown operation '" + op + "' at line " + std::to_string(op_tok.line) +
                         ", column " + std::to_string(op_tok.col));
    }

    if (lx.peek().kind != Token::End) lx.fail("trailing input after the operation");
    return doc;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline std::string to_string(const MilnorElement& a) {
    if (a.terms().empty()) return "0";
    std::string var = a.field()->kind() == FieldKind::RatFunc ? a.field()->var() : std::string();
    std::string out;
    bool first = true;
    for (const auto& [s, c] : a.terms()) {
        int64_t coeff = c;
        if (!first) {
            out += coeff > 0 ? "+" : "-";
            coeff = coeff < 0 ? -coeff : coeff;
        } else if (coeff < 0) {
            out += "-";
            coeff = -coeff;
        }
        first = false;
        if (coeff != 1) out += std::to_string(coeff) + "*";
        out += "{";
        for (size_t i = 0; i < s.entries.size(); ++i) {
            if (i) out += ",";
            out += to_string(s.entries[i]);
        }
        out += "}";
    }
    return out;
}

inline std::string field_descriptor_text(const FieldPtr& k) {
    if (k->kind() == FieldKind::RatFunc) {
        const FieldPtr& b = k->base();
        std::string s = "F" + std::to_string(b->size()) + "(" + k->var() + ")";
        if (b->kind() == FieldKind::Extension)
            s += " mod " + to_string(b->modulus(), b->var());
        return s;
    }
    std::string s = "F" + std::to_string(k->size());
    if (k->kind() == FieldKind::Extension) s += " mod " + to_string(k->modulus(), k->var());
    return s;
}

/// Canonical text of a parsed document; parse(render(parse(x))) == parse(x).
inline std::string render(const InputDocument& doc) {
    std::string out = "field " + field_descriptor_text(doc.field) + ";\n";
    switch (doc.op) {
        case OpKind::Normalize:
            out += "normalize " + to_string(doc.element) + ";\n";
            break;
        case OpKind::Tame:
            out += "tame " + to_string(doc.element) + " at " +
                   to_string(doc.place, doc.field->var()) + ";\n";
            break;
        case OpKind::Reciprocity:
            out += "reciprocity " + to_string(doc.element) + ";\n";
            break;
        case OpKind::Rho: {
            out += "rho f = " + to_string(doc.framed.f, "x") + ";\ng = [";
            for (size_t i = 0; i < doc.framed.targets.size(); ++i) {
                if (i) out += ",";
                out += to_string(doc.framed.targets[i], "x");
            }
            out += "];\n";
            break;
        }
        case OpKind::Homotopy: {
            out += "homotopy F = " + to_string(doc.homotopy.f, "x") + ";\ng = [";
            for (size_t i = 0; i < doc.homotopy.targets.size(); ++i) {
                if (i) out += ",";
                out += to_string(doc.homotopy.targets[i], "x");
            }
            out += "];\nmode ";
            out += doc.homotopy.mode == HomotopyMode::Strict ? "strict" : "endpoint";
            out += ";\n";
            break;
        }
        case OpKind::ReduceFraming: {
            out += "matrix [";
            for (int i = 0; i < doc.matrix.rows(); ++i) {
                if (i) out += ",";
                out += "[";
                for (int j = 0; j < doc.matrix.cols(); ++j) {
                    if (j) out += ",";
                    out += to_string(doc.matrix.at(i, j));
                }
                out += "]";
            }
            out += "];\n";
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical form serialization
// ---------------------------------------------------------------------------

inline std::string serialize_finite(const CanonicalForm& cf) {
    if (cf.degree() == 0) return "K0 n=" + std::to_string(cf.k0());
    if (cf.degree() == 1) {
        const FieldPtr& k = cf.field();
        return "K1 exp=" + std::to_string(cf.k1_exponent()) + " mod=" +
               std::to_string(k->size() - 1) + " gen=" + to_string(find_generator(k));
    }
    return "K" + std::to_string(cf.degree()) + " zero";
}

inline std::vector<std::string> serialize_canonical(const CanonicalForm& cf) {
    if (cf.field()->kind() != FieldKind::RatFunc) return {serialize_finite(cf)};
    std::vector<std::string> out;
    out.push_back("constant " + serialize_finite(cf.constant_part()));
    for (const auto& [pi, sub] : cf.places())
        out.push_back("place=" + to_string(pi, cf.field()->var()) + " value=" + serialize_finite(sub));
    return out;
}

inline nlohmann::json canonical_json(const CanonicalForm& cf) {
    nlohmann::json j;
    j["degree"] = cf.degree();
    j["zero"] = cf.is_zero();
    if (cf.field()->kind() == FieldKind::RatFunc) {
        j["constant"] = canonical_json(cf.constant_part());
        nlohmann::json places = nlohmann::json::array();
        for (const auto& [pi, sub] : cf.places()) {
            nlohmann::json e;
            e["place"] = to_string(pi, cf.field()->var());
            e["value"] = canonical_json(sub);
            places.push_back(e);
        }
        j["places"] = places;
    } else if (cf.degree() == 0) {
        j["n"] = cf.k0();
    } else if (cf.degree() == 1) {
        j["exp"] = cf.k1_exponent();
        j["mod"] = cf.field()->size() - 1;
        j["gen"] = to_string(find_generator(cf.field()));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

struct RunResult {
    std::vector<std::string> lines;
    nlohmann::json json;
    int exit_code = 0;  // 0 ok, 1 verification failure (2 = input error, set by callers)

    std::string text() const {
        std::string out;
        for (const auto& l : lines) {
            out += l;
            out += "\n";
        }
        return out;
    }
};

inline RunResult run(const InputDocument& doc) {
    RunResult r;
    const FieldPtr& k = doc.field;
    r.json["field"] = field_descriptor_text(k);
    auto emit = [&](const std::string& line) { r.lines.push_back(line); };

    switch (doc.op) {
        case OpKind::Normalize: {
            emit("op=normalize");
            emit("field=" + field_descriptor_text(k));
            emit("degree=" + std::to_string(doc.element.degree()));
            CanonicalForm cf = canonical(doc.element);
            for (const auto& l : serialize_canonical(cf)) emit(l);
            r.json["op"] = "normalize";
            r.json["degree"] = doc.element.degree();
            r.json["canonical"] = canonical_json(cf);
            break;
        }
        case OpKind::Tame: {
            emit("op=tame");
            emit("field=" + field_descriptor_text(k));
            emit("place=" + to_string(doc.place, k->var()));
            MilnorElement res = tame_symbol(doc.element, doc.place);
            emit("residue_field=" + res.field()->name());
            emit("residue=" + to_string(res));
            CanonicalForm cf = canonical(res);
            for (const auto& l : serialize_canonical(cf)) emit(l);
            r.json["op"] = "tame";
            r.json["place"] = to_string(doc.place, k->var());
            r.json["residue"] = to_string(res);
            r.json["canonical"] = canonical_json(cf);
            break;
        }
        case OpKind::Reciprocity: {
            emit("op=reciprocity");
            emit("field=" + field_descriptor_text(k));
            emit("degree=" + std::to_string(doc.element.degree()));
            ResidueReport rep = verify_weil(doc.element);
            nlohmann::json places = nlohmann::json::array();
            for (const auto& e : rep.entries) {
                emit("place=" + to_string(e.place, k->var()) + " residue=" + to_string(e.residue) +
                     " transferred=" + to_string(e.transferred));
                nlohmann::json pj;
                pj["place"] = to_string(e.place, k->var());
                pj["residue"] = to_string(e.residue);
                pj["transferred"] = to_string(e.transferred);
                places.push_back(pj);
            }
            emit("total " + serialize_finite(rep.total));
            emit(rep.zero ? "zero=true" : "zero=false");
            r.json["op"] = "reciprocity";
            r.json["places"] = places;
            r.json["total"] = canonical_json(rep.total);
            r.json["zero"] = rep.zero;
            if (!rep.zero) r.exit_code = 1;
            break;
        }
        case OpKind::Rho: {
            emit("op=rho");
            emit("field=" + field_descriptor_text(k));
            emit("m=" + std::to_string(doc.framed.weight()));
            nlohmann::json sup = nlohmann::json::array();
            try {
                for (const auto& pt : support(doc.framed)) {
                    emit("support place=" + to_string(pt.pi, "x") +
                         " mult=" + std::to_string(pt.multiplicity));
                    nlohmann::json pj;
                    pj["place"] = to_string(pt.pi, "x");
                    pj["mult"] = pt.multiplicity;
                    sup.push_back(pj);
                }
            } catch (const DomainError&) {
                // support enumeration can be unavailable over F_q(u); rho may
                // still evaluate through the resultant route below
            }
            RhoValue v = rho(doc.framed);
            for (const auto& l : serialize_canonical(v)) emit(l);
            r.json["op"] = "rho";
            r.json["m"] = doc.framed.weight();
            r.json["support"] = sup;
            r.json["canonical"] = canonical_json(v);
            break;
        }
        case OpKind::Homotopy: {
            emit("op=homotopy");
            emit("field=" + field_descriptor_text(k));
            emit(std::string("mode=") +
                 (doc.homotopy.mode == HomotopyMode::Strict ? "strict" : "endpoint"));
            emit("m=" + std::to_string(doc.homotopy.weight()));
            HomotopyCheck hc = homotopy_check(doc.homotopy);
            emit("rho0=" + serialize_finite(hc.rho0));
            emit("rho1=" + serialize_finite(hc.rho1));
            emit(hc.equal ? "equal=true" : "equal=false");
            emit(hc.guaranteed ? "guaranteed=true" : "guaranteed=false");
            r.json["op"] = "homotopy";
            r.json["mode"] = doc.homotopy.mode == HomotopyMode::Strict ? "strict" : "endpoint";
            r.json["rho0"] = canonical_json(hc.rho0);
            r.json["rho1"] = canonical_json(hc.rho1);
            r.json["equal"] = hc.equal;
            r.json["guaranteed"] = hc.guaranteed;
            if (!hc.equal) r.exit_code = 1;
            break;
        }
        case OpKind::ReduceFraming: {
            emit("op=reduce-framing");
            emit("field=" + field_descriptor_text(k));
            emit("n=" + std::to_string(doc.matrix.rows()) +
                 " N=" + std::to_string(doc.matrix.cols()));
            std::vector<Transvection> ops = reduce_to_projection(doc.matrix);
            nlohmann::json script = nlohmann::json::array();
            Matrix m = doc.matrix;
            for (const auto& t : ops) {
                emit("t i=" + std::to_string(t.src + 1) + " j=" + std::to_string(t.dst + 1) +
                     " lambda=" + to_string(t.lambda));
                nlohmann::json tj;
                tj["i"] = t.src + 1;
                tj["j"] = t.dst + 1;
                tj["lambda"] = to_string(t.lambda);
                script.push_back(tj);
                apply_transvection(m, t);
            }
            bool ok = m == Matrix::projection(k, m.rows(), m.cols());
            emit("count=" + std::to_string(ops.size()));
            emit(ok ? "check=ok" : "check=fail");
            r.json["op"] = "reduce-framing";
            r.json["script"] = script;
            r.json["count"] = ops.size();
            r.json["check"] = ok ? "ok" : "fail";
            if (!ok) r.exit_code = 1;
            break;
        }
    }
    return r;
}

}  // namespace milnork
