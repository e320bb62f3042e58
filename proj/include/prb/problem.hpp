#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "prb/rec_operator.hpp"

// JSON problem files: a recurrence given by polynomial coefficient
// expressions in n, initial values as Gaussian-rational strings, and
// optional query parameters. Expression grammar (exact rational arithmetic):
//
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor (('*' factor) | ('/' integer))*
//   factor := atom ['^' nonneg-integer]
//   atom   := integer ['/' integer] | 'n' | '(' expr ')'
//
// Division is allowed only by nonzero integer constants, so every
// expression denotes a polynomial in n with rational coefficients.

namespace prb {

struct ParseError : std::runtime_error {
    long line, column;
    ParseError(const std::string& what, long l, long c)
        : std::runtime_error(what + " at line " + std::to_string(l) + ", column " + std::to_string(c)),
          line(l),
          column(c) {}
};

namespace detail {

class ExprParser {
  public:
    explicit ExprParser(const std::string& s, char var = 'n') : s_(s), var_(var) {}

    Poly parse() {
        Poly p = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    const std::string& s_;
    char var_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error: " + msg, 1, static_cast<long>(pos_) + 1);
    }
    // A dangling operator at the end of the input is reported at the
    // operator itself rather than one past the end.
    [[noreturn]] void fail_at_last(const std::string& msg) const {
        std::size_t last = pos_;
        while (last > 0 && std::isspace(static_cast<unsigned char>(s_[last - 1]))) --last;
        throw ParseError("syntax error: " + msg, 1, static_cast<long>(last));
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    mpz_class integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected an integer");
        return mpz_class(s_.substr(start, pos_ - start), 10);
    }

    Poly atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Poly p = expr();
            if (!eat(')')) fail("expected ')'");
            return p;
        }
        if (c == var_) {
            ++pos_;
            return Poly(std::vector<Rational>{Rational(0), Rational(1)});
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = integer();
            if (eat('/')) {
                skip_ws();
                if (peek() == var_) fail("division by a non-constant is not allowed");
                mpz_class den = integer();
                if (den == 0) fail("division by zero");
                Rational q(num, den);
                q.canonicalize();
                return Poly(q);
            }
            return Poly(Rational(num));
        }
        if (c == '\0') fail_at_last("unexpected end of expression");
        fail(std::string("expected a number, '") + var_ + "', or '('");
    }

    Poly factor() {
        Poly base = atom();
        if (eat('^')) {
            skip_ws();
            if (peek() == '-') fail("exponent must be a nonnegative integer");
            mpz_class e = integer();
            if (e > 256) fail("exponent too large");
            Poly out = Poly::one();
            for (long i = 0; i < e.get_si(); ++i) out = out * base;
            return out;
        }
        return base;
    }

    Poly term() {
        Poly p = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                p = p * factor();
            } else if (c == '/') {
                ++pos_;
                skip_ws();
                if (peek() == var_ || peek() == '(') fail("division by a non-constant is not allowed");
                mpz_class den = integer();
                if (den == 0) fail("division by zero");
                Rational inv(1, den);
                p = p * Poly(inv);
            } else {
                break;
            }
        }
        return p;
    }

    Poly expr() {
        bool neg = eat('-');
        Poly p = term();
        if (neg) p = -p;
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                p = p + term();
            } else if (c == '-') {
                ++pos_;
                p = p - term();
            } else {
                break;
            }
        }
        return p;
    }
};

/// "a/b", "a/b+c/d*i", "c/d*i" with optional signs; also "i", "-i".
inline GaussianRational parse_gaussian(const std::string& s) {
    auto fail = [&](std::size_t col, const std::string& msg) -> void {
        throw ParseError("syntax error in value '" + s + "': " + msg, 1, static_cast<long>(col) + 1);
    };
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto rational_part = [&]() -> Rational {
        skip_ws();
        bool neg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = (s[pos++] == '-');
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail(pos, "expected a number");
        mpz_class num(s.substr(start, pos - start), 10);
        mpz_class den(1);
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            std::size_t dstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == dstart) fail(pos, "expected a denominator");
            den = mpz_class(s.substr(dstart, pos - dstart), 10);
            if (den == 0) fail(dstart, "division by zero");
        }
        Rational q(num, den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    };
    GaussianRational g{Rational(0), Rational(0)};
    skip_ws();
    if (pos < s.size() && (s[pos] == 'i' || (s[pos] == '-' && pos + 1 < s.size() && s[pos + 1] == 'i'))) {
        g.im = (s[pos] == '-') ? Rational(-1) : Rational(1);
        pos += (s[pos] == '-') ? 2 : 1;
        skip_ws();
        if (pos != s.size()) fail(pos, "unexpected trailing input");
        return g;
    }
    Rational first = rational_part();
    skip_ws();
    if (pos < s.size() && s[pos] == '*') {
        ++pos;
        skip_ws();
        if (pos >= s.size() || s[pos] != 'i') fail(pos, "expected 'i'");
        ++pos;
        g.im = first;
    } else {
        g.re = first;
        skip_ws();
        if (pos < s.size()) {
            if (s[pos] != '+' && s[pos] != '-') fail(pos, "expected '+' or '-'");
            Rational second = rational_part();
            skip_ws();
            if (pos >= s.size() || s[pos] != '*') fail(pos, "expected '*i'");
            ++pos;
            skip_ws();
            if (pos >= s.size() || s[pos] != 'i') fail(pos, "expected 'i'");
            ++pos;
            g.im = second;
        }
    }
    skip_ws();
    if (pos != s.size()) fail(pos, "unexpected trailing input");
    return g;
}

}  // namespace detail

/// Polynomial from an expression string in the given variable.
inline Poly parse_coefficient(const std::string& s, char var = 'n') { return detail::ExprParser(s, var).parse(); }

struct ProblemSpec {
    RecOperator rec;
    std::vector<GaussianRational> initial;  // exact values when !initial_are_bounds
    bool initial_are_bounds = false;        // then moduli bounds are in initial[.].re
    std::optional<Rational> point;          // |z| for tail queries
    std::optional<Rational> eps;
    long derivative = 0;
};

/// Decimal / scientific literal ("1e-100", "0.25", "3/4") to an exact rational.
inline Rational parse_rational_literal(const std::string& s) {
    std::size_t epos = s.find_first_of("eE");
    std::string mant = (epos == std::string::npos) ? s : s.substr(0, epos);
    long expo = 0;
    if (epos != std::string::npos) {
        try {
            expo = std::stol(s.substr(epos + 1));
        } catch (const std::exception&) {
            throw ParseError("syntax error: bad exponent in '" + s + "'", 1, static_cast<long>(epos) + 2);
        }
    }
    Rational base;
    std::size_t slash = mant.find('/');
    std::size_t dot = mant.find('.');
    if (slash != std::string::npos) {
        if (epos != std::string::npos || dot != std::string::npos)
            throw ParseError("syntax error: mixed fraction and decimal in '" + s + "'", 1, 1);
        base = Rational(mant);
        base.canonicalize();
        return base;
    }
    std::string digits = mant;
    long frac = 0;
    if (dot != std::string::npos) {
        frac = static_cast<long>(mant.size() - dot - 1);
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
    }
    if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
    if (digits.empty() || digits == "-")
        throw ParseError("syntax error: empty number in '" + s + "'", 1, 1);
    for (std::size_t i = (digits[0] == '-' || digits[0] == '+') ? 1 : 0; i < digits.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(digits[i])))
            throw ParseError("syntax error: bad digit in '" + s + "'", 1, static_cast<long>(i) + 1);
    base = Rational(mpz_class(digits, 10));
    long net = expo - frac;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    Rational scale = (net >= 0) ? Rational(p10) : Rational(1, p10);
    scale.canonicalize();
    Rational out = base * scale;
    out.canonicalize();
    return out;
}

inline ProblemSpec parse_problem(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what(), 1, static_cast<long>(e.byte) + 1);
    }
    if (!j.is_object() || !j.contains("coefficients") || !j["coefficients"].is_array())
        throw ParseError("syntax error: expected an object with a 'coefficients' array", 1, 1);
    std::vector<Poly> coeffs;
    for (const auto& c : j["coefficients"]) {
        if (!c.is_string()) throw ParseError("syntax error: coefficients must be strings", 1, 1);
        coeffs.push_back(parse_coefficient(c.get<std::string>()));
    }
    ProblemSpec spec{RecOperator(std::move(coeffs)), {}, false, std::nullopt, std::nullopt, 0};
    if (j.contains("initial_are_bounds")) spec.initial_are_bounds = j["initial_are_bounds"].get<bool>();
    if (j.contains("initial")) {
        if (!j["initial"].is_array()) throw ParseError("syntax error: 'initial' must be an array", 1, 1);
        for (const auto& v : j["initial"]) {
            if (!v.is_string()) throw ParseError("syntax error: initial values must be strings", 1, 1);
            GaussianRational g = detail::parse_gaussian(v.get<std::string>());
            if (spec.initial_are_bounds && (g.im != 0 || g.re < 0))
                throw ParseError("syntax error: moduli bounds must be nonnegative rationals", 1, 1);
            spec.initial.push_back(g);
        }
    }
    if (j.contains("point")) spec.point = parse_rational_literal(j["point"].is_string() ? j["point"].get<std::string>() : j["point"].dump());
    if (j.contains("eps")) spec.eps = parse_rational_literal(j["eps"].is_string() ? j["eps"].get<std::string>() : j["eps"].dump());
    if (j.contains("derivative")) spec.derivative = j["derivative"].get<long>();
    return spec;
}

}  // namespace prb
