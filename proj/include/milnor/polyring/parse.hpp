#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "milnor/error.hpp"
#include "milnor/polyring/polynomial.hpp"

namespace milnor {

class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& msg)
        : Error("polyring", "parse error at offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

namespace detail {

// Recursive-descent parser:
//   expr    := sign? term (('+' | '-') term)*
//   term    := factor ('*' factor)*
//   factor  := sign factor | primary ('^' uint)?
//   primary := uint ('/' uint)? | identifier | '(' expr ')'
class PolyParser {
public:
    PolyParser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    Polynomial parse() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError(pos_, "empty expression");
        Polynomial p = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError(pos_, std::string("unexpected character '") + s_[pos_] + "'");
        return p;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    // Accepts ASCII '-' and the UTF-8 minus sign U+2212.
    bool eat_minus() {
        if (pos_ < s_.size() && s_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (s_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        skip_ws();
        bool neg = false;
        if (eat('+')) {
        } else if (eat_minus()) {
            neg = true;
        }
        Polynomial acc = term();
        if (neg) acc = -acc;
        for (;;) {
            skip_ws();
            if (eat('+')) {
                acc += term();
            } else if (eat_minus()) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (eat('*')) acc *= factor();
        return acc;
    }

    Polynomial factor() {
        skip_ws();
        if (eat('+')) return factor();
        if (eat_minus()) return -factor();
        Polynomial base = primary();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            std::size_t at = pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw ParseError(at, "expected unsigned integer exponent");
            mpz_class e = uint_literal();
            if (e > 1000) throw ParseError(at, "exponent too large");
            return base.pow(static_cast<unsigned>(e.get_ui()));
        }
        return base;
    }

    mpz_class uint_literal() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return mpz_class(std::string(s_.substr(start, pos_ - start)));
    }

    Polynomial primary() {
        skip_ws();
        std::size_t at = pos_;
        if (pos_ >= s_.size()) throw ParseError(at, "unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class num = uint_literal();
            mpz_class den = 1;
            std::size_t save = pos_;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                skip_ws();
                std::size_t dat = pos_;
                if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    throw ParseError(dat, "expected denominator");
                den = uint_literal();
                if (den == 0) throw ParseError(dat, "zero denominator");
            } else {
                pos_ = save;
            }
            Rational q(num, den);
            q.canonicalize();
            return Polynomial::constant(vars_.size(), q);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
            throw ParseError(start, "undeclared variable '" + name + "'");
        }
        if (c == '(') {
            ++pos_;
            Polynomial inner = expr();
            skip_ws();
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            return inner;
        }
        throw ParseError(at, std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression over the declared variables into expanded sparse form.
inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars) {
    if (vars.size() > kMaxVars)
        throw Error("polyring", "at most " + std::to_string(kMaxVars) + " variables are supported");
    return detail::PolyParser(text, vars).parse();
}

}  // namespace milnor
