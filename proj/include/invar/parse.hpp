#ifndef INVAR_PARSE_HPP
#define INVAR_PARSE_HPP

#include <cctype>
#include <string>
#include <string_view>

#include "polynomial.hpp"

namespace invar {

class parse_error : public invar_error {
public:
    parse_error(const std::string &what, std::size_t line, std::size_t column)
        : invar_error("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": " + what),
          line_(line), column_(column)
    {
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

// Recursive descent over
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' nat)?
//   atom   := int ('/' nat)? | var | '(' expr ')'
//   var    := ('x'|'a'|'c') nat | 'mu' nat?
class poly_parser {
public:
    explicit poly_parser(std::string_view text) : text_(text) {}

    Polynomial parse()
    {
        Polynomial p = expr();
        skip_ws();
        if (!at_end()) {
            const char ch = peek();
            const bool known = std::string_view("+-*/^()").find(ch) != std::string_view::npos ||
                               std::isalnum(static_cast<unsigned char>(ch));
            fail((known ? "unexpected '" : "unknown token '") + std::string(1, ch) + "'");
        }
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string &what) const { throw parse_error(what, line_, col_); }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            advance();
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    std::string digits()
    {
        std::string d;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            d += peek();
            advance();
        }
        return d;
    }

    std::uint32_t small_nat(const char *what)
    {
        skip_ws();
        std::string d = digits();
        if (d.empty()) {
            fail(std::string("expected ") + what);
        }
        Integer v(d);
        if (v > UINT32_MAX) {
            fail(std::string(what) + " overflow");
        }
        return static_cast<std::uint32_t>(v.get_ui());
    }

    Polynomial expr()
    {
        skip_ws();
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        Polynomial p = term();
        if (negate) {
            p = -p;
        }
        for (;;) {
            if (accept('+')) {
                p += term();
            } else if (accept('-')) {
                p -= term();
            } else {
                return p;
            }
        }
    }

    Polynomial term()
    {
        Polynomial p = factor();
        while (accept('*')) {
            p *= factor();
        }
        return p;
    }

    Polynomial factor()
    {
        Polynomial base = atom();
        if (accept('^')) {
            return pow(base, small_nat("exponent"));
        }
        return base;
    }

    Polynomial atom()
    {
        skip_ws();
        if (at_end()) {
            fail("unexpected end of input");
        }
        const char ch = peek();
        if (ch == '(') {
            advance();
            Polynomial p = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            Integer num(digits());
            if (accept('/')) {
                skip_ws();
                std::string d = digits();
                if (d.empty()) {
                    fail("expected denominator");
                }
                Integer den(d);
                if (den == 0) {
                    fail("zero denominator");
                }
                return Polynomial(make_rational(num, den));
            }
            return Polynomial(Rational(num));
        }
        if (ch == 'x' || ch == 'a' || ch == 'c') {
            advance();
            const auto idx = small_nat("variable index");
            return Polynomial::variable(ch == 'c' ? c_var(idx) : x_var(idx));
        }
        if (ch == 'm') {
            advance();
            if (peek() != 'u') {
                fail("unknown token 'm'");
            }
            advance();
            std::uint32_t idx = 0;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                idx = small_nat("parameter index");
            }
            return Polynomial::param(idx);
        }
        fail("unknown token '" + std::string(1, ch) + "'");
    }
};

} // namespace detail

inline Polynomial parse_poly(std::string_view text)
{
    return detail::poly_parser(text).parse();
}

inline std::string print_poly(const Polynomial &f)
{
    return to_string(f);
}

} // namespace invar

#endif // INVAR_PARSE_HPP
