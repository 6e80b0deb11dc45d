#ifndef INVAR_RATIONAL_HPP
#define INVAR_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace invar {

// Arbitrary-precision integers and rationals. mpq_class keeps values in
// lowest terms with a positive denominator after every arithmetic op.
using Integer = mpz_class;
using Rational = mpq_class;

// Base error type for everything the library throws on bad input.
class invar_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(const Integer &num, const Integer &den)
{
    if (den == 0) {
        throw invar_error("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1)
{
    return make_rational(Integer(num), Integer(den));
}

// Accepts "n" or "n/d" with an optional leading sign.
inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
            s.remove_prefix(1);
        }
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
            s.remove_suffix(1);
        }
        return s;
    };
    auto parse_int = [](std::string_view s, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) {
            i = 1;
        }
        if (i == s.size()) {
            throw invar_error("malformed rational '" + std::string(s) + "'");
        }
        for (std::size_t j = i; j < s.size(); ++j) {
            if (s[j] < '0' || s[j] > '9') {
                throw invar_error("malformed rational '" + std::string(s) + "'");
            }
        }
        std::string digits(s.substr(s[0] == '+' ? 1 : 0));
        return Integer(digits);
    };

    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text, true));
    }
    return make_rational(parse_int(trim(text.substr(0, slash)), true),
                         parse_int(trim(text.substr(slash + 1)), false));
}

inline std::string to_string(const Rational &q)
{
    return q.get_str();
}

inline bool is_integer(const Rational &q)
{
    return q.get_den() == 1;
}

inline Integer factorial(unsigned n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Integer binomial(unsigned n, unsigned k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

} // namespace invar

#endif // INVAR_RATIONAL_HPP
