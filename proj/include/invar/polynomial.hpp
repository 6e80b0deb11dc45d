#ifndef INVAR_POLYNOMIAL_HPP
#define INVAR_POLYNOMIAL_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace invar {

// Index n of the sequence variable x_n (printed x<n>, alias a<n>).
using VarIndex = std::uint32_t;

// Variables live in three disjoint blocks: the sequence variables x_n, the
// variables c_n of a second input sequence, and formal parameters such as the
// symbolic mu of the binomial transform. Derivations and endomorphisms of the
// sequence algebra never touch the parameter block.
enum class Block : std::uint8_t { seq = 0, aux = 1, param = 2 };

struct Var {
    Block block = Block::seq;
    std::uint32_t index = 0;

    friend auto operator<=>(const Var &, const Var &) = default;
};

inline Var x_var(VarIndex i) { return {Block::seq, i}; }
inline Var c_var(VarIndex i) { return {Block::aux, i}; }
inline Var param_var(std::uint32_t i) { return {Block::param, i}; }

inline std::string to_string(const Var &v)
{
    switch (v.block) {
    case Block::seq:
        return "x" + std::to_string(v.index);
    case Block::aux:
        return "c" + std::to_string(v.index);
    case Block::param:
        return v.index == 0 ? std::string("mu") : "mu" + std::to_string(v.index);
    }
    return {};
}

// A power product of variables. Factors are kept sorted by variable with
// strictly positive exponents; the empty product is the unit monomial.
class Monomial {
public:
    using factor = std::pair<Var, std::uint32_t>;

    Monomial() = default;

    Monomial(std::initializer_list<factor> fs)
    {
        for (const auto &[v, e] : fs) {
            *this = *this * Monomial::power(v, e);
        }
    }

    static Monomial power(Var v, std::uint32_t e)
    {
        Monomial m;
        if (e != 0) {
            m.factors_.emplace_back(v, e);
        }
        return m;
    }

    const std::vector<factor> &factors() const { return factors_; }
    bool is_unit() const { return factors_.empty(); }

    std::uint64_t degree() const
    {
        std::uint64_t d = 0;
        for (const auto &f : factors_) {
            d += f.second;
        }
        return d;
    }

    std::uint32_t exponent(Var v) const
    {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                                   [](const factor &f, const Var &w) { return f.first < w; });
        return (it != factors_.end() && it->first == v) ? it->second : 0;
    }

    friend Monomial operator*(const Monomial &a, const Monomial &b)
    {
        Monomial r;
        r.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() && j != b.factors_.end()) {
            if (i->first < j->first) {
                r.factors_.push_back(*i++);
            } else if (j->first < i->first) {
                r.factors_.push_back(*j++);
            } else {
                const std::uint64_t e = std::uint64_t(i->second) + j->second;
                if (e > UINT32_MAX) {
                    throw invar_error("exponent overflow");
                }
                r.factors_.emplace_back(i->first, static_cast<std::uint32_t>(e));
                ++i;
                ++j;
            }
        }
        r.factors_.insert(r.factors_.end(), i, a.factors_.end());
        r.factors_.insert(r.factors_.end(), j, b.factors_.end());
        return r;
    }

    bool divides(const Monomial &m) const
    {
        for (const auto &[v, e] : factors_) {
            if (m.exponent(v) < e) {
                return false;
            }
        }
        return true;
    }

    // Requires divides(m); returns m / *this.
    Monomial quotient_of(const Monomial &m) const
    {
        Monomial r;
        for (const auto &[v, e] : m.factors_) {
            const auto d = e - exponent(v);
            if (d != 0) {
                r.factors_.emplace_back(v, d);
            }
        }
        return r;
    }

    friend bool operator==(const Monomial &, const Monomial &) = default;

private:
    std::vector<factor> factors_;
};

// Graded order: higher total degree first; ties broken lexicographically with
// later variables ranking higher (x1 > x0, x0*x2 > x1^2). Admissible, so the
// first term of a polynomial is a valid leading term for division.
struct MonomialGreater {
    bool operator()(const Monomial &a, const Monomial &b) const
    {
        const auto da = a.degree();
        const auto db = b.degree();
        if (da != db) {
            return da > db;
        }
        const auto &fa = a.factors();
        const auto &fb = b.factors();
        auto i = fa.rbegin();
        auto j = fb.rbegin();
        for (; i != fa.rend() && j != fb.rend(); ++i, ++j) {
            if (i->first != j->first) {
                return j->first < i->first;
            }
            if (i->second != j->second) {
                return i->second > j->second;
            }
        }
        return j == fb.rend() && i != fa.rend();
    }
};

inline std::string to_string(const Monomial &m)
{
    std::string s;
    for (const auto &[v, e] : m.factors()) {
        if (!s.empty()) {
            s += '*';
        }
        s += to_string(v);
        if (e != 1) {
            s += '^' + std::to_string(e);
        }
    }
    return s.empty() ? std::string("1") : s;
}

// Sparse multivariate polynomial with rational coefficients. Terms are stored
// in canonical order and never carry a zero coefficient, so structural
// equality is mathematical equality.
class Polynomial {
public:
    using term_map = std::map<Monomial, Rational, MonomialGreater>;

    Polynomial() = default;
    Polynomial(const Rational &c) { add_term(Monomial{}, c); }
    Polynomial(long c) : Polynomial(Rational(c)) {}
    Polynomial(const Monomial &m, const Rational &c = 1) { add_term(m, c); }

    static Polynomial variable(Var v) { return Polynomial(Monomial::power(v, 1)); }
    static Polynomial x(VarIndex i) { return variable(x_var(i)); }
    static Polynomial c(VarIndex i) { return variable(c_var(i)); }
    static Polynomial param(std::uint32_t i = 0) { return variable(param_var(i)); }

    const term_map &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit()); }

    Rational constant_term() const
    {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coefficient(const Monomial &m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Requires !is_zero().
    const Monomial &leading_monomial() const { return terms_.begin()->first; }
    const Rational &leading_coefficient() const { return terms_.begin()->second; }

    std::uint64_t total_degree() const
    {
        return terms_.empty() ? 0 : terms_.begin()->first.degree();
    }

    // Largest index of a variable from `block`, or -1 if none occurs.
    long max_index(Block block = Block::seq) const
    {
        long r = -1;
        for (const auto &[m, c] : terms_) {
            for (const auto &[v, e] : m.factors()) {
                if (v.block == block) {
                    r = std::max(r, static_cast<long>(v.index));
                }
            }
        }
        return r;
    }

    bool involves(Block block) const
    {
        for (const auto &[m, c] : terms_) {
            for (const auto &[v, e] : m.factors()) {
                if (v.block == block) {
                    return true;
                }
            }
        }
        return false;
    }

    void add_term(const Monomial &m, const Rational &c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    Polynomial &operator+=(const Polynomial &g)
    {
        for (const auto &[m, c] : g.terms_) {
            add_term(m, c);
        }
        return *this;
    }

    Polynomial &operator-=(const Polynomial &g)
    {
        for (const auto &[m, c] : g.terms_) {
            add_term(m, -c);
        }
        return *this;
    }

    Polynomial &operator*=(const Rational &s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto &[m, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial f, const Polynomial &g) { return f += g; }
    friend Polynomial operator-(Polynomial f, const Polynomial &g) { return f -= g; }
    friend Polynomial operator*(Polynomial f, const Rational &s) { return f *= s; }
    friend Polynomial operator*(const Rational &s, Polynomial f) { return f *= s; }

    friend Polynomial operator-(Polynomial f)
    {
        for (auto &[m, c] : f.terms_) {
            c = -c;
        }
        return f;
    }

    friend Polynomial operator*(const Polynomial &f, const Polynomial &g)
    {
        if (f.is_zero() || g.is_zero()) {
            return {};
        }
        Polynomial r;
        for (const auto &[mf, cf] : f.terms_) {
            for (const auto &[mg, cg] : g.terms_) {
                r.add_term(mf * mg, cf * cg);
            }
        }
        return r;
    }

    Polynomial &operator*=(const Polynomial &g) { return *this = *this * g; }

    friend bool operator==(const Polynomial &f, const Polynomial &g) { return f.terms_ == g.terms_; }

private:
    term_map terms_;
};

inline Polynomial pow(const Polynomial &f, long e)
{
    if (e < 0) {
        throw invar_error("negative exponent");
    }
    Polynomial result(1);
    Polynomial base = f;
    auto k = static_cast<unsigned long>(e);
    while (k != 0) {
        if (k & 1u) {
            result *= base;
        }
        k >>= 1;
        if (k != 0) {
            base *= base;
        }
    }
    return result;
}

inline Rational pow(const Rational &q, std::uint32_t e)
{
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
    return make_rational(num, den);
}

// Simultaneous substitution v -> image(v). `image` returns nullptr to leave a
// variable unchanged. Powers of each image are cached for the duration of the
// call.
inline Polynomial substitute(const Polynomial &f, const std::function<const Polynomial *(Var)> &image)
{
    std::map<std::pair<Var, std::uint32_t>, Polynomial> powers;
    auto power_of = [&](Var v, std::uint32_t e, const Polynomial &base) -> const Polynomial & {
        auto key = std::make_pair(v, e);
        auto it = powers.find(key);
        if (it == powers.end()) {
            it = powers.emplace(key, pow(base, e)).first;
        }
        return it->second;
    };

    Polynomial result;
    for (const auto &[m, c] : f.terms()) {
        Polynomial term(c);
        Monomial untouched;
        for (const auto &[v, e] : m.factors()) {
            if (const Polynomial *img = image(v)) {
                term *= power_of(v, e, *img);
            } else {
                untouched = untouched * Monomial::power(v, e);
            }
            if (term.is_zero()) {
                break;
            }
        }
        if (!untouched.is_unit()) {
            term *= Polynomial(untouched);
        }
        result += term;
    }
    return result;
}

inline Polynomial substitute(const Polynomial &f, const std::map<Var, Polynomial> &images)
{
    return substitute(f, [&](Var v) -> const Polynomial * {
        auto it = images.find(v);
        return it == images.end() ? nullptr : &it->second;
    });
}

// Substitution over sequence variables only; missing indices stay fixed.
inline Polynomial substitute(const Polynomial &f, const std::map<VarIndex, Polynomial> &images)
{
    return substitute(f, [&](Var v) -> const Polynomial * {
        if (v.block != Block::seq) {
            return nullptr;
        }
        auto it = images.find(v.index);
        return it == images.end() ? nullptr : &it->second;
    });
}

inline Polynomial partial_derivative(const Polynomial &f, Var v)
{
    Polynomial r;
    for (const auto &[m, c] : f.terms()) {
        const auto e = m.exponent(v);
        if (e == 0) {
            continue;
        }
        r.add_term(Monomial::power(v, 1).quotient_of(m), c * e);
    }
    return r;
}

inline Polynomial partial_derivative(const Polynomial &f, VarIndex i)
{
    return partial_derivative(f, x_var(i));
}

// Quotient of an exact division in Q[vars]. Throws if g does not divide f.
inline Polynomial exact_divide(Polynomial f, const Polynomial &g)
{
    if (g.is_zero()) {
        throw invar_error("division by zero polynomial");
    }
    if (g.is_constant()) {
        return f * (Rational(1) / g.constant_term());
    }
    const Monomial &lm = g.leading_monomial();
    const Rational &lc = g.leading_coefficient();
    Polynomial q;
    while (!f.is_zero()) {
        const Monomial &fm = f.leading_monomial();
        if (!lm.divides(fm)) {
            throw invar_error("inexact division");
        }
        Polynomial t(lm.quotient_of(fm), f.leading_coefficient() / lc);
        f -= t * g;
        q += t;
    }
    return q;
}

inline Rational evaluate(const Polynomial &f, const std::function<Rational(Var)> &value)
{
    std::map<Var, Rational> cache;
    Rational sum = 0;
    for (const auto &[m, c] : f.terms()) {
        Rational t = c;
        for (const auto &[v, e] : m.factors()) {
            auto it = cache.find(v);
            if (it == cache.end()) {
                it = cache.emplace(v, value(v)).first;
            }
            t *= pow(it->second, e);
        }
        sum += t;
    }
    return sum;
}

// Canonical text: terms in MonomialGreater order, variables ascending within a
// term, integer coefficients printed without a denominator.
inline std::string to_string(const Polynomial &f)
{
    if (f.is_zero()) {
        return "0";
    }
    std::string s;
    bool first = true;
    for (const auto &[m, c] : f.terms()) {
        const bool negative = c < 0;
        if (first) {
            if (negative) {
                s += '-';
            }
        } else {
            s += negative ? " - " : " + ";
        }
        first = false;
        const Rational mag = abs(c);
        if (m.is_unit()) {
            s += to_string(mag);
        } else if (mag == 1) {
            s += to_string(m);
        } else {
            s += to_string(mag) + '*' + to_string(m);
        }
    }
    return s;
}

} // namespace invar

#endif // INVAR_POLYNOMIAL_HPP
