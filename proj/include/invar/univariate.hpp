#ifndef INVAR_UNIVARIATE_HPP
#define INVAR_UNIVARIATE_HPP

#include <vector>

#include "matrix.hpp"

namespace invar {

// Polynomial in a formal main variable X whose coefficients are themselves
// polynomials. coeffs()[i] multiplies X^(degree - i). X is positional and is
// never a Var, so substituting into the coefficients cannot capture it.
class UnivariatePoly {
public:
    UnivariatePoly() = default;

    explicit UnivariatePoly(std::vector<Polynomial> coeffs) : coeffs_(std::move(coeffs))
    {
        std::size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead].is_zero()) {
            ++lead;
        }
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    }

    bool is_zero() const { return coeffs_.empty(); }

    // Requires !is_zero().
    std::size_t degree() const { return coeffs_.size() - 1; }
    const Polynomial &leading_coefficient() const { return coeffs_.front(); }
    const std::vector<Polynomial> &coeffs() const { return coeffs_; }

    UnivariatePoly derivative() const
    {
        if (coeffs_.size() <= 1) {
            return {};
        }
        const std::size_t d = degree();
        std::vector<Polynomial> out;
        out.reserve(d);
        for (std::size_t i = 0; i < d; ++i) {
            out.push_back(coeffs_[i] * Rational(static_cast<long>(d - i)));
        }
        return UnivariatePoly(std::move(out));
    }

private:
    std::vector<Polynomial> coeffs_;
};

inline PolyMatrix sylvester_matrix(const UnivariatePoly &p, const UnivariatePoly &q)
{
    const std::size_t m = p.degree();
    const std::size_t n = q.degree();
    PolyMatrix s(m + n, m + n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i <= m; ++i) {
            s(r, r + i) = p.coeffs()[i];
        }
    }
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i <= n; ++i) {
            s(n + r, r + i) = q.coeffs()[i];
        }
    }
    return s;
}

inline Polynomial resultant(const UnivariatePoly &p, const UnivariatePoly &q)
{
    if (p.is_zero() || q.is_zero()) {
        throw invar_error("zero polynomial has no resultant");
    }
    return determinant(sylvester_matrix(p, q));
}

// (-1)^(d(d-1)/2) * Res(P, P') / lc(P); equals b^2 - 4ac for a quadratic.
inline Polynomial discriminant(const UnivariatePoly &p)
{
    if (p.is_zero()) {
        throw invar_error("zero polynomial has no resultant");
    }
    const std::size_t d = p.degree();
    if (d < 2) {
        throw invar_error("discriminant needs degree >= 2, got degree " + std::to_string(d));
    }
    Polynomial r = exact_divide(resultant(p, p.derivative()), p.leading_coefficient());
    return ((d * (d - 1) / 2) % 2 == 1) ? -r : r;
}

} // namespace invar

#endif // INVAR_UNIVARIATE_HPP
