#ifndef INVAR_MATRIX_HPP
#define INVAR_MATRIX_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace invar {

// Dense row-major matrix of polynomials.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

    PolyMatrix(std::initializer_list<std::initializer_list<Polynomial>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                throw invar_error("ragged matrix rows");
            }
            entries_.insert(entries_.end(), r.begin(), r.end());
        }
    }

    static PolyMatrix identity(std::size_t n)
    {
        PolyMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Polynomial(1);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Polynomial &operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Polynomial &operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        for (std::size_t j = 0; j < cols_; ++j) {
            std::swap((*this)(a, j), (*this)(b, j));
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Polynomial> entries_;
};

// Fraction-free Bareiss elimination. Every division is exact by Sylvester's
// identity, so an inexact quotient means the input was corrupted.
inline Polynomial determinant(PolyMatrix m)
{
    if (m.rows() != m.cols()) {
        throw invar_error("non-square matrix");
    }
    const std::size_t n = m.rows();
    if (n == 0) {
        return Polynomial(1);
    }
    bool negate = false;
    Polynomial prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            // Prefer the sparsest nonzero pivot below.
            std::size_t best = n;
            for (std::size_t r = k + 1; r < n; ++r) {
                if (!m(r, k).is_zero() && (best == n || m(r, k).size() < m(best, k).size())) {
                    best = r;
                }
            }
            if (best == n) {
                return {};
            }
            m.swap_rows(k, best);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Polynomial t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = exact_divide(std::move(t), prev);
            }
            m(i, k) = Polynomial();
        }
        prev = m(k, k);
    }
    return negate ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

} // namespace invar

#endif // INVAR_MATRIX_HPP
