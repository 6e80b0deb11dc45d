#ifndef INVAR_LINEAR_SOLVE_HPP
#define INVAR_LINEAR_SOLVE_HPP

#include <optional>
#include <vector>

#include "rational.hpp"

namespace invar {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

// Solution set x = particular + span(null_basis) of A x = b.
struct AffineSolution {
    RationalVector particular;
    std::vector<RationalVector> null_basis;
};

// Exact Gauss-Jordan elimination. Returns nullopt when the system is
// inconsistent. `cols` is needed to describe a system with zero rows.
inline std::optional<AffineSolution> solve_rational_linear(RationalMatrix a, RationalVector b, std::size_t cols)
{
    const std::size_t rows = a.size();
    if (b.size() != rows) {
        throw invar_error("dimension mismatch: " + std::to_string(rows) + " rows but right-hand side of length " +
                          std::to_string(b.size()));
    }
    for (const auto &row : a) {
        if (row.size() != cols) {
            throw invar_error("dimension mismatch: row of length " + std::to_string(row.size()) + ", expected " +
                              std::to_string(cols));
        }
    }

    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) {
            ++p;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const Rational inv = Rational(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) {
            a[r][j] *= inv;
        }
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) {
                continue;
            }
            const Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) {
                if (a[r][j] != 0) {
                    a[i][j] -= f * a[r][j];
                }
            }
            b[i] -= f * b[r];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i) {
        if (b[i] != 0) {
            return std::nullopt;
        }
    }

    AffineSolution sol;
    sol.particular.assign(cols, Rational(0));
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        sol.particular[pivot_cols[i]] = b[i];
        is_pivot[pivot_cols[i]] = true;
    }
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        RationalVector v(cols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
            v[pivot_cols[i]] = -a[i][f];
        }
        sol.null_basis.push_back(std::move(v));
    }
    return sol;
}

inline std::optional<AffineSolution> solve_rational_linear(const RationalMatrix &a, const RationalVector &b)
{
    return solve_rational_linear(a, b, a.empty() ? 0 : a.front().size());
}

} // namespace invar

#endif // INVAR_LINEAR_SOLVE_HPP
