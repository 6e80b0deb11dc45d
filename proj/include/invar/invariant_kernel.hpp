#ifndef INVAR_INVARIANT_KERNEL_HPP
#define INVAR_INVARIANT_KERNEL_HPP

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "derivations.hpp"
#include "linear_solve.hpp"
#include "matrix.hpp"

namespace invar {

// Cayley's generator of ker D for the basic Weitzenbock derivation:
//   z_k = sum_{i=0}^{k-2} (-1)^i C(k,i) x_{k-i} x_1^i x_0^{k-i-1} + (k-1)(-1)^{k+1} x_1^k
inline Polynomial cayley_generator(unsigned k)
{
    if (k < 2) {
        throw invar_error("Cayley generators start at k = 2, got k = " + std::to_string(k));
    }
    Polynomial z;
    for (unsigned i = 0; i + 2 <= k; ++i) {
        Monomial m = Monomial::power(x_var(k - i), 1) * Monomial::power(x_var(1), i) *
                     Monomial::power(x_var(0), k - i - 1);
        Rational c(binomial(k, i));
        z.add_term(m, i % 2 == 0 ? c : Rational(-c));
    }
    const long sign = (k + 1) % 2 == 0 ? 1 : -1;
    z.add_term(Monomial::power(x_var(1), k), Rational(sign * static_cast<long>(k - 1)));
    return z;
}

// The (n+1)x(n+1) Hankel matrix [x_{i+j}].
inline PolyMatrix hankel_matrix(unsigned n)
{
    PolyMatrix m(n + 1, n + 1);
    for (unsigned i = 0; i <= n; ++i) {
        for (unsigned j = 0; j <= n; ++j) {
            m(i, j) = Polynomial::x(i + j);
        }
    }
    return m;
}

// Catalecticant h_n = det[x_{i+j}], 0 <= i, j <= n.
inline Polynomial catalecticant(unsigned n)
{
    return determinant(hankel_matrix(n));
}

namespace detail {

struct stirling_table {
    std::mutex lock;
    std::vector<std::vector<Integer>> rows{{Integer(1)}};
};

inline stirling_table &stirling_memo()
{
    static stirling_table t;
    return t;
}

} // namespace detail

// Stirling numbers of the second kind, S(n,k) = k S(n-1,k) + S(n-1,k-1).
inline Integer stirling2(unsigned n, unsigned k)
{
    if (k > n) {
        return 0;
    }
    auto &memo = detail::stirling_memo();
    std::lock_guard<std::mutex> guard(memo.lock);
    auto &rows = memo.rows;
    while (rows.size() <= n) {
        const auto &prev = rows.back();
        const std::size_t m = rows.size();
        std::vector<Integer> row(m + 1, Integer(0));
        for (std::size_t j = 1; j <= m; ++j) {
            const Integer above = j < prev.size() ? prev[j] : Integer(0);
            row[j] = Integer(j) * above + prev[j - 1];
        }
        rows.push_back(std::move(row));
    }
    return rows[n][k];
}

// Psi(x_n) = sum_{i<=n} c_{n,i} x_i on the span of x_0..x_N, lower triangular
// with nonzero diagonal and Psi(x_0) = x_0.
class LinearChangeOfBasis {
public:
    explicit LinearChangeOfBasis(std::vector<RationalVector> rows) : rows_(std::move(rows))
    {
        if (rows_.empty()) {
            throw invar_error("change of basis needs at least x0");
        }
        for (std::size_t n = 0; n < rows_.size(); ++n) {
            if (rows_[n].size() != n + 1) {
                throw invar_error("change of basis row " + std::to_string(n) + " must have " +
                                  std::to_string(n + 1) + " entries");
            }
            if (rows_[n][n] == 0) {
                throw invar_error("change of basis is singular at x" + std::to_string(n));
            }
        }
        if (rows_[0][0] != 1) {
            throw invar_error("change of basis must fix x0");
        }
    }

    static LinearChangeOfBasis identity(VarIndex bound)
    {
        std::vector<RationalVector> rows;
        for (VarIndex n = 0; n <= bound; ++n) {
            RationalVector r(n + 1, Rational(0));
            r[n] = 1;
            rows.push_back(std::move(r));
        }
        return LinearChangeOfBasis(std::move(rows));
    }

    VarIndex bound() const { return static_cast<VarIndex>(rows_.size() - 1); }
    const Rational &coeff(VarIndex n, VarIndex i) const { return rows_.at(n).at(i); }
    const std::vector<RationalVector> &rows() const { return rows_; }

    Polynomial image(VarIndex n) const
    {
        Polynomial p;
        for (VarIndex i = 0; i <= n; ++i) {
            p.add_term(Monomial::power(x_var(i), 1), rows_.at(n)[i]);
        }
        return p;
    }

    PolyEndomorphism as_endomorphism() const
    {
        std::map<VarIndex, Polynomial> images;
        for (VarIndex n = 0; n <= bound(); ++n) {
            images.emplace(n, image(n));
        }
        return PolyEndomorphism(std::move(images));
    }

private:
    std::vector<RationalVector> rows_;
};

// Rational coefficient table d_{n,k} of a triangular-linear derivation
// D(x_n) = sum_{k<n} d_{n,k} x_k on x_0..x_N.
inline std::vector<RationalVector> triangular_linear_table(const Derivation &d, VarIndex bound)
{
    std::vector<RationalVector> table;
    for (VarIndex n = 0; n <= bound; ++n) {
        RationalVector row(n, Rational(0));
        Polynomial img = d.image(n);
        if (!img.is_zero()) {
            auto lf = linear_form(img);
            if (!lf || lf->rbegin()->first >= n) {
                throw invar_error("derivation is not triangular-linear at x" + std::to_string(n));
            }
            for (const auto &[k, c] : *lf) {
                if (!c.is_constant()) {
                    throw invar_error("derivation coefficients must be rational at x" + std::to_string(n));
                }
                row[k] = c.constant_term();
            }
        }
        table.push_back(std::move(row));
    }
    return table;
}

// Solves D(Psi(x_n)) = n Psi(x_{n-1}) for n = 1..N with Psi(x_0) = x_0 and
// c_{n,0} = 0 for n >= 1. Each step is an n x n triangular system in
// c_{n,1..n}, solved exactly.
inline LinearChangeOfBasis intertwining_solve(const Derivation &d, VarIndex bound)
{
    const auto table = triangular_linear_table(d, bound);
    for (VarIndex j = 1; j <= bound; ++j) {
        if (table[j][j - 1] == 0) {
            throw invar_error("intertwining system singular: D(x" + std::to_string(j) + ") has no x" +
                              std::to_string(j - 1) + " term");
        }
    }

    std::vector<RationalVector> rows{RationalVector{Rational(1)}};
    for (VarIndex n = 1; n <= bound; ++n) {
        // Unknown u = i - 1 for c_{n,i}; equation k matches the x_k coefficient.
        RationalMatrix a(n, RationalVector(n, Rational(0)));
        RationalVector b(n, Rational(0));
        for (VarIndex k = 0; k < n; ++k) {
            for (VarIndex i = k + 1; i <= n; ++i) {
                a[k][i - 1] = table[i][k];
            }
            b[k] = Rational(n) * rows[n - 1][k];
        }
        auto sol = solve_rational_linear(a, b, n);
        if (!sol || !sol->null_basis.empty()) {
            throw invar_error("intertwining system singular at n = " + std::to_string(n));
        }
        RationalVector row(n + 1, Rational(0));
        for (VarIndex i = 1; i <= n; ++i) {
            row[i] = sol->particular[i - 1];
        }
        rows.push_back(std::move(row));
    }
    return LinearChangeOfBasis(std::move(rows));
}

inline Polynomial push_through(const LinearChangeOfBasis &psi, const Polynomial &f)
{
    const long top = f.max_index(Block::seq);
    if (top > static_cast<long>(psi.bound())) {
        throw invar_error("x" + std::to_string(top) + " is beyond the change-of-basis bound " +
                          std::to_string(psi.bound()));
    }
    return psi.as_endomorphism()(f);
}

inline bool kernel_membership(const Derivation &d, const Polynomial &f)
{
    return apply(d, f).is_zero();
}

struct NamedPolynomial {
    std::string name;
    Polynomial poly;
};

// Generators Psi(x_0), Psi(z_2), ..., Psi(z_N) of ker D after localising at
// Psi(x_0). Rewriting an arbitrary kernel element over them is not provided.
struct KernelPresentation {
    Derivation derivation;
    VarIndex bound = 0;
    LinearChangeOfBasis psi = LinearChangeOfBasis::identity(0);
    std::vector<NamedPolynomial> generators;
};

inline KernelPresentation kernel_presentation(const Derivation &d, VarIndex bound)
{
    KernelPresentation kp;
    kp.derivation = d;
    kp.bound = bound;
    kp.psi = intertwining_solve(d, bound);
    kp.generators.push_back({"psi_x0", kp.psi.image(0)});
    for (unsigned k = 2; k <= bound; ++k) {
        kp.generators.push_back({"psi_z" + std::to_string(k), push_through(kp.psi, cayley_generator(k))});
    }
    for (const auto &g : kp.generators) {
        if (!kernel_membership(d, g.poly)) {
            throw invar_error("internal error: generator " + g.name + " is not in the kernel");
        }
    }
    return kp;
}

// Unknowns d_{n,k} (0 <= k < n <= N) of D(x_n) = sum_k d_{n,k} x_k; D(x_0) = 0.
struct DerivationAnsatz {
    VarIndex bound = 0;

    std::size_t unknown_count() const { return std::size_t(bound) * (bound + 1) / 2; }
    static std::size_t index(VarIndex n, VarIndex k) { return std::size_t(n) * (n - 1) / 2 + k; }

    Derivation instantiate(const RationalVector &values) const
    {
        std::map<VarIndex, Polynomial> images;
        for (VarIndex n = 1; n <= bound; ++n) {
            Polynomial p;
            for (VarIndex k = 0; k < n; ++k) {
                p.add_term(Monomial::power(x_var(k), 1), values.at(index(n, k)));
            }
            if (!p.is_zero()) {
                images.emplace(n, std::move(p));
            }
        }
        return Derivation::from_images(std::move(images), bound);
    }
};

// Indefinite coefficients: D(f) = 0 for every f in the family is a homogeneous
// linear system in the d_{n,k}; its null space basis is returned as
// derivations. An empty result means only D = 0 works.
inline std::vector<Derivation> problem2_find_derivations(const std::vector<Polynomial> &family,
                                                         const DerivationAnsatz &ansatz)
{
    if (family.empty()) {
        throw invar_error("family must be nonempty");
    }
    const VarIndex bound = ansatz.bound;
    for (const auto &f : family) {
        if (f.max_index(Block::seq) > static_cast<long>(bound)) {
            throw invar_error("family member uses x" + std::to_string(f.max_index(Block::seq)) +
                              " beyond ansatz bound " + std::to_string(bound));
        }
    }
    const std::size_t unknowns = ansatz.unknown_count();

    // One equation per (family member, monomial) pair.
    RationalMatrix rows;
    for (const auto &f : family) {
        std::map<Monomial, RationalVector, MonomialGreater> eqs;
        for (VarIndex n = 1; n <= bound; ++n) {
            Polynomial df = partial_derivative(f, x_var(n));
            if (df.is_zero()) {
                continue;
            }
            for (VarIndex k = 0; k < n; ++k) {
                Polynomial contrib = df * Polynomial::x(k);
                for (const auto &[m, c] : contrib.terms()) {
                    auto [it, fresh] = eqs.try_emplace(m, RationalVector(unknowns, Rational(0)));
                    it->second[DerivationAnsatz::index(n, k)] += c;
                }
            }
        }
        for (auto &[m, row] : eqs) {
            rows.push_back(std::move(row));
        }
    }
    auto sol = solve_rational_linear(rows, RationalVector(rows.size(), Rational(0)), unknowns);
    std::vector<Derivation> out;
    for (const auto &v : sol->null_basis) {
        out.push_back(ansatz.instantiate(v));
    }
    for (const auto &d : out) {
        for (const auto &f : family) {
            if (!kernel_membership(d, f)) {
                throw invar_error("internal error: solution derivation does not annihilate the family");
            }
        }
    }
    return out;
}

// Whether `target` is a rational linear combination of `basis`, comparing
// the triangular-linear coefficient tables on x_0..x_bound.
inline bool span_contains(const std::vector<Derivation> &basis, const Derivation &target, VarIndex bound)
{
    auto flatten = [bound](const Derivation &d) {
        RationalVector v;
        for (const auto &row : triangular_linear_table(d, bound)) {
            v.insert(v.end(), row.begin(), row.end());
        }
        return v;
    };
    const RationalVector b = flatten(target);
    RationalMatrix a(b.size(), RationalVector(basis.size(), Rational(0)));
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const RationalVector col = flatten(basis[j]);
        for (std::size_t i = 0; i < col.size(); ++i) {
            a[i][j] = col[i];
        }
    }
    return solve_rational_linear(a, b, basis.size()).has_value();
}

} // namespace invar

#endif // INVAR_INVARIANT_KERNEL_HPP
