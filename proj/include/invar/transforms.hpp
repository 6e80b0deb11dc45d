#ifndef INVAR_TRANSFORMS_HPP
#define INVAR_TRANSFORMS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invariant_kernel.hpp"
#include "parse.hpp"
#include "univariate.hpp"

namespace invar {

// Finite prefix a_0..a_m of a rational sequence.
class Sequence {
public:
    explicit Sequence(std::vector<Rational> terms) : terms_(std::move(terms))
    {
        if (terms_.empty()) {
            throw invar_error("empty sequence");
        }
    }

    Sequence(std::initializer_list<long> terms)
    {
        for (long t : terms) {
            terms_.emplace_back(t);
        }
        if (terms_.empty()) {
            throw invar_error("empty sequence");
        }
    }

    std::size_t size() const { return terms_.size(); }
    const Rational &operator[](std::size_t i) const { return terms_[i]; }
    const std::vector<Rational> &terms() const { return terms_; }

    friend bool operator==(const Sequence &, const Sequence &) = default;

private:
    std::vector<Rational> terms_;
};

inline std::string to_string(const Sequence &s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i != 0) {
            out += ", ";
        }
        out += to_string(s[i]);
    }
    return out;
}

// Indexed family n -> f_n of polynomials defining a sequence transformation
// b_n = f_n(a_0, ..., a_m). Arity-2 families read the second input through the
// c-block. Components are generated on demand and memoised; copies share the
// memo, which is guarded by a mutex.
class TransformFamily {
public:
    using generator_type = std::function<Polynomial(unsigned)>;
    using need_type = std::function<unsigned(unsigned)>;

    TransformFamily(std::string name, unsigned arity, unsigned start, generator_type generator, need_type need)
        : state_(std::make_shared<state>())
    {
        if (arity != 1 && arity != 2) {
            throw invar_error("transform arity must be 1 or 2");
        }
        state_->name = std::move(name);
        state_->arity = arity;
        state_->start = start;
        state_->generator = std::move(generator);
        state_->need = std::move(need);
    }

    const std::string &name() const { return state_->name; }
    unsigned arity() const { return state_->arity; }
    unsigned start() const { return state_->start; }

    // Largest input index read by f_n.
    unsigned prefix_need(unsigned n) const { return state_->need(n); }

    Polynomial term(unsigned n) const
    {
        if (n < state_->start) {
            throw invar_error(name() + " is defined from n = " + std::to_string(state_->start));
        }
        {
            std::lock_guard<std::mutex> guard(state_->lock);
            auto it = state_->memo.find(n);
            if (it != state_->memo.end()) {
                return it->second;
            }
        }
        Polynomial p = state_->generator(n);
        std::lock_guard<std::mutex> guard(state_->lock);
        return state_->memo.emplace(n, std::move(p)).first->second;
    }

private:
    struct state {
        std::string name;
        unsigned arity = 1;
        unsigned start = 0;
        generator_type generator;
        need_type need;
        std::mutex lock;
        std::map<unsigned, Polynomial> memo;
    };
    std::shared_ptr<state> state_;
};

namespace detail {

inline Rational value_at(Var v, std::span<const Sequence> inputs)
{
    switch (v.block) {
    case Block::seq:
        return inputs[0][v.index];
    case Block::aux:
        return inputs[1][v.index];
    case Block::param:
        break;
    }
    throw invar_error("cannot evaluate: unbound parameter " + to_string(v));
}

} // namespace detail

// b_n = f_n(inputs) for n = start .. start + count - 1.
inline Sequence apply_transform(const TransformFamily &f, std::span<const Sequence> inputs, unsigned count)
{
    if (inputs.size() != f.arity()) {
        throw invar_error(f.name() + " takes " + std::to_string(f.arity()) + " input sequence(s), got " +
                          std::to_string(inputs.size()));
    }
    if (count == 0) {
        throw invar_error("term count must be positive");
    }
    const unsigned last = f.start() + count - 1;
    const std::size_t required = std::size_t(f.prefix_need(last)) + 1;
    for (const auto &s : inputs) {
        if (s.size() < required) {
            throw invar_error("sequence too short: " + f.name() + " needs " + std::to_string(required) +
                              " terms for " + std::to_string(count) + " output terms, got " +
                              std::to_string(s.size()));
        }
    }
    std::vector<Rational> out;
    out.reserve(count);
    for (unsigned n = f.start(); n <= last; ++n) {
        out.push_back(evaluate(f.term(n), [&](Var v) { return detail::value_at(v, inputs); }));
    }
    return Sequence(std::move(out));
}

inline Sequence apply_transform(const TransformFamily &f, const Sequence &input, unsigned count)
{
    return apply_transform(f, std::span<const Sequence>(&input, 1), count);
}

// ---------------------------------------------------------------------------
// Catalog

inline TransformFamily identity_family()
{
    return TransformFamily(
        "identity", 1, 0, [](unsigned n) { return Polynomial::x(n); }, [](unsigned n) { return n; });
}

// b_n = sum_i C(n,i) a_i mu^(n-i), built as exp(mu D) with D the basic
// Weitzenbock derivation. mu may be a rational or a parameter expression.
inline TransformFamily binomial_family(const Polynomial &mu)
{
    const Derivation d = basic_weitzenbock().scaled(mu);
    return TransformFamily(
        "binomial", 1, 0, [d](unsigned n) { return exp_apply(d, Polynomial::x(n)); },
        [](unsigned n) { return n; });
}

inline TransformFamily binomial_family(const Rational &mu)
{
    return binomial_family(Polynomial(mu));
}

inline TransformFamily hankel_family()
{
    return TransformFamily(
        "hankel", 1, 0, [](unsigned n) { return catalecticant(n); }, [](unsigned n) { return 2 * n; });
}

struct TriangularFamilies {
    TransformFamily psum;
    TransformFamily sum;
    TransformFamily diff;
};

// PSUM: a_0 + ... + a_n. SUM/DIFF: a_n +- a_{n-1}, with a_{-1} = 0.
inline TriangularFamilies triangular_families()
{
    auto need = [](unsigned n) { return n; };
    TransformFamily psum(
        "psum", 1, 0,
        [](unsigned n) {
            Polynomial p;
            for (unsigned i = 0; i <= n; ++i) {
                p += Polynomial::x(i);
            }
            return p;
        },
        need);
    TransformFamily sum(
        "sum", 1, 0,
        [](unsigned n) { return n == 0 ? Polynomial::x(0) : Polynomial::x(n) + Polynomial::x(n - 1); }, need);
    TransformFamily diff(
        "diff", 1, 0,
        [](unsigned n) { return n == 0 ? Polynomial::x(0) : Polynomial::x(n) - Polynomial::x(n - 1); }, need);
    return {psum, sum, diff};
}

// CAYLEY(A) = (b_{n+2}), b_n = z_n evaluated at the sequence; indexed from 2.
inline TransformFamily cayley_family()
{
    return TransformFamily(
        "cayley", 1, 2, [](unsigned n) { return cayley_generator(n); }, [](unsigned n) { return n; });
}

inline Polynomial transvectant_term(unsigned n, bool diagonal)
{
    Polynomial p;
    for (unsigned i = 0; i <= n; ++i) {
        Rational c(binomial(n, i));
        if (i % 2 == 1) {
            c = -c;
        }
        const Var other = diagonal ? x_var(n - i) : c_var(n - i);
        p.add_term(Monomial::power(x_var(i), 1) * Monomial::power(other, 1), c);
    }
    return p;
}

// b_n = sum_i (-1)^i C(n,i) a_i c_{n-i}.
inline TransformFamily transvectant_family()
{
    return TransformFamily(
        "transvectant", 2, 0, [](unsigned n) { return transvectant_term(n, false); },
        [](unsigned n) { return n; });
}

// The transvectant of a sequence with itself.
inline TransformFamily transvectant_diagonal_family()
{
    return TransformFamily(
        "transvectant-diagonal", 1, 0, [](unsigned n) { return transvectant_term(n, true); },
        [](unsigned n) { return n; });
}

// P_n(A) = sum_i C(n,i) a_i X^(n-i), with a_i drawn from `block`.
inline UnivariatePoly binary_form(unsigned n, Block block, const Rational &scale = 1)
{
    std::vector<Polynomial> coeffs;
    for (unsigned i = 0; i <= n; ++i) {
        coeffs.push_back(Polynomial::variable({block, i}) * (Rational(binomial(n, i)) * scale));
    }
    return UnivariatePoly(std::move(coeffs));
}

// b_n = Res_X(P_n(A), P_n(C)); the forms need degree >= 1, so n starts at 1.
inline TransformFamily resultant_family()
{
    return TransformFamily(
        "resultant", 2, 1,
        [](unsigned n) { return resultant(binary_form(n, Block::seq), binary_form(n, Block::aux)); },
        [](unsigned n) { return n; });
}

// b_n = disc(P_{n+2}(A) / (n+2)^(n+2)).
inline TransformFamily discriminant_family()
{
    return TransformFamily(
        "discriminant", 1, 0,
        [](unsigned n) {
            const unsigned d = n + 2;
            const Rational scale = Rational(1) / Rational(pow(Rational(d), d));
            return discriminant(binary_form(d, Block::seq, scale));
        },
        [](unsigned n) { return n + 2; });
}

// b_n = sum_{i=0}^{2n} (-1)^i a_i a_{2n-i}.
inline TransformFamily alt_convolution_family()
{
    return TransformFamily(
        "altconv", 1, 0,
        [](unsigned n) {
            Polynomial p;
            for (unsigned i = 0; i <= 2 * n; ++i) {
                p.add_term(Monomial::power(x_var(i), 1) * Monomial::power(x_var(2 * n - i), 1),
                           Rational(i % 2 == 0 ? 1 : -1));
            }
            return p;
        },
        [](unsigned n) { return 2 * n; });
}

// Family f_n = p for every n.
inline TransformFamily constant_family(std::string name, const Polynomial &p)
{
    const auto need = static_cast<unsigned>(std::max(0L, p.max_index(Block::seq)));
    return TransformFamily(
        std::move(name), 1, 0, [p](unsigned) { return p; }, [need](unsigned) { return need; });
}

// (F o G)(A) = F(G(A)): f_n with every input variable replaced by the
// corresponding component of G. A two-input F gets G on both inputs.
inline TransformFamily compose_families(const TransformFamily &f, const TransformFamily &g)
{
    if (g.arity() != 1 || g.start() != 0) {
        throw invar_error("inner transform of a composition must take one sequence and start at n = 0");
    }
    auto need = [f, g](unsigned n) {
        unsigned m = 0;
        for (unsigned i = 0; i <= f.prefix_need(n); ++i) {
            m = std::max(m, g.prefix_need(i));
        }
        return m;
    };
    auto gen = [f, g](unsigned n) {
        Polynomial fn = f.term(n);
        std::map<Var, Polynomial> images;
        for (const auto &[m, c] : fn.terms()) {
            for (const auto &[v, e] : m.factors()) {
                if (v.block == Block::seq && !images.count(v)) {
                    images.emplace(v, g.term(v.index));
                } else if (v.block == Block::aux && !images.count(v)) {
                    images.emplace(v, to_aux_block(g.term(v.index)));
                }
            }
        }
        return substitute(fn, images);
    };
    return TransformFamily(f.name() + "." + g.name(), f.arity(), f.start(), gen, need);
}

// D-derivative of a transformation: n -> D(f_n).
inline TransformFamily d_derivative_of_family(const Derivation &d, const TransformFamily &f)
{
    if (f.arity() != 1) {
        throw invar_error("D-derivative is defined for one-sequence transforms");
    }
    return TransformFamily(
        "D." + f.name(), 1, f.start(), [d, f](unsigned n) { return apply(d, f.term(n)); },
        [f](unsigned n) { return f.prefix_need(n); });
}

// n -> Psi(f_n).
inline TransformFamily push_family(const LinearChangeOfBasis &psi, const TransformFamily &f, std::string name)
{
    return TransformFamily(
        std::move(name), 1, f.start(), [psi, f](unsigned n) { return push_through(psi, f.term(n)); },
        [f](unsigned n) { return f.prefix_need(n); });
}

// Parses a CLI-stable transform identifier, optionally with parameters:
// "hankel", "binomial:mu=1/2", "binomial:mu=mu".
inline TransformFamily family_from_spec(std::string_view spec)
{
    std::string name(spec.substr(0, spec.find(':')));
    std::map<std::string, std::string> params;
    if (auto colon = spec.find(':'); colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string_view kv = rest.substr(0, comma);
            auto eq = kv.find('=');
            if (eq == std::string_view::npos) {
                throw invar_error("malformed transform parameter '" + std::string(kv) + "'");
            }
            params[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }
    auto reject_params = [&] {
        if (!params.empty()) {
            throw invar_error("transform '" + name + "' takes no parameters");
        }
    };

    if (name == "binomial") {
        Polynomial mu(1);
        for (const auto &[k, v] : params) {
            if (k != "mu") {
                throw invar_error("unknown binomial parameter '" + k + "'");
            }
            mu = parse_poly(v);
        }
        return binomial_family(mu);
    }
    reject_params();
    const auto tri = triangular_families();
    if (name == "hankel") return hankel_family();
    if (name == "psum") return tri.psum;
    if (name == "sum") return tri.sum;
    if (name == "diff") return tri.diff;
    if (name == "cayley") return cayley_family();
    if (name == "transvectant") return transvectant_family();
    if (name == "transvectant-diagonal") return transvectant_diagonal_family();
    if (name == "resultant") return resultant_family();
    if (name == "discriminant") return discriminant_family();
    if (name == "altconv") return alt_convolution_family();
    if (name == "identity") return identity_family();
    throw invar_error("unknown transform '" + name + "'");
}

// ---------------------------------------------------------------------------
// Invariance checking

enum class InvarianceMode { symbolic, numeric };
enum class Verdict { invariant, not_invariant, inconclusive };

inline std::string to_string(InvarianceMode m) { return m == InvarianceMode::symbolic ? "symbolic" : "numeric"; }

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::invariant:
        return "invariant";
    case Verdict::not_invariant:
        return "not-invariant";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return {};
}

struct SymbolicWitness {
    unsigned n = 0;
    Polynomial residual;
};

struct NumericWitness {
    std::vector<Sequence> inputs;
    unsigned n = 0;
    Rational original;    // G(A)_n
    Rational transformed; // G(F(A))_n
};

struct InvarianceReport {
    InvarianceMode mode = InvarianceMode::symbolic;
    Verdict verdict = Verdict::inconclusive;
    unsigned upto = 0;
    unsigned samples = 0;
    std::vector<SymbolicWitness> symbolic_witnesses;
    std::vector<NumericWitness> numeric_witnesses;
};

// G is exp(D)-invariant iff D(g_n) = 0 for all n. Conclusive only for the
// checked range start..N.
inline InvarianceReport check_invariance_symbolic(const Derivation &d, const TransformFamily &g, unsigned upto)
{
    InvarianceReport r;
    r.mode = InvarianceMode::symbolic;
    r.upto = upto;
    if (upto < g.start()) {
        return r;
    }
    for (unsigned n = g.start(); n <= upto; ++n) {
        const Polynomial gn = g.term(n);
        Polynomial residual = g.arity() == 1 ? apply(d, gn) : apply_joint(d, gn);
        if (!residual.is_zero()) {
            r.symbolic_witnesses.push_back({n, std::move(residual)});
        }
    }
    r.verdict = r.symbolic_witnesses.empty() ? Verdict::invariant : Verdict::not_invariant;
    return r;
}

struct SamplingOptions {
    long low = -9;
    long high = 9;
};

inline constexpr std::uint64_t default_seed = 20111221;

// Deterministic pseudo-random integer sequence for sample `index`; the
// generator is seeded from (seed, index) so samples are order-independent.
inline Sequence random_sequence(std::uint64_t seed, std::uint64_t index, std::size_t length,
                                const SamplingOptions &opts = {})
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<long> dist(opts.low, opts.high);
    std::vector<Rational> terms;
    terms.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        terms.emplace_back(dist(rng));
    }
    return Sequence(std::move(terms));
}

// Exact comparison of G(F(A)) with G(A) on pseudo-random integer inputs, for
// components start..N of G. F acts on every input of G.
inline InvarianceReport check_invariance_numeric(const TransformFamily &target, const TransformFamily &candidate,
                                                 unsigned samples, unsigned upto,
                                                 std::uint64_t seed = default_seed, const SamplingOptions &opts = {})
{
    if (target.arity() != 1 || target.start() != 0) {
        throw invar_error("target transform must take one sequence and start at n = 0");
    }
    InvarianceReport r;
    r.mode = InvarianceMode::numeric;
    r.upto = upto;
    r.samples = samples;
    if (upto < candidate.start() || samples == 0) {
        return r;
    }
    const unsigned count = upto - candidate.start() + 1;
    unsigned g_need = 0;
    for (unsigned n = candidate.start(); n <= upto; ++n) {
        g_need = std::max(g_need, candidate.prefix_need(n));
    }
    const unsigned g_len = g_need + 1;
    unsigned f_need = 0;
    for (unsigned i = 0; i < g_len; ++i) {
        f_need = std::max(f_need, target.prefix_need(i));
    }
    const std::size_t input_len = std::max<std::size_t>(f_need + 1, g_len);

    for (unsigned s = 0; s < samples; ++s) {
        std::vector<Sequence> inputs;
        std::vector<Sequence> moved;
        for (unsigned k = 0; k < candidate.arity(); ++k) {
            inputs.push_back(random_sequence(seed, std::uint64_t(s) * candidate.arity() + k, input_len, opts));
            moved.push_back(apply_transform(target, inputs.back(), g_len));
        }
        const Sequence before = apply_transform(candidate, inputs, count);
        const Sequence after = apply_transform(candidate, moved, count);
        for (unsigned i = 0; i < count; ++i) {
            if (before[i] != after[i]) {
                r.numeric_witnesses.push_back({inputs, candidate.start() + i, before[i], after[i]});
                r.verdict = Verdict::not_invariant;
                return r;
            }
        }
    }
    r.verdict = Verdict::invariant;
    return r;
}

// ---------------------------------------------------------------------------
// Problem 1 / Problem 2 pipelines

struct Problem1Solution {
    Derivation derivation;
    VarIndex bound = 0;
    LinearChangeOfBasis psi = LinearChangeOfBasis::identity(0);
    std::vector<TransformFamily> families;
};

// The polynomial map phi(x_n) = f_n of a one-sequence transform, on x_0..x_bound.
inline PolyEndomorphism family_endomorphism(const TransformFamily &f, VarIndex bound)
{
    if (f.arity() != 1 || f.start() != 0) {
        throw invar_error("not in Theorem 4 form: " + f.name() + " must take one sequence and start at n = 0");
    }
    std::map<VarIndex, Polynomial> images;
    for (VarIndex n = 0; n <= bound; ++n) {
        images.emplace(n, f.term(n));
    }
    return PolyEndomorphism(std::move(images));
}

// For F of the form b_n = a_n + sum_{i<n} alpha_i a_i: D = log F, Psi
// intertwining the basic Weitzenbock derivation with D, and the F-invariant
// families Psi(x_0), Psi(z_k), Psi(h_n). D and Psi are computed up to x_{2N}
// so the Hankel family is available for n <= N.
inline Problem1Solution solve_problem1(const TransformFamily &f, unsigned upto)
{
    Problem1Solution sol;
    sol.bound = 2 * upto;
    sol.derivation = log_endomorphism(family_endomorphism(f, sol.bound), sol.bound);

    bool zero = true;
    for (VarIndex n = 0; n <= sol.bound && zero; ++n) {
        zero = sol.derivation.image(n).is_zero();
    }
    // F = identity: every family is invariant and no change of basis can
    // intertwine with D = 0, so the basic families are returned unchanged.
    sol.psi = zero ? LinearChangeOfBasis::identity(sol.bound) : intertwining_solve(sol.derivation, sol.bound);

    sol.families.push_back(constant_family("psi_x0", sol.psi.image(0)));
    sol.families.push_back(push_family(sol.psi, cayley_family(), "psi_cayley"));
    sol.families.push_back(push_family(sol.psi, hankel_family(), "psi_hankel"));
    return sol;
}

struct Problem2Solution {
    Derivation derivation;
    PolyEndomorphism exponential;
};

// Derivations D (triangular-linear up to the ansatz bound) with D(g_n) = 0 for
// start <= n <= N, each paired with exp(D): G is exp(D)-invariant.
inline std::vector<Problem2Solution> solve_problem2(const TransformFamily &g, unsigned upto,
                                                    std::optional<VarIndex> ansatz_bound = std::nullopt)
{
    if (g.arity() != 1) {
        throw invar_error("Problem 2 is defined for one-sequence transforms");
    }
    std::vector<Polynomial> family;
    unsigned need = 0;
    for (unsigned n = g.start(); n <= upto; ++n) {
        family.push_back(g.term(n));
        need = std::max(need, g.prefix_need(n));
    }
    const DerivationAnsatz ansatz{ansatz_bound.value_or(need)};
    std::vector<Problem2Solution> out;
    for (auto &d : problem2_find_derivations(family, ansatz)) {
        out.push_back({d, exp_endomorphism(d, ansatz.bound)});
    }
    return out;
}

// Values g_n(1, 1, 1, ...) for start <= n <= N. A diagnostic: components that
// do not vanish are reported, not rejected.
struct OnesEntry {
    unsigned n = 0;
    Rational value;
    bool vanishes() const { return value == 0; }
};

struct OnesReport {
    std::vector<OnesEntry> entries;

    bool all_vanish() const
    {
        for (const auto &e : entries) {
            if (!e.vanishes()) {
                return false;
            }
        }
        return true;
    }
};

inline OnesReport ones_vanishing_check(const TransformFamily &g, unsigned upto)
{
    if (g.arity() != 1) {
        throw invar_error("ones check is defined for one-sequence transforms");
    }
    OnesReport r;
    for (unsigned n = g.start(); n <= upto; ++n) {
        r.entries.push_back({n, evaluate(g.term(n), [](Var v) -> Rational {
                                 if (v.block == Block::param) {
                                     throw invar_error("cannot evaluate: unbound parameter " + to_string(v));
                                 }
                                 return 1;
                             })});
    }
    return r;
}

} // namespace invar

#endif // INVAR_TRANSFORMS_HPP
