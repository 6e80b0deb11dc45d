#ifndef INVAR_DERIVATIONS_HPP
#define INVAR_DERIVATIONS_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "polynomial.hpp"

namespace invar {

// Derivation of Q[x_0, x_1, ...], determined by the images D(x_i).
//
// A derivation is either unbounded (an image rule defined for every index, as
// for the basic Weitzenbock derivation) or bounded by a support index N: images
// of x_0..x_N are declared (unlisted ones are declared zero) and asking for
// D(x_i) with i > N is an error, never a silent zero. Parameters such as mu and
// the second-sequence block c_i are constants for D.
class Derivation {
public:
    using rule_type = std::function<Polynomial(VarIndex)>;

    // The zero derivation, defined everywhere.
    Derivation() = default;

    static Derivation from_rule(rule_type rule, std::optional<VarIndex> bound = std::nullopt)
    {
        Derivation d;
        d.rule_ = std::make_shared<const rule_type>(std::move(rule));
        d.bound_ = bound;
        return d;
    }

    static Derivation from_images(std::map<VarIndex, Polynomial> images, VarIndex bound)
    {
        for (const auto &[i, p] : images) {
            if (i > bound) {
                throw invar_error("image for x" + std::to_string(i) + " exceeds declared bound " +
                                  std::to_string(bound));
            }
        }
        auto table = std::make_shared<const std::map<VarIndex, Polynomial>>(std::move(images));
        return from_rule(
            [table](VarIndex i) {
                auto it = table->find(i);
                return it == table->end() ? Polynomial() : it->second;
            },
            bound);
    }

    const std::optional<VarIndex> &bound() const { return bound_; }

    Polynomial image(VarIndex i) const
    {
        if (bound_ && i > *bound_) {
            throw invar_error("x" + std::to_string(i) + " lies outside the derivation support (bound " +
                              std::to_string(*bound_) + ")");
        }
        return rule_ ? (*rule_)(i) : Polynomial();
    }

    std::map<VarIndex, Polynomial> images(VarIndex upto) const
    {
        std::map<VarIndex, Polynomial> out;
        for (VarIndex i = 0; i <= upto; ++i) {
            out.emplace(i, image(i));
        }
        return out;
    }

    // c * D, for c constant with respect to D (a rational or a parameter).
    Derivation scaled(const Polynomial &c) const
    {
        if (c.involves(Block::seq) || c.involves(Block::aux)) {
            throw invar_error("scaling factor must not involve sequence variables");
        }
        auto base = *this;
        return from_rule([base, c](VarIndex i) { return c * base.image(i); }, bound_);
    }

private:
    std::shared_ptr<const rule_type> rule_;
    std::optional<VarIndex> bound_;
};

// D(f) = sum_i D(x_i) * df/dx_i.
inline Polynomial apply(const Derivation &d, const Polynomial &f)
{
    std::map<VarIndex, bool> seen;
    Polynomial r;
    for (const auto &[m, c] : f.terms()) {
        for (const auto &[v, e] : m.factors()) {
            if (v.block == Block::seq) {
                seen[v.index] = true;
            }
        }
    }
    for (const auto &[i, unused] : seen) {
        Polynomial img = d.image(i);
        if (!img.is_zero()) {
            r += img * partial_derivative(f, x_var(i));
        }
    }
    return r;
}

// Moves an expression in the x-block to the c-block.
inline Polynomial to_aux_block(const Polynomial &f)
{
    std::map<Var, Polynomial> images;
    for (const auto &[m, c] : f.terms()) {
        for (const auto &[v, e] : m.factors()) {
            if (v.block == Block::seq) {
                images.emplace(v, Polynomial::c(v.index));
            }
        }
    }
    return substitute(f, images);
}

// D acting identically on both sequence blocks: D(x_i) as given and
// D(c_i) = the same image written in c-variables. This is the action of a
// transformation applied to both arguments of a two-sequence transform.
inline Polynomial apply_joint(const Derivation &d, const Polynomial &f)
{
    Polynomial r = apply(d, f);
    std::map<VarIndex, bool> seen;
    for (const auto &[m, c] : f.terms()) {
        for (const auto &[v, e] : m.factors()) {
            if (v.block == Block::aux) {
                seen[v.index] = true;
            }
        }
    }
    for (const auto &[i, unused] : seen) {
        Polynomial img = d.image(i);
        if (!img.is_zero()) {
            r += to_aux_block(img) * partial_derivative(f, c_var(i));
        }
    }
    return r;
}

// The basic Weitzenbock derivation: x_0 -> 0, x_i -> i * x_{i-1}.
inline Derivation basic_weitzenbock()
{
    return Derivation::from_rule([](VarIndex i) {
        return i == 0 ? Polynomial() : Polynomial::x(i - 1) * Rational(static_cast<unsigned long>(i));
    });
}

// x_0 -> 0, x_i -> x_{i-1}.
inline Derivation shift_derivation()
{
    return Derivation::from_rule([](VarIndex i) { return i == 0 ? Polynomial() : Polynomial::x(i - 1); });
}

inline unsigned nilpotency_index(const Derivation &d, const Polynomial &f, unsigned cap)
{
    if (cap < 1) {
        throw invar_error("nilpotency cap must be at least 1");
    }
    Polynomial g = f;
    for (unsigned r = 0;; ++r) {
        if (g.is_zero()) {
            return r;
        }
        if (r == cap) {
            break;
        }
        g = apply(d, g);
    }
    throw invar_error("nilpotency cap exceeded");
}

// exp(D)(f) = sum_k D^k(f) / k!, which terminates when D is locally nilpotent
// on f.
inline Polynomial exp_apply(const Derivation &d, const Polynomial &f, unsigned cap = 256)
{
    Polynomial sum;
    Polynomial g = f;
    Rational inv_fact = 1;
    for (unsigned k = 0; k <= cap; ++k) {
        if (g.is_zero()) {
            return sum;
        }
        sum += g * inv_fact;
        g = apply(d, g);
        inv_fact /= (k + 1);
    }
    throw invar_error("nilpotency cap exceeded: exponential series does not terminate");
}

// Algebra endomorphism of Q[x_0, x_1, ...] given by variable images;
// unlisted variables are fixed.
class PolyEndomorphism {
public:
    PolyEndomorphism() = default;
    explicit PolyEndomorphism(std::map<VarIndex, Polynomial> images) : images_(std::move(images)) {}

    Polynomial image(VarIndex i) const
    {
        auto it = images_.find(i);
        return it == images_.end() ? Polynomial::x(i) : it->second;
    }

    const std::map<VarIndex, Polynomial> &images() const { return images_; }

    Polynomial operator()(const Polynomial &f) const { return substitute(f, images_); }

    // Same map applied to the c-block as well; used for two-sequence transforms.
    Polynomial apply_joint(const Polynomial &f) const
    {
        std::map<Var, Polynomial> all;
        for (const auto &[i, p] : images_) {
            all.emplace(x_var(i), p);
            all.emplace(c_var(i), to_aux_block(p));
        }
        return substitute(f, all);
    }

private:
    std::map<VarIndex, Polynomial> images_;
};

// (phi o psi)(x_i) = phi(x_i) with psi substituted.
inline PolyEndomorphism compose_endo(const PolyEndomorphism &phi, const PolyEndomorphism &psi)
{
    std::map<VarIndex, Polynomial> out;
    for (const auto &[i, p] : phi.images()) {
        out.emplace(i, psi(p));
    }
    for (const auto &[i, p] : psi.images()) {
        if (!out.count(i)) {
            out.emplace(i, p);
        }
    }
    return PolyEndomorphism(std::move(out));
}

// exp(D) restricted to x_0..x_upto.
inline PolyEndomorphism exp_endomorphism(const Derivation &d, VarIndex upto, unsigned cap = 256)
{
    std::map<VarIndex, Polynomial> images;
    for (VarIndex i = 0; i <= upto; ++i) {
        images.emplace(i, exp_apply(d, Polynomial::x(i), cap));
    }
    return PolyEndomorphism(std::move(images));
}

// If f = sum_k coef_k * x_k with every coef_k free of sequence and c-block
// variables, returns those coefficients.
inline std::optional<std::map<VarIndex, Polynomial>> linear_form(const Polynomial &f)
{
    std::map<VarIndex, Polynomial> out;
    for (const auto &[m, c] : f.terms()) {
        std::optional<VarIndex> seq;
        Monomial rest;
        for (const auto &[v, e] : m.factors()) {
            if (v.block == Block::aux) {
                return std::nullopt;
            }
            if (v.block == Block::seq) {
                if (seq || e != 1) {
                    return std::nullopt;
                }
                seq = v.index;
            } else {
                rest = rest * Monomial::power(v, e);
            }
        }
        if (!seq) {
            return std::nullopt;
        }
        out[*seq] += Polynomial(rest, c);
    }
    return out;
}

// Logarithm of a unipotent triangular map phi(x_n) = x_n + sum_{i<n} alpha_i x_i:
// D(f) = sum_{i>=1} (-1)^(i+1)/i E^i(f) with E = phi - 1. On x_n the series
// stops at i = n because E lowers the top index by at least one.
inline Derivation log_endomorphism(const PolyEndomorphism &phi, VarIndex bound)
{
    for (VarIndex n = 0; n <= bound; ++n) {
        Polynomial tail = phi.image(n) - Polynomial::x(n);
        if (tail.is_zero()) {
            continue;
        }
        auto lf = linear_form(tail);
        if (!lf || lf->rbegin()->first >= n) {
            throw invar_error("not in Theorem 4 form: image of x" + std::to_string(n) +
                              " must be x" + std::to_string(n) + " plus a linear form in lower variables");
        }
    }
    auto shift = [&phi](const Polynomial &f) { return phi(f) - f; };

    std::map<VarIndex, Polynomial> images;
    for (VarIndex n = 1; n <= bound; ++n) {
        Polynomial e = Polynomial::x(n);
        Polynomial d;
        for (VarIndex i = 1; i <= n; ++i) {
            e = shift(e);
            if (e.is_zero()) {
                break;
            }
            d += e * make_rational(i % 2 == 1 ? 1 : -1, static_cast<long>(i));
        }
        if (!d.is_zero()) {
            images.emplace(n, std::move(d));
        }
    }
    return Derivation::from_images(std::move(images), bound);
}

} // namespace invar

#endif // INVAR_DERIVATIONS_HPP
