#ifndef INVAR_JSON_IO_HPP
#define INVAR_JSON_IO_HPP

#include <json.hpp>

#include "transforms.hpp"

namespace invar {

using json = nlohmann::ordered_json;

// {"images": {"x0": "<poly>", ...}} for x_0..x_upto.
inline json images_to_json(const std::map<VarIndex, Polynomial> &images)
{
    json obj = json::object();
    for (const auto &[i, p] : images) {
        obj["x" + std::to_string(i)] = print_poly(p);
    }
    return json{{"images", obj}};
}

inline json to_json(const Derivation &d, VarIndex upto)
{
    return images_to_json(d.images(upto));
}

inline json to_json(const PolyEndomorphism &phi)
{
    return images_to_json(phi.images());
}

namespace detail {

inline std::map<VarIndex, Polynomial> images_from_json(const json &j)
{
    if (!j.is_object() || !j.contains("images") || !j["images"].is_object()) {
        throw invar_error("expected an object with an \"images\" object");
    }
    std::map<VarIndex, Polynomial> images;
    for (const auto &[key, value] : j["images"].items()) {
        Polynomial v = parse_poly(key);
        if (v.size() != 1 || v.leading_coefficient() != 1 || v.leading_monomial().factors().size() != 1 ||
            v.leading_monomial().factors()[0].second != 1 ||
            v.leading_monomial().factors()[0].first.block != Block::seq) {
            throw invar_error("image key '" + key + "' is not a sequence variable");
        }
        if (!value.is_string()) {
            throw invar_error("image of " + key + " must be a polynomial string");
        }
        images[v.leading_monomial().factors()[0].first.index] = parse_poly(value.get<std::string>());
    }
    return images;
}

} // namespace detail

// The support bound of the result is the largest listed index.
inline Derivation derivation_from_json(const json &j)
{
    auto images = detail::images_from_json(j);
    const VarIndex bound = images.empty() ? 0 : images.rbegin()->first;
    return Derivation::from_images(std::move(images), bound);
}

inline PolyEndomorphism endomorphism_from_json(const json &j)
{
    return PolyEndomorphism(detail::images_from_json(j));
}

// Rows of rational strings; row n holds c_{n,0..n}.
inline json to_json(const LinearChangeOfBasis &psi)
{
    json rows = json::array();
    for (const auto &row : psi.rows()) {
        json r = json::array();
        for (const auto &c : row) {
            r.push_back(to_string(c));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline json to_json(const KernelPresentation &kp)
{
    json gens = json::array();
    for (const auto &g : kp.generators) {
        gens.push_back(json{{"name", g.name}, {"poly", print_poly(g.poly)}});
    }
    return json{{"derivation", to_json(kp.derivation, kp.bound)}, {"generators", gens}};
}

inline json to_json(const Sequence &s)
{
    json arr = json::array();
    for (const auto &t : s.terms()) {
        arr.push_back(to_string(t));
    }
    return arr;
}

inline json to_json(const InvarianceReport &r)
{
    json witnesses = json::array();
    for (const auto &w : r.symbolic_witnesses) {
        witnesses.push_back(json{{"n", w.n}, {"residual", print_poly(w.residual)}});
    }
    for (const auto &w : r.numeric_witnesses) {
        json inputs = json::array();
        for (const auto &s : w.inputs) {
            inputs.push_back(to_json(s));
        }
        witnesses.push_back(json{{"inputs", inputs},
                                 {"n", w.n},
                                 {"original", to_string(w.original)},
                                 {"transformed", to_string(w.transformed)}});
    }
    json j{{"mode", to_string(r.mode)}, {"verdict", to_string(r.verdict)}, {"upto", r.upto}};
    if (r.mode == InvarianceMode::numeric) {
        j["samples"] = r.samples;
    }
    j["witnesses"] = witnesses;
    return j;
}

} // namespace invar

#endif // INVAR_JSON_IO_HPP
