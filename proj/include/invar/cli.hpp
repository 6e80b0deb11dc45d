#ifndef INVAR_CLI_HPP
#define INVAR_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_io.hpp"

namespace invar::cli {

enum class Command { transform, invariance, log, intertwine, problem1, problem2, kernel };
enum class OutputFormat { text, json };

class usage_error : public invar_error {
public:
    using invar_error::invar_error;
};

struct RunConfig {
    Command command = Command::transform;
    std::string name;
    std::string target;
    std::string candidate;
    std::optional<std::string> seq;
    std::optional<std::string> seq2;
    std::optional<std::string> file;
    std::optional<std::string> file2;
    std::optional<unsigned> terms;
    InvarianceMode mode = InvarianceMode::symbolic;
    unsigned samples = 50;
    std::uint64_t seed = default_seed;
    std::optional<VarIndex> ansatz_bound;
    OutputFormat format = OutputFormat::text;
};

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// ---------------------------------------------------------------------------
// Sequence ingestion

// Comma and/or whitespace separated rationals.
inline Sequence parse_inline_sequence(std::string_view text)
{
    std::vector<Rational> terms;
    std::string token;
    std::size_t position = 0;
    auto flush = [&] {
        if (token.empty()) {
            return;
        }
        ++position;
        try {
            terms.push_back(parse_rational(token));
        } catch (const invar_error &) {
            throw invar_error("malformed sequence term " + std::to_string(position) + ": '" + token + "'");
        }
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else {
            token += ch;
        }
    }
    flush();
    if (terms.empty()) {
        throw invar_error("empty input");
    }
    return Sequence(std::move(terms));
}

// OEIS b-file: '#' comment lines, then "index value" pairs with contiguous
// indices starting anywhere.
inline Sequence parse_bfile(std::string_view text)
{
    std::vector<Rational> terms;
    std::optional<Integer> expected;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string index_text;
        if (!(fields >> index_text) || index_text[0] == '#') {
            continue;
        }
        std::string value_text;
        std::string extra;
        if (!(fields >> value_text) || (fields >> extra)) {
            throw invar_error("malformed line " + std::to_string(line_no) + ": expected \"index value\"");
        }
        Integer index;
        Rational value;
        try {
            index = parse_rational(index_text).get_num();
            if (!is_integer(parse_rational(index_text)) || index < 0) {
                throw invar_error("bad index");
            }
            value = parse_rational(value_text);
        } catch (const invar_error &) {
            throw invar_error("malformed line " + std::to_string(line_no) + ": expected \"index value\"");
        }
        if (expected && index != *expected) {
            throw invar_error("non-contiguous index at line " + std::to_string(line_no));
        }
        expected = index + 1;
        terms.push_back(value);
    }
    if (terms.empty()) {
        throw invar_error("empty input");
    }
    return Sequence(std::move(terms));
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw invar_error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A path to an existing file is read as a b-file; anything else is parsed as
// an inline list.
inline Sequence ingest_sequence(const std::string &source)
{
    std::ifstream probe(source);
    if (probe.good()) {
        return parse_bfile(read_file(source));
    }
    return parse_inline_sequence(source);
}

// ---------------------------------------------------------------------------
// Report rendering

inline std::string invariance_headline(const InvarianceReport &r)
{
    std::string head;
    switch (r.verdict) {
    case Verdict::invariant:
        head = "INVARIANT";
        break;
    case Verdict::not_invariant:
        head = "NOT INVARIANT";
        break;
    case Verdict::inconclusive:
        head = "INCONCLUSIVE";
        break;
    }
    head += " (" + to_string(r.mode) + ", n ≤ " + std::to_string(r.upto);
    if (r.mode == InvarianceMode::numeric) {
        head += ", " + std::to_string(r.samples) + " samples";
    }
    return head + ")";
}

inline std::string render_text(const InvarianceReport &r)
{
    std::string s = invariance_headline(r) + "\n";
    for (const auto &w : r.symbolic_witnesses) {
        s += "  witness n = " + std::to_string(w.n) + ": residual " + print_poly(w.residual) + "\n";
    }
    for (const auto &w : r.numeric_witnesses) {
        s += "  witness n = " + std::to_string(w.n) + " on input";
        for (const auto &in : w.inputs) {
            s += " (" + to_string(in) + ")";
        }
        s += ": G(A) = " + to_string(w.original) + ", G(F(A)) = " + to_string(w.transformed) + "\n";
    }
    return s;
}

inline std::string render_images(const std::string &label, const std::map<VarIndex, Polynomial> &images)
{
    std::string s;
    for (const auto &[i, p] : images) {
        s += label + "(x" + std::to_string(i) + ") = " + print_poly(p) + "\n";
    }
    return s;
}

inline std::map<VarIndex, Polynomial> psi_images(const LinearChangeOfBasis &psi)
{
    return psi.as_endomorphism().images();
}

inline const char *empty_basis_message = "only the zero derivation found";

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline std::vector<Sequence> gather_inputs(const RunConfig &c)
{
    std::vector<Sequence> inputs;
    if (c.seq && c.file) {
        throw usage_error("give either --seq or --file, not both");
    }
    if (c.seq) {
        inputs.push_back(parse_inline_sequence(*c.seq));
    } else if (c.file) {
        inputs.push_back(parse_bfile(read_file(*c.file)));
    }
    if (c.seq2 && c.file2) {
        throw usage_error("give either --seq2 or --file2, not both");
    }
    if (c.seq2) {
        inputs.push_back(parse_inline_sequence(*c.seq2));
    } else if (c.file2) {
        inputs.push_back(parse_bfile(read_file(*c.file2)));
    }
    return inputs;
}

inline void require_name(const RunConfig &c)
{
    if (c.name.empty()) {
        throw usage_error("--name is required");
    }
}

// D = log F for a one-sequence transform of triangular shape, on x_0..x_bound.
inline Derivation derivation_of(const TransformFamily &f, VarIndex bound)
{
    return log_endomorphism(family_endomorphism(f, bound), bound);
}

inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

inline RunResult run_transform(const RunConfig &c)
{
    require_name(c);
    const TransformFamily f = family_from_spec(c.name);
    const auto inputs = gather_inputs(c);
    if (inputs.size() != f.arity()) {
        throw usage_error(f.name() + " takes " + std::to_string(f.arity()) + " input sequence(s), got " +
                          std::to_string(inputs.size()));
    }
    unsigned count = c.terms.value_or(0);
    if (!c.terms) {
        std::size_t shortest = inputs[0].size();
        for (const auto &s : inputs) {
            shortest = std::min(shortest, s.size());
        }
        while (std::size_t(f.prefix_need(f.start() + count)) + 1 <= shortest) {
            ++count;
        }
        if (count == 0) {
            throw invar_error("sequence too short: " + f.name() + " needs " +
                              std::to_string(f.prefix_need(f.start()) + 1) + " terms");
        }
    }
    const Sequence out = apply_transform(f, inputs, count);
    if (c.format == OutputFormat::json) {
        return {0, dump(json{{"transform", c.name}, {"start", f.start()}, {"terms", to_json(out)}}), {}};
    }
    return {0, to_string(out) + "\n", {}};
}

inline RunResult run_invariance(const RunConfig &c)
{
    if (c.target.empty() || c.candidate.empty()) {
        throw usage_error("--target and --candidate are required");
    }
    const TransformFamily target = family_from_spec(c.target);
    const TransformFamily candidate = family_from_spec(c.candidate);
    InvarianceReport report;
    if (c.mode == InvarianceMode::symbolic) {
        const unsigned upto = c.terms.value_or(4);
        unsigned bound = 0;
        for (unsigned n = candidate.start(); n <= upto; ++n) {
            bound = std::max(bound, candidate.prefix_need(n));
        }
        Derivation d;
        try {
            d = derivation_of(target, bound);
        } catch (const invar_error &e) {
            throw usage_error("target " + c.target + " has no triangular logarithm (" + e.what() +
                              "); use --mode numeric");
        }
        report = check_invariance_symbolic(d, candidate, upto);
    } else {
        report = check_invariance_numeric(target, candidate, c.samples, c.terms.value_or(6), c.seed);
    }
    const int code = report.verdict == Verdict::not_invariant ? 1 : 0;
    if (c.format == OutputFormat::json) {
        json j{{"target", c.target}, {"candidate", c.candidate}};
        const json body = to_json(report);
        for (const auto &[k, v] : body.items()) {
            j[k] = v;
        }
        return {code, dump(j), {}};
    }
    return {code, render_text(report), {}};
}

inline RunResult run_log(const RunConfig &c)
{
    require_name(c);
    const unsigned upto = c.terms.value_or(4);
    const Derivation d = derivation_of(family_from_spec(c.name), upto);
    if (c.format == OutputFormat::json) {
        return {0, dump(json{{"transform", c.name}, {"derivation", to_json(d, upto)}}), {}};
    }
    return {0, render_images("D", d.images(upto)), {}};
}

inline RunResult run_intertwine(const RunConfig &c)
{
    require_name(c);
    const unsigned upto = c.terms.value_or(4);
    const Derivation d = derivation_of(family_from_spec(c.name), upto);
    const LinearChangeOfBasis psi = intertwining_solve(d, upto);
    if (c.format == OutputFormat::json) {
        return {0,
                dump(json{{"transform", c.name},
                          {"derivation", to_json(d, upto)},
                          {"psi", to_json(psi)},
                          {"psi_images", images_to_json(psi_images(psi))["images"]}}),
                {}};
    }
    return {0, render_images("D", d.images(upto)) + render_images("psi", psi_images(psi)), {}};
}

inline RunResult run_problem1(const RunConfig &c)
{
    require_name(c);
    const unsigned upto = c.terms.value_or(4);
    const Problem1Solution sol = solve_problem1(family_from_spec(c.name), upto);

    json families = json::array();
    std::string text = render_images("D", sol.derivation.images(sol.bound)) + render_images("psi", psi_images(sol.psi));
    for (const auto &fam : sol.families) {
        const InvarianceReport check = check_invariance_symbolic(sol.derivation, fam, upto);
        json components = json::array();
        for (unsigned n = fam.start(); n <= upto; ++n) {
            components.push_back(json{{"n", n}, {"poly", print_poly(fam.term(n))}});
            text += fam.name() + "[" + std::to_string(n) + "] = " + print_poly(fam.term(n)) + "\n";
        }
        text += fam.name() + ": " + invariance_headline(check) + "\n";
        families.push_back(json{{"name", fam.name()},
                                {"start", fam.start()},
                                {"components", components},
                                {"verdict", to_string(check.verdict)}});
    }
    if (c.format == OutputFormat::json) {
        return {0,
                dump(json{{"transform", c.name},
                          {"terms", upto},
                          {"derivation", to_json(sol.derivation, sol.bound)},
                          {"psi", to_json(sol.psi)},
                          {"families", families}}),
                {}};
    }
    return {0, text, {}};
}

inline RunResult run_problem2(const RunConfig &c)
{
    require_name(c);
    const unsigned upto = c.terms.value_or(4);
    const TransformFamily g = family_from_spec(c.name);
    const auto basis = solve_problem2(g, upto, c.ansatz_bound);
    VarIndex bound = 0;
    if (c.ansatz_bound) {
        bound = *c.ansatz_bound;
    } else {
        for (unsigned n = g.start(); n <= upto; ++n) {
            bound = std::max<VarIndex>(bound, g.prefix_need(n));
        }
    }
    if (c.format == OutputFormat::json) {
        json arr = json::array();
        for (const auto &s : basis) {
            arr.push_back(json{{"derivation", to_json(s.derivation, bound)}, {"exponential", to_json(s.exponential)}});
        }
        json j{{"transform", c.name}, {"terms", upto}, {"ansatz_bound", bound}, {"basis", arr}};
        if (basis.empty()) {
            j["message"] = empty_basis_message;
        }
        return {0, dump(j), {}};
    }
    if (basis.empty()) {
        return {0, std::string(empty_basis_message) + "\n", {}};
    }
    std::string text;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        text += "basis element " + std::to_string(k + 1) + ":\n";
        text += render_images("  D", basis[k].derivation.images(bound));
        text += render_images("  exp(D)", basis[k].exponential.images());
    }
    return {0, text, {}};
}

inline RunResult run_kernel(const RunConfig &c)
{
    require_name(c);
    const unsigned upto = c.terms.value_or(4);
    const KernelPresentation kp = kernel_presentation(derivation_of(family_from_spec(c.name), upto), upto);
    if (c.format == OutputFormat::json) {
        return {0, dump(to_json(kp)), {}};
    }
    std::string text;
    for (const auto &g : kp.generators) {
        text += g.name + " = " + print_poly(g.poly) + "\n";
    }
    return {0, text, {}};
}

} // namespace detail

// Exit status: 0 success or invariant, 1 not invariant, 2 usage or input error.
inline RunResult run(const RunConfig &c)
{
    try {
        switch (c.command) {
        case Command::transform:
            return detail::run_transform(c);
        case Command::invariance:
            return detail::run_invariance(c);
        case Command::log:
            return detail::run_log(c);
        case Command::intertwine:
            return detail::run_intertwine(c);
        case Command::problem1:
            return detail::run_problem1(c);
        case Command::problem2:
            return detail::run_problem2(c);
        case Command::kernel:
            return detail::run_kernel(c);
        }
    } catch (const invar_error &e) {
        return {2, {}, std::string("error: ") + e.what() + "\n"};
    }
    return {2, {}, "error: unknown command\n"};
}

// Parses argv (argv[0] is the program name) and runs the selected verb.
inline RunResult run_command_line(const std::vector<std::string> &args)
{
    RunConfig cfg;
    CLI::App app{"Invariant polynomial transformations of integer sequences"};
    app.require_subcommand(1);

    std::string format = "text";
    std::string mode;
    std::optional<std::uint64_t> seed;
    if (const char *env = std::getenv("INVAR_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception &) {
            return {2, {}, "error: INVAR_SEED must be an unsigned integer\n"};
        }
    }

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--terms", cfg.terms, "Number of terms / largest index checked");
    };
    auto add_name = [&](CLI::App *sub) {
        sub->add_option("--name,--transform", cfg.name, "Transform identifier, e.g. hankel or binomial:mu=1/2");
    };

    auto *transform = app.add_subcommand("transform", "Apply a transform to a sequence");
    add_name(transform);
    add_common(transform);
    transform->add_option("--seq", cfg.seq, "Inline sequence, e.g. \"1,1,2,5,14\"");
    transform->add_option("--seq2", cfg.seq2, "Second inline sequence for two-sequence transforms");
    transform->add_option("--file", cfg.file, "b-file with the input sequence");
    transform->add_option("--file2", cfg.file2, "b-file with the second input sequence");

    auto *invariance = app.add_subcommand("invariance", "Check whether a candidate is invariant under a target");
    add_common(invariance);
    invariance->add_option("--target", cfg.target, "Target transform F")->required();
    invariance->add_option("--candidate", cfg.candidate, "Candidate transform G")->required();
    invariance->add_option("--mode", mode, "symbolic or numeric")->check(CLI::IsMember({"symbolic", "numeric"}));
    invariance->add_option("--samples", cfg.samples, "Number of random samples (numeric mode)");
    invariance->add_option("--seed", seed, "Master seed (numeric mode); default from INVAR_SEED");

    auto *log = app.add_subcommand("log", "Logarithm derivation of a triangular transform");
    auto *intertwine = app.add_subcommand("intertwine", "Intertwining change of basis for a transform's log");
    auto *problem1 = app.add_subcommand("problem1", "Construct invariant transforms of a triangular transform");
    auto *problem2 = app.add_subcommand("problem2", "Find derivations annihilating a transform");
    auto *kernel = app.add_subcommand("kernel", "Kernel generators of a transform's log derivation");
    for (auto *sub : {log, intertwine, problem1, problem2, kernel}) {
        add_name(sub);
        add_common(sub);
    }
    problem2->add_option("--ansatz-bound", cfg.ansatz_bound, "Largest variable index in the derivation ansatz");

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        return {0, app.help(), {}};
    } catch (const CLI::ParseError &e) {
        return {2, {}, std::string("error: ") + e.what() + "\n"};
    }

    const std::pair<CLI::App *, Command> verbs[] = {
        {transform, Command::transform}, {invariance, Command::invariance}, {log, Command::log},
        {intertwine, Command::intertwine}, {problem1, Command::problem1}, {problem2, Command::problem2},
        {kernel, Command::kernel}};
    for (const auto &[sub, cmd] : verbs) {
        if (sub->parsed()) {
            cfg.command = cmd;
        }
    }
    cfg.format = format == "json" ? OutputFormat::json : OutputFormat::text;
    if (mode == "numeric") {
        cfg.mode = InvarianceMode::numeric;
    }
    if (seed) {
        cfg.seed = *seed;
    }
    return run(cfg);
}

} // namespace invar::cli

#endif // INVAR_CLI_HPP
