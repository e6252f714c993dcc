// vcalc: solve, solve-all, implicit and flow on problems given as a spec file and/or
// flags. Flags override file values. Exit codes follow vcalc::cli::ExitCode.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "problem_spec.hpp"

namespace {

using vcalc::cli::Located;
using vcalc::cli::ProblemSpec;

struct Flags {
    std::string file;
    std::string output;
    std::string variables;
    std::string parameters;
    std::vector<std::string> functions;
    std::string domain;
    std::string parameter_domain;
    ProblemSpec spec;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("spec", f.file, "problem file of key = value lines");
    cmd->add_option("--variables", f.variables, "comma-separated variable names");
    cmd->add_option("--function", f.functions, "one component per use, in order");
    cmd->add_option("--domain", f.domain, "box such as \"[-2:3], [-1:2]\"");
    cmd->add_option("--tolerance", f.spec.tolerance, "solver or per-step error tolerance");
    cmd->add_option("--max-steps", f.spec.max_steps, "Newton steps or Picard iterations");
    cmd->add_option("--sweep-threshold", f.spec.sweep_threshold, "discard model terms below this size");
    cmd->add_option("--format", f.spec.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--output", f.output, "write the result here instead of stdout");
}

// Reads the file (if any) and lays the flags over it.
ProblemSpec assemble(const Flags& f) {
    ProblemSpec spec;
    if (!f.file.empty()) {
        std::ifstream in(f.file);
        if (!in) {
            throw vcalc::UsageError("cannot read " + f.file);
        }
        std::ostringstream text;
        text << in.rdbuf();
        spec = vcalc::cli::parse_spec(text.str());
    }
    // flag values go through the same parser as a file of their own
    std::ostringstream lines;
    if (!f.variables.empty()) {
        lines << "variables = " << f.variables << "\n";
    }
    if (!f.parameters.empty()) {
        lines << "parameters = " << f.parameters << "\n";
    }
    for (const auto& fn : f.functions) {
        lines << "function = " << fn << "\n";
    }
    if (!f.domain.empty()) {
        lines << "domain = " << f.domain << "\n";
    }
    if (!f.parameter_domain.empty()) {
        lines << "parameter_domain = " << f.parameter_domain << "\n";
    }
    ProblemSpec flags = vcalc::cli::parse_spec(lines.str());
    const ProblemSpec& given = f.spec;
    flags.tolerance = given.tolerance;
    flags.max_steps = given.max_steps;
    flags.max_depth = given.max_depth;
    flags.order = given.order;
    flags.step = given.step;
    flags.time = given.time;
    flags.integrator = given.integrator;
    flags.sweep_threshold = given.sweep_threshold;
    flags.format = given.format;
    spec.override_with(flags);
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Validated solving and flow enclosure with Taylor function models"};
    app.require_subcommand(1);
    Flags single_flags, solve_flags, implicit_flags, flow_flags;

    auto* single = app.add_subcommand("solve", "one solution of f(x) = 0 by Newton contraction on a box");
    add_common(single, single_flags);

    auto* solve = app.add_subcommand("solve-all", "all solutions of f(x) = 0 in a box");
    add_common(solve, solve_flags);
    solve->add_option("--max-depth", solve_flags.spec.max_depth, "bisection depth before giving up");

    auto* impl = app.add_subcommand("implicit", "solution y(p) of f(p, y) = 0 over a parameter box");
    add_common(impl, implicit_flags);
    impl->add_option("--parameters", implicit_flags.parameters, "comma-separated parameter names");
    impl->add_option("--parameter-domain", implicit_flags.parameter_domain, "parameter box");

    auto* flw = app.add_subcommand("flow", "enclosure of the flow of x' = f(x)");
    add_common(flw, flow_flags);
    flw->add_option("--step", flow_flags.spec.step, "requested (maximum) step");
    flw->add_option("--time", flow_flags.spec.time, "total time; omit for a single step");
    flw->add_option("--integrator", flow_flags.spec.integrator, "picard or taylor")
        ->check(CLI::IsMember({"picard", "taylor"}));
    flw->add_option("--order", flow_flags.spec.order, "Taylor integrator time order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? vcalc::cli::exit_ok : vcalc::cli::exit_usage;
    }

    CLI::App* cmd = app.get_subcommands().front();
    const Flags& f = cmd == single ? single_flags : cmd == solve ? solve_flags : cmd == impl ? implicit_flags : flow_flags;
    ProblemSpec spec;
    try {
        spec = assemble(f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vcalc::cli::exit_usage;
    }

    std::ostringstream out;
    const int code = vcalc::cli::run(cmd->get_name(), spec, out, std::cerr);
    if (f.output.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(f.output);
        file << out.str();
        if (!file) {
            std::cerr << "error: cannot write " << f.output << "\n";
            return vcalc::cli::exit_usage;
        }
    }
    return code;
}
