// acharm: verification CLI for almost contact metric structures.
//
// Subcommands:
//   list                       catalog entries and the identity registry
//   describe <entry>           entry details
//   verify <target> [...]      run the residual checks on a catalog entry,
//                              entry(with=params) or a JSON config path
//   convergence <target> ...   residual-vs-step study for one check
//
// Exit codes: 0 all checks passed, 1 at least one check failed,
//             2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acharm/report.hpp"

namespace {

using namespace acharm;

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// "entry(k=v,k=v)" -> key + params; plain keys and config paths pass through.
void parse_target(const std::string& target, std::string& key, Params& params) {
    const auto open = target.find('(');
    if (open == std::string::npos || target.back() != ')') {
        key = target;
        return;
    }
    key = target.substr(0, open);
    const std::string inner = target.substr(open + 1, target.size() - open - 2);
    for (const auto& piece : split_commas(inner)) {
        const auto eq = piece.find('=');
        if (eq == std::string::npos)
            throw ParamOutOfRange("malformed parameter '" + piece + "' (expected name=value)");
        params[piece.substr(0, eq)] = piece.substr(eq + 1);
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ACHARM_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ParamOutOfRange("ACHARM_SEED is not an integer");
        }
    }
    return 42;
}

int cmd_list() {
    std::cout << "catalog entries:\n";
    for (const auto& e : catalog_entries()) {
        std::cout << "  " << e.key << "  [" << e.kind << "]\n      " << e.summary << "\n";
        for (const auto& p : e.params)
            std::cout << "      param " << p.name << " (default " << p.default_value << "): "
                      << p.doc << "\n";
    }
    std::cout << "\nidentity registry (verify --checks keys):\n";
    for (const auto& c : identity_registry()) {
        std::cout << "  " << c.id << "  [" << tol_class_name(c.tol_class) << ", "
                  << (c.applies == IdentityCheck::Applies::acm
                          ? "all structures"
                          : c.applies == IdentityCheck::Applies::cm ? "contact metric"
                                                                    : "contact metric + H-contact")
                  << (c.informational ? ", informational" : "") << "]  " << c.ref << ": "
                  << c.description << "\n";
    }
    std::cout << "\nsubmersion suite ids: 3.1 rsub L3.1 3.2 L3.2 sub_h0 L3.4 T3.1_rel "
                 "T3.1_rel_4n T3.1_verdicts\n";
    std::cout << "warped-product suite ids: W.tau_xi W.T_phi 3.7 3.3 3.4 3.5 L3.3.1 L3.3.2 3.9 "
                 "P3.2 3.10a 3.10b 3.11 L3.5a L3.5b W.T_phi_rel W.lap_rel\n";
    std::cout << "hermitian ids: H.axioms H.eq2 H.deltaJ\n";
    return 0;
}

int cmd_describe(const std::string& target) {
    std::string key;
    Params params;
    parse_target(target, key, params);
    const CatalogEntry& e = find_entry(key);
    std::cout << e.key << "  [" << e.kind << "]\n" << e.summary << "\n";
    if (!e.params.empty()) {
        std::cout << "parameters:\n";
        for (const auto& p : e.params)
            std::cout << "  " << p.name << " (default " << p.default_value << "): " << p.doc
                      << "\n";
    }
    auto flag = [](int v) { return v < 0 ? "n/a" : (v ? "yes" : "no"); };
    std::cout << "expected classification: contact_metric=" << flag(e.expect_contact_metric)
              << " K_contact=" << flag(e.expect_K_contact)
              << " H_contact=" << flag(e.expect_H_contact)
              << " harmonic=" << flag(e.expect_harmonic) << "\n";
    if (e.kind == "almost_contact" || e.kind == "submersion") {
        const AlmostContactStructure s = catalog_structure(key, params);
        std::cout << "chart: dim " << s.chart.dim << ", sample box";
        for (std::size_t i = 0; i < s.chart.box.lo.size(); ++i)
            std::cout << " [" << s.chart.box.lo[i] << ", " << s.chart.box.hi[i] << "]";
        std::cout << "\n";
    }
    return 0;
}

int cmd_verify(RunSpec spec, const std::string& format, const std::string& out_path) {
    const ResidualReport rep = run_verification(spec);
    if (out_path.empty()) {
        emit_report(rep, format, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot open output file '" + out_path + "'");
        emit_report(rep, format, out);
    }
    return rep.summary.all_pass ? 0 : 1;
}

int cmd_convergence(RunSpec spec, const std::string& check_id, const std::vector<double>& steps,
                    const std::string& format) {
    if (steps.size() < 2) throw ParamOutOfRange("convergence needs at least two steps");
    spec.checks = {check_id};
    std::vector<double> residuals;
    for (double h : steps) {
        RunSpec s2 = spec;
        s2.fd.step = h;
        const ResidualReport rep = run_verification(s2);
        if (rep.checks.empty() || !rep.checks.front().applicable)
            throw NotApplicable("check '" + check_id + "' is not applicable to '" + spec.target +
                                "'");
        residuals.push_back(rep.checks.front().max_residual);
    }
    // consecutive ratios; undefined when the finer residual vanishes
    std::vector<double> ratios;
    std::vector<bool> ratio_defined;
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
        const bool ok = residuals[i + 1] > 0.0;
        ratio_defined.push_back(ok);
        ratios.push_back(ok ? residuals[i] / residuals[i + 1] : 0.0);
    }

    if (format == "json") {
        std::cout << "{\n  \"target\": \"" << spec.target << "\",\n  \"check\": \"" << check_id
                  << "\",\n  \"steps\": [";
        for (std::size_t i = 0; i < steps.size(); ++i)
            std::cout << (i ? ", " : "") << detail::fmt17(steps[i]);
        std::cout << "],\n  \"max_residuals\": [";
        for (std::size_t i = 0; i < residuals.size(); ++i)
            std::cout << (i ? ", " : "") << detail::fmt17(residuals[i]);
        std::cout << "],\n  \"ratios\": [";
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            std::cout << (i ? ", " : "");
            if (ratio_defined[i])
                std::cout << detail::fmt17(ratios[i]);
            else
                std::cout << "null";
        }
        std::cout << "]\n}\n";
    } else {
        std::cout << "convergence of '" << check_id << "' on " << spec.target << "\n";
        for (std::size_t i = 0; i < steps.size(); ++i) {
            std::printf("  step %-12g max residual %.6e", steps[i], residuals[i]);
            if (i > 0 && ratio_defined[i - 1]) std::printf("   ratio %.3f", ratios[i - 1]);
            std::printf("\n");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"residual verification for almost contact metric structures"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "catalog entries and check registry");

    std::string describe_target;
    auto* describe_cmd = app.add_subcommand("describe", "details for one catalog entry");
    describe_cmd->add_option("entry", describe_target, "catalog entry")->required();

    std::string verify_target, checks_arg, format = "text", out_path;
    int points = 20, order = 2;
    double step = 1e-4, tol_scale = 1.0, perturb_eps = 0.0;
    std::uint64_t seed = 0, perturb_seed = 42;
    bool seed_given = false;
    auto* verify_cmd = app.add_subcommand("verify", "run residual checks on a target");
    verify_cmd->add_option("target", verify_target, "catalog key, key(k=v,...) or config path")
        ->required();
    verify_cmd->add_option("--checks", checks_arg, "comma-separated check ids (default: all)");
    verify_cmd->add_option("--points", points, "sample point count")->check(CLI::PositiveNumber);
    auto* seed_opt = verify_cmd->add_option("--seed", seed, "sampling seed");
    verify_cmd->add_option("--step", step, "finite-difference step")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--order", order, "finite-difference order")->check(CLI::IsMember({2, 4}));
    verify_cmd->add_option("--format", format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    verify_cmd->add_option("--out", out_path, "write the report to a file");
    verify_cmd->add_option("--tol-scale", tol_scale, "multiply all tolerance classes")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--perturb", perturb_eps, "perturbation amplitude in [0, 0.1)");
    verify_cmd->add_option("--perturb-seed", perturb_seed, "perturbation seed");

    std::string conv_target, conv_check, conv_steps, conv_format = "text";
    int conv_points = 20;
    std::uint64_t conv_seed = 0;
    bool conv_seed_given = false;
    auto* conv_cmd = app.add_subcommand("convergence", "residual vs finite-difference step");
    conv_cmd->add_option("target", conv_target, "catalog key or config path")->required();
    conv_cmd->add_option("--check", conv_check, "check id to track")->required();
    conv_cmd->add_option("--steps", conv_steps, "comma-separated step sizes")->required();
    conv_cmd->add_option("--points", conv_points, "sample point count")->check(CLI::PositiveNumber);
    auto* conv_seed_opt = conv_cmd->add_option("--seed", conv_seed, "sampling seed");
    conv_cmd->add_option("--format", conv_format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }
    seed_given = seed_opt->count() > 0;
    conv_seed_given = conv_seed_opt->count() > 0;

    try {
        if (list_cmd->parsed()) return cmd_list();
        if (describe_cmd->parsed()) return cmd_describe(describe_target);
        if (verify_cmd->parsed()) {
            RunSpec spec;
            parse_target(verify_target, spec.target, spec.params);
            if (!checks_arg.empty())
                for (const auto& id : split_commas(checks_arg)) spec.checks.push_back(id);
            spec.points = points;
            spec.seed = seed_given ? seed : default_seed();
            spec.fd.step = step;
            spec.fd.order = order;
            spec.tol_scale = tol_scale;
            spec.perturb_eps = perturb_eps;
            spec.perturb_seed = perturb_seed;
            return cmd_verify(spec, format, out_path);
        }
        if (conv_cmd->parsed()) {
            RunSpec spec;
            parse_target(conv_target, spec.target, spec.params);
            spec.points = conv_points;
            spec.seed = conv_seed_given ? conv_seed : default_seed();
            std::vector<double> steps;
            for (const auto& tok : split_commas(conv_steps)) {
                try {
                    steps.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw ParamOutOfRange("bad step value '" + tok + "'");
                }
            }
            return cmd_convergence(spec, conv_check, steps, conv_format);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
