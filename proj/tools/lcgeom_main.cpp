#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lcgeom/errors.hpp"
#include "lcgeom/report_io.hpp"
#include "lcgeom/scenario.hpp"

namespace fs = std::filesystem;
using namespace lcgeom;

namespace {

struct CommonArgs {
    std::string config;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::string quad;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* c = cmd->add_option("--config", args.config, "JSON config file");
    if (config_required) c->required();
    cmd->add_option("--out-dir", args.out_dir, "directory for output files");
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--quad", args.quad, "quadrature preset: gauss, gauss-fine, mc, adaptive");
    cmd->add_option("--jobs", args.jobs, "worker threads for scenario items");
}

Json load_config(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

RunOptions options_from(const CommonArgs& args) {
    RunOptions opt;
    opt.jobs = args.jobs;
    opt.seed = args.seed;
    opt.quad_preset = args.quad;
    if (const char* env = std::getenv("LCGEOM_DEFAULT_QUAD"))
        opt.default_quad_preset = env;
    return opt;
}

void write_out(const CommonArgs& args, const std::string& filename,
               const std::string& content) {
    fs::create_directories(args.out_dir);
    const fs::path p = fs::path(args.out_dir) / filename;
    write_text_file(p.string(), content);
    std::cout << "wrote " << p.string() << "\n";
}

int print_and_code(const ScenarioOutcome& outcome) {
    for (const InequalityReport& r : outcome.reports)
        std::cout << format_report_line(r) << "\n";
    int npass = 0, neq = 0, nfail = 0, nskip = 0;
    for (const InequalityReport& r : outcome.reports) {
        npass += r.verdict == Verdict::Pass;
        neq += r.verdict == Verdict::Equality;
        nfail += r.verdict == Verdict::Fail;
        nskip += r.verdict == Verdict::Skipped;
    }
    std::cout << outcome.name << ": " << npass << " pass, " << neq << " equality, "
              << nfail << " fail, " << nskip << " skipped\n";
    return outcome.exit_code();
}

int run_check_verb(const CommonArgs& args) {
    const ScenarioOutcome outcome = run_scenario(load_config(args.config), options_from(args));
    write_out(args, outcome.name + "_report.json", outcome.to_json().dump(2) + "\n");
    write_out(args, outcome.name + "_report.csv", outcome.to_csv());
    return print_and_code(outcome);
}

int run_sweep_verb(const CommonArgs& args) {
    const SweepResult res = run_sweep(load_config(args.config), options_from(args));
    const std::string csv = sweep_to_csv(res.rows);
    write_out(args, "sweep_" + res.quantity + ".csv", csv);
    std::cout << csv;
    return 0;
}

int run_compute_verb(const CommonArgs& args) {
    const Json out = run_compute(load_config(args.config), options_from(args));
    const std::string text = out.dump(2) + "\n";
    write_out(args, "compute.json", text);
    std::cout << text;
    return 0;
}

int run_solve_ma_verb(const CommonArgs& args) {
    std::vector<std::pair<std::string, std::string>> files;
    const Json out = run_solve_ma(load_config(args.config), files);
    for (const auto& [name, content] : files) write_out(args, name, content);
    write_out(args, "ma_summary.json", out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    const bool ok = out.value("agree", out.value("converged", false));
    return ok ? 0 : 2;
}

int run_report_verb(const CommonArgs& args) {
    const Json j = load_config(args.config);
    if (!j.contains("reports")) throw ConfigError("report: no \"reports\" array in file");
    ScenarioOutcome outcome;
    outcome.name = j.value("scenario", std::string("report"));
    outcome.seed = j.value("seed", std::uint64_t(0));
    for (const Json& r : j.at("reports")) outcome.reports.push_back(report_from_json(r));
    write_out(args, outcome.name + "_report.csv", outcome.to_csv());
    return print_and_code(outcome);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical checks for log-concave geometry: divergences, affine "
                 "surface areas and their inequalities on functions and convex bodies"};
    app.require_subcommand(1);

    CommonArgs check_args, sweep_args, compute_args, solve_args, report_args;
    CLI::App* check = app.add_subcommand("check", "run a scenario of named checks");
    add_common(check, check_args);
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate a quantity over a grid");
    add_common(sweep, sweep_args);
    CLI::App* compute = app.add_subcommand("compute", "masses, entropies, surface areas");
    add_common(compute, compute_args);
    CLI::App* solve = app.add_subcommand("solve-ma", "solve the defining equation");
    add_common(solve, solve_args);
    CLI::App* report = app.add_subcommand("report", "re-render a report JSON file");
    add_common(report, report_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check_verb(check_args);
        if (sweep->parsed()) return run_sweep_verb(sweep_args);
        if (compute->parsed()) return run_compute_verb(compute_args);
        if (solve->parsed()) return run_solve_ma_verb(solve_args);
        if (report->parsed()) return run_report_verb(report_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
