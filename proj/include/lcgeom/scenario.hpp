#pragma once

#include <array>
#include <string>
#include <vector>

#include "lcgeom/divergence.hpp"
#include "lcgeom/serialization.hpp"

namespace lcgeom {

struct RunOptions {
    int jobs = 0;                   // 0 = scenario value or 1
    std::uint64_t seed = 0;         // 0 = scenario value
    std::string quad_preset;        // hard override of the scenario quadrature
    std::string default_quad_preset; // used only when the scenario has none
};

/// Deterministically ordered reports of one scenario run. exit_code is 0
/// when no check failed, 2 otherwise (configuration errors throw instead).
struct ScenarioOutcome {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<InequalityReport> reports;

    int exit_code() const;
    Json to_json() const;
    std::string to_csv() const;
};

/// Runs every (item, check, parameter) combination of the scenario config.
/// Items hold a "spec" or a "body" plus a "checks" list of registry names;
/// unknown names throw ConfigError naming the check. Work is distributed
/// over a pool of `jobs` threads; the merge is by task index, so outputs
/// are byte-reproducible for a fixed seed.
ScenarioOutcome run_scenario(const Json& config, const RunOptions& opt = {});

/// Registry names accepted in "checks" lists, for diagnostics.
std::vector<std::string> scenario_check_names();

/// Sweep of one scalar quantity over a parameter grid; rows are
/// (parameter, value, error_estimate).
struct SweepResult {
    std::string quantity;
    std::vector<std::array<double, 3>> rows;
};

SweepResult run_sweep(const Json& config, const RunOptions& opt = {});

/// compute verb payload: masses, entropy and affine surface areas for a
/// spec, or volumes and L_p surface areas for a body.
Json run_compute(const Json& config, const RunOptions& opt = {});

/// solve-ma verb payload: battery or single-initial solve; returns the
/// summary JSON and fills files_out with (filename, content) pairs for the
/// trace and solution artifacts.
Json run_solve_ma(const Json& config,
                  std::vector<std::pair<std::string, std::string>>& files_out);

} // namespace lcgeom
