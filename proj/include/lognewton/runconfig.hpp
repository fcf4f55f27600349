#ifndef LOGNEWTON_RUNCONFIG_HPP
#define LOGNEWTON_RUNCONFIG_HPP

#include <string>
#include <vector>

#include "lognewton/io.hpp"

namespace lognewton {

/// One batch run, parsed from the plain key-value config format.
struct RunConfig {
    double p = 2.0, q = 4.0, gamma = 1.0, b = 1.0, a = 1.0;
    int n = 128;
    double L = 12.0;
    SolverConfig solver;
    bool diagnostics = true;
    std::string output = "out";

    Params params() const;
};

/// Parses and validates a run config; regime violations are reported as a
/// single structured ConfigError naming the violated hypothesis.
RunConfig parse_run_config(const std::string& path);

struct SweepConfig {
    RunConfig base;
    std::vector<int> n_list;
    std::vector<double> L_list;
    std::vector<std::uint64_t> seeds;
};

SweepConfig parse_sweep_config(const std::string& path);

/// Exit status 0 = converged, 1 = usage/config error, 2 = non-convergence.
/// Writes field.bin, result.json, diagnostics.json, radial_profile.csv and
/// a verbatim copy of the config into the output directory.
int run_solve(const std::string& config_path);

/// Exit status 0 = all checks pass, 1 = unreadable/corrupt artifacts,
/// 3 = verification mismatch (failing checks are listed on stderr).
int run_verify(const std::string& result_dir);

/// Exit status 0 = sweep table written, 1 = config error.  Per-run failures
/// are recorded in their rows and the sweep continues.
int run_sweep(const std::string& sweep_config_path);

}  // namespace lognewton

#endif
