#ifndef LOGNEWTON_SOLVER_HPP
#define LOGNEWTON_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lognewton/manifolds.hpp"

namespace lognewton {

enum class SolveMode { Nehari, Fiber };

struct InitSpec {
    enum class Kind { Gaussian, FromFile, Random };
    Kind kind = Kind::Gaussian;
    // Gaussian
    double amplitude = 1.0;
    double width = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    // FromFile
    std::string path;
    // Random
    std::uint64_t seed = 0;

    static InitSpec gaussian(double amplitude, double width,
                             std::array<double, 2> center = {0.0, 0.0});
    static InitSpec from_file(std::string path);
    static InitSpec random(std::uint64_t seed, double amplitude = 1.0);
};

struct SolverConfig {
    SolveMode mode = SolveMode::Nehari;
    int max_iters = 2000;
    double tol = 1e-6;
    double step0 = 1.0;
    double armijo_c = 1e-4;
    double backtrack_ratio = 0.5;
    InitSpec init;
};

struct IterationRecord {
    double energy = 0.0;
    double residual = 0.0;
};

struct GroundStateResult {
    Field field;
    EnergyReport report;
    double level = 0.0;
    double residual = 0.0;
    double nehari_residual = 0.0;    // |<I'(u),u>| / ||u||_{H1}^2
    double pohozaev_residual = 0.0;  // |P(u)| / ||u||_{H1}^2
    double constraint_residual = 0.0;
    int iters = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
    Params params;
    SolverConfig config;
};

/// Builds the initial iterate; never the zero field.
Field init_field(const GridSpec& spec, const InitSpec& init,
                 const Params& params);

/// Projected, preconditioned gradient descent on the Nehari manifold or on
/// M_k, with Armijo backtracking on the projected iterates.  A shared
/// kernel may be supplied for sweeps; otherwise one is built.
GroundStateResult solve_ground_state(const Params& params,
                                     const SolverConfig& config,
                                     const GridSpec& spec,
                                     const LogKernel* shared_kernel = nullptr);

/// sup_t I(t u) (Nehari) or sup_t I(t^k u(t x)) (Fiber), via the closed-form
/// fibering.  Throws Unbounded in the monotone case.
double minimax_level(const Field& u, const Params& params,
                     const LogKernel& kernel, SolveMode mode);

}  // namespace lognewton

#endif
