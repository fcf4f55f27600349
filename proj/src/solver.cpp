#include "lognewton/solver.hpp"

#include <cmath>
#include <random>

namespace lognewton {

InitSpec InitSpec::gaussian(double amplitude, double width,
                            std::array<double, 2> center) {
    InitSpec s;
    s.kind = Kind::Gaussian;
    s.amplitude = amplitude;
    s.width = width;
    s.center = center;
    return s;
}

InitSpec InitSpec::from_file(std::string path) {
    InitSpec s;
    s.kind = Kind::FromFile;
    s.path = std::move(path);
    return s;
}

InitSpec InitSpec::random(std::uint64_t seed, double amplitude) {
    InitSpec s;
    s.kind = Kind::Random;
    s.seed = seed;
    s.amplitude = amplitude;
    return s;
}

namespace {

// Uniform in [-1, 1) from the top 53 bits; keeps the stream portable.
double next_uniform(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

Field init_field(const GridSpec& spec, const InitSpec& init,
                 const Params& params) {
    (void)params;
    switch (init.kind) {
        case InitSpec::Kind::Gaussian: {
            if (init.amplitude == 0.0)
                throw ZeroInit("gaussian init with zero amplitude");
            if (!(init.width > 0.0))
                throw ZeroInit("gaussian init needs a positive width");
            double A = init.amplitude, s2 = init.width * init.width;
            double cx = init.center[0], cy = init.center[1];
            return Field::from_fn(spec, [&](double x, double y) {
                double dx = x - cx, dy = y - cy;
                return A * std::exp(-(dx * dx + dy * dy) / s2);
            });
        }
        case InitSpec::Kind::FromFile: {
            Field f = load_field(init.path);
            if (!(f.spec() == spec))
                throw GridMismatch("field file grid differs from the run grid");
            double mx = 0.0;
            for (double v : f.values()) mx = std::max(mx, std::fabs(v));
            if (mx == 0.0) throw ZeroInit("field file holds the zero field");
            return f;
        }
        case InitSpec::Kind::Random: {
            if (init.amplitude == 0.0)
                throw ZeroInit("random init with zero amplitude");
            std::mt19937_64 rng(init.seed);
            const int modes = 4;
            double coeff[modes][modes];
            for (int m1 = 0; m1 < modes; ++m1)
                for (int m2 = 0; m2 < modes; ++m2)
                    coeff[m1][m2] = next_uniform(rng) /
                                    ((m1 + 1.0) * (m1 + 1.0) +
                                     (m2 + 1.0) * (m2 + 1.0));
            double L = spec.half_width;
            double env = 9.0 / (L * L);
            Field f = Field::from_fn(spec, [&](double x, double y) {
                double sx = M_PI * (x + L) / (2.0 * L);
                double sy = M_PI * (y + L) / (2.0 * L);
                double v = 0.0;
                for (int m1 = 0; m1 < modes; ++m1)
                    for (int m2 = 0; m2 < modes; ++m2)
                        v += coeff[m1][m2] * std::sin((m1 + 1) * sx) *
                             std::sin((m2 + 1) * sy);
                return v * std::exp(-env * (x * x + y * y));
            });
            double mx = 0.0;
            for (double v : f.values()) mx = std::max(mx, std::fabs(v));
            if (mx == 0.0) throw ZeroInit("random init degenerated to zero");
            return scale(f, init.amplitude / mx);
        }
    }
    throw InvalidParams("unknown init kind");
}

namespace {

// Scalars of t*u (amplitude scaling is exact on the quadrature sums).
EnergyScalars amplitude_scaled(const EnergyScalars& s, double t, double p,
                               double q) {
    EnergyScalars out;
    double t2 = t * t;
    out.grad_sq = t2 * s.grad_sq;
    out.a_l2 = t2 * s.a_l2;
    out.h1_sq = t2 * s.h1_sq;
    out.lp_p = std::pow(t, p) * s.lp_p;
    out.lq_q = std::pow(t, q) * s.lq_q;
    out.v0 = std::pow(t, 2.0 * p) * s.v0;
    return out;
}

struct TrialProjection {
    double t = 1.0;
    double energy = 0.0;  // I at the projected iterate
};

}  // namespace

GroundStateResult solve_ground_state(const Params& params,
                                     const SolverConfig& config,
                                     const GridSpec& spec,
                                     const LogKernel* shared_kernel) {
    if (config.mode == SolveMode::Nehari && !params.nehari_ok)
        throw RegimeViolation("q >= 2p required for nehari mode");
    if (config.mode == SolveMode::Fiber && !params.fiber_ok)
        throw RegimeViolation(
            "fiber mode requires q >= 2p-2 and q > 2, and q >= 2p-1 when "
            "p < 3");
    if (config.mode == SolveMode::Fiber && !params.a.is_constant())
        throw RegimeViolation("fiber mode requires a constant coefficient");
    if (!(config.tol > 0.0) || !(config.backtrack_ratio > 0.0) ||
        !(config.backtrack_ratio < 1.0) || !(config.armijo_c > 0.0) ||
        !(config.armijo_c < 1.0))
        throw InvalidParams("solver config out of range");

    LogKernel kernel = shared_kernel ? *shared_kernel : LogKernel::build(spec);
    const int k = params.fiber_k;

    // Projects the trial field and reports I at the projected iterate; the
    // field itself is only materialized on acceptance.
    auto project_trial = [&](const Field& v,
                             EnergyScalars* v_scalars) -> TrialProjection {
        EnergyScalars s = energy_scalars(v, params, kernel);
        if (v_scalars) *v_scalars = s;
        TrialProjection out;
        if (config.mode == SolveMode::Nehari) {
            out.t = nehari_root(s, params);
            out.energy = energy_from_scalars(
                amplitude_scaled(s, out.t, params.p, params.q), params);
        } else {
            out.t = fiber_root(FiberScalars::from(s), k, params);
            out.energy = psi_eval(FiberScalars::from(s), k, out.t, params).psi;
        }
        return out;
    };
    auto materialize = [&](const Field& v, double t) {
        return config.mode == SolveMode::Nehari ? scale(v, t) : dilate(v, t, k);
    };

    Field u = init_field(spec, config.init, params);
    {
        TrialProjection p0 = project_trial(u, nullptr);
        u = materialize(u, p0.t);
    }

    GroundStateResult result{Field(spec), EnergyReport{}};
    result.params = params;
    result.config = config;
    result.history.reserve(std::min(config.max_iters, 4096));

    double last_t = 1.0;
    int increase_streak = 0;
    int iter = 0;
    bool converged = false;
    double residual = 0.0;

    for (iter = 0; iter < config.max_iters; ++iter) {
        GradientAndScalars gs = gradient_and_scalars(u, params, kernel);
        double energy_u = energy_from_scalars(gs.scalars, params);
        Field dir = precondition(gs.grad, params.a);
        residual = h1_norm(dir, params.a) /
                   std::max(1.0, std::sqrt(gs.scalars.h1_sq));
        result.history.push_back({energy_u, residual});
        if (residual <= config.tol) {
            converged = true;
            break;
        }

        double slope = inner_l2(gs.grad, dir);  // > 0 for the SPD metric
        double tau = config.step0;
        bool accepted = false;
        while (tau > 1e-14 * config.step0) {
            Field v = axpy(u, -tau, dir);
            TrialProjection trial;
            try {
                trial = project_trial(v, nullptr);
            } catch (const NoNehariRoot&) {
                tau *= config.backtrack_ratio;
                continue;
            } catch (const NoSignChange&) {
                tau *= config.backtrack_ratio;
                continue;
            }
            Field candidate = materialize(v, trial.t);
            double energy_new = trial.energy;
            if (config.mode == SolveMode::Fiber) {
                // Regridding perturbs the closed-form value; judge the
                // actual iterate.
                energy_new = energy_from_scalars(
                    energy_scalars(candidate, params, kernel), params);
            }
            if (energy_new <= energy_u - config.armijo_c * tau * slope) {
                u = std::move(candidate);
                last_t = trial.t;
                if (energy_new > energy_u)
                    ++increase_streak;
                else
                    increase_streak = 0;
                if (increase_streak >= 50)
                    throw Diverged(
                        "energy increased over 50 consecutive steps; the "
                        "grid is likely too small for this parameter set");
                accepted = true;
                break;
            }
            tau *= config.backtrack_ratio;
        }
        if (!accepted) break;  // stalled line search
    }

    // Sign-normalize first: nonnegative at the cell of maximal magnitude.
    // All reported quantities are even in u.
    {
        double best = 0.0, at_best = 0.0;
        for (double v : u.values()) {
            if (std::fabs(v) > best) {
                best = std::fabs(v);
                at_best = v;
            }
        }
        if (at_best < 0.0) u = scale(u, -1.0);
    }

    result.field = u;
    result.report = energy_report(u, params, kernel);
    result.level = result.report.I;
    result.residual = converged ? residual : residual_norm(u, params, kernel);
    result.iters = iter;
    double h1 = std::max(result.report.h1_sq, 1e-300);
    result.nehari_residual = std::fabs(result.report.nehari) / h1;
    result.pohozaev_residual = std::fabs(result.report.P) / h1;
    if (config.mode == SolveMode::Nehari) {
        result.constraint_residual = result.nehari_residual;
    } else {
        result.constraint_residual = std::fabs(last_t - 1.0);
    }
    result.converged = converged && result.constraint_residual <= 1e-8;
    return result;
}

double minimax_level(const Field& u, const Params& params,
                     const LogKernel& kernel, SolveMode mode) {
    EnergyScalars s = energy_scalars(u, params, kernel);
    if (s.h1_sq <= 0.0) throw ZeroField("minimax level of the zero field");
    if (mode == SolveMode::Nehari) {
        FiberCase c = classify_amplitude_fiber(s, params);
        if (c.kind == FiberCase::MonotoneUp)
            throw Unbounded("amplitude fibering is monotone; sup I(tu) = inf");
        return energy_from_scalars(
            amplitude_scaled(s, c.t_max, params.p, params.q), params);
    }
    try {
        double t = fiber_root(FiberScalars::from(s), params.fiber_k, params);
        return psi_eval(FiberScalars::from(s), params.fiber_k, t, params).psi;
    } catch (const NoSignChange&) {
        throw Unbounded("dilation fibering has no finite maximum");
    }
}

}  // namespace lognewton
