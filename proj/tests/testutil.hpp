#ifndef LOGNEWTON_TESTUTIL_HPP
#define LOGNEWTON_TESTUTIL_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "lognewton/grid.hpp"

namespace testutil {

inline double rel_err(double got, double want) {
    double scale = std::max(std::fabs(got), std::fabs(want));
    if (scale == 0.0) return 0.0;
    return std::fabs(got - want) / scale;
}

inline double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

/// Smooth decaying field: a few random Gaussian bumps well inside the box.
inline lognewton::Field random_smooth_field(const lognewton::GridSpec& spec,
                                            std::uint64_t seed,
                                            int bumps = 3) {
    std::mt19937_64 rng(seed);
    struct Bump {
        double amp, cx, cy, w;
    };
    std::vector<Bump> b(bumps);
    double L = spec.half_width;
    for (auto& bump : b) {
        bump.amp = uniform_pm1(rng);
        bump.cx = 0.3 * L * uniform_pm1(rng);
        bump.cy = 0.3 * L * uniform_pm1(rng);
        bump.w = 0.1 * L * (1.5 + uniform_pm1(rng) * 0.5);
    }
    return lognewton::Field::from_fn(spec, [&](double x, double y) {
        double v = 0.0;
        for (const auto& bump : b) {
            double dx = x - bump.cx, dy = y - bump.cy;
            v += bump.amp * std::exp(-(dx * dx + dy * dy) / (bump.w * bump.w));
        }
        return v;
    });
}

/// Per-cell noise; no smoothness, for purely algebraic identities.
inline lognewton::Field random_rough_field(const lognewton::GridSpec& spec,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(spec.cell_count());
    for (auto& x : v) x = uniform_pm1(rng);
    return lognewton::Field(spec, std::move(v));
}

inline lognewton::Field gaussian_field(const lognewton::GridSpec& spec,
                                       double amp, double decay,
                                       double cx = 0.0, double cy = 0.0) {
    return lognewton::Field::from_fn(spec, [&](double x, double y) {
        double dx = x - cx, dy = y - cy;
        return amp * std::exp(-decay * (dx * dx + dy * dy));
    });
}

}  // namespace testutil

#endif
