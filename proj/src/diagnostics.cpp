#include "lognewton/diagnostics.hpp"

#include <cmath>

namespace lognewton {

SymmetryReport symmetry_report(const Field& u) {
    RecenterResult rc = recenter(u);  // throws ZeroField on u == 0
    const Field& f = rc.field;
    int n = f.n();
    double h = f.spacing();
    double rmax = 0.8 * f.spec().half_width;
    int nbins = static_cast<int>(std::ceil(rmax / h));

    struct Acc {
        double sum = 0.0, mn = 0.0, mx = 0.0;
        int count = 0;
    };
    std::vector<Acc> acc(nbins);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double r = std::hypot(f.spec().coord(i), f.spec().coord(j));
            int b = static_cast<int>(r / h);
            if (b >= nbins) continue;
            double v = f(i, j);
            Acc& a = acc[b];
            if (a.count == 0) {
                a.mn = a.mx = v;
            } else {
                a.mn = std::min(a.mn, v);
                a.mx = std::max(a.mx, v);
            }
            a.sum += v;
            ++a.count;
        }
    }

    SymmetryReport rep;
    rep.center = rc.residual_center;
    double rel_dev = 0.0;
    for (int b = 0; b < nbins; ++b) {
        if (acc[b].count == 0) continue;
        RadialBin bin;
        bin.radius = (b + 0.5) * h;
        bin.count = acc[b].count;
        bin.mean = acc[b].sum / acc[b].count;
        bin.min = acc[b].mn;
        bin.max = acc[b].mx;
        bin.max_dev = std::max(bin.max - bin.mean, bin.mean - bin.min);
        rel_dev = std::max(rel_dev, (bin.max - bin.min) /
                                        std::max(std::fabs(bin.mean), 1e-12));
        rep.radial_profile.push_back(bin);
    }
    rep.angular_rel_dev = rel_dev;

    double peak = 0.0;
    for (const auto& bin : rep.radial_profile)
        peak = std::max(peak, std::fabs(bin.mean));
    double tol = 1e-9 * std::max(peak, 1e-300);
    for (std::size_t b = 3; b < rep.radial_profile.size(); ++b) {
        // Innermost two bins have too few cells for stable statistics.
        if (rep.radial_profile[b].mean >
            rep.radial_profile[b - 1].mean + tol)
            ++rep.monotone_violations;
    }
    return rep;
}

DecayFit decay_fit(const Field& u) {
    int n = u.n();
    double h = u.spacing();
    double L = u.spec().half_width;
    double r_lo = 0.3 * L, r_hi = 0.7 * L;
    int nbins = static_cast<int>(std::ceil(r_hi / h)) + 1;

    // Radial max of |u| per bin, tracking the radius where it is attained.
    std::vector<double> best(nbins, 0.0), best_r(nbins, 0.0);
    auto c = mass_center(u);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double r = std::hypot(u.spec().coord(i) - c[0],
                                  u.spec().coord(j) - c[1]);
            if (r < r_lo || r > r_hi) continue;
            int b = static_cast<int>(r / h);
            if (b >= nbins) continue;
            double v = std::fabs(u(i, j));
            if (v > best[b]) {
                best[b] = v;
                best_r[b] = r;
            }
        }
    }

    std::vector<double> xs, ys;
    for (int b = 0; b < nbins; ++b) {
        if (best[b] > 1e-13) {
            xs.push_back(best_r[b]);
            ys.push_back(std::log(best[b]));
        }
    }
    if (xs.size() < 2)
        throw WindowEmpty("no radial values above the noise floor in "
                          "[0.3 L, 0.7 L]");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    double slope = sxy / sxx;
    double ss_res = syy - sxy * sxy / sxx;

    DecayFit fit;
    fit.rate = -slope;
    fit.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    fit.window = {r_lo, r_hi};
    fit.points = static_cast<int>(xs.size());
    return fit;
}

double far_field_check(const Field& u, double p, const LogKernel& kernel) {
    Field density = abs_pow(u, p);
    double mass = integrate(density);
    if (mass == 0.0) return 0.0;
    Field w = potential_w(u, p, kernel);
    // Center of the density |u|^p; the log comparison is taken from there.
    std::array<double, 2> c{0.0, 0.0};
    {
        int n = density.n();
        double m = 0.0, cx = 0.0, cy = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double wgt = density(i, j);
                m += wgt;
                cx += wgt * density.spec().coord(i);
                cy += wgt * density.spec().coord(j);
            }
        c = {cx / m, cy / m};
    }
    double L = u.spec().half_width;
    double r_lo = 0.6 * L, r_hi = 0.8 * L;
    double worst = 0.0;
    int n = u.n();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double r = std::hypot(u.spec().coord(i) - c[0],
                                  u.spec().coord(j) - c[1]);
            if (r < r_lo || r > r_hi) continue;
            double expect = mass * std::log(r) / (2.0 * M_PI);
            worst = std::max(worst, std::fabs(w(i, j) - expect));
        }
    }
    return worst;
}

bool sign_check(const Field& u) {
    double mn = 0.0, mx = 0.0;
    for (double v : u.values()) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    return mn >= -1e-10 * std::max(mx, 1e-300);
}

ConsistencyReport consistency_suite(const GroundStateResult& nehari,
                                    const GroundStateResult& fiber) {
    const Params& a = nehari.params;
    const Params& b = fiber.params;
    if (a.p != b.p || a.q != b.q || a.gamma != b.gamma || a.b != b.b ||
        a.a.mean() != b.a.mean())
        throw RegimeMismatch("the two runs use different parameters");
    if (!(nehari.field.spec() == fiber.field.spec()))
        throw RegimeMismatch("the two runs use different grids");
    if (!a.nehari_ok || !a.fiber_ok)
        throw RegimeMismatch(
            "parameter regime does not admit both manifolds");
    if (!nehari.converged || !fiber.converged)
        throw NotConverged("consistency check needs two converged runs");

    ConsistencyReport rep;
    rep.level_gap_rel = std::fabs(nehari.level - fiber.level) /
                        std::max(std::fabs(nehari.level), 1e-300);
    rep.pohozaev_nehari = nehari.pohozaev_residual;
    rep.pohozaev_fiber = fiber.pohozaev_residual;
    rep.sign_ok_nehari = sign_check(nehari.field);
    rep.sign_ok_fiber = sign_check(fiber.field);
    rep.sym_nehari = symmetry_report(nehari.field);
    rep.sym_fiber = symmetry_report(fiber.field);
    rep.decay_nehari = decay_fit(nehari.field);
    rep.decay_fiber = decay_fit(fiber.field);
    return rep;
}

}  // namespace lognewton
