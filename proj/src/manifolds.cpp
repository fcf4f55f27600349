#include "lognewton/manifolds.hpp"

#include <cmath>

namespace lognewton {

double phi_prime_over_t(const EnergyScalars& s, double t,
                        const Params& params) {
    if (!(t > 0.0)) throw InvalidParams("fiber parameter t must be positive");
    return s.h1_sq +
           params.gamma / (2.0 * M_PI) * std::pow(t, 2.0 * params.p - 2.0) *
               s.v0 -
           params.b * std::pow(t, params.q - 2.0) * s.lq_q;
}

namespace {

constexpr double kBracketCap = 1e8;
constexpr double kRelTol = 1e-12;

// Expands upward from t=1 looking for a sign change of f (positive near 0),
// then bisects.  Returns the root, or NaN when f stays positive up to cap.
template <class F>
double bracket_and_bisect(F&& f) {
    double lo = 1.0;
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double hi;
    if (flo > 0.0) {
        hi = 2.0;
        while (true) {
            double fhi = f(hi);
            if (fhi == 0.0) return hi;
            if (fhi < 0.0) break;
            lo = hi;
            hi *= 2.0;
            if (hi > kBracketCap) return std::nan("");
        }
    } else {
        hi = lo;
        lo = 0.5;
        while (true) {
            double g = f(lo);
            if (g == 0.0) return lo;
            if (g > 0.0) break;
            hi = lo;
            lo *= 0.5;
            if (lo < 1.0 / kBracketCap) return std::nan("");
        }
    }
    while (hi - lo > kRelTol * hi) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        (fm > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

FiberCase classify_amplitude_fiber(const EnergyScalars& s,
                                   const Params& params) {
    if (s.h1_sq <= 0.0) throw ZeroField("amplitude fiber of the zero field");
    double root = bracket_and_bisect(
        [&](double t) { return phi_prime_over_t(s, t, params); });
    if (std::isnan(root)) return FiberCase{FiberCase::MonotoneUp, 0.0};
    return FiberCase{FiberCase::UniqueMax, root};
}

double nehari_root(const EnergyScalars& s, const Params& params) {
    FiberCase c = classify_amplitude_fiber(s, params);
    if (c.kind == FiberCase::MonotoneUp)
        throw NoNehariRoot(
            "amplitude fibering is monotone; no Nehari projection exists "
            "(try a different initial field)");
    return c.t_max;
}

Projection nehari_project(const Field& u, const Params& params,
                          const LogKernel& kernel) {
    if (!params.nehari_ok)
        throw RegimeViolation("q >= 2p required for the Nehari manifold");
    EnergyScalars s = energy_scalars(u, params, kernel);
    double t = nehari_root(s, params);
    return Projection{t, scale(u, t)};
}

PsiValue psi_eval(const FiberScalars& s, int k, double t,
                  const Params& params) {
    if (k != 1 && k != 2) throw InvalidParams("fiber index k must be 1 or 2");
    if (!(t > 0.0)) throw InvalidParams("fiber parameter t must be positive");
    double kd = static_cast<double>(k);
    double p = params.p, q = params.q;
    double cv = params.gamma / (4.0 * p * M_PI);
    double cq = params.b / q;
    double e_grad = 2.0 * kd;
    double e_mass = 2.0 * (kd - 1.0);
    double e_conv = 2.0 * (kd * p - 2.0);
    double e_lq = kd * q - 2.0;
    double lt = std::log(t);

    PsiValue v;
    v.psi = 0.5 * std::pow(t, e_grad) * s.A +
            0.5 * std::pow(t, e_mass) * s.B +
            cv * std::pow(t, e_conv) * (s.C - s.D * lt) -
            cq * std::pow(t, e_lq) * s.E;
    v.dpsi = kd * std::pow(t, e_grad - 1.0) * s.A +
             (kd - 1.0) * std::pow(t, e_mass - 1.0) * s.B +
             cv * std::pow(t, e_conv - 1.0) *
                 (e_conv * (s.C - s.D * lt) - s.D) -
             cq * e_lq * std::pow(t, e_lq - 1.0) * s.E;
    return v;
}

FiberScalars dilate_scalars(const FiberScalars& s, double t, int k,
                            const Params& params) {
    if (!(t > 0.0)) throw InvalidParams("fiber parameter t must be positive");
    double kd = static_cast<double>(k);
    double e_conv = 2.0 * (kd * params.p - 2.0);
    FiberScalars out;
    out.A = std::pow(t, 2.0 * kd) * s.A;
    out.B = std::pow(t, 2.0 * (kd - 1.0)) * s.B;
    out.C = std::pow(t, e_conv) * (s.C - s.D * std::log(t));
    out.D = std::pow(t, e_conv) * s.D;
    out.E = std::pow(t, kd * params.q - 2.0) * s.E;
    return out;
}

double fiber_root(const FiberScalars& s, int k, const Params& params) {
    if (s.A <= 0.0 && s.B <= 0.0)
        throw ZeroField("dilation fiber of the zero field");
    auto dpsi = [&](double t) { return psi_eval(s, k, t, params).dpsi; };

    // Log-spaced scan for the (+ -> -) sign change.
    const double t_lo = 1e-8, t_hi = 1e8;
    const int steps = 800;
    double prev_t = t_lo;
    double prev = dpsi(prev_t);
    if (prev == 0.0) return prev_t;
    bool seen_positive = prev > 0.0;
    double lo = 0.0, hi = 0.0;
    for (int i = 1; i <= steps; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / steps);
        double cur = dpsi(t);
        if (cur == 0.0) return t;  // scan point exactly on the root
        if (seen_positive && prev > 0.0 && cur < 0.0) {
            lo = prev_t;
            hi = t;
            break;
        }
        seen_positive = seen_positive || cur > 0.0;
        prev = cur;
        prev_t = t;
    }
    if (hi == 0.0)
        throw NoSignChange(
            "dilation fiber derivative shows no (+ -> -) sign change on "
            "[1e-8, 1e8]");
    while (hi - lo > kRelTol * hi) {
        double mid = 0.5 * (lo + hi);
        double fm = dpsi(mid);
        if (fm == 0.0) return mid;
        (fm > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Field dilate(const Field& u, double t, int k) {
    if (!(t > 0.0)) throw InvalidParams("dilation factor must be positive");
    if (t == 1.0) return u;
    int n = u.n();
    double h = u.spacing();
    double L = u.spec().half_width;
    double amp = std::pow(t, static_cast<double>(k));
    std::vector<double> v(u.values().size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double X = t * u.spec().coord(i);
        double gi = (X + L) / h - 0.5;
        int i0 = static_cast<int>(std::floor(gi));
        double fi = gi - i0;
        for (int j = 0; j < n; ++j) {
            double Y = t * u.spec().coord(j);
            double gj = (Y + L) / h - 0.5;
            int j0 = static_cast<int>(std::floor(gj));
            double fj = gj - j0;
            auto val = [&](int a, int b) -> double {
                if (a < 0 || a >= n || b < 0 || b >= n) return 0.0;
                return u(a, b);
            };
            double interp = (1.0 - fi) * (1.0 - fj) * val(i0, j0) +
                            fi * (1.0 - fj) * val(i0 + 1, j0) +
                            (1.0 - fi) * fj * val(i0, j0 + 1) +
                            fi * fj * val(i0 + 1, j0 + 1);
            v[static_cast<std::size_t>(i) * n + j] = amp * interp;
        }
    }
    return Field(u.spec(), std::move(v));
}

Projection fiber_project(const Field& u, const Params& params,
                         const LogKernel& kernel) {
    if (!params.fiber_ok)
        throw RegimeViolation(
            "dilation fibering requires q >= 2p-2 and q > 2, and q >= 2p-1 "
            "when p < 3");
    if (!params.a.is_constant())
        throw RegimeViolation(
            "dilation fibering is defined for a constant coefficient");
    EnergyScalars es = energy_scalars(u, params, kernel);
    if (es.h1_sq <= 0.0) throw ZeroField("cannot project the zero field");
    double t = fiber_root(FiberScalars::from(es), params.fiber_k, params);
    return Projection{t, dilate(u, t, params.fiber_k)};
}

}  // namespace lognewton
