#ifndef LOGNEWTON_MANIFOLDS_HPP
#define LOGNEWTON_MANIFOLDS_HPP

#include "lognewton/energy.hpp"

namespace lognewton {

/// The five scalars the dilation fiber energy is a closed form of.
struct FiberScalars {
    double A = 0.0;  // int |grad u|^2
    double B = 0.0;  // int a u^2
    double C = 0.0;  // V0(u)
    double D = 0.0;  // (int |u|^p)^2
    double E = 0.0;  // int |u|^q

    static FiberScalars from(const EnergyScalars& s) {
        return {s.grad_sq, s.a_l2, s.v0, s.lp_p * s.lp_p, s.lq_q};
    }
};

/// Amplitude fibering dichotomy for phi_u(t) = I(t u).
struct FiberCase {
    enum Kind { UniqueMax, MonotoneUp } kind = MonotoneUp;
    double t_max = 0.0;  // set for UniqueMax
};

/// phi'_u(t)/t = ||u||_{H^1}^2 + (gamma/2pi) t^(2p-2) V0 - b t^(q-2) ||u||_q^q
double phi_prime_over_t(const EnergyScalars& s, double t,
                        const Params& params);

/// Classifies the ray by bracketing phi'/t; UniqueMax carries the root.
FiberCase classify_amplitude_fiber(const EnergyScalars& s,
                                   const Params& params);

/// Root of phi'_u on the ray through the given scalars (amplitude t*).
/// Throws NoNehariRoot in the monotone case.
double nehari_root(const EnergyScalars& s, const Params& params);

struct Projection {
    double t = 1.0;
    Field field;
};

/// Scales u onto the Nehari manifold.  Requires q >= 2p.
Projection nehari_project(const Field& u, const Params& params,
                          const LogKernel& kernel);

struct PsiValue {
    double psi = 0.0;
    double dpsi = 0.0;
};

/// Closed-form dilation fiber energy psi_{u,k}(t) = I(t^k u(t x)) and its
/// t-derivative, evaluated from the scalars (no regridding).
PsiValue psi_eval(const FiberScalars& s, int k, double t,
                  const Params& params);

/// Exact scalar transform under u -> t^k u(t x).
FiberScalars dilate_scalars(const FiberScalars& s, double t, int k,
                            const Params& params);

/// Unique positive root of psi'; log-spaced scan for the +/- sign change,
/// then bisection.  Throws NoSignChange when the scan finds none.
double fiber_root(const FiberScalars& s, int k, const Params& params);

/// t^k u(t x) by bilinear interpolation; points outside the grid read 0.
Field dilate(const Field& u, double t, int k);

/// Dilates u onto M_k = { J_k = 0 }.  Requires the fiber regime and a
/// constant coefficient.
Projection fiber_project(const Field& u, const Params& params,
                         const LogKernel& kernel);

}  // namespace lognewton

#endif
