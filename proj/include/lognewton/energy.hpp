#ifndef LOGNEWTON_ENERGY_HPP
#define LOGNEWTON_ENERGY_HPP

#include "lognewton/grid.hpp"
#include "lognewton/logpotential.hpp"

namespace lognewton {

/// PDE parameters with the regime flags of the two existence theorems.
struct Params {
    double p = 2.0;
    double q = 4.0;
    double gamma = 1.0;
    double b = 1.0;
    Coefficient a = Coefficient::constant(1.0);

    bool nehari_ok = false;  // q >= 2p
    int fiber_k = 2;         // 1 iff p >= 3, else 2
    bool fiber_ok = false;   // q >= 2p-2, q > 2, and q >= 2p-1 when p < 3

    static Params make(double p, double q, double gamma, double b,
                       Coefficient a);
};

/// The scalar integrals everything downstream is built from.
struct EnergyScalars {
    double grad_sq = 0.0;  // int |grad u|^2
    double a_l2 = 0.0;     // int a u^2
    double h1_sq = 0.0;    // grad_sq + a_l2
    double lp_p = 0.0;     // int |u|^p
    double lq_q = 0.0;     // int |u|^q
    double v0 = 0.0;       // V0(u)
};

struct EnergyReport {
    double I = 0.0;
    double nehari = 0.0;  // <I'(u), u>
    double P = 0.0;
    double J1 = 0.0;
    double J2 = 0.0;
    VSplit vsplit;
    double h1_sq = 0.0;
    double grad_sq = 0.0;
    double lp_p = 0.0;
    double lq_q = 0.0;
    double a_l2 = 0.0;
    /// J_k with sampled a substitutes int a u^2 for the constant-a term.
    bool variable_a_heuristic = false;
};

double energy_from_scalars(const EnergyScalars& s, const Params& params);
double nehari_from_scalars(const EnergyScalars& s, const Params& params);
double pohozaev_from_scalars(const EnergyScalars& s, const Params& params);
double jk_from_scalars(const EnergyScalars& s, const Params& params, int k);

/// One-convolution evaluation of the scalar integrals.
EnergyScalars energy_scalars(const Field& u, const Params& params,
                             const LogKernel& kernel);

/// Full report including the V0/V1/V2 split (three convolutions).
EnergyReport energy_report(const Field& u, const Params& params,
                           const LogKernel& kernel);

/// Exact gradient of the discrete energy with respect to cell values,
/// scaled so that d/de I(u + e v)|_0 = h^2 sum(grad * v).
Field gradient(const Field& u, const Params& params, const LogKernel& kernel);

struct GradientAndScalars {
    Field grad;
    EnergyScalars scalars;
};

/// Gradient and scalars sharing one kernel convolution.
GradientAndScalars gradient_and_scalars(const Field& u, const Params& params,
                                        const LogKernel& kernel);

/// Solves (-Delta_h + abar) g = r in the discrete sine basis, abar being the
/// constant coefficient value (or the mean when sampled).
Field precondition(const Field& r, const Coefficient& a);

/// || precondition(gradient(u)) ||_{H^1} / max(1, ||u||_{H^1}).
double residual_norm(const Field& u, const Params& params,
                     const LogKernel& kernel);

/// sqrt(int |grad u|^2 + a u^2).
double h1_norm(const Field& u, const Coefficient& a);

}  // namespace lognewton

#endif
