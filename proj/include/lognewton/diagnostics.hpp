#ifndef LOGNEWTON_DIAGNOSTICS_HPP
#define LOGNEWTON_DIAGNOSTICS_HPP

#include "lognewton/solver.hpp"

namespace lognewton {

struct RadialBin {
    double radius = 0.0;  // bin midpoint radius
    double mean = 0.0;
    double max_dev = 0.0;  // max |value - mean| within the bin
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

struct SymmetryReport {
    std::array<double, 2> center{0.0, 0.0};
    std::vector<RadialBin> radial_profile;  // bin width h over [0, 0.8 L]
    double angular_rel_dev = 0.0;
    int monotone_violations = 0;  // innermost two bins excluded
};

SymmetryReport symmetry_report(const Field& u);

struct DecayFit {
    double rate = 0.0;  // A in |u| <= C exp(-A r)
    double r2 = 0.0;
    std::array<double, 2> window{0.0, 0.0};
    int points = 0;
};

/// Least squares of log(radial max |u|) against r over [0.3 L, 0.7 L],
/// using only values above the 1e-13 noise floor.
DecayFit decay_fit(const Field& u);

/// Max over the annulus 0.6 L <= r <= 0.8 L (measured from the mass center
/// of |u|^p) of |w(x) - (1/2pi) log(r) int |u|^p|.
double far_field_check(const Field& u, double p, const LogKernel& kernel);

struct ConsistencyReport {
    double level_gap_rel = 0.0;
    double pohozaev_nehari = 0.0;
    double pohozaev_fiber = 0.0;
    bool sign_ok_nehari = false;
    bool sign_ok_fiber = false;
    SymmetryReport sym_nehari;
    SymmetryReport sym_fiber;
    DecayFit decay_nehari;
    DecayFit decay_fiber;
};

/// Cross-mode comparison of two converged runs with identical parameters.
ConsistencyReport consistency_suite(const GroundStateResult& nehari,
                                    const GroundStateResult& fiber);

/// min(u) >= -1e-10 * max(u) after sign normalization.
bool sign_check(const Field& u);

}  // namespace lognewton

#endif
