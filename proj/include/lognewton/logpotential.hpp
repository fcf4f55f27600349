#ifndef LOGNEWTON_LOGPOTENTIAL_HPP
#define LOGNEWTON_LOGPOTENTIAL_HPP

#include <memory>
#include <optional>

#include "lognewton/grid.hpp"

namespace lognewton {

/// The three radial kernels of the split log(r) = log(1+r) - log(1+1/r).
enum class RadialKernel { Log, LogOnePlus, LogOnePlusInverse };

/// Kernel value at separation r > 0.
double kernel_offset_value(RadialKernel k, double r);

/// Cell average (1/h^2) int_{[-h/2,h/2]^2} k(|x|) dx.  The radial integrals
/// have closed forms; the angular integral is done with Gauss-Legendre, so
/// the result is accurate to machine precision.  All three kernels use the
/// same rule, which keeps the split identity exact at the zero offset.
double cell_averaged_origin(RadialKernel k, double h);

struct VSplit {
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
};

/// Sampled kernels on the (2n)x(2n) padded offset grid plus their cached
/// spectral transforms.  Immutable and cheap to copy; concurrent convolve
/// calls on one kernel are safe and give identical results.
class LogKernel {
  public:
    static LogKernel build(const GridSpec& spec,
                           std::optional<double> k0_override = std::nullopt);

    const GridSpec& spec() const;

    /// Zero-offset value of the log kernel (cell average unless overridden).
    double k0() const;

    /// Zero-offset value of the requested kernel.
    double origin_value(RadialKernel k) const;

    /// Log-kernel sample at integer cell offset (dx, dy), |dx|,|dy| <= n.
    double sample(int dx, int dy) const;

    /// g(x) = h^2 sum_y k(x - y) f(y) as zero-padded linear convolution.
    Field convolve(const Field& f, RadialKernel k = RadialKernel::Log) const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Convolution with the log kernel: h^2 sum_y log|x-y| f(y).
Field conv_log(const Field& f, const LogKernel& kernel);

/// w = (1/2pi) log * |u|^p.
Field potential_w(const Field& u, double p, const LogKernel& kernel);

/// V0, V1, V2 of u, each via its own kernel convolution.
VSplit v_split(const Field& u, double p, const LogKernel& kernel);

/// Exact O(n^4) double sums over all cell pairs with the same zero-offset
/// convention.  Validation oracle; refuses n > 32.
VSplit direct_v0_oracle(const Field& u, double p);

}  // namespace lognewton

#endif
