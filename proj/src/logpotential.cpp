#include "lognewton/logpotential.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

namespace lognewton {

namespace {

// FFTW planning (and plan destruction) share global state; executes do not.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    double* ptr = nullptr;
    explicit FftwBuffer(std::size_t count)
        : ptr(static_cast<double*>(fftw_malloc(count * sizeof(double)))) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct FftwComplexBuffer {
    fftw_complex* ptr = nullptr;
    explicit FftwComplexBuffer(std::size_t count)
        : ptr(static_cast<fftw_complex*>(
              fftw_malloc(count * sizeof(fftw_complex)))) {}
    ~FftwComplexBuffer() { fftw_free(ptr); }
    FftwComplexBuffer(const FftwComplexBuffer&) = delete;
    FftwComplexBuffer& operator=(const FftwComplexBuffer&) = delete;
};

// 64-point Gauss-Legendre on [0, 1].
struct GaussLegendre {
    std::vector<double> x, w;
    GaussLegendre() {
        const int m = 64;
        x.resize(m);
        w.resize(m);
        for (int i = 0; i < m; ++i) {
            // Newton iteration from the Chebyshev initial guess.
            double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int k = 0; k < m; ++k) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
                }
                double dp = m * (t * p0 - p1) / (t * t - 1.0);
                double dt = p0 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < m; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
            }
            double dp = m * (t * p0 - p1) / (t * t - 1.0);
            x[i] = 0.5 * (1.0 + t);
            w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

// int_0^R r log(r) dr
double radial_log(double R) { return 0.5 * R * R * (std::log(R) - 0.5); }

// int_0^R r log(1+r) dr
double radial_log1p(double R) {
    return 0.5 * (R * R - 1.0) * std::log1p(R) - 0.25 * R * R + 0.5 * R;
}

// int_0^R r log(1+1/r) dr
double radial_log1p_inv(double R) { return radial_log1p(R) - radial_log(R); }

}  // namespace

double kernel_offset_value(RadialKernel k, double r) {
    switch (k) {
        case RadialKernel::Log:
            return std::log(r);
        case RadialKernel::LogOnePlus:
            return std::log1p(r);
        case RadialKernel::LogOnePlusInverse:
            return std::log1p(1.0 / r);
    }
    return 0.0;
}

double cell_averaged_origin(RadialKernel k, double h) {
    static const GaussLegendre gl;
    double (*radial)(double) = nullptr;
    switch (k) {
        case RadialKernel::Log: radial = radial_log; break;
        case RadialKernel::LogOnePlus: radial = radial_log1p; break;
        case RadialKernel::LogOnePlusInverse: radial = radial_log1p_inv; break;
    }
    // Square [-h/2, h/2]^2 split into 8 congruent triangles; each is
    // { 0 <= theta <= pi/4, 0 <= r <= (h/2)/cos(theta) } after rotation.
    double a = 0.5 * h;
    double sum = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
        double theta = 0.25 * M_PI * gl.x[i];
        sum += gl.w[i] * radial(a / std::cos(theta));
    }
    sum *= 0.25 * M_PI;
    return 8.0 * sum / (h * h);
}

struct LogKernel::Impl {
    GridSpec grid;
    int m = 0;  // padded side length 2n
    double k0_log = 0.0, k0_log1p = 0.0, k0_log1p_inv = 0.0;
    std::vector<double> log_samples;  // m x m wrapped spatial samples
    // r2c spectra of the three padded kernels, m x (m/2+1).
    std::vector<std::complex<double>> spec_log, spec_log1p, spec_log1p_inv;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

LogKernel LogKernel::build(const GridSpec& spec,
                           std::optional<double> k0_override) {
    auto impl = std::make_shared<Impl>();
    impl->grid = spec;
    int n = spec.n;
    int m = 2 * n;
    impl->m = m;
    double h = spec.spacing;

    impl->k0_log = k0_override ? *k0_override
                               : cell_averaged_origin(RadialKernel::Log, h);
    impl->k0_log1p = cell_averaged_origin(RadialKernel::LogOnePlus, h);
    impl->k0_log1p_inv =
        cell_averaged_origin(RadialKernel::LogOnePlusInverse, h);

    std::size_t mm = static_cast<std::size_t>(m) * m;
    std::size_t mc = static_cast<std::size_t>(m) * (m / 2 + 1);

    std::vector<double> k_log(mm), k_log1p(mm), k_log1p_inv(mm);
    impl->log_samples.resize(mm);
    for (int a = 0; a < m; ++a) {
        int oa = (a <= n) ? a : a - m;
        for (int b = 0; b < m; ++b) {
            int ob = (b <= n) ? b : b - m;
            std::size_t idx = static_cast<std::size_t>(a) * m + b;
            if (oa == 0 && ob == 0) {
                k_log[idx] = impl->k0_log;
                k_log1p[idx] = impl->k0_log1p;
                k_log1p_inv[idx] = impl->k0_log1p_inv;
            } else {
                double r = h * std::hypot(static_cast<double>(oa),
                                          static_cast<double>(ob));
                k_log[idx] = std::log(r);
                k_log1p[idx] = std::log1p(r);
                k_log1p_inv[idx] = std::log1p(1.0 / r);
            }
            impl->log_samples[idx] = k_log[idx];
        }
    }

    FftwBuffer real(mm);
    FftwComplexBuffer cplx(mc);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        impl->fwd = fftw_plan_dft_r2c_2d(m, m, real.ptr, cplx.ptr,
                                         FFTW_ESTIMATE);
        impl->bwd = fftw_plan_dft_c2r_2d(m, m, cplx.ptr, real.ptr,
                                         FFTW_ESTIMATE);
    }

    auto transform = [&](const std::vector<double>& src,
                         std::vector<std::complex<double>>& dst) {
        std::copy(src.begin(), src.end(), real.ptr);
        fftw_execute_dft_r2c(impl->fwd, real.ptr, cplx.ptr);
        dst.resize(mc);
        for (std::size_t i = 0; i < mc; ++i)
            dst[i] = {cplx.ptr[i][0], cplx.ptr[i][1]};
    };
    transform(k_log, impl->spec_log);
    transform(k_log1p, impl->spec_log1p);
    transform(k_log1p_inv, impl->spec_log1p_inv);

    LogKernel kernel;
    kernel.impl_ = std::move(impl);
    return kernel;
}

const GridSpec& LogKernel::spec() const { return impl_->grid; }

double LogKernel::k0() const { return impl_->k0_log; }

double LogKernel::origin_value(RadialKernel k) const {
    switch (k) {
        case RadialKernel::Log: return impl_->k0_log;
        case RadialKernel::LogOnePlus: return impl_->k0_log1p;
        case RadialKernel::LogOnePlusInverse: return impl_->k0_log1p_inv;
    }
    return 0.0;
}

double LogKernel::sample(int dx, int dy) const {
    int m = impl_->m;
    int a = ((dx % m) + m) % m;
    int b = ((dy % m) + m) % m;
    return impl_->log_samples[static_cast<std::size_t>(a) * m + b];
}

Field LogKernel::convolve(const Field& f, RadialKernel k) const {
    if (!(f.spec() == impl_->grid))
        throw GridMismatch("field does not match the kernel grid");
    const std::vector<std::complex<double>>* spec = nullptr;
    switch (k) {
        case RadialKernel::Log: spec = &impl_->spec_log; break;
        case RadialKernel::LogOnePlus: spec = &impl_->spec_log1p; break;
        case RadialKernel::LogOnePlusInverse:
            spec = &impl_->spec_log1p_inv;
            break;
    }
    int n = impl_->grid.n;
    int m = impl_->m;
    std::size_t mm = static_cast<std::size_t>(m) * m;
    std::size_t mc = static_cast<std::size_t>(m) * (m / 2 + 1);

    FftwBuffer real(mm);
    FftwComplexBuffer cplx(mc);
    std::fill(real.ptr, real.ptr + mm, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            real.ptr[static_cast<std::size_t>(i) * m + j] = f(i, j);

    fftw_execute_dft_r2c(impl_->fwd, real.ptr, cplx.ptr);
    for (std::size_t i = 0; i < mc; ++i) {
        std::complex<double> v{cplx.ptr[i][0], cplx.ptr[i][1]};
        v *= (*spec)[i];
        cplx.ptr[i][0] = v.real();
        cplx.ptr[i][1] = v.imag();
    }
    fftw_execute_dft_c2r(impl_->bwd, cplx.ptr, real.ptr);

    double h = impl_->grid.spacing;
    double scale = h * h / (static_cast<double>(m) * m);
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[static_cast<std::size_t>(i) * n + j] =
                scale * real.ptr[static_cast<std::size_t>(i) * m + j];
    return Field(f.spec(), std::move(out));
}

Field conv_log(const Field& f, const LogKernel& kernel) {
    return kernel.convolve(f, RadialKernel::Log);
}

Field potential_w(const Field& u, double p, const LogKernel& kernel) {
    if (p < 2.0) throw BadExponent("p must satisfy p >= 2");
    Field density = abs_pow(u, p);
    return scale(kernel.convolve(density, RadialKernel::Log),
                 1.0 / (2.0 * M_PI));
}

VSplit v_split(const Field& u, double p, const LogKernel& kernel) {
    if (p < 2.0) throw BadExponent("p must satisfy p >= 2");
    Field density = abs_pow(u, p);
    VSplit out;
    out.v0 = inner_l2(density, kernel.convolve(density, RadialKernel::Log));
    out.v1 =
        inner_l2(density, kernel.convolve(density, RadialKernel::LogOnePlus));
    out.v2 = inner_l2(
        density, kernel.convolve(density, RadialKernel::LogOnePlusInverse));
    return out;
}

VSplit direct_v0_oracle(const Field& u, double p) {
    if (p < 2.0) throw BadExponent("p must satisfy p >= 2");
    int n = u.n();
    if (n > 32) throw GridTooLarge("direct summation refuses n > 32");
    double h = u.spacing();
    Field density = abs_pow(u, p);

    double o0 = cell_averaged_origin(RadialKernel::Log, h);
    double o1 = cell_averaged_origin(RadialKernel::LogOnePlus, h);
    double o2 = cell_averaged_origin(RadialKernel::LogOnePlusInverse, h);

    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double fx = density(i, j);
            if (fx == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    double fy = density(k, l);
                    if (fy == 0.0) continue;
                    double w = fx * fy;
                    if (i == k && j == l) {
                        s0 += w * o0;
                        s1 += w * o1;
                        s2 += w * o2;
                    } else {
                        double r = h * std::hypot(static_cast<double>(i - k),
                                                  static_cast<double>(j - l));
                        s0 += w * std::log(r);
                        s1 += w * std::log1p(r);
                        s2 += w * std::log1p(1.0 / r);
                    }
                }
            }
        }
    }
    double h4 = h * h * h * h;
    return VSplit{h4 * s0, h4 * s1, h4 * s2};
}

}  // namespace lognewton
