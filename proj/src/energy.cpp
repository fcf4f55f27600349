#include "lognewton/energy.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace lognewton {

Params Params::make(double p, double q, double gamma, double b,
                    Coefficient a) {
    if (!(p >= 2.0)) throw InvalidParams("p must satisfy p >= 2");
    if (!(q >= 2.0)) throw InvalidParams("q must satisfy q >= 2");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InvalidParams("gamma must be nonnegative");
    if (!(b >= 0.0) || !std::isfinite(b))
        throw InvalidParams("b must be nonnegative");
    Params out;
    out.p = p;
    out.q = q;
    out.gamma = gamma;
    out.b = b;
    out.a = std::move(a);
    out.nehari_ok = q >= 2.0 * p;
    out.fiber_k = (p >= 3.0) ? 1 : 2;
    out.fiber_ok = (q >= 2.0 * p - 2.0) && (q > 2.0) &&
                   (p >= 3.0 || q >= 2.0 * p - 1.0);
    return out;
}

double energy_from_scalars(const EnergyScalars& s, const Params& params) {
    return 0.5 * s.h1_sq +
           params.gamma / (4.0 * params.p * M_PI) * s.v0 -
           params.b / params.q * s.lq_q;
}

double nehari_from_scalars(const EnergyScalars& s, const Params& params) {
    return s.h1_sq + params.gamma / (2.0 * M_PI) * s.v0 -
           params.b * s.lq_q;
}

double pohozaev_from_scalars(const EnergyScalars& s, const Params& params) {
    return params.gamma / (4.0 * M_PI * params.p) * s.lp_p * s.lp_p +
           params.gamma / (M_PI * params.p) * s.v0 -
           2.0 * params.b / params.q * s.lq_q + s.a_l2;
}

double jk_from_scalars(const EnergyScalars& s, const Params& params, int k) {
    double kd = static_cast<double>(k);
    return kd * s.grad_sq + (kd - 1.0) * s.a_l2 -
           (kd * params.q - 2.0) * params.b / params.q * s.lq_q -
           params.gamma / (4.0 * M_PI * params.p) * s.lp_p * s.lp_p +
           params.gamma * (kd * params.p - 2.0) /
               (2.0 * params.p * M_PI) * s.v0;
}

namespace {

void require_kernel_grid(const Field& u, const LogKernel& kernel) {
    if (!(u.spec() == kernel.spec()))
        throw GridMismatch("field does not match the kernel grid");
}

void require_coefficient_grid(const Field& u, const Coefficient& a) {
    if (const GridSpec* g = a.grid(); g && !(*g == u.spec()))
        throw GridMismatch("sampled coefficient does not match the grid");
}

// Plain sums shared by the scalar and the report paths.  The convolution
// g = log * |u|^p is passed in so one transform serves V0 and the gradient.
EnergyScalars scalars_with_conv(const Field& u, const Params& params,
                                const Field& density, const Field& conv) {
    EnergyScalars s;
    int n = u.n();
    double h = u.spacing();
    double sq = 0.0, sa = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = u(i, j);
            sq += std::pow(std::fabs(x), params.q);
            sa += params.a.value_at(i, j) * x * x;
        }
    }
    double h2 = h * h;
    s.lq_q = h2 * sq;
    s.a_l2 = h2 * sa;
    s.grad_sq = grad_square_sum(u);
    s.h1_sq = s.grad_sq + s.a_l2;
    s.lp_p = integrate(density);
    s.v0 = inner_l2(density, conv);
    return s;
}

}  // namespace

EnergyScalars energy_scalars(const Field& u, const Params& params,
                             const LogKernel& kernel) {
    require_kernel_grid(u, kernel);
    require_coefficient_grid(u, params.a);
    Field density = abs_pow(u, params.p);
    Field conv = kernel.convolve(density, RadialKernel::Log);
    return scalars_with_conv(u, params, density, conv);
}

EnergyReport energy_report(const Field& u, const Params& params,
                           const LogKernel& kernel) {
    require_kernel_grid(u, kernel);
    require_coefficient_grid(u, params.a);
    Field density = abs_pow(u, params.p);
    Field conv = kernel.convolve(density, RadialKernel::Log);
    EnergyScalars s = scalars_with_conv(u, params, density, conv);

    EnergyReport r;
    r.vsplit.v0 = s.v0;
    r.vsplit.v1 =
        inner_l2(density, kernel.convolve(density, RadialKernel::LogOnePlus));
    r.vsplit.v2 = inner_l2(
        density, kernel.convolve(density, RadialKernel::LogOnePlusInverse));
    r.I = energy_from_scalars(s, params);
    r.nehari = nehari_from_scalars(s, params);
    r.P = pohozaev_from_scalars(s, params);
    r.J1 = jk_from_scalars(s, params, 1);
    r.J2 = jk_from_scalars(s, params, 2);
    r.h1_sq = s.h1_sq;
    r.grad_sq = s.grad_sq;
    r.lp_p = s.lp_p;
    r.lq_q = s.lq_q;
    r.a_l2 = s.a_l2;
    r.variable_a_heuristic = !params.a.is_constant();
    return r;
}

GradientAndScalars gradient_and_scalars(const Field& u, const Params& params,
                                        const LogKernel& kernel) {
    require_kernel_grid(u, kernel);
    require_coefficient_grid(u, params.a);
    Field density = abs_pow(u, params.p);
    Field conv = kernel.convolve(density, RadialKernel::Log);
    EnergyScalars s = scalars_with_conv(u, params, density, conv);

    Field lap = laplacian_apply(u);
    int n = u.n();
    std::vector<double> g(u.values().size());
    double cgamma = params.gamma / (2.0 * M_PI);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = u(i, j);
            double nonlocal = 0.0;
            if (params.gamma != 0.0 && x != 0.0)
                nonlocal = cgamma * conv(i, j) *
                           std::copysign(
                               std::pow(std::fabs(x), params.p - 1.0), x);
            double local = 0.0;
            if (params.b != 0.0 && x != 0.0)
                local = params.b *
                        std::copysign(
                            std::pow(std::fabs(x), params.q - 1.0), x);
            g[static_cast<std::size_t>(i) * n + j] =
                -lap(i, j) + params.a.value_at(i, j) * x + nonlocal - local;
        }
    }
    return GradientAndScalars{Field(u.spec(), std::move(g)), s};
}

Field gradient(const Field& u, const Params& params, const LogKernel& kernel) {
    return gradient_and_scalars(u, params, kernel).grad;
}

namespace {

// Cached DST-I plans per grid size.  Execution through the new-array
// interface is safe from concurrent threads; creation is serialized.
struct DstPlan {
    int n = 0;
    fftw_plan plan = nullptr;  // 2-D RODFT00, unnormalized
    ~DstPlan() {
        if (plan) fftw_destroy_plan(plan);
    }
};

std::mutex& dst_mutex() {
    static std::mutex m;
    return m;
}

std::shared_ptr<const DstPlan> dst_plan_for(int n) {
    static std::map<int, std::shared_ptr<const DstPlan>> cache;
    std::lock_guard<std::mutex> lock(dst_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto entry = std::make_shared<DstPlan>();
    entry->n = n;
    std::size_t nn = static_cast<std::size_t>(n) * n;
    double* buf = static_cast<double*>(fftw_malloc(nn * sizeof(double)));
    entry->plan = fftw_plan_r2r_2d(n, n, buf, buf, FFTW_RODFT00, FFTW_RODFT00,
                                   FFTW_ESTIMATE);
    fftw_free(buf);
    cache[n] = entry;
    return entry;
}

}  // namespace

Field precondition(const Field& r, const Coefficient& a) {
    int n = r.n();
    double h = r.spacing();
    double abar = a.mean();
    auto plan = dst_plan_for(n);

    std::size_t nn = static_cast<std::size_t>(n) * n;
    double* buf = static_cast<double*>(fftw_malloc(nn * sizeof(double)));
    auto rv = r.values();
    std::copy(rv.begin(), rv.end(), buf);
    fftw_execute_r2r(plan->plan, buf, buf);

    // Eigenvalues of -Delta_h with Dirichlet exterior: mode (k1+1, k2+1).
    double inv_h2 = 1.0 / (h * h);
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k) {
        double s = std::sin(M_PI * (k + 1) / (2.0 * (n + 1)));
        lam[k] = 4.0 * inv_h2 * s * s;
    }
    double norm = 1.0 / (4.0 * (n + 1.0) * (n + 1.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            buf[static_cast<std::size_t>(i) * n + j] *=
                norm / (lam[i] + lam[j] + abar);

    fftw_execute_r2r(plan->plan, buf, buf);
    std::vector<double> out(buf, buf + nn);
    fftw_free(buf);
    return Field(r.spec(), std::move(out));
}

double h1_norm(const Field& u, const Coefficient& a) {
    int n = u.n();
    double h = u.spacing();
    double sa = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sa += a.value_at(i, j) * u(i, j) * u(i, j);
    return std::sqrt(grad_square_sum(u) + h * h * sa);
}

double residual_norm(const Field& u, const Params& params,
                     const LogKernel& kernel) {
    Field g = gradient(u, params, kernel);
    Field d = precondition(g, params.a);
    double num = h1_norm(d, params.a);
    double den = std::max(1.0, h1_norm(u, params.a));
    return num / den;
}

}  // namespace lognewton
