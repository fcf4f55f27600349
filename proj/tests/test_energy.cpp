#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lognewton/energy.hpp"
#include "testutil.hpp"

using namespace lognewton;
using testutil::rel_err;

namespace {

Params make_params(double p, double q, double gamma, double b,
                   double a0 = 1.0) {
    return Params::make(p, q, gamma, b, Coefficient::constant(a0));
}

}  // namespace

TEST_CASE("regime flags") {
    Params np = make_params(2, 4, 1, 1);
    CHECK(np.nehari_ok);
    CHECK(np.fiber_k == 2);
    CHECK(np.fiber_ok);  // q = 4 >= 2p-1 = 3

    Params border = make_params(2, 3, 1, 1);
    CHECK_FALSE(border.nehari_ok);  // q = 3 < 4
    CHECK(border.fiber_ok);         // q = 3 >= 2p-1 = 3

    Params p3 = make_params(3, 4, 1, 1);
    CHECK(p3.fiber_k == 1);
    CHECK_FALSE(p3.nehari_ok);
    CHECK(p3.fiber_ok);  // q = 4 >= 2p-2 = 4 and p >= 3

    Params excluded = make_params(2.5, 3.5, 1, 1);
    CHECK_FALSE(excluded.fiber_ok);  // 2p-2 = 3 <= q < 2p-1 = 4, p < 3

    CHECK_THROWS_AS(make_params(1.5, 4, 1, 1), InvalidParams);
    CHECK_THROWS_AS(make_params(2, 1.5, 1, 1), InvalidParams);
    CHECK_THROWS_AS(make_params(2, 4, -1, 1), InvalidParams);
    CHECK_THROWS_AS(make_params(2, 4, 1, -1), InvalidParams);
}

TEST_CASE("zero field report") {
    GridSpec g = make_grid(16, 4.0);
    LogKernel kernel = LogKernel::build(g);
    EnergyReport r = energy_report(Field(g), make_params(2, 4, 1, 1), kernel);
    CHECK(r.I == 0.0);
    CHECK(r.nehari == 0.0);
    CHECK(r.P == 0.0);
    CHECK(r.J1 == 0.0);
    CHECK(r.J2 == 0.0);
    CHECK(r.h1_sq == 0.0);
    CHECK(r.lq_q == 0.0);
}

TEST_CASE("b = 0: I - h1/2 is exactly the convolution term") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    Params params = make_params(2, 4, 1.3, 0.0);
    Field u = testutil::random_smooth_field(g, 17);
    EnergyReport r = energy_report(u, params, kernel);
    double expect = params.gamma / (4.0 * params.p * M_PI) * r.vsplit.v0;
    CHECK(rel_err(r.I - 0.5 * r.h1_sq, expect) < 1e-12);
}

TEST_CASE("report agrees with the direct oracle path") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    Params params = make_params(2, 4, 1, 1);
    Field u = testutil::random_rough_field(g, 23);
    EnergyReport r = energy_report(u, params, kernel);
    VSplit oracle = direct_v0_oracle(u, params.p);
    auto a = Coefficient::constant(1.0);
    NormReport nr = norms(u, params.p, params.q, a);
    double I_oracle = 0.5 * nr.h1_sq +
                      params.gamma / (4.0 * params.p * M_PI) * oracle.v0 -
                      params.b / params.q * std::pow(nr.lq, params.q);
    CHECK(rel_err(r.I, I_oracle) < 1e-10);
}

TEST_CASE("J_k identity holds for arbitrary fields") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    for (double p : {2.0, 2.5, 3.0}) {
        for (double q : {4.0, 6.0}) {
            Params params = make_params(p, q, 0.9, 1.1);
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Field u = testutil::random_rough_field(g, 100 + seed);
                EnergyReport r = energy_report(u, params, kernel);
                CHECK(rel_err(r.J1, 1.0 * r.nehari - r.P) < 1e-10);
                CHECK(rel_err(r.J2, 2.0 * r.nehari - r.P) < 1e-10);
            }
        }
    }
}

TEST_CASE("gradient: zero field and the linear case") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    Params params = make_params(2, 4, 1, 1);
    Field zero_grad = gradient(Field(g), params, kernel);
    for (double x : zero_grad.values()) CHECK(x == 0.0);

    Params linear = make_params(2, 4, 0.0, 0.0, 0.7);
    Field u = testutil::random_rough_field(g, 31);
    Field grad = gradient(u, linear, kernel);
    Field expect = axpy(scale(laplacian_apply(u), -1.0), 0.7, u);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            worst = std::max(worst, std::fabs(grad(i, j) - expect(i, j)));
    CHECK(worst < 1e-12);
}

TEST_CASE("gradient matches central finite differences") {
    GridSpec g = make_grid(32, 4.0);
    LogKernel kernel = LogKernel::build(g);
    const double eps = 1e-5;
    int idx = 0;
    for (double p : {2.0, 3.0}) {
        for (double q : {4.0, 6.0}) {
            for (double b : {0.0, 1.0}) {
                Params params = make_params(p, q, 1.0, b);
                Field u = testutil::random_smooth_field(g, 200 + idx);
                Field v = testutil::random_smooth_field(g, 300 + idx);
                ++idx;
                Field grad = gradient(u, params, kernel);
                double analytic = inner_l2(grad, v);
                double Ip = energy_from_scalars(
                    energy_scalars(axpy(u, eps, v), params, kernel), params);
                double Im = energy_from_scalars(
                    energy_scalars(axpy(u, -eps, v), params, kernel), params);
                double fd = (Ip - Im) / (2.0 * eps);
                CHECK(rel_err(analytic, fd) < 1e-6);
            }
        }
    }
}

TEST_CASE("precondition: zero, inverse consistency, eigenmodes") {
    GridSpec g = make_grid(16, 3.0);
    auto a = Coefficient::constant(0.9);
    Field z = precondition(Field(g), a);
    for (double x : z.values()) CHECK(x == 0.0);

    // r = (-Delta_h + abar) v  =>  precondition(r) == v
    Field v = testutil::random_rough_field(g, 41);
    Field r = axpy(scale(laplacian_apply(v), -1.0), 0.9, v);
    Field back = precondition(r, a);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            worst = std::max(worst, std::fabs(back(i, j) - v(i, j)));
    CHECK(worst < 1e-10);

    // sine mode (k1, k2) is an eigenvector with the known eigenvalue
    int n = g.n;
    double h = g.spacing;
    int k1 = 3, k2 = 5;
    std::vector<double> mode(g.cell_count());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mode[static_cast<std::size_t>(i) * n + j] =
                std::sin(M_PI * k1 * (i + 1) / (n + 1.0)) *
                std::sin(M_PI * k2 * (j + 1) / (n + 1.0));
    Field m(g, std::move(mode));
    auto lam = [&](int k) {
        double s = std::sin(M_PI * k / (2.0 * (n + 1)));
        return 4.0 / (h * h) * s * s;
    };
    Field back2 = precondition(m, a);
    double factor = 1.0 / (lam(k1) + lam(k2) + 0.9);
    worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            worst = std::max(worst,
                             std::fabs(back2(i, j) - factor * m(i, j)));
    CHECK(worst < 1e-12);
}

TEST_CASE("residual norm of the zero field") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    CHECK(residual_norm(Field(g), make_params(2, 4, 1, 1), kernel) == 0.0);
}

TEST_CASE("evenness and the homogeneity ledger") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    Params params = make_params(2.5, 4.5, 1.2, 0.8);
    Field u = testutil::random_smooth_field(g, 51);
    EnergyReport r_plus = energy_report(u, params, kernel);
    EnergyReport r_minus = energy_report(scale(u, -1.0), params, kernel);
    CHECK(r_plus.I == r_minus.I);

    double t = 1.7;
    EnergyScalars s1 = energy_scalars(u, params, kernel);
    EnergyScalars s2 = energy_scalars(scale(u, t), params, kernel);
    CHECK(rel_err(s2.grad_sq, t * t * s1.grad_sq) < 1e-12);
    CHECK(rel_err(s2.a_l2, t * t * s1.a_l2) < 1e-12);
    CHECK(rel_err(s2.v0, std::pow(t, 2.0 * params.p) * s1.v0) < 1e-12);
    CHECK(rel_err(s2.lq_q, std::pow(t, params.q) * s1.lq_q) < 1e-12);
    CHECK(rel_err(s2.lp_p, std::pow(t, params.p) * s1.lp_p) < 1e-12);
}

TEST_CASE("small-norm positivity at a bisected radius") {
    GridSpec g = make_grid(32, 4.0);
    LogKernel kernel = LogKernel::build(g);
    Params params = make_params(2, 4, 1, 1);
    auto a = Coefficient::constant(1.0);

    auto all_positive_at = [&](double alpha) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Field u = testutil::random_smooth_field(g, 600 + seed);
            double norm = h1_norm(u, a);
            Field scaled = scale(u, alpha / norm);
            EnergyScalars s = energy_scalars(scaled, params, kernel);
            if (!(energy_from_scalars(s, params) > 0.0)) return false;
            if (!(nehari_from_scalars(s, params) > 0.0)) return false;
        }
        return true;
    };
    double alpha = 1.0;
    int halvings = 0;
    while (!all_positive_at(alpha) && halvings < 40) {
        alpha *= 0.5;
        ++halvings;
    }
    CHECK(halvings < 40);
    CHECK(all_positive_at(alpha));
    CHECK(all_positive_at(alpha / 2.0));
}

TEST_CASE("sampled coefficient is flagged heuristic") {
    GridSpec g = make_grid(16, 3.0);
    LogKernel kernel = LogKernel::build(g);
    Field coeff = Field::from_fn(
        g, [](double x, double y) { return 1.0 + 0.1 * std::sin(x + y); });
    Params params =
        Params::make(2, 4, 1, 1, Coefficient::sampled(std::move(coeff)));
    Field u = testutil::random_smooth_field(g, 61);
    EnergyReport r = energy_report(u, params, kernel);
    CHECK(r.variable_a_heuristic);
    // identity via the scalar integrals still holds with int a u^2
    CHECK(rel_err(r.J1, r.nehari - r.P) < 1e-10);
    CHECK(rel_err(r.J2, 2.0 * r.nehari - r.P) < 1e-10);

    // constant-a reports are not flagged
    EnergyReport rc =
        energy_report(u, make_params(2, 4, 1, 1), kernel);
    CHECK_FALSE(rc.variable_a_heuristic);

    // grid-mismatched field is rejected
    Field other(make_grid(32, 3.0));
    CHECK_THROWS_AS(energy_report(other, params, kernel), GridMismatch);
}
