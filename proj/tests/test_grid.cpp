#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lognewton/grid.hpp"
#include "testutil.hpp"

using namespace lognewton;
using testutil::rel_err;

TEST_CASE("make_grid basics") {
    GridSpec g = make_grid(8, 4.0);
    CHECK(g.spacing == doctest::Approx(1.0));
    CHECK(g.coord(0) == doctest::Approx(-3.5));
    CHECK(g.coord(7) == doctest::Approx(3.5));

    GridSpec fine = make_grid(256, 12.0);
    CHECK(fine.spacing == doctest::Approx(0.09375));

    CHECK_THROWS_AS(make_grid(7, 4.0), InvalidGrid);
    CHECK_THROWS_AS(make_grid(4, 4.0), InvalidGrid);
    CHECK_THROWS_AS(make_grid(16, 0.0), InvalidGrid);
    CHECK_THROWS_AS(make_grid(16, -1.0), InvalidGrid);
}

TEST_CASE("field construction rejects non-finite values") {
    GridSpec g = make_grid(8, 4.0);
    std::vector<double> v(64, 0.0);
    v[5] = std::nan("");
    CHECK_THROWS_AS(Field(g, std::move(v)), Error);
    std::vector<double> w(32, 0.0);
    CHECK_THROWS_AS(Field(g, std::move(w)), InvalidGrid);
}

TEST_CASE("integrate: constants and zero") {
    GridSpec g = make_grid(8, 4.0);
    Field one = Field::from_fn(g, [](double, double) { return 1.0; });
    CHECK(integrate(one) == doctest::Approx(64.0).epsilon(1e-14));
    CHECK(integrate(Field(g)) == 0.0);
}

TEST_CASE("integrate: gaussian against the analytic value") {
    GridSpec g = make_grid(256, 12.0);
    Field f = testutil::gaussian_field(g, 1.0, 2.0);
    CHECK(std::fabs(integrate(f) - M_PI / 2.0) < 1e-10);
}

TEST_CASE("integrate is linear") {
    GridSpec g = make_grid(16, 3.0);
    Field f = testutil::random_rough_field(g, 11);
    Field h = testutil::random_rough_field(g, 12);
    double alpha = 0.7, beta = -2.3;
    Field combo = axpy(scale(f, alpha), beta, h);
    CHECK(rel_err(integrate(combo),
                  alpha * integrate(f) + beta * integrate(h)) < 1e-13);
}

TEST_CASE("norms: zero field and single cell") {
    GridSpec g = make_grid(16, 4.0);
    auto a = Coefficient::constant(1.0);
    NormReport z = norms(Field(g), 2.0, 4.0, a);
    CHECK(z.l2 == 0.0);
    CHECK(z.lp == 0.0);
    CHECK(z.lq == 0.0);
    CHECK(z.log_weighted == 0.0);
    CHECK(z.h1_sq == 0.0);

    // One cell near the origin with value v.
    double v = 1.7;
    int i = 8, j = 8;  // center (h/2, h/2)
    std::vector<double> vals(g.cell_count(), 0.0);
    vals[static_cast<std::size_t>(i) * g.n + j] = v;
    Field u(g, std::move(vals));
    double h = g.spacing;
    double p = 2.0;
    double r = std::hypot(g.coord(i), g.coord(j));
    double expected = h * h * std::log1p(r) * std::pow(v, p);
    NormReport nr = norms(u, p, 4.0, a);
    CHECK(rel_err(std::pow(nr.log_weighted, p), expected) < 1e-13);

    CHECK_THROWS_AS(norms(u, 1.5, 4.0, a), BadExponent);
    CHECK_THROWS_AS(norms(u, 2.0, 1.0, a), BadExponent);
}

TEST_CASE("norms: gaussian L2 matches the continuum") {
    GridSpec g = make_grid(256, 12.0);
    Field u = testutil::gaussian_field(g, 1.0, 1.0);
    auto a = Coefficient::constant(1.0);
    NormReport nr = norms(u, 2.0, 4.0, a);
    CHECK(std::fabs(nr.l2 * nr.l2 - M_PI / 2.0) < 1e-6);
}

TEST_CASE("norms are absolutely homogeneous") {
    GridSpec g = make_grid(16, 3.0);
    Field u = testutil::random_rough_field(g, 3);
    auto a = Coefficient::constant(0.8);
    double alpha = -2.7;
    NormReport n1 = norms(u, 2.5, 3.0, a);
    NormReport n2 = norms(scale(u, alpha), 2.5, 3.0, a);
    double m = std::fabs(alpha);
    CHECK(rel_err(n2.l2, m * n1.l2) < 1e-12);
    CHECK(rel_err(n2.lp, m * n1.lp) < 1e-12);
    CHECK(rel_err(n2.lq, m * n1.lq) < 1e-12);
    CHECK(rel_err(n2.log_weighted, m * n1.log_weighted) < 1e-12);
    CHECK(rel_err(n2.h1_sq, m * m * n1.h1_sq) < 1e-12);
}

TEST_CASE("laplacian: constants and linears vanish in the interior") {
    GridSpec g = make_grid(16, 4.0);
    Field c = Field::from_fn(g, [](double, double) { return 3.0; });
    Field lin = Field::from_fn(g, [](double x, double) { return x; });
    Field lc = laplacian_apply(c);
    Field ll = laplacian_apply(lin);
    for (int i = 1; i < 15; ++i) {
        for (int j = 1; j < 15; ++j) {
            CHECK(std::fabs(lc(i, j)) < 1e-13);
            CHECK(std::fabs(ll(i, j)) < 1e-13);
        }
    }
}

TEST_CASE("laplacian: quadratic gives exactly one") {
    GridSpec g = make_grid(16, 4.0);
    Field quad = Field::from_fn(
        g, [](double x, double y) { return 0.25 * (x * x + y * y); });
    Field lq = laplacian_apply(quad);
    for (int i = 1; i < 15; ++i)
        for (int j = 1; j < 15; ++j)
            CHECK(std::fabs(lq(i, j) - 1.0) < 1e-12);
}

TEST_CASE("summation by parts is exact") {
    GridSpec g = make_grid(16, 3.0);
    Field u = testutil::random_rough_field(g, 5);
    double lhs = -inner_l2(laplacian_apply(u), u);
    double rhs = grad_square_sum(u);
    CHECK(rel_err(lhs, rhs) < 1e-13);
}

TEST_CASE("whole-cell shifts preserve norms away from the boundary") {
    GridSpec g = make_grid(32, 4.0);
    Field u = testutil::gaussian_field(g, 1.0, 4.0);
    auto a = Coefficient::constant(1.0);
    // shift by two cells each way
    int n = g.n;
    std::vector<double> v(g.cell_count(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int si = i - 2, sj = j + 1;
            if (si >= 0 && si < n && sj >= 0 && sj < n)
                v[static_cast<std::size_t>(i) * n + j] = u(si, sj);
        }
    Field shifted(g, std::move(v));
    NormReport n1 = norms(u, 2.0, 4.0, a);
    NormReport n2 = norms(shifted, 2.0, 4.0, a);
    CHECK(rel_err(n1.l2, n2.l2) < 1e-12);
    CHECK(rel_err(n1.lq, n2.lq) < 1e-12);
    CHECK(rel_err(n1.grad_sq, n2.grad_sq) < 1e-12);
    // log_weighted is NOT translation invariant; only the L^r norms are.
}

TEST_CASE("recenter: centered, shifted, zero") {
    GridSpec g = make_grid(64, 8.0);
    Field centered = testutil::gaussian_field(g, 1.0, 2.0);
    RecenterResult r0 = recenter(centered);
    CHECK(r0.shift_cells[0] == 0);
    CHECK(r0.shift_cells[1] == 0);

    double h = g.spacing;
    Field off = testutil::gaussian_field(g, 1.0, 2.0, 3 * h, -2 * h);
    RecenterResult r1 = recenter(off);
    CHECK(r1.shift_cells[0] == -3);
    CHECK(r1.shift_cells[1] == 2);
    // after the shift the field matches the centered one exactly
    double maxdiff = 0.0;
    for (int i = 2; i < 62; ++i)
        for (int j = 2; j < 62; ++j)
            maxdiff = std::max(maxdiff,
                               std::fabs(r1.field(i, j) - centered(i, j)));
    CHECK(maxdiff < 1e-12);
    CHECK(std::fabs(r1.residual_center[0]) < h);
    CHECK(std::fabs(r1.residual_center[1]) < h);

    CHECK_THROWS_AS(recenter(Field(g)), ZeroField);
}

TEST_CASE("field binary round trip") {
    GridSpec g = make_grid(16, 2.5);
    Field u = testutil::random_rough_field(g, 77);
    auto dir = std::filesystem::temp_directory_path() / "lognewton_grid_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "u.bin").string();
    save_field(u, path);
    Field v = load_field(path);
    CHECK(v.spec() == u.spec());
    auto uv = u.values();
    auto vv = v.values();
    bool identical = true;
    for (std::size_t k = 0; k < uv.size(); ++k)
        identical = identical && uv[k] == vv[k];
    CHECK(identical);

    // truncated file is reported as corrupt
    {
        std::filesystem::resize_file(path, 100);
        CHECK_THROWS_AS(load_field(path), CorruptField);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("grid mismatch is rejected") {
    Field a(make_grid(8, 4.0));
    Field b(make_grid(16, 4.0));
    CHECK_THROWS_AS(add(a, b), GridMismatch);
    Field c(make_grid(8, 2.0));
    CHECK_THROWS_AS(add(a, c), GridMismatch);
}

TEST_CASE("coefficient validation") {
    CHECK_THROWS_AS(Coefficient::constant(0.0), InvalidParams);
    CHECK_THROWS_AS(Coefficient::constant(-1.0), InvalidParams);
    GridSpec g = make_grid(8, 4.0);
    Field pos = Field::from_fn(g, [](double, double) { return 2.0; });
    Coefficient c = Coefficient::sampled(pos);
    CHECK(c.mean() == doctest::Approx(2.0));
    Field touching_zero(g);
    CHECK_THROWS_AS(Coefficient::sampled(touching_zero), InvalidParams);
}
