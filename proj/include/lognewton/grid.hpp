#ifndef LOGNEWTON_GRID_HPP
#define LOGNEWTON_GRID_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lognewton/errors.hpp"

namespace lognewton {

/// Uniform square grid of n x n cell centers covering (-L, L)^2.
/// Cell (i, j) is centered at (-L + (i + 1/2) h, -L + (j + 1/2) h) with
/// h = 2L / n.  n must be a power of two, n >= 8.
struct GridSpec {
    int n = 0;
    double half_width = 0.0;
    double spacing = 0.0;

    double coord(int i) const { return -half_width + (i + 0.5) * spacing; }

    std::array<double, 2> cell_center(int i, int j) const {
        return {coord(i), coord(j)};
    }

    std::int64_t cell_count() const {
        return static_cast<std::int64_t>(n) * n;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

GridSpec make_grid(int n, double half_width);

/// Real-valued function sampled at cell centers.  Values are stored
/// row-major (index i * n + j) and are guaranteed finite.  Fields are
/// immutable after construction; all operations return new Fields.
class Field {
  public:
    explicit Field(const GridSpec& spec)
        : spec_(spec), values_(spec.cell_count(), 0.0) {}

    Field(const GridSpec& spec, std::vector<double> values);

    template <class Fn>
    static Field from_fn(const GridSpec& spec, Fn&& fn) {
        std::vector<double> v(spec.cell_count());
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j)
                v[static_cast<std::size_t>(i) * spec.n + j] =
                    fn(spec.coord(i), spec.coord(j));
        return Field(spec, std::move(v));
    }

    const GridSpec& spec() const { return spec_; }
    int n() const { return spec_.n; }
    double spacing() const { return spec_.spacing; }

    double operator()(int i, int j) const {
        return values_[static_cast<std::size_t>(i) * spec_.n + j];
    }

    std::span<const double> values() const { return values_; }

  private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Throws GridMismatch unless both fields share one GridSpec.
void require_same_grid(const Field& a, const Field& b);

Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scale(const Field& a, double s);
/// a + s * b
Field axpy(const Field& a, double s, const Field& b);
/// Pointwise product.
Field multiply(const Field& a, const Field& b);
/// Pointwise |u|^p.
Field abs_pow(const Field& u, double p);
/// Pointwise sign(u) |u|^(p-1)  (the derivative density of |u|^p / p).
Field signed_abs_pow(const Field& u, double pm1);

/// Strictly positive coefficient a(x): either a constant or a sampled field.
class Coefficient {
  public:
    static Coefficient constant(double a0);
    static Coefficient sampled(Field f, double a_min = 0.0);

    bool is_constant() const { return constant_.has_value(); }
    double constant_value() const;
    /// Constant value, or the mean of the sampled field.
    double mean() const;
    double value_at(int i, int j) const;
    const GridSpec* grid() const;

  private:
    Coefficient() = default;
    std::optional<double> constant_;
    std::optional<Field> field_;
};

/// Rectangle-rule quadrature h^2 * sum(f).
double integrate(const Field& f);

/// Dot product under the quadrature: h^2 * sum(a * b).
double inner_l2(const Field& a, const Field& b);

/// Forward-difference gradient energy sum((Du)^2) over all cell edges with
/// zero extension outside the grid; equals -integrate(laplacian_apply(u) * u)
/// exactly, so it is the H^1 seminorm compatible with the 5-point stencil.
double grad_square_sum(const Field& u);

struct NormReport {
    double l2 = 0.0;           // ||u||_{L^2}
    double lp = 0.0;           // ||u||_{L^p}
    double lq = 0.0;           // ||u||_{L^q}
    double log_weighted = 0.0; // (int log(1+|x|) |u|^p)^(1/p)
    double h1_sq = 0.0;        // int (|grad u|^2 + a u^2)
    double grad_sq = 0.0;      // int |grad u|^2
    double a_l2 = 0.0;         // int a u^2
};

NormReport norms(const Field& u, double p, double q, const Coefficient& a);

/// 5-point discrete Laplacian with homogeneous Dirichlet exterior.
/// Returns Delta_h u (callers negate for -Delta).
Field laplacian_apply(const Field& u);

struct RecenterResult {
    Field field;
    /// Whole-cell displacement that was applied to the field.
    std::array<int, 2> shift_cells;
    /// Mass center of the shifted field (sub-cell residual).
    std::array<double, 2> residual_center;
};

/// Shifts u by whole cells so the mass center of u^2 lies within one cell
/// of the origin.  Exposed boundary values are zero-filled.
RecenterResult recenter(const Field& u);

/// Mass center of u^2; throws ZeroField when u == 0.
std::array<double, 2> mass_center(const Field& u);

// --- serialization ------------------------------------------------------

/// Binary format: uint64 n, double L (little endian), then n*n doubles
/// row-major.
void save_field(const Field& u, const std::string& path);
Field load_field(const std::string& path);

/// CSV rows "x1,x2,value".
void save_field_csv(const Field& u, const std::string& path);

}  // namespace lognewton

#endif
