#include "lognewton/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

namespace lognewton {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x))
            throw Error("field contains a non-finite value");
}

}  // namespace

GridSpec make_grid(int n, double half_width) {
    if (!is_power_of_two(n) || n < 8)
        throw InvalidGrid("grid size must be a power of two >= 8, got " +
                          std::to_string(n));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw InvalidGrid("grid half width must be positive");
    GridSpec spec;
    spec.n = n;
    spec.half_width = half_width;
    spec.spacing = 2.0 * half_width / n;
    return spec;
}

Field::Field(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != spec.cell_count())
        throw InvalidGrid("value array does not match grid size");
    check_finite(values_);
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.spec() == b.spec()))
        throw GridMismatch("fields live on different grids");
}

namespace {

template <class Fn>
Field zip(const Field& a, const Field& b, Fn&& fn) {
    require_same_grid(a, b);
    std::vector<double> v(a.values().size());
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(av[k], bv[k]);
    return Field(a.spec(), std::move(v));
}

template <class Fn>
Field map(const Field& a, Fn&& fn) {
    std::vector<double> v(a.values().size());
    auto av = a.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(av[k]);
    return Field(a.spec(), std::move(v));
}

// |x|^r with fast paths for the common small integer exponents.
double pow_abs(double x, double r) {
    double ax = std::fabs(x);
    if (r == 2.0) return ax * ax;
    if (r == 1.0) return ax;
    if (r == 3.0) return ax * ax * ax;
    if (r == 4.0) {
        double s = ax * ax;
        return s * s;
    }
    if (ax == 0.0) return 0.0;
    return std::pow(ax, r);
}

}  // namespace

Field add(const Field& a, const Field& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}

Field sub(const Field& a, const Field& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}

Field scale(const Field& a, double s) {
    return map(a, [s](double x) { return s * x; });
}

Field axpy(const Field& a, double s, const Field& b) {
    return zip(a, b, [s](double x, double y) { return x + s * y; });
}

Field multiply(const Field& a, const Field& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}

Field abs_pow(const Field& u, double p) {
    return map(u, [p](double x) { return pow_abs(x, p); });
}

Field signed_abs_pow(const Field& u, double pm1) {
    return map(u, [pm1](double x) {
        if (x == 0.0) return 0.0;
        return std::copysign(pow_abs(x, pm1), x);
    });
}

Coefficient Coefficient::constant(double a0) {
    if (!(a0 > 0.0) || !std::isfinite(a0))
        throw InvalidParams("coefficient must be a positive constant");
    Coefficient c;
    c.constant_ = a0;
    return c;
}

Coefficient Coefficient::sampled(Field f, double a_min) {
    double lo = f.values()[0];
    for (double x : f.values()) lo = std::min(lo, x);
    if (!(lo > 0.0) || lo < a_min)
        throw InvalidParams("sampled coefficient must stay strictly positive");
    Coefficient c;
    c.field_ = std::move(f);
    return c;
}

double Coefficient::constant_value() const {
    if (!constant_) throw InvalidParams("coefficient is not constant");
    return *constant_;
}

double Coefficient::mean() const {
    if (constant_) return *constant_;
    auto v = field_->values();
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double Coefficient::value_at(int i, int j) const {
    if (constant_) return *constant_;
    return (*field_)(i, j);
}

const GridSpec* Coefficient::grid() const {
    return field_ ? &field_->spec() : nullptr;
}

double integrate(const Field& f) {
    double h = f.spacing();
    auto v = f.values();
    double s = std::accumulate(v.begin(), v.end(), 0.0);
    return h * h * s;
}

double inner_l2(const Field& a, const Field& b) {
    require_same_grid(a, b);
    double h = a.spacing();
    auto av = a.values();
    auto bv = b.values();
    double s = 0.0;
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return h * h * s;
}

double grad_square_sum(const Field& u) {
    // Sum of squared raw differences over all edges, including edges to the
    // zero exterior.  (diff/h)^2 * h^2 quadrature = diff^2.
    int n = u.n();
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j < n; ++j) {
            double lo = (i > 0) ? u(i - 1, j) : 0.0;
            double hi = (i < n) ? u(i, j) : 0.0;
            double d = hi - lo;
            s += d * d;
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= n; ++j) {
            double lo = (j > 0) ? u(i, j - 1) : 0.0;
            double hi = (j < n) ? u(i, j) : 0.0;
            double d = hi - lo;
            s += d * d;
        }
    }
    return s;
}

NormReport norms(const Field& u, double p, double q, const Coefficient& a) {
    if (p < 2.0) throw BadExponent("p must satisfy p >= 2");
    if (q < 2.0) throw BadExponent("q must satisfy q >= 2");
    int n = u.n();
    double h = u.spacing();
    NormReport r;
    double s2 = 0.0, sp = 0.0, sq = 0.0, sw = 0.0, sa = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = u(i, j);
            double x2 = x * x;
            double axp = std::pow(std::fabs(x), p);
            s2 += x2;
            sp += axp;
            sq += std::pow(std::fabs(x), q);
            double rad = std::hypot(u.spec().coord(i), u.spec().coord(j));
            sw += std::log1p(rad) * axp;
            sa += a.value_at(i, j) * x2;
        }
    }
    double h2 = h * h;
    r.l2 = std::sqrt(h2 * s2);
    r.lp = std::pow(h2 * sp, 1.0 / p);
    r.lq = std::pow(h2 * sq, 1.0 / q);
    r.log_weighted = std::pow(h2 * sw, 1.0 / p);
    r.grad_sq = grad_square_sum(u);
    r.a_l2 = h2 * sa;
    r.h1_sq = r.grad_sq + r.a_l2;
    return r;
}

Field laplacian_apply(const Field& u) {
    int n = u.n();
    double h = u.spacing();
    double inv_h2 = 1.0 / (h * h);
    std::vector<double> v(u.values().size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double c = u(i, j);
            double s = 0.0;
            s += (i > 0) ? u(i - 1, j) : 0.0;
            s += (i < n - 1) ? u(i + 1, j) : 0.0;
            s += (j > 0) ? u(i, j - 1) : 0.0;
            s += (j < n - 1) ? u(i, j + 1) : 0.0;
            v[static_cast<std::size_t>(i) * n + j] = (s - 4.0 * c) * inv_h2;
        }
    }
    return Field(u.spec(), std::move(v));
}

std::array<double, 2> mass_center(const Field& u) {
    int n = u.n();
    double m = 0.0, cx = 0.0, cy = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double w = u(i, j) * u(i, j);
            m += w;
            cx += w * u.spec().coord(i);
            cy += w * u.spec().coord(j);
        }
    }
    if (m <= 0.0) throw ZeroField("mass center of the zero field");
    return {cx / m, cy / m};
}

RecenterResult recenter(const Field& u) {
    auto c = mass_center(u);
    double h = u.spacing();
    int s1 = static_cast<int>(std::lround(c[0] / h));
    int s2 = static_cast<int>(std::lround(c[1] / h));
    int n = u.n();
    std::vector<double> v(u.values().size(), 0.0);
    for (int i = 0; i < n; ++i) {
        int si = i + s1;
        if (si < 0 || si >= n) continue;
        for (int j = 0; j < n; ++j) {
            int sj = j + s2;
            if (sj < 0 || sj >= n) continue;
            v[static_cast<std::size_t>(i) * n + j] = u(si, sj);
        }
    }
    RecenterResult out{Field(u.spec(), std::move(v)), {-s1, -s2}, {0.0, 0.0}};
    out.residual_center = mass_center(out.field);
    return out;
}

void save_field(const Field& u, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    std::uint64_t n = static_cast<std::uint64_t>(u.n());
    double L = u.spec().half_width;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&L), sizeof L);
    auto v = u.values();
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!os) throw Error("short write to " + path);
}

Field load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CorruptField("cannot open field file " + path);
    std::uint64_t n = 0;
    double L = 0.0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&L), sizeof L);
    if (!is || n > (1u << 20))
        throw CorruptField("corrupt field header in " + path);
    GridSpec spec;
    try {
        spec = make_grid(static_cast<int>(n), L);
    } catch (const InvalidGrid&) {
        throw CorruptField("corrupt field header in " + path);
    }
    std::vector<double> v(spec.cell_count());
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!is || is.gcount() !=
                   static_cast<std::streamsize>(v.size() * sizeof(double)))
        throw CorruptField("corrupt field payload in " + path);
    for (double x : v)
        if (!std::isfinite(x))
            throw CorruptField("non-finite value in field file " + path);
    return Field(spec, std::move(v));
}

void save_field_csv(const Field& u, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    char buf[96];
    for (int i = 0; i < u.n(); ++i) {
        for (int j = 0; j < u.n(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n",
                          u.spec().coord(i), u.spec().coord(j), u(i, j));
            os << buf;
        }
    }
}

}  // namespace lognewton
