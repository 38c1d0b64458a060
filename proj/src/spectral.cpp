#include "vfplan/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "vfplan/errors.hpp"
#include "vfplan/quadrature.hpp"

namespace vfplan {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// One separable axis factor of the density, with the derivatives and upper
// tail integrals needed for Euler-Maclaurin acceleration of lattice sums.
// The squared variants serve the sum of F^2 in the folded error integrand.
struct Axis {
    SpectralFamily fam;
    double th;  // inverse length scale
    double a;   // sqrt(3) * th, Matern only

    explicit Axis(SpectralFamily f, double theta) : fam(f), th(theta), a(std::sqrt(3.0) * theta) {}

    double value(double w) const {
        switch (fam) {
            case SpectralFamily::Exponential:
                return th / (th * th + w * w);
            case SpectralFamily::SquaredExponential:
                return std::exp(-w * w / (2.0 * th)) / std::sqrt(th);
            case SpectralFamily::Matern32: {
                const double b = kTwoPi * w;
                const double d = a * a + b * b;
                return 4.0 * a * a * a / (d * d);
            }
        }
        return 0.0;
    }

    double d1(double w) const {
        switch (fam) {
            case SpectralFamily::Exponential: {
                const double d = th * th + w * w;
                return -2.0 * th * w / (d * d);
            }
            case SpectralFamily::SquaredExponential:
                return -(w / th) * value(w);
            case SpectralFamily::Matern32: {
                const double b = kTwoPi * w;
                const double d = a * a + b * b;
                return kTwoPi * (-16.0 * a * a * a * b / (d * d * d));
            }
        }
        return 0.0;
    }

    double d2(double w) const {
        switch (fam) {
            case SpectralFamily::Exponential: {
                const double d = th * th + w * w;
                return -2.0 * th * (th * th - 3.0 * w * w) / (d * d * d);
            }
            case SpectralFamily::SquaredExponential:
                return (w * w / (th * th) - 1.0 / th) * value(w);
            case SpectralFamily::Matern32: {
                const double b = kTwoPi * w;
                const double d = a * a + b * b;
                return kTwoPi * kTwoPi * (-16.0 * a * a * a * (a * a - 5.0 * b * b) / (d * d * d * d));
            }
        }
        return 0.0;
    }

    double d3(double w) const {
        switch (fam) {
            case SpectralFamily::Exponential: {
                const double d = th * th + w * w;
                return 24.0 * th * w * (th * th - w * w) / (d * d * d * d);
            }
            case SpectralFamily::SquaredExponential:
                return (3.0 * w / (th * th) - w * w * w / (th * th * th)) * value(w);
            case SpectralFamily::Matern32: {
                const double b = kTwoPi * w;
                const double d = a * a + b * b;
                return kTwoPi * kTwoPi * kTwoPi *
                       (96.0 * a * a * a * b * (3.0 * a * a - 5.0 * b * b) / (d * d * d * d * d));
            }
        }
        return 0.0;
    }

    // integral of f over [X, infinity), X >= 0
    double tail(double X) const {
        switch (fam) {
            case SpectralFamily::Exponential:
                return std::atan2(th, X);
            case SpectralFamily::SquaredExponential:
                return std::sqrt(kPi / 2.0) * std::erfc(X / std::sqrt(2.0 * th));
            case SpectralFamily::Matern32: {
                const double B = kTwoPi * X;
                const double d = a * a + B * B;
                const double A = B / (2.0 * a * a * d) + std::atan2(B, a) / (2.0 * a * a * a);
                return 0.5 - (2.0 * a * a * a / kPi) * A;
            }
        }
        return 0.0;
    }

    // integral of f^2 over [X, infinity), X >= 0
    double tail_sq(double X) const {
        switch (fam) {
            case SpectralFamily::Exponential:
                return std::atan2(th, X) / (2.0 * th) - X / (2.0 * (th * th + X * X));
            case SpectralFamily::SquaredExponential:
                return 0.5 * std::sqrt(kPi / th) * std::erfc(X / std::sqrt(th));
            case SpectralFamily::Matern32: {
                const double B = kTwoPi * X;
                const double d = a * a + B * B;
                const double a2 = a * a;
                const double i2 = B / (2.0 * a2 * d) + std::atan2(B, a) / (2.0 * a2 * a);
                const double i3 = B / (4.0 * a2 * d * d) + 3.0 / (4.0 * a2) * i2;
                const double i4 = B / (6.0 * a2 * d * d * d) + 5.0 / (6.0 * a2) * i3;
                const double i4_inf = 5.0 * kPi / (32.0 * std::pow(a, 7));
                return std::max(0.0, (8.0 * std::pow(a, 6) / kPi) * (i4_inf - i4));
            }
        }
        return 0.0;
    }

    double mass() const {
        switch (fam) {
            case SpectralFamily::Exponential:
                return kPi;
            case SpectralFamily::SquaredExponential:
                return std::sqrt(2.0 * kPi);
            case SpectralFamily::Matern32:
                return 1.0;
        }
        return 0.0;
    }

    double value_sq(double w) const {
        const double v = value(w);
        return v * v;
    }
    double d1_sq(double w) const { return 2.0 * value(w) * d1(w); }
    double d3_sq(double w) const { return 2.0 * (value(w) * d3(w) + 3.0 * d1(w) * d2(w)); }
};

// Euler-Maclaurin estimate of sum_{k >= K+1} f(w + k p) for the one-sided
// tail beyond the direct window. Derivative corrections use the midpoint
// form; the result is clamped at zero (the true tail is positive).
double em_tail_one_side(const Axis& ax, bool squared, double w, double p, int K) {
    const double X = w + (K + 0.5) * p;
    const double h = 1.0 / p;
    double integral, der1, der3;
    if (squared) {
        integral = ax.tail_sq(X);
        der1 = ax.d1_sq(X);
        der3 = ax.d3_sq(X);
    } else {
        integral = ax.tail(X);
        der1 = ax.d1(X);
        der3 = ax.d3(X);
    }
    const double t = h * integral + p * der1 / 24.0 - (7.0 / 5760.0) * p * p * p * der3;
    return std::max(0.0, t);
}

// Per-axis folding sums: S = sum_k f(w + k p), T = sum_k f^2(w + k p), and
// the cross-product sum C = S^2 - T = sum_{k != l} f_k f_l. C is accumulated
// without the catastrophic cancellation of forming S^2 - T directly: the
// dominant term is paired with the explicit sum of the others.
struct AxisAlias {
    double S = 0.0;
    double T = 0.0;
    double C = 0.0;
};

double kahan_sum(const std::vector<double>& v, std::ptrdiff_t skip = -1) {
    double sum = 0.0, comp = 0.0;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(v.size()); ++i) {
        if (i == skip) continue;
        const double y = v[i] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// direct window doubled until S and T stabilise, analytic tails attached
AxisAlias axis_alias_all(const Axis& ax, double omega, double hstep, const QuadratureConfig& cfg) {
    const double p = 1.0 / hstep;
    double u = omega * hstep;
    u -= std::round(u);
    const double w = u * p;

    int K = std::max(2, static_cast<int>(std::ceil(cfg.domain_cutoff * hstep)));
    K = std::min(K, cfg.max_lattice_radius);

    std::vector<double> vals;
    vals.reserve(2 * K + 1);
    vals.push_back(ax.value(w));
    for (int k = 1; k <= K; ++k) {
        vals.push_back(ax.value(w + k * p));
        vals.push_back(ax.value(w - k * p));
    }

    const auto totals = [&](int radius) {
        const double sd = kahan_sum(vals);
        double td = 0.0, tc = 0.0;
        for (double v : vals) {
            const double y = v * v - tc;
            const double t = td + y;
            tc = (t - td) - y;
            td = t;
        }
        const double st = em_tail_one_side(ax, false, w, p, radius) +
                          em_tail_one_side(ax, false, -w, p, radius);
        const double tt = em_tail_one_side(ax, true, w, p, radius) +
                          em_tail_one_side(ax, true, -w, p, radius);
        return std::array<double, 4>{sd + st, td + tt, sd, tt};
    };

    auto cur = totals(K);
    while (true) {
        if (K >= cfg.max_lattice_radius) {
            throw TruncationError("alias_sum: lattice sum did not stabilise within max_lattice_radius",
                                  cur[0]);
        }
        const int K2 = std::min(2 * K, cfg.max_lattice_radius);
        for (int k = K + 1; k <= K2; ++k) {
            vals.push_back(ax.value(w + k * p));
            vals.push_back(ax.value(w - k * p));
        }
        const auto next = totals(K2);
        const bool stable =
            std::abs(next[0] - cur[0]) <= cfg.alias_truncation_tol * std::abs(next[0]) &&
            std::abs(next[1] - cur[1]) <= cfg.alias_truncation_tol * std::abs(next[1]);
        K = K2;
        cur = next;
        if (stable) break;
    }

    AxisAlias out;
    out.S = cur[0];
    out.T = cur[1];
    const double sd = cur[2];
    const double tt = cur[3];
    const double st = out.S - sd;  // exact: tails were added to sd

    // cross products of direct terms, dominant term handled separately
    std::size_t m = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[m]) m = i;
    double cross = vals[m] * kahan_sum(vals, static_cast<std::ptrdiff_t>(m));
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i == m) continue;
        cross += vals[i] * (sd - vals[i]);
    }
    // tail cross terms: (sd + st)^2 - (td + tt) = cross_direct + 2 sd st + st^2 - tt
    out.C = std::max(0.0, cross + 2.0 * sd * st + st * st - tt);
    return out;
}

double axis_alias_sum(const Axis& ax, bool squared, double omega, double hstep,
                      const QuadratureConfig& cfg) {
    const AxisAlias a = axis_alias_all(ax, omega, hstep, cfg);
    return squared ? a.T : a.S;
}

std::vector<Axis> make_axes(const SpectralDensity& F) {
    std::vector<Axis> axes;
    axes.reserve(F.theta.size());
    for (double t : F.theta) axes.emplace_back(F.family, t);
    return axes;
}

void check_dims(const SpectralDensity& F, std::span<const double> omega, const GridSpec& grid) {
    F.validate();
    grid.validate();
    if (F.dim() != grid.dim() || static_cast<int>(omega.size()) != F.dim())
        throw std::invalid_argument("dimension mismatch between density, point and grid");
}

}  // namespace

void SpectralDensity::validate() const {
    if (theta.empty()) throw std::invalid_argument("SpectralDensity: empty theta");
    for (double t : theta)
        if (!(t > 0.0)) throw std::invalid_argument("SpectralDensity: theta must be positive");
    if (!(amplitude >= 0.0)) throw std::invalid_argument("SpectralDensity: amplitude must be >= 0");
}

double SpectralDensity::operator()(std::span<const double> omega) const {
    if (static_cast<int>(omega.size()) != dim())
        throw std::invalid_argument("SpectralDensity: dimension mismatch");
    double v = amplitude;
    for (int i = 0; i < dim(); ++i) v *= Axis(family, theta[i]).value(omega[i]);
    return v;
}

double SpectralDensity::total_mass() const {
    double v = amplitude;
    for (int i = 0; i < dim(); ++i) v *= Axis(family, theta[i]).mass();
    return v;
}

double GridSpec::cell_measure() const {
    double m = 1.0;
    for (double hi : h) m *= hi;
    return m;
}

void GridSpec::validate() const {
    if (h.empty()) throw std::invalid_argument("GridSpec: empty h");
    for (double hi : h)
        if (!(hi > 0.0)) throw std::invalid_argument("GridSpec: steps must be positive");
}

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(alias_truncation_tol > 0.0) ||
        !(domain_cutoff > 0.0))
        throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
    if (max_lattice_radius < 2)
        throw std::invalid_argument("QuadratureConfig: max_lattice_radius must be >= 2");
}

double alias_sum(const SpectralDensity& F, std::span<const double> omega, const GridSpec& grid,
                 const QuadratureConfig& cfg) {
    check_dims(F, omega, grid);
    cfg.validate();
    if (F.amplitude == 0.0) return 0.0;
    const auto axes = make_axes(F);
    double s = F.amplitude;
    for (int i = 0; i < F.dim(); ++i) s *= axis_alias_sum(axes[i], false, omega[i], grid.h[i], cfg);
    return s;
}

double optimal_transfer(const SpectralDensity& F, std::span<const double> omega,
                        const GridSpec& grid, const QuadratureConfig& cfg) {
    check_dims(F, omega, grid);
    if (F.amplitude == 0.0)
        throw std::domain_error("optimal_transfer: undefined for an identically zero density");
    const double s = alias_sum(F, omega, grid, cfg);
    const double v = F(omega);
    return std::min(1.0, v / s);
}

double interpolation_error(const SpectralDensity& F, const GridSpec& grid,
                           const QuadratureConfig& cfg) {
    F.validate();
    grid.validate();
    cfg.validate();
    const int d = F.dim();
    if (d != grid.dim()) throw std::invalid_argument("interpolation_error: dimension mismatch");
    if (d > 3)
        throw UnsupportedDimensionError("interpolation_error: tensor quadrature supports d <= 3");
    if (F.amplitude == 0.0) return 0.0;

    const auto axes = make_axes(F);

    // Folded integrand over one fundamental cell: with per-axis alias sums
    // S_i (of f) and T_i (of f^2), the cell density is S - T/S where
    // S = prod S_i and T = prod T_i. Integrating it over the cell equals the
    // interpolation error integral over all of R^d; no domain tail is lost.
    // The numerator S^2 - T is expanded through the per-axis cross sums
    // C_i = S_i^2 - T_i as a sum of positive subset products, which keeps the
    // integrand meaningful even when it is ~1e-20 times smaller than S.
    std::vector<double> pt(d, 0.0);
    const auto psi = [&]() {
        double S = 1.0;
        double Tv[3], Cv[3];
        for (int i = 0; i < d; ++i) {
            const AxisAlias a = axis_alias_all(axes[i], pt[i], grid.h[i], cfg);
            S *= a.S;
            Tv[i] = a.T;
            Cv[i] = a.C;
        }
        double num = 0.0;
        for (int mask = 1; mask < (1 << d); ++mask) {
            double term = 1.0;
            for (int i = 0; i < d; ++i) term *= (mask >> i) & 1 ? Cv[i] : Tv[i];
            num += term;
        }
        return F.amplitude * num / S;
    };

    // positive orthant of the cell; the integrand is even per axis
    std::vector<double> hi(d);
    double orthants = 1.0;
    for (int i = 0; i < d; ++i) {
        hi[i] = 0.5 / grid.h[i];
        orthants *= 2.0;
    }

    std::function<double(int, double, double)> level = [&](int axis, double abs_tol,
                                                           double rel_tol) -> double {
        const auto g = [&](double x) {
            pt[axis] = x;
            if (axis + 1 == d) return psi();
            const double inner_abs = abs_tol / (4.0 * hi[axis] * orthants);
            return level(axis + 1, inner_abs, 0.25 * rel_tol);
        };
        return integrate_adaptive(g, 0.0, hi[axis], abs_tol / orthants, rel_tol).value;
    };

    // First pass under the configured absolute floor. When the integral
    // itself sits below that floor (sharply band-limited densities on coarse
    // grids reach 1e-20 and less), rescale the floor to the measured
    // magnitude and integrate again so the relative tolerance is the one
    // that binds.
    double result = orthants * level(0, cfg.abs_tol, cfg.rel_tol);
    const double scaled_abs = std::max(std::abs(result) * cfg.rel_tol * 1e-2, 1e-290);
    if (scaled_abs < cfg.abs_tol) {
        result = orthants * level(0, scaled_abs, cfg.rel_tol);
    }
    return result;
}

double exponential_error_closed(double theta, double h, double amplitude) {
    if (!(theta > 0.0) || !(h > 0.0))
        throw std::invalid_argument("exponential_error_closed: theta and h must be positive");
    const double t = kPi * theta * h;
    // below this the higher-order terms sit past the double range; the
    // leading order is the value
    if (t < 1e-100) return amplitude * (2.0 / 3.0) * kPi * kPi * theta * h;
    const double e2 = std::exp(-2.0 * t);
    const double em = -std::expm1(-2.0 * t);  // 1 - e^{-2t}
    const double coth2m1 = 4.0 * e2 / (em * em);

    // g(t) = 1 - (1 + 2t) e^{-2t} = sum_{n>=2} (-2t)^n (n-1) / n!;
    // series branch avoids cancellation for small t
    double g;
    if (t < 0.5) {
        double an = 2.0 * t * t;  // (-2t)^n / n! at n = 2
        g = an;
        for (int n = 3; n < 40; ++n) {
            an *= -2.0 * t / n;
            const double term = an * (n - 1);
            g += term;
            if (std::abs(term) < 1e-18 * std::abs(g)) break;
        }
    } else {
        g = 1.0 - (1.0 + 2.0 * t) * e2;
    }

    const double bracket = 1.0 + 0.5 * coth2m1 * g;
    return amplitude * (kPi - (kPi / (2.0 * t)) * std::tanh(t) * bracket);
}

double exponential_error_taylor(double theta, double h, double amplitude) {
    if (!(theta > 0.0) || !(h > 0.0))
        throw std::invalid_argument("exponential_error_taylor: theta and h must be positive");
    return amplitude * (2.0 / 3.0) * kPi * kPi * theta * h;
}

SqexpErrorBounds sqexp_error_bounds(double theta, double h, double amplitude) {
    if (!(theta > 0.0) || !(h > 0.0))
        throw std::invalid_argument("sqexp_error_bounds: theta and h must be positive");
    SqexpErrorBounds b;
    const double e = std::exp(-1.0 / (8.0 * h * h * theta));
    const double base = h * std::sqrt(theta) * e * amplitude;
    b.lower = (4.0 / 3.0) * base;
    b.upper = 7.0 * base;
    b.advisory = theta * h * h > 0.25;
    return b;
}

}  // namespace vfplan
