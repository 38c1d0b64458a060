#include "vfplan/minimax.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "vfplan/errors.hpp"

namespace vfplan {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// 4-point Gauss-Legendre rule on [-1, 1]
constexpr double kGlNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double kGlWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};

double norm2(std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s += x * x;
    return s;
}

double kernel_unit(std::span<const double> u) {
    const double n2 = norm2(u);
    return n2 <= 1.0 ? 1.0 - std::sqrt(n2) : 0.0;
}

}  // namespace

void SmoothnessClass::validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("SmoothnessClass: L must be positive");
    if (lambda.empty()) throw std::invalid_argument("SmoothnessClass: empty lambda");
    for (double l : lambda)
        if (!(l > 0.0)) throw std::invalid_argument("SmoothnessClass: lambda must be positive");
}

void FidelitySmoothness::validate() const {
    if (!(L_f > 0.0) || !(L_g > 0.0) || !(V_f > 0.0) || !(V_g > 0.0))
        throw std::invalid_argument("FidelitySmoothness: L_f, L_g, V_f, V_g must be positive");
}

void SpikyDensity::validate() const {
    base.validate();
    if (!(epsilon > 0.0)) throw std::invalid_argument("SpikyDensity: epsilon must be positive");
    if (axis < 0 || axis >= base.dim())
        throw std::invalid_argument("SpikyDensity: axis out of range");
}

double minimax_error_single(const SmoothnessClass& cls, const GridSpec& grid) {
    cls.validate();
    grid.validate();
    if (cls.dim() != grid.dim())
        throw std::invalid_argument("minimax_error_single: dimension mismatch");
    double worst = 0.0;
    for (int i = 0; i < cls.dim(); ++i) {
        const double r = grid.h[i] / cls.lambda[i];
        worst = std::max(worst, r * r);
    }
    return cls.L / (2.0 * kPi * kPi) * worst;
}

double minimax_kernel_eval(std::span<const double> omega, const GridSpec& grid) {
    grid.validate();
    if (static_cast<int>(omega.size()) != grid.dim())
        throw std::invalid_argument("minimax_kernel_eval: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
        const double u = omega[i] * grid.h[i];
        s += u * u;
    }
    return s <= 1.0 ? 1.0 - std::sqrt(s) : 0.0;
}

KernelBoundSides verify_kernel_bound(std::span<const double> omega, const GridSpec& grid) {
    grid.validate();
    const int d = grid.dim();
    if (static_cast<int>(omega.size()) != d)
        throw std::invalid_argument("verify_kernel_bound: dimension mismatch");
    if (d > 3) throw UnsupportedDimensionError("verify_kernel_bound: supports d <= 3");

    std::array<double, 3> u{};
    for (int i = 0; i < d; ++i) u[i] = omega[i] * grid.h[i];
    const std::span<const double> uu(u.data(), static_cast<std::size_t>(d));

    const double k0 = kernel_unit(uu);
    double lhs = (1.0 - k0) * (1.0 - k0);

    // K vanishes outside the unit ball, so only translates with
    // |u_i + k_i| <= 1 can contribute; that makes the sum finite.
    std::array<int, 3> lo{}, hi{};
    for (int i = 0; i < d; ++i) {
        lo[i] = static_cast<int>(std::ceil(-1.0 - u[i]));
        hi[i] = static_cast<int>(std::floor(1.0 - u[i]));
    }
    std::array<int, 3> k{};
    std::array<double, 3> shifted{};
    const auto visit = [&](auto&& self, int axis) -> void {
        if (axis == d) {
            bool zero = true;
            for (int i = 0; i < d; ++i) zero = zero && k[i] == 0;
            if (zero) return;
            for (int i = 0; i < d; ++i) shifted[i] = u[i] + k[i];
            const double kk = kernel_unit(std::span<const double>(shifted.data(),
                                                                  static_cast<std::size_t>(d)));
            lhs += kk * kk;
            return;
        }
        for (k[axis] = lo[axis]; k[axis] <= hi[axis]; ++k[axis]) self(self, axis + 1);
    };
    visit(visit, 0);

    return {lhs, 2.0 * norm2(uu)};
}

int spiky_axis(const SmoothnessClass& cls, const GridSpec& grid) {
    cls.validate();
    grid.validate();
    if (cls.dim() != grid.dim()) throw std::invalid_argument("spiky_axis: dimension mismatch");
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < cls.dim(); ++i) {
        const double r = grid.h[i] / cls.lambda[i];
        if (r * r > best_val) {
            best_val = r * r;
            best = i;
        }
    }
    return best;
}

SpikyDensity make_spiky(const SmoothnessClass& cls, const GridSpec& grid, double epsilon) {
    return {cls, epsilon, spiky_axis(cls, grid)};
}

double spiky_mass(const SpikyDensity& spiky, const GridSpec& grid) {
    spiky.validate();
    grid.validate();
    const int d = spiky.base.dim();
    if (d != grid.dim()) throw std::invalid_argument("spiky_mass: dimension mismatch");
    const int j = spiky.axis;
    const double eps2 = spiky.epsilon * spiky.epsilon;
    const double lj = spiky.base.lambda[j];
    double denom = lj * lj * (1.0 / (4.0 * grid.h[j] * grid.h[j]) + eps2 / 3.0);
    for (int i = 0; i < d; ++i) {
        if (i == j) continue;
        denom += spiky.base.lambda[i] * spiky.base.lambda[i] * eps2 / 3.0;
    }
    return spiky.base.L / (8.0 * kPi * kPi * denom);
}

double spiky_lower_bound(const SpikyDensity& spiky, const GridSpec& grid,
                         const QuadratureConfig& cfg) {
    spiky.validate();
    grid.validate();
    cfg.validate();
    const int d = spiky.base.dim();
    if (d != grid.dim()) throw std::invalid_argument("spiky_lower_bound: dimension mismatch");
    double hmax = 0.0;
    for (double hv : grid.h) hmax = std::max(hmax, hv);
    if (!(spiky.epsilon < 1.0 / (4.0 * hmax)))
        throw std::invalid_argument("spiky_lower_bound: epsilon must be below 1/(4 max h)");

    const int j = spiky.axis;
    const double eps = spiky.epsilon;
    const double mass = spiky_mass(spiky, grid);
    double height = mass;
    for (int i = 0; i < d; ++i) height /= 2.0 * eps;

    const auto density = [&](std::span<const double> w) -> double {
        // within eps (sup-norm) of either cube centre +-1/(2 h_j) e_j
        for (double sj : {0.5 / grid.h[j], -0.5 / grid.h[j]}) {
            bool in = true;
            for (int i = 0; i < d; ++i) {
                const double c = i == j ? sj : 0.0;
                if (std::abs(w[i] - c) > eps) {
                    in = false;
                    break;
                }
            }
            if (in) return height;
        }
        return 0.0;
    };

    // risk density F (S - F) / S with the alias translates enumerated
    // exactly; with eps < 1/(4 max h) no translate beyond |k_i| <= 2 can
    // re-enter the support.
    std::array<double, 8> wpt{};
    std::array<double, 8> spt{};
    const auto risk_density = [&](std::span<const double> w) -> double {
        const double f0 = density(w);
        if (f0 == 0.0) return 0.0;
        double s = 0.0;
        std::array<int, 8> k{};
        const auto visit = [&](auto&& self, int axis) -> void {
            if (axis == d) {
                for (int i = 0; i < d; ++i) spt[i] = w[i] + k[i] / grid.h[i];
                s += density(std::span<const double>(spt.data(), static_cast<std::size_t>(d)));
                return;
            }
            for (k[axis] = -2; k[axis] <= 2; ++k[axis]) self(self, axis + 1);
        };
        visit(visit, 0);
        return f0 * (s - f0) / s;
    };

    // tensor Gauss-Legendre over the positive cube, doubled for the mirror
    double cube_integral = 0.0;
    const auto accumulate = [&](auto&& self, int axis, double weight) -> void {
        if (axis == d) {
            cube_integral += weight * risk_density(std::span<const double>(
                                          wpt.data(), static_cast<std::size_t>(d)));
            return;
        }
        const double center = axis == j ? 0.5 / grid.h[j] : 0.0;
        for (int q = 0; q < 4; ++q) {
            wpt[axis] = center + eps * kGlNodes[q];
            self(self, axis + 1, weight * kGlWeights[q] * eps);
        }
    };
    accumulate(accumulate, 0, 1.0);

    return 2.0 * cube_integral;
}

std::pair<std::vector<double>, double> optimal_grid(const SmoothnessClass& cls, double n) {
    cls.validate();
    if (!(n > 0.0)) throw std::invalid_argument("optimal_grid: n must be positive");
    const int d = cls.dim();
    double prod_lambda = 1.0;
    for (double l : cls.lambda) prod_lambda *= l;
    const double t = std::pow(n * prod_lambda, -1.0 / d);
    std::vector<double> h(d);
    for (int i = 0; i < d; ++i) h[i] = cls.lambda[i] * t;
    GridSpec g{h};
    return {h, minimax_error_single(cls, g)};
}

double minimax_error_vf(const FidelitySmoothness& fs, double h, int m, int d) {
    fs.validate();
    if (!(h > 0.0)) throw std::invalid_argument("minimax_error_vf: h must be positive");
    if (m < 1) throw std::invalid_argument("minimax_error_vf: m must be >= 1");
    if (d < 1) throw std::invalid_argument("minimax_error_vf: d must be >= 1");
    const double rho2 = fs.rho * fs.rho;
    const double a = h / (m * kPi);
    const double b = h / kPi;
    return rho2 * (fs.L_f / 2.0) * a * a + (fs.L_g / 2.0) * b * b;
}

}  // namespace vfplan
