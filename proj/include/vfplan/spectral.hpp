#pragma once

#include <span>
#include <vector>

namespace vfplan {

enum class SpectralFamily { Exponential, SquaredExponential, Matern32 };

/// Parametric spectral density of a stationary process on R^d, separable
/// across axes: F(w) = amplitude * prod_i F_1(w_i; theta_i).
///
/// Fourier convention: F(w) = integral of exp(2*pi*i*w'x) R(x) dx, so the
/// process variance equals the total spectral mass integral(F).
/// Axis factors (theta = inverse length scale):
///   Exponential:        F(w) = theta / (theta^2 + w^2)
///   SquaredExponential: F(w) = theta^{-1/2} exp(-w^2 / (2 theta))
///   Matern32:           F(w) = 4 a^3 / (a^2 + 4 pi^2 w^2)^2,  a = sqrt(3) theta
struct SpectralDensity {
    SpectralFamily family = SpectralFamily::Exponential;
    std::vector<double> theta;  // per-axis inverse length scales, all > 0
    double amplitude = 1.0;     // >= 0; scales F (and every error) linearly

    int dim() const { return static_cast<int>(theta.size()); }
    void validate() const;

    /// Pointwise evaluation; symmetric in each axis, always >= 0.
    double operator()(std::span<const double> omega) const;

    /// Total spectral mass integral(F) = process variance.
    double total_mass() const;
};

/// Rectangular sampling grid: observations on { diag(h) k : k integer }.
/// The interpolation error is the average of the pointwise expected squared
/// error over one grid cell; that pointwise error is grid-periodic, so
/// averaging over any integer multiple of the cell gives the same value and
/// the formulas here depend on (F, h) alone.
struct GridSpec {
    std::vector<double> h;  // per-axis steps, all > 0

    int dim() const { return static_cast<int>(h.size()); }
    double cell_measure() const;
    void validate() const;
};

/// Tolerances for lattice sums and the error quadrature.
struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    double alias_truncation_tol = 1e-13;  // relative tail target for lattice sums
    int max_lattice_radius = 1 << 16;     // hard cap on direct-summation radius
    double domain_cutoff = 40.0;          // direct-summation window (omega units);
                                          // beyond it tails are handled analytically

    void validate() const;
};

/// Lattice alias sum sum_{k in Z^d} F(omega + k / h), the spectral folding
/// induced by sampling on the grid. Direct summation runs shell by shell up
/// to max_lattice_radius; the remaining tail is attached analytically
/// (Euler-Maclaurin with per-family tail integrals), so the omitted part is
/// below alias_truncation_tol relative. Throws TruncationError when the sum
/// has not stabilised within the radius cap.
double alias_sum(const SpectralDensity& F, std::span<const double> omega, const GridSpec& grid,
                 const QuadratureConfig& cfg);

/// Transfer function of the optimal grid interpolant,
/// K(omega) = F(omega) / alias_sum(omega). Lies in (0, 1] and is symmetric.
double optimal_transfer(const SpectralDensity& F, std::span<const double> omega,
                        const GridSpec& grid, const QuadratureConfig& cfg);

/// Cell-averaged mean squared error of the optimal grid interpolant,
///   sigma^2 = integral F(w) * [sum_{k != 0} F(w + k/h)] / [sum_k F(w + k/h)] dw.
/// Computed by adaptive tensor quadrature of the lattice-folded integrand over
/// one fundamental cell (the folding is exact, so no domain tail is dropped).
/// Supports d <= 3; scales linearly in amplitude.
double interpolation_error(const SpectralDensity& F, const GridSpec& grid,
                           const QuadratureConfig& cfg);

/// Exact interpolation error for the 1-d exponential density, all terms
/// integrated in closed form. Stable for all theta*h > 0 (tends to the total
/// mass pi as theta*h -> infinity).
double exponential_error_closed(double theta, double h, double amplitude = 1.0);

/// Leading-order expansion of the exponential error: (2/3) pi^2 theta h.
double exponential_error_taylor(double theta, double h, double amplitude = 1.0);

struct SqexpErrorBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool advisory = false;  // set when theta*h^2 > 0.25 and the bounds are loose
};

/// Sandwich bounds for the 1-d squared-exponential density:
///   (4/3) h sqrt(theta) e^{-1/(8 h^2 theta)} <= sigma^2 <= 7 h sqrt(theta) e^{-1/(8 h^2 theta)}.
SqexpErrorBounds sqexp_error_bounds(double theta, double h, double amplitude = 1.0);

}  // namespace vfplan
