#pragma once

#include <span>
#include <utility>
#include <vector>

#include "vfplan/spectral.hpp"

namespace vfplan {

/// Smoothness class of spectral densities: processes whose weighted mean
/// squared gradient E sum_i lambda_i^2 (df/dx_i)^2 stays within the budget L.
struct SmoothnessClass {
    double L = 1.0;              // derivative-energy budget, > 0
    std::vector<double> lambda;  // per-axis weights, all > 0

    int dim() const { return static_cast<int>(lambda.size()); }
    void validate() const;
};

/// Smoothness and scale description of the two-fidelity model
/// u(x) = rho * f(x) + g(x) with independent stationary f, g.
struct FidelitySmoothness {
    double L_f = 1.0;  // smoothness budget of the low-fidelity process
    double L_g = 1.0;  // smoothness budget of the correction process
    double rho = 1.0;  // scale coefficient linking f to u
    double V_f = 1.0;  // E f^2
    double V_g = 1.0;  // E g^2

    void validate() const;
};

/// Two-cube spectral density concentrated at +-1/(2 h_axis) on one axis;
/// the worst-case witness that pins the lower bound of the minimax error.
struct SpikyDensity {
    SmoothnessClass base;
    double epsilon = 1e-3;  // cube half-width, > 0
    int axis = 0;           // axis carrying the spikes, in [0, d)

    void validate() const;
};

/// Worst-case (over the smoothness class) cell-averaged interpolation error
/// on the grid: (L / (2 pi^2)) * max_i (h_i / lambda_i)^2.
double minimax_error_single(const SmoothnessClass& cls, const GridSpec& grid);

/// Transfer function of the minimax-optimal interpolant:
/// 1 - sqrt(sum_i omega_i^2 h_i^2) inside the unit ellipsoid, 0 outside.
double minimax_kernel_eval(std::span<const double> omega, const GridSpec& grid);

struct KernelBoundSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the pointwise kernel inequality
///   (1 - K(u))^2 + sum_{k != 0} K^2(u + k) <= 2 ||u||^2
/// in grid-normalised coordinates u_i = omega_i h_i, with the lattice sum
/// enumerated exactly (only translates inside the unit ball contribute).
/// Supports d <= 3.
KernelBoundSides verify_kernel_bound(std::span<const double> omega, const GridSpec& grid);

/// Axis selected by the spiky witness: argmax (h_i / lambda_i)^2,
/// lowest index on ties.
int spiky_axis(const SmoothnessClass& cls, const GridSpec& grid);

/// Witness with the given cube half-width on the worst axis of the grid.
SpikyDensity make_spiky(const SmoothnessClass& cls, const GridSpec& grid, double epsilon);

/// Height normalisation A_eps of the witness: the largest value permitted by
/// the class constraint at the given cube half-width. The witness density is
/// A_eps / (2 eps)^d on each of the two cubes (total mass 2 A_eps), and
/// A_eps increases to the minimax error as eps -> 0.
double spiky_mass(const SpikyDensity& spiky, const GridSpec& grid);

/// Risk of the optimal transfer function against the spiky witness,
/// integral of F_eps * (S - F_eps) / S over the support with the lattice
/// translates enumerated directly. Converges to minimax_error_single
/// restricted to the witness axis as eps -> 0.
double spiky_lower_bound(const SpikyDensity& spiky, const GridSpec& grid,
                         const QuadratureConfig& cfg);

/// Grid minimising the minimax error subject to an average of n design
/// points per unit hypercube (prod 1/h_i = n): h_i* = lambda_i (n prod_j
/// lambda_j)^{-1/d}, which equalises h_i / lambda_i across axes. Returns the
/// steps and the error they achieve.
std::pair<std::vector<double>, double> optimal_grid(const SmoothnessClass& cls, double n);

/// Minimax error of the two-fidelity model with u observed on the step-h
/// grid and f on the m-times finer grid (isotropic steps, unit weights):
///   rho^2 (L_f / 2) (h / (m pi))^2 + (L_g / 2) (h / pi)^2.
double minimax_error_vf(const FidelitySmoothness& fs, double h, int m, int d);

}  // namespace vfplan
