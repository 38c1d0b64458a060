#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfplan/minimax.hpp"

namespace vfplan {

/// Evaluation budget: one high-fidelity evaluation costs cost_high, one
/// low-fidelity evaluation costs 1.
struct BudgetSpec {
    double budget = 300.0;   // total spend allowed, > 0
    double cost_high = 5.0;  // > 1; a high-fidelity point must cost more than a low one

    void validate() const;
};

enum class BaselineKind { MinMinimax, High, Low, EqualSize, EqualBudget };

std::string to_string(BaselineKind k);

/// Sample sizes produced by a budgeting technique.
struct AllocationPlan {
    long n_high = 0;
    long n_low = 0;
    double ratio = 0.0;  // low-to-high size ratio targeted by the technique
    double spent = 0.0;  // cost_high * n_high + n_low, never above the budget
    BaselineKind baseline = BaselineKind::MinMinimax;
};

enum class BenefitRegime { Exact, AsymptoticSmallR, AsymptoticLargeR };

struct BenefitCurvePoint {
    double r = 0.0;
    double ratio_R2_R1 = 1.0;
    BenefitRegime regime = BenefitRegime::Exact;
};

/// Inversion of the correlation between u and f in the additive model:
/// r = 1 / sqrt(1 + (V_g / V_f) / rho^2)  =>  rho^2 = (V_g / V_f) r^2 / (1 - r^2).
double rho_squared_from_corr(double r, double V_f = 1.0, double V_g = 1.0);

/// Forward map, for round-trip checks.
double corr_from_rho_squared(double rho2, double V_f = 1.0, double V_g = 1.0);

/// Budget-optimal ratio of low to high sample sizes:
/// s* = ((L_f / L_g) c rho^2)^{d / (d + 2)}.
double optimal_ratio(const FidelitySmoothness& fs, double cost_high, int d);

/// Budgeted two-fidelity error as a function of the size ratio s; the
/// objective that optimal_ratio minimises. Exposed for oracles and scans.
double vf_budget_objective(const FidelitySmoothness& fs, const BudgetSpec& spec, int d, double s);

/// Grid search over log-spaced s in [1e-3, 1e4] refined by golden-section to
/// a relative tolerance of 1e-6; the oracle counterpart of optimal_ratio.
double brute_force_ratio(const FidelitySmoothness& fs, const BudgetSpec& spec, int d,
                         int grid_points);

/// Minimal budgeted two-fidelity error, the objective at s*.
/// With rho = 0 the low-fidelity term carries no information and the value
/// degenerates to the s -> 0 boundary of the objective.
double budgeted_minimax_error(const FidelitySmoothness& fs, const BudgetSpec& spec, int d);

/// Budgeted error when the whole budget buys high-fidelity points:
/// (rho^2 L_f / 2 + L_g / 2) (c / (pi Lambda))^{2/d}.
double single_fidelity_budgeted_error(const FidelitySmoothness& fs, const BudgetSpec& spec, int d);

/// Ratio of the budgeted two-fidelity error to the high-only error,
///   (1 + (L_f^d rho^{2d} / (L_g^d c^2))^{1/(d+2)})^{(d+2)/d} / (1 + rho^2 L_f / L_g).
/// Below one means the low-fidelity source pays off; the budget cancels.
double benefit_ratio(const FidelitySmoothness& fs, double cost_high, int d);

/// Expansions of benefit_ratio near r -> 0 and r -> 1. The regimes are
/// advisory: they describe where each expansion was derived, not a hard
/// validity window.
double benefit_ratio_asymptotic(const FidelitySmoothness& fs, double cost_high, int d,
                                BenefitRegime regime);

/// Benefit curve sampled over a correlation grid; smoothness and variance
/// scales come from base (its rho is replaced point by point).
std::vector<BenefitCurvePoint> benefit_curve(const FidelitySmoothness& base, double cost_high,
                                             int d, const std::vector<double>& r_grid,
                                             BenefitRegime regime = BenefitRegime::Exact);

/// Smallest correlation at which the two-fidelity error drops to k times the
/// high-only error (k <= 1). The benefit curve rises above one before
/// falling, so the sublevel set {ratio <= k} is an upper interval and
/// bisection on its edge is well defined. Returns nullopt when no r in
/// (0, 1) reaches the target.
std::optional<double> threshold_correlation(const FidelitySmoothness& fs, double cost_high, int d,
                                            double k);

/// Sample sizes of the minimax-driven technique at correlation r: the ratio
/// s* = (c rho^2)^{d/(d+2)} (equal smoothness budgets assumed), real-valued
/// sizes floored, leftover budget spent on extra low-fidelity points.
/// Degenerates to all-low when the high size rounds below one; otherwise the
/// high size is floored at min_high (reducing the low sample to fit).
AllocationPlan plan(double r, const BudgetSpec& spec, int d, long min_high = 5);

/// Fixed heuristics: High (budget / c, 0), EqualSize (budget / (c+1) each),
/// EqualBudget (budget / (2c), budget / 2), Low (0, budget).
AllocationPlan baseline_plan(BaselineKind kind, const BudgetSpec& spec);

}  // namespace vfplan
