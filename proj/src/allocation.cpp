#include "vfplan/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vfplan {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void check_dim(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
}

}  // namespace

void BudgetSpec::validate() const {
    if (!(budget > 0.0)) throw std::invalid_argument("BudgetSpec: budget must be positive");
    if (!(cost_high > 1.0))
        throw std::invalid_argument(
            "BudgetSpec: cost_high must exceed the unit low-fidelity cost");
}

std::string to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::MinMinimax: return "MinMinimax";
        case BaselineKind::High: return "High";
        case BaselineKind::Low: return "Low";
        case BaselineKind::EqualSize: return "EqualSize";
        case BaselineKind::EqualBudget: return "EqualBudget";
    }
    return "?";
}

double rho_squared_from_corr(double r, double V_f, double V_g) {
    if (!(r > 0.0) || !(r < 1.0))
        throw std::domain_error("rho_squared_from_corr: r must lie in (0, 1)");
    if (!(V_f > 0.0) || !(V_g > 0.0))
        throw std::invalid_argument("rho_squared_from_corr: variances must be positive");
    return (V_g / V_f) * r * r / (1.0 - r * r);
}

double corr_from_rho_squared(double rho2, double V_f, double V_g) {
    if (!(rho2 > 0.0)) throw std::domain_error("corr_from_rho_squared: rho^2 must be positive");
    return 1.0 / std::sqrt(1.0 + (V_g / V_f) / rho2);
}

double optimal_ratio(const FidelitySmoothness& fs, double cost_high, int d) {
    fs.validate();
    check_dim(d);
    if (!(cost_high > 0.0)) throw std::invalid_argument("optimal_ratio: cost must be positive");
    const double rho2 = fs.rho * fs.rho;
    return std::pow(fs.L_f / fs.L_g * cost_high * rho2, static_cast<double>(d) / (d + 2));
}

double vf_budget_objective(const FidelitySmoothness& fs, const BudgetSpec& spec, int d, double s) {
    fs.validate();
    spec.validate();
    check_dim(d);
    if (!(s > 0.0)) throw std::invalid_argument("vf_budget_objective: s must be positive");
    const double rho2 = fs.rho * fs.rho;
    const double c = spec.cost_high;
    const double lam = spec.budget;
    const double e = 2.0 / d;
    const double t1 = rho2 == 0.0 ? 0.0
                                  : rho2 * (fs.L_f / 2.0) * std::pow((c + s) / (kPi * lam * s), e);
    const double t2 = (fs.L_g / 2.0) * std::pow((c + s) / (kPi * lam), e);
    return t1 + t2;
}

double brute_force_ratio(const FidelitySmoothness& fs, const BudgetSpec& spec, int d,
                         int grid_points) {
    fs.validate();
    spec.validate();
    check_dim(d);
    if (grid_points < 1000)
        throw std::invalid_argument("brute_force_ratio: need at least 1000 grid points");

    const double lo = std::log(1e-3);
    const double hi = std::log(1e4);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        const double s = std::exp(lo + (hi - lo) * i / (grid_points - 1));
        const double v = vf_budget_objective(fs, spec, d, s);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }

    // golden-section refinement on the bracketing log-interval
    const double step = (hi - lo) / (grid_points - 1);
    double a = lo + step * std::max(0, best - 1);
    double b = lo + step * std::min(grid_points - 1, best + 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = vf_budget_objective(fs, spec, d, std::exp(x1));
    double f2 = vf_budget_objective(fs, spec, d, std::exp(x2));
    while (b - a > 1e-6 * 0.5 * std::abs(a + b) + 1e-12) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = vf_budget_objective(fs, spec, d, std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = vf_budget_objective(fs, spec, d, std::exp(x2));
        }
    }
    return std::exp(0.5 * (a + b));
}

double budgeted_minimax_error(const FidelitySmoothness& fs, const BudgetSpec& spec, int d) {
    fs.validate();
    spec.validate();
    check_dim(d);
    if (fs.rho == 0.0) {
        // degenerate: no information flows through f, the objective is
        // minimised on the s -> 0 boundary
        return (fs.L_g / 2.0) * std::pow(spec.cost_high / (kPi * spec.budget), 2.0 / d);
    }
    return vf_budget_objective(fs, spec, d, optimal_ratio(fs, spec.cost_high, d));
}

double single_fidelity_budgeted_error(const FidelitySmoothness& fs, const BudgetSpec& spec,
                                      int d) {
    fs.validate();
    spec.validate();
    check_dim(d);
    const double rho2 = fs.rho * fs.rho;
    return (rho2 * fs.L_f / 2.0 + fs.L_g / 2.0) *
           std::pow(spec.cost_high / (kPi * spec.budget), 2.0 / d);
}

double benefit_ratio(const FidelitySmoothness& fs, double cost_high, int d) {
    fs.validate();
    check_dim(d);
    if (!(cost_high > 1.0)) throw std::invalid_argument("benefit_ratio: cost must exceed 1");
    const double rho2 = fs.rho * fs.rho;
    if (rho2 == 0.0) return 1.0;
    const double a = rho2 * fs.L_f / fs.L_g;
    const double b = std::exp((d * std::log(a) - 2.0 * std::log(cost_high)) / (d + 2));
    return std::pow(1.0 + b, (d + 2.0) / d) / (1.0 + a);
}

double benefit_ratio_asymptotic(const FidelitySmoothness& fs, double cost_high, int d,
                                BenefitRegime regime) {
    fs.validate();
    check_dim(d);
    if (!(cost_high > 1.0))
        throw std::invalid_argument("benefit_ratio_asymptotic: cost must exceed 1");
    if (regime == BenefitRegime::Exact) return benefit_ratio(fs, cost_high, d);

    const double rho2 = fs.rho * fs.rho;
    const double r = rho2 == 0.0 ? 0.0 : corr_from_rho_squared(rho2, fs.V_f, fs.V_g);
    const double dd = static_cast<double>(d);
    if (regime == BenefitRegime::AsymptoticSmallR) {
        const double coef = std::pow(fs.L_f * fs.V_f / (fs.L_g * fs.V_g), dd / (dd + 2.0));
        return 1.0 + (dd + 2.0) / dd * coef * std::pow(r, 2.0 * dd / (dd + 2.0)) /
                         std::pow(cost_high, 2.0 / (dd + 2.0));
    }
    const double coef = std::pow(fs.L_g * fs.V_f / (fs.L_f * fs.V_g), dd / (dd + 2.0));
    return std::pow(cost_high, -2.0 / dd) +
           (2.0 + dd) / dd * coef * std::pow(1.0 - r * r, dd / (dd + 2.0)) /
               std::pow(cost_high, 4.0 / (dd * (dd + 2.0)));
}

std::vector<BenefitCurvePoint> benefit_curve(const FidelitySmoothness& base, double cost_high,
                                             int d, const std::vector<double>& r_grid,
                                             BenefitRegime regime) {
    std::vector<BenefitCurvePoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        FidelitySmoothness fs = base;
        fs.rho = std::sqrt(rho_squared_from_corr(r, base.V_f, base.V_g));
        BenefitCurvePoint p;
        p.r = r;
        p.regime = regime;
        p.ratio_R2_R1 = regime == BenefitRegime::Exact
                            ? benefit_ratio(fs, cost_high, d)
                            : benefit_ratio_asymptotic(fs, cost_high, d, regime);
        out.push_back(p);
    }
    return out;
}

std::optional<double> threshold_correlation(const FidelitySmoothness& fs, double cost_high, int d,
                                            double k) {
    fs.validate();
    check_dim(d);
    if (!(cost_high > 1.0))
        throw std::invalid_argument("threshold_correlation: cost must exceed 1");
    if (!(k > 0.0) || !(k > 0.0 && k <= 1.0))
        throw std::invalid_argument("threshold_correlation: k must lie in (0, 1]");

    const auto ratio_at = [&](double r) {
        FidelitySmoothness f = fs;
        f.rho = std::sqrt(rho_squared_from_corr(r, fs.V_f, fs.V_g));
        return benefit_ratio(f, cost_high, d);
    };

    const double r_hi = 1.0 - 1e-12;
    if (ratio_at(r_hi) > k) return std::nullopt;

    double lo = 1e-12, hi = r_hi;
    // ratio decreases in r; find the smallest r with ratio <= k
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ratio_at(mid) <= k)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-13) break;
    }
    return hi;
}

AllocationPlan plan(double r, const BudgetSpec& spec, int d, long min_high) {
    spec.validate();
    check_dim(d);
    if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("plan: r must lie in (0, 1)");
    if (min_high < 0) throw std::invalid_argument("plan: min_high must be >= 0");
    const double lam = spec.budget;
    const double c = spec.cost_high;
    if (lam < 1.0)
        throw std::invalid_argument("plan: budget cannot afford a single low-fidelity point");

    const double rho2 = r * r / (1.0 - r * r);
    const double s = std::pow(c * rho2, static_cast<double>(d) / (d + 2));

    AllocationPlan p;
    p.baseline = BaselineKind::MinMinimax;
    p.ratio = s;

    const double n_high_real = lam / (c + s);
    long n_high = static_cast<long>(std::floor(n_high_real));
    long n_low = static_cast<long>(std::floor(lam * s / (c + s)));

    if (n_high < 1) {
        // too little budget share for even one high point: all-low plan
        p.n_high = 0;
        p.n_low = static_cast<long>(std::floor(lam));
        p.spent = static_cast<double>(p.n_low);
        return p;
    }
    if (n_high < min_high) {
        n_high = std::min(min_high, static_cast<long>(std::floor(lam / c)));
        n_low = std::min(n_low, static_cast<long>(std::floor(lam - c * n_high)));
        n_low = std::max(n_low, 0L);
    }
    // leftover budget buys the cheapest filler
    const double leftover = lam - (c * n_high + n_low);
    if (leftover >= 1.0) n_low += static_cast<long>(std::floor(leftover));

    p.n_high = n_high;
    p.n_low = n_low;
    p.spent = c * n_high + n_low;
    return p;
}

AllocationPlan baseline_plan(BaselineKind kind, const BudgetSpec& spec) {
    spec.validate();
    const double lam = spec.budget;
    const double c = spec.cost_high;
    AllocationPlan p;
    p.baseline = kind;
    switch (kind) {
        case BaselineKind::High:
            p.n_high = static_cast<long>(std::floor(lam / c));
            p.n_low = 0;
            break;
        case BaselineKind::EqualSize:
            p.n_high = static_cast<long>(std::floor(lam / (c + 1.0)));
            p.n_low = p.n_high;
            break;
        case BaselineKind::EqualBudget:
            p.n_high = static_cast<long>(std::floor(lam / (2.0 * c)));
            p.n_low = static_cast<long>(std::floor(lam / 2.0));
            break;
        case BaselineKind::Low:
            p.n_high = 0;
            p.n_low = static_cast<long>(std::floor(lam));
            break;
        case BaselineKind::MinMinimax:
            throw std::invalid_argument("baseline_plan: MinMinimax requires a correlation; use plan()");
    }
    p.ratio = p.n_high > 0 ? static_cast<double>(p.n_low) / static_cast<double>(p.n_high)
                           : std::numeric_limits<double>::infinity();
    p.spent = c * p.n_high + p.n_low;
    return p;
}

}  // namespace vfplan
