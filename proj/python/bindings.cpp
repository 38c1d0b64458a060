#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vfplan/allocation.hpp"
#include "vfplan/harness.hpp"
#include "vfplan/minimax.hpp"
#include "vfplan/spectral.hpp"

namespace py = pybind11;
using namespace vfplan;

namespace {

SpectralFamily family_of(const std::string& name) {
    if (name == "exp" || name == "exponential") return SpectralFamily::Exponential;
    if (name == "sqexp" || name == "squared_exponential")
        return SpectralFamily::SquaredExponential;
    if (name == "matern32") return SpectralFamily::Matern32;
    throw std::invalid_argument("unknown spectral family: " + name);
}

BaselineKind baseline_of(const std::string& name) {
    if (name == "high") return BaselineKind::High;
    if (name == "low") return BaselineKind::Low;
    if (name == "equal-size") return BaselineKind::EqualSize;
    if (name == "equal-budget") return BaselineKind::EqualBudget;
    throw std::invalid_argument("unknown baseline: " + name);
}

py::dict plan_dict(const AllocationPlan& p) {
    py::dict d;
    d["n_high"] = p.n_high;
    d["n_low"] = p.n_low;
    d["ratio"] = p.ratio;
    d["spent"] = p.spent;
    d["baseline"] = to_string(p.baseline);
    return d;
}

FidelityDataset dataset_of(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Fidelity f) {
    FidelityDataset d;
    d.points = x;
    d.values = y;
    d.fidelity = f;
    return d;
}

py::dict result_dict(const RunResult& r) {
    py::dict d;
    d["share"] = r.share;
    d["method"] = r.method;
    d["rrms_mean"] = r.rrms_mean;
    d["rrms_std"] = r.rrms_std;
    d["n_high"] = r.n_high;
    d["n_low"] = r.n_low;
    d["replications"] = r.replications;
    d["status"] = r.flag;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minimax interpolation errors and budget allocation for two-fidelity regression";

    // ---- spectral densities and grid interpolation errors
    m.def(
        "alias_sum",
        [](const std::string& family, const std::vector<double>& theta,
           const std::vector<double>& omega, const std::vector<double>& h, double amplitude) {
            const SpectralDensity F{family_of(family), theta, amplitude};
            return alias_sum(F, omega, GridSpec{h}, QuadratureConfig{});
        },
        py::arg("family"), py::arg("theta"), py::arg("omega"), py::arg("h"),
        py::arg("amplitude") = 1.0,
        "Lattice alias sum of the spectral density over the sampling grid");
    m.def(
        "optimal_transfer",
        [](const std::string& family, const std::vector<double>& theta,
           const std::vector<double>& omega, const std::vector<double>& h, double amplitude) {
            const SpectralDensity F{family_of(family), theta, amplitude};
            return optimal_transfer(F, omega, GridSpec{h}, QuadratureConfig{});
        },
        py::arg("family"), py::arg("theta"), py::arg("omega"), py::arg("h"),
        py::arg("amplitude") = 1.0);
    m.def(
        "interpolation_error",
        [](const std::string& family, const std::vector<double>& theta,
           const std::vector<double>& h, double amplitude) {
            const SpectralDensity F{family_of(family), theta, amplitude};
            return interpolation_error(F, GridSpec{h}, QuadratureConfig{});
        },
        py::arg("family"), py::arg("theta"), py::arg("h"), py::arg("amplitude") = 1.0,
        "Cell-averaged mean squared error of the optimal grid interpolant");
    m.def("exponential_error_closed", &exponential_error_closed, py::arg("theta"), py::arg("h"),
          py::arg("amplitude") = 1.0);
    m.def("exponential_error_taylor", &exponential_error_taylor, py::arg("theta"), py::arg("h"),
          py::arg("amplitude") = 1.0);
    m.def(
        "sqexp_error_bounds",
        [](double theta, double h, double amplitude) {
            const auto b = sqexp_error_bounds(theta, h, amplitude);
            return py::make_tuple(b.lower, b.upper, b.advisory);
        },
        py::arg("theta"), py::arg("h"), py::arg("amplitude") = 1.0);

    // ---- minimax errors
    m.def(
        "minimax_error_single",
        [](double L, const std::vector<double>& lam, const std::vector<double>& h) {
            return minimax_error_single(SmoothnessClass{L, lam}, GridSpec{h});
        },
        py::arg("L"), py::arg("lam"), py::arg("h"),
        "Worst-case interpolation error over the smoothness class");
    m.def(
        "minimax_kernel",
        [](const std::vector<double>& omega, const std::vector<double>& h) {
            return minimax_kernel_eval(omega, GridSpec{h});
        },
        py::arg("omega"), py::arg("h"));
    m.def(
        "verify_kernel_bound",
        [](const std::vector<double>& omega, const std::vector<double>& h) {
            const auto s = verify_kernel_bound(omega, GridSpec{h});
            return py::make_tuple(s.lhs, s.rhs);
        },
        py::arg("omega"), py::arg("h"));
    m.def(
        "spiky_lower_bound",
        [](double L, const std::vector<double>& lam, const std::vector<double>& h, double eps) {
            const GridSpec grid{h};
            const SmoothnessClass cls{L, lam};
            return spiky_lower_bound(make_spiky(cls, grid, eps), grid, QuadratureConfig{});
        },
        py::arg("L"), py::arg("lam"), py::arg("h"), py::arg("eps") = 1e-3);
    m.def(
        "optimal_grid",
        [](double L, const std::vector<double>& lam, double n) {
            return optimal_grid(SmoothnessClass{L, lam}, n);
        },
        py::arg("L"), py::arg("lam"), py::arg("n"));
    m.def(
        "minimax_error_vf",
        [](double lf, double lg, double rho, double h, int m_, int d) {
            return minimax_error_vf(FidelitySmoothness{lf, lg, rho, 1.0, 1.0}, h, m_, d);
        },
        py::arg("lf"), py::arg("lg"), py::arg("rho"), py::arg("h"), py::arg("m"), py::arg("d"));

    // ---- budget allocation
    m.def("rho_squared_from_corr", &rho_squared_from_corr, py::arg("r"), py::arg("vf") = 1.0,
          py::arg("vg") = 1.0);
    m.def(
        "optimal_ratio",
        [](double lf, double lg, double rho, double cost, int d) {
            return optimal_ratio(FidelitySmoothness{lf, lg, rho, 1.0, 1.0}, cost, d);
        },
        py::arg("lf"), py::arg("lg"), py::arg("rho"), py::arg("cost"), py::arg("d"),
        "Budget-optimal low-to-high sample size ratio");
    m.def(
        "benefit_ratio",
        [](double lf, double lg, double rho, double cost, int d) {
            return benefit_ratio(FidelitySmoothness{lf, lg, rho, 1.0, 1.0}, cost, d);
        },
        py::arg("lf"), py::arg("lg"), py::arg("rho"), py::arg("cost"), py::arg("d"));
    m.def(
        "threshold_correlation",
        [](double lf, double lg, double cost, int d, double k) -> py::object {
            const auto r = threshold_correlation(FidelitySmoothness{lf, lg, 1.0, 1.0, 1.0}, cost,
                                                 d, k);
            if (!r) return py::none();
            return py::float_(*r);
        },
        py::arg("lf"), py::arg("lg"), py::arg("cost"), py::arg("d"), py::arg("k") = 1.0);
    m.def(
        "plan",
        [](double r, double budget, double cost, int d, long min_high) {
            return plan_dict(plan(r, BudgetSpec{budget, cost}, d, min_high));
        },
        py::arg("r"), py::arg("budget"), py::arg("cost"), py::arg("d"), py::arg("min_high") = 5,
        "Sample sizes of the minimax-driven allocation");
    m.def(
        "baseline_plan",
        [](const std::string& kind, double budget, double cost) {
            return plan_dict(baseline_plan(baseline_of(kind), BudgetSpec{budget, cost}));
        },
        py::arg("kind"), py::arg("budget"), py::arg("cost"));

    // ---- regression models
    py::class_<GPModel>(m, "GPModel")
        .def("predict", &GPModel::predict, py::arg("X"))
        .def_property_readonly("theta", [](const GPModel& g) { return g.params().theta; })
        .def_property_readonly("variance", [](const GPModel& g) { return g.params().variance; })
        .def_property_readonly("nugget", [](const GPModel& g) { return g.params().nugget; })
        .def_property_readonly("mean_offset", &GPModel::mean_offset);
    py::class_<CoKrigingModel>(m, "CoKrigingModel")
        .def("predict",
             [](const CoKrigingModel& c, const Eigen::MatrixXd& x) { return predict(c, x); },
             py::arg("X"))
        .def_readonly("rho_hat", &CoKrigingModel::rho_hat)
        .def_property_readonly("low_model",
                               [](const CoKrigingModel& c) { return c.low_model; })
        .def_property_readonly("delta_model",
                               [](const CoKrigingModel& c) { return c.delta_model; });

    m.def(
        "fit_gp",
        [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
            return fit_gp(dataset_of(x, y, Fidelity::High));
        },
        py::arg("X"), py::arg("y"), "Maximum-likelihood Matern-3/2 kriging fit");
    m.def(
        "fit_cokriging",
        [](const Eigen::MatrixXd& xl, const Eigen::VectorXd& yl, const Eigen::MatrixXd& xh,
           const Eigen::VectorXd& yh, std::optional<double> rho) {
            return fit_cokriging(dataset_of(xl, yl, Fidelity::Low),
                                 dataset_of(xh, yh, Fidelity::High), rho);
        },
        py::arg("X_low"), py::arg("y_low"), py::arg("X_high"), py::arg("y_high"),
        py::arg("rho") = py::none());
    m.def("rrms", &rrms, py::arg("pred"), py::arg("truth"));

    // ---- experiments
    m.def("generate_nested_design", &generate_nested_design, py::arg("n_low"), py::arg("n_high"),
          py::arg("d"), py::arg("seed"));
    m.def(
        "sample_gp_realization",
        [](const Eigen::MatrixXd& pts, const Eigen::VectorXd& theta, double variance,
           std::uint64_t seed) {
            MaternParams p;
            p.theta = theta;
            p.variance = variance;
            return sample_gp_realization(pts, p, seed);
        },
        py::arg("points"), py::arg("theta"), py::arg("variance"), py::arg("seed"));
    m.def(
        "estimate_correlation",
        [](const Eigen::MatrixXd& xl, const Eigen::VectorXd& yl, const Eigen::MatrixXd& xh,
           const Eigen::VectorXd& yh) {
            return estimate_correlation(dataset_of(xl, yl, Fidelity::Low),
                                        dataset_of(xh, yh, Fidelity::High));
        },
        py::arg("X_low"), py::arg("y_low"), py::arg("X_high"), py::arg("y_high"));
    m.def(
        "run_share_sweep",
        [](int d, double theta, double rho, std::uint64_t seed, double budget, double cost,
           int reps, const std::vector<double>& shares, int test_size) {
            SyntheticSpec spec;
            spec.d = d;
            spec.theta_f = Eigen::VectorXd::Constant(d, theta);
            spec.theta_g = Eigen::VectorXd::Constant(d, theta);
            spec.rho = rho;
            spec.seed = seed;
            ExperimentConfig config;
            config.budget = budget;
            config.cost_high = cost;
            config.replications = reps;
            config.share_grid = shares;
            config.test_size = test_size;
            py::list out;
            for (const auto& r : run_share_sweep(spec, config)) out.append(result_dict(r));
            return out;
        },
        py::arg("d"), py::arg("theta"), py::arg("rho"), py::arg("seed"), py::arg("budget"),
        py::arg("cost"), py::arg("reps"), py::arg("shares"), py::arg("test_size") = 200);
    m.def(
        "run_baseline_comparison",
        [](const Eigen::MatrixXd& xl, const Eigen::VectorXd& yl, const Eigen::MatrixXd& xh,
           const Eigen::VectorXd& yh, double budget, double cost, int reps, int folds,
           std::uint64_t seed, std::optional<double> r_est) {
            ExperimentConfig config;
            config.budget = budget;
            config.cost_high = cost;
            config.replications = reps;
            config.folds = folds;
            config.master_seed = seed;
            py::list out;
            for (const auto& r :
                 run_baseline_comparison(dataset_of(xl, yl, Fidelity::Low),
                                         dataset_of(xh, yh, Fidelity::High), config, r_est))
                out.append(result_dict(r));
            return out;
        },
        py::arg("X_low"), py::arg("y_low"), py::arg("X_high"), py::arg("y_high"),
        py::arg("budget"), py::arg("cost"), py::arg("reps") = 5, py::arg("folds") = 5,
        py::arg("seed") = 0, py::arg("r_est") = py::none());

    m.attr("__version__") = "0.1.0";
}
