// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails. Run all criteria with no arguments or a single criterion
// by number: `acceptance 3`.

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "vfplan/allocation.hpp"
#include "vfplan/dataset_io.hpp"
#include "vfplan/harness.hpp"
#include "vfplan/minimax.hpp"
#include "vfplan/rng.hpp"
#include "vfplan/spectral.hpp"

using namespace vfplan;

namespace {

constexpr double kPi = oracles::kPi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string run_cli_capture(const std::string& args, int* exit_code = nullptr) {
    const std::string out_path = "/tmp/vfplan_acceptance_stdout.txt";
    const std::string cmd =
        std::string(VFPLAN_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    if (exit_code) *exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --------------------------------------------------------------- criteria

// exponential error through the CLI: 1% of the leading order, 1e-6 of the
// closed form
bool c1(std::string& detail) {
    const std::string out = run_cli_capture("error --density exp --theta 1 --h 0.001");
    double quad = 0.0, closed = 0.0;
    std::stringstream ss(out);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("quadrature,", 0) == 0) quad = std::stod(line.substr(11));
        if (line.rfind("closed,", 0) == 0) closed = std::stod(line.substr(7));
    }
    const double taylor = (2.0 / 3.0) * kPi * kPi * 1e-3;
    const double err_taylor = rel(quad, taylor);
    const double err_closed = rel(quad, closed);
    detail = "quadrature=" + format_g17(quad) + " vs (2/3)pi^2e-3: rel " +
             std::to_string(err_taylor) + ", vs closed: rel " + std::to_string(err_closed);
    return quad > 0.0 && err_taylor <= 0.01 && err_closed <= 1e-6;
}

// alias identity on the (theta h, omega) grid at 1e-10
bool c2(std::string& detail) {
    QuadratureConfig cfg;
    double worst = 0.0;
    for (double h : {0.1, 0.5, 1.0}) {
        for (double w = 0.0; w <= 0.5 / h + 1e-12; w += 0.1) {
            const SpectralDensity F{SpectralFamily::Exponential, {1.0}, 1.0};
            const double s = alias_sum(F, std::vector<double>{w}, {{h}}, cfg);
            worst = std::max(worst, rel(s, oracles::exp_alias_closed(1.0, h, w)));
        }
    }
    detail = "worst relative deviation " + format_g17(worst);
    return worst <= 1e-10;
}

// squared-exponential sandwich across the h grid
bool c3(std::string& detail) {
    QuadratureConfig cfg;
    std::ostringstream os;
    bool ok = true;
    for (double h : {0.05, 0.1, 0.15, 0.2}) {
        const SpectralDensity F{SpectralFamily::SquaredExponential, {1.0}, 1.0};
        const double v = interpolation_error(F, {{h}}, cfg);
        const auto b = sqexp_error_bounds(1.0, h);
        ok = ok && v >= b.lower && v <= b.upper;
        os << " h=" << h << ": " << format_g17(v) << " in [" << format_g17(b.lower) << ", "
           << format_g17(b.upper) << "]";
    }
    detail = os.str();
    return ok;
}

// saddle point: spiky witness within 2%, kernel bound on 1000 points per dim
bool c4(std::string& detail) {
    QuadratureConfig cfg;
    const SmoothnessClass cls{1.0, {1.0}};
    const GridSpec grid{{1.0}};
    const double target = minimax_error_single(cls, grid);
    const double witness = spiky_lower_bound(make_spiky(cls, grid, 1e-3), grid, cfg);
    const double gap = rel(witness, target);

    bool bound_ok = true;
    for (int d = 1; d <= 3 && bound_ok; ++d) {
        oracles::QuasiRandom q(d);
        GridSpec g{std::vector<double>(d, 1.0)};
        for (int i = 0; i < 1000; ++i) {
            auto u = q.next();
            for (double& x : u) x = 4.0 * x - 2.0;
            const auto s = verify_kernel_bound(u, g);
            if (s.lhs > s.rhs + 1e-12) {
                bound_ok = false;
                break;
            }
        }
    }
    detail = "witness gap " + std::to_string(gap) + ", kernel bound " +
             (bound_ok ? "holds" : "violated");
    return gap <= 0.02 && bound_ok;
}

// closed-form optimal ratio against the grid oracle over 36 cases
bool c5(std::string& detail) {
    double worst = 0.0;
    for (double lf : {1.0, 3.0})
        for (double c : {2.0, 5.0, 10.0})
            for (double rho2 : {1.0, 4.0})
                for (int d : {1, 2, 3}) {
                    const FidelitySmoothness fs{lf, 1.0, std::sqrt(rho2), 1.0, 1.0};
                    const double a = optimal_ratio(fs, c, d);
                    const double b = brute_force_ratio(fs, {300.0, c}, d, 2000);
                    worst = std::max(worst, rel(b, a));
                }
    detail = "worst relative deviation " + format_g17(worst);
    return worst <= 0.005;
}

// benefit-ratio limit and asymptotics, tolerances as stated
bool c6(std::string& detail) {
    const double rho2_limit = rho_squared_from_corr(0.9999);
    const FidelitySmoothness fs_limit{2.0, 1.0, std::sqrt(rho2_limit), 1.0, 1.0};
    const double at_limit = benefit_ratio(fs_limit, 5.0, 1);
    const double err_limit = rel(at_limit, 0.04);

    const auto unit_fs = [](double r) {
        return FidelitySmoothness{1.0, 1.0, std::sqrt(rho_squared_from_corr(r)), 1.0, 1.0};
    };
    const double small_exact = benefit_ratio(unit_fs(0.05), 5.0, 1);
    const double small_asym =
        benefit_ratio_asymptotic(unit_fs(0.05), 5.0, 1, BenefitRegime::AsymptoticSmallR);
    const double large_exact = benefit_ratio(unit_fs(0.99), 5.0, 1);
    const double large_asym =
        benefit_ratio_asymptotic(unit_fs(0.99), 5.0, 1, BenefitRegime::AsymptoticLargeR);
    const double err_small = rel(small_asym, small_exact);
    const double err_large = rel(large_asym, large_exact);

    std::ostringstream os;
    os << "ratio(r=0.9999)=" << format_g17(at_limit) << " vs 0.04 (rel "
       << std::to_string(err_limit) << "); asym/exact rel: r=0.05 " << std::to_string(err_small)
       << ", r=0.99 " << std::to_string(err_large)
       << " [exact " << format_g17(large_exact) << ", asym " << format_g17(large_asym) << "]";
    detail = os.str();
    // the convergence rate is (1 - r^2)^{1/(d+2)}; at these r the stated
    // tolerances are not reachable by the published formulas, and the suite
    // reports that honestly rather than loosening the check
    return err_limit <= 0.05 && err_small <= 0.10 && err_large <= 0.10;
}

// kriging exactness across fitted models
bool c7(std::string& detail) {
    double worst = 0.0;
    long models = 0;

    const auto check_gp = [&](const FidelityDataset& data) {
        const auto model = fit_gp(data);
        if (model.params().nugget <= 1e-8) {
            const Eigen::VectorXd at = model.predict(data.points);
            worst = std::max(worst, (at - data.values).cwiseAbs().maxCoeff());
            ++models;
        }
    };

    FidelityDataset five;
    five.points.resize(5, 1);
    five.points << 0.05, 0.31, 0.48, 0.77, 0.93;
    five.values.resize(5);
    five.values << 0.2, -0.4, 1.3, 0.9, -0.1;
    check_gp(five);

    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Rng rng(seed);
        const int d = seed % 2 ? 1 : 2;
        const long n = 5 + static_cast<long>(25 * rng.uniform01());
        FidelityDataset data;
        data.points.resize(n, d);
        for (long i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) data.points(i, c) = rng.uniform01();
        MaternParams p;
        p.theta = Eigen::VectorXd::Constant(d, 25.0);
        p.variance = 1.0;
        data.values = sample_gp_realization(data.points, p, derive_seed(seed, 3, 0));
        check_gp(data);
    }

    for (std::uint64_t seed = 21; seed <= 24; ++seed) {
        const auto [d_low, d_high] = generate_nested_design(30, 10, 1, seed);
        SyntheticSpec spec;
        spec.d = 1;
        spec.theta_f = Eigen::VectorXd::Constant(1, 25.0);
        spec.theta_g = Eigen::VectorXd::Constant(1, 25.0);
        spec.rho = 1.7;
        spec.seed = derive_seed(seed, 5, 0);
        Eigen::MatrixXd test(2, 1);
        test << 1.5, 2.5;
        const auto data = synth_variable_fidelity(spec, d_low, d_high, test);
        const auto model = fit_cokriging(data.low, data.high);
        if (model.low_model.params().nugget <= 1e-8 &&
            model.delta_model.params().nugget <= 1e-8) {
            const Eigen::VectorXd at = predict(model, data.high.points);
            worst = std::max(worst, (at - data.high.values).cwiseAbs().maxCoeff());
            ++models;
        }
    }

    detail = std::to_string(models) + " models, worst training residual " + format_g17(worst);
    return models >= 10 && worst <= 1e-8;
}

// two-fidelity posterior error against the additive error decomposition
bool c8(std::string& detail) {
    // exponential-spectrum processes (theta = 1, unit amplitude, rho = 1):
    // u on the step-0.5 grid over [0, 10], f on the step-0.25 grid; the
    // covariance pi exp(-2 pi theta |x - y|) matches that spectrum
    const double rho = 1.0;
    const double h = 0.5;
    const int m = 2;
    const double domain = 10.0;

    const auto cov = [](double a, double b) { return kPi * std::exp(-2.0 * kPi * std::abs(a - b)); };

    const long n_fine = static_cast<long>(domain / (h / m)) + 1;   // 41
    const long n_coarse = static_cast<long>(domain / h) + 1;       // 21
    Eigen::VectorXd fine(n_fine), coarse(n_coarse);
    for (long i = 0; i < n_fine; ++i) fine[i] = i * (h / m);
    for (long i = 0; i < n_coarse; ++i) coarse[i] = i * h;

    // interior-cell test points: 8 offsets per cell over [2.5, 7.5]
    std::vector<double> test;
    for (double cell = 2.5; cell < 7.5 - 1e-9; cell += h)
        for (int o = 0; o < 8; ++o) test.push_back(cell + (o + 0.5) / 8.0 * h);
    const long n_test = static_cast<long>(test.size());

    const auto gram = [&](const Eigen::VectorXd& a) {
        Eigen::MatrixXd g(a.size(), a.size());
        for (long i = 0; i < a.size(); ++i)
            for (long j = 0; j < a.size(); ++j) g(i, j) = cov(a[i], a[j]);
        return g;
    };
    const auto cross = [&](const std::vector<double>& a, const Eigen::VectorXd& b) {
        Eigen::MatrixXd g(static_cast<long>(a.size()), b.size());
        for (long i = 0; i < static_cast<long>(a.size()); ++i)
            for (long j = 0; j < b.size(); ++j) g(i, j) = cov(a[i], b[j]);
        return g;
    };

    // joint draw factors: f over fine+test, g over coarse+test
    Eigen::VectorXd f_pts(n_fine + n_test), g_pts(n_coarse + n_test);
    f_pts.head(n_fine) = fine;
    g_pts.head(n_coarse) = coarse;
    for (long i = 0; i < n_test; ++i) {
        f_pts[n_fine + i] = test[i];
        g_pts[n_coarse + i] = test[i];
    }
    Eigen::MatrixXd Kf_joint = gram(f_pts);
    Eigen::MatrixXd Kg_joint = gram(g_pts);
    Kf_joint.diagonal().array() += 1e-10;
    Kg_joint.diagonal().array() += 1e-10;
    const Eigen::MatrixXd Lf = Eigen::LLT<Eigen::MatrixXd>(Kf_joint).matrixL();
    const Eigen::MatrixXd Lg = Eigen::LLT<Eigen::MatrixXd>(Kg_joint).matrixL();

    // kriging weights: test-point predictions as linear maps of the data
    Eigen::MatrixXd Kff = gram(fine);
    Kff.diagonal().array() += 1e-10;
    const Eigen::MatrixXd Wf =
        Eigen::LLT<Eigen::MatrixXd>(Kff).solve(cross(test, fine).transpose()).transpose();
    Eigen::MatrixXd Kgg = gram(coarse);
    Kgg.diagonal().array() += 1e-10;
    const Eigen::MatrixXd Wg =
        Eigen::LLT<Eigen::MatrixXd>(Kgg).solve(cross(test, coarse).transpose()).transpose();

    const int reps = 200;
    double acc = 0.0;
    for (int repetition = 0; repetition < reps; ++repetition) {
        Rng rng(derive_seed(0xEC40u, static_cast<std::uint64_t>(repetition), 0));
        Eigen::VectorXd zf(f_pts.size()), zg(g_pts.size());
        for (long i = 0; i < zf.size(); ++i) zf[i] = rng.normal();
        for (long i = 0; i < zg.size(); ++i) zg[i] = rng.normal();
        const Eigen::VectorXd f_all = Lf * zf;
        const Eigen::VectorXd g_all = Lg * zg;

        // g is recoverable exactly at the coarse points (u and f observed)
        const Eigen::VectorXd f_fine = f_all.head(n_fine);
        Eigen::VectorXd g_coarse(n_coarse);
        for (long i = 0; i < n_coarse; ++i) g_coarse[i] = g_all[i];

        const Eigen::VectorXd u_true =
            rho * f_all.tail(n_test) + g_all.tail(n_test);
        const Eigen::VectorXd u_hat = rho * (Wf * f_fine) + Wg * g_coarse;
        acc += (u_hat - u_true).squaredNorm() / n_test;
    }
    const double measured = acc / reps;

    QuadratureConfig cfg;
    const SpectralDensity F{SpectralFamily::Exponential, {1.0}, 1.0};
    const double theory = interpolation_error(F, {{h}}, cfg) +
                          rho * rho * interpolation_error(F, {{h / m}}, cfg);
    const double gap = rel(measured, theory);
    detail = "monte carlo " + format_g17(measured) + " vs decomposition " + format_g17(theory) +
             " (rel " + std::to_string(gap) + ")";
    return gap <= 0.15;
}

// qualitative share-sweep shape at d = 3
bool c9(std::string& detail) {
    SyntheticSpec spec;
    spec.d = 3;
    spec.theta_f = Eigen::VectorXd::Constant(3, 16.0);
    spec.theta_g = Eigen::VectorXd::Constant(3, 16.0);
    spec.rho = std::sqrt(rho_squared_from_corr(0.9));
    spec.seed = 20250401;

    ExperimentConfig config;
    config.budget = 300.0;
    config.cost_high = 5.0;
    config.replications = 20;
    config.test_size = 200;
    config.share_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    const double s_star = optimal_ratio({1.0, 1.0, spec.rho, 1.0, 1.0}, config.cost_high, 3);
    const double predicted = s_star / (config.cost_high + s_star);
    config.share_grid.push_back(predicted);
    std::sort(config.share_grid.begin(), config.share_grid.end());

    const auto rows = run_share_sweep(spec, config);

    double low_end = 0.0, high_end = 0.0, interior_min = 1e300, global_min = 1e300;
    double at_predicted = 0.0;
    for (const auto& r : rows) {
        if (r.flag != "ok") continue;
        if (r.share == 0.0) high_end = r.rrms_mean;
        if (r.share == 1.0) low_end = r.rrms_mean;
        if (r.share > 0.0 && r.share < 1.0) interior_min = std::min(interior_min, r.rrms_mean);
        global_min = std::min(global_min, r.rrms_mean);
        if (std::abs(r.share - predicted) <= 1e-12) at_predicted = r.rrms_mean;
    }
    const double predicted_gap = (at_predicted - global_min) / global_min;
    std::ostringstream os;
    os << "endpoints (" << format_g17(high_end) << ", " << format_g17(low_end)
       << "), interior min " << format_g17(interior_min) << ", predicted share "
       << format_g17(predicted) << " -> " << format_g17(at_predicted) << " (gap to min "
       << std::to_string(predicted_gap) << ")";
    detail = os.str();
    return interior_min < high_end && interior_min < low_end && predicted_gap <= 0.15;
}

// heuristic plan table at budget 300, cost 5
bool c10(std::string& detail) {
    const BudgetSpec spec{300.0, 5.0};
    const auto high = baseline_plan(BaselineKind::High, spec);
    const auto eqsize = baseline_plan(BaselineKind::EqualSize, spec);
    const auto eqbud = baseline_plan(BaselineKind::EqualBudget, spec);
    const auto low = baseline_plan(BaselineKind::Low, spec);
    std::ostringstream os;
    os << "(" << high.n_high << "," << high.n_low << ") (" << eqsize.n_high << ","
       << eqsize.n_low << ") (" << eqbud.n_high << "," << eqbud.n_low << ") (" << low.n_high
       << "," << low.n_low << ")";
    detail = os.str();
    return high.n_high == 60 && high.n_low == 0 && eqsize.n_high == 50 && eqsize.n_low == 50 &&
           eqbud.n_high == 30 && eqbud.n_low == 150 && low.n_high == 0 && low.n_low == 300;
}

// byte-identical reruns of the randomized commands
bool c11(std::string& detail) {
    int rc1 = 0, rc2 = 0, rc3 = 0;
    const std::string sim_args =
        "simulate --dim 1 --cost 5 --corr 0.9 --budget 60 --reps 3 --shares 0,0.25,0.5,0.75,1 "
        "--test-size 50 --seed 404 --theta-f 16 --theta-g 16 --out ";
    run_cli_capture(sim_args + "/tmp/vfp_acc_a", &rc1);
    run_cli_capture(sim_args + "/tmp/vfp_acc_b", &rc2);
    run_cli_capture("replay /tmp/vfp_acc_a.manifest.json --out /tmp/vfp_acc_c", &rc3);
    const bool sim_ok = rc1 == 0 && rc2 == 0 && rc3 == 0 &&
                        slurp("/tmp/vfp_acc_a_sweep.csv") == slurp("/tmp/vfp_acc_b_sweep.csv") &&
                        slurp("/tmp/vfp_acc_a_sweep.csv") == slurp("/tmp/vfp_acc_c_sweep.csv");

    const auto [d_low, d_high] = generate_nested_design(70, 25, 2, 616);
    SyntheticSpec spec;
    spec.d = 2;
    spec.theta_f = Eigen::VectorXd::Constant(2, 16.0);
    spec.theta_g = Eigen::VectorXd::Constant(2, 16.0);
    spec.rho = 2.0;
    spec.seed = 33;
    Eigen::MatrixXd test(2, 2);
    test << 1.5, 1.5, 2.5, 2.5;
    const auto data = synth_variable_fidelity(spec, d_low, d_high, test);
    write_dataset_csv("/tmp/vfp_acc_low.csv", data.low);
    write_dataset_csv("/tmp/vfp_acc_high.csv", data.high);
    const std::string bench_args =
        "benchmark --low /tmp/vfp_acc_low.csv --high /tmp/vfp_acc_high.csv --budget 50 --cost 5 "
        "--reps 2 --folds 3 --seed 17 --out ";
    run_cli_capture(bench_args + "/tmp/vfp_acc_d", &rc1);
    run_cli_capture(bench_args + "/tmp/vfp_acc_e", &rc2);
    run_cli_capture("replay /tmp/vfp_acc_d.manifest.json --out /tmp/vfp_acc_f", &rc3);
    const bool bench_ok =
        rc1 == 0 && rc2 == 0 && rc3 == 0 &&
        slurp("/tmp/vfp_acc_d_benchmark.csv") == slurp("/tmp/vfp_acc_e_benchmark.csv") &&
        slurp("/tmp/vfp_acc_d_benchmark.csv") == slurp("/tmp/vfp_acc_f_benchmark.csv");

    detail = std::string("simulate ") + (sim_ok ? "identical" : "DIVERGED") + ", benchmark " +
             (bench_ok ? "identical" : "DIVERGED");
    return sim_ok && bench_ok;
}

struct Criterion {
    int number;
    const char* label;
    std::function<bool(std::string&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "exponential error reproduction (quadrature vs closed form and leading order)", c1},
        {2, "alias-sum identity at 1e-10 over the (theta h, omega) grid", c2},
        {3, "squared-exponential sandwich bounds", c3},
        {4, "minimax saddle: spiky witness within 2% and kernel bound on quasi-random points", c4},
        {5, "optimal ratio vs brute-force oracle over 36 cases at 0.5%", c5},
        {6, "benefit-ratio limit at r=0.9999 and asymptotic agreement at r=0.05/0.99", c6},
        {7, "kriging exactness of fitted models at 1e-8", c7},
        {8, "two-fidelity posterior error matches the additive decomposition within 15%", c8},
        {9, "share sweep: interior minimum below endpoints, predicted share within 15% of best",
         c9},
        {10, "heuristic plan table at budget 300, cost 5", c10},
        {11, "byte-identical reruns and replays of simulate and benchmark", c11},
    };

    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (selected != 0 && c.number != selected) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  [%2d] %s — %s\n", ok ? "PASS" : "FAIL", c.number, c.label,
                    detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
