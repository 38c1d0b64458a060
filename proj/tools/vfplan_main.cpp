// vfplan: budget planning and error analysis for two-fidelity regression.
//
// Subcommands: plan, tradeoff, error, simulate, benchmark, replay. Every
// file-producing run writes a manifest (PREFIX.manifest.json) from which
// `replay` regenerates the outputs byte-for-byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vfplan/allocation.hpp"
#include "vfplan/dataset_io.hpp"
#include "vfplan/harness.hpp"
#include "vfplan/minimax.hpp"
#include "vfplan/spectral.hpp"

using json = nlohmann::ordered_json;
using namespace vfplan;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr std::uint64_t kDefaultSeed = 20171123ULL;

using Params = std::map<std::string, std::string>;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(const std::string& out_prefix, const std::string& command,
                    const Params& params, std::uint64_t master_seed) {
    json m;
    m["command"] = command;
    m["parameters"] = json::object();
    for (const auto& [k, v] : params) m["parameters"][k] = v;
    m["master_seed"] = master_seed;
    m["tool_version"] = kToolVersion;
    m["timestamp"] = iso_timestamp();
    std::ofstream out(out_prefix + ".manifest.json");
    out << m.dump(2) << "\n";
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        out.push_back(std::stod(cell));
    }
    return out;
}

double get_d(const Params& p, const std::string& key) { return std::stod(p.at(key)); }
long get_l(const Params& p, const std::string& key) { return std::stol(p.at(key)); }
std::uint64_t get_u64(const Params& p, const std::string& key) {
    return std::stoull(p.at(key));
}

void require_corr_domain(double r) {
    if (!(r > 1e-6) || !(r < 1.0 - 1e-6))
        throw CLI::ValidationError(
            "--corr",
            "correlation must lie strictly inside (1e-06, 1 - 1e-06); estimated correlations "
            "are clamped to this interval before planning");
}

Eigen::VectorXd theta_vector(const std::string& text, int d) {
    const auto vals = parse_list(text);
    Eigen::VectorXd theta(d);
    if (vals.size() == 1) {
        theta.setConstant(vals[0]);
    } else if (static_cast<int>(vals.size()) == d) {
        for (int i = 0; i < d; ++i) theta[i] = vals[i];
    } else {
        throw CLI::ValidationError("--theta-f/--theta-g",
                                   "need one value or one per dimension");
    }
    return theta;
}

json plan_to_json(const AllocationPlan& p) {
    json j;
    j["n_high"] = p.n_high;
    j["n_low"] = p.n_low;
    j["ratio"] = p.ratio;
    j["spent"] = p.spent;
    j["baseline"] = to_string(p.baseline);
    return j;
}

// ---------------------------------------------------------------- commands

int cmd_plan(const Params& params, const std::string& out_prefix) {
    const BudgetSpec spec{get_d(params, "budget"), get_d(params, "cost")};
    AllocationPlan p;
    const std::string baseline = params.at("baseline");
    if (baseline.empty()) {
        const double r = get_d(params, "corr");
        require_corr_domain(r);
        p = plan(r, spec, static_cast<int>(get_l(params, "dim")), get_l(params, "min_high"));
    } else if (baseline == "high") {
        p = baseline_plan(BaselineKind::High, spec);
    } else if (baseline == "low") {
        p = baseline_plan(BaselineKind::Low, spec);
    } else if (baseline == "equal-size") {
        p = baseline_plan(BaselineKind::EqualSize, spec);
    } else if (baseline == "equal-budget") {
        p = baseline_plan(BaselineKind::EqualBudget, spec);
    } else {
        throw CLI::ValidationError("--baseline",
                                   "expected one of high, low, equal-size, equal-budget");
    }

    const json j = plan_to_json(p);
    if (out_prefix.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_prefix + "_plan.json");
        out << j.dump(2) << "\n";
    }

    if (params.at("emit_designs") == "1") {
        if (out_prefix.empty())
            throw CLI::ValidationError("--emit-designs", "requires --out PREFIX");
        const int d = static_cast<int>(get_l(params, "dim"));
        const auto [low, high] =
            generate_nested_design(std::max(p.n_low, p.n_high), std::min(p.n_low, p.n_high), d,
                                   get_u64(params, "seed"));
        // the larger design hosts the nested smaller one whichever side it is
        const Eigen::MatrixXd& d_low = p.n_low >= p.n_high ? low : high;
        const Eigen::MatrixXd& d_high = p.n_low >= p.n_high ? high : low;
        std::vector<std::string> header;
        for (int c = 0; c < d; ++c) header.push_back("x" + std::to_string(c + 1));
        const auto dump_points = [&](const std::string& path, const Eigen::MatrixXd& pts) {
            std::vector<std::vector<std::string>> rows;
            for (long i = 0; i < pts.rows(); ++i) {
                std::vector<std::string> row;
                for (int c = 0; c < d; ++c) row.push_back(format_g17(pts(i, c)));
                rows.push_back(std::move(row));
            }
            write_csv(path, header, rows);
        };
        dump_points(out_prefix + "_low.csv", d_low);
        dump_points(out_prefix + "_high.csv", d_high);
    }
    if (!out_prefix.empty())
        write_manifest(out_prefix, "plan", params, get_u64(params, "seed"));
    return 0;
}

int cmd_tradeoff(const Params& params, const std::string& out_prefix) {
    const double lf = get_d(params, "lf");
    const double lg = get_d(params, "lg");
    const int d = static_cast<int>(get_l(params, "dim"));

    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    if (params.at("k").empty()) {
        const double c = get_d(params, "cost");
        const double r_min = get_d(params, "r_min");
        const double r_max = get_d(params, "r_max");
        const long count = get_l(params, "r_count");
        header = {"r", "ratio"};
        std::vector<double> grid(count);
        for (long i = 0; i < count; ++i)
            grid[i] = count == 1 ? r_min : r_min + (r_max - r_min) * i / double(count - 1);
        for (const auto& p : benefit_curve({lf, lg, 1.0, 1.0, 1.0}, c, d, grid))
            rows.push_back({format_g17(p.r), format_g17(p.ratio_R2_R1)});
    } else {
        const double k = get_d(params, "k");
        const double c_min = get_d(params, "cost_min");
        const double c_max = get_d(params, "cost_max");
        const long count = get_l(params, "cost_count");
        header = {"c", "r_threshold"};
        for (long i = 0; i < count; ++i) {
            const double c = count == 1
                                 ? c_min
                                 : c_min * std::pow(c_max / c_min, i / double(count - 1));
            const FidelitySmoothness fs{lf, lg, 1.0, 1.0, 1.0};
            const auto r = threshold_correlation(fs, c, d, k);
            rows.push_back({format_g17(c),
                            r ? format_g17(*r) : std::string("nan")});
        }
    }

    if (out_prefix.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c)
            std::cout << header[c] << (c + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c)
                std::cout << row[c] << (c + 1 < row.size() ? "," : "\n");
    } else {
        write_csv(out_prefix + "_tradeoff.csv", header, rows);
        write_manifest(out_prefix, "tradeoff", params, 0);
    }
    return 0;
}

int cmd_error(const Params& params, const std::string& out_prefix) {
    std::vector<std::vector<std::string>> rows;
    const std::string mode = params.at("mode");
    if (mode == "density") {
        const std::string family = params.at("density");
        const double theta = get_d(params, "theta");
        const double h = get_d(params, "h");
        const double amp = get_d(params, "amplitude");
        QuadratureConfig cfg;
        if (family == "exp") {
            const SpectralDensity f{SpectralFamily::Exponential, {theta}, amp};
            rows.push_back({"quadrature", format_g17(interpolation_error(f, {{h}}, cfg))});
            rows.push_back({"closed", format_g17(exponential_error_closed(theta, h, amp))});
            rows.push_back({"taylor", format_g17(exponential_error_taylor(theta, h, amp))});
        } else if (family == "sqexp") {
            const SpectralDensity f{SpectralFamily::SquaredExponential, {theta}, amp};
            rows.push_back({"quadrature", format_g17(interpolation_error(f, {{h}}, cfg))});
            const auto b = sqexp_error_bounds(theta, h, amp);
            rows.push_back({"bound_lower", format_g17(b.lower)});
            rows.push_back({"bound_upper", format_g17(b.upper)});
            if (b.advisory) rows.push_back({"bounds_advisory", "1"});
        } else {
            throw CLI::ValidationError("--density", "expected exp or sqexp");
        }
    } else if (mode == "minimax") {
        const auto lambda = parse_list(params.at("lambda"));
        const auto h = parse_list(params.at("h_vec"));
        const SmoothnessClass cls{get_d(params, "L"), lambda};
        rows.push_back({"formula", format_g17(minimax_error_single(cls, {h}))});
    } else if (mode == "vf") {
        const FidelitySmoothness fs{get_d(params, "lf"), get_d(params, "lg"),
                                    get_d(params, "rho"), 1.0, 1.0};
        rows.push_back(
            {"formula", format_g17(minimax_error_vf(fs, get_d(params, "h"),
                                                    static_cast<int>(get_l(params, "m")),
                                                    static_cast<int>(get_l(params, "dim"))))});
    } else {
        throw CLI::ValidationError("error", "choose --density, --minimax or --vf");
    }

    const std::vector<std::string> header = {"method", "value"};
    if (out_prefix.empty()) {
        std::cout << "method,value\n";
        for (const auto& row : rows) std::cout << row[0] << "," << row[1] << "\n";
    } else {
        write_csv(out_prefix + "_error.csv", header, rows);
        write_manifest(out_prefix, "error", params, 0);
    }
    return 0;
}

int cmd_simulate(const Params& params, const std::string& out_prefix) {
    const int d = static_cast<int>(get_l(params, "dim"));
    const double r = get_d(params, "corr");
    require_corr_domain(r);

    SyntheticSpec spec;
    spec.d = d;
    spec.theta_f = theta_vector(params.at("theta_f"), d);
    spec.theta_g = theta_vector(params.at("theta_g"), d);
    spec.rho = std::sqrt(rho_squared_from_corr(r));
    spec.seed = get_u64(params, "seed");

    ExperimentConfig config;
    config.budget = get_d(params, "budget");
    config.cost_high = get_d(params, "cost");
    config.replications = static_cast<int>(get_l(params, "reps"));
    config.test_size = static_cast<int>(get_l(params, "test_size"));
    config.share_grid = parse_list(params.at("shares"));
    std::sort(config.share_grid.begin(), config.share_grid.end());

    // the technique's own predicted share joins the grid and is marked
    const double s_star = optimal_ratio({1.0, 1.0, spec.rho, 1.0, 1.0}, config.cost_high, d);
    const double predicted = s_star / (config.cost_high + s_star);
    bool present = false;
    for (double s : config.share_grid) present = present || std::abs(s - predicted) <= 1e-12;
    if (!present) {
        config.share_grid.push_back(predicted);
        std::sort(config.share_grid.begin(), config.share_grid.end());
    }

    const auto results = run_share_sweep(spec, config);

    std::vector<std::vector<std::string>> rows;
    int bad = 0;
    for (const auto& res : results) {
        rows.push_back({format_g17(res.share), std::to_string(res.n_high),
                        std::to_string(res.n_low), format_g17(res.rrms_mean),
                        format_g17(res.rrms_std),
                        std::abs(res.share - predicted) <= 1e-12 ? "1" : "0", res.flag});
        if (res.flag != "ok") {
            if (bad == 0)
                std::cerr << "share " << res.share << ": " << res.flag
                          << " (needs at least two points on one fidelity)\n";
            ++bad;
        }
    }
    write_csv(out_prefix + "_sweep.csv",
              {"share", "n_high", "n_low", "rrms_mean", "rrms_std", "predicted", "status"}, rows);
    write_manifest(out_prefix, "simulate", params, spec.seed);
    return bad == 0 ? 0 : 1;
}

int cmd_benchmark(const Params& params, const std::string& out_prefix) {
    const auto low = read_dataset_csv(params.at("low"), Fidelity::Low);
    const auto high = read_dataset_csv(params.at("high"), Fidelity::High);

    ExperimentConfig config;
    config.budget = get_d(params, "budget");
    config.cost_high = get_d(params, "cost");
    config.replications = static_cast<int>(get_l(params, "reps"));
    config.folds = static_cast<int>(get_l(params, "folds"));
    config.min_high = get_l(params, "min_high");
    config.master_seed = get_u64(params, "seed");

    std::optional<double> r_est;
    if (!params.at("corr").empty()) {
        r_est = get_d(params, "corr");
        require_corr_domain(*r_est);
    }

    const auto results = run_baseline_comparison(low, high, config, r_est);

    std::vector<std::vector<std::string>> rows;
    int bad = 0;
    for (const auto& res : results) {
        rows.push_back({res.method, std::to_string(res.n_high), std::to_string(res.n_low),
                        format_g17(res.rrms_mean), format_g17(res.rrms_std), res.flag});
        if (res.flag != "ok") {
            if (bad == 0)
                std::cerr << res.method << ": " << res.flag
                          << " (plan exceeds the available training data)\n";
            ++bad;
        }
    }
    write_csv(out_prefix + "_benchmark.csv",
              {"method", "n_high", "n_low", "rrms_mean", "rrms_std", "status"}, rows);
    write_manifest(out_prefix, "benchmark", params, config.master_seed);
    return bad == 0 ? 0 : 1;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_prefix) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error(manifest_path + ": cannot open");
    json m = json::parse(in);
    Params params;
    for (const auto& [k, v] : m.at("parameters").items())
        params[k] = v.get<std::string>();
    const std::string command = m.at("command").get<std::string>();
    if (command == "plan") return cmd_plan(params, out_prefix);
    if (command == "tradeoff") return cmd_tradeoff(params, out_prefix);
    if (command == "error") return cmd_error(params, out_prefix);
    if (command == "simulate") return cmd_simulate(params, out_prefix);
    if (command == "benchmark") return cmd_benchmark(params, out_prefix);
    throw std::runtime_error("replay: unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget planning and minimax error analysis for two-fidelity regression"};
    app.require_subcommand(1);
    // --h is a real option below; keep help on --help only
    app.set_help_flag("--help", "print help");

    // ---- plan
    auto* plan_cmd = app.add_subcommand("plan", "Sample-size plan for a budget");
    double p_budget = 300.0, p_cost = 5.0, p_corr = 0.0;
    long p_dim = 1, p_min_high = 5;
    std::uint64_t p_seed = kDefaultSeed;
    bool p_emit = false;
    std::string p_baseline, p_out;
    plan_cmd->add_option("--budget", p_budget, "total evaluation budget")->required();
    plan_cmd->add_option("--cost", p_cost, "cost of one high-fidelity evaluation")->required();
    plan_cmd->add_option("--corr", p_corr, "correlation between fidelities, in (1e-6, 1-1e-6)");
    plan_cmd->add_option("--dim", p_dim, "input dimension");
    plan_cmd->add_option("--min-high", p_min_high, "floor for the high-fidelity sample size");
    plan_cmd->add_option("--seed", p_seed, "seed for emitted designs");
    plan_cmd->add_flag("--emit-designs", p_emit, "also write the nested designs as CSV");
    plan_cmd->add_option("--baseline", p_baseline,
                         "plan a heuristic instead: high, low, equal-size, equal-budget");
    plan_cmd->add_option("--out", p_out, "output prefix (default: JSON to stdout)");

    // ---- tradeoff
    auto* trade_cmd = app.add_subcommand("tradeoff", "Benefit curves and threshold correlations");
    double t_lf = 1.0, t_lg = 1.0, t_cost = 5.0, t_rmin = 0.01, t_rmax = 0.99;
    double t_cmin = 2.0, t_cmax = 100.0;
    long t_dim = 1, t_rcount = 99, t_ccount = 50;
    std::string t_k, t_out;
    trade_cmd->add_option("--lf", t_lf, "smoothness budget of the low-fidelity process");
    trade_cmd->add_option("--lg", t_lg, "smoothness budget of the correction");
    trade_cmd->add_option("--dim", t_dim, "input dimension");
    trade_cmd->add_option("--cost", t_cost, "high-fidelity cost (benefit sweep)");
    trade_cmd->add_option("--r-min", t_rmin, "sweep start");
    trade_cmd->add_option("--r-max", t_rmax, "sweep end");
    trade_cmd->add_option("--r-count", t_rcount, "sweep points");
    trade_cmd->add_option("--k", t_k, "threshold mode: target ratio R2 = k R1");
    trade_cmd->add_option("--cost-min", t_cmin, "threshold mode: cost sweep start");
    trade_cmd->add_option("--cost-max", t_cmax, "threshold mode: cost sweep end");
    trade_cmd->add_option("--cost-count", t_ccount, "threshold mode: cost sweep points");
    trade_cmd->add_option("--out", t_out, "output prefix (default: CSV to stdout)");

    // ---- error
    auto* err_cmd = app.add_subcommand("error", "Interpolation error evaluators");
    err_cmd->set_help_flag("--help", "print help");
    std::string e_density, e_lambda = "1", e_hvec = "1", e_out;
    double e_theta = 1.0, e_h = 0.1, e_amp = 1.0, e_L = 1.0, e_lf = 1.0, e_lg = 1.0, e_rho = 1.0;
    long e_m = 1, e_dim = 1;
    bool e_minimax = false, e_vf = false;
    err_cmd->add_option("--density", e_density, "spectral family: exp or sqexp");
    err_cmd->add_option("--theta", e_theta, "inverse length scale");
    err_cmd->add_option("--h", e_h, "grid step (density mode) or step h (vf mode)");
    err_cmd->add_option("--amplitude", e_amp, "density amplitude");
    err_cmd->add_flag("--minimax", e_minimax, "worst-case error over a smoothness class");
    err_cmd->add_option("--L", e_L, "derivative-energy budget");
    err_cmd->add_option("--lambda", e_lambda, "per-axis weights, comma separated");
    err_cmd->add_option("--h-vec", e_hvec, "per-axis grid steps, comma separated");
    err_cmd->add_flag("--vf", e_vf, "two-fidelity minimax error");
    err_cmd->add_option("--lf", e_lf, "low-fidelity smoothness budget");
    err_cmd->add_option("--lg", e_lg, "correction smoothness budget");
    err_cmd->add_option("--rho", e_rho, "scale coefficient");
    err_cmd->add_option("--m", e_m, "refinement factor of the low-fidelity grid");
    err_cmd->add_option("--dim", e_dim, "input dimension");
    err_cmd->add_option("--out", e_out, "output prefix (default: CSV to stdout)");

    // ---- simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Synthetic share sweep");
    double s_budget = 300.0, s_cost = 5.0, s_corr = 0.9;
    long s_dim = 3, s_reps = 20, s_test = 200;
    std::string s_shares = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1",
                s_thetaf = "16", s_thetag = "16", s_out;
    std::uint64_t s_seed = 0;
    sim_cmd->add_option("--dim", s_dim, "input dimension");
    sim_cmd->add_option("--cost", s_cost, "high-fidelity cost");
    sim_cmd->add_option("--corr", s_corr, "target correlation between fidelities");
    sim_cmd->add_option("--budget", s_budget, "total budget");
    sim_cmd->add_option("--reps", s_reps, "replications per share");
    sim_cmd->add_option("--shares", s_shares, "comma-separated low-fidelity budget shares");
    sim_cmd->add_option("--test-size", s_test, "test points per replication");
    sim_cmd->add_option("--theta-f", s_thetaf, "Matern theta of f (one value or per axis)");
    sim_cmd->add_option("--theta-g", s_thetag, "Matern theta of g (one value or per axis)");
    sim_cmd->add_option("--seed", s_seed, "master seed");
    sim_cmd->add_option("--out", s_out, "output prefix")->required();

    // ---- benchmark
    auto* bench_cmd = app.add_subcommand("benchmark", "Technique comparison on CSV datasets");
    std::string b_low, b_high, b_corr, b_out;
    double b_budget = 300.0, b_cost = 5.0;
    long b_reps = 20, b_folds = 5, b_min_high = 5;
    std::uint64_t b_seed = 0;
    bench_cmd->add_option("--low", b_low, "low-fidelity dataset CSV (x1..xd,y)")->required();
    bench_cmd->add_option("--high", b_high, "high-fidelity dataset CSV (x1..xd,y)")->required();
    bench_cmd->add_option("--budget", b_budget, "total budget");
    bench_cmd->add_option("--cost", b_cost, "high-fidelity cost");
    bench_cmd->add_option("--reps", b_reps, "cross-validation repetitions");
    bench_cmd->add_option("--folds", b_folds, "cross-validation folds");
    bench_cmd->add_option("--min-high", b_min_high, "floor for the high-fidelity sample size");
    bench_cmd->add_option("--corr", b_corr, "override the estimated correlation");
    bench_cmd->add_option("--seed", b_seed, "master seed");
    bench_cmd->add_option("--out", b_out, "output prefix")->required();

    // ---- replay
    auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded manifest");
    std::string r_manifest, r_out;
    replay_cmd->add_option("manifest", r_manifest, "manifest JSON path")->required();
    replay_cmd->add_option("--out", r_out, "output prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(plan_cmd)) {
            if (p_baseline.empty() && !plan_cmd->count("--corr"))
                throw CLI::ValidationError("--corr", "required unless --baseline is given");
            Params params{{"budget", format_g17(p_budget)},
                          {"cost", format_g17(p_cost)},
                          {"corr", format_g17(p_corr)},
                          {"dim", std::to_string(p_dim)},
                          {"min_high", std::to_string(p_min_high)},
                          {"seed", std::to_string(p_seed)},
                          {"emit_designs", p_emit ? "1" : "0"},
                          {"baseline", p_baseline}};
            return cmd_plan(params, p_out);
        }
        if (app.got_subcommand(trade_cmd)) {
            Params params{{"lf", format_g17(t_lf)},       {"lg", format_g17(t_lg)},
                          {"dim", std::to_string(t_dim)}, {"cost", format_g17(t_cost)},
                          {"r_min", format_g17(t_rmin)},  {"r_max", format_g17(t_rmax)},
                          {"r_count", std::to_string(t_rcount)},
                          {"k", t_k},
                          {"cost_min", format_g17(t_cmin)},
                          {"cost_max", format_g17(t_cmax)},
                          {"cost_count", std::to_string(t_ccount)}};
            return cmd_tradeoff(params, t_out);
        }
        if (app.got_subcommand(err_cmd)) {
            Params params{{"mode", e_minimax ? "minimax" : (e_vf ? "vf" : "density")},
                          {"density", e_density},
                          {"theta", format_g17(e_theta)},
                          {"h", format_g17(e_h)},
                          {"amplitude", format_g17(e_amp)},
                          {"L", format_g17(e_L)},
                          {"lambda", e_lambda},
                          {"h_vec", e_hvec},
                          {"lf", format_g17(e_lf)},
                          {"lg", format_g17(e_lg)},
                          {"rho", format_g17(e_rho)},
                          {"m", std::to_string(e_m)},
                          {"dim", std::to_string(e_dim)}};
            if (!e_minimax && !e_vf && e_density.empty())
                throw CLI::ValidationError("error", "choose --density, --minimax or --vf");
            return cmd_error(params, e_out);
        }
        if (app.got_subcommand(sim_cmd)) {
            if (!sim_cmd->count("--seed")) {
                s_seed = kDefaultSeed;
                std::cerr << "no --seed given; using the fixed default " << kDefaultSeed << "\n";
            }
            Params params{{"dim", std::to_string(s_dim)},
                          {"cost", format_g17(s_cost)},
                          {"corr", format_g17(s_corr)},
                          {"budget", format_g17(s_budget)},
                          {"reps", std::to_string(s_reps)},
                          {"shares", s_shares},
                          {"test_size", std::to_string(s_test)},
                          {"theta_f", s_thetaf},
                          {"theta_g", s_thetag},
                          {"seed", std::to_string(s_seed)}};
            return cmd_simulate(params, s_out);
        }
        if (app.got_subcommand(bench_cmd)) {
            if (!bench_cmd->count("--seed")) {
                b_seed = kDefaultSeed;
                std::cerr << "no --seed given; using the fixed default " << kDefaultSeed << "\n";
            }
            Params params{{"low", b_low},
                          {"high", b_high},
                          {"budget", format_g17(b_budget)},
                          {"cost", format_g17(b_cost)},
                          {"reps", std::to_string(b_reps)},
                          {"folds", std::to_string(b_folds)},
                          {"min_high", std::to_string(b_min_high)},
                          {"corr", b_corr},
                          {"seed", std::to_string(b_seed)}};
            return cmd_benchmark(params, b_out);
        }
        if (app.got_subcommand(replay_cmd)) {
            return cmd_replay(r_manifest, r_out);
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
