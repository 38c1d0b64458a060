#include "vfplan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace vfplan {

namespace {

bool rows_match(const Eigen::MatrixXd& a, long i, const Eigen::MatrixXd& b, long j) {
    for (long c = 0; c < a.cols(); ++c)
        if (std::abs(a(i, c) - b(j, c)) > 1e-12) return false;
    return true;
}

long find_row(const Eigen::MatrixXd& hay, const Eigen::MatrixXd& needle, long row) {
    for (long i = 0; i < hay.rows(); ++i)
        if (rows_match(hay, i, needle, row)) return i;
    return -1;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("FIDELITY_PLANNER_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
}

// index-stable parallel loop; exceptions resurface on the caller thread
void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    threads = std::min<long>(threads, n);
    if (threads <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                const long i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct MeanStd {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd out;
    if (v.empty()) return out;
    out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return out;
}

Eigen::MatrixXd uniform_points(long n, int d, Rng& rng) {
    Eigen::MatrixXd p(n, d);
    for (long i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) p(i, c) = rng.uniform01();
    return p;
}

MaternParams params_of(const Eigen::VectorXd& theta, double variance) {
    MaternParams p;
    p.theta = theta;
    p.variance = variance;
    return p;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (d < 1) throw std::invalid_argument("SyntheticSpec: d must be >= 1");
    if (theta_f.size() != d || theta_g.size() != d)
        throw std::invalid_argument("SyntheticSpec: theta dimensions must match d");
    for (long i = 0; i < d; ++i)
        if (!(theta_f[i] > 0.0) || !(theta_g[i] > 0.0))
            throw std::invalid_argument("SyntheticSpec: theta must be positive");
    if (!(var_f > 0.0) || !(var_g > 0.0))
        throw std::invalid_argument("SyntheticSpec: variances must be positive");
}

void ExperimentConfig::validate() const {
    if (!(budget > 0.0)) throw std::invalid_argument("ExperimentConfig: budget must be positive");
    if (!(cost_high > 1.0))
        throw std::invalid_argument("ExperimentConfig: cost_high must exceed 1");
    if (replications < 1)
        throw std::invalid_argument("ExperimentConfig: replications must be >= 1");
    if (test_size < 2) throw std::invalid_argument("ExperimentConfig: test_size must be >= 2");
    if (folds < 1) throw std::invalid_argument("ExperimentConfig: folds must be >= 1");
    double prev = 0.0;
    for (double s : share_grid) {
        if (s < 0.0 || s > 1.0)
            throw std::invalid_argument("ExperimentConfig: shares must lie in [0, 1]");
        if (s < prev) throw std::invalid_argument("ExperimentConfig: share_grid must be sorted");
        prev = s;
    }
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_nested_design(long n_low, long n_high, int d,
                                                                   std::uint64_t seed) {
    if (n_high > n_low)
        throw std::invalid_argument("generate_nested_design: n_high cannot exceed n_low");
    if (n_low < 0 || d < 1) throw std::invalid_argument("generate_nested_design: bad sizes");
    Rng rng(seed);
    Eigen::MatrixXd low = uniform_points(n_low, d, rng);
    std::vector<long> idx(n_low);
    std::iota(idx.begin(), idx.end(), 0L);
    rng.partial_shuffle(idx, static_cast<std::size_t>(n_high));
    idx.resize(n_high);
    std::sort(idx.begin(), idx.end());
    Eigen::MatrixXd high(n_high, d);
    for (long i = 0; i < n_high; ++i) high.row(i) = low.row(idx[i]);
    return {std::move(low), std::move(high)};
}

Eigen::VectorXd sample_gp_realization(const Eigen::MatrixXd& points, const MaternParams& params,
                                      std::uint64_t seed) {
    params.validate();
    if (points.rows() < 1) throw std::invalid_argument("sample_gp_realization: empty point set");
    const auto chol = cholesky_with_escalation(matern_gram(points, params), params.variance,
                                               1e-10, 1e-4);
    Rng rng(seed);
    Eigen::VectorXd z(points.rows());
    for (long i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return chol.L * z;
}

SyntheticData synth_variable_fidelity(const SyntheticSpec& spec, const Eigen::MatrixXd& d_low,
                                      const Eigen::MatrixXd& d_high,
                                      const Eigen::MatrixXd& test_points) {
    spec.validate();
    if (d_low.cols() != spec.d || d_high.cols() != spec.d || test_points.cols() != spec.d)
        throw std::invalid_argument("synth_variable_fidelity: dimension mismatch");
    for (long t = 0; t < test_points.rows(); ++t) {
        if (find_row(d_low, test_points, t) >= 0 || find_row(d_high, test_points, t) >= 0)
            throw std::invalid_argument(
                "synth_variable_fidelity: test points must be disjoint from the designs");
    }

    const long nl = d_low.rows();
    const long nh = d_high.rows();
    const long nt = test_points.rows();

    // one joint f draw over low, unmatched high, and test points
    std::vector<long> high_extra;
    std::vector<long> high_pos(nh, -1);
    for (long i = 0; i < nh; ++i) {
        const long j = find_row(d_low, d_high, i);
        if (j >= 0)
            high_pos[i] = j;
        else {
            high_pos[i] = nl + static_cast<long>(high_extra.size());
            high_extra.push_back(i);
        }
    }
    Eigen::MatrixXd f_pts(nl + static_cast<long>(high_extra.size()) + nt, spec.d);
    f_pts.topRows(nl) = d_low;
    for (std::size_t k = 0; k < high_extra.size(); ++k)
        f_pts.row(nl + static_cast<long>(k)) = d_high.row(high_extra[k]);
    f_pts.bottomRows(nt) = test_points;

    const Eigen::VectorXd f_all = sample_gp_realization(
        f_pts, params_of(spec.theta_f, spec.var_f), derive_seed(spec.seed, 1, 0));

    Eigen::MatrixXd g_pts(nh + nt, spec.d);
    g_pts.topRows(nh) = d_high;
    g_pts.bottomRows(nt) = test_points;
    const Eigen::VectorXd g_all = sample_gp_realization(
        g_pts, params_of(spec.theta_g, spec.var_g), derive_seed(spec.seed, 2, 0));

    SyntheticData out;
    out.low.points = d_low;
    out.low.values = f_all.head(nl);
    out.low.fidelity = Fidelity::Low;

    out.high.points = d_high;
    out.high.values.resize(nh);
    for (long i = 0; i < nh; ++i)
        out.high.values[i] = spec.rho * f_all[high_pos[i]] + g_all[i];
    out.high.fidelity = Fidelity::High;

    out.truth.points = test_points;
    out.truth.values = spec.rho * f_all.tail(nt) + g_all.tail(nt);
    out.truth.fidelity = Fidelity::High;
    return out;
}

RunResult run_share(const SyntheticSpec& spec, const ExperimentConfig& config, double share,
                    int share_index) {
    spec.validate();
    config.validate();
    const long n_low = static_cast<long>(std::floor(share * config.budget));
    const long n_high =
        static_cast<long>(std::floor((1.0 - share) * config.budget / config.cost_high));

    RunResult res;
    res.share = share;
    res.method = "sweep";
    res.n_high = n_high;
    res.n_low = n_low;
    res.replications = config.replications;
    if (n_high < 2 && n_low < 2) {
        res.flag = "skipped";
        res.rrms_mean = std::numeric_limits<double>::quiet_NaN();
        res.rrms_std = std::numeric_limits<double>::quiet_NaN();
        return res;
    }

    std::vector<double> scores(config.replications);
    const auto one_rep = [&](long rep) {
        const std::uint64_t seed_r =
            derive_seed(spec.seed, static_cast<std::uint64_t>(rep),
                        static_cast<std::uint64_t>(share_index));
        Eigen::MatrixXd d_low, d_high;
        if (n_high <= n_low) {
            auto [lo, hi] = generate_nested_design(n_low, n_high, spec.d, derive_seed(seed_r, 11, 0));
            d_low = std::move(lo);
            d_high = std::move(hi);
        } else {
            // more high than low points: nest the low design inside the high one
            auto [hi, lo] = generate_nested_design(n_high, n_low, spec.d, derive_seed(seed_r, 11, 0));
            d_low = std::move(lo);
            d_high = std::move(hi);
        }
        Rng trng(derive_seed(seed_r, 12, 0));
        Eigen::MatrixXd test = uniform_points(config.test_size, spec.d, trng);

        SyntheticSpec rep_spec = spec;
        rep_spec.seed = derive_seed(seed_r, 13, 0);
        const SyntheticData data = synth_variable_fidelity(rep_spec, d_low, d_high, test);

        Eigen::VectorXd pred;
        if (n_high < 2) {
            pred = fit_gp(data.low, config.fit).predict(test);
        } else if (n_low < 2) {
            pred = fit_gp(data.high, config.fit).predict(test);
        } else {
            const auto model = fit_cokriging(data.low, data.high, spec.rho, config.fit);
            pred = predict(model, test);
        }
        scores[rep] = rrms(pred, data.truth.values);
    };
    parallel_for(config.replications, resolve_threads(config.threads), one_rep);

    const auto ms = mean_std(scores);
    res.rrms_mean = ms.mean;
    res.rrms_std = ms.std;
    return res;
}

std::vector<RunResult> run_share_sweep(const SyntheticSpec& spec, const ExperimentConfig& config) {
    config.validate();
    if (config.share_grid.empty())
        throw std::invalid_argument("run_share_sweep: share_grid must not be empty");
    std::vector<RunResult> out;
    out.reserve(config.share_grid.size());
    for (std::size_t i = 0; i < config.share_grid.size(); ++i)
        out.push_back(run_share(spec, config, config.share_grid[i], static_cast<int>(i)));
    return out;
}

double estimate_correlation(const FidelityDataset& low, const FidelityDataset& high) {
    low.validate();
    high.validate();
    if (low.dim() != high.dim())
        throw std::invalid_argument("estimate_correlation: dimension mismatch");
    std::vector<double> f, u;
    for (long i = 0; i < high.n(); ++i) {
        const long j = find_row(low.points, high.points, i);
        if (j >= 0) {
            f.push_back(low.values[j]);
            u.push_back(high.values[i]);
        }
    }
    if (f.size() < 3)
        throw std::invalid_argument("estimate_correlation: fewer than three shared points");
    const long n = static_cast<long>(f.size());
    const double mf = std::accumulate(f.begin(), f.end(), 0.0) / n;
    const double mu = std::accumulate(u.begin(), u.end(), 0.0) / n;
    double sf = 0.0, su = 0.0, cross = 0.0;
    for (long i = 0; i < n; ++i) {
        sf += (f[i] - mf) * (f[i] - mf);
        su += (u[i] - mu) * (u[i] - mu);
        cross += (f[i] - mf) * (u[i] - mu);
    }
    if (sf == 0.0 || su == 0.0)
        throw std::invalid_argument("estimate_correlation: constant values at shared points");
    const double r = cross / std::sqrt(sf * su);
    const double mag = std::clamp(std::abs(r), 1e-6, 1.0 - 1e-6);
    return std::copysign(mag, r);
}

FidelityDataset StandardizeRecord::invert(const FidelityDataset& standardized) const {
    FidelityDataset out = standardized;
    for (long c = 0; c < out.points.cols(); ++c)
        out.points.col(c) = (standardized.points.col(c).array() * x_scale[c] + x_mean[c]).matrix();
    out.values = (standardized.values.array() * y_scale + y_mean).matrix();
    return out;
}

std::pair<FidelityDataset, StandardizeRecord> standardize(const FidelityDataset& data) {
    data.validate();
    if (data.n() < 2) throw std::invalid_argument("standardize: need at least two rows");
    const long n = data.n();
    const int d = data.dim();
    StandardizeRecord rec;
    rec.x_mean.resize(d);
    rec.x_scale.resize(d);
    rec.x_flagged.assign(d, false);

    FidelityDataset out = data;
    for (int c = 0; c < d; ++c) {
        const double mean = data.points.col(c).mean();
        const double ss = (data.points.col(c).array() - mean).square().sum();
        double scale = std::sqrt(ss / (n - 1));
        if (!(scale > 0.0)) {
            scale = 1.0;
            rec.x_flagged[c] = true;
            rec.x_mean[c] = 0.0;  // constant columns pass through unchanged
            rec.x_scale[c] = 1.0;
            continue;
        }
        rec.x_mean[c] = mean;
        rec.x_scale[c] = scale;
        out.points.col(c) = ((data.points.col(c).array() - mean) / scale).matrix();
    }
    const double ymean = data.values.mean();
    const double yss = (data.values.array() - ymean).square().sum();
    double yscale = std::sqrt(yss / (n - 1));
    if (!(yscale > 0.0)) {
        rec.y_flagged = true;
        rec.y_mean = 0.0;
        rec.y_scale = 1.0;
    } else {
        rec.y_mean = ymean;
        rec.y_scale = yscale;
        out.values = ((data.values.array() - ymean) / yscale).matrix();
    }
    return {std::move(out), std::move(rec)};
}

namespace {

struct SharedStandardized {
    FidelityDataset low, high;
};

// inputs standardized jointly over both designs (they share one space),
// responses per fidelity
SharedStandardized standardize_shared(const FidelityDataset& low, const FidelityDataset& high) {
    const long n = low.n() + high.n();
    const int d = low.dim();
    SharedStandardized out{low, high};
    for (int c = 0; c < d; ++c) {
        double mean = (low.points.col(c).sum() + high.points.col(c).sum()) / n;
        double ss = (low.points.col(c).array() - mean).square().sum() +
                    (high.points.col(c).array() - mean).square().sum();
        double scale = std::sqrt(ss / (n - 1));
        if (!(scale > 0.0)) continue;
        out.low.points.col(c) = ((low.points.col(c).array() - mean) / scale).matrix();
        out.high.points.col(c) = ((high.points.col(c).array() - mean) / scale).matrix();
    }
    for (FidelityDataset* ds : {&out.low, &out.high}) {
        const double mean = ds->values.mean();
        const double ss = (ds->values.array() - mean).square().sum();
        const double scale = std::sqrt(ss / std::max<long>(1, ds->n() - 1));
        if (scale > 0.0) ds->values = ((ds->values.array() - mean) / scale).matrix();
    }
    return out;
}

FidelityDataset take_rows(const FidelityDataset& src, const std::vector<long>& rows) {
    FidelityDataset out;
    out.fidelity = src.fidelity;
    out.points.resize(static_cast<long>(rows.size()), src.points.cols());
    out.values.resize(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.points.row(static_cast<long>(i)) = src.points.row(rows[i]);
        out.values[static_cast<long>(i)] = src.values[rows[i]];
    }
    return out;
}

}  // namespace

std::vector<RunResult> run_baseline_comparison(const FidelityDataset& low,
                                               const FidelityDataset& high,
                                               const ExperimentConfig& config,
                                               std::optional<double> r_est) {
    low.validate();
    high.validate();
    config.validate();
    if (low.dim() != high.dim())
        throw std::invalid_argument("run_baseline_comparison: dimension mismatch");

    const auto std_data = standardize_shared(low, high);
    const double r_signed = r_est.has_value() ? *r_est
                                              : estimate_correlation(std_data.low, std_data.high);
    const double r = std::clamp(std::abs(r_signed), 1e-6, 1.0 - 1e-6);
    const double rho_from_r = std::copysign(std::sqrt(rho_squared_from_corr(r)), r_signed);

    const BudgetSpec budget{config.budget, config.cost_high};
    const std::vector<BaselineKind> kinds = {BaselineKind::High, BaselineKind::EqualSize,
                                             BaselineKind::EqualBudget, BaselineKind::MinMinimax,
                                             BaselineKind::Low};

    std::vector<RunResult> rows;
    for (std::size_t mi = 0; mi < kinds.size(); ++mi) {
        const BaselineKind kind = kinds[mi];
        const AllocationPlan p = kind == BaselineKind::MinMinimax
                                     ? plan(r, budget, low.dim(), config.min_high)
                                     : baseline_plan(kind, budget);
        RunResult row;
        row.method = to_string(kind);
        row.n_high = p.n_high;
        row.n_low = p.n_low;
        row.share = static_cast<double>(p.n_low) / config.budget;
        row.replications = config.replications;

        std::vector<double> scores;
        bool infeasible = p.n_high < 2 && p.n_low < 2;  // nothing to fit a model on
        // the seed stream keys on the plan sizes, so techniques that select
        // identical samples (all-low MinMinimax vs Low) produce identical rows
        const std::uint64_t size_key =
            (static_cast<std::uint64_t>(p.n_high) << 32) ^ static_cast<std::uint64_t>(p.n_low);
        for (int rep = 0; rep < config.replications && !infeasible; ++rep) {
            const std::uint64_t rep_seed =
                derive_seed(config.master_seed, static_cast<std::uint64_t>(rep), size_key);
            std::vector<long> high_order(std_data.high.n());
            std::iota(high_order.begin(), high_order.end(), 0L);
            Rng shuffle_rng(derive_seed(rep_seed, 21, 0));
            shuffle_rng.partial_shuffle(high_order, high_order.size());

            for (int fold = 0; fold < config.folds && !infeasible; ++fold) {
                std::vector<long> test_rows, train_high_rows;
                for (std::size_t i = 0; i < high_order.size(); ++i) {
                    if (static_cast<int>(i % config.folds) == fold)
                        test_rows.push_back(high_order[i]);
                    else
                        train_high_rows.push_back(high_order[i]);
                }
                if (test_rows.size() < 2) continue;

                // low rows matching held-out points are excluded from training
                std::vector<long> train_low_rows;
                const FidelityDataset test_set = take_rows(std_data.high, test_rows);
                for (long j = 0; j < std_data.low.n(); ++j) {
                    if (find_row(test_set.points, std_data.low.points, j) < 0)
                        train_low_rows.push_back(j);
                }

                if (p.n_high > static_cast<long>(train_high_rows.size()) ||
                    p.n_low > static_cast<long>(train_low_rows.size())) {
                    infeasible = true;
                    break;
                }

                Rng sub_rng(derive_seed(rep_seed, 22, static_cast<std::uint64_t>(fold)));
                sub_rng.partial_shuffle(train_high_rows, static_cast<std::size_t>(p.n_high));
                std::vector<long> chosen_high(train_high_rows.begin(),
                                              train_high_rows.begin() + p.n_high);
                const FidelityDataset high_fit = take_rows(std_data.high, chosen_high);

                // preserve nesting: matching low rows come first, the rest fill up
                std::vector<long> matched, rest;
                for (long j : train_low_rows) {
                    if (find_row(high_fit.points, std_data.low.points, j) >= 0)
                        matched.push_back(j);
                    else
                        rest.push_back(j);
                }
                Rng fill_rng(derive_seed(rep_seed, 23, static_cast<std::uint64_t>(fold)));
                fill_rng.partial_shuffle(rest, rest.size());
                std::vector<long> chosen_low;
                for (long j : matched)
                    if (static_cast<long>(chosen_low.size()) < p.n_low) chosen_low.push_back(j);
                for (long j : rest)
                    if (static_cast<long>(chosen_low.size()) < p.n_low) chosen_low.push_back(j);
                const FidelityDataset low_fit = take_rows(std_data.low, chosen_low);

                Eigen::VectorXd pred;
                if (p.n_high < 2) {
                    pred = fit_gp(low_fit, config.fit).predict(test_set.points);
                } else if (p.n_low < 2) {
                    pred = fit_gp(high_fit, config.fit).predict(test_set.points);
                } else {
                    // nested subsample with enough low points: estimate rho;
                    // otherwise fall back to the correlation-implied value
                    bool nested = p.n_low >= p.n_high;
                    for (long i = 0; i < high_fit.n() && nested; ++i)
                        nested = find_row(low_fit.points, high_fit.points, i) >= 0;
                    const auto model =
                        nested ? fit_cokriging(low_fit, high_fit, std::nullopt, config.fit)
                               : fit_cokriging(low_fit, high_fit, rho_from_r, config.fit);
                    pred = predict(model, test_set.points);
                }
                scores.push_back(rrms(pred, test_set.values));
            }
        }

        if (infeasible || scores.empty()) {
            row.flag = "infeasible";
            row.rrms_mean = std::numeric_limits<double>::quiet_NaN();
            row.rrms_std = std::numeric_limits<double>::quiet_NaN();
        } else {
            const auto ms = mean_std(scores);
            row.rrms_mean = ms.mean;
            row.rrms_std = ms.std;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace vfplan
