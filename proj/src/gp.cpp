#include "vfplan/gp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "vfplan/errors.hpp"
#include "vfplan/rng.hpp"

namespace vfplan {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935274463415058724;
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

double matern32_corr(double d) { return (1.0 + kSqrt3 * d) * std::exp(-kSqrt3 * d); }

// correlation matrix from precomputed per-axis squared differences
Eigen::MatrixXd corr_from_sqdiff(const std::vector<Eigen::MatrixXd>& sq,
                                 const Eigen::VectorXd& theta) {
    const long n = sq.empty() ? 0 : sq[0].rows();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < theta.size(); ++i) c += theta[i] * sq[i];
    for (long r = 0; r < n; ++r)
        for (long col = 0; col < n; ++col) c(r, col) = matern32_corr(std::sqrt(c(r, col)));
    return c;
}

struct Concentrated {
    double nll = std::numeric_limits<double>::infinity();
    double mu = 0.0;
    double variance = 0.0;
    double nugget = 0.0;
    bool ok = false;
};

// profiled negative log-likelihood of the correlation model; mean and
// variance are concentrated out analytically
Concentrated concentrated_nll(const Eigen::MatrixXd& corr, const Eigen::VectorXd& y,
                              double nugget_init, double nugget_max) {
    const long n = y.size();
    Concentrated out;
    double nugget = nugget_init;
    Eigen::LLT<Eigen::MatrixXd> llt;
    while (true) {
        Eigen::MatrixXd c = corr;
        c.diagonal().array() += nugget;
        llt.compute(c);
        if (llt.info() == Eigen::Success) break;
        nugget *= 10.0;
        if (nugget > nugget_max) return out;
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd ci_y = llt.solve(y);
    const Eigen::VectorXd ci_1 = llt.solve(ones);
    const double denom = ones.dot(ci_1);
    const double mu = ones.dot(ci_y) / denom;
    const Eigen::VectorXd r = y - mu * ones;
    double s2 = r.dot(llt.solve(r)) / n;
    const double floor = 1e-15 * std::max(1.0, y.squaredNorm() / n);
    s2 = std::max(s2, floor);

    double logdet = 0.0;
    for (long i = 0; i < n; ++i) logdet += std::log(llt.matrixLLT()(i, i));

    out.nll = 0.5 * n * (std::log(s2) + 1.0 + kLog2Pi) + logdet;
    out.mu = mu;
    out.variance = s2;
    out.nugget = nugget;
    out.ok = true;
    return out;
}

// Nelder-Mead on R^k with a fixed evaluation budget
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x0, double step, int max_evals) {
    const int k = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> xs(k + 1, x0);
    std::vector<double> fs(k + 1);
    int evals = 0;
    for (int i = 1; i <= k; ++i) xs[i](i - 1) += step;
    for (int i = 0; i <= k; ++i) {
        fs[i] = f(xs[i]);
        ++evals;
    }
    const auto order = [&]() {
        std::vector<int> idx(k + 1);
        for (int i = 0; i <= k; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Eigen::VectorXd> nx(k + 1);
        std::vector<double> nf(k + 1);
        for (int i = 0; i <= k; ++i) {
            nx[i] = xs[idx[i]];
            nf[i] = fs[idx[i]];
        }
        xs = std::move(nx);
        fs = std::move(nf);
    };
    order();
    while (evals < max_evals) {
        if (std::abs(fs[k] - fs[0]) <= 1e-9 * (1.0 + std::abs(fs[0]))) break;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
        for (int i = 0; i < k; ++i) centroid += xs[i];
        centroid /= k;
        const Eigen::VectorXd xr = centroid + (centroid - xs[k]);
        const double fr = f(xr);
        ++evals;
        if (fr < fs[0]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[k]);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                xs[k] = xe;
                fs[k] = fe;
            } else {
                xs[k] = xr;
                fs[k] = fr;
            }
        } else if (fr < fs[k - 1]) {
            xs[k] = xr;
            fs[k] = fr;
        } else {
            const Eigen::VectorXd xc = centroid + 0.5 * (xs[k] - centroid);
            const double fc = f(xc);
            ++evals;
            if (fc < fs[k]) {
                xs[k] = xc;
                fs[k] = fc;
            } else {
                for (int i = 1; i <= k; ++i) {
                    xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
                    fs[i] = f(xs[i]);
                    ++evals;
                }
            }
        }
        order();
    }
    return xs[0];
}

}  // namespace

void FidelityDataset::validate() const {
    if (n() < 1) throw std::invalid_argument("FidelityDataset: need at least one point");
    if (values.size() != n())
        throw std::invalid_argument("FidelityDataset: points/values size mismatch");
    if (!points.allFinite() || !values.allFinite())
        throw std::invalid_argument("FidelityDataset: non-finite entries");
    for (long i = 0; i < n(); ++i)
        for (long j = i + 1; j < n(); ++j) {
            bool dup = true;
            for (int c = 0; c < dim(); ++c)
                if (std::abs(points(i, c) - points(j, c)) > 1e-12) {
                    dup = false;
                    break;
                }
            if (dup) throw std::invalid_argument("FidelityDataset: duplicate design points");
        }
}

void MaternParams::validate() const {
    if (theta.size() < 1) throw std::invalid_argument("MaternParams: empty theta");
    for (long i = 0; i < theta.size(); ++i)
        if (!(theta[i] > 0.0)) throw std::invalid_argument("MaternParams: theta must be positive");
    if (!(variance > 0.0)) throw std::invalid_argument("MaternParams: variance must be positive");
    if (nugget < 0.0) throw std::invalid_argument("MaternParams: nugget must be >= 0");
}

double matern32(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const MaternParams& params) {
    if (x.size() != y.size() || x.size() != params.theta.size())
        throw std::invalid_argument("matern32: dimension mismatch");
    double d2 = 0.0;
    for (long i = 0; i < x.size(); ++i) {
        const double dx = x[i] - y[i];
        d2 += params.theta[i] * dx * dx;
    }
    return params.variance * matern32_corr(std::sqrt(d2));
}

Eigen::MatrixXd matern_gram(const Eigen::MatrixXd& points, const MaternParams& params) {
    const long n = points.rows();
    Eigen::MatrixXd g(n, n);
    for (long i = 0; i < n; ++i) {
        g(i, i) = params.variance;
        for (long j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (long c = 0; c < points.cols(); ++c) {
                const double dx = points(i, c) - points(j, c);
                d2 += params.theta[c] * dx * dx;
            }
            g(i, j) = g(j, i) = params.variance * matern32_corr(std::sqrt(d2));
        }
    }
    return g;
}

CholeskyResult cholesky_with_escalation(const Eigen::MatrixXd& gram, double variance,
                                        double nugget_init, double nugget_max) {
    double nugget = nugget_init;
    Eigen::LLT<Eigen::MatrixXd> llt;
    while (true) {
        Eigen::MatrixXd g = gram;
        g.diagonal().array() += variance * nugget;
        llt.compute(g);
        if (llt.info() == Eigen::Success)
            return {Eigen::MatrixXd(llt.matrixL()), nugget};
        nugget *= 10.0;
        if (nugget > nugget_max)
            throw ConditioningError("Gram matrix not factorisable within the nugget ladder");
    }
}

Eigen::VectorXd GPModel::predict(const Eigen::MatrixXd& query) const {
    if (query.cols() != train_points_.cols())
        throw std::invalid_argument("predict: query dimension mismatch");
    const long m = query.rows();
    const long n = train_points_.rows();
    Eigen::VectorXd out(m);
    Eigen::VectorXd k(n);
    for (long q = 0; q < m; ++q) {
        for (long i = 0; i < n; ++i) {
            double d2 = 0.0;
            for (long c = 0; c < query.cols(); ++c) {
                const double dx = query(q, c) - train_points_(i, c);
                d2 += params_.theta[c] * dx * dx;
            }
            k[i] = params_.variance * matern32_corr(std::sqrt(d2));
        }
        out[q] = k.dot(weights_) + mean_offset_;
    }
    return out;
}

GPModel fit_gp(const FidelityDataset& data, const GpFitOptions& opts) {
    data.validate();
    if (data.n() < 2) throw std::invalid_argument("fit_gp: need at least two points");
    const long n = data.n();
    const int d = data.dim();

    std::vector<Eigen::MatrixXd> sq(d);
    for (int c = 0; c < d; ++c) {
        sq[c].resize(n, n);
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                const double dx = data.points(i, c) - data.points(j, c);
                sq[c](i, j) = dx * dx;
            }
    }

    const double lo = std::log(opts.theta_min);
    const double hi = std::log(opts.theta_max);
    const auto objective = [&](const Eigen::VectorXd& t) {
        double penalty = 0.0;
        Eigen::VectorXd theta(d);
        for (int i = 0; i < d; ++i) {
            const double c = std::clamp(t[i], lo, hi);
            penalty += 1e3 * (t[i] - c) * (t[i] - c);
            theta[i] = std::exp(c);
        }
        const auto r = concentrated_nll(corr_from_sqdiff(sq, theta), data.values,
                                        opts.nugget_init, opts.nugget_max);
        if (!r.ok) return 1e100;
        return r.nll + penalty;
    };

    Rng rng(opts.seed);
    Eigen::VectorXd best_t;
    double best_val = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.n_starts; ++s) {
        Eigen::VectorXd t0(d);
        for (int i = 0; i < d; ++i) t0[i] = rng.uniform(lo, hi);
        const Eigen::VectorXd t = nelder_mead(objective, t0, 0.7, opts.max_evals);
        const double v = objective(t);
        if (v < best_val) {
            best_val = v;
            best_t = t;
        }
    }

    Eigen::VectorXd theta(d);
    for (int i = 0; i < d; ++i) theta[i] = std::exp(std::clamp(best_t[i], lo, hi));
    const auto fit = concentrated_nll(corr_from_sqdiff(sq, theta), data.values, opts.nugget_init,
                                      opts.nugget_max);
    if (!fit.ok) throw ConditioningError("fit_gp: Gram matrix not factorisable at the optimum");

    MaternParams params;
    params.theta = theta;
    params.variance = std::max(fit.variance, 1e-300);
    params.nugget = fit.nugget;

    Eigen::MatrixXd corr = corr_from_sqdiff(sq, theta);
    Eigen::MatrixXd corr_nug = corr;
    corr_nug.diagonal().array() += fit.nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(corr_nug);
    const Eigen::VectorXd resid = data.values - fit.mu * Eigen::VectorXd::Ones(n);

    // The nugget is a factorisation aid, not noise: refine the weights
    // toward the unregularised interpolation system so training values are
    // reproduced. Refinement stops as soon as it no longer helps (it cannot
    // when the nugget is genuinely load-bearing).
    Eigen::VectorXd alpha = llt.solve(resid);
    double best_res = (resid - corr * alpha).lpNorm<Eigen::Infinity>();
    for (int it = 0; it < 4; ++it) {
        const Eigen::VectorXd r = resid - corr * alpha;
        const Eigen::VectorXd cand = alpha + llt.solve(r);
        const double res = (resid - corr * cand).lpNorm<Eigen::Infinity>();
        if (res >= best_res) break;
        alpha = cand;
        best_res = res;
    }

    return GPModel(params, data.points, std::sqrt(params.variance) * Eigen::MatrixXd(llt.matrixL()),
                   alpha / params.variance, fit.mu);
}

Eigen::VectorXd predict(const GPModel& model, const Eigen::MatrixXd& query) {
    return model.predict(query);
}

CoKrigingModel fit_cokriging(const FidelityDataset& low, const FidelityDataset& high,
                             std::optional<double> rho, const GpFitOptions& opts) {
    low.validate();
    high.validate();
    if (low.dim() != high.dim()) throw std::invalid_argument("fit_cokriging: dimension mismatch");
    if (low.n() < 2 || high.n() < 2)
        throw std::invalid_argument("fit_cokriging: both samples need at least two points");

    if (!rho.has_value()) {
        // estimating rho leans on the nested-design structure
        for (long i = 0; i < high.n(); ++i) {
            bool found = false;
            for (long j = 0; j < low.n() && !found; ++j) {
                bool same = true;
                for (int c = 0; c < low.dim(); ++c)
                    if (std::abs(high.points(i, c) - low.points(j, c)) > 1e-12) {
                        same = false;
                        break;
                    }
                found = same;
            }
            if (!found)
                throw std::invalid_argument(
                    "fit_cokriging: high design not nested in the low design; supply rho");
        }
    }

    GPModel low_model = fit_gp(low, opts);
    const Eigen::VectorXd fhat = low_model.predict(high.points);

    double rho_hat;
    if (rho.has_value()) {
        rho_hat = *rho;
    } else {
        const double denom = fhat.squaredNorm();
        rho_hat = denom > 1e-300 ? fhat.dot(high.values) / denom : 0.0;
    }

    FidelityDataset resid;
    resid.points = high.points;
    resid.values = high.values - rho_hat * fhat;
    resid.fidelity = Fidelity::High;
    GPModel delta_model = fit_gp(resid, opts);

    return {rho_hat, std::move(low_model), std::move(delta_model)};
}

Eigen::VectorXd predict(const CoKrigingModel& model, const Eigen::MatrixXd& query) {
    return model.rho_hat * model.low_model.predict(query) + model.delta_model.predict(query);
}

double rrms(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    if (pred.size() != truth.size() || truth.size() < 2)
        throw std::invalid_argument("rrms: need equal lengths of at least two");
    const double mean = truth.mean();
    const double denom = (truth.array() - mean).matrix().squaredNorm();
    if (denom == 0.0) throw std::domain_error("rrms: constant truth");
    return std::sqrt((pred - truth).squaredNorm() / denom);
}

}  // namespace vfplan
