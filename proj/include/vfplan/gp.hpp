#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

namespace vfplan {

enum class Fidelity { High, Low };

/// Design points with responses from one fidelity source.
struct FidelityDataset {
    Eigen::MatrixXd points;  // n x d
    Eigen::VectorXd values;  // n
    Fidelity fidelity = Fidelity::High;

    long n() const { return points.rows(); }
    int dim() const { return static_cast<int>(points.cols()); }
    /// n >= 1, finite values, no duplicate rows (1e-12 per coordinate).
    void validate() const;
};

/// Anisotropic Matern covariance with smoothness 3/2:
/// k(x, x') = variance (1 + sqrt(3) d) exp(-sqrt(3) d),
/// d = sqrt(sum_i theta_i (x_i - x'_i)^2).
struct MaternParams {
    Eigen::VectorXd theta;  // per-axis inverse squared length scales, > 0
    double variance = 1.0;
    double nugget = 0.0;

    void validate() const;
};

double matern32(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const MaternParams& params);

struct GpFitOptions {
    int n_starts = 8;            // log-uniform multi-start draws per fit
    double theta_min = 1e-2;
    double theta_max = 1e3;
    int max_evals = 120;         // likelihood evaluations per local search
    double nugget_init = 1e-10;
    double nugget_max = 1e-4;
    std::uint64_t seed = 0x5EEDCAFEuLL;  // fixed: fits are reproducible
};

/// Fitted noiseless kriging model; immutable after construction.
/// With nugget <= 1e-8 it reproduces its training values to 1e-8.
class GPModel {
public:
    GPModel(MaternParams params, Eigen::MatrixXd train_points, Eigen::MatrixXd gram_factor,
            Eigen::VectorXd weights, double mean_offset)
        : params_(std::move(params)),
          train_points_(std::move(train_points)),
          factor_(std::move(gram_factor)),
          weights_(std::move(weights)),
          mean_offset_(mean_offset) {}

    const MaternParams& params() const { return params_; }
    const Eigen::MatrixXd& train_points() const { return train_points_; }
    /// Lower-triangular Cholesky factor of the nugget-regularised Gram matrix.
    const Eigen::MatrixXd& factor() const { return factor_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double mean_offset() const { return mean_offset_; }

    Eigen::VectorXd predict(const Eigen::MatrixXd& query) const;

private:
    MaternParams params_;
    Eigen::MatrixXd train_points_;
    Eigen::MatrixXd factor_;
    Eigen::VectorXd weights_;
    double mean_offset_;
};

/// Maximum-likelihood fit: anisotropic theta by multi-start Nelder-Mead on
/// the concentrated log-likelihood (mean and variance profiled out), theta
/// boxed to [theta_min, theta_max]. Throws on n < 2; ConditioningError when
/// the Gram matrix cannot be factorised within the nugget escalation ladder.
GPModel fit_gp(const FidelityDataset& data, const GpFitOptions& opts = {});

Eigen::VectorXd predict(const GPModel& model, const Eigen::MatrixXd& query);

/// Two-fidelity model u(x) = rho f(x) + g(x): a low-fidelity surrogate plus
/// an independent correction fitted on the high-fidelity residuals.
struct CoKrigingModel {
    double rho_hat = 0.0;
    GPModel low_model;
    GPModel delta_model;
};

/// Fits the low-fidelity surrogate, resolves rho (supplied, or the ordinary
/// least-squares slope of high values on low predictions at the high
/// points), and fits the correction on the residuals. Estimating rho
/// requires the high design to be nested in the low design (coordinates
/// matched to 1e-12).
CoKrigingModel fit_cokriging(const FidelityDataset& low, const FidelityDataset& high,
                             std::optional<double> rho = std::nullopt,
                             const GpFitOptions& opts = {});

Eigen::VectorXd predict(const CoKrigingModel& model, const Eigen::MatrixXd& query);

/// Relative root mean squared error
/// sqrt(sum (pred - truth)^2 / sum (truth - mean(truth))^2); invariant under
/// a joint affine rescaling of both arguments. Throws on constant truth.
double rrms(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

/// Gram matrix of the Matern covariance over a point set (no nugget).
Eigen::MatrixXd matern_gram(const Eigen::MatrixXd& points, const MaternParams& params);

struct CholeskyResult {
    Eigen::MatrixXd L;
    double nugget_used = 0.0;
};

/// Cholesky factorisation of gram + variance * nugget * I with the nugget
/// escalated tenfold from nugget_init until the factorisation succeeds.
/// Throws ConditioningError past nugget_max.
CholeskyResult cholesky_with_escalation(const Eigen::MatrixXd& gram, double variance,
                                        double nugget_init, double nugget_max);

}  // namespace vfplan
