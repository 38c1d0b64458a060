#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vfplan/allocation.hpp"
#include "vfplan/gp.hpp"
#include "vfplan/rng.hpp"

namespace vfplan {

/// Generator description for synthetic two-fidelity data on [0,1]^d:
/// u(x) = rho f(x) + g(x) with independent Matern-3/2 processes f, g.
/// The seed fully determines every draw derived from this spec.
struct SyntheticSpec {
    int d = 1;
    Eigen::VectorXd theta_f;
    Eigen::VectorXd theta_g;
    double rho = 1.0;
    std::uint64_t seed = 0;
    double var_f = 1.0;
    double var_g = 1.0;

    void validate() const;
};

struct ExperimentConfig {
    double budget = 300.0;
    double cost_high = 5.0;
    int replications = 20;
    std::vector<double> share_grid;  // fractions of the budget spent on low fidelity
    int test_size = 200;
    int folds = 5;
    long min_high = 5;
    GpFitOptions fit;
    int threads = 0;                 // 0: hardware count, capped by FIDELITY_PLANNER_THREADS
    std::uint64_t master_seed = 0;   // drives the cross-validation paths

    void validate() const;
};

struct RunResult {
    double share = 0.0;
    std::string method;
    double rrms_mean = 0.0;
    double rrms_std = 0.0;
    long n_high = 0;
    long n_low = 0;
    int replications = 0;
    std::string flag = "ok";  // "ok", "skipped", "infeasible"
};

/// n_low i.i.d. uniform points on [0,1]^d plus a uniformly random
/// n_high-subset of them; bit-reproducible under the seed.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_nested_design(long n_low, long n_high, int d,
                                                                   std::uint64_t seed);

/// One zero-mean draw of the Matern process at the given points (Gram
/// Cholesky times standard normals from the seeded stream).
Eigen::VectorXd sample_gp_realization(const Eigen::MatrixXd& points, const MaternParams& params,
                                      std::uint64_t seed);

struct SyntheticData {
    FidelityDataset low;    // f at the low design
    FidelityDataset high;   // u at the high design
    FidelityDataset truth;  // u at the test points
};

/// Joint draw of the model: one f realization over all design and test
/// points and an independent g over the high and test points, so
/// u = rho f + g holds exactly everywhere it is defined. The high design
/// may extend beyond the low design (the joint f draw covers the union);
/// test points must not collide with design points.
SyntheticData synth_variable_fidelity(const SyntheticSpec& spec, const Eigen::MatrixXd& d_low,
                                      const Eigen::MatrixXd& d_high,
                                      const Eigen::MatrixXd& test_points);

/// One share of the sweep: n_low = floor(share * budget) low points,
/// n_high = floor((1 - share) * budget / c) high points, fitted per
/// replication (cokriging inside, single-fidelity at the endpoints) and
/// scored by RRMS on fresh test points. Exposed so endpoint identities can
/// be checked directly.
RunResult run_share(const SyntheticSpec& spec, const ExperimentConfig& config, double share,
                    int share_index);

/// Full sweep over config.share_grid; replications run in parallel but the
/// aggregation order is fixed, so results are schedule-independent.
std::vector<RunResult> run_share_sweep(const SyntheticSpec& spec, const ExperimentConfig& config);

/// Pearson correlation of (f, u) pairs at shared design points (coordinates
/// matched to 1e-12), magnitude clamped into (1e-6, 1 - 1e-6), sign kept.
/// Throws when fewer than three shared points exist.
double estimate_correlation(const FidelityDataset& low, const FidelityDataset& high);

struct StandardizeRecord {
    Eigen::VectorXd x_mean, x_scale;
    double y_mean = 0.0, y_scale = 1.0;
    std::vector<bool> x_flagged;  // constant columns passed through unscaled
    bool y_flagged = false;

    FidelityDataset invert(const FidelityDataset& standardized) const;
};

/// Column-wise shift to zero mean and unit (sample) variance; constant
/// columns pass through with unit scale and are flagged.
std::pair<FidelityDataset, StandardizeRecord> standardize(const FidelityDataset& data);

/// Cross-validated comparison of the allocation techniques on user data:
/// standardizes (inputs jointly, responses per fidelity), estimates r from
/// shared points unless supplied, realizes every plan by seeded subsampling
/// of the training folds, and scores RRMS on the held-out high-fidelity
/// folds. One row per technique; infeasible plans are flagged.
std::vector<RunResult> run_baseline_comparison(const FidelityDataset& low,
                                               const FidelityDataset& high,
                                               const ExperimentConfig& config,
                                               std::optional<double> r_est = std::nullopt);

}  // namespace vfplan
