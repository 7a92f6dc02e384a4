// Copyright 2026 The RQSVR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Linear epsilon-support vector regression in an explicit feature space.
 *
 * The dual is solved by SMO: each step picks the index with the largest KKT
 * violation and pairs it with the partner giving the largest second-order
 * decrease, then solves the two-variable subproblem in closed form.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rqsvr::svr {

/// Rows of explicit features with their regression targets.
struct FeatureDataset {
    Eigen::MatrixXd X; ///< one row per sample
    Eigen::VectorXd y;

    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(y.size());
    }
    /// Rows selected by @p rows, in that order.
    [[nodiscard]] FeatureDataset subset(const std::vector<std::size_t> &rows) const;
};

struct SvrHyperparams {
    double C = 1.0;
    double epsilon = 0.1;
};

inline constexpr double kDefaultTolerance = 1e-3;

struct SvrFit {
    Eigen::VectorXd w;
    double b = 0.0;
    /// alpha_i - alpha*_i, each within [-C, C].
    Eigen::VectorXd dual_coef;
    /// Dual objective 1/2 beta^T K beta + eps |beta|_1 - y^T beta (minimized).
    double objective = 0.0;
    std::size_t iterations = 0;
    /// Final maximal KKT violation.
    double kkt_violation = 0.0;
};

/// Throws ArgumentError for shape problems and ValidationError for
/// non-finite entries or invalid hyperparameters.
[[nodiscard]] SvrFit fit_epsilon_svr(const Eigen::MatrixXd &X, const Eigen::VectorXd &y,
                                     const SvrHyperparams &hp,
                                     double tol = kDefaultTolerance);

[[nodiscard]] double predict_classical(const SvrFit &fit, const Eigen::VectorXd &phi);

/// Mean of squared residuals, no degrees-of-freedom correction.
[[nodiscard]] double mean_squared_error(const Eigen::VectorXd &predicted,
                                        const Eigen::VectorXd &actual);

/// Primal objective 1/2 |w|^2 + C sum max(0, |y - w^T x - b| - eps).
[[nodiscard]] double primal_objective(const SvrFit &fit, const Eigen::MatrixXd &X,
                                      const Eigen::VectorXd &y,
                                      const SvrHyperparams &hp);

/// C = 10^k for k = -3, ..., 2.
[[nodiscard]] std::vector<double> default_c_grid();

struct CvEntry {
    double C = 0.0;
    std::vector<double> fold_mse;
    double mean_mse = 0.0;
    std::uint64_t fold_hash = 0; ///< hash of the assignment used for this C
};

struct CvReport {
    std::vector<CvEntry> entries;
    std::size_t best_index = 0;
    double best_C = 0.0;
    std::size_t k = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> folds;
};

/**
 * k-fold cross-validation over a grid of C. The folds are drawn once and
 * reused for every C; the best C minimizes the mean fold MSE (first wins on
 * ties).
 */
[[nodiscard]] CvReport grid_search_cv(const FeatureDataset &data,
                                      const std::vector<double> &c_grid, std::size_t k,
                                      double epsilon, std::uint64_t seed,
                                      double tol = kDefaultTolerance);

} // namespace rqsvr::svr
