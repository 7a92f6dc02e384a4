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
 * Cosine feature map for two-dimensional inputs (spindle speed, tool wear)
 * and the restart-based least-squares fit of its parameters.
 *
 * On min-max normalized inputs (a, b) the map is
 *
 *     phi(a, b) = [a, b, a^2, ab, b^2, w, a w, b w, a^2 w, ab w, b^2 w]
 *     w         = cos(alpha_1 + alpha_2 a + alpha_3 b
 *                     + alpha_4 a^2 + alpha_5 ab + alpha_6 b^2)
 *
 * and the fitted model is f = beta^T phi + c.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rqsvr/lbfgs.hpp"
#include "rqsvr/svr.hpp"

namespace rqsvr::features {

inline constexpr std::size_t kNumAlpha = 6;
inline constexpr std::size_t kNumFeatures = 11;
/// alpha, beta and the intercept c, packed in that order.
inline constexpr std::size_t kNumParams = kNumAlpha + kNumFeatures + 1;

using Point = std::array<double, 2>;
using Alpha = std::array<double, kNumAlpha>;
using Beta = std::array<double, kNumFeatures>;
using FeatureVector = std::array<double, kNumFeatures>;

/// Reference alpha vectors reported for the two milling centers.
inline constexpr Alpha kReferenceAlphaA{15.52749483, -4.46971848, -9.55499409,
                                        -14.22448621, -2.38118747, 14.75707122};
inline constexpr Alpha kReferenceAlphaB{-2.87183284, 11.95336368, 0.99781459,
                                        28.58595761, 2.27955561,  -4.34204599};

/// Raw inputs and targets.
struct RegressionSet {
    std::vector<Point> x;
    std::vector<double> y;

    [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
};

struct NormStats {
    Point min{0.0, 0.0};
    Point range{1.0, 1.0};

    [[nodiscard]] Point normalize(const Point &x) const noexcept {
        return {(x[0] - min[0]) / range[0], (x[1] - min[1]) / range[1]};
    }
};

struct FeatureParams {
    Alpha alpha{};
    Beta beta{};
    double c = 0.0;
    NormStats norm;
    double fit_mse = 0.0;
};

/// Per-feature minimum and range. Throws DegenerateInputError for a constant
/// feature and ArgumentError for fewer than two points.
[[nodiscard]] NormStats compute_norm_stats(std::span<const Point> x);
[[nodiscard]] NormStats compute_norm_stats(const RegressionSet &data);

[[nodiscard]] double omega(const Point &xn, const Alpha &alpha) noexcept;

[[nodiscard]] FeatureVector phi_cos(const Point &xn, const Alpha &alpha) noexcept;

/// beta^T phi_cos(normalize(x)) + c.
[[nodiscard]] double evaluate(const FeatureParams &params, const Point &x) noexcept;

[[nodiscard]] double model_mse(const FeatureParams &params, const RegressionSet &data);

/**
 * MSE on already normalized inputs as a function of the packed parameter
 * vector theta = [alpha, beta, c]. Writes d MSE / d theta into @p grad when
 * it is non-empty.
 */
[[nodiscard]] double packed_mse(std::span<const double> theta,
                                std::span<const Point> xn, std::span<const double> y,
                                std::span<double> grad = {});

[[nodiscard]] std::array<double, kNumParams> pack(const FeatureParams &params) noexcept;
void unpack(std::span<const double> theta, FeatureParams &params) noexcept;

/// Closed-form least-squares beta and c for a fixed alpha (minimum-norm
/// solution when the design is rank deficient). Leaves norm untouched.
[[nodiscard]] FeatureParams fit_linear_given_alpha(std::span<const Point> xn,
                                                   std::span<const double> y,
                                                   const Alpha &alpha);

/// MSE of the alpha = 0 model, i.e. degree-2 polynomial least squares.
[[nodiscard]] double polynomial_baseline_mse(const RegressionSet &data);

struct FitOptions {
    std::uint64_t seed = 0;
    /// Consecutive trials without improvement before stopping.
    std::size_t patience = 1000;
    /// Standard deviation of the restart and perturbation draws for alpha.
    double restart_std = 10.0;
    /// Hard cap on trials; 0 means no cap.
    std::size_t max_trials = 0;
    optim::LbfgsOptions lbfgs{};
};

struct FitResult {
    FeatureParams params;
    std::size_t trials = 0;
    /// Best MSE after each trial.
    std::vector<double> best_mse_trace;
    /// Trial at which the returned params were found.
    std::size_t best_trial = 0;
};

/**
 * Random-restart local search over alpha. Trial 0 starts from
 * alpha ~ N(0, restart_std^2 I); trial t > 0 starts from the incumbent start
 * plus N(0, restart_std^2 I). Each start gets closed-form beta and c, then
 * all 18 parameters are refined jointly with L-BFGS. The incumbent start is
 * the one whose refined MSE is lowest so far.
 */
[[nodiscard]] FitResult fit_feature_params(const RegressionSet &data,
                                           const FitOptions &options);

/// Rows phi_cos(normalize(x)) paired with the unmodified targets.
[[nodiscard]] svr::FeatureDataset build_feature_dataset(const RegressionSet &data,
                                                        const FeatureParams &params);

} // namespace rqsvr::features
