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
#include "rqsvr/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rqsvr/error.hpp"
#include "rqsvr/rng.hpp"

namespace rqsvr::features {

namespace {

/// (1, a, b, a^2, ab, b^2)
std::array<double, kNumAlpha> monomials(const Point &xn) noexcept {
    const double a = xn[0];
    const double b = xn[1];
    return {1.0, a, b, a * a, a * b, b * b};
}

std::vector<Point> normalize_all(const RegressionSet &data, const NormStats &norm) {
    std::vector<Point> xn(data.size());
    std::ranges::transform(data.x, xn.begin(),
                           [&](const Point &p) { return norm.normalize(p); });
    return xn;
}

void check_consistent(const RegressionSet &data) {
    if (data.x.size() != data.y.size()) {
        throw ArgumentError("regression set has " + std::to_string(data.x.size()) +
                            " inputs and " + std::to_string(data.y.size()) + " targets");
    }
}

} // namespace

NormStats compute_norm_stats(std::span<const Point> x) {
    if (x.size() < 2) {
        throw ArgumentError("compute_norm_stats: need at least two points");
    }
    NormStats stats;
    for (std::size_t i = 0; i < 2; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto &p : x) {
            if (!std::isfinite(p[i])) {
                throw ValidationError("compute_norm_stats: non-finite input");
            }
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
        }
        if (!(hi > lo)) {
            throw DegenerateInputError("compute_norm_stats: feature " + std::to_string(i) +
                                       " is constant, range would be zero");
        }
        stats.min[i] = lo;
        stats.range[i] = hi - lo;
    }
    return stats;
}

NormStats compute_norm_stats(const RegressionSet &data) {
    check_consistent(data);
    return compute_norm_stats(std::span<const Point>(data.x));
}

double omega(const Point &xn, const Alpha &alpha) noexcept {
    const auto m = monomials(xn);
    double arg = 0.0;
    for (std::size_t k = 0; k < kNumAlpha; ++k) {
        arg += alpha[k] * m[k];
    }
    return std::cos(arg);
}

FeatureVector phi_cos(const Point &xn, const Alpha &alpha) noexcept {
    const auto m = monomials(xn);
    const double w = omega(xn, alpha);
    FeatureVector phi{};
    for (std::size_t k = 0; k < 5; ++k) {
        phi[k] = m[k + 1];
    }
    for (std::size_t k = 0; k < kNumAlpha; ++k) {
        phi[5 + k] = w * m[k];
    }
    return phi;
}

double evaluate(const FeatureParams &params, const Point &x) noexcept {
    const auto phi = phi_cos(params.norm.normalize(x), params.alpha);
    double f = params.c;
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
        f += params.beta[k] * phi[k];
    }
    return f;
}

double model_mse(const FeatureParams &params, const RegressionSet &data) {
    check_consistent(data);
    if (data.size() == 0) {
        throw ArgumentError("model_mse: empty dataset");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = evaluate(params, data.x[i]) - data.y[i];
        acc += r * r;
    }
    return acc / static_cast<double>(data.size());
}

double packed_mse(std::span<const double> theta, std::span<const Point> xn,
                  std::span<const double> y, std::span<double> grad) {
    if (theta.size() != kNumParams || xn.size() != y.size() || xn.empty()) {
        throw ArgumentError("packed_mse: inconsistent sizes");
    }
    const bool want_grad = !grad.empty();
    if (want_grad) {
        if (grad.size() != kNumParams) {
            throw ArgumentError("packed_mse: gradient buffer must have 18 entries");
        }
        std::ranges::fill(grad, 0.0);
    }
    const double *alpha = theta.data();
    const double *beta = theta.data() + kNumAlpha;
    const double c = theta[kNumParams - 1];

    double acc = 0.0;
    for (std::size_t i = 0; i < xn.size(); ++i) {
        const auto m = monomials(xn[i]);
        double arg = 0.0;
        double wave_coef = 0.0; // sum_k beta_{5+k} m_k
        double poly = c;
        for (std::size_t k = 0; k < kNumAlpha; ++k) {
            arg += alpha[k] * m[k];
            wave_coef += beta[5 + k] * m[k];
        }
        for (std::size_t k = 0; k < 5; ++k) {
            poly += beta[k] * m[k + 1];
        }
        const double w = std::cos(arg);
        const double r = poly + w * wave_coef - y[i];
        acc += r * r;
        if (want_grad) {
            const double dsin = -std::sin(arg) * wave_coef * r;
            for (std::size_t k = 0; k < kNumAlpha; ++k) {
                grad[k] += dsin * m[k];
                grad[kNumAlpha + 5 + k] += r * w * m[k];
            }
            for (std::size_t k = 0; k < 5; ++k) {
                grad[kNumAlpha + k] += r * m[k + 1];
            }
            grad[kNumParams - 1] += r;
        }
    }
    const double n = static_cast<double>(xn.size());
    if (want_grad) {
        for (auto &g : grad) {
            g *= 2.0 / n;
        }
    }
    return acc / n;
}

std::array<double, kNumParams> pack(const FeatureParams &params) noexcept {
    std::array<double, kNumParams> theta{};
    std::ranges::copy(params.alpha, theta.begin());
    std::ranges::copy(params.beta, theta.begin() + kNumAlpha);
    theta[kNumParams - 1] = params.c;
    return theta;
}

void unpack(std::span<const double> theta, FeatureParams &params) noexcept {
    std::copy_n(theta.begin(), kNumAlpha, params.alpha.begin());
    std::copy_n(theta.begin() + kNumAlpha, kNumFeatures, params.beta.begin());
    params.c = theta[kNumParams - 1];
}

FeatureParams fit_linear_given_alpha(std::span<const Point> xn, std::span<const double> y,
                                     const Alpha &alpha) {
    if (xn.size() != y.size() || xn.empty()) {
        throw ArgumentError("fit_linear_given_alpha: inconsistent sizes");
    }
    const auto n = static_cast<Eigen::Index>(xn.size());
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(kNumFeatures + 1));
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto phi = phi_cos(xn[static_cast<std::size_t>(i)], alpha);
        for (std::size_t k = 0; k < kNumFeatures; ++k) {
            design(i, static_cast<Eigen::Index>(k)) = phi[k];
        }
        design(i, static_cast<Eigen::Index>(kNumFeatures)) = 1.0;
        target(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd coef = design.completeOrthogonalDecomposition().solve(target);
    FeatureParams params;
    params.alpha = alpha;
    for (std::size_t k = 0; k < kNumFeatures; ++k) {
        params.beta[k] = coef(static_cast<Eigen::Index>(k));
    }
    params.c = coef(static_cast<Eigen::Index>(kNumFeatures));
    return params;
}

double polynomial_baseline_mse(const RegressionSet &data) {
    const NormStats norm = compute_norm_stats(data);
    const auto xn = normalize_all(data, norm);
    FeatureParams params = fit_linear_given_alpha(xn, data.y, Alpha{});
    params.norm = norm;
    return model_mse(params, data);
}

FitResult fit_feature_params(const RegressionSet &data, const FitOptions &options) {
    check_consistent(data);
    if (data.size() <= kNumParams) {
        throw ArgumentError("fit_feature_params: need more than " +
                            std::to_string(kNumParams) + " points, got " +
                            std::to_string(data.size()));
    }
    if (options.patience == 0) {
        throw ArgumentError("fit_feature_params: patience must be >= 1");
    }
    if (!(options.restart_std >= 0.0) || !std::isfinite(options.restart_std)) {
        throw ArgumentError("fit_feature_params: restart_std must be finite and >= 0");
    }
    for (const double v : data.y) {
        if (!std::isfinite(v)) {
            throw ValidationError("fit_feature_params: non-finite target");
        }
    }

    const NormStats norm = compute_norm_stats(data);
    const std::vector<Point> xn = normalize_all(data, norm);
    const std::span<const Point> xs{xn};
    const std::span<const double> ys{data.y};
    const optim::Objective objective = [&](std::span<const double> theta,
                                           std::span<double> grad) {
        return packed_mse(theta, xs, ys, grad);
    };

    Rng rng{options.seed};
    FitResult result;
    result.params.norm = norm;
    double best = std::numeric_limits<double>::infinity();
    Alpha incumbent_start{};
    std::size_t since_improvement = 0;

    while (since_improvement < options.patience &&
           (options.max_trials == 0 || result.trials < options.max_trials)) {
        Alpha start{};
        for (std::size_t k = 0; k < kNumAlpha; ++k) {
            const double centre = result.trials == 0 ? 0.0 : incumbent_start[k];
            start[k] = centre + options.restart_std * rng.normal();
        }
        const FeatureParams linear = fit_linear_given_alpha(xs, ys, start);
        const auto theta0 = pack(linear);
        const optim::LbfgsResult run = optim::lbfgs_minimize(
            objective, {theta0.begin(), theta0.end()}, options.lbfgs);

        if (run.value < best) {
            best = run.value;
            incumbent_start = start;
            unpack(run.x, result.params);
            result.params.fit_mse = run.value;
            result.best_trial = result.trials;
            since_improvement = 0;
        } else {
            ++since_improvement;
        }
        result.best_mse_trace.push_back(best);
        ++result.trials;
    }
    return result;
}

svr::FeatureDataset build_feature_dataset(const RegressionSet &data,
                                          const FeatureParams &params) {
    check_consistent(data);
    svr::FeatureDataset out;
    const auto n = static_cast<Eigen::Index>(data.size());
    out.X.resize(n, static_cast<Eigen::Index>(kNumFeatures));
    out.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto phi =
            phi_cos(params.norm.normalize(data.x[static_cast<std::size_t>(i)]), params.alpha);
        for (std::size_t k = 0; k < kNumFeatures; ++k) {
            out.X(i, static_cast<Eigen::Index>(k)) = phi[k];
        }
        out.y(i) = data.y[static_cast<std::size_t>(i)];
    }
    return out;
}

} // namespace rqsvr::features
