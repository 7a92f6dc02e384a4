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
 * Unconstrained limited-memory BFGS with a strong-Wolfe line search
 * (bracketing and cubic-interpolation zoom).
 */
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rqsvr::optim {

/// Returns f(x) and writes the gradient into @p grad (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
    std::size_t memory = 10;
    std::size_t max_iterations = 500;
    /// Stop when max_i |g_i| <= gradient_tolerance.
    double gradient_tolerance = 1e-8;
    /// Stop when (f_k - f_{k+1}) / max(|f_k|, |f_{k+1}|, 1) <= function_tolerance.
    /// 0 disables the test.
    double function_tolerance = 2.220446049250313e-09;
    std::size_t max_line_search_evaluations = 40;
    double sufficient_decrease = 1e-4; ///< c1
    double curvature = 0.9;            ///< c2
};

enum class LbfgsStatus {
    GradientConverged,
    FunctionConverged,
    MaxIterations,
    LineSearchFailed,
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    std::vector<double> gradient;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    LbfgsStatus status = LbfgsStatus::MaxIterations;
};

[[nodiscard]] LbfgsResult lbfgs_minimize(const Objective &objective,
                                         std::vector<double> x0,
                                         const LbfgsOptions &options = {});

[[nodiscard]] const char *to_string(LbfgsStatus status) noexcept;

} // namespace rqsvr::optim
