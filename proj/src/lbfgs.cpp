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
#include "rqsvr/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "rqsvr/error.hpp"

namespace rqsvr::optim {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(std::span<const double> a) {
    double m = 0.0;
    for (const double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

struct LinePoint {
    double step = 0.0;
    double value = 0.0;
    double slope = 0.0; ///< directional derivative
};

/// Minimizer of the cubic through two points with slopes, or NaN.
double cubic_minimizer(const LinePoint &a, const LinePoint &b) {
    const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (!(disc >= 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
}

class WolfeSearch {
  public:
    WolfeSearch(const Objective &objective, const LbfgsOptions &options,
                std::span<const double> x, std::span<const double> direction,
                double f0, double slope0)
        : objective_(objective), options_(options), x_(x), dir_(direction),
          trial_(x.size()), grad_(x.size()), best_grad_(x.size()),
          origin_{0.0, f0, slope0} {}

    /// Returns true when a step meeting the strong Wolfe conditions (or at
    /// least sufficient decrease) was found.
    bool run(double initial_step) {
        LinePoint prev = origin_;
        double step = initial_step;
        for (std::size_t i = 0; evals_ < options_.max_line_search_evaluations; ++i) {
            const LinePoint cur = evaluate(step);
            if (!armijo(cur) || (i > 0 && cur.value >= prev.value)) {
                return zoom(prev, cur);
            }
            if (std::abs(cur.slope) <= -options_.curvature * origin_.slope) {
                accept(cur);
                return true;
            }
            if (cur.slope >= 0.0) {
                return zoom(cur, prev);
            }
            prev = cur;
            step *= 2.0;
        }
        return has_best_;
    }

    [[nodiscard]] const LinePoint &best() const noexcept { return best_; }
    [[nodiscard]] const std::vector<double> &best_gradient() const noexcept {
        return best_grad_;
    }
    [[nodiscard]] std::size_t evaluations() const noexcept { return evals_; }

  private:
    LinePoint evaluate(double step) {
        for (std::size_t k = 0; k < x_.size(); ++k) {
            trial_[k] = x_[k] + step * dir_[k];
        }
        ++evals_;
        const double f = objective_(trial_, grad_);
        LinePoint p{step, f, dot(grad_, dir_)};
        if (!std::isfinite(p.value) || !std::isfinite(p.slope)) {
            p.value = std::numeric_limits<double>::infinity();
            p.slope = std::numeric_limits<double>::infinity();
        } else if (armijo(p) && (!has_best_ || p.value < best_.value)) {
            // Fallback if the curvature condition is never met.
            best_ = p;
            best_grad_ = grad_;
            has_best_ = true;
        }
        return p;
    }

    [[nodiscard]] bool armijo(const LinePoint &p) const {
        return p.value <= origin_.value + options_.sufficient_decrease * p.step * origin_.slope;
    }

    void accept(const LinePoint &p) {
        best_ = p;
        best_grad_ = grad_;
        has_best_ = true;
    }

    bool zoom(LinePoint lo, LinePoint hi) {
        while (evals_ < options_.max_line_search_evaluations) {
            const double a = std::min(lo.step, hi.step);
            const double b = std::max(lo.step, hi.step);
            const double width = b - a;
            if (width <= std::numeric_limits<double>::epsilon() * std::max(1.0, b)) {
                break;
            }
            double step = std::isfinite(hi.value) ? cubic_minimizer(lo, hi)
                                                  : std::numeric_limits<double>::quiet_NaN();
            if (!std::isfinite(step) || step < a + 0.1 * width || step > b - 0.1 * width) {
                step = 0.5 * (lo.step + hi.step);
            }
            const LinePoint cur = evaluate(step);
            if (!armijo(cur) || cur.value >= lo.value) {
                hi = cur;
            } else {
                if (std::abs(cur.slope) <= -options_.curvature * origin_.slope) {
                    accept(cur);
                    return true;
                }
                if (cur.slope * (hi.step - lo.step) >= 0.0) {
                    hi = lo;
                }
                lo = cur;
            }
        }
        return has_best_;
    }

    const Objective &objective_;
    const LbfgsOptions &options_;
    std::span<const double> x_;
    std::span<const double> dir_;
    std::vector<double> trial_;
    std::vector<double> grad_;
    std::vector<double> best_grad_;
    LinePoint origin_;
    LinePoint best_;
    bool has_best_ = false;
    std::size_t evals_ = 0;
};

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho = 0.0;
};

/// Two-loop recursion: returns -H g.
std::vector<double> search_direction(const std::deque<CurvaturePair> &memory,
                                     std::span<const double> g) {
    std::vector<double> q(g.begin(), g.end());
    std::vector<double> alpha(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        const auto &p = memory[k];
        alpha[k] = p.rho * dot(p.s, q);
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] -= alpha[k] * p.y[i];
        }
    }
    if (!memory.empty()) {
        const auto &last = memory.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (auto &v : q) {
            v *= gamma;
        }
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto &p = memory[k];
        const double beta = p.rho * dot(p.y, q);
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] += (alpha[k] - beta) * p.s[i];
        }
    }
    for (auto &v : q) {
        v = -v;
    }
    return q;
}

} // namespace

LbfgsResult lbfgs_minimize(const Objective &objective, std::vector<double> x0,
                           const LbfgsOptions &options) {
    if (x0.empty()) {
        throw ArgumentError("lbfgs_minimize: empty starting point");
    }
    if (options.memory == 0) {
        throw ArgumentError("lbfgs_minimize: memory must be >= 1");
    }

    LbfgsResult result;
    result.x = std::move(x0);
    result.gradient.assign(result.x.size(), 0.0);
    result.value = objective(result.x, result.gradient);
    result.evaluations = 1;
    if (!std::isfinite(result.value)) {
        throw ValidationError("lbfgs_minimize: objective is not finite at the start");
    }

    std::deque<CurvaturePair> memory;
    for (;;) {
        if (inf_norm(result.gradient) <= options.gradient_tolerance) {
            result.status = LbfgsStatus::GradientConverged;
            return result;
        }
        if (result.iterations >= options.max_iterations) {
            result.status = LbfgsStatus::MaxIterations;
            return result;
        }

        std::vector<double> dir = search_direction(memory, result.gradient);
        double slope = dot(dir, result.gradient);
        if (!(slope < 0.0)) {
            memory.clear();
            dir = search_direction(memory, result.gradient);
            slope = dot(dir, result.gradient);
        }
        // Without curvature information, scale the first step to unit length.
        const double initial_step =
            memory.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(dir, dir))) : 1.0;

        WolfeSearch search{objective, options, result.x, dir, result.value, slope};
        const bool found = search.run(initial_step);
        result.evaluations += search.evaluations();
        if (!found) {
            if (!memory.empty()) {
                // Retry once along steepest descent before giving up.
                memory.clear();
                continue;
            }
            result.status = LbfgsStatus::LineSearchFailed;
            return result;
        }

        const LinePoint &step = search.best();
        CurvaturePair pair;
        pair.s.resize(result.x.size());
        pair.y.resize(result.x.size());
        for (std::size_t i = 0; i < result.x.size(); ++i) {
            pair.s[i] = step.step * dir[i];
            pair.y[i] = search.best_gradient()[i] - result.gradient[i];
            result.x[i] += pair.s[i];
        }
        const double previous = result.value;
        result.value = step.value;
        result.gradient = search.best_gradient();
        ++result.iterations;

        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-10 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (memory.size() > options.memory) {
                memory.pop_front();
            }
        }

        if (options.function_tolerance > 0.0) {
            const double scale =
                std::max({std::abs(previous), std::abs(result.value), 1.0});
            if ((previous - result.value) / scale <= options.function_tolerance) {
                result.status = LbfgsStatus::FunctionConverged;
                return result;
            }
        }
    }
}

const char *to_string(LbfgsStatus status) noexcept {
    switch (status) {
    case LbfgsStatus::GradientConverged:
        return "gradient_converged";
    case LbfgsStatus::FunctionConverged:
        return "function_converged";
    case LbfgsStatus::MaxIterations:
        return "max_iterations";
    case LbfgsStatus::LineSearchFailed:
        return "line_search_failed";
    }
    return "unknown";
}

} // namespace rqsvr::optim
