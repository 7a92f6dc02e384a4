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
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "rqsvr/lbfgs.hpp"

using namespace rqsvr::optim;
using Catch::Matchers::WithinAbs;

TEST_CASE("Rosenbrock minimum", "[lbfgs]") {
    const Objective rosen = [](std::span<const double> x, std::span<double> g) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        if (!g.empty()) {
            g[0] = -2.0 * a - 400.0 * x[0] * b;
            g[1] = 200.0 * b;
        }
        return a * a + 100.0 * b * b;
    };
    LbfgsOptions opt;
    opt.function_tolerance = 0.0;
    const auto r = lbfgs_minimize(rosen, {-1.2, 1.0}, opt);
    REQUIRE(r.status == LbfgsStatus::GradientConverged);
    REQUIRE_THAT(r.x[0], WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(r.x[1], WithinAbs(1.0, 1e-6));
    REQUIRE(r.value < 1e-12);
}

TEST_CASE("ill-conditioned quadratic", "[lbfgs]") {
    const std::size_t n = 20;
    const Objective quad = [n](std::span<const double> x, std::span<double> g) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = std::pow(10.0, static_cast<double>(i) / 5.0);
            const double d = x[i] - static_cast<double>(i);
            f += 0.5 * s * d * d;
            if (!g.empty()) {
                g[i] = s * d;
            }
        }
        return f;
    };
    LbfgsOptions opt;
    opt.function_tolerance = 0.0;
    const auto r = lbfgs_minimize(quad, std::vector<double>(n, 0.0), opt);
    REQUIRE(r.status == LbfgsStatus::GradientConverged);
    for (std::size_t i = 0; i < n; ++i) {
        REQUIRE_THAT(r.x[i], WithinAbs(static_cast<double>(i), 1e-4));
    }
    REQUIRE(r.iterations < 500);

    // The relative-decrease test stops earlier but never at a worse value.
    const auto loose = lbfgs_minimize(quad, std::vector<double>(n, 0.0));
    REQUIRE(loose.iterations <= r.iterations);
    REQUIRE(loose.value >= r.value);
    REQUIRE(loose.value < 1e-6);
}

TEST_CASE("starting at the minimum", "[lbfgs]") {
    const Objective f = [](std::span<const double> x, std::span<double> g) {
        if (!g.empty()) {
            g[0] = 2.0 * x[0];
        }
        return x[0] * x[0];
    };
    const auto r = lbfgs_minimize(f, {0.0});
    REQUIRE(r.status == LbfgsStatus::GradientConverged);
    REQUIRE(r.iterations == 0);
    REQUIRE(std::string(to_string(r.status)) == "gradient_converged");
}
