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
#include "rqsvr/splits.hpp"

#include <numeric>
#include <string>

#include "rqsvr/error.hpp"
#include "rqsvr/rng.hpp"

namespace rqsvr::data {

std::vector<std::size_t> kfold_splits(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw ArgumentError("kfold_splits: k must be >= 2");
    }
    if (k > n) {
        throw ArgumentError("kfold_splits: k = " + std::to_string(k) +
                            " exceeds the number of items " + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng{seed};
    // Fisher-Yates, written out so the permutation is platform independent.
    for (std::size_t i = n; i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<std::size_t> folds(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        folds[order[pos]] = pos % k;
    }
    return folds;
}

std::uint64_t fold_assignment_hash(const std::vector<std::size_t> &folds) {
    std::string bytes;
    bytes.reserve(folds.size() * 4);
    for (const auto f : folds) {
        bytes += std::to_string(f);
        bytes += ',';
    }
    return fnv1a64(bytes);
}

} // namespace rqsvr::data
