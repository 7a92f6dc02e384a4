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
 * k-fold assignment shared by cross-validation and the data layer.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rqsvr::data {

/**
 * Fold index in [0, k) for each of @p n items. The items are shuffled once
 * with @p seed and dealt round-robin, so fold sizes differ by at most one
 * and the assignment is a pure function of (n, k, seed).
 */
[[nodiscard]] std::vector<std::size_t> kfold_splits(std::size_t n, std::size_t k,
                                                    std::uint64_t seed);

/// FNV-1a hash of a fold assignment, for comparing splits across runs.
[[nodiscard]] std::uint64_t fold_assignment_hash(const std::vector<std::size_t> &folds);

} // namespace rqsvr::data
