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
 * JSON forms of fitted artifacts. Every top-level document carries
 * "format_version" and a "kind" tag; readers reject anything else.
 */
#pragma once

#include <string>

#include <json.hpp>

#include "rqsvr/circuit.hpp"
#include "rqsvr/data.hpp"
#include "rqsvr/features.hpp"
#include "rqsvr/svr.hpp"

namespace rqsvr::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Throws ValidationError unless @p doc has the current format_version and
/// kind == @p kind.
void check_document(const Json &doc, const std::string &kind);

[[nodiscard]] Json to_json(const features::FeatureParams &params);
[[nodiscard]] features::FeatureParams feature_params_from_json(const Json &j);

[[nodiscard]] Json to_json(const circuit::RqsvrModel &model);
[[nodiscard]] circuit::RqsvrModel model_from_json(const Json &j);

[[nodiscard]] Json to_json(const svr::CvReport &report);

[[nodiscard]] Json to_json(const data::SynthConfig &config);
/// Missing keys keep the values already in @p config.
void merge_synth_config(const Json &j, data::SynthConfig &config);

/// Wraps @p body as a top-level document of the given kind.
[[nodiscard]] Json document(const std::string &kind, Json body);

[[nodiscard]] Json parse_json(const std::string &text, const std::string &source);
[[nodiscard]] Json load_json(const std::string &path);
[[nodiscard]] std::string dump(const Json &doc);

} // namespace rqsvr::io
