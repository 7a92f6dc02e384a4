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
#include "rqsvr/serialize.hpp"

#include <fstream>
#include <sstream>

#include "rqsvr/error.hpp"

namespace rqsvr::io {

namespace {

template <class T>
T get(const Json &j, const char *key, const std::string &what) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(what + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(what + ": bad field '" + key + "': " + e.what());
    }
}

template <class T, std::size_t N>
std::array<T, N> get_array(const Json &j, const char *key, const std::string &what) {
    const auto v = get<std::vector<T>>(j, key, what);
    if (v.size() != N) {
        throw ValidationError(what + ": field '" + key + "' needs " + std::to_string(N) +
                              " entries, got " + std::to_string(v.size()));
    }
    std::array<T, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

} // namespace

void check_document(const Json &doc, const std::string &kind) {
    if (!doc.is_object() || !doc.contains("format_version")) {
        throw ValidationError(kind + ": missing format_version");
    }
    if (!doc.at("format_version").is_number_integer() ||
        doc.at("format_version").get<int>() != kFormatVersion) {
        throw ValidationError(kind + ": unsupported format_version " +
                              doc.at("format_version").dump() + " (expected " +
                              std::to_string(kFormatVersion) + ")");
    }
    if (!doc.contains("kind") || doc.at("kind") != kind) {
        throw ValidationError("expected a '" + kind + "' document, got " +
                              (doc.contains("kind") ? doc.at("kind").dump() : "none"));
    }
}

Json document(const std::string &kind, Json body) {
    Json doc;
    doc["format_version"] = kFormatVersion;
    doc["kind"] = kind;
    for (auto &[key, value] : body.items()) {
        doc[key] = std::move(value);
    }
    return doc;
}

Json to_json(const features::FeatureParams &p) {
    Json j;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["c"] = p.c;
    j["norm"] = {{"min", p.norm.min}, {"range", p.norm.range}};
    j["fit_mse"] = p.fit_mse;
    return j;
}

features::FeatureParams feature_params_from_json(const Json &j) {
    const std::string what = "feature params";
    features::FeatureParams p;
    p.alpha = get_array<double, features::kNumAlpha>(j, "alpha", what);
    p.beta = get_array<double, features::kNumFeatures>(j, "beta", what);
    p.c = get<double>(j, "c", what);
    const Json norm = get<Json>(j, "norm", what);
    p.norm.min = get_array<double, 2>(norm, "min", what + " norm");
    p.norm.range = get_array<double, 2>(norm, "range", what + " norm");
    if (!(p.norm.range[0] > 0.0) || !(p.norm.range[1] > 0.0)) {
        throw ValidationError(what + ": norm ranges must be > 0");
    }
    p.fit_mse = get<double>(j, "fit_mse", what);
    return p;
}

Json to_json(const circuit::RqsvrModel &m) {
    Json j;
    j["w"] = m.w;
    j["b"] = m.b;
    j["hyperparams"] = {{"C", m.hyperparams.C}, {"epsilon", m.hyperparams.epsilon}};
    if (m.feature_params) {
        j["feature_params"] = to_json(*m.feature_params);
    }
    j["layout"] = {{"feature_dim", m.layout.feature_dim},
                   {"index_qubits", m.layout.index_qubits},
                   {"ancillas", m.layout.ancillas},
                   {"sign_qubits", m.layout.sign_qubits},
                   {"total_qubits", m.layout.total_qubits}};
    return j;
}

circuit::RqsvrModel model_from_json(const Json &j) {
    const std::string what = "model";
    circuit::RqsvrModel m;
    m.w = get<std::vector<double>>(j, "w", what);
    if (m.w.size() != features::kNumFeatures) {
        throw ValidationError("model: w must have " + std::to_string(features::kNumFeatures) +
                              " entries");
    }
    m.b = get<double>(j, "b", what);
    const Json hp = get<Json>(j, "hyperparams", what);
    m.hyperparams.C = get<double>(hp, "C", what);
    m.hyperparams.epsilon = get<double>(hp, "epsilon", what);
    m.feature_params = feature_params_from_json(get<Json>(j, "feature_params", what));
    m.layout = circuit::make_layout(m.w.size());
    const Json layout = get<Json>(j, "layout", what);
    if (get<std::size_t>(layout, "feature_dim", what) != m.layout.feature_dim ||
        get<std::size_t>(layout, "total_qubits", what) != m.layout.total_qubits ||
        get<std::size_t>(layout, "index_qubits", what) != m.layout.index_qubits) {
        throw ValidationError("model: layout does not match the weight dimension");
    }
    return m;
}

Json to_json(const svr::CvReport &r) {
    Json entries = Json::array();
    for (const auto &e : r.entries) {
        char hash[32];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(e.fold_hash));
        entries.push_back({{"C", e.C},
                           {"mean_mse", e.mean_mse},
                           {"fold_mse", e.fold_mse},
                           {"fold_hash", hash}});
    }
    Json j;
    j["k"] = r.k;
    j["epsilon"] = r.epsilon;
    j["seed"] = r.seed;
    j["best_C"] = r.best_C;
    j["best_index"] = r.best_index;
    j["entries"] = std::move(entries);
    j["folds"] = r.folds;
    return j;
}

Json to_json(const data::SynthConfig &c) {
    Json j;
    j["speed_min"] = c.speeds.min;
    j["speed_max"] = c.speeds.max;
    j["speed_step"] = c.speeds.step;
    j["wear_levels"] = c.wear_levels;
    j["num_tools"] = c.num_tools;
    j["machine"] = c.machine;
    j["alpha"] = c.truth.alpha;
    j["beta"] = c.truth.beta;
    j["c"] = c.truth.c;
    j["rescale"] = c.rescale;
    j["noise_std"] = c.noise_std;
    j["clip"] = c.clip;
    j["clip_lo"] = c.clip_lo;
    j["clip_hi"] = c.clip_hi;
    j["ae_max"] = c.ae_max;
    j["tool_offset"] = c.tool_offset;
    j["axial_depth_mm"] = c.axial_depth_mm;
    return j;
}

void merge_synth_config(const Json &j, data::SynthConfig &c) {
    const std::string what = "synth config";
    if (!j.is_object()) {
        throw ValidationError(what + ": expected an object");
    }
    for (const auto &[key, value] : j.items()) {
        (void)value;
        if (key == "speed_min") {
            c.speeds.min = get<std::int64_t>(j, "speed_min", what);
        } else if (key == "speed_max") {
            c.speeds.max = get<std::int64_t>(j, "speed_max", what);
        } else if (key == "speed_step") {
            c.speeds.step = get<std::int64_t>(j, "speed_step", what);
        } else if (key == "wear_levels") {
            c.wear_levels = get<std::vector<double>>(j, "wear_levels", what);
        } else if (key == "num_tools") {
            c.num_tools = get<std::size_t>(j, "num_tools", what);
        } else if (key == "machine") {
            c.machine = get<std::string>(j, "machine", what);
        } else if (key == "alpha") {
            c.truth.alpha = get_array<double, features::kNumAlpha>(j, "alpha", what);
        } else if (key == "beta") {
            c.truth.beta = get_array<double, features::kNumFeatures>(j, "beta", what);
        } else if (key == "c") {
            c.truth.c = get<double>(j, "c", what);
        } else if (key == "rescale") {
            c.rescale = get<bool>(j, "rescale", what);
        } else if (key == "noise_std") {
            c.noise_std = get<double>(j, "noise_std", what);
        } else if (key == "clip") {
            c.clip = get<bool>(j, "clip", what);
        } else if (key == "clip_lo") {
            c.clip_lo = get<double>(j, "clip_lo", what);
        } else if (key == "clip_hi") {
            c.clip_hi = get<double>(j, "clip_hi", what);
        } else if (key == "ae_max") {
            c.ae_max = get<double>(j, "ae_max", what);
        } else if (key == "tool_offset") {
            c.tool_offset = get<std::map<std::string, double>>(j, "tool_offset", what);
        } else if (key == "axial_depth_mm") {
            c.axial_depth_mm = get<double>(j, "axial_depth_mm", what);
        } else {
            throw ValidationError(what + ": unknown field '" + key + "'");
        }
    }
}

Json parse_json(const std::string &text, const std::string &source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(source, 0, "", std::string("invalid JSON: ") + e.what());
    }
}

Json load_json(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path, 0, "", "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

std::string dump(const Json &doc) { return doc.dump(2) + "\n"; }

} // namespace rqsvr::io
