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
 * Experiment commands behind the rqsvr executable. Each cmd_* function is
 * pure: it returns the artifacts and the run report in memory, and
 * write_artifacts commits them to disk only once everything succeeded.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rqsvr/circuit.hpp"
#include "rqsvr/data.hpp"
#include "rqsvr/features.hpp"
#include "rqsvr/serialize.hpp"
#include "rqsvr/svr.hpp"

namespace rqsvr::cli {

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::string out = ".";
    // Inputs; which ones are needed depends on the command.
    std::string dataset;
    std::string features;
    std::string model;
    std::string input;

    std::uint64_t shots = 10000;
    std::size_t repetitions = 100;
    std::vector<double> c_grid = svr::default_c_grid();
    double C = 1.0;
    double epsilon = 0.1;
    std::size_t k = 10;
    std::size_t patience = 1000;
    std::size_t max_trials = 0;
    double restart_std = 10.0;
    double tol = svr::kDefaultTolerance;
    circuit::EstimationMode::Kind mode = circuit::EstimationMode::Kind::Exact;
    /// Predict each row with a model retrained without that row's fold.
    bool held_out = false;
    /// Records above this limit are dropped before any fitting.
    double ae_max = 5.44;
    data::SynthConfig synth = data::default_synth_config();
    std::int64_t noise_speed_step = 50;
    /// Empty means minimum, midpoint and maximum of the model's wear range.
    std::vector<double> noise_wear_levels;
    /// Adds wall-clock timing to reports (breaks byte reproducibility).
    bool timing = false;

    /// Throws ArgumentError on out-of-range values.
    void validate() const;
};

/// Everything except out and timing, which do not influence results.
[[nodiscard]] io::Json to_json(const ExperimentConfig &cfg);
/**
 * Overlays the keys present in @p j. Accepts either a bare config object or
 * a run report, in which case its "config" member is used.
 */
void merge_config(const io::Json &j, ExperimentConfig &cfg);

struct Artifact {
    std::string name; ///< file name relative to the output directory
    std::string content;
};

struct CommandResult {
    std::string command;
    io::Json report;
    std::vector<Artifact> artifacts;

    [[nodiscard]] const Artifact &artifact(const std::string &name) const;
    [[nodiscard]] std::string report_name() const;
};

[[nodiscard]] CommandResult cmd_synth(const ExperimentConfig &cfg);
[[nodiscard]] CommandResult cmd_fit_features(const ExperimentConfig &cfg,
                                             const data::MillingDataset &dataset);
[[nodiscard]] CommandResult cmd_cv(const ExperimentConfig &cfg,
                                   const data::MillingDataset &dataset,
                                   const features::FeatureParams &params);
[[nodiscard]] CommandResult cmd_train(const ExperimentConfig &cfg,
                                      const data::MillingDataset &dataset,
                                      const features::FeatureParams &params);
[[nodiscard]] CommandResult cmd_predict(const ExperimentConfig &cfg,
                                        const circuit::RqsvrModel &model,
                                        const data::MillingDataset &dataset);
[[nodiscard]] CommandResult cmd_noise_study(const ExperimentConfig &cfg,
                                            const circuit::RqsvrModel &model);
[[nodiscard]] CommandResult cmd_tool_study(const ExperimentConfig &cfg,
                                           const data::MillingDataset &dataset);
/// @p csv is a predictions or noise-study CSV.
[[nodiscard]] CommandResult cmd_export_plot(const ExperimentConfig &cfg,
                                            const std::string &csv,
                                            const std::string &source);

/// Loads the inputs named in @p cfg and dispatches on @p command.
[[nodiscard]] CommandResult run_command(const std::string &command,
                                        const ExperimentConfig &cfg);

/**
 * Writes every artifact and the report into @p out_dir. Files are staged
 * under temporary names and renamed only after all writes succeeded.
 */
void write_artifacts(const CommandResult &result, const std::string &out_dir);

[[nodiscard]] const std::vector<std::string> &command_names();

} // namespace rqsvr::cli
