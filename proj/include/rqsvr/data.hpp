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
 * Milling stability records: CSV schema, filtering, tool splits and a
 * synthetic generator built on the cosine feature model.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rqsvr/features.hpp"
#include "rqsvr/splits.hpp"

namespace rqsvr::data {

inline constexpr const char *kCsvHeader =
    "machine,tool,spindle_speed_rpm,wear_cm2,ae_lim_mm,fully_stable";

struct MillingRecord {
    std::string machine;
    std::string tool;
    std::int64_t spindle_speed = 0; ///< RPM
    double wear = 0.0;              ///< cm^2
    double ae_lim = 0.0;            ///< mm
    bool fully_stable = false;

    friend bool operator==(const MillingRecord &, const MillingRecord &) = default;
};

struct MillingDataset {
    std::vector<MillingRecord> records;
    /// "file:<path>" or "synthetic:<config hash>".
    std::string provenance;
    /// Non-fatal findings from loading, e.g. off-grid speeds.
    std::vector<std::string> warnings;

    [[nodiscard]] std::size_t size() const noexcept { return records.size(); }
    [[nodiscard]] bool empty() const noexcept { return records.empty(); }
};

/// Spindle speeds min, min + step, ..., max.
struct SpeedGrid {
    std::int64_t min = 4000;
    std::int64_t max = 8000;
    std::int64_t step = 50;

    [[nodiscard]] bool contains(std::int64_t speed) const noexcept {
        return speed >= min && speed <= max && (speed - min) % step == 0;
    }
    [[nodiscard]] std::size_t count() const noexcept {
        return static_cast<std::size_t>((max - min) / step + 1);
    }
    /// Throws ArgumentError unless step > 0, min < max and step divides max - min.
    void validate() const;
};

/**
 * Parses the CSV schema. Columns are matched by header name. Errors carry the
 * 1-based line number and the column name. When @p grid is given, speeds off
 * the grid produce a warning and the record is kept.
 */
[[nodiscard]] MillingDataset read_csv(std::istream &in, const std::string &source,
                                      const std::optional<SpeedGrid> &grid = SpeedGrid{});
[[nodiscard]] MillingDataset load_csv(const std::string &path,
                                      const std::optional<SpeedGrid> &grid = SpeedGrid{});

/// Reals are written with 9 significant digits.
void write_csv(std::ostream &out, const MillingDataset &data);
[[nodiscard]] std::string to_csv(const MillingDataset &data);

/// Drops records flagged fully stable or with ae_lim > ae_max.
[[nodiscard]] MillingDataset drop_stable(const MillingDataset &data, double ae_max);

/// Distinct tool ids in order of first appearance.
[[nodiscard]] std::vector<std::string> tools(const MillingDataset &data);

/// (train, test) with test holding exactly the records of @p tool.
[[nodiscard]] std::pair<MillingDataset, MillingDataset>
leave_one_tool_out(const MillingDataset &data, const std::string &tool);

/// x = (spindle speed, wear), y = ae_lim.
[[nodiscard]] features::RegressionSet to_regression_set(const MillingDataset &data);

struct SynthConfig {
    SpeedGrid speeds{};
    std::vector<double> wear_levels;
    std::size_t num_tools = 3;
    std::string machine = "A";
    /**
     * Ground truth. norm is ignored and replaced by the grid extents. With
     * rescale enabled, beta and c are mapped affinely so that the noiseless
     * response over the grid spans [clip_lo, clip_hi].
     */
    features::FeatureParams truth;
    bool rescale = true;
    double noise_std = 0.2;
    bool clip = true;
    double clip_lo = 1.08;
    double clip_hi = 5.44;
    double ae_max = 5.44;
    /// Constant added to one tool's response, for perturbation studies.
    std::map<std::string, double> tool_offset;
    /// Recorded only.
    double axial_depth_mm = 4.6;

    void validate() const;
};

/// 81 speeds, five wear levels in [0, 263.725], three tools, reference alpha B.
[[nodiscard]] SynthConfig default_synth_config();

/// Ground-truth parameters actually used by synthesize, including norm.
[[nodiscard]] features::FeatureParams resolve_ground_truth(const SynthConfig &config);

/// Stable text form of a config; its hash goes into the provenance.
[[nodiscard]] std::string canonical_string(const SynthConfig &config);

/**
 * One record per (tool, wear level, speed). Targets are rounded to 9
 * significant digits so the dataset survives a CSV round trip unchanged.
 */
[[nodiscard]] MillingDataset synthesize(const SynthConfig &config, std::uint64_t seed);

/// Tool names T1..Tn used by synthesize.
[[nodiscard]] std::string tool_name(std::size_t index);

} // namespace rqsvr::data
