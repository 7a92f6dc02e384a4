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
#include "rqsvr/data.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rqsvr/error.hpp"
#include "rqsvr/rng.hpp"

namespace rqsvr::data {

namespace {

constexpr std::array<const char *, 6> kColumns{
    "machine", "tool", "spindle_speed_rpm", "wear_cm2", "ae_lim_mm", "fully_stable"};

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round9(double v) { return std::strtod(format_real(v).c_str(), nullptr); }

std::string format_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double parse_real(const std::string &field, const std::string &source, std::size_t row,
                  const std::string &column) {
    double value = 0.0;
    const char *first = field.data();
    const char *last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(source, row, column, "not a number: '" + field + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(source, row, column, "not finite: '" + field + "'");
    }
    return value;
}

std::int64_t parse_int(const std::string &field, const std::string &source,
                       std::size_t row, const std::string &column) {
    std::int64_t value = 0;
    const char *first = field.data();
    const char *last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(source, row, column, "not an integer: '" + field + "'");
    }
    return value;
}

} // namespace

void SpeedGrid::validate() const {
    if (step <= 0) {
        throw ArgumentError("speed grid: increment must be > 0");
    }
    if (min >= max) {
        throw ArgumentError("speed grid: min must be < max");
    }
    if ((max - min) % step != 0) {
        throw ArgumentError("speed grid: increment " + std::to_string(step) +
                            " does not divide " + std::to_string(max - min));
    }
}

MillingDataset read_csv(std::istream &in, const std::string &source,
                        const std::optional<SpeedGrid> &grid) {
    if (grid) {
        grid->validate();
    }
    MillingDataset data;
    data.provenance = "file:" + source;

    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        header = split_fields(line);
        break;
    }
    if (header.empty()) {
        throw ParseError(source, row, "", "missing header");
    }
    for (auto &h : header) {
        h = trim(h);
    }
    std::array<std::size_t, kColumns.size()> index{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto it = std::find(header.begin(), header.end(), kColumns[c]);
        if (it == header.end()) {
            throw ParseError(source, row, kColumns[c], "missing column");
        }
        index[c] = static_cast<std::size_t>(it - header.begin());
    }

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ParseError(source, row, "",
                             "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        for (auto &f : fields) {
            f = trim(f);
        }
        MillingRecord r;
        r.machine = fields[index[0]];
        r.tool = fields[index[1]];
        if (r.machine.empty()) {
            throw ParseError(source, row, kColumns[0], "empty identifier");
        }
        if (r.tool.empty()) {
            throw ParseError(source, row, kColumns[1], "empty identifier");
        }
        r.spindle_speed = parse_int(fields[index[2]], source, row, kColumns[2]);
        r.wear = parse_real(fields[index[3]], source, row, kColumns[3]);
        if (r.wear < 0.0) {
            throw ParseError(source, row, kColumns[3], "wear must be >= 0");
        }
        r.ae_lim = parse_real(fields[index[4]], source, row, kColumns[4]);
        if (!(r.ae_lim > 0.0)) {
            throw ParseError(source, row, kColumns[4], "ae_lim must be > 0");
        }
        const std::string &flag = fields[index[5]];
        if (flag == "true") {
            r.fully_stable = true;
        } else if (flag == "false") {
            r.fully_stable = false;
        } else {
            throw ParseError(source, row, kColumns[5],
                             "expected true or false, got '" + flag + "'");
        }
        if (grid && !grid->contains(r.spindle_speed)) {
            data.warnings.push_back(source + ":" + std::to_string(row) +
                                    ": spindle speed " + std::to_string(r.spindle_speed) +
                                    " is off the grid " + std::to_string(grid->min) + ":" +
                                    std::to_string(grid->step) + ":" +
                                    std::to_string(grid->max));
        }
        data.records.push_back(std::move(r));
    }
    return data;
}

MillingDataset load_csv(const std::string &path, const std::optional<SpeedGrid> &grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path, 0, "", "cannot open file");
    }
    return read_csv(in, path, grid);
}

void write_csv(std::ostream &out, const MillingDataset &data) {
    out << kCsvHeader << '\n';
    for (const auto &r : data.records) {
        out << r.machine << ',' << r.tool << ',' << r.spindle_speed << ','
            << format_real(r.wear) << ',' << format_real(r.ae_lim) << ','
            << (r.fully_stable ? "true" : "false") << '\n';
    }
}

std::string to_csv(const MillingDataset &data) {
    std::ostringstream out;
    write_csv(out, data);
    return out.str();
}

MillingDataset drop_stable(const MillingDataset &data, double ae_max) {
    if (!(ae_max > 0.0)) {
        throw ArgumentError("drop_stable: ae_max must be > 0");
    }
    MillingDataset out;
    out.provenance = data.provenance;
    out.warnings = data.warnings;
    for (const auto &r : data.records) {
        if (!r.fully_stable && r.ae_lim <= ae_max) {
            out.records.push_back(r);
        }
    }
    return out;
}

std::vector<std::string> tools(const MillingDataset &data) {
    std::vector<std::string> out;
    for (const auto &r : data.records) {
        if (std::find(out.begin(), out.end(), r.tool) == out.end()) {
            out.push_back(r.tool);
        }
    }
    return out;
}

std::pair<MillingDataset, MillingDataset> leave_one_tool_out(const MillingDataset &data,
                                                             const std::string &tool) {
    const auto ids = tools(data);
    if (std::find(ids.begin(), ids.end(), tool) == ids.end()) {
        throw ArgumentError("leave_one_tool_out: unknown tool '" + tool + "'");
    }
    if (ids.size() < 2) {
        throw ArgumentError("leave_one_tool_out: need at least two tools, training set "
                            "would be empty");
    }
    MillingDataset train;
    MillingDataset test;
    train.provenance = data.provenance;
    test.provenance = data.provenance;
    for (const auto &r : data.records) {
        (r.tool == tool ? test : train).records.push_back(r);
    }
    return {std::move(train), std::move(test)};
}

features::RegressionSet to_regression_set(const MillingDataset &data) {
    features::RegressionSet out;
    out.x.reserve(data.size());
    out.y.reserve(data.size());
    for (const auto &r : data.records) {
        out.x.push_back({static_cast<double>(r.spindle_speed), r.wear});
        out.y.push_back(r.ae_lim);
    }
    return out;
}

void SynthConfig::validate() const {
    speeds.validate();
    if (wear_levels.size() < 2) {
        throw ArgumentError("synth config: need at least two wear levels");
    }
    for (const double v : wear_levels) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ArgumentError("synth config: wear levels must be finite and >= 0");
        }
    }
    if (*std::min_element(wear_levels.begin(), wear_levels.end()) ==
        *std::max_element(wear_levels.begin(), wear_levels.end())) {
        throw ArgumentError("synth config: wear levels must not all be equal");
    }
    if (num_tools < 1) {
        throw ArgumentError("synth config: need at least one tool");
    }
    if (machine.empty() || machine.find(',') != std::string::npos) {
        throw ArgumentError("synth config: machine id must be non-empty without commas");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw ArgumentError("synth config: noise std must be finite and >= 0");
    }
    if (!(clip_lo > 0.0) || !(clip_hi > clip_lo) || !std::isfinite(clip_hi)) {
        throw ArgumentError("synth config: clip range must satisfy 0 < lo < hi");
    }
    if (!(ae_max > 0.0)) {
        throw ArgumentError("synth config: ae_max must be > 0");
    }
    for (const auto &[tool, offset] : tool_offset) {
        bool known = false;
        for (std::size_t t = 0; t < num_tools; ++t) {
            known = known || tool_name(t) == tool;
        }
        if (!known || !std::isfinite(offset)) {
            throw ArgumentError("synth config: bad tool offset for '" + tool + "'");
        }
    }
    const auto finite = [](const auto &arr) {
        return std::all_of(arr.begin(), arr.end(),
                           [](double v) { return std::isfinite(v); });
    };
    if (!finite(truth.alpha) || !finite(truth.beta) || !std::isfinite(truth.c)) {
        throw ArgumentError("synth config: ground truth must be finite");
    }
}

SynthConfig default_synth_config() {
    SynthConfig cfg;
    constexpr double kMaxWear = 263.725;
    for (int i = 0; i < 5; ++i) {
        cfg.wear_levels.push_back(kMaxWear * i / 4.0);
    }
    cfg.truth.alpha = features::kReferenceAlphaB;
    cfg.truth.beta = {0.3, -0.5, 0.2, 0.1, 0.3, 1.0, 0.5, -0.3, 0.2, 0.1, -0.2};
    cfg.truth.c = 0.0;
    return cfg;
}

std::string tool_name(std::size_t index) { return "T" + std::to_string(index + 1); }

features::FeatureParams resolve_ground_truth(const SynthConfig &config) {
    config.validate();
    features::FeatureParams p = config.truth;
    const double wmin = *std::min_element(config.wear_levels.begin(), config.wear_levels.end());
    const double wmax = *std::max_element(config.wear_levels.begin(), config.wear_levels.end());
    p.norm.min = {static_cast<double>(config.speeds.min), wmin};
    p.norm.range = {static_cast<double>(config.speeds.max - config.speeds.min), wmax - wmin};
    p.fit_mse = 0.0;
    if (!config.rescale) {
        return p;
    }
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (const double wear : config.wear_levels) {
        for (std::int64_t s = config.speeds.min; s <= config.speeds.max; s += config.speeds.step) {
            const double f = features::evaluate(p, {static_cast<double>(s), wear});
            fmin = std::min(fmin, f);
            fmax = std::max(fmax, f);
        }
    }
    if (!(fmax - fmin > 1e-12 * std::max(1.0, std::abs(fmax)))) {
        throw DegenerateInputError("synth config: ground truth is constant over the grid");
    }
    const double k = (config.clip_hi - config.clip_lo) / (fmax - fmin);
    for (auto &b : p.beta) {
        b *= k;
    }
    p.c = k * (p.c - fmin) + config.clip_lo;
    return p;
}

std::string canonical_string(const SynthConfig &config) {
    std::ostringstream s;
    s << "speeds=" << config.speeds.min << ':' << config.speeds.step << ':'
      << config.speeds.max << ";wear=";
    for (const double v : config.wear_levels) {
        s << format_exact(v) << ',';
    }
    s << ";tools=" << config.num_tools << ";machine=" << config.machine << ";alpha=";
    for (const double v : config.truth.alpha) {
        s << format_exact(v) << ',';
    }
    s << ";beta=";
    for (const double v : config.truth.beta) {
        s << format_exact(v) << ',';
    }
    s << ";c=" << format_exact(config.truth.c) << ";rescale=" << config.rescale
      << ";noise=" << format_exact(config.noise_std) << ";clip=" << config.clip << ':'
      << format_exact(config.clip_lo) << ':' << format_exact(config.clip_hi)
      << ";ae_max=" << format_exact(config.ae_max) << ";offsets=";
    for (const auto &[tool, offset] : config.tool_offset) {
        s << tool << '=' << format_exact(offset) << ',';
    }
    s << ";ap=" << format_exact(config.axial_depth_mm);
    return s.str();
}

MillingDataset synthesize(const SynthConfig &config, std::uint64_t seed) {
    const features::FeatureParams truth = resolve_ground_truth(config);
    Rng rng{derive_seed(seed, "synth")};

    MillingDataset data;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_string(config))));
    data.provenance = std::string("synthetic:") + hash;
    data.records.reserve(config.num_tools * config.wear_levels.size() *
                         config.speeds.count());

    for (std::size_t t = 0; t < config.num_tools; ++t) {
        const std::string tool = tool_name(t);
        const auto off = config.tool_offset.find(tool);
        const double offset = off == config.tool_offset.end() ? 0.0 : off->second;
        for (const double wear_raw : config.wear_levels) {
            const double wear = round9(wear_raw);
            for (std::int64_t s = config.speeds.min; s <= config.speeds.max;
                 s += config.speeds.step) {
                double y = features::evaluate(truth, {static_cast<double>(s), wear}) + offset;
                if (config.noise_std > 0.0) {
                    y += config.noise_std * rng.normal();
                }
                MillingRecord r;
                r.machine = config.machine;
                r.tool = tool;
                r.spindle_speed = s;
                r.wear = wear;
                r.fully_stable = y > config.ae_max;
                if (config.clip) {
                    y = std::clamp(y, config.clip_lo, config.clip_hi);
                }
                r.ae_lim = round9(y);
                if (!(r.ae_lim > 0.0)) {
                    throw ValidationError("synthesize: generated ae_lim " + format_real(y) +
                                          " is not positive; enable clipping");
                }
                data.records.push_back(std::move(r));
            }
        }
    }
    return data;
}

} // namespace rqsvr::data
