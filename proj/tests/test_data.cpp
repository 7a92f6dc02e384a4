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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rqsvr/data.hpp"
#include "rqsvr/error.hpp"

using namespace rqsvr;
using namespace rqsvr::data;
using Catch::Matchers::ContainsSubstring;

namespace {

MillingDataset parse(const std::string &text) {
    std::istringstream in(text);
    return read_csv(in, "mem");
}

MillingRecord record(std::string tool, std::int64_t speed, double wear, double ae,
                     bool stable = false) {
    return {"A", std::move(tool), speed, wear, ae, stable};
}

} // namespace

TEST_CASE("CSV loading", "[data][csv]") {
    const auto d = parse("machine,tool,spindle_speed_rpm,wear_cm2,ae_lim_mm,fully_stable\n"
                         "A,T1,4000,0,2.5,false\n"
                         "A,T1,4050,12.5,3.25,false\n"
                         "B,T2,8000,263.725,5.44,true\n");
    REQUIRE(d.size() == 3);
    REQUIRE(d.records[0] == record("T1", 4000, 0.0, 2.5));
    REQUIRE(d.records[2].machine == "B");
    REQUIRE(d.records[2].fully_stable);
    REQUIRE(d.records[2].wear == 263.725);
    REQUIRE(d.warnings.empty());

    SECTION("columns in any order") {
        const auto e = parse("tool,machine,fully_stable,ae_lim_mm,wear_cm2,spindle_speed_rpm\n"
                             "T1,A,false,2.5,0,4000\n");
        REQUIRE(e.records[0] == d.records[0]);
    }
    SECTION("negative target is rejected at its row") {
        try {
            (void)parse("machine,tool,spindle_speed_rpm,wear_cm2,ae_lim_mm,fully_stable\n"
                        "A,T1,4000,0,2.5,false\n"
                        "A,T1,4050,0,-1,false\n");
            FAIL("expected a parse error");
        } catch (const ParseError &e) {
            REQUIRE(e.row() == 3);
            REQUIRE(e.column() == "ae_lim_mm");
        }
    }
    SECTION("non-numeric field") {
        try {
            (void)parse("machine,tool,spindle_speed_rpm,wear_cm2,ae_lim_mm,fully_stable\n"
                        "A,T1,fast,0,2.5,false\n");
            FAIL("expected a parse error");
        } catch (const ParseError &e) {
            REQUIRE(e.row() == 2);
            REQUIRE(e.column() == "spindle_speed_rpm");
        }
    }
    SECTION("missing column") {
        REQUIRE_THROWS_AS(parse("machine,tool,spindle_speed_rpm,wear_cm2,fully_stable\n"
                                "A,T1,4000,0,false\n"),
                          ParseError);
    }
    SECTION("bad boolean") {
        REQUIRE_THROWS_AS(parse("machine,tool,spindle_speed_rpm,wear_cm2,ae_lim_mm,fully_stable\n"
                                "A,T1,4000,0,2.5,maybe\n"),
                          ParseError);
    }
    SECTION("off-grid speed warns and keeps the record") {
        const auto e = parse("machine,tool,spindle_speed_rpm,wear_cm2,ae_lim_mm,fully_stable\n"
                             "A,T1,4025,0,2.5,false\n");
        REQUIRE(e.size() == 1);
        REQUIRE(e.records[0].spindle_speed == 4025);
        REQUIRE(e.warnings.size() == 1);
        REQUIRE_THAT(e.warnings[0], ContainsSubstring("4025"));
    }
    SECTION("missing file") {
        REQUIRE_THROWS_AS(load_csv("/nonexistent/path.csv"), ParseError);
    }
}

TEST_CASE("CSV round trip", "[data][csv]") {
    auto config = default_synth_config();
    const auto d = synthesize(config, 3);
    const std::string text = to_csv(d);
    REQUIRE(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    const auto back = parse(text);
    REQUIRE(back.records == d.records);
    REQUIRE(to_csv(back) == text);

    const auto path = std::filesystem::temp_directory_path() / "rqsvr_test_roundtrip.csv";
    {
        std::ofstream out(path);
        write_csv(out, d);
    }
    const auto loaded = load_csv(path.string());
    REQUIRE(loaded.records == d.records);
    REQUIRE(loaded.provenance == "file:" + path.string());
    std::filesystem::remove(path);
}

TEST_CASE("drop_stable", "[data]") {
    MillingDataset d;
    d.records = {record("T1", 4000, 0.0, 2.0), record("T1", 4050, 0.0, 6.0)};
    const auto kept = drop_stable(d, 5.44);
    REQUIRE(kept.size() == 1);
    REQUIRE(kept.records[0] == d.records[0]);

    REQUIRE(drop_stable(MillingDataset{}, 5.44).empty());

    MillingDataset none;
    none.records = {record("T1", 4000, 0.0, 2.0), record("T2", 4050, 1.0, 3.0)};
    REQUIRE(drop_stable(none, 5.44).records == none.records);

    MillingDataset flagged;
    flagged.records = {record("T1", 4000, 0.0, 2.0, true), record("T1", 4050, 0.0, 3.0)};
    REQUIRE(drop_stable(flagged, 5.44).size() == 1);
    REQUIRE_THROWS_AS(drop_stable(flagged, 0.0), ArgumentError);
}

TEST_CASE("leave one tool out", "[data]") {
    MillingDataset d;
    d.records = {record("T1", 4000, 0.0, 2.0), record("T2", 4000, 0.0, 2.5),
                 record("T3", 4000, 0.0, 3.0), record("T2", 4050, 0.0, 2.7)};
    REQUIRE(tools(d) == std::vector<std::string>{"T1", "T2", "T3"});
    const auto [train, test] = leave_one_tool_out(d, "T2");
    REQUIRE(tools(train) == std::vector<std::string>{"T1", "T3"});
    REQUIRE(test.size() == 2);
    REQUIRE(train.size() + test.size() == d.size());
    REQUIRE_THROWS_AS(leave_one_tool_out(d, "T9"), ArgumentError);

    MillingDataset single;
    single.records = {record("T1", 4000, 0.0, 2.0), record("T1", 4050, 0.0, 2.5)};
    REQUIRE_THROWS_AS(leave_one_tool_out(single, "T1"), ArgumentError);
}

TEST_CASE("synthetic generator", "[data][synth]") {
    const auto config = default_synth_config();
    REQUIRE(config.speeds.count() == 81);
    REQUIRE(config.wear_levels.size() == 5);
    REQUIRE(config.wear_levels.front() == 0.0);
    REQUIRE(config.wear_levels.back() == 263.725);
    REQUIRE(config.truth.alpha == features::kReferenceAlphaB);

    const auto d = synthesize(config, 42);
    REQUIRE(d.size() == 1215);
    REQUIRE(tools(d) == std::vector<std::string>{"T1", "T2", "T3"});
    for (const auto &r : d.records) {
        REQUIRE(config.speeds.contains(r.spindle_speed));
        REQUIRE(r.ae_lim >= config.clip_lo);
        REQUIRE(r.ae_lim <= config.clip_hi);
    }
    REQUIRE(synthesize(config, 42).records == d.records);
    REQUIRE(synthesize(config, 43).records != d.records);
    REQUIRE(synthesize(config, 42).provenance == d.provenance);
    REQUIRE_THAT(d.provenance, ContainsSubstring("synthetic:"));

    SECTION("noiseless, unclipped output is reproduced by the ground truth") {
        auto c = config;
        c.noise_std = 0.0;
        c.clip = false;
        const auto clean = synthesize(c, 1);
        const auto truth = resolve_ground_truth(c);
        // Targets carry 9 significant digits.
        REQUIRE(features::model_mse(truth, to_regression_set(clean)) <= 1e-15);
        double lo = 1e300;
        double hi = -1e300;
        for (const auto &r : clean.records) {
            lo = std::min(lo, r.ae_lim);
            hi = std::max(hi, r.ae_lim);
        }
        REQUIRE(std::abs(lo - c.clip_lo) <= 1e-8);
        REQUIRE(std::abs(hi - c.clip_hi) <= 1e-8);
    }
    SECTION("stability flag follows the pre-clip response") {
        for (const auto &r : d.records) {
            if (r.fully_stable) {
                REQUIRE(r.ae_lim == config.clip_hi);
            }
        }
    }
    SECTION("tool offset moves only that tool") {
        auto c = config;
        c.noise_std = 0.0;
        const auto base = synthesize(c, 5);
        c.tool_offset["T2"] = -0.5;
        const auto shifted = synthesize(c, 5);
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base.records[i].tool == "T2") {
                REQUIRE(shifted.records[i].ae_lim <= base.records[i].ae_lim);
            } else {
                REQUIRE(shifted.records[i] == base.records[i]);
            }
        }
    }
    SECTION("invalid configurations") {
        auto c = config;
        c.speeds.step = 70;
        REQUIRE_THROWS_AS(synthesize(c, 1), ArgumentError);
        c = config;
        c.noise_std = -1.0;
        REQUIRE_THROWS_AS(synthesize(c, 1), ArgumentError);
        c = config;
        c.clip_lo = 6.0;
        REQUIRE_THROWS_AS(synthesize(c, 1), ArgumentError);
        c = config;
        c.tool_offset["T7"] = 1.0;
        REQUIRE_THROWS_AS(synthesize(c, 1), ArgumentError);
    }
}

TEST_CASE("regression set conversion", "[data]") {
    MillingDataset d;
    d.records = {record("T1", 4000, 1.5, 2.0), record("T2", 8000, 0.0, 2.5)};
    const auto r = to_regression_set(d);
    REQUIRE(r.size() == 2);
    REQUIRE(r.x[0] == features::Point{4000.0, 1.5});
    REQUIRE(r.y[1] == 2.5);
}

TEST_CASE("fold assignment sizes", "[data][splits]") {
    const auto ten = kfold_splits(10, 10, 3);
    REQUIRE(std::set<std::size_t>(ten.begin(), ten.end()).size() == 10);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = kfold_splits(37, 4, seed);
        std::vector<std::size_t> sizes(4, 0);
        for (auto v : f) {
            ++sizes[v];
        }
        const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
        REQUIRE(*mx - *mn <= 1);
    }
}
