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
// Command-line entry point: parses flags into an ExperimentConfig and runs
// one subcommand.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rqsvr/cli.hpp"
#include "rqsvr/error.hpp"

namespace {

using rqsvr::cli::ExperimentConfig;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> dataset, features, model, input;
    std::optional<std::uint64_t> shots;
    std::optional<std::size_t> repetitions, k, patience, max_trials, tools;
    std::optional<std::vector<double>> c_grid, noise_wear;
    std::optional<double> C, epsilon, restart_std, tol, ae_max, noise_std;
    std::optional<std::string> mode;
    std::optional<std::int64_t> speed_step;
    std::optional<std::string> perturb_tool;
    std::optional<double> perturb_offset;
    bool held_out = false;
    bool no_clip = false;
    bool timing = false;
    std::string config;
};

template <class T, class U>
void overlay(const std::optional<T> &src, U &dst) {
    if (src) {
        dst = *src;
    }
}

ExperimentConfig build_config(const Overrides &o) {
    ExperimentConfig cfg;
    if (!o.config.empty()) {
        rqsvr::cli::merge_config(rqsvr::io::load_json(o.config), cfg);
    }
    overlay(o.seed, cfg.seed);
    overlay(o.out, cfg.out);
    overlay(o.dataset, cfg.dataset);
    overlay(o.features, cfg.features);
    overlay(o.model, cfg.model);
    overlay(o.input, cfg.input);
    overlay(o.shots, cfg.shots);
    overlay(o.repetitions, cfg.repetitions);
    overlay(o.k, cfg.k);
    overlay(o.patience, cfg.patience);
    overlay(o.max_trials, cfg.max_trials);
    overlay(o.c_grid, cfg.c_grid);
    overlay(o.C, cfg.C);
    overlay(o.epsilon, cfg.epsilon);
    overlay(o.restart_std, cfg.restart_std);
    overlay(o.tol, cfg.tol);
    overlay(o.ae_max, cfg.ae_max);
    overlay(o.speed_step, cfg.noise_speed_step);
    overlay(o.noise_wear, cfg.noise_wear_levels);
    overlay(o.noise_std, cfg.synth.noise_std);
    overlay(o.tools, cfg.synth.num_tools);
    if (o.mode) {
        rqsvr::cli::merge_config(rqsvr::io::Json{{"mode", *o.mode}}, cfg);
    }
    if (o.perturb_tool) {
        cfg.synth.tool_offset[*o.perturb_tool] = o.perturb_offset.value_or(1.0);
    }
    if (o.held_out) {
        cfg.held_out = true;
    }
    if (o.no_clip) {
        cfg.synth.clip = false;
    }
    cfg.timing = o.timing;
    return cfg;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum-circuit support vector regression for milling stability"};
    app.require_subcommand(1);
    Overrides o;
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--config", o.config, "JSON config or run report; flags override it")
        ->check(CLI::ExistingFile);
    app.add_flag("--timing", o.timing, "Record wall-clock time in the report");

    auto *synth = app.add_subcommand("synth", "Generate a synthetic milling dataset");
    synth->add_option("--noise-std", o.noise_std, "Gaussian noise on ae_lim (mm)");
    synth->add_option("--tools", o.tools, "Number of tools");
    synth->add_option("--perturb-tool", o.perturb_tool, "Tool id to offset, e.g. T3");
    synth->add_option("--perturb-offset", o.perturb_offset, "Offset in mm (default 1)");
    synth->add_flag("--no-clip", o.no_clip, "Disable clipping to the target range");

    auto *fit = app.add_subcommand("fit-features", "Fit the cosine feature parameters");
    fit->add_option("--dataset", o.dataset, "Dataset CSV");
    fit->add_option("--patience", o.patience, "Trials without improvement before stopping");
    fit->add_option("--max-trials", o.max_trials, "Hard cap on restart trials (0 = none)");
    fit->add_option("--restart-std", o.restart_std, "Std of restart perturbations");
    fit->add_option("--ae-max", o.ae_max, "Drop records above this stability limit");

    auto *cv = app.add_subcommand("cv", "Grid search over C with k-fold cross-validation");
    cv->add_option("--dataset", o.dataset, "Dataset CSV");
    cv->add_option("--features", o.features, "Feature parameter JSON");
    cv->add_option("--k", o.k, "Number of folds");
    cv->add_option("--epsilon", o.epsilon, "Tube width");
    cv->add_option("--c-grid", o.c_grid, "Values of C")->delimiter(',');
    cv->add_option("--ae-max", o.ae_max, "Drop records above this stability limit");

    auto *train = app.add_subcommand("train", "Train the regression model");
    train->add_option("--dataset", o.dataset, "Dataset CSV");
    train->add_option("--features", o.features, "Feature parameter JSON");
    train->add_option("--C", o.C, "Box constraint");
    train->add_option("--epsilon", o.epsilon, "Tube width");
    train->add_option("--ae-max", o.ae_max, "Drop records above this stability limit");

    auto *predict = app.add_subcommand("predict", "Predict with the circuit estimator");
    predict->add_option("--model", o.model, "Model JSON");
    predict->add_option("--dataset", o.dataset, "Dataset CSV");
    predict->add_option("--mode", o.mode, "exact or shots")
        ->check(CLI::IsMember({"exact", "shots"}));
    predict->add_option("--shots", o.shots, "Shots per prediction");
    predict->add_flag("--held-out", o.held_out, "Predict each fold with a model trained without it");
    predict->add_option("--k", o.k, "Folds for --held-out");

    auto *noise = app.add_subcommand("noise-study", "Repeat shot-based predictions on a grid");
    noise->add_option("--model", o.model, "Model JSON");
    noise->add_option("--shots", o.shots, "Shots per prediction");
    noise->add_option("--repetitions", o.repetitions, "Repetitions per grid point");
    noise->add_option("--speed-step", o.speed_step, "Spindle speed increment (RPM)");
    noise->add_option("--wear", o.noise_wear, "Wear levels (cm^2)")->delimiter(',');

    auto *tool = app.add_subcommand("tool-study", "Leave-one-tool-out evaluation");
    tool->add_option("--dataset", o.dataset, "Dataset CSV");
    tool->add_option("--C", o.C, "Box constraint");
    tool->add_option("--epsilon", o.epsilon, "Tube width");
    tool->add_option("--patience", o.patience, "Feature-fit patience");
    tool->add_option("--max-trials", o.max_trials, "Feature-fit trial cap (0 = none)");
    tool->add_option("--mode", o.mode, "exact or shots")
        ->check(CLI::IsMember({"exact", "shots"}));
    tool->add_option("--shots", o.shots, "Shots per prediction");
    tool->add_option("--ae-max", o.ae_max, "Drop records above this stability limit");

    auto *plot = app.add_subcommand("export-plot", "Long-format plot data");
    plot->add_option("--input", o.input, "Predictions or noise-study CSV");

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const ExperimentConfig cfg = build_config(o);
        const auto result = rqsvr::cli::run_command(command, cfg);
        rqsvr::cli::write_artifacts(result, cfg.out);
        for (const auto &a : result.artifacts) {
            std::cout << cfg.out << "/" << a.name << "\n";
        }
        std::cout << cfg.out << "/" << result.report_name() << "\n";
    } catch (const rqsvr::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
