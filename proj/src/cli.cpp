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
#include "rqsvr/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <numeric>
#include <sstream>

#include "rqsvr/error.hpp"
#include "rqsvr/rng.hpp"
#include "rqsvr/splits.hpp"

namespace rqsvr::cli {

namespace {

namespace fs = std::filesystem;
using circuit::EstimationMode;
using io::Json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string mode_name(EstimationMode::Kind kind) {
    return kind == EstimationMode::Kind::Exact ? "exact" : "shots";
}

EstimationMode::Kind parse_mode(const std::string &s) {
    if (s == "exact") {
        return EstimationMode::Kind::Exact;
    }
    if (s == "shots") {
        return EstimationMode::Kind::Shots;
    }
    throw ArgumentError("mode must be 'exact' or 'shots', got '" + s + "'");
}

EstimationMode mode_for(const ExperimentConfig &cfg, std::uint64_t seed) {
    return cfg.mode == EstimationMode::Kind::Exact ? EstimationMode::exact()
                                                  : EstimationMode::sampled(cfg.shots, seed);
}

Json base_report(const std::string &command, const ExperimentConfig &cfg) {
    Json r;
    r["command"] = command;
    r["config"] = to_json(cfg);
    return r;
}

CommandResult finish(const std::string &command, Json report,
                     std::vector<Artifact> artifacts) {
    CommandResult out;
    out.command = command;
    out.artifacts = std::move(artifacts);
    Json names = Json::array();
    for (const auto &a : out.artifacts) {
        names.push_back(a.name);
    }
    names.push_back(out.report_name());
    report["artifacts"] = std::move(names);
    out.report = io::document("run_report", std::move(report));
    return out;
}

data::MillingDataset training_rows(const ExperimentConfig &cfg,
                                   const data::MillingDataset &dataset) {
    auto kept = data::drop_stable(dataset, cfg.ae_max);
    if (kept.empty()) {
        throw ValidationError("no records left after dropping stable processes (ae_max = " +
                              fmt(cfg.ae_max) + ")");
    }
    return kept;
}

Json tool_list(const data::MillingDataset &d) { return data::tools(d); }

std::vector<double> classical_predictions(const svr::FeatureDataset &rows,
                                          const svr::SvrFit &fit) {
    const Eigen::VectorXd pred = (rows.X * fit.w).array() + fit.b;
    return {pred.data(), pred.data() + pred.size()};
}

double mse(const std::vector<double> &pred, const std::vector<double> &y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += (pred[i] - y[i]) * (pred[i] - y[i]);
    }
    return s / static_cast<double>(y.size());
}

struct RowPrediction {
    double value = 0.0;
    double classical = 0.0;
    double std_error = 0.0;
    double theoretical_std = 0.0;
};

RowPrediction predict_row(const circuit::RqsvrModel &model, const features::Point &x,
                          const EstimationMode &mode) {
    if (!model.trained()) {
        throw StateError("predict: model is not trained");
    }
    const auto &fp = *model.feature_params;
    const auto phi = features::phi_cos(fp.norm.normalize(x), fp.alpha);
    RowPrediction out;
    out.classical = model.b;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        out.classical += model.w[j] * phi[j];
    }
    const bool phi_zero = std::ranges::all_of(phi, [](double v) { return v == 0.0; });
    if (model.w_norm() == 0.0 || phi_zero) {
        out.value = model.b;
        return out;
    }
    const auto built = circuit::build_rqsvr_circuit(model.w, phi);
    const auto probs = statevec::probabilities(circuit::simulate(built));
    const auto est = circuit::estimate_from_distribution(built, probs, mode);
    out.value = est.value + model.b;
    out.std_error = est.std_error;
    if (mode.kind == EstimationMode::Kind::Shots) {
        out.theoretical_std = circuit::theoretical_stddev(built, probs, mode.shots);
    }
    return out;
}

std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

template <class T>
void read_key(const Json &j, const char *key, T &dst) {
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

} // namespace

void ExperimentConfig::validate() const {
    if (shots == 0) {
        throw ArgumentError("shots must be >= 1");
    }
    if (repetitions < 2) {
        throw ArgumentError("repetitions must be >= 2");
    }
    if (c_grid.empty()) {
        throw ArgumentError("C grid must not be empty");
    }
    for (const double c : c_grid) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ArgumentError("C grid values must be finite and > 0");
        }
    }
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw ArgumentError("C must be finite and > 0");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ArgumentError("epsilon must be finite and >= 0");
    }
    if (k < 2) {
        throw ArgumentError("k must be >= 2");
    }
    if (patience < 1) {
        throw ArgumentError("patience must be >= 1");
    }
    if (!(restart_std > 0.0) || !std::isfinite(restart_std)) {
        throw ArgumentError("restart std must be finite and > 0");
    }
    if (!(tol > 0.0)) {
        throw ArgumentError("tolerance must be > 0");
    }
    if (!(ae_max > 0.0)) {
        throw ArgumentError("ae_max must be > 0");
    }
    if (noise_speed_step <= 0) {
        throw ArgumentError("noise speed step must be > 0");
    }
    synth.validate();
}

Json to_json(const ExperimentConfig &cfg) {
    Json j;
    j["seed"] = cfg.seed;
    j["dataset"] = cfg.dataset;
    j["features"] = cfg.features;
    j["model"] = cfg.model;
    j["input"] = cfg.input;
    j["shots"] = cfg.shots;
    j["repetitions"] = cfg.repetitions;
    j["c_grid"] = cfg.c_grid;
    j["C"] = cfg.C;
    j["epsilon"] = cfg.epsilon;
    j["k"] = cfg.k;
    j["patience"] = cfg.patience;
    j["max_trials"] = cfg.max_trials;
    j["restart_std"] = cfg.restart_std;
    j["tol"] = cfg.tol;
    j["mode"] = mode_name(cfg.mode);
    j["held_out"] = cfg.held_out;
    j["ae_max"] = cfg.ae_max;
    j["noise_speed_step"] = cfg.noise_speed_step;
    j["noise_wear_levels"] = cfg.noise_wear_levels;
    j["synth"] = io::to_json(cfg.synth);
    return j;
}

void merge_config(const Json &doc, ExperimentConfig &cfg) {
    const Json *j = &doc;
    if (doc.is_object() && doc.contains("kind") && doc.at("kind") == "run_report") {
        io::check_document(doc, "run_report");
        if (!doc.contains("config")) {
            throw ValidationError("run report has no config");
        }
        j = &doc.at("config");
    }
    if (!j->is_object()) {
        throw ValidationError("config: expected a JSON object");
    }
    for (const auto &[key, value] : j->items()) {
        if (key == "seed") {
            read_key(*j, "seed", cfg.seed);
        } else if (key == "dataset") {
            read_key(*j, "dataset", cfg.dataset);
        } else if (key == "features") {
            read_key(*j, "features", cfg.features);
        } else if (key == "model") {
            read_key(*j, "model", cfg.model);
        } else if (key == "input") {
            read_key(*j, "input", cfg.input);
        } else if (key == "shots") {
            read_key(*j, "shots", cfg.shots);
        } else if (key == "repetitions") {
            read_key(*j, "repetitions", cfg.repetitions);
        } else if (key == "c_grid") {
            read_key(*j, "c_grid", cfg.c_grid);
        } else if (key == "C") {
            read_key(*j, "C", cfg.C);
        } else if (key == "epsilon") {
            read_key(*j, "epsilon", cfg.epsilon);
        } else if (key == "k") {
            read_key(*j, "k", cfg.k);
        } else if (key == "patience") {
            read_key(*j, "patience", cfg.patience);
        } else if (key == "max_trials") {
            read_key(*j, "max_trials", cfg.max_trials);
        } else if (key == "restart_std") {
            read_key(*j, "restart_std", cfg.restart_std);
        } else if (key == "tol") {
            read_key(*j, "tol", cfg.tol);
        } else if (key == "mode") {
            std::string m;
            read_key(*j, "mode", m);
            cfg.mode = parse_mode(m);
        } else if (key == "held_out") {
            read_key(*j, "held_out", cfg.held_out);
        } else if (key == "ae_max") {
            read_key(*j, "ae_max", cfg.ae_max);
        } else if (key == "noise_speed_step") {
            read_key(*j, "noise_speed_step", cfg.noise_speed_step);
        } else if (key == "noise_wear_levels") {
            read_key(*j, "noise_wear_levels", cfg.noise_wear_levels);
        } else if (key == "synth") {
            io::merge_synth_config(value, cfg.synth);
        } else {
            throw ValidationError("config: unknown key '" + key + "'");
        }
    }
}

const Artifact &CommandResult::artifact(const std::string &name) const {
    for (const auto &a : artifacts) {
        if (a.name == name) {
            return a;
        }
    }
    throw ArgumentError(command + ": no artifact named '" + name + "'");
}

std::string CommandResult::report_name() const {
    std::string name = command;
    std::replace(name.begin(), name.end(), '-', '_');
    return name + "_report.json";
}

CommandResult cmd_synth(const ExperimentConfig &cfg) {
    cfg.validate();
    const auto dataset = data::synthesize(cfg.synth, cfg.seed);
    const auto truth = data::resolve_ground_truth(cfg.synth);
    const std::size_t stable = static_cast<std::size_t>(std::ranges::count_if(
        dataset.records, [](const data::MillingRecord &r) { return r.fully_stable; }));

    Json report = base_report("synth", cfg);
    report["provenance"] = dataset.provenance;
    report["metrics"] = {{"rows", dataset.size()},
                         {"stable_rows", stable},
                         {"speeds", cfg.synth.speeds.count()},
                         {"wear_levels", cfg.synth.wear_levels.size()},
                         {"tools", tool_list(dataset)},
                         {"generator_mse",
                          features::model_mse(truth, data::to_regression_set(dataset))}};
    report["ground_truth"] = io::to_json(truth);
    return finish("synth", std::move(report), {{"dataset.csv", data::to_csv(dataset)}});
}

CommandResult cmd_fit_features(const ExperimentConfig &cfg,
                               const data::MillingDataset &dataset) {
    cfg.validate();
    const auto train = training_rows(cfg, dataset);
    const auto set = data::to_regression_set(train);
    features::FitOptions opts;
    opts.seed = derive_seed(cfg.seed, "restarts");
    opts.patience = cfg.patience;
    opts.restart_std = cfg.restart_std;
    opts.max_trials = cfg.max_trials;
    const auto fit = features::fit_feature_params(set, opts);
    const double baseline = features::polynomial_baseline_mse(set);

    Json body = io::to_json(fit.params);
    body["training_rows"] = train.size();
    body["training_tools"] = tool_list(train);
    body["provenance"] = dataset.provenance;

    Json report = base_report("fit-features", cfg);
    report["provenance"] = dataset.provenance;
    report["metrics"] = {{"mse", fit.params.fit_mse},
                         {"baseline_mse", baseline},
                         {"trials", fit.trials},
                         {"best_trial", fit.best_trial},
                         {"patience", cfg.patience},
                         {"restart_std", cfg.restart_std},
                         {"training_rows", train.size()},
                         {"alpha", fit.params.alpha}};
    return finish("fit-features", std::move(report),
                  {{"features.json", io::dump(io::document("feature_params", body))}});
}

CommandResult cmd_cv(const ExperimentConfig &cfg, const data::MillingDataset &dataset,
                     const features::FeatureParams &params) {
    cfg.validate();
    const auto train = training_rows(cfg, dataset);
    const auto rows = features::build_feature_dataset(data::to_regression_set(train), params);
    const auto cv = svr::grid_search_cv(rows, cfg.c_grid, cfg.k, cfg.epsilon,
                                        derive_seed(cfg.seed, "shuffle"), cfg.tol);

    Json grid = Json::array();
    Json means = Json::array();
    std::size_t fold_values = 0;
    bool same_hash = true;
    for (const auto &e : cv.entries) {
        grid.push_back(e.C);
        means.push_back(e.mean_mse);
        fold_values += e.fold_mse.size();
        same_hash = same_hash && e.fold_hash == cv.entries.front().fold_hash;
    }
    Json report = base_report("cv", cfg);
    report["provenance"] = dataset.provenance;
    report["metrics"] = {{"grid", grid},
                         {"mean_mse", means},
                         {"best_C", cv.best_C},
                         {"best_mean_mse", cv.entries[cv.best_index].mean_mse},
                         {"k", cv.k},
                         {"fold_mse_count", fold_values},
                         {"identical_fold_hash", same_hash},
                         {"rows", rows.size()}};
    return finish("cv", std::move(report),
                  {{"cv.json", io::dump(io::document("cv_report", io::to_json(cv)))}});
}

CommandResult cmd_train(const ExperimentConfig &cfg, const data::MillingDataset &dataset,
                        const features::FeatureParams &params) {
    cfg.validate();
    const auto train = training_rows(cfg, dataset);
    const auto rows = features::build_feature_dataset(data::to_regression_set(train), params);
    const svr::SvrHyperparams hp{cfg.C, cfg.epsilon};
    const auto fit = svr::fit_epsilon_svr(rows.X, rows.y, hp, cfg.tol);
    const auto model = circuit::make_model(fit, hp, params);
    const auto pred = classical_predictions(rows, fit);
    const std::vector<double> y(rows.y.data(), rows.y.data() + rows.y.size());
    const auto support = static_cast<std::size_t>(
        (fit.dual_coef.array().abs() > 1e-12 * hp.C).count());

    Json report = base_report("train", cfg);
    report["provenance"] = dataset.provenance;
    report["metrics"] = {{"train_mse", mse(pred, y)},
                         {"rows", rows.size()},
                         {"support_vectors", support},
                         {"iterations", fit.iterations},
                         {"kkt_violation", fit.kkt_violation},
                         {"dual_objective", fit.objective},
                         {"C", hp.C},
                         {"epsilon", hp.epsilon}};
    return finish("train", std::move(report),
                  {{"model.json", io::dump(io::document("model", io::to_json(model)))}});
}

CommandResult cmd_predict(const ExperimentConfig &cfg, const circuit::RqsvrModel &model,
                          const data::MillingDataset &dataset) {
    cfg.validate();
    if (!model.trained()) {
        throw StateError("predict: model is not trained");
    }
    if (dataset.empty()) {
        throw ValidationError("predict: empty dataset");
    }
    const auto set = data::to_regression_set(dataset);
    const std::size_t n = set.size();

    std::vector<std::size_t> folds(n, 0);
    std::vector<circuit::RqsvrModel> fold_models{model};
    if (cfg.held_out) {
        folds = data::kfold_splits(n, cfg.k, derive_seed(cfg.seed, "shuffle"));
        const auto rows = features::build_feature_dataset(set, *model.feature_params);
        fold_models.clear();
        for (std::size_t f = 0; f < cfg.k; ++f) {
            std::vector<std::size_t> in;
            for (std::size_t i = 0; i < n; ++i) {
                if (folds[i] != f) {
                    in.push_back(i);
                }
            }
            const auto sub = rows.subset(in);
            const auto fit = svr::fit_epsilon_svr(sub.X, sub.y, model.hyperparams, cfg.tol);
            fold_models.push_back(
                circuit::make_model(fit, model.hyperparams, *model.feature_params));
        }
    }

    const std::uint64_t shot_seed = derive_seed(cfg.seed, "shots");
    std::vector<RowPrediction> preds(n);
    for (std::size_t i = 0; i < n; ++i) {
        preds[i] = predict_row(fold_models[folds[i]], set.x[i],
                               mode_for(cfg, derive_seed(shot_seed, std::uint64_t{i})));
    }

    std::ostringstream csv;
    csv << "machine,tool,spindle_speed_rpm,wear_cm2,fold,actual,predicted,std_error,"
           "theoretical_std,classical,sign\n";
    double sq = 0.0;
    double sq_classical = 0.0;
    double var_sum = 0.0;
    double se_terms = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto &r = dataset.records[i];
        const auto &p = preds[i];
        csv << r.machine << ',' << r.tool << ',' << r.spindle_speed << ',' << fmt(r.wear)
            << ',' << (cfg.held_out ? std::to_string(folds[i]) : std::string("-1")) << ','
            << fmt(r.ae_lim) << ',' << fmt(p.value) << ',' << fmt(p.std_error) << ','
            << fmt(p.theoretical_std) << ',' << fmt(p.classical) << ','
            << (p.value >= 0.0 ? 1 : -1) << '\n';
        const double resid = p.classical - set.y[i];
        const double var = p.theoretical_std * p.theoretical_std;
        sq += (p.value - set.y[i]) * (p.value - set.y[i]);
        sq_classical += resid * resid;
        var_sum += var;
        se_terms += 4.0 * resid * resid * var + 2.0 * var * var;
    }
    const double dn = static_cast<double>(n);

    Json report = base_report("predict", cfg);
    report["provenance"] = dataset.provenance;
    report["metrics"] = {{"rows", n},
                         {"mode", mode_name(cfg.mode)},
                         {"shots", cfg.mode == EstimationMode::Kind::Shots ? cfg.shots : 0},
                         {"held_out", cfg.held_out},
                         {"mse", sq / dn},
                         {"classical_mse", sq_classical / dn},
                         {"mean_shot_variance", var_sum / dn},
                         {"mse_standard_error", std::sqrt(se_terms) / dn}};
    return finish("predict", std::move(report), {{"predictions.csv", csv.str()}});
}

CommandResult cmd_noise_study(const ExperimentConfig &cfg, const circuit::RqsvrModel &model) {
    cfg.validate();
    if (!model.trained()) {
        throw StateError("noise-study: model is not trained");
    }
    const auto &fp = *model.feature_params;
    const auto s_lo = static_cast<std::int64_t>(std::llround(fp.norm.min[0]));
    const auto s_hi = static_cast<std::int64_t>(std::llround(fp.norm.min[0] + fp.norm.range[0]));
    std::vector<double> wear = cfg.noise_wear_levels;
    if (wear.empty()) {
        wear = {fp.norm.min[1], fp.norm.min[1] + 0.5 * fp.norm.range[1],
                fp.norm.min[1] + fp.norm.range[1]};
    }

    const std::uint64_t base = derive_seed(cfg.seed, "noise");
    std::ostringstream csv;
    csv << "spindle_speed_rpm,wear_cm2,exact,mean,std,theoretical_std\n";
    std::size_t point = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (const double v : wear) {
        for (std::int64_t s = s_lo; s <= s_hi; s += cfg.noise_speed_step, ++point) {
            const features::Point x{static_cast<double>(s), v};
            const auto phi = features::phi_cos(fp.norm.normalize(x), fp.alpha);
            const bool phi_zero =
                std::ranges::all_of(phi, [](double e) { return e == 0.0; });
            double exact = model.b;
            double mean = model.b;
            double sd = 0.0;
            double theory = 0.0;
            if (model.w_norm() > 0.0 && !phi_zero) {
                const auto built = circuit::build_rqsvr_circuit(model.w, phi);
                const auto probs = statevec::probabilities(circuit::simulate(built));
                exact = circuit::reconstruct(built, probs) + model.b;
                theory = circuit::theoretical_stddev(built, probs, cfg.shots);
                const std::uint64_t point_seed = derive_seed(base, std::uint64_t{point});
                std::vector<double> values(cfg.repetitions);
                for (std::size_t r = 0; r < cfg.repetitions; ++r) {
                    const auto mode = EstimationMode::sampled(
                        cfg.shots, derive_seed(point_seed, std::uint64_t{r}));
                    values[r] = circuit::estimate_from_distribution(built, probs, mode).value +
                                model.b;
                }
                mean = std::accumulate(values.begin(), values.end(), 0.0) /
                       static_cast<double>(values.size());
                double ss = 0.0;
                for (const double e : values) {
                    ss += (e - mean) * (e - mean);
                }
                sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
                if (theory > 0.0) {
                    min_ratio = std::min(min_ratio, sd / theory);
                    max_ratio = std::max(max_ratio, sd / theory);
                }
            }
            csv << s << ',' << fmt(v) << ',' << fmt(exact) << ',' << fmt(mean) << ','
                << fmt(sd) << ',' << fmt(theory) << '\n';
        }
    }

    Json report = base_report("noise-study", cfg);
    report["metrics"] = {{"points", point},
                         {"repetitions", cfg.repetitions},
                         {"shots", cfg.shots},
                         {"wear_levels", wear},
                         {"min_std_ratio", std::isfinite(min_ratio) ? min_ratio : 0.0},
                         {"max_std_ratio", max_ratio}};
    return finish("noise-study", std::move(report), {{"noise.csv", csv.str()}});
}

CommandResult cmd_tool_study(const ExperimentConfig &cfg, const data::MillingDataset &dataset) {
    cfg.validate();
    const auto all = training_rows(cfg, dataset);
    const auto ids = data::tools(all);
    if (ids.size() < 2) {
        throw ValidationError("tool-study: need at least two tools, got " +
                              std::to_string(ids.size()));
    }
    const svr::SvrHyperparams hp{cfg.C, cfg.epsilon};

    Json per_tool = Json::array();
    std::ostringstream bars;
    bars << "tool,split,mse\n";
    std::string worst;
    double worst_mse = -1.0;
    for (const auto &tool : ids) {
        const auto [train, test] = data::leave_one_tool_out(all, tool);
        const auto train_set = data::to_regression_set(train);
        const auto test_set = data::to_regression_set(test);

        features::FitOptions opts;
        opts.seed = derive_seed(derive_seed(cfg.seed, "restarts"), "tool:" + tool);
        opts.patience = cfg.patience;
        opts.restart_std = cfg.restart_std;
        opts.max_trials = cfg.max_trials;
        const auto feature_fit = features::fit_feature_params(train_set, opts);

        const auto rows = features::build_feature_dataset(train_set, feature_fit.params);
        const auto fit = svr::fit_epsilon_svr(rows.X, rows.y, hp, cfg.tol);
        const auto model = circuit::make_model(fit, hp, feature_fit.params);

        const std::uint64_t shot_seed = derive_seed(derive_seed(cfg.seed, "shots"), "tool:" + tool);
        const auto split_mse = [&](const features::RegressionSet &set, std::uint64_t salt) {
            double s = 0.0;
            for (std::size_t i = 0; i < set.size(); ++i) {
                const auto mode =
                    mode_for(cfg, derive_seed(derive_seed(shot_seed, salt), std::uint64_t{i}));
                const double e = predict_row(model, set.x[i], mode).value - set.y[i];
                s += e * e;
            }
            return s / static_cast<double>(set.size());
        };
        const double train_mse = split_mse(train_set, 0);
        const double test_mse = split_mse(test_set, 1);
        if (test_mse > worst_mse) {
            worst_mse = test_mse;
            worst = tool;
        }
        per_tool.push_back({{"tool", tool},
                            {"training_tools", tool_list(train)},
                            {"train_rows", train.size()},
                            {"test_rows", test.size()},
                            {"feature_fit_mse", feature_fit.params.fit_mse},
                            {"feature_trials", feature_fit.trials},
                            {"alpha", feature_fit.params.alpha},
                            {"train_mse", train_mse},
                            {"test_mse", test_mse}});
        bars << tool << ",train," << fmt(train_mse) << '\n'
             << tool << ",test," << fmt(test_mse) << '\n';
    }

    Json body;
    body["provenance"] = dataset.provenance;
    body["C"] = hp.C;
    body["epsilon"] = hp.epsilon;
    body["mode"] = mode_name(cfg.mode);
    body["tools"] = per_tool;
    body["max_test_mse_tool"] = worst;

    Json report = base_report("tool-study", cfg);
    report["provenance"] = dataset.provenance;
    report["metrics"] = {{"pairs", per_tool.size()},
                         {"max_test_mse_tool", worst},
                         {"max_test_mse", worst_mse}};
    return finish("tool-study", std::move(report),
                  {{"tool_study.json", io::dump(io::document("tool_study", body))},
                   {"tool_bars.csv", bars.str()}});
}

CommandResult cmd_export_plot(const ExperimentConfig &cfg, const std::string &csv,
                              const std::string &source) {
    cfg.validate();
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(source, 1, "", "empty file");
    }
    const auto header = split_line(line);
    const auto col = [&](const std::string &name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw ParseError(source, 1, name, "missing column");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    struct Series {
        std::string name;
        std::size_t value;
        std::optional<std::size_t> std;
    };
    std::vector<Series> series;
    std::string kind;
    if (std::find(header.begin(), header.end(), "predicted") != header.end()) {
        kind = "predictions";
        series = {{"actual", col("actual"), std::nullopt},
                  {"predicted", col("predicted"), col("std_error")}};
    } else if (std::find(header.begin(), header.end(), "theoretical_std") != header.end()) {
        kind = "noise";
        series = {{"exact", col("exact"), std::nullopt}, {"mean", col("mean"), col("std")}};
    } else {
        throw ParseError(source, 1, "", "not a predictions or noise-study CSV");
    }
    const std::size_t speed = col("spindle_speed_rpm");
    const std::size_t wear = col("wear_cm2");

    std::vector<std::vector<std::string>> rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) {
            continue;
        }
        auto fields = split_line(line);
        if (fields.size() != header.size()) {
            throw ParseError(source, row, "", "wrong number of fields");
        }
        rows.push_back(std::move(fields));
    }

    std::ostringstream out;
    out << "series,spindle_speed_rpm,wear_cm2,value,std\n";
    for (const auto &s : series) {
        for (const auto &f : rows) {
            out << s.name << ',' << f[speed] << ',' << f[wear] << ',' << f[s.value] << ','
                << (s.std ? f[*s.std] : std::string("0")) << '\n';
        }
    }

    Json report = base_report("export-plot", cfg);
    Json names = Json::array();
    for (const auto &s : series) {
        names.push_back(s.name);
    }
    report["metrics"] = {{"source_kind", kind},
                         {"points", rows.size()},
                         {"series", names},
                         {"rows", rows.size() * series.size()}};
    return finish("export-plot", std::move(report), {{"plot.csv", out.str()}});
}

namespace {

const std::string &require(const std::string &value, const std::string &command,
                           const std::string &flag) {
    if (value.empty()) {
        throw ArgumentError(command + ": " + flag + " is required");
    }
    return value;
}

data::MillingDataset load_dataset(const ExperimentConfig &cfg, const std::string &command) {
    return data::load_csv(require(cfg.dataset, command, "--dataset"), cfg.synth.speeds);
}

features::FeatureParams load_features(const ExperimentConfig &cfg, const std::string &command) {
    const auto doc = io::load_json(require(cfg.features, command, "--features"));
    io::check_document(doc, "feature_params");
    return io::feature_params_from_json(doc);
}

circuit::RqsvrModel load_model(const ExperimentConfig &cfg, const std::string &command) {
    const auto doc = io::load_json(require(cfg.model, command, "--model"));
    io::check_document(doc, "model");
    return io::model_from_json(doc);
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path, 0, "", "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names{"synth",       "fit-features", "cv",
                                                "train",       "predict",      "noise-study",
                                                "tool-study",  "export-plot"};
    return names;
}

CommandResult run_command(const std::string &command, const ExperimentConfig &cfg) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings;
    const auto with_warnings = [&](data::MillingDataset d) {
        warnings = d.warnings;
        return d;
    };
    CommandResult result;
    if (command == "synth") {
        result = cmd_synth(cfg);
    } else if (command == "fit-features") {
        result = cmd_fit_features(cfg, with_warnings(load_dataset(cfg, command)));
    } else if (command == "cv") {
        const auto d = with_warnings(load_dataset(cfg, command));
        result = cmd_cv(cfg, d, load_features(cfg, command));
    } else if (command == "train") {
        const auto d = with_warnings(load_dataset(cfg, command));
        result = cmd_train(cfg, d, load_features(cfg, command));
    } else if (command == "predict") {
        const auto d = with_warnings(load_dataset(cfg, command));
        result = cmd_predict(cfg, load_model(cfg, command), d);
    } else if (command == "noise-study") {
        result = cmd_noise_study(cfg, load_model(cfg, command));
    } else if (command == "tool-study") {
        result = cmd_tool_study(cfg, with_warnings(load_dataset(cfg, command)));
    } else if (command == "export-plot") {
        const auto &path = require(cfg.input, command, "--input");
        result = cmd_export_plot(cfg, read_text(path), path);
    } else {
        throw ArgumentError("unknown command '" + command + "'");
    }
    if (!warnings.empty()) {
        result.report["warnings"] = warnings;
    }
    if (cfg.timing) {
        result.report["timing_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return result;
}

void write_artifacts(const CommandResult &result, const std::string &out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::vector<std::pair<fs::path, fs::path>> staged;
    std::vector<fs::path> committed;
    const auto stage = [&](const std::string &name, const std::string &content) {
        const fs::path final_path = dir / name;
        const fs::path tmp = dir / ("." + name + ".tmp");
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        staged.emplace_back(tmp, final_path);
        out << content;
        out.close();
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    };
    try {
        for (const auto &a : result.artifacts) {
            stage(a.name, a.content);
        }
        stage(result.report_name(), io::dump(result.report));
        for (const auto &[tmp, final_path] : staged) {
            if (fs::is_directory(final_path)) {
                throw std::runtime_error("cannot replace directory " + final_path.string());
            }
        }
        for (const auto &[tmp, final_path] : staged) {
            fs::rename(tmp, final_path);
            committed.push_back(final_path);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto &[tmp, final_path] : staged) {
            fs::remove(tmp, ec);
        }
        for (const auto &path : committed) {
            fs::remove(path, ec);
        }
        throw;
    }
}

} // namespace rqsvr::cli
