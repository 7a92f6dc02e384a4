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
#include "rqsvr/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rqsvr/error.hpp"

namespace rqsvr::circuit {

using statevec::GateOp;

namespace {

std::size_t ceil_log2(std::size_t d) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < d) {
        ++n;
    }
    return n;
}

void check_unit_interval(std::span<const double> v, const char *what) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!std::isfinite(v[j]) || std::abs(v[j]) > 1.0 + kUnitIntervalSlack) {
            throw ValidationError(std::string(what) + ": entry " + std::to_string(j) +
                                  " = " + std::to_string(v[j]) +
                                  " is outside [-1, 1]");
        }
    }
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (const double x : v) {
        if (!std::isfinite(x)) {
            throw ValidationError("non-finite vector entry");
        }
        m = std::max(m, std::abs(x));
    }
    return m;
}

/// H(a) [X(a) S_a X(a)] [S^dagger_a] H(a), where S_a is S controlled by a.
Circuit wrap_real_part(const Circuit &s, std::size_t ancilla) {
    Circuit out{s.num_qubits()};
    out.add(GateOp::h(ancilla));
    out.add(GateOp::x(ancilla));
    out.append(s.controlled(ancilla));
    out.add(GateOp::x(ancilla));
    out.append(s.adjoint().controlled(ancilla));
    out.add(GateOp::h(ancilla));
    return out;
}

/// Diagonal gate Delta(sqrt v+-) over [sign, index...] with the sign qubit as
/// most significant bit; each half is zero padded to 2^m so that padding
/// entries become exp(-i arccos 0) = -i.
GateOp sign_expanded_embedding(const CircuitLayout &layout, std::span<const double> v,
                               std::size_t sign_qubit) {
    const SignExpanded se = sign_expand(v);
    const std::size_t half = std::size_t{1} << layout.index_qubits;
    std::vector<double> roots(2 * half, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
        roots[j] = std::sqrt(se.minus[j]);
        roots[half + j] = std::sqrt(se.plus[j]);
    }
    DiagonalEmbedding emb = delta_embedding(roots);
    return GateOp::diagonal(layout.embedding_qubits(sign_qubit), std::move(emb.entries));
}

void check_layout_vector(const CircuitLayout &layout, std::span<const double> v,
                         const char *what) {
    if (v.size() != layout.feature_dim) {
        throw ArgumentError(std::string(what) + ": expected length " +
                            std::to_string(layout.feature_dim) + ", got " +
                            std::to_string(v.size()));
    }
}

} // namespace

std::vector<double> SignExpanded::concatenated() const {
    std::vector<double> out(minus);
    out.insert(out.end(), plus.begin(), plus.end());
    return out;
}

SignExpanded sign_expand(std::span<const double> v) {
    if (v.size() < 2) {
        throw ArgumentError("sign_expand: dimension must be > 1");
    }
    check_unit_interval(v, "sign_expand");
    SignExpanded out;
    out.minus.resize(v.size());
    out.plus.resize(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = std::clamp(v[j], -1.0, 1.0);
        out.plus[j] = std::max(0.0, x);
        out.minus[j] = -std::min(0.0, x);
    }
    return out;
}

DiagonalEmbedding delta_embedding(std::span<const double> v) {
    if (v.size() < 2) {
        throw ArgumentError("delta_embedding: dimension must be > 1");
    }
    check_unit_interval(v, "delta_embedding");
    DiagonalEmbedding out;
    out.source.assign(v.begin(), v.end());
    out.num_qubits = ceil_log2(v.size());
    out.entries.assign(std::size_t{1} << out.num_qubits, cplx{0.0, -1.0});
    for (std::size_t j = 0; j < v.size(); ++j) {
        out.entries[j] = std::polar(1.0, -std::acos(std::clamp(v[j], -1.0, 1.0)));
    }
    return out;
}

Circuit real_part_extractor(const Circuit &s) {
    const std::size_t n = s.num_qubits();
    std::vector<std::size_t> shift(n);
    for (std::size_t q = 0; q < n; ++q) {
        shift[q] = q + 1;
    }
    return wrap_real_part(s.embedded(n + 1, shift), 0);
}

Circuit real_part_extractor(std::span<const cplx> diagonal) {
    const std::size_t dim = diagonal.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw ArgumentError("real_part_extractor: diagonal length must be a power of "
                            "two >= 2");
    }
    const std::size_t n = ceil_log2(dim);
    std::vector<std::size_t> targets(n);
    for (std::size_t q = 0; q < n; ++q) {
        targets[q] = q;
    }
    Circuit s{n};
    s.add(GateOp::diagonal(std::move(targets), {diagonal.begin(), diagonal.end()}));
    return real_part_extractor(s);
}

std::vector<std::size_t> CircuitLayout::embedding_qubits(std::size_t sign_qubit) const {
    std::vector<std::size_t> qubits{sign_qubit};
    for (std::size_t k = 0; k < index_qubits; ++k) {
        qubits.push_back(index_qubit(k));
    }
    return qubits;
}

CircuitLayout make_layout(std::size_t feature_dim) {
    if (feature_dim < 2) {
        throw ArgumentError("feature dimension must be > 1");
    }
    CircuitLayout layout;
    layout.feature_dim = feature_dim;
    layout.index_qubits = ceil_log2(feature_dim);
    layout.total_qubits = layout.ancillas + layout.index_qubits + layout.sign_qubits;
    return layout;
}

StateVector initial_state(const CircuitLayout &layout) {
    StateVector state = statevec::init_state(layout.total_qubits, 0);
    for (std::size_t k = 0; k < layout.index_qubits; ++k) {
        statevec::apply_gate_inplace(state, GateOp::h(layout.index_qubit(k)));
    }
    return state;
}

Circuit weight_operator(const CircuitLayout &layout, std::span<const double> w) {
    check_layout_vector(layout, w, "weight_operator");
    const GateOp delta = sign_expanded_embedding(layout, w, layout.weight_sign_qubit());
    const std::size_t ctrl = CircuitLayout::weight_control();
    Circuit out{layout.total_qubits};
    out.add(GateOp::x(ctrl));
    out.add(delta.controlled(ctrl));
    out.add(GateOp::x(ctrl));
    out.add(delta.adjoint().controlled(ctrl));
    return out;
}

Circuit data_operator(const CircuitLayout &layout, std::span<const double> phi) {
    check_layout_vector(layout, phi, "data_operator");
    const GateOp delta = sign_expanded_embedding(layout, phi, layout.data_sign_qubit());
    Circuit s{layout.total_qubits};
    s.add(delta);
    return wrap_real_part(s, CircuitLayout::data_ancilla());
}

Circuit cw_operator(const CircuitLayout &layout, std::span<const double> w,
                    std::span<const double> phi) {
    check_layout_vector(layout, w, "cw_operator");
    check_layout_vector(layout, phi, "cw_operator");
    const double w_norm = inf_norm(w);
    const double phi_norm = inf_norm(phi);
    if (w_norm == 0.0 || phi_norm == 0.0) {
        throw DegenerateInputError("cw_operator: w and phi must have nonzero norm");
    }
    std::vector<double> w_hat(w.begin(), w.end());
    std::vector<double> phi_hat(phi.begin(), phi.end());
    for (auto &x : w_hat) {
        x /= w_norm;
    }
    for (auto &x : phi_hat) {
        x /= phi_norm;
    }
    // Matrix product W U: U acts first.
    Circuit s = data_operator(layout, phi_hat);
    s.append(weight_operator(layout, w_hat));
    return wrap_real_part(s, CircuitLayout::outer_ancilla());
}

RqsvrCircuit build_rqsvr_circuit(std::span<const double> w, std::span<const double> phi) {
    if (w.size() != phi.size()) {
        throw ArgumentError("build_rqsvr_circuit: w has length " +
                            std::to_string(w.size()) + ", phi has length " +
                            std::to_string(phi.size()));
    }
    const CircuitLayout layout = make_layout(w.size());

    RqsvrCircuit built{Circuit{layout.total_qubits}, layout, {}, 0.0, 0.0, 0.0};
    built.w_norm = inf_norm(w);
    built.phi_norm = inf_norm(phi);
    if (built.w_norm == 0.0 || built.phi_norm == 0.0) {
        throw DegenerateInputError("build_rqsvr_circuit: w and phi must have nonzero "
                                   "inf-norm");
    }
    built.circuit.add(GateOp::h(layout.weight_sign_qubit()));
    built.circuit.add(GateOp::h(layout.data_sign_qubit()));
    built.circuit.append(cw_operator(layout, w, phi));

    // Success-branch amplitudes are sqrt(w^{s_w}_j phi^{s_phi}_j) times the
    // uniform preparation amplitude 1 / sqrt(2^m * 2^2). Each real-part
    // extractor contributes (1/sqrt 2)^2 (S + S^dagger) = Re S, i.e. no factor.
    const double prep_states =
        static_cast<double>(std::size_t{1} << (layout.index_qubits + layout.sign_qubits));
    built.scale = prep_states * built.w_norm * built.phi_norm;

    const std::size_t q = layout.total_qubits;
    const std::size_t dim = std::size_t{1} << q;
    auto bit = [q](std::size_t i, std::size_t qubit) {
        return (i >> (q - 1 - qubit)) & 1U;
    };
    built.labels.assign(dim, OutcomeLabel::Discard);
    for (std::size_t i = 0; i < dim; ++i) {
        if (bit(i, CircuitLayout::outer_ancilla()) != 0 ||
            bit(i, CircuitLayout::weight_control()) != 0 ||
            bit(i, CircuitLayout::data_ancilla()) != 0) {
            continue;
        }
        std::size_t j = 0;
        for (std::size_t k = 0; k < layout.index_qubits; ++k) {
            j = (j << 1U) | bit(i, layout.index_qubit(k));
        }
        if (j >= layout.feature_dim) {
            continue;
        }
        const bool same_sign =
            bit(i, layout.weight_sign_qubit()) == bit(i, layout.data_sign_qubit());
        built.labels[i] = same_sign ? OutcomeLabel::Plus : OutcomeLabel::Minus;
    }
    return built;
}

StateVector simulate(const RqsvrCircuit &built) {
    StateVector state = initial_state(built.layout);
    statevec::apply_circuit_inplace(state, built.circuit);
    return state;
}

double reconstruct(const RqsvrCircuit &built, std::span<const double> probs) {
    if (probs.size() != built.labels.size()) {
        throw ArgumentError("reconstruct: distribution size does not match circuit");
    }
    double signed_mass = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        signed_mass += static_cast<double>(built.labels[i]) * probs[i];
    }
    return built.scale * signed_mass;
}

ShotEstimate estimate_from_distribution(const RqsvrCircuit &built,
                                        std::span<const double> probs,
                                        const EstimationMode &mode) {
    if (mode.kind == EstimationMode::Kind::Exact) {
        return {reconstruct(built, probs), 0, 0.0};
    }
    if (mode.shots == 0) {
        throw ArgumentError("shot mode needs at least one shot");
    }
    if (probs.size() != built.labels.size()) {
        throw ArgumentError("estimate: distribution size does not match circuit");
    }
    const auto counts = statevec::sample_distribution(probs, mode.shots, mode.seed);
    std::uint64_t n_plus = 0;
    std::uint64_t n_minus = 0;
    for (const auto &[outcome, n] : counts.counts) {
        switch (built.labels[outcome]) {
        case OutcomeLabel::Plus:
            n_plus += n;
            break;
        case OutcomeLabel::Minus:
            n_minus += n;
            break;
        case OutcomeLabel::Discard:
            break;
        }
    }
    // Discarded shots stay in the denominator, which keeps the estimator
    // unbiased: E[(n+ - n-) / s] = p+ - p-.
    const double s = static_cast<double>(mode.shots);
    const double f_plus = static_cast<double>(n_plus) / s;
    const double f_minus = static_cast<double>(n_minus) / s;
    const double mean = f_plus - f_minus;
    const double per_shot_var = std::max(0.0, f_plus + f_minus - mean * mean);
    return {built.scale * mean, mode.shots, built.scale * std::sqrt(per_shot_var / s)};
}

ShotEstimate estimate_inner_product(std::span<const double> w, std::span<const double> phi,
                                    const EstimationMode &mode) {
    if (mode.kind == EstimationMode::Kind::Shots && mode.shots == 0) {
        throw ArgumentError("shot mode needs at least one shot");
    }
    const RqsvrCircuit built = build_rqsvr_circuit(w, phi);
    const auto probs = statevec::probabilities(simulate(built));
    return estimate_from_distribution(built, probs, mode);
}

double theoretical_stddev(const RqsvrCircuit &built, std::span<const double> probs,
                          std::uint64_t shots) {
    if (shots == 0) {
        throw ArgumentError("theoretical_stddev: shots must be >= 1");
    }
    double p_plus = 0.0;
    double p_minus = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (built.labels[i] == OutcomeLabel::Plus) {
            p_plus += probs[i];
        } else if (built.labels[i] == OutcomeLabel::Minus) {
            p_minus += probs[i];
        }
    }
    const double mean = p_plus - p_minus;
    const double var = std::max(0.0, p_plus + p_minus - mean * mean);
    return built.scale * std::sqrt(var / static_cast<double>(shots));
}

double RqsvrModel::w_norm() const noexcept {
    double m = 0.0;
    for (const double x : w) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

RqsvrModel make_model(const svr::SvrFit &fit, const svr::SvrHyperparams &hyperparams,
                      const features::FeatureParams &feature_params) {
    if (static_cast<std::size_t>(fit.w.size()) != features::kNumFeatures) {
        throw ArgumentError("make_model: fit has " + std::to_string(fit.w.size()) +
                            " weights, feature map produces " +
                            std::to_string(features::kNumFeatures));
    }
    RqsvrModel model;
    model.w.assign(fit.w.data(), fit.w.data() + fit.w.size());
    model.b = fit.b;
    model.hyperparams = hyperparams;
    model.feature_params = feature_params;
    model.layout = make_layout(model.w.size());
    return model;
}

Prediction predict_detailed(const RqsvrModel &model, const features::Point &x,
                            const EstimationMode &mode) {
    if (!model.trained()) {
        throw StateError("predict: model is not trained");
    }
    if (mode.kind == EstimationMode::Kind::Shots && mode.shots == 0) {
        throw ArgumentError("shot mode needs at least one shot");
    }
    const auto &fp = *model.feature_params;
    const auto phi = features::phi_cos(fp.norm.normalize(x), fp.alpha);

    Prediction out;
    out.inner_product.shots = mode.kind == EstimationMode::Kind::Shots ? mode.shots : 0;
    const bool phi_zero = std::ranges::all_of(phi, [](double v) { return v == 0.0; });
    if (model.w_norm() == 0.0 || phi_zero) {
        // Constant model or a zero feature vector: w^T phi = 0 exactly.
        out.value = model.b;
        return out;
    }
    out.inner_product = estimate_inner_product(model.w, phi, mode);
    out.value = out.inner_product.value + model.b;
    return out;
}

double predict(const RqsvrModel &model, const features::Point &x,
               const EstimationMode &mode) {
    return predict_detailed(model, x, mode).value;
}

int predict_sign(const RqsvrModel &model, const features::Point &x,
                 const EstimationMode &mode) {
    return predict(model, x, mode) >= 0.0 ? 1 : -1;
}

} // namespace rqsvr::circuit
