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
 * Real-part quantum SVR circuits.
 *
 * A weight vector w and a feature vector phi are embedded as diagonal
 * unitaries whose real parts carry sqrt of the sign-expanded, inf-normalized
 * entries. A real-part extractor around W(w) U(phi) leaves amplitudes
 * sqrt(|w_j| |phi_j|) on the success branch, so outcome probabilities are
 * proportional to |w_j| |phi_j| and the signed sum of them recovers w^T phi.
 *
 * Register layout (qubit 0 is the most significant bit):
 *
 *     0          outer real-part ancilla
 *     1          control of W
 *     2          real-part ancilla of U
 *     3..3+m-1   index register, m = ceil(log2 d)
 *     3+m        sign qubit of w
 *     4+m        sign qubit of phi
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rqsvr/features.hpp"
#include "rqsvr/statevec.hpp"
#include "rqsvr/svr.hpp"

namespace rqsvr::circuit {

using statevec::Circuit;
using statevec::cplx;
using statevec::StateVector;

/// Entries outside [-1, 1] by more than this are rejected by the embeddings.
inline constexpr double kUnitIntervalSlack = 1e-12;

struct SignExpanded {
    std::vector<double> minus; ///< -min(0, v_j)
    std::vector<double> plus;  ///< max(0, v_j)

    [[nodiscard]] std::size_t original_dim() const noexcept { return plus.size(); }
    /// [minus ; plus], i.e. (|0> (x) v-) + (|1> (x) v+).
    [[nodiscard]] std::vector<double> concatenated() const;
};

[[nodiscard]] SignExpanded sign_expand(std::span<const double> v);

struct DiagonalEmbedding {
    std::vector<double> source;
    std::size_t num_qubits = 0; ///< ceil(log2 d)
    std::vector<cplx> entries;  ///< length 2^num_qubits
};

/// Diagonal unitary with entries exp(-i arccos v_j), padded with -i.
[[nodiscard]] DiagonalEmbedding delta_embedding(std::span<const double> v);

/**
 * R(S) = (H (x) I)(|0><0| (x) S + |1><1| (x) S^dagger)(H (x) I) on n + 1
 * qubits. The ancilla is qubit 0; qubit q of S becomes qubit q + 1.
 */
[[nodiscard]] Circuit real_part_extractor(const Circuit &s);
/// Same for a diagonal S given by its entries; throws ValidationError if S
/// is not unitary.
[[nodiscard]] Circuit real_part_extractor(std::span<const cplx> diagonal);

struct CircuitLayout {
    std::size_t feature_dim = 0;
    std::size_t index_qubits = 0;
    std::size_t sign_qubits = 2;
    std::size_t ancillas = 3;
    std::size_t total_qubits = 0;

    [[nodiscard]] static constexpr std::size_t outer_ancilla() noexcept { return 0; }
    [[nodiscard]] static constexpr std::size_t weight_control() noexcept { return 1; }
    [[nodiscard]] static constexpr std::size_t data_ancilla() noexcept { return 2; }
    [[nodiscard]] std::size_t index_qubit(std::size_t k) const noexcept {
        return 3 + k;
    }
    [[nodiscard]] std::size_t weight_sign_qubit() const noexcept {
        return 3 + index_qubits;
    }
    [[nodiscard]] std::size_t data_sign_qubit() const noexcept {
        return 4 + index_qubits;
    }
    /// [sign, index_0, ..., index_{m-1}] for the w or phi embedding.
    [[nodiscard]] std::vector<std::size_t> embedding_qubits(std::size_t sign_qubit) const;

    friend bool operator==(const CircuitLayout &, const CircuitLayout &) = default;
};

/// Layout for feature dimension d > 1.
[[nodiscard]] CircuitLayout make_layout(std::size_t feature_dim);

/// |0>^3 (x) H^m |0...0> (x) |00>.
[[nodiscard]] StateVector initial_state(const CircuitLayout &layout);

/// W(w) = |0><0| (x) Delta(sqrt w+-) + |1><1| (x) Delta(sqrt w+-)^dagger,
/// controlled by the W ancilla. @p w must satisfy ||w||_inf <= 1.
[[nodiscard]] Circuit weight_operator(const CircuitLayout &layout,
                                      std::span<const double> w);
/// U(phi) = R(Delta(sqrt phi+-)) on the data ancilla. ||phi||_inf <= 1.
[[nodiscard]] Circuit data_operator(const CircuitLayout &layout,
                                    std::span<const double> phi);
/// C_w(phi) = R(W(w / ||w||) U(phi / ||phi||)) on the outer ancilla.
[[nodiscard]] Circuit cw_operator(const CircuitLayout &layout,
                                  std::span<const double> w,
                                  std::span<const double> phi);

enum class OutcomeLabel : std::int8_t { Minus = -1, Discard = 0, Plus = 1 };

struct RqsvrCircuit {
    /// Sign-qubit Hadamards followed by C_w; run on initial_state(layout).
    Circuit circuit;
    CircuitLayout layout;
    /// One label per basis outcome.
    std::vector<OutcomeLabel> labels;
    /// Reconstruction constant c: w^T phi = c (P(+) - P(-)).
    double scale = 0.0;
    double w_norm = 0.0;
    double phi_norm = 0.0;
};

[[nodiscard]] RqsvrCircuit build_rqsvr_circuit(std::span<const double> w,
                                               std::span<const double> phi);

/// Final statevector of a built circuit.
[[nodiscard]] StateVector simulate(const RqsvrCircuit &built);

/// c (sum_{+} p - sum_{-} p) for a full outcome distribution.
[[nodiscard]] double reconstruct(const RqsvrCircuit &built,
                                 std::span<const double> probs);

struct EstimationMode {
    enum class Kind { Exact, Shots };
    Kind kind = Kind::Exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static EstimationMode exact() { return {}; }
    static EstimationMode sampled(std::uint64_t shots, std::uint64_t seed) {
        return {Kind::Shots, shots, seed};
    }
};

struct ShotEstimate {
    double value = 0.0;
    std::uint64_t shots = 0; ///< 0 in exact mode
    double std_error = 0.0;   ///< plug-in standard error; 0 in exact mode
};

/// Estimate from an already simulated outcome distribution.
[[nodiscard]] ShotEstimate estimate_from_distribution(const RqsvrCircuit &built,
                                                      std::span<const double> probs,
                                                      const EstimationMode &mode);

[[nodiscard]] ShotEstimate estimate_inner_product(std::span<const double> w,
                                                  std::span<const double> phi,
                                                  const EstimationMode &mode);

/// Exact standard deviation of the shot estimator at @p shots shots:
/// c sqrt((p+ + p- - (p+ - p-)^2) / shots).
[[nodiscard]] double theoretical_stddev(const RqsvrCircuit &built,
                                        std::span<const double> probs,
                                        std::uint64_t shots);

struct RqsvrModel {
    std::vector<double> w;
    double b = 0.0;
    svr::SvrHyperparams hyperparams;
    std::optional<features::FeatureParams> feature_params;
    CircuitLayout layout;

    [[nodiscard]] bool trained() const noexcept {
        return feature_params.has_value() && !w.empty();
    }
    [[nodiscard]] double w_norm() const noexcept;
};

/// Wraps a classical fit and the feature map it was trained on.
[[nodiscard]] RqsvrModel make_model(const svr::SvrFit &fit,
                                    const svr::SvrHyperparams &hyperparams,
                                    const features::FeatureParams &feature_params);

struct Prediction {
    double value = 0.0;          ///< y-hat
    ShotEstimate inner_product;  ///< estimate of w^T phi(x)
};

[[nodiscard]] Prediction predict_detailed(const RqsvrModel &model,
                                          const features::Point &x,
                                          const EstimationMode &mode);

/// w^T phi(x) + b with the inner product estimated on the circuit.
[[nodiscard]] double predict(const RqsvrModel &model, const features::Point &x,
                             const EstimationMode &mode);

/// sign(predict(...)), with sign(0) = +1.
[[nodiscard]] int predict_sign(const RqsvrModel &model, const features::Point &x,
                               const EstimationMode &mode);

} // namespace rqsvr::circuit
