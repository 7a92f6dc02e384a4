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
 * Dense statevector simulation.
 *
 * Qubit 0 is the most significant bit of a basis index, so the amplitude of
 * |b_0 b_1 ... b_{n-1}> lives at index sum_k b_k 2^(n-1-k). This matches
 * reading a Kronecker product |psi_0> (x) |psi_1> (x) ... left to right.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace rqsvr::statevec {

using cplx = std::complex<double>;
using Matrix2 = std::array<cplx, 4>; ///< row-major 2x2

/// Entries of a diagonal gate must have modulus 1 within this tolerance.
inline constexpr double kUnitModulusTolerance = 1e-10;

class StateVector {
  public:
    /// Takes ownership of @p amplitudes; their count must be 2^num_qubits.
    StateVector(std::size_t num_qubits, std::vector<cplx> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] double norm_squared() const noexcept;

  private:
    std::size_t num_qubits_;
    std::vector<cplx> amplitudes_;
};

enum class GateKind { H, X, RX, RY, Diagonal };

/**
 * A gate acting on one target (H, X, RX, RY) or on an ordered list of
 * targets (Diagonal), optionally conditioned on every control qubit being 1.
 * For Diagonal, targets[0] is the most significant bit of the entry index.
 */
class GateOp {
  public:
    static GateOp h(std::size_t target);
    static GateOp x(std::size_t target);
    /// RX(theta) = exp(-i theta X / 2).
    static GateOp rx(std::size_t target, double theta);
    /// RY(theta) = exp(-i theta Y / 2).
    static GateOp ry(std::size_t target, double theta);
    static GateOp cnot(std::size_t control, std::size_t target);
    /// Throws ValidationError unless every entry has unit modulus.
    static GateOp diagonal(std::vector<std::size_t> targets,
                           std::vector<cplx> entries);

    /// Same gate with one more control qubit.
    [[nodiscard]] GateOp controlled(std::size_t control) const;
    [[nodiscard]] GateOp adjoint() const;
    /// Same gate with every qubit index q replaced by qubit_map[q].
    [[nodiscard]] GateOp remapped(std::span<const std::size_t> qubit_map) const;

    [[nodiscard]] GateKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<std::size_t> &targets() const noexcept {
        return targets_;
    }
    [[nodiscard]] const std::vector<std::size_t> &controls() const noexcept {
        return controls_;
    }
    [[nodiscard]] double angle() const noexcept { return angle_; }
    [[nodiscard]] const std::vector<cplx> &entries() const noexcept {
        return entries_;
    }
    /// Largest qubit index the gate touches.
    [[nodiscard]] std::size_t max_qubit() const noexcept;
    /// 2x2 matrix of a single-target kind. Throws StateError for Diagonal.
    [[nodiscard]] Matrix2 matrix2() const;

  private:
    GateOp(GateKind kind, std::vector<std::size_t> targets);
    void check_distinct_qubits() const;

    GateKind kind_;
    std::vector<std::size_t> targets_;
    std::vector<std::size_t> controls_;
    double angle_ = 0.0;
    std::vector<cplx> entries_;
};

class Circuit {
  public:
    explicit Circuit(std::size_t num_qubits);

    /// Appends @p gate; throws ArgumentError if it touches a qubit >= num_qubits.
    Circuit &add(GateOp gate);
    /// Appends all gates of @p other, which must have the same qubit count.
    Circuit &append(const Circuit &other);

    /// Inverse circuit: reversed order, each gate adjointed.
    [[nodiscard]] Circuit adjoint() const;
    /// Every gate gains @p control as an extra control qubit.
    [[nodiscard]] Circuit controlled(std::size_t control) const;
    /// This circuit placed on a register of @p num_qubits qubits, local qubit
    /// q mapped to qubit_map[q].
    [[nodiscard]] Circuit embedded(std::size_t num_qubits,
                                   std::span<const std::size_t> qubit_map) const;

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] const std::vector<GateOp> &ops() const noexcept { return ops_; }
    [[nodiscard]] std::size_t size() const noexcept { return ops_.size(); }
    [[nodiscard]] bool empty() const noexcept { return ops_.empty(); }

  private:
    std::size_t num_qubits_;
    std::vector<GateOp> ops_;
};

struct MeasurementCounts {
    std::uint64_t shots = 0;
    /// Basis index -> occurrences; only observed outcomes are present.
    std::map<std::uint64_t, std::uint64_t> counts;
};

/// Basis state |basis_index> on @p num_qubits qubits.
[[nodiscard]] StateVector init_state(std::size_t num_qubits,
                                     std::uint64_t basis_index = 0);

/// In-place gate application with stride arithmetic.
void apply_gate_inplace(StateVector &state, const GateOp &gate);
void apply_circuit_inplace(StateVector &state, const Circuit &circuit);

[[nodiscard]] StateVector apply_gate(StateVector state, const GateOp &gate);
[[nodiscard]] StateVector apply_circuit(StateVector state, const Circuit &circuit);

[[nodiscard]] std::vector<double> probabilities(const StateVector &state);

/// i.i.d. terminal measurements of the full register.
[[nodiscard]] MeasurementCounts sample(const StateVector &state,
                                       std::uint64_t shots, std::uint64_t seed);

/**
 * Inverse-CDF sampling from an explicit distribution. Used directly when the
 * same probabilities are sampled repeatedly with different seeds.
 */
[[nodiscard]] MeasurementCounts sample_distribution(std::span<const double> probs,
                                                    std::uint64_t shots,
                                                    std::uint64_t seed);

} // namespace rqsvr::statevec
