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
#include "rqsvr/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rqsvr/error.hpp"
#include "rqsvr/rng.hpp"

namespace rqsvr::statevec {

namespace {

constexpr std::size_t kMaxQubits = 30;

std::uint64_t bit_of(std::size_t num_qubits, std::size_t qubit) {
    return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

std::uint64_t control_mask(std::size_t num_qubits,
                           const std::vector<std::size_t> &controls) {
    std::uint64_t mask = 0;
    for (const auto c : controls) {
        mask |= bit_of(num_qubits, c);
    }
    return mask;
}

void apply_single(std::span<cplx> amps, std::size_t num_qubits,
                  std::size_t target, std::uint64_t cmask, const Matrix2 &m) {
    const std::uint64_t tbit = bit_of(num_qubits, target);
    const std::uint64_t dim = amps.size();
    // Enumerate indices with the target bit clear: i0 = high | low.
    for (std::uint64_t high = 0; high < dim; high += 2 * tbit) {
        for (std::uint64_t low = 0; low < tbit; ++low) {
            const std::uint64_t i0 = high | low;
            if ((i0 & cmask) != cmask) {
                continue;
            }
            const std::uint64_t i1 = i0 | tbit;
            const cplx a0 = amps[i0];
            const cplx a1 = amps[i1];
            amps[i0] = m[0] * a0 + m[1] * a1;
            amps[i1] = m[2] * a0 + m[3] * a1;
        }
    }
}

void apply_diagonal(std::span<cplx> amps, std::size_t num_qubits,
                    const std::vector<std::size_t> &targets, std::uint64_t cmask,
                    const std::vector<cplx> &entries) {
    std::vector<std::uint64_t> tbits(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        tbits[k] = bit_of(num_qubits, targets[k]);
    }
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & cmask) != cmask) {
            continue;
        }
        std::size_t local = 0;
        for (const auto tb : tbits) {
            local = (local << 1U) | ((i & tb) != 0 ? 1U : 0U);
        }
        amps[i] *= entries[local];
    }
}

} // namespace

StateVector::StateVector(std::size_t num_qubits, std::vector<cplx> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw ArgumentError("StateVector: num_qubits must be in [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
        throw ArgumentError("StateVector: expected 2^" + std::to_string(num_qubits) +
                            " amplitudes, got " +
                            std::to_string(amplitudes_.size()));
    }
}

double StateVector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

GateOp::GateOp(GateKind kind, std::vector<std::size_t> targets)
    : kind_(kind), targets_(std::move(targets)) {}

GateOp GateOp::h(std::size_t target) { return {GateKind::H, {target}}; }

GateOp GateOp::x(std::size_t target) { return {GateKind::X, {target}}; }

GateOp GateOp::rx(std::size_t target, double theta) {
    if (!std::isfinite(theta)) {
        throw ArgumentError("RX: angle must be finite");
    }
    GateOp g{GateKind::RX, {target}};
    g.angle_ = theta;
    return g;
}

GateOp GateOp::ry(std::size_t target, double theta) {
    if (!std::isfinite(theta)) {
        throw ArgumentError("RY: angle must be finite");
    }
    GateOp g{GateKind::RY, {target}};
    g.angle_ = theta;
    return g;
}

GateOp GateOp::cnot(std::size_t control, std::size_t target) {
    return x(target).controlled(control);
}

GateOp GateOp::diagonal(std::vector<std::size_t> targets, std::vector<cplx> entries) {
    if (targets.empty()) {
        throw ArgumentError("diagonal gate needs at least one target");
    }
    if (targets.size() >= kMaxQubits ||
        entries.size() != (std::size_t{1} << targets.size())) {
        throw ArgumentError("diagonal gate on " + std::to_string(targets.size()) +
                            " qubits needs 2^k entries, got " +
                            std::to_string(entries.size()));
    }
    for (std::size_t j = 0; j < entries.size(); ++j) {
        const double mod = std::abs(entries[j]);
        if (!std::isfinite(mod) || std::abs(mod - 1.0) > kUnitModulusTolerance) {
            throw ValidationError("diagonal gate entry " + std::to_string(j) +
                                  " has modulus " + std::to_string(mod) +
                                  ", not unitary");
        }
    }
    GateOp g{GateKind::Diagonal, std::move(targets)};
    g.entries_ = std::move(entries);
    g.check_distinct_qubits();
    return g;
}

GateOp GateOp::controlled(std::size_t control) const {
    GateOp g = *this;
    g.controls_.push_back(control);
    g.check_distinct_qubits();
    return g;
}

GateOp GateOp::adjoint() const {
    GateOp g = *this;
    switch (kind_) {
    case GateKind::RX:
    case GateKind::RY:
        g.angle_ = -angle_;
        break;
    case GateKind::Diagonal:
        for (auto &e : g.entries_) {
            e = std::conj(e);
        }
        break;
    case GateKind::H:
    case GateKind::X:
        break;
    }
    return g;
}

GateOp GateOp::remapped(std::span<const std::size_t> qubit_map) const {
    GateOp g = *this;
    auto map_one = [&](std::size_t q) {
        if (q >= qubit_map.size()) {
            throw ArgumentError("qubit map too short for qubit " + std::to_string(q));
        }
        return qubit_map[q];
    };
    std::ranges::transform(targets_, g.targets_.begin(), map_one);
    std::ranges::transform(controls_, g.controls_.begin(), map_one);
    g.check_distinct_qubits();
    return g;
}

std::size_t GateOp::max_qubit() const noexcept {
    std::size_t top = *std::ranges::max_element(targets_);
    for (const auto c : controls_) {
        top = std::max(top, c);
    }
    return top;
}

Matrix2 GateOp::matrix2() const {
    using namespace std::complex_literals;
    switch (kind_) {
    case GateKind::H: {
        const double r = (1.0 / std::numbers::sqrt2);
        return {r, r, r, -r};
    }
    case GateKind::X:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::RX: {
        const double c = std::cos(angle_ / 2);
        const double s = std::sin(angle_ / 2);
        return {c, -1i * s, -1i * s, c};
    }
    case GateKind::RY: {
        const double c = std::cos(angle_ / 2);
        const double s = std::sin(angle_ / 2);
        return {c, -s, s, c};
    }
    case GateKind::Diagonal:
        break;
    }
    throw StateError("matrix2() is undefined for diagonal gates");
}

void GateOp::check_distinct_qubits() const {
    std::vector<std::size_t> all = targets_;
    all.insert(all.end(), controls_.begin(), controls_.end());
    std::ranges::sort(all);
    if (std::ranges::adjacent_find(all) != all.end()) {
        throw ArgumentError("gate touches qubit " +
                            std::to_string(*std::ranges::adjacent_find(all)) +
                            " more than once");
    }
}

Circuit::Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0) {
        throw ArgumentError("Circuit: num_qubits must be >= 1");
    }
}

Circuit &Circuit::add(GateOp gate) {
    if (gate.max_qubit() >= num_qubits_) {
        throw ArgumentError("gate touches qubit " + std::to_string(gate.max_qubit()) +
                            " on a " + std::to_string(num_qubits_) +
                            "-qubit circuit");
    }
    ops_.push_back(std::move(gate));
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.num_qubits_ != num_qubits_) {
        throw ArgumentError("append: qubit counts differ");
    }
    ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
    return *this;
}

Circuit Circuit::adjoint() const {
    Circuit out{num_qubits_};
    out.ops_.reserve(ops_.size());
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        out.ops_.push_back(it->adjoint());
    }
    return out;
}

Circuit Circuit::controlled(std::size_t control) const {
    if (control >= num_qubits_) {
        throw ArgumentError("controlled: control qubit out of range");
    }
    Circuit out{num_qubits_};
    out.ops_.reserve(ops_.size());
    for (const auto &op : ops_) {
        out.ops_.push_back(op.controlled(control));
    }
    return out;
}

Circuit Circuit::embedded(std::size_t num_qubits,
                          std::span<const std::size_t> qubit_map) const {
    if (qubit_map.size() != num_qubits_) {
        throw ArgumentError("embedded: qubit map must cover every local qubit");
    }
    Circuit out{num_qubits};
    for (const auto &op : ops_) {
        out.add(op.remapped(qubit_map));
    }
    return out;
}

StateVector init_state(std::size_t num_qubits, std::uint64_t basis_index) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw ArgumentError("init_state: num_qubits out of range");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    if (basis_index >= dim) {
        throw ArgumentError("init_state: basis index " + std::to_string(basis_index) +
                            " out of range for " + std::to_string(num_qubits) +
                            " qubits");
    }
    std::vector<cplx> amps(dim);
    amps[basis_index] = 1.0;
    return {num_qubits, std::move(amps)};
}

void apply_gate_inplace(StateVector &state, const GateOp &gate) {
    const std::size_t n = state.num_qubits();
    if (gate.max_qubit() >= n) {
        throw ArgumentError("apply_gate: gate touches qubit " +
                            std::to_string(gate.max_qubit()) + " of a " +
                            std::to_string(n) + "-qubit state");
    }
    const std::uint64_t cmask = control_mask(n, gate.controls());
    if (gate.kind() == GateKind::Diagonal) {
        apply_diagonal(state.amplitudes(), n, gate.targets(), cmask, gate.entries());
    } else {
        apply_single(state.amplitudes(), n, gate.targets().front(), cmask,
                     gate.matrix2());
    }
}

void apply_circuit_inplace(StateVector &state, const Circuit &circuit) {
    if (circuit.num_qubits() != state.num_qubits()) {
        throw ArgumentError("apply_circuit: circuit has " +
                            std::to_string(circuit.num_qubits()) +
                            " qubits, state has " +
                            std::to_string(state.num_qubits()));
    }
    for (const auto &op : circuit.ops()) {
        apply_gate_inplace(state, op);
    }
}

StateVector apply_gate(StateVector state, const GateOp &gate) {
    apply_gate_inplace(state, gate);
    return state;
}

StateVector apply_circuit(StateVector state, const Circuit &circuit) {
    apply_circuit_inplace(state, circuit);
    return state;
}

std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> probs(state.size());
    std::ranges::transform(state.amplitudes(), probs.begin(),
                           [](const cplx &a) { return std::norm(a); });
    return probs;
}

MeasurementCounts sample(const StateVector &state, std::uint64_t shots,
                         std::uint64_t seed) {
    const auto probs = probabilities(state);
    return sample_distribution(probs, shots, seed);
}

MeasurementCounts sample_distribution(std::span<const double> probs,
                                      std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ArgumentError("sample: shots must be >= 1");
    }
    if (probs.empty()) {
        throw ArgumentError("sample: empty distribution");
    }
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (!(probs[j] >= 0.0)) {
            throw ValidationError("sample: negative or NaN probability at index " +
                                  std::to_string(j));
        }
        acc += probs[j];
        cdf[j] = acc;
    }
    if (!(acc > 0.0)) {
        throw ValidationError("sample: distribution has zero mass");
    }

    Rng rng{seed};
    std::vector<std::uint64_t> tally(probs.size(), 0);
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            // u rounded up to acc; take the last outcome with nonzero mass
            it = std::prev(cdf.end());
            while (it != cdf.begin() && *it == *std::prev(it)) {
                --it;
            }
        }
        ++tally[static_cast<std::size_t>(it - cdf.begin())];
    }

    MeasurementCounts out;
    out.shots = shots;
    for (std::size_t j = 0; j < tally.size(); ++j) {
        if (tally[j] != 0) {
            out.counts.emplace(j, tally[j]);
        }
    }
    return out;
}

} // namespace rqsvr::statevec
