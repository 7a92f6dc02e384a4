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
// Dense reference simulator: every gate is expanded to a 2^n x 2^n matrix
// from Kronecker products, and rotations come from the matrix exponential.
#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "rqsvr/statevec.hpp"

namespace oracle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline CMat pauli_x() {
    CMat m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline CMat pauli_y() {
    CMat m(2, 2);
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}

inline CMat hadamard() {
    CMat m(2, 2);
    m << 1.0, 1.0, 1.0, -1.0;
    return m / std::sqrt(2.0);
}

/// exp(-i theta P / 2).
inline CMat rotation(const CMat &pauli, double theta) {
    const CMat generator = cplx(0.0, -theta / 2.0) * pauli;
    return generator.exp();
}

inline CMat one_projector() {
    CMat m = CMat::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
}

/// I (x) ... (x) op_at_q (x) ... (x) I with qubit 0 leftmost.
inline CMat on_qubit(std::size_t n, std::size_t q, const CMat &op) {
    CMat out = CMat::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
        const CMat factor = k == q ? op : CMat(CMat::Identity(2, 2));
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

inline std::size_t bit(std::size_t index, std::size_t n, std::size_t q) {
    return (index >> (n - 1 - q)) & 1U;
}

/// Dense matrix of one gate on an n-qubit register.
inline CMat gate_matrix(std::size_t n, const rqsvr::statevec::GateOp &g) {
    using rqsvr::statevec::GateKind;
    const std::size_t dim = std::size_t{1} << n;
    CMat u;
    switch (g.kind()) {
    case GateKind::H:
        u = on_qubit(n, g.targets()[0], hadamard());
        break;
    case GateKind::X:
        u = on_qubit(n, g.targets()[0], pauli_x());
        break;
    case GateKind::RX:
        u = on_qubit(n, g.targets()[0], rotation(pauli_x(), g.angle()));
        break;
    case GateKind::RY:
        u = on_qubit(n, g.targets()[0], rotation(pauli_y(), g.angle()));
        break;
    case GateKind::Diagonal: {
        u = CMat::Zero(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            std::size_t e = 0;
            for (const auto t : g.targets()) {
                e = 2 * e + bit(i, n, t);
            }
            u(i, i) = g.entries()[e];
        }
        break;
    }
    }
    if (g.controls().empty()) {
        return u;
    }
    CMat proj = CMat::Identity(dim, dim);
    for (const auto c : g.controls()) {
        proj = proj * on_qubit(n, c, one_projector());
    }
    const CMat id = CMat::Identity(dim, dim);
    return id + proj * (u - id);
}

inline CMat circuit_matrix(const rqsvr::statevec::Circuit &c) {
    const std::size_t n = c.num_qubits();
    CMat out = CMat::Identity(std::size_t{1} << n, std::size_t{1} << n);
    for (const auto &g : c.ops()) {
        out = (gate_matrix(n, g) * out).eval();
    }
    return out;
}

inline double unitarity_error(const CMat &u) {
    return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

} // namespace oracle
