// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstdint>
#include <vector>

namespace wstab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseOp = Eigen::SparseMatrix<Complex>;

namespace qalg {

/// Bit convention used throughout: qubit 1 is the most significant bit of
/// the basis-state index, |0> is the ground state. A basis index b on
/// n qubits has qubit j in state ((b >> (n - j)) & 1).
inline int qubit_bit(std::uint64_t basis, int n_qubits, int site) {
  return static_cast<int>((basis >> (n_qubits - site)) & 1u);
}

inline std::uint64_t qubit_mask(int n_qubits, int site) {
  return std::uint64_t{1} << (n_qubits - site);
}

struct QuantumState {
  int n_qubits;
  Vector amplitudes;  // length 2^n_qubits, unit norm for constructed states

  Eigen::Index dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
  int n_qubits = 0;
  Matrix matrix;  // Hermitian, trace one

  Eigen::Index dim() const { return matrix.rows(); }
};

enum class SiteKind { Lower, Raise, PauliZ };

/// Single-site operator tensored with identity everywhere else, stored as an
/// index/phase action rather than a matrix.
struct SiteOperator {
  int n_qubits;
  int site;  // 1-based
  SiteKind kind;

  Vector apply(const Vector& v) const;
  SparseOp sparse() const;
  Matrix dense() const;  // test oracle only; requires n_qubits <= 6
};

SiteOperator site_operator(int n_qubits, int site, SiteKind kind);

QuantumState basis_state(int n_qubits, std::uint64_t index);
QuantumState w_state(int n_qubits);
QuantumState ghz_state(int n_qubits);
QuantumState ground_state(int n_qubits);

/// Weights (sqrt(k/N), sqrt((N-k)/N)) of the split of |W^N> into a W state
/// on the first k qubits and one on the remaining N-k.
std::pair<double, double> asymmetric_w_split(int n_qubits, int k);

/// <psi| rho |psi>.
double fidelity_to_pure(const DensityMatrix& rho, const QuantumState& psi);

/// All basis indices with the given excitation number, ascending.
std::vector<std::uint64_t> hamming_weight_indices(int n_qubits, int weight);

DensityMatrix pure_density(const QuantumState& psi);
DensityMatrix maximally_mixed(int n_qubits);

}  // namespace qalg
}  // namespace wstab
