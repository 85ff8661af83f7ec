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

#include "wstab/qalg.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace wstab::qalg {

namespace {
void check_site(int n_qubits, int site) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be positive");
  if (site < 1 || site > n_qubits) throw std::out_of_range("site out of range");
}
}  // namespace

SiteOperator site_operator(int n_qubits, int site, SiteKind kind) {
  check_site(n_qubits, site);
  return SiteOperator{n_qubits, site, kind};
}

Vector SiteOperator::apply(const Vector& v) const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  if (static_cast<std::uint64_t>(v.size()) != dim)
    throw std::invalid_argument("state dimension mismatch");
  const std::uint64_t mask = qubit_mask(n_qubits, site);
  Vector out = Vector::Zero(v.size());
  switch (kind) {
    case SiteKind::Lower:  // |1> -> |0>
      for (std::uint64_t b = 0; b < dim; ++b)
        if (b & mask) out[b ^ mask] += v[b];
      break;
    case SiteKind::Raise:  // |0> -> |1>
      for (std::uint64_t b = 0; b < dim; ++b)
        if (!(b & mask)) out[b ^ mask] += v[b];
      break;
    case SiteKind::PauliZ:  // sigma_z |0> = +|0>, sigma_z |1> = -|1>
      for (std::uint64_t b = 0; b < dim; ++b)
        out[b] = (b & mask) ? -v[b] : v[b];
      break;
  }
  return out;
}

SparseOp SiteOperator::sparse() const {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t mask = qubit_mask(n_qubits, site);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(dim);
  for (std::uint64_t b = 0; b < dim; ++b) {
    switch (kind) {
      case SiteKind::Lower:
        if (b & mask) trip.emplace_back(b ^ mask, b, 1.0);
        break;
      case SiteKind::Raise:
        if (!(b & mask)) trip.emplace_back(b ^ mask, b, 1.0);
        break;
      case SiteKind::PauliZ:
        trip.emplace_back(b, b, (b & mask) ? -1.0 : 1.0);
        break;
    }
  }
  SparseOp m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Matrix SiteOperator::dense() const {
  if (n_qubits > 6)
    throw std::invalid_argument("densify limited to n_qubits <= 6");
  return Matrix(sparse());
}

QuantumState basis_state(int n_qubits, std::uint64_t index) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  if (index >= dim) throw std::out_of_range("basis index out of range");
  Vector amps = Vector::Zero(dim);
  amps[index] = 1.0;
  return {n_qubits, std::move(amps)};
}

QuantumState w_state(int n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("w_state requires n_qubits >= 2");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  Vector amps = Vector::Zero(dim);
  const double a = 1.0 / std::sqrt(double(n_qubits));
  for (int j = 1; j <= n_qubits; ++j) amps[qubit_mask(n_qubits, j)] = a;
  return {n_qubits, std::move(amps)};
}

QuantumState ghz_state(int n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("ghz_state requires n_qubits >= 2");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  Vector amps = Vector::Zero(dim);
  amps[0] = amps[dim - 1] = 1.0 / std::sqrt(2.0);
  return {n_qubits, std::move(amps)};
}

QuantumState ground_state(int n_qubits) { return basis_state(n_qubits, 0); }

std::pair<double, double> asymmetric_w_split(int n_qubits, int k) {
  if (k < 1 || k >= n_qubits) throw std::out_of_range("k out of range");
  const double n = n_qubits;
  return {std::sqrt(k / n), std::sqrt((n_qubits - k) / n)};
}

double fidelity_to_pure(const DensityMatrix& rho, const QuantumState& psi) {
  if (rho.dim() != psi.dim()) throw std::invalid_argument("dimension mismatch");
  return (psi.amplitudes.adjoint() * rho.matrix * psi.amplitudes)(0).real();
}

std::vector<std::uint64_t> hamming_weight_indices(int n_qubits, int weight) {
  if (weight < 0 || weight > n_qubits)
    throw std::out_of_range("weight out of range");
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  for (std::uint64_t b = 0; b < dim; ++b)
    if (std::popcount(b) == weight) out.push_back(b);
  return out;
}

DensityMatrix pure_density(const QuantumState& psi) {
  return {psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix maximally_mixed(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return {n_qubits, Matrix::Identity(dim, dim) / double(dim)};
}

}  // namespace wstab::qalg
