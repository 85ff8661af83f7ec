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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wstab/qalg.hpp"

namespace wstab::protocol {

/// Dissipator layout: each edge is the sorted set of qubit indices (1-based)
/// one engineered jump operator acts on.
struct HypergraphConfig {
  int n_qubits = 0;
  std::vector<std::vector<int>> edges;

  bool operator==(const HypergraphConfig&) const = default;
  bool operator<(const HypergraphConfig& o) const {
    return edges < o.edges;  // compare within fixed n_qubits
  }
};

/// One engineered collapse operator c = sum_{j in edge} r_j sigma_j.
/// Coefficients are kept normalized (sum |r|^2 = 1) with the overall rate in
/// gamma; raising-operator coefficients are identically zero by construction.
struct JumpOperator {
  std::vector<int> edge;
  std::vector<Complex> r;
  double gamma = 1.0;

  int width() const { return static_cast<int>(edge.size()); }
};

using PairKey = std::array<int, 2>;    // {k, l}, k < l
using TripleKey = std::array<int, 3>;  // (j, k, l), k < l, j not in {k, l}

struct HamiltonianSpec {
  int n_qubits = 0;
  std::map<int, Complex> a;        // linear drives a_j sigma+_j
  std::map<TripleKey, Complex> f;  // generalized hopping f_{j,kl} sigma_j sigma+_k sigma+_l

  // Analysis-only bilinear/trilinear coefficients (no implemented dynamics).
  std::map<PairKey, Complex> c2;   // two-qubit excitation c_jk
  std::map<PairKey, Complex> d;    // hopping d_jk
  std::map<TripleKey, Complex> c3; // three-qubit excitation c_jkl
};

struct DecoherenceRates {
  std::vector<double> gamma_minus;  // per qubit
  std::vector<double> gamma_z;
};

struct ProtocolSpec {
  HamiltonianSpec hamiltonian;
  std::vector<JumpOperator> dissipators;
  double lambda = 0.25;
  std::optional<DecoherenceRates> decoherence;

  int n_qubits() const { return hamiltonian.n_qubits; }
};

struct ConstraintReport {
  std::map<PairKey, Complex> pair_residuals;  // a_k + a_l + sum_j f_{j,kl}
  Complex sum_residual;                       // sum_j conj(a_j)
  double max_abs_residual = 0.0;

  bool passes(double tol = 1e-10) const { return max_abs_residual < tol; }
};

/// Global width-N jump coefficients built from the N'th and (N-1)'th roots of
/// unity, normalized; edge = {1..N}.
JumpOperator global_jump_coefficients(int n_qubits);

/// Width-3 coefficients from the (theta, phi, Gamma) parametrization.
/// Satisfies sum r = 0 and sum |r|^2 = Gamma^2.
std::array<Complex, 3> modular_jump_coefficients(double theta, double phi,
                                                 double gamma);

/// The fixed real width-3 choice used throughout: (1, 1, -2)/sqrt(6),
/// i.e. (theta, phi) = (3pi/4, pi/3) after canceling the common phase.
std::array<Complex, 3> default_width3_coefficients();

/// The fixed width-4 coefficient set used for chain4 configurations.
std::array<Complex, 4> default_width4_coefficients();

/// Validates width >= 3 and sum-to-zero, then normalizes. gamma is scaled by
/// the squared norm of the input coefficients so the dissipator is unchanged.
JumpOperator build_jump_operator(std::vector<int> edge,
                                 std::vector<Complex> coefficients,
                                 double gamma = 1.0);

SparseOp jump_sparse(const JumpOperator& op, int ambient_n);
Vector apply_jump(const JumpOperator& op, int ambient_n, const Vector& v);

enum class ConfigFamily { Chain3, Ring3, Chain4, Global };

HypergraphConfig standard_config(int n_qubits, ConfigFamily family);

struct Connectivity {
  bool connected = false;  // covered and the edge-overlap graph is one component
  bool covered = false;    // every qubit appears in at least one edge
};

Connectivity is_connected(const HypergraphConfig& config);

/// Minimum number of width-k dissipators for a connected configuration:
/// floor(N / (k-1)).
int min_dissipator_count(int n_qubits, int width);

/// Lexicographically minimal sorted edge list over all vertex permutations.
HypergraphConfig canonical_form(const HypergraphConfig& config);

/// All nonempty width-uniform hypergraphs on n_qubits vertices, one canonical
/// representative per relabeling class, ordered by edge count then
/// lexicographically. n_qubits <= 8.
std::vector<HypergraphConfig> enumerate_configs(int n_qubits, int width);

enum class HamiltonianFamily { Minimal, NearlyMinimal, Maximal };

HamiltonianSpec build_hamiltonian(int n_qubits, HamiltonianFamily family);

ConstraintReport validate_hamiltonian(const HamiltonianSpec& spec);

struct ConstraintMatrix {
  Eigen::MatrixXd m;  // C(N,3) rows (triples, lexicographic) x C(N,2) cols (pairs)
  int rank = 0;       // exact, computed over the rationals
};

ConstraintMatrix constraint_matrix(int n_qubits);

/// True iff a nonzero c_jk assignment satisfies every c_jk + c_jl + c_kl = 0,
/// i.e. rank(M_N) < C(N,2).
bool bilinear_solution_exists(int n_qubits);

struct ResourceCounts {
  int n_linear = 0;
  int n_trilinear = 0;
  int n_dissipators = 0;
  int max_width = 0;
  int max_interaction_depth = 0;
};

ResourceCounts resource_report(const ProtocolSpec& protocol);

/// Hamiltonian as a sparse 2^N matrix (includes hermitian conjugates).
SparseOp hamiltonian_sparse(const HamiltonianSpec& spec);

/// Dissipators for a configuration with the default per-width coefficients.
std::vector<JumpOperator> default_dissipators(const HypergraphConfig& config);

/// Full protocol for one of the paper-style families.
ProtocolSpec make_protocol(int n_qubits, ConfigFamily cf, HamiltonianFamily hf,
                           double lambda = 0.25);

std::string family_name(ConfigFamily f);
std::string family_name(HamiltonianFamily f);

}  // namespace wstab::protocol
