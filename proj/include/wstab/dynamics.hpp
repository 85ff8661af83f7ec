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

#include <optional>
#include <random>
#include <vector>

#include "wstab/protocol.hpp"

namespace wstab::dynamics {

using protocol::ProtocolSpec;
using qalg::DensityMatrix;
using qalg::QuantumState;

struct EvolutionSettings {
  double t_max = 2000.0;
  double sample_interval = 0.0;  // 0: auto (t_max / 1000)
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double steady_state_window = 20.0;
  double steady_state_threshold = 1e-6;
  double stop_epsilon = 0.0;     // > 0: stop early once epsilon falls below
  bool squared_infidelity = false;  // epsilon = 1 - |<W|rho|W>|^2 instead of 1 - <W|rho|W>
};

struct FitResult {
  double epsilon0 = 0.0;
  double tau = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0, t_hi = 0.0;  // fit window
  bool ok = false;
  std::string reason;
};

struct SimulationTrace {
  std::vector<double> times;
  std::vector<double> epsilon;
  FitResult fitted;                  // filled by analysis::fit_time_constant
  std::optional<double> epsilon_inf;
  bool converged = false;
  double max_trace_drift = 0.0;      // largest |tr(rho) - 1| seen before renormalization
  DensityMatrix final_state;
};

/// Lindblad generator for one protocol: -i lambda [H, .] plus the engineered
/// dissipators plus optional local relaxation/dephasing. Immutable after
/// construction; the action is evaluated operator-by-operator (2^N matrices),
/// never through a 4^N superoperator.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(ProtocolSpec spec);

  int n_qubits() const { return spec_.n_qubits(); }
  Eigen::Index dim() const { return dim_; }
  const ProtocolSpec& spec() const { return spec_; }

  Matrix apply(const Matrix& rho) const;  // d(rho)/dt

  /// Densified 4^N superoperator, column-major vec convention. Oracle for
  /// n_qubits <= 5.
  Matrix dense_superoperator() const;

 private:
  ProtocolSpec spec_;
  Eigen::Index dim_;
  bool use_dense_;               // small systems run faster on dense operators
  SparseOp drift_;               // -i lambda H - (1/2) sum_k rate_k c_k^dag c_k
  Matrix drift_dense_;
  std::vector<std::pair<double, SparseOp>> channels_;  // (rate, jump operator)
  std::vector<std::pair<double, Matrix>> channels_dense_;
};

SimulationTrace evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                       const EvolutionSettings& settings);

struct SteadyStateResult {
  DensityMatrix rho_inf;
  double epsilon_inf = 1.0;
  bool converged = false;
  SimulationTrace trace;
};

/// Integrates until the windowed relative change of epsilon stays below the
/// threshold for a full window, or t_max is reached (converged = false).
SteadyStateResult steady_state(const LindbladGenerator& gen,
                               const DensityMatrix& rho0,
                               const EvolutionSettings& settings);

/// All eigenvalues of the densified superoperator (n_qubits <= 5).
std::vector<Complex> dense_liouvillian_spectrum(const LindbladGenerator& gen);

int zero_eigenvalue_count(const std::vector<Complex>& spectrum,
                          double tol = 1e-9);

/// -max real part over nonzero eigenvalues; 1/gap approximates tau.
double spectral_gap(const std::vector<Complex>& spectrum, double tol = 1e-9);

/// Slowest decay rate among eigenmodes that actually contribute to
/// <target|rho(t)|target> starting from rho0. Symmetric protocols often
/// carry slower modes that are invisible to this observable; the fitted tau
/// tracks the visible gap, not the raw one. Dense path, n_qubits <= 5.
double visible_spectral_gap(const LindbladGenerator& gen,
                            const DensityMatrix& rho0,
                            const QuantumState& target,
                            double amp_tol = 1e-8);

QuantumState random_pure_state(int n_qubits, std::mt19937_64& rng);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace wstab::dynamics
