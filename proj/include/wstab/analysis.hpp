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

#include "wstab/dynamics.hpp"

namespace wstab::analysis {

using dynamics::FitResult;
using dynamics::SimulationTrace;
using protocol::DecoherenceRates;
using protocol::JumpOperator;

/// Window policy for the exponential fit. The transient is excluded by
/// requiring local log-slope stationarity before the window opens; the window
/// itself is bounded by an epsilon ceiling at the knee and a floor above the
/// plateau.
struct FitPolicy {
  double slope_stationarity_tol = 0.05;
  int slope_run_length = 5;         // consecutive samples the slope must hold for
  double ceil_fraction = 0.5;       // ceiling = fraction * epsilon at the knee
  double floor_abs = 1e-9;
  double plateau_floor_factor = 10.0;  // floor = max(floor_abs, factor * plateau)
  int min_window_samples = 10;
};

/// Least-squares fit of log epsilon(t) over the admissible window.
FitResult fit_time_constant(const std::vector<double>& times,
                            const std::vector<double>& epsilon,
                            const FitPolicy& policy = {});

FitResult fit_time_constant(const SimulationTrace& trace,
                            const FitPolicy& policy = {});

/// Decay rate of a permutation-symmetric state alpha|0>|phi0> + beta|1>|phi1>
/// under local relaxation and dephasing:
///   |beta|^2 (1 - |alpha|^2 |overlap|^2) sum(gamma-)
///   + 4 Re[(alpha beta*)^2] sum(gamma_z).
double decay_rate_symmetric(Complex alpha, Complex beta, Complex overlap,
                            const DecoherenceRates& rates);

/// W-state decay rate mean(gamma-) + 4 (N-1)/N mean(gamma_z).
double w_decay_rate(int n_qubits, const DecoherenceRates& rates);

double ghz_decay_rate(int n_qubits, const DecoherenceRates& rates);

struct WitnessResult {
  double value = 0.0;    // epsilon_inf - 1/N
  bool certifies = false;  // negative value certifies N-qubit entanglement
};

WitnessResult witness_expectation(double epsilon_inf, int n_qubits);

struct KernelResult {
  int dimension = 0;
  Matrix basis;  // orthonormal columns spanning the joint kernel
};

/// Null space of the stacked jump operators via singular values
/// (threshold 1e-10). ambient_n <= 8.
KernelResult jump_kernel(const std::vector<JumpOperator>& jump_operators,
                         int ambient_n);

/// epsilon_inf / (tau * gamma_w); near 1 in the dissipation engineering regime.
double rate_model_ratio(double epsilon_inf, double tau, double gamma_w);

}  // namespace wstab::analysis
