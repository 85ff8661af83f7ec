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

#include <cstdint>

#include "wstab/analysis.hpp"

namespace wstab::sweep {

using dynamics::EvolutionSettings;
using protocol::ConfigFamily;
using protocol::HamiltonianFamily;
using protocol::HypergraphConfig;
using protocol::ProtocolSpec;

/// Per-sample seed derivation: splitmix64 of (base_seed ^ golden * index),
/// fixed so runs are reproducible independent of worker count.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

struct SweepPlan {
  int n_samples = 256;
  std::uint64_t base_seed = 0;
  EvolutionSettings settings;  // callers usually relax tolerances for sweeps
  int n_threads = 0;           // 0: hardware concurrency
};

struct DistributionSummary {
  double median = 0.0;
  double q1 = 0.0, q3 = 0.0;
  double min = 0.0, max = 0.0;
};

struct Distribution {
  std::vector<double> samples;
  DistributionSummary summary;  // recomputed from samples
};

DistributionSummary summarize(std::vector<double> samples);

struct ProtocolSample {
  std::uint64_t seed = 0;
  std::vector<double> theta;  // one (theta, phi) pair per dissipator
  std::vector<double> phi;
  double tau = 0.0;        // 0 when no admissible fit
  double rate = 0.0;       // 1 / tau
  double epsilon_end = 1.0;
  bool failed = false;     // no fit window and epsilon plateau above 1e-6
};

struct ProtocolSweepResult {
  HypergraphConfig config;
  std::vector<ProtocolSample> samples;  // indexed by sample number
  Distribution rates;                   // successful samples only
  int n_failed = 0;
};

/// Randomizes every dissipator's (theta, phi) uniformly on [0,2pi)^2 with
/// Gamma = 1, evolves from the ground state, and fits the decay constant.
/// Width-3 configurations only. Failures are recorded, never dropped.
ProtocolSweepResult protocol_sweep(const HypergraphConfig& config,
                                   HamiltonianFamily hamiltonian,
                                   const SweepPlan& plan);

struct DecoherenceSample {
  std::uint64_t seed = 0;
  protocol::DecoherenceRates rates;
  double epsilon_inf = 1.0;
  bool converged = false;
};

struct DecoherenceSweepResult {
  double gamma_w_target = 0.0;
  std::vector<DecoherenceSample> samples;
  Distribution epsilon_inf;
};

/// Per sample: draw per-qubit relaxation/dephasing rates uniform on (0,1),
/// rescale all by one scalar so the W-state decay rate hits gamma_w_target
/// (preserving the drawn split), then integrate to the steady state.
DecoherenceSweepResult decoherence_sweep(const ProtocolSpec& base,
                                         double gamma_w_target,
                                         const SweepPlan& plan);

enum class ScalingFamily {
  GlobalMaximal,
  GlobalMinimal,
  ModularMaximal,
  ModularMinimal,
  ModularNearlyMinimal,
  ModularW4Maximal,
};

std::string scaling_family_name(ScalingFamily f);
std::optional<ScalingFamily> parse_scaling_family(const std::string& name);

/// Protocol for one family at a given N (modular: chain3 odd N, ring3 even N).
ProtocolSpec family_protocol(ScalingFamily family, int n);

struct ScalingPoint {
  int n_qubits = 0;
  double tau = 0.0;
  double r_squared = 0.0;
  bool ok = false;
};

struct ScalingResult {
  ScalingFamily family;
  std::vector<ScalingPoint> points;
};

/// tau(N) over n_range for one family. Modular families pick chain3 for odd N
/// and ring3 for even N; modular_w4 uses the chain4 layout. Evolution starts
/// from the ground state; t_max doubles until the fit window is admissible.
ScalingResult scaling_study(ScalingFamily family, int n_min, int n_max,
                            const EvolutionSettings& settings = {});

enum class ScalingModel { Poly2, Poly3, Exponential };

std::string model_name(ScalingModel m);

struct ModelFit {
  ScalingModel model;
  std::vector<double> params;   // poly: ascending powers; exp: {a, b} in a e^{bN}
  double sse = 0.0;             // in tau space
  double aicc = 0.0;
  double max_rel_residual = 0.0;
};

/// Least-squares fit of each candidate model, ranked by small-sample-corrected
/// AIC (ties toward fewer parameters). Requires >= 4 points.
std::vector<ModelFit> fit_scaling_model(const std::vector<ScalingPoint>& points);

}  // namespace wstab::sweep
