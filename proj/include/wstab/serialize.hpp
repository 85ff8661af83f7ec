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

#include <json.hpp>
#include <string>

#include "wstab/sweep.hpp"

namespace wstab::serialize {

using nlohmann::json;
using protocol::ProtocolSpec;

/// Interchange schema: {n_qubits, lambda, hamiltonian:{a:[{j,re,im}],
/// f:[{j,k,l,re,im}]}, dissipators:[{edge, r:[{re,im}], gamma}],
/// decoherence:{gamma_minus, gamma_z}}.
json protocol_to_json(const ProtocolSpec& spec);
ProtocolSpec protocol_from_json(const json& j);

/// FNV-1a over the canonical JSON text, hex-encoded.
std::string protocol_digest(const ProtocolSpec& spec);

std::string trace_csv(const dynamics::SimulationTrace& trace);

/// Sidecar: {tau, epsilon0, r_squared, epsilon_inf, converged, settings,
/// protocol_digest} plus the full protocol for byte-level reproduction.
json trace_sidecar(const dynamics::SimulationTrace& trace,
                   const dynamics::EvolutionSettings& settings,
                   const ProtocolSpec& spec);

json settings_to_json(const dynamics::EvolutionSettings& s);
dynamics::EvolutionSettings settings_from_json(const json& j);

std::string sweep_csv(const sweep::ProtocolSweepResult& result);
std::string sweep_csv(const sweep::DecoherenceSweepResult& result);
json sweep_summary(const sweep::ProtocolSweepResult& result);
json sweep_summary(const sweep::DecoherenceSweepResult& result);

std::string scaling_csv(const sweep::ScalingResult& result,
                        const std::vector<sweep::ModelFit>& fits);
json scaling_summary(const sweep::ScalingResult& result,
                     const std::vector<sweep::ModelFit>& fits);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace wstab::serialize
