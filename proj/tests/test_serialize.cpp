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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "wstab/serialize.hpp"

using namespace wstab;
using namespace wstab::serialize;

TEST_CASE("protocol JSON round trip") {
  auto spec = protocol::make_protocol(5, protocol::ConfigFamily::Chain3,
                                      protocol::HamiltonianFamily::Maximal);
  protocol::DecoherenceRates rates;
  rates.gamma_minus.assign(5, 1e-4);
  rates.gamma_z.assign(5, 2e-4);
  spec.decoherence = rates;

  json j = protocol_to_json(spec);
  CHECK(j["n_qubits"] == 5);
  CHECK(j["lambda"] == doctest::Approx(0.25));
  CHECK(j["dissipators"].size() == 2);

  auto back = protocol_from_json(j);
  CHECK(back.n_qubits() == 5);
  CHECK(back.lambda == spec.lambda);
  CHECK(back.hamiltonian.a.size() == spec.hamiltonian.a.size());
  CHECK(back.hamiltonian.f.size() == spec.hamiltonian.f.size());
  for (const auto& [key, v] : spec.hamiltonian.f)
    CHECK(std::abs(back.hamiltonian.f.at(key) - v) < 1e-15);
  REQUIRE(back.dissipators.size() == spec.dissipators.size());
  for (std::size_t d = 0; d < back.dissipators.size(); ++d) {
    CHECK(back.dissipators[d].edge == spec.dissipators[d].edge);
    CHECK(back.dissipators[d].gamma ==
          doctest::Approx(spec.dissipators[d].gamma));
    for (std::size_t k = 0; k < back.dissipators[d].r.size(); ++k)
      CHECK(std::abs(back.dissipators[d].r[k] - spec.dissipators[d].r[k]) <
            1e-15);
  }
  REQUIRE(back.decoherence.has_value());
  CHECK(back.decoherence->gamma_minus == rates.gamma_minus);

  // digest is stable and input sensitive
  CHECK(protocol_digest(spec) == protocol_digest(back));
  auto other = protocol::make_protocol(5, protocol::ConfigFamily::Chain3,
                                       protocol::HamiltonianFamily::Minimal);
  CHECK(protocol_digest(spec) != protocol_digest(other));
}

TEST_CASE("trace CSV and sidecar") {
  dynamics::SimulationTrace trace;
  trace.times = {0.0, 1.0, 2.0};
  trace.epsilon = {1.0, 0.5, 0.25};
  trace.fitted.ok = true;
  trace.fitted.tau = 1.4426950408889634;
  trace.fitted.epsilon0 = 1.0;
  trace.fitted.r_squared = 1.0;
  trace.epsilon_inf = 0.25;
  trace.converged = true;

  auto csv = trace_csv(trace);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,epsilon");
  std::getline(lines, line);
  CHECK(line == "0,1");
  std::getline(lines, line);
  CHECK(line == "1,0.5");

  auto spec = protocol::make_protocol(3, protocol::ConfigFamily::Global,
                                      protocol::HamiltonianFamily::Minimal);
  dynamics::EvolutionSettings settings;
  json side = trace_sidecar(trace, settings, spec);
  CHECK(side["tau"] == doctest::Approx(trace.fitted.tau));
  CHECK(side["epsilon_inf"] == doctest::Approx(0.25));
  CHECK(side["converged"] == true);
  CHECK(side["settings"]["t_max"] == doctest::Approx(2000.0));
  CHECK(side["protocol_digest"] == protocol_digest(spec));
  // settings round trip
  auto s2 = settings_from_json(side["settings"]);
  CHECK(s2.rel_tol == settings.rel_tol);
  CHECK(s2.steady_state_window == settings.steady_state_window);
}

TEST_CASE("sweep CSV layout") {
  sweep::ProtocolSweepResult result;
  result.config = {5, {{1, 2, 3}, {1, 4, 5}}};
  sweep::ProtocolSample s;
  s.seed = 77;
  s.theta = {0.5, 1.5};
  s.phi = {2.5, 3.5};
  s.tau = 8.0;
  s.rate = 0.125;
  s.epsilon_end = 0.25;
  result.samples.push_back(s);
  auto csv = sweep_csv(result);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header ==
        "sample_index,seed,theta_1,phi_1,theta_2,phi_2,tau,rate,epsilon_inf,"
        "failed");
  std::getline(lines, row);
  CHECK(row == "0,77,0.5,2.5,1.5,3.5,8,0.125,0.25,0");

  json summary = sweep_summary(result);
  CHECK(summary["n_failed"] == 0);
  CHECK(summary["n_qubits"] == 5);
}

TEST_CASE("scaling CSV layout") {
  sweep::ScalingResult result;
  result.family = sweep::ScalingFamily::ModularMaximal;
  for (int n = 3; n <= 8; ++n)
    result.points.push_back({n, static_cast<double>(n * n), 1.0, true});
  auto fits = sweep::fit_scaling_model(result.points);
  auto csv = scaling_csv(result, fits);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "N,tau,fit_model,fit_params");
  std::getline(lines, row);
  CHECK(row.substr(0, 10) == "3,9,poly2,");

  json summary = scaling_summary(result, fits);
  CHECK(summary["best_model"] == "poly2");
  CHECK(summary["points"].size() == 6);
}

TEST_CASE("decoherence sweep CSV") {
  sweep::DecoherenceSweepResult result;
  result.gamma_w_target = 2.5e-3;
  sweep::DecoherenceSample s;
  s.seed = 3;
  s.epsilon_inf = 0.239;
  s.converged = true;
  result.samples.push_back(s);
  auto csv = sweep_csv(result);
  CHECK(csv.find("sample_index,seed,epsilon_inf,converged") == 0);
  CHECK(csv.find("0,3,0.23899999999999999,1") != std::string::npos);
}

TEST_CASE("file round trip") {
  const std::string path = "serialize_test_roundtrip.txt";
  write_file(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  std::remove(path.c_str());
  CHECK_THROWS(read_file("no/such/file.txt"));
}
