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

#include "wstab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wstab::serialize {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json protocol_to_json(const ProtocolSpec& spec) {
  json j;
  j["n_qubits"] = spec.n_qubits();
  j["lambda"] = spec.lambda;

  json a = json::array();
  for (const auto& [idx, v] : spec.hamiltonian.a)
    a.push_back({{"j", idx}, {"re", v.real()}, {"im", v.imag()}});
  json f = json::array();
  for (const auto& [key, v] : spec.hamiltonian.f)
    f.push_back({{"j", key[0]},
                 {"k", key[1]},
                 {"l", key[2]},
                 {"re", v.real()},
                 {"im", v.imag()}});
  j["hamiltonian"] = {{"a", a}, {"f", f}};

  json ds = json::array();
  for (const auto& d : spec.dissipators) {
    json r = json::array();
    for (const auto& c : d.r) r.push_back({{"re", c.real()}, {"im", c.imag()}});
    ds.push_back({{"edge", d.edge}, {"r", r}, {"gamma", d.gamma}});
  }
  j["dissipators"] = ds;

  if (spec.decoherence) {
    j["decoherence"] = {{"gamma_minus", spec.decoherence->gamma_minus},
                        {"gamma_z", spec.decoherence->gamma_z}};
  }
  return j;
}

ProtocolSpec protocol_from_json(const json& j) {
  ProtocolSpec spec;
  spec.hamiltonian.n_qubits = j.at("n_qubits").get<int>();
  spec.lambda = j.value("lambda", 0.25);

  if (j.contains("hamiltonian")) {
    const auto& h = j.at("hamiltonian");
    for (const auto& e : h.value("a", json::array()))
      spec.hamiltonian.a[e.at("j").get<int>()] =
          Complex(e.value("re", 0.0), e.value("im", 0.0));
    for (const auto& e : h.value("f", json::array())) {
      protocol::TripleKey key{e.at("j").get<int>(), e.at("k").get<int>(),
                              e.at("l").get<int>()};
      spec.hamiltonian.f[key] = Complex(e.value("re", 0.0), e.value("im", 0.0));
    }
  }

  for (const auto& d : j.value("dissipators", json::array())) {
    std::vector<int> edge = d.at("edge").get<std::vector<int>>();
    std::vector<Complex> r;
    for (const auto& c : d.at("r"))
      r.emplace_back(c.value("re", 0.0), c.value("im", 0.0));
    // validate through the usual gate, then keep the stored values verbatim
    // so a round trip is bit-exact (stable digests)
    auto op = protocol::build_jump_operator(edge, r, d.value("gamma", 1.0));
    op.r = std::move(r);
    op.gamma = d.value("gamma", 1.0);
    spec.dissipators.push_back(std::move(op));
  }

  if (j.contains("decoherence")) {
    protocol::DecoherenceRates rates;
    rates.gamma_minus =
        j.at("decoherence").at("gamma_minus").get<std::vector<double>>();
    rates.gamma_z = j.at("decoherence").at("gamma_z").get<std::vector<double>>();
    if (static_cast<int>(rates.gamma_minus.size()) != spec.n_qubits() ||
        static_cast<int>(rates.gamma_z.size()) != spec.n_qubits())
      throw std::invalid_argument("decoherence rate lists must have one entry per qubit");
    spec.decoherence = std::move(rates);
  }
  return spec;
}

std::string protocol_digest(const ProtocolSpec& spec) {
  const std::string text = protocol_to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string trace_csv(const dynamics::SimulationTrace& trace) {
  std::ostringstream out;
  out << "t,epsilon\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << fmt(trace.times[i]) << ',' << fmt(trace.epsilon[i]) << '\n';
  return out.str();
}

json settings_to_json(const dynamics::EvolutionSettings& s) {
  return {{"t_max", s.t_max},
          {"sample_interval", s.sample_interval},
          {"rel_tol", s.rel_tol},
          {"abs_tol", s.abs_tol},
          {"steady_state_window", s.steady_state_window},
          {"steady_state_threshold", s.steady_state_threshold},
          {"stop_epsilon", s.stop_epsilon},
          {"squared_infidelity", s.squared_infidelity}};
}

dynamics::EvolutionSettings settings_from_json(const json& j) {
  dynamics::EvolutionSettings s;
  s.t_max = j.value("t_max", s.t_max);
  s.sample_interval = j.value("sample_interval", s.sample_interval);
  s.rel_tol = j.value("rel_tol", s.rel_tol);
  s.abs_tol = j.value("abs_tol", s.abs_tol);
  s.steady_state_window = j.value("steady_state_window", s.steady_state_window);
  s.steady_state_threshold =
      j.value("steady_state_threshold", s.steady_state_threshold);
  s.stop_epsilon = j.value("stop_epsilon", s.stop_epsilon);
  s.squared_infidelity = j.value("squared_infidelity", s.squared_infidelity);
  return s;
}

json trace_sidecar(const dynamics::SimulationTrace& trace,
                   const dynamics::EvolutionSettings& settings,
                   const ProtocolSpec& spec) {
  json j;
  j["tau"] = trace.fitted.ok ? trace.fitted.tau : 0.0;
  j["epsilon0"] = trace.fitted.ok ? trace.fitted.epsilon0 : 0.0;
  j["r_squared"] = trace.fitted.ok ? trace.fitted.r_squared : 0.0;
  j["fit_ok"] = trace.fitted.ok;
  if (!trace.fitted.ok) j["fit_reason"] = trace.fitted.reason;
  if (trace.epsilon_inf)
    j["epsilon_inf"] = *trace.epsilon_inf;
  else
    j["epsilon_inf"] = nullptr;
  j["converged"] = trace.converged;
  j["settings"] = settings_to_json(settings);
  j["protocol"] = protocol_to_json(spec);
  j["protocol_digest"] = protocol_digest(spec);
  return j;
}

std::string sweep_csv(const sweep::ProtocolSweepResult& result) {
  std::ostringstream out;
  const std::size_t m = result.config.edges.size();
  out << "sample_index,seed";
  for (std::size_t k = 1; k <= m; ++k) out << ",theta_" << k << ",phi_" << k;
  out << ",tau,rate,epsilon_inf,failed\n";
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    out << i << ',' << s.seed;
    for (std::size_t k = 0; k < m; ++k)
      out << ',' << fmt(s.theta[k]) << ',' << fmt(s.phi[k]);
    out << ',' << fmt(s.tau) << ',' << fmt(s.rate) << ','
        << fmt(s.epsilon_end) << ',' << (s.failed ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const sweep::DecoherenceSweepResult& result) {
  std::ostringstream out;
  out << "sample_index,seed,epsilon_inf,converged\n";
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    out << i << ',' << s.seed << ',' << fmt(s.epsilon_inf) << ','
        << (s.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

json summary_json(const sweep::Distribution& d) {
  return {{"median", d.summary.median},
          {"q1", d.summary.q1},
          {"q3", d.summary.q3},
          {"min", d.summary.min},
          {"max", d.summary.max},
          {"count", d.samples.size()}};
}

}  // namespace

json sweep_summary(const sweep::ProtocolSweepResult& result) {
  json j;
  j["n_qubits"] = result.config.n_qubits;
  j["edges"] = result.config.edges;
  j["n_samples"] = result.samples.size();
  j["n_failed"] = result.n_failed;
  j["rates"] = summary_json(result.rates);
  return j;
}

json sweep_summary(const sweep::DecoherenceSweepResult& result) {
  json j;
  j["gamma_w_target"] = result.gamma_w_target;
  j["n_samples"] = result.samples.size();
  j["epsilon_inf"] = summary_json(result.epsilon_inf);
  return j;
}

std::string scaling_csv(const sweep::ScalingResult& result,
                        const std::vector<sweep::ModelFit>& fits) {
  std::ostringstream out;
  out << "N,tau,fit_model,fit_params\n";
  std::string model = "none";
  std::string params;
  if (!fits.empty()) {
    model = sweep::model_name(fits.front().model);
    std::ostringstream p;
    for (std::size_t i = 0; i < fits.front().params.size(); ++i)
      p << (i ? ";" : "") << fmt(fits.front().params[i]);
    params = p.str();
  }
  for (const auto& pt : result.points)
    out << pt.n_qubits << ',' << fmt(pt.tau) << ',' << model << ",\"" << params
        << "\"\n";
  return out.str();
}

json scaling_summary(const sweep::ScalingResult& result,
                     const std::vector<sweep::ModelFit>& fits) {
  json j;
  j["family"] = sweep::scaling_family_name(result.family);
  json pts = json::array();
  for (const auto& p : result.points)
    pts.push_back({{"N", p.n_qubits},
                   {"tau", p.tau},
                   {"r_squared", p.r_squared},
                   {"ok", p.ok}});
  j["points"] = pts;
  json fj = json::array();
  for (const auto& f : fits)
    fj.push_back({{"model", sweep::model_name(f.model)},
                  {"params", f.params},
                  {"sse", f.sse},
                  {"aicc", f.aicc},
                  {"max_rel_residual", f.max_rel_residual}});
  j["fits"] = fj;
  if (!fits.empty()) j["best_model"] = sweep::model_name(fits.front().model);
  return j;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wstab::serialize
