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

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "toml_lite.hpp"
#include "wstab/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wstab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNoConvergence = 2;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  return toml_lite::parse(serialize::read_file(path));
}

std::optional<protocol::ConfigFamily> parse_config_family(
    const std::string& name) {
  using protocol::ConfigFamily;
  if (name == "chain3") return ConfigFamily::Chain3;
  if (name == "ring3") return ConfigFamily::Ring3;
  if (name == "chain4") return ConfigFamily::Chain4;
  if (name == "global") return ConfigFamily::Global;
  return std::nullopt;
}

std::optional<protocol::HamiltonianFamily> parse_hamiltonian_family(
    const std::string& name) {
  using protocol::HamiltonianFamily;
  if (name == "minimal") return HamiltonianFamily::Minimal;
  if (name == "nearly_minimal") return HamiltonianFamily::NearlyMinimal;
  if (name == "maximal") return HamiltonianFamily::Maximal;
  return std::nullopt;
}

int fail_validation(const std::string& reason, const json& detail = {}) {
  json err{{"error", reason}};
  if (!detail.is_null() && !detail.empty()) err["detail"] = detail;
  std::cerr << err.dump(2) << '\n';
  return kExitValidation;
}

// Protocol from a run config: an explicit protocol JSON wins, then a
// family shorthand like "modular+maximal".
std::optional<protocol::ProtocolSpec> resolve_protocol(const json& cfg,
                                                       std::string* why) {
  if (cfg.contains("protocol")) {
    const json p = cfg["protocol"].is_string()
                       ? json::parse(serialize::read_file(
                             cfg["protocol"].get<std::string>()))
                       : cfg["protocol"];
    return serialize::protocol_from_json(p);
  }
  const std::string family = cfg.value("family", "");
  const int n = cfg.value("n", 0);
  if (family.empty() || n == 0) {
    *why = "need either protocol or family + n";
    return std::nullopt;
  }
  const auto sf = sweep::parse_scaling_family(family);
  if (!sf) {
    *why = "unknown family: " + family;
    return std::nullopt;
  }
  return sweep::family_protocol(*sf, n);
}

qalg::DensityMatrix initial_state(const std::string& name, int n) {
  if (name == "w") return qalg::pure_density(qalg::w_state(n));
  if (name == "mixed") return qalg::maximally_mixed(n);
  return qalg::pure_density(qalg::ground_state(n));
}

dynamics::EvolutionSettings settings_from_config(const json& cfg) {
  if (cfg.contains("settings"))
    return serialize::settings_from_json(cfg["settings"]);
  return {};
}

void write_outputs(const std::string& out_dir, const std::string& stem,
                   const std::string& csv, const json& sidecar) {
  fs::create_directories(out_dir);
  serialize::write_file((fs::path(out_dir) / (stem + ".csv")).string(), csv);
  serialize::write_file((fs::path(out_dir) / (stem + ".json")).string(),
                        sidecar.dump(2) + "\n");
}

int cmd_simulate(json cfg, const std::string& out_dir, bool force) {
  std::string why;
  auto spec = resolve_protocol(cfg, &why);
  if (!spec) return fail_validation(why);

  const auto report = protocol::validate_hamiltonian(spec->hamiltonian);
  if (report.max_abs_residual >= 1e-8 && !force)
    return fail_validation("hamiltonian_constraint_violation",
                           {{"max_abs_residual", report.max_abs_residual}});

  const auto settings = settings_from_config(cfg);
  dynamics::LindbladGenerator gen(*spec);
  auto trace = dynamics::evolve(
      gen, initial_state(cfg.value("initial", "ground"), spec->n_qubits()),
      settings);
  trace.fitted = analysis::fit_time_constant(trace);

  json sidecar = serialize::trace_sidecar(trace, settings, *spec);
  sidecar["config"] = cfg;
  if (trace.epsilon_inf) {
    const auto w =
        analysis::witness_expectation(*trace.epsilon_inf, spec->n_qubits());
    sidecar["witness"] = {{"value", w.value}, {"certifies", w.certifies}};
  }
  write_outputs(out_dir, "trace", serialize::trace_csv(trace), sidecar);
  std::cout << sidecar.dump(2) << '\n';
  return trace.converged ? kExitOk : kExitNoConvergence;
}

json kernel_report(const std::vector<protocol::JumpOperator>& ops, int n) {
  const auto kernel = analysis::jump_kernel(ops, n);
  auto in_kernel = [&](const Vector& v) {
    return (kernel.basis * (kernel.basis.adjoint() * v) - v).norm() < 1e-8;
  };
  return {{"dimension", kernel.dimension},
          {"contains_w", in_kernel(qalg::w_state(n).amplitudes)},
          {"contains_ground", in_kernel(qalg::ground_state(n).amplitudes)}};
}

int cmd_check(const std::string& subject, int n, const std::string& family,
              const std::string& config_path) {
  json out;
  if (subject == "constraint-matrix") {
    if (n < 3) return fail_validation("constraint-matrix needs --n >= 3");
    const auto cm = protocol::constraint_matrix(n);
    out = {{"n", n},
           {"rows", cm.m.rows()},
           {"cols", cm.m.cols()},
           {"rank", cm.rank},
           {"full_rank", cm.rank == cm.m.cols()},
           {"bilinear_solution_exists", protocol::bilinear_solution_exists(n)}};
  } else if (subject == "connectivity") {
    const auto cf = parse_config_family(family);
    if (!cf || n < 3)
      return fail_validation("connectivity needs --family and --n");
    const auto config = protocol::standard_config(n, *cf);
    const auto conn = protocol::is_connected(config);
    out = {{"n", n},
           {"edges", config.edges},
           {"connected", conn.connected},
           {"covered", conn.covered}};
  } else if (subject == "kernel" || subject == "protocol") {
    protocol::ProtocolSpec spec;
    if (!config_path.empty()) {
      spec = serialize::protocol_from_json(
          json::parse(serialize::read_file(config_path)));
    } else {
      const auto cf = parse_config_family(family);
      if (!cf || n < 3)
        return fail_validation("kernel/protocol checks need --config or --family + --n");
      spec = protocol::make_protocol(n, *cf,
                                     protocol::HamiltonianFamily::Maximal);
    }
    const int nq = spec.n_qubits();
    out["n"] = nq;
    out["kernel"] = kernel_report(spec.dissipators, nq);
    if (subject == "protocol") {
      const auto report = protocol::validate_hamiltonian(spec.hamiltonian);
      json residuals = json::array();
      for (const auto& [key, v] : report.pair_residuals)
        residuals.push_back(
            {{"k", key[0]}, {"l", key[1]}, {"abs", std::abs(v)}});
      out["constraints"] = {{"max_abs_residual", report.max_abs_residual},
                            {"passes", report.passes()},
                            {"pair_residuals", residuals}};
      const auto res = protocol::resource_report(spec);
      out["resources"] = {{"n_linear", res.n_linear},
                          {"n_trilinear", res.n_trilinear},
                          {"n_dissipators", res.n_dissipators},
                          {"max_width", res.max_width}};
      protocol::HypergraphConfig hc;
      hc.n_qubits = nq;
      for (const auto& d : spec.dissipators) hc.edges.push_back(d.edge);
      const auto conn = protocol::is_connected(hc);
      out["connectivity"] = {{"connected", conn.connected},
                             {"covered", conn.covered}};
      out["protocol_digest"] = serialize::protocol_digest(spec);
    }
  } else {
    return fail_validation("unknown check subject: " + subject);
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

std::string edge_string(const std::vector<std::vector<int>>& edges) {
  std::string s;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    s += e ? "+{" : "{";
    for (std::size_t i = 0; i < edges[e].size(); ++i) {
      if (i) s += ',';
      s += std::to_string(edges[e][i]);
    }
    s += '}';
  }
  return s;
}

int cmd_enumerate(int n, int width) {
  if (n < 3 || n > 8 || width < 3 || width > n)
    return fail_validation("enumerate needs 3 <= width <= n <= 8");
  const auto configs = protocol::enumerate_configs(n, width);
  const int m_min = protocol::min_dissipator_count(n, width);
  for (const auto& c : configs) {
    const auto conn = protocol::is_connected(c);
    std::cout << "m=" << c.edges.size() << ' ' << edge_string(c.edges) << ' '
              << (conn.connected ? "connected" : "disconnected");
    if (conn.connected && static_cast<int>(c.edges.size()) == m_min)
      std::cout << " minimal";
    std::cout << '\n';
  }
  std::cerr << configs.size() << " configurations\n";
  return kExitOk;
}

sweep::SweepPlan plan_from_config(const json& cfg, std::uint64_t seed_override,
                                  int samples_override) {
  sweep::SweepPlan plan;
  plan.n_samples = samples_override > 0 ? samples_override
                                        : cfg.value("samples", 256);
  plan.base_seed = seed_override ? seed_override
                                 : cfg.value("seed", std::uint64_t{0});
  plan.n_threads = cfg.value("threads", 0);
  plan.settings = settings_from_config(cfg);
  return plan;
}

int cmd_sweep(json cfg, const std::string& out_dir, std::uint64_t seed,
              int samples) {
  const std::string type = cfg.value("type", "protocol");
  const auto plan = plan_from_config(cfg, seed, samples);

  json summary;
  std::string csv;
  if (type == "protocol") {
    protocol::HypergraphConfig config;
    config.n_qubits = cfg.value("n", 0);
    if (cfg.contains("edges")) {
      for (const auto& e : cfg["edges"])
        config.edges.push_back(e.get<std::vector<int>>());
    } else if (cfg.contains("config_family")) {
      const auto cf =
          parse_config_family(cfg["config_family"].get<std::string>());
      if (!cf) return fail_validation("unknown config_family");
      config = protocol::standard_config(config.n_qubits, *cf);
    } else {
      return fail_validation("protocol sweep needs edges or config_family");
    }
    const auto hf =
        parse_hamiltonian_family(cfg.value("hamiltonian", "maximal"));
    if (!hf) return fail_validation("unknown hamiltonian family");
    const auto result = sweep::protocol_sweep(config, *hf, plan);
    csv = serialize::sweep_csv(result);
    summary = serialize::sweep_summary(result);
  } else if (type == "decoherence") {
    std::string why;
    const auto spec = resolve_protocol(cfg, &why);
    if (!spec) return fail_validation(why);
    const double gamma_w = cfg.value("gamma_w", 0.0);
    if (gamma_w <= 0) return fail_validation("decoherence sweep needs gamma_w > 0");
    const auto result = sweep::decoherence_sweep(*spec, gamma_w, plan);
    csv = serialize::sweep_csv(result);
    summary = serialize::sweep_summary(result);
    summary["protocol_digest"] = serialize::protocol_digest(*spec);
  } else {
    return fail_validation("unknown sweep type: " + type);
  }
  summary["config"] = cfg;
  summary["base_seed"] = plan.base_seed;
  write_outputs(out_dir, "sweep", csv, summary);
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_scaling(json cfg, const std::string& out_dir,
                const std::string& family_flag, int n_flag) {
  const std::string family =
      !family_flag.empty() ? family_flag : cfg.value("family", "");
  const auto sf = sweep::parse_scaling_family(family);
  if (!sf) return fail_validation("unknown family: " + family);
  const int n_min = cfg.value("n_min", 3);
  const int n_max = n_flag > 0 ? n_flag : cfg.value("n_max", 8);

  auto settings = settings_from_config(cfg);
  const auto result = sweep::scaling_study(*sf, n_min, n_max, settings);
  std::vector<sweep::ModelFit> fits;
  try {
    fits = sweep::fit_scaling_model(result.points);
  } catch (const std::exception& e) {
    std::cerr << "model fit skipped: " << e.what() << '\n';
  }
  json summary = serialize::scaling_summary(result, fits);
  summary["config"] = cfg;
  write_outputs(out_dir, "scaling", serialize::scaling_csv(result, fits),
                summary);
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Engineered-dissipation W-state stabilization toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", family, initial, subject;
  std::uint64_t seed = 0;
  int n = 0, width = 3, samples = 0;
  bool force = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run config (TOML)");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--family", family, "Family shorthand");
    cmd->add_option("--n", n, "Qubit count");
  };

  auto* sim = app.add_subcommand("simulate", "Evolve a protocol and fit tau");
  add_common(sim);
  sim->add_option("--initial", initial, "Initial state: ground|w|mixed");
  sim->add_flag("--force", force, "Run despite constraint violations");

  auto* chk = app.add_subcommand("check", "Static protocol checks");
  chk->add_option("subject", subject,
                  "constraint-matrix|kernel|connectivity|protocol")
      ->required();
  add_common(chk);

  auto* enu = app.add_subcommand("enumerate", "List hypergraph configurations");
  enu->add_option("--n", n, "Qubit count")->required();
  enu->add_option("--width", width, "Edge width");

  auto* swp = app.add_subcommand("sweep", "Randomized parameter sweep");
  add_common(swp);
  swp->add_option("--samples", samples, "Sample count");

  auto* scl = app.add_subcommand("scaling", "tau(N) scaling study");
  add_common(scl);

  CLI11_PARSE(app, argc, argv);

  try {
    // check takes --config as a protocol JSON path, not a TOML run config
    if (app.got_subcommand(chk))
      return cmd_check(subject, n, family, config_path);

    json cfg = load_config(config_path);
    // command-line flags override config file entries
    if (!family.empty()) cfg["family"] = family;
    if (n > 0 && !app.got_subcommand(enu)) cfg["n"] = n;
    if (!initial.empty()) cfg["initial"] = initial;

    if (app.got_subcommand(sim)) return cmd_simulate(cfg, out_dir, force);
    if (app.got_subcommand(enu)) return cmd_enumerate(n, width);
    if (app.got_subcommand(swp)) return cmd_sweep(cfg, out_dir, seed, samples);
    if (app.got_subcommand(scl))
      return cmd_scaling(cfg, out_dir, family, 0);
  } catch (const std::exception& e) {
    return fail_validation(e.what());
  }
  return kExitValidation;
}
