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

#include "wstab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace wstab::sweep {

namespace {

// Runs fn(i) for i in [0, n) across a small worker pool. Work is pulled from
// a shared counter so results depend only on the index, not the schedule.
void parallel_for(int n, int n_threads, const std::function<void(int)>& fn) {
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, n);
  if (n_threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (int w = 0; w < n_threads; ++w)
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : workers) t.join();
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

Distribution make_distribution(std::vector<double> samples) {
  Distribution d;
  d.summary = summarize(samples);
  d.samples = std::move(samples);
  return d;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t z = base_seed ^ (0x9e3779b97f4a7c15ull * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

DistributionSummary summarize(std::vector<double> samples) {
  DistributionSummary s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  s.min = samples.front();
  s.max = samples.back();
  s.q1 = quantile(samples, 0.25);
  s.median = quantile(samples, 0.5);
  s.q3 = quantile(samples, 0.75);
  return s;
}

ProtocolSweepResult protocol_sweep(const HypergraphConfig& config,
                                   HamiltonianFamily hamiltonian,
                                   const SweepPlan& plan) {
  for (const auto& e : config.edges)
    if (e.size() != 3)
      throw std::invalid_argument("protocol_sweep: width-3 edges only");
  if (plan.n_samples < 1)
    throw std::invalid_argument("protocol_sweep: n_samples >= 1");

  const auto h = protocol::build_hamiltonian(config.n_qubits, hamiltonian);
  const auto rho0 = qalg::pure_density(qalg::ground_state(config.n_qubits));
  const int m = static_cast<int>(config.edges.size());

  ProtocolSweepResult result;
  result.config = config;
  result.samples.resize(plan.n_samples);

  parallel_for(plan.n_samples, plan.n_threads, [&](int i) {
    ProtocolSample& s = result.samples[static_cast<std::size_t>(i)];
    s.seed = derive_seed(plan.base_seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> angle(0.0,
                                                 2.0 * std::numbers::pi);
    ProtocolSpec spec;
    spec.hamiltonian = h;
    for (int k = 0; k < m; ++k) {
      const double theta = angle(rng);
      const double phi = angle(rng);
      s.theta.push_back(theta);
      s.phi.push_back(phi);
      const auto r = protocol::modular_jump_coefficients(theta, phi, 1.0);
      spec.dissipators.push_back(protocol::build_jump_operator(
          config.edges[static_cast<std::size_t>(k)], {r[0], r[1], r[2]}));
    }
    dynamics::LindbladGenerator gen(spec);
    // A slow draw is not a failure: extend the horizon until the fit window
    // opens or the trace is genuinely stuck at a high plateau.
    dynamics::EvolutionSettings local = plan.settings;
    for (int attempt = 0; attempt < 6; ++attempt) {
      const auto trace = dynamics::evolve(gen, rho0, local);
      s.epsilon_end = trace.epsilon.empty() ? 1.0 : trace.epsilon.back();
      const auto fit = analysis::fit_time_constant(trace);
      if (fit.ok) {
        s.tau = fit.tau;
        s.rate = 1.0 / fit.tau;
        s.failed = false;
        break;
      }
      s.failed = s.epsilon_end > 1e-6;
      if (!s.failed || trace.converged) break;  // done, or stuck at a plateau
      local.t_max *= 2.0;
      local.sample_interval = 0.0;
    }
  });

  std::vector<double> rates;
  for (const auto& s : result.samples) {
    if (s.failed) ++result.n_failed;
    if (s.rate > 0) rates.push_back(s.rate);
  }
  result.rates = make_distribution(std::move(rates));
  return result;
}

DecoherenceSweepResult decoherence_sweep(const ProtocolSpec& base,
                                         double gamma_w_target,
                                         const SweepPlan& plan) {
  if (gamma_w_target <= 0)
    throw std::invalid_argument("decoherence_sweep: gamma_w_target > 0");
  const int n = base.n_qubits();
  const auto rho0 = qalg::pure_density(qalg::w_state(n));

  DecoherenceSweepResult result;
  result.gamma_w_target = gamma_w_target;
  result.samples.resize(plan.n_samples);

  parallel_for(plan.n_samples, plan.n_threads, [&](int i) {
    DecoherenceSample& s = result.samples[static_cast<std::size_t>(i)];
    s.seed = derive_seed(plan.base_seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    protocol::DecoherenceRates rates;
    for (int j = 0; j < n; ++j) rates.gamma_minus.push_back(unit(rng));
    for (int j = 0; j < n; ++j) rates.gamma_z.push_back(unit(rng));
    // One common scale keeps the drawn relaxation/dephasing split intact
    // while pinning the W decay rate to the target.
    const double scale = gamma_w_target / analysis::w_decay_rate(n, rates);
    for (auto& g : rates.gamma_minus) g *= scale;
    for (auto& g : rates.gamma_z) g *= scale;
    s.rates = rates;

    ProtocolSpec spec = base;
    spec.decoherence = rates;
    dynamics::LindbladGenerator gen(spec);
    const auto ss = dynamics::steady_state(gen, rho0, plan.settings);
    s.epsilon_inf = ss.epsilon_inf;
    s.converged = ss.converged;
  });

  std::vector<double> eps;
  eps.reserve(result.samples.size());
  for (const auto& s : result.samples) eps.push_back(s.epsilon_inf);
  result.epsilon_inf = make_distribution(std::move(eps));
  return result;
}

std::string scaling_family_name(ScalingFamily f) {
  switch (f) {
    case ScalingFamily::GlobalMaximal: return "global+maximal";
    case ScalingFamily::GlobalMinimal: return "global+minimal";
    case ScalingFamily::ModularMaximal: return "modular+maximal";
    case ScalingFamily::ModularMinimal: return "modular+minimal";
    case ScalingFamily::ModularNearlyMinimal: return "modular+nearly_minimal";
    case ScalingFamily::ModularW4Maximal: return "modular_w4+maximal";
  }
  return "?";
}

std::optional<ScalingFamily> parse_scaling_family(const std::string& name) {
  for (auto f : {ScalingFamily::GlobalMaximal, ScalingFamily::GlobalMinimal,
                 ScalingFamily::ModularMaximal, ScalingFamily::ModularMinimal,
                 ScalingFamily::ModularNearlyMinimal,
                 ScalingFamily::ModularW4Maximal})
    if (scaling_family_name(f) == name) return f;
  return std::nullopt;
}

ProtocolSpec family_protocol(ScalingFamily family, int n) {
  using protocol::ConfigFamily;
  using protocol::HamiltonianFamily;
  switch (family) {
    case ScalingFamily::GlobalMaximal:
      return protocol::make_protocol(n, ConfigFamily::Global,
                                     HamiltonianFamily::Maximal);
    case ScalingFamily::GlobalMinimal:
      return protocol::make_protocol(n, ConfigFamily::Global,
                                     HamiltonianFamily::Minimal);
    case ScalingFamily::ModularW4Maximal:
      return protocol::make_protocol(n, ConfigFamily::Chain4,
                                     HamiltonianFamily::Maximal);
    default: {
      const ConfigFamily cf =
          (n % 2 == 1) ? ConfigFamily::Chain3 : ConfigFamily::Ring3;
      HamiltonianFamily hf = HamiltonianFamily::Maximal;
      if (family == ScalingFamily::ModularMinimal)
        hf = HamiltonianFamily::Minimal;
      else if (family == ScalingFamily::ModularNearlyMinimal)
        hf = HamiltonianFamily::NearlyMinimal;
      return protocol::make_protocol(n, cf, hf);
    }
  }
}

ScalingResult scaling_study(ScalingFamily family, int n_min, int n_max,
                            const EvolutionSettings& settings) {
  if (n_min < 3 || n_max > 8 || n_min > n_max)
    throw std::invalid_argument("scaling_study: n_range within [3, 8]");

  ScalingResult result;
  result.family = family;
  for (int n = n_min; n <= n_max; ++n) {
    const auto spec = family_protocol(family, n);
    dynamics::LindbladGenerator gen(spec);
    const auto rho0 = qalg::pure_density(qalg::ground_state(n));

    ScalingPoint point;
    point.n_qubits = n;
    EvolutionSettings local = settings;
    if (local.stop_epsilon <= 0) local.stop_epsilon = 1e-9;
    // Slow (global) families outgrow any fixed horizon; double it until the
    // trace decays far enough to expose a clean fit window.
    for (int attempt = 0; attempt < 8; ++attempt) {
      const auto trace = dynamics::evolve(gen, rho0, local);
      const auto fit = analysis::fit_time_constant(trace);
      const double eps_end = trace.epsilon.empty() ? 1.0 : trace.epsilon.back();
      if (fit.ok && eps_end < 1e-8) {
        point.tau = fit.tau;
        point.r_squared = fit.r_squared;
        point.ok = true;
        break;
      }
      local.t_max *= 2.0;
      local.sample_interval = 0.0;
    }
    result.points.push_back(point);
  }
  return result;
}

std::string model_name(ScalingModel m) {
  switch (m) {
    case ScalingModel::Poly2: return "poly2";
    case ScalingModel::Poly3: return "poly3";
    case ScalingModel::Exponential: return "exponential";
  }
  return "?";
}

namespace {

int param_count(ScalingModel m) {
  switch (m) {
    case ScalingModel::Poly2: return 3;
    case ScalingModel::Poly3: return 4;
    case ScalingModel::Exponential: return 2;
  }
  return 0;
}

double model_eval(const ModelFit& f, double n) {
  if (f.model == ScalingModel::Exponential)
    return f.params[0] * std::exp(f.params[1] * n);
  double v = 0.0, p = 1.0;
  for (const double c : f.params) {
    v += c * p;
    p *= n;
  }
  return v;
}

ModelFit fit_one(ScalingModel model, const std::vector<ScalingPoint>& pts) {
  ModelFit f;
  f.model = model;
  const int np = static_cast<int>(pts.size());
  if (model == ScalingModel::Exponential) {
    // log-linear least squares: ln tau = ln a + b N
    Eigen::MatrixXd A(np, 2);
    Eigen::VectorXd y(np);
    for (int i = 0; i < np; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = pts[static_cast<std::size_t>(i)].n_qubits;
      y(i) = std::log(pts[static_cast<std::size_t>(i)].tau);
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    f.params = {std::exp(c(0)), c(1)};
  } else {
    const int deg = model == ScalingModel::Poly2 ? 2 : 3;
    Eigen::MatrixXd A(np, deg + 1);
    Eigen::VectorXd y(np);
    for (int i = 0; i < np; ++i) {
      double p = 1.0;
      for (int d = 0; d <= deg; ++d) {
        A(i, d) = p;
        p *= pts[static_cast<std::size_t>(i)].n_qubits;
      }
      y(i) = pts[static_cast<std::size_t>(i)].tau;
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    f.params.assign(c.data(), c.data() + c.size());
  }

  for (const auto& p : pts) {
    const double pred = model_eval(f, p.n_qubits);
    const double res = pred - p.tau;
    f.sse += res * res;
    f.max_rel_residual = std::max(f.max_rel_residual, std::abs(res) / p.tau);
  }

  const double n = np;
  const double k = param_count(model);
  if (n - k - 1 <= 0) {
    f.aicc = std::numeric_limits<double>::infinity();
  } else {
    f.aicc = n * std::log(std::max(f.sse, 1e-300) / n) + 2.0 * k +
             2.0 * k * (k + 1.0) / (n - k - 1.0);
  }
  return f;
}

}  // namespace

std::vector<ModelFit> fit_scaling_model(const std::vector<ScalingPoint>& points) {
  std::vector<ScalingPoint> pts;
  for (const auto& p : points)
    if (p.ok && p.tau > 0) pts.push_back(p);
  if (pts.size() < 4)
    throw std::invalid_argument("fit_scaling_model: need >= 4 points");

  std::vector<ModelFit> fits;
  for (auto m : {ScalingModel::Poly2, ScalingModel::Poly3,
                 ScalingModel::Exponential})
    fits.push_back(fit_one(m, pts));

  std::stable_sort(fits.begin(), fits.end(),
                   [](const ModelFit& a, const ModelFit& b) {
                     if (a.aicc != b.aicc) return a.aicc < b.aicc;
                     return param_count(a.model) < param_count(b.model);
                   });
  return fits;
}

}  // namespace wstab::sweep
