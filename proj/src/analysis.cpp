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

#include "wstab/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wstab::analysis {

namespace {

FitResult fail(const std::string& why) {
  FitResult r;
  r.reason = why;
  return r;
}

// Straight-line LSQ of y against t over [lo, hi); returns (intercept, slope, r2).
struct LinFit {
  double b0, b1, r2;
};

LinFit linear_fit(const std::vector<double>& t, const std::vector<double>& y,
                  std::size_t lo, std::size_t hi) {
  const double n = static_cast<double>(hi - lo);
  double st = 0, sy = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    st += t[i];
    sy += y[i];
  }
  const double mt = st / n, my = sy / n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double dt = t[i] - mt, dy = y[i] - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  LinFit f;
  f.b1 = sty / stt;
  f.b0 = my - f.b1 * mt;
  const double ssr = syy - f.b1 * sty;
  f.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  return f;
}

}  // namespace

FitResult fit_time_constant(const std::vector<double>& times,
                            const std::vector<double>& epsilon,
                            const FitPolicy& policy) {
  const std::size_t n = times.size();
  if (n != epsilon.size()) return fail("times/epsilon length mismatch");
  if (n < 20) return fail("need at least 20 samples");

  // Plateau estimate from the tail; sets the floor below which samples are
  // either converged or numerically contaminated.
  const std::size_t tail = std::max<std::size_t>(5, n / 20);
  double plateau = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) plateau += std::max(epsilon[i], 0.0);
  plateau /= static_cast<double>(tail);
  const double floor_eps =
      std::max(policy.floor_abs, policy.plateau_floor_factor * plateau);

  std::vector<double> logeps(n);
  for (std::size_t i = 0; i < n; ++i)
    logeps[i] = epsilon[i] > 0 ? std::log(epsilon[i]) : -745.0;

  // Local log-slopes between adjacent samples.
  std::vector<double> slope(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = times[i + 1] - times[i];
    slope[i] = dt > 0 ? (logeps[i + 1] - logeps[i]) / dt : 0.0;
  }

  // Knee: first index where the slope is decaying and stays within the
  // stationarity tolerance for a run of samples, all above the floor.
  const std::size_t run = static_cast<std::size_t>(policy.slope_run_length);
  std::size_t knee = n;  // sentinel: not found
  for (std::size_t i = 0; i + run < n; ++i) {
    if (epsilon[i] <= floor_eps || slope[i] >= 0) continue;
    bool stationary = true;
    for (std::size_t j = i; j < i + run; ++j) {
      if (epsilon[j + 1] <= floor_eps ||
          std::abs(slope[j] - slope[i]) >
              policy.slope_stationarity_tol * std::abs(slope[i])) {
        stationary = false;
        break;
      }
    }
    if (stationary) {
      knee = i;
      break;
    }
  }
  if (knee == n) return fail("no stationary decay region found");

  const double ceil_eps = policy.ceil_fraction * epsilon[knee];
  std::size_t lo = knee;
  while (lo < n && epsilon[lo] > ceil_eps) ++lo;
  std::size_t hi = lo;
  while (hi < n && epsilon[hi] > floor_eps) ++hi;
  if (hi - lo < static_cast<std::size_t>(policy.min_window_samples)) {
    // Fall back to the whole stationary stretch if the ceiling cut starves
    // the window (short traces with an early knee).
    lo = knee;
    hi = lo;
    while (hi < n && epsilon[hi] > floor_eps) ++hi;
    if (hi - lo < static_cast<std::size_t>(policy.min_window_samples))
      return fail("admissible fit window too short");
  }

  const LinFit f = linear_fit(times, logeps, lo, hi);
  if (f.b1 >= 0) return fail("fitted rate is non-negative");

  FitResult r;
  r.epsilon0 = std::exp(f.b0);
  r.tau = -1.0 / f.b1;
  r.r_squared = f.r2;
  r.t_lo = times[lo];
  r.t_hi = times[hi - 1];
  r.ok = true;
  return r;
}

FitResult fit_time_constant(const SimulationTrace& trace,
                            const FitPolicy& policy) {
  return fit_time_constant(trace.times, trace.epsilon, policy);
}

double decay_rate_symmetric(Complex alpha, Complex beta, Complex overlap,
                            const DecoherenceRates& rates) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
    throw std::invalid_argument("decay_rate_symmetric: |alpha|^2 + |beta|^2 != 1");
  const double sum_minus =
      std::accumulate(rates.gamma_minus.begin(), rates.gamma_minus.end(), 0.0);
  const double sum_z =
      std::accumulate(rates.gamma_z.begin(), rates.gamma_z.end(), 0.0);
  const double b2 = std::norm(beta);
  const double a2 = std::norm(alpha);
  const Complex ab = alpha * std::conj(beta);
  return b2 * (1.0 - a2 * std::norm(overlap)) * sum_minus +
         4.0 * (ab * ab).real() * sum_z;
}

double w_decay_rate(int n_qubits, const DecoherenceRates& rates) {
  const double n = n_qubits;
  const double mean_minus =
      std::accumulate(rates.gamma_minus.begin(), rates.gamma_minus.end(), 0.0) /
      n;
  const double mean_z =
      std::accumulate(rates.gamma_z.begin(), rates.gamma_z.end(), 0.0) / n;
  return mean_minus + 4.0 * (n - 1.0) / n * mean_z;
}

double ghz_decay_rate(int n_qubits, const DecoherenceRates& rates) {
  const double n = n_qubits;
  const double mean_minus =
      std::accumulate(rates.gamma_minus.begin(), rates.gamma_minus.end(), 0.0) /
      n;
  const double mean_z =
      std::accumulate(rates.gamma_z.begin(), rates.gamma_z.end(), 0.0) / n;
  return (n / 2.0) * (mean_minus + 2.0 * mean_z);
}

WitnessResult witness_expectation(double epsilon_inf, int n_qubits) {
  WitnessResult w;
  w.value = epsilon_inf - 1.0 / static_cast<double>(n_qubits);
  w.certifies = w.value < 0.0;
  return w;
}

KernelResult jump_kernel(const std::vector<JumpOperator>& jump_operators,
                         int ambient_n) {
  const Eigen::Index dim = Eigen::Index{1} << ambient_n;
  Matrix stacked(dim * static_cast<Eigen::Index>(jump_operators.size()), dim);
  for (std::size_t k = 0; k < jump_operators.size(); ++k)
    stacked.middleRows(static_cast<Eigen::Index>(k) * dim, dim) =
        Matrix(protocol::jump_sparse(jump_operators[k], ambient_n));

  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index null_dim = 0;
  for (Eigen::Index i = sv.size(); i-- > 0;) {
    if (sv(i) < 1e-10)
      ++null_dim;
    else
      break;
  }
  KernelResult result;
  result.dimension = static_cast<int>(null_dim);
  result.basis = svd.matrixV().rightCols(null_dim);
  return result;
}

double rate_model_ratio(double epsilon_inf, double tau, double gamma_w) {
  return epsilon_inf / (tau * gamma_w);
}

}  // namespace wstab::analysis
