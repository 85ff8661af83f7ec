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

#include "wstab/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wstab::dynamics {

namespace {

// Dense operator products beat sparse ones on very small systems.
constexpr Eigen::Index kDenseDimLimit = 64;

SparseOp identity_sparse(Eigen::Index dim) {
  SparseOp id(dim, dim);
  id.setIdentity();
  return id;
}

}  // namespace

LindbladGenerator::LindbladGenerator(ProtocolSpec spec)
    : spec_(std::move(spec)), dim_(Eigen::Index{1} << spec_.n_qubits()) {
  const int n = spec_.n_qubits();
  if (n < 1) throw std::invalid_argument("protocol has no qubits");
  if (spec_.lambda <= 0) throw std::invalid_argument("lambda must be positive");

  std::vector<std::pair<double, SparseOp>> channels;
  for (const auto& op : spec_.dissipators) {
    if (op.gamma < 0) throw std::invalid_argument("dissipator rate negative");
    channels.emplace_back(op.gamma, protocol::jump_sparse(op, n));
  }
  if (spec_.decoherence) {
    const auto& dec = *spec_.decoherence;
    if (static_cast<int>(dec.gamma_minus.size()) != n ||
        static_cast<int>(dec.gamma_z.size()) != n)
      throw std::invalid_argument("decoherence rate list length mismatch");
    for (int j = 1; j <= n; ++j) {
      if (dec.gamma_minus[j - 1] < 0 || dec.gamma_z[j - 1] < 0)
        throw std::invalid_argument("decoherence rates must be nonnegative");
      if (dec.gamma_minus[j - 1] > 0)
        channels.emplace_back(
            dec.gamma_minus[j - 1],
            qalg::site_operator(n, j, qalg::SiteKind::Lower).sparse());
      if (dec.gamma_z[j - 1] > 0)
        channels.emplace_back(
            dec.gamma_z[j - 1],
            qalg::site_operator(n, j, qalg::SiteKind::PauliZ).sparse());
    }
  }

  SparseOp h = protocol::hamiltonian_sparse(spec_.hamiltonian);
  SparseOp drift = (Complex(0, -spec_.lambda) * h).eval();
  for (const auto& [rate, c] : channels) {
    SparseOp cdagc = (c.adjoint() * c).eval();
    drift = (drift - Complex(0.5 * rate) * cdagc).eval();
  }
  drift_ = std::move(drift);
  channels_ = std::move(channels);

  use_dense_ = dim_ <= kDenseDimLimit;
  if (use_dense_) {
    drift_dense_ = Matrix(drift_);
    for (const auto& [rate, c] : channels_)
      channels_dense_.emplace_back(rate, Matrix(c));
  }
}

Matrix LindbladGenerator::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw std::invalid_argument("density matrix dimension mismatch");
  if (use_dense_) {
    Matrix out = drift_dense_ * rho;
    out += rho * drift_dense_.adjoint();
    for (const auto& [rate, c] : channels_dense_)
      out.noalias() += rate * (c * rho * c.adjoint());
    return out;
  }
  Matrix out = drift_ * rho;
  out += rho * Matrix(drift_.adjoint());
  for (const auto& [rate, c] : channels_) {
    Matrix crho = c * rho;
    out += rate * (crho * Matrix(c.adjoint()));
  }
  return out;
}

Matrix LindbladGenerator::dense_superoperator() const {
  if (spec_.n_qubits() > 5)
    throw std::invalid_argument("dense superoperator limited to n_qubits <= 5");
  const Eigen::Index d = dim_;
  const Matrix g(drift_);
  const Matrix id = Matrix::Identity(d, d);
  auto kron = [d](const Matrix& a, const Matrix& b) {
    Matrix out(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        out.block(i * d, j * d, d, d) = a(i, j) * b;
    return out;
  };
  // Column-major vec: vec(A rho B) = (B^T kron A) vec(rho).
  Matrix sup = kron(id, g) + kron(g.conjugate(), id);
  for (const auto& [rate, c] : channels_) {
    const Matrix cd(c);
    sup += rate * kron(cd.conjugate(), cd);
  }
  return sup;
}

namespace {

// Dormand-Prince 5(4) embedded pair with FSAL.
struct Dopri5 {
  static constexpr double c[7] = {0, 1. / 5, 3. / 10, 4. / 5, 8. / 9, 1., 1.};
  static constexpr double a2[1] = {1. / 5};
  static constexpr double a3[2] = {3. / 40, 9. / 40};
  static constexpr double a4[3] = {44. / 45, -56. / 15, 32. / 9};
  static constexpr double a5[4] = {19372. / 6561, -25360. / 2187, 64448. / 6561,
                                   -212. / 729};
  static constexpr double a6[5] = {9017. / 3168, -355. / 33, 46732. / 5247,
                                   49. / 176, -5103. / 18656};
  static constexpr double b[7] = {35. / 384,      0., 500. / 1113, 125. / 192,
                                  -2187. / 6784, 11. / 84, 0.};
  static constexpr double e[7] = {71. / 57600,       0., -71. / 16695,
                                  71. / 1920,        -17253. / 339200,
                                  22. / 525,         -1. / 40};
};

class Integrator {
 public:
  Integrator(const LindbladGenerator& gen, const EvolutionSettings& s)
      : gen_(gen), rel_(s.rel_tol), abs_(s.abs_tol) {}

  // Call when rho was modified outside the integrator (e.g. renormalized).
  void invalidate() { have_k1_ = false; }

  // Advances rho from t to t_end in place.
  void advance(Matrix& rho, double t, double t_end) {
    if (t_end <= t) return;
    if (!have_k1_) {
      k_[0] = gen_.apply(rho);
      have_k1_ = true;
    }
    if (h_ <= 0) h_ = initial_step(rho, t_end - t);
    while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
      double h = std::min(h_, t_end - t);
      if (h_ < 1e-13 * std::max(1.0, std::abs(t)))
        throw std::runtime_error("integrator step-size underflow");
      Matrix y2 = rho + h * Dopri5::a2[0] * k_[0];
      k_[1] = gen_.apply(y2);
      Matrix y3 = rho + h * (Dopri5::a3[0] * k_[0] + Dopri5::a3[1] * k_[1]);
      k_[2] = gen_.apply(y3);
      Matrix y4 = rho + h * (Dopri5::a4[0] * k_[0] + Dopri5::a4[1] * k_[1] +
                             Dopri5::a4[2] * k_[2]);
      k_[3] = gen_.apply(y4);
      Matrix y5 = rho + h * (Dopri5::a5[0] * k_[0] + Dopri5::a5[1] * k_[1] +
                             Dopri5::a5[2] * k_[2] + Dopri5::a5[3] * k_[3]);
      k_[4] = gen_.apply(y5);
      Matrix y6 = rho + h * (Dopri5::a6[0] * k_[0] + Dopri5::a6[1] * k_[1] +
                             Dopri5::a6[2] * k_[2] + Dopri5::a6[3] * k_[3] +
                             Dopri5::a6[4] * k_[4]);
      k_[5] = gen_.apply(y6);
      Matrix ynew = rho + h * (Dopri5::b[0] * k_[0] + Dopri5::b[2] * k_[2] +
                               Dopri5::b[3] * k_[3] + Dopri5::b[4] * k_[4] +
                               Dopri5::b[5] * k_[5]);
      k_[6] = gen_.apply(ynew);
      Matrix err = h * (Dopri5::e[0] * k_[0] + Dopri5::e[2] * k_[2] +
                        Dopri5::e[3] * k_[3] + Dopri5::e[4] * k_[4] +
                        Dopri5::e[5] * k_[5] + Dopri5::e[6] * k_[6]);
      const double norm = error_norm(err, rho, ynew);
      if (norm <= 1.0) {
        t += h;
        rho = std::move(ynew);
        k_[0] = k_[6];  // FSAL
      }
      const double factor =
          norm > 0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
      h_ = h * std::clamp(factor, 0.2, 5.0);
    }
  }

 private:
  double initial_step(const Matrix& rho, double span) const {
    const double d0 = rho.norm();
    const double d1 = k_[0].norm();
    double h = (d1 > 1e-12) ? 0.01 * std::max(d0, 1.0) / d1 : 0.1;
    return std::min(h, span);
  }

  double error_norm(const Matrix& err, const Matrix& y0,
                    const Matrix& y1) const {
    double acc = 0;
    const auto* e = err.data();
    const auto* a = y0.data();
    const auto* b = y1.data();
    const Eigen::Index n = err.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale =
          abs_ + rel_ * std::max(std::abs(a[i]), std::abs(b[i]));
      const double q = std::abs(e[i]) / scale;
      acc += q * q;
    }
    return std::sqrt(acc / double(n));
  }

  const LindbladGenerator& gen_;
  double rel_, abs_;
  double h_ = 0;
  bool have_k1_ = false;
  Matrix k_[7];
};

double infidelity(const Matrix& rho, const Vector& target, bool squared) {
  const double f = (target.adjoint() * rho * target)(0).real();
  const double eps = squared ? 1.0 - f * f : 1.0 - f;
  return std::max(eps, 0.0);
}

// Windowed steady-state detector over sampled epsilon values.
class WindowDetector {
 public:
  WindowDetector(double window, double threshold)
      : window_(window), threshold_(threshold) {}

  bool push(double t, double eps, const std::vector<double>& times,
            const std::vector<double>& epsilon) {
    // Pointwise check against the sample one window earlier.
    bool ok = false;
    if (t >= window_) {
      auto it = std::upper_bound(times.begin(), times.end(), t - window_);
      if (it != times.begin()) {
        const std::size_t j = std::distance(times.begin(), it) - 1;
        const double rel =
            std::abs(eps - epsilon[j]) / std::max(eps, 1e-12);
        ok = rel < threshold_;
        // Dark-state floor: treat an epsilon that has collapsed to numerical
        // zero as stationary even though the relative change is ill-defined.
        if (eps < 1e-10 && epsilon[j] < 1e-10) ok = true;
      }
    }
    if (ok) {
      if (run_start_ < 0) run_start_ = t;
      return t - run_start_ >= window_;
    }
    run_start_ = -1;
    return false;
  }

 private:
  double window_, threshold_;
  double run_start_ = -1;
};

SimulationTrace evolve_impl(const LindbladGenerator& gen,
                            const DensityMatrix& rho0,
                            const EvolutionSettings& settings,
                            bool stop_on_window) {
  if (rho0.dim() != gen.dim())
    throw std::invalid_argument("initial state dimension mismatch");
  if (settings.t_max <= 0) throw std::invalid_argument("t_max must be positive");
  if (settings.rel_tol <= 0 || settings.rel_tol > 1e-2 ||
      settings.abs_tol <= 0 || settings.abs_tol > 1e-2)
    throw std::invalid_argument("tolerances must lie in (0, 1e-2]");

  const Vector target = qalg::w_state(gen.n_qubits()).amplitudes;
  const double dt = settings.sample_interval > 0 ? settings.sample_interval
                                                 : settings.t_max / 1000.0;
  SimulationTrace trace;
  Matrix rho = rho0.matrix;
  Integrator stepper(gen, settings);
  WindowDetector detector(settings.steady_state_window,
                          settings.steady_state_threshold);

  double t = 0;
  trace.times.push_back(0);
  trace.epsilon.push_back(infidelity(rho, target, settings.squared_infidelity));
  bool window_converged = false;
  while (t < settings.t_max - 1e-12) {
    const double t_next = std::min(t + dt, settings.t_max);
    stepper.advance(rho, t, t_next);
    t = t_next;
    // Renormalize trace at most once per sample; drift is recorded, never
    // silently discarded.
    const double tr = rho.trace().real();
    trace.max_trace_drift =
        std::max(trace.max_trace_drift, std::abs(tr - 1.0));
    if (std::abs(tr - 1.0) > 1e-15) rho /= tr;
    rho = 0.5 * (rho + rho.adjoint().eval());
    stepper.invalidate();
    const double eps =
        infidelity(rho, target, settings.squared_infidelity);
    trace.times.push_back(t);
    trace.epsilon.push_back(eps);
    if (detector.push(t, eps, trace.times, trace.epsilon)) {
      window_converged = true;
      if (stop_on_window) break;
    }
    if (settings.stop_epsilon > 0 && eps < settings.stop_epsilon) {
      window_converged = true;  // requested floor reached
      break;
    }
  }
  trace.converged = window_converged;
  if (window_converged) trace.epsilon_inf = trace.epsilon.back();
  trace.final_state = DensityMatrix{gen.n_qubits(), std::move(rho)};
  return trace;
}

}  // namespace

SimulationTrace evolve(const LindbladGenerator& gen, const DensityMatrix& rho0,
                       const EvolutionSettings& settings) {
  return evolve_impl(gen, rho0, settings, false);
}

SteadyStateResult steady_state(const LindbladGenerator& gen,
                               const DensityMatrix& rho0,
                               const EvolutionSettings& settings) {
  SteadyStateResult result;
  result.trace = evolve_impl(gen, rho0, settings, true);
  result.converged = result.trace.converged;
  result.epsilon_inf = result.trace.epsilon.back();
  result.rho_inf = result.trace.final_state;
  return result;
}

std::vector<Complex> dense_liouvillian_spectrum(const LindbladGenerator& gen) {
  const Matrix sup = gen.dense_superoperator();
  Eigen::ComplexEigenSolver<Matrix> solver(sup, /*computeEigenvectors=*/false);
  const auto& vals = solver.eigenvalues();
  return {vals.data(), vals.data() + vals.size()};
}

int zero_eigenvalue_count(const std::vector<Complex>& spectrum, double tol) {
  int count = 0;
  for (const auto& ev : spectrum)
    if (std::abs(ev) < tol) ++count;
  return count;
}

double spectral_gap(const std::vector<Complex>& spectrum, double tol) {
  double max_real = -std::numeric_limits<double>::infinity();
  for (const auto& ev : spectrum) {
    if (std::abs(ev) < tol) continue;
    max_real = std::max(max_real, ev.real());
  }
  if (!std::isfinite(max_real))
    throw std::invalid_argument("spectrum has no nonzero eigenvalues");
  return -max_real;
}

double visible_spectral_gap(const LindbladGenerator& gen,
                            const DensityMatrix& rho0,
                            const QuantumState& target, double amp_tol) {
  const Matrix sup = gen.dense_superoperator();
  Eigen::ComplexEigenSolver<Matrix> solver(sup);
  const Eigen::Index d2 = sup.rows();
  const Vector r0 = Eigen::Map<const Vector>(rho0.matrix.data(), d2);
  const Matrix proj = qalg::pure_density(target).matrix;
  const Vector obs = Eigen::Map<const Vector>(proj.data(), d2);
  // rho(t) = sum_i c_i e^{lambda_i t} v_i; the observable weights each mode
  // by <obs, v_i>, so modes with zero product never show up in epsilon(t)
  const Vector coeffs = solver.eigenvectors().colPivHouseholderQr().solve(r0);
  double max_real = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d2; ++i) {
    const Complex ev = solver.eigenvalues()(i);
    if (std::abs(ev) < 1e-9) continue;
    const Complex amp = coeffs(i) * obs.dot(solver.eigenvectors().col(i));
    if (std::abs(amp) < amp_tol) continue;
    max_real = std::max(max_real, ev.real());
  }
  if (!std::isfinite(max_real))
    throw std::invalid_argument("no visible decaying mode");
  return -max_real;
}

QuantumState random_pure_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vector amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    amps[i] = Complex(normal(rng), normal(rng));
  amps /= amps.norm();
  return {n_qubits, std::move(amps)};
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  const Matrix diff = a.matrix - b.matrix;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 *
                                               (diff + diff.adjoint().eval()));
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace wstab::dynamics
