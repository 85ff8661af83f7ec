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

#include <cmath>

#include "wstab/analysis.hpp"

using namespace wstab;
using namespace wstab::analysis;
using protocol::build_jump_operator;
using protocol::default_width3_coefficients;

namespace {

std::pair<std::vector<double>, std::vector<double>> sampled(
    double t_max, int n, double (*f)(double)) {
  std::vector<double> t(n), eps(n);
  for (int i = 0; i < n; ++i) {
    t[static_cast<std::size_t>(i)] = t_max * i / (n - 1);
    eps[static_cast<std::size_t>(i)] = f(t[static_cast<std::size_t>(i)]);
  }
  return {t, eps};
}

}  // namespace

TEST_CASE("fit recovers an exact exponential") {
  auto [t, eps] = sampled(60.0, 200, +[](double x) { return 0.3 * std::exp(-x / 5.0); });
  auto fit = fit_time_constant(t, eps);
  REQUIRE(fit.ok);
  CHECK(fit.tau == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(fit.epsilon0 == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(fit.r_squared > 1.0 - 1e-12);
}

TEST_CASE("fit picks the slow mode of a two-exponential decay") {
  auto [t, eps] = sampled(90.0, 400, +[](double x) {
    return 0.5 * std::exp(-x) + 0.3 * std::exp(-x / 5.0);
  });
  auto fit = fit_time_constant(t, eps);
  REQUIRE(fit.ok);
  CHECK(std::abs(fit.tau - 5.0) / 5.0 < 0.02);
}

TEST_CASE("fit is exactly covariant under time rescaling") {
  auto [t, eps] = sampled(60.0, 300, +[](double x) {
    return 0.4 * std::exp(-x / 3.0) + 1e-30 * std::exp(-x / 30.0);
  });
  auto base = fit_time_constant(t, eps);
  REQUIRE(base.ok);
  std::vector<double> t2(t);
  for (auto& x : t2) x *= 7.0;
  auto scaled = fit_time_constant(t2, eps);
  REQUIRE(scaled.ok);
  CHECK(scaled.tau == doctest::Approx(7.0 * base.tau).epsilon(1e-12));
}

TEST_CASE("fit refuses flat or too-short traces") {
  std::vector<double> t(50), eps(50, 0.5);
  for (int i = 0; i < 50; ++i) t[static_cast<std::size_t>(i)] = i;
  CHECK_FALSE(fit_time_constant(t, eps).ok);
  CHECK_FALSE(fit_time_constant({0, 1, 2}, {1, 0.5, 0.25}).ok);
}

TEST_CASE("decay_rate_symmetric reproduces the W and GHZ rates") {
  const int n5 = 5;
  protocol::DecoherenceRates equal5;
  equal5.gamma_minus.assign(n5, 1e-3);
  equal5.gamma_z.assign(n5, 1e-3);
  // W: alpha = sqrt((N-1)/N), beta = 1/sqrt(N), overlap 0 -> per-qubit rate
  const double w = decay_rate_symmetric(std::sqrt(4.0 / 5.0),
                                        1.0 / std::sqrt(5.0), 0.0, equal5);
  CHECK(w == doctest::Approx(1e-3 * (1.0 + 4.0 * 4.0 / 5.0)).epsilon(1e-12));
  CHECK(w == doctest::Approx(w_decay_rate(5, equal5)).epsilon(1e-12));

  protocol::DecoherenceRates equal4;
  equal4.gamma_minus.assign(4, 1e-3);
  equal4.gamma_z.assign(4, 1e-3);
  const double ghz = decay_rate_symmetric(1.0 / std::sqrt(2.0),
                                          1.0 / std::sqrt(2.0), 0.0, equal4);
  CHECK(ghz == doctest::Approx(6e-3).epsilon(1e-12));
  CHECK(ghz == doctest::Approx(ghz_decay_rate(4, equal4)).epsilon(1e-12));

  CHECK(decay_rate_symmetric(1.0, 0.0, 0.0, equal4) == doctest::Approx(0.0));
  CHECK_THROWS(decay_rate_symmetric(1.0, 1.0, 0.0, equal4));
}

TEST_CASE("decay rates depend only on rate sums") {
  protocol::DecoherenceRates a, b;
  a.gamma_minus = {1e-3, 2e-3, 3e-3};
  a.gamma_z = {4e-3, 5e-3, 6e-3};
  b.gamma_minus = {3e-3, 1e-3, 2e-3};
  b.gamma_z = {6e-3, 4e-3, 5e-3};
  CHECK(w_decay_rate(3, a) == doctest::Approx(w_decay_rate(3, b)));
  CHECK(w_decay_rate(3, a) ==
        doctest::Approx(2e-3 + 4.0 * (2.0 / 3.0) * 5e-3).epsilon(1e-12));
}

TEST_CASE("w_decay_rate approaches gamma- + 4 gamma_z at large N") {
  protocol::DecoherenceRates r;
  r.gamma_minus.assign(1000, 1e-3);
  r.gamma_z.assign(1000, 1e-3);
  CHECK(w_decay_rate(1000, r) == doctest::Approx(5e-3).epsilon(1e-2));
}

TEST_CASE("witness expectation") {
  auto a = witness_expectation(0.1, 5);
  CHECK(a.value == doctest::Approx(-0.1));
  CHECK(a.certifies);
  auto b = witness_expectation(1.0 / 3.0, 3);
  CHECK(b.value == doctest::Approx(0.0));
  CHECK_FALSE(b.certifies);
  auto c = witness_expectation(0.239, 5);
  CHECK(c.value == doctest::Approx(0.039));
  CHECK_FALSE(c.certifies);
}

TEST_CASE("kernel of a single global operator has dimension C(N, floor(N/2))") {
  const int expected[] = {3, 6, 10, 20};
  for (int n = 3; n <= 6; ++n) {
    auto kernel = jump_kernel({protocol::global_jump_coefficients(n)}, n);
    CHECK(kernel.dimension == expected[n - 3]);
  }
}

TEST_CASE("kernel of the width-3 pair on five qubits") {
  auto d3 = default_width3_coefficients();
  std::vector<protocol::JumpOperator> ops{
      build_jump_operator({1, 2, 3}, {d3[0], d3[1], d3[2]}),
      build_jump_operator({3, 4, 5}, {d3[2], d3[0], d3[1]}),
  };
  auto kernel = jump_kernel(ops, 5);
  CHECK(kernel.dimension == 5);

  // membership of the W state and the ground state
  auto contains = [&](const Vector& v) {
    return (kernel.basis * (kernel.basis.adjoint() * v) - v).norm() < 1e-8;
  };
  CHECK(contains(qalg::w_state(5).amplitudes));
  CHECK(contains(qalg::ground_state(5).amplitudes));
}

TEST_CASE("kernel dimension is scale invariant") {
  auto d3 = default_width3_coefficients();
  auto base = build_jump_operator({1, 2, 3}, {d3[0], d3[1], d3[2]});
  auto scaled = build_jump_operator(
      {1, 2, 3}, {Complex(0, 2.5) * d3[0], Complex(0, 2.5) * d3[1],
                  Complex(0, 2.5) * d3[2]});
  CHECK(jump_kernel({base}, 4).dimension == jump_kernel({scaled}, 4).dimension);
}

TEST_CASE("rate model ratio") {
  CHECK(rate_model_ratio(2e-3, 20.0, 1e-4) == doctest::Approx(1.0));
  CHECK(rate_model_ratio(3e-3, 20.0, 1e-4) == doctest::Approx(1.5));
}
