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

#include "wstab/protocol.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wstab::protocol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit_phase(double arg) { return std::polar(1.0, arg); }

void check_edges(const HypergraphConfig& config) {
  std::set<std::vector<int>> seen;
  for (const auto& e : config.edges) {
    if (e.size() < 3) throw std::invalid_argument("edge width must be >= 3");
    if (!std::is_sorted(e.begin(), e.end()))
      throw std::invalid_argument("edge indices must be sorted");
    for (int q : e)
      if (q < 1 || q > config.n_qubits)
        throw std::out_of_range("edge qubit index out of range");
    if (!seen.insert(e).second)
      throw std::invalid_argument("duplicate edge");
  }
}

}  // namespace

JumpOperator global_jump_coefficients(int n_qubits) {
  if (n_qubits < 3)
    throw std::invalid_argument("global jump operator requires n_qubits >= 3");
  std::vector<int> edge(n_qubits);
  std::iota(edge.begin(), edge.end(), 1);
  std::vector<Complex> r(n_qubits);
  for (int j = 1; j <= n_qubits; ++j) {
    r[j - 1] = unit_phase(kTwoPi * (j - 1) / n_qubits);
    if (j != n_qubits) r[j - 1] += unit_phase(kTwoPi * (j - 1) / (n_qubits - 1));
  }
  return build_jump_operator(std::move(edge), std::move(r), 1.0);
}

std::array<Complex, 3> modular_jump_coefficients(double theta, double phi,
                                                 double gamma) {
  if (gamma < 0) throw std::invalid_argument("gamma must be nonnegative");
  // Columns of F are the uniform, omega and conjugate-omega phase vectors;
  // F/sqrt(3) is unitary, so the output norm equals the input norm gamma.
  const Complex w1 = unit_phase(-kTwoPi / 3.0), w2 = unit_phase(-2.0 * kTwoPi / 3.0);
  const Complex v1 = gamma * std::cos(theta);
  const Complex v2 = unit_phase(phi) * gamma * std::sin(theta);
  const double s = 1.0 / std::sqrt(3.0);
  return {s * (v1 + v2), s * (w1 * v1 + std::conj(w1) * v2),
          s * (w2 * v1 + std::conj(w2) * v2)};
}

std::array<Complex, 3> default_width3_coefficients() {
  const double s = 1.0 / std::sqrt(6.0);
  return {Complex(s), Complex(s), Complex(-2.0 * s)};
}

std::array<Complex, 4> default_width4_coefficients() {
  return {Complex(0.584), Complex(-0.146, 0.545), Complex(-0.438, -0.253),
          Complex(0.0, -0.292)};
}

JumpOperator build_jump_operator(std::vector<int> edge,
                                 std::vector<Complex> coefficients,
                                 double gamma) {
  if (edge.size() != coefficients.size())
    throw std::invalid_argument("edge/coefficient length mismatch");
  if (edge.size() < 3)
    throw std::invalid_argument("linear dissipation requires width >= 3");
  if (gamma < 0) throw std::invalid_argument("gamma must be nonnegative");
  Complex sum = 0;
  double norm2 = 0;
  for (const auto& c : coefficients) {
    sum += c;
    norm2 += std::norm(c);
  }
  if (norm2 <= 0) throw std::invalid_argument("all coefficients are zero");
  if (std::abs(sum) > 1e-10 * std::sqrt(norm2))
    throw std::invalid_argument("jump coefficients must sum to zero");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& c : coefficients) c *= scale;
  return {std::move(edge), std::move(coefficients), gamma * norm2};
}

SparseOp jump_sparse(const JumpOperator& op, int ambient_n) {
  for (int q : op.edge)
    if (q < 1 || q > ambient_n) throw std::out_of_range("edge exceeds ambient system");
  const std::uint64_t dim = std::uint64_t{1} << ambient_n;
  std::vector<Eigen::Triplet<Complex>> trip;
  for (std::size_t i = 0; i < op.edge.size(); ++i) {
    const std::uint64_t mask = qalg::qubit_mask(ambient_n, op.edge[i]);
    for (std::uint64_t b = 0; b < dim; ++b)
      if (b & mask) trip.emplace_back(b ^ mask, b, op.r[i]);
  }
  SparseOp m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Vector apply_jump(const JumpOperator& op, int ambient_n, const Vector& v) {
  const std::uint64_t dim = std::uint64_t{1} << ambient_n;
  if (static_cast<std::uint64_t>(v.size()) != dim)
    throw std::invalid_argument("dimension mismatch");
  Vector out = Vector::Zero(v.size());
  for (std::size_t i = 0; i < op.edge.size(); ++i) {
    const std::uint64_t mask = qalg::qubit_mask(ambient_n, op.edge[i]);
    for (std::uint64_t b = 0; b < dim; ++b)
      if (b & mask) out[b ^ mask] += op.r[i] * v[b];
  }
  return out;
}

HypergraphConfig standard_config(int n_qubits, ConfigFamily family) {
  HypergraphConfig config{n_qubits, {}};
  switch (family) {
    case ConfigFamily::Chain3:
      if (n_qubits < 3 || n_qubits % 2 == 0)
        throw std::invalid_argument("chain3 requires odd N >= 3");
      for (int s = 1; s + 2 <= n_qubits; s += 2)
        config.edges.push_back({s, s + 1, s + 2});
      break;
    case ConfigFamily::Ring3:
      if (n_qubits < 4 || n_qubits % 2 == 1)
        throw std::invalid_argument("ring3 requires even N >= 4");
      for (int s = 1; s + 2 <= n_qubits; s += 2)
        config.edges.push_back({s, s + 1, s + 2});
      config.edges.push_back({1, n_qubits - 1, n_qubits});
      break;
    case ConfigFamily::Chain4: {
      if (n_qubits < 4) throw std::invalid_argument("chain4 requires N >= 4");
      const int m = (n_qubits - 2) / 3 + 1;  // ceil((N-1)/3)
      for (int i = 1; i < m; ++i)
        config.edges.push_back({3 * i - 2, 3 * i - 1, 3 * i, 3 * i + 1});
      config.edges.push_back(
          {n_qubits - 3, n_qubits - 2, n_qubits - 1, n_qubits});
      break;
    }
    case ConfigFamily::Global: {
      if (n_qubits < 3) throw std::invalid_argument("global requires N >= 3");
      std::vector<int> all(n_qubits);
      std::iota(all.begin(), all.end(), 1);
      config.edges.push_back(std::move(all));
      break;
    }
  }
  check_edges(config);
  return config;
}

Connectivity is_connected(const HypergraphConfig& config) {
  check_edges(config);
  const int n = config.n_qubits;
  const int m = static_cast<int>(config.edges.size());
  std::vector<bool> seen(n + 1, false);
  for (const auto& e : config.edges)
    for (int q : e) seen[q] = true;
  bool covered = true;
  for (int q = 1; q <= n; ++q) covered = covered && seen[q];
  if (m == 0) return {false, false};

  // Union-find over edges, merged when they share a qubit.
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::vector<int> shared;
      std::set_intersection(config.edges[i].begin(), config.edges[i].end(),
                            config.edges[j].begin(), config.edges[j].end(),
                            std::back_inserter(shared));
      if (!shared.empty()) parent[find(i)] = find(j);
    }
  int components = 0;
  for (int i = 0; i < m; ++i)
    if (find(i) == i) ++components;
  const bool connected = covered && components == 1;
  return {connected, covered};
}

int min_dissipator_count(int n_qubits, int width) {
  if (width < 3 || n_qubits < width)
    throw std::invalid_argument("need width >= 3 and n_qubits >= width");
  return n_qubits / (width - 1);
}

HypergraphConfig canonical_form(const HypergraphConfig& config) {
  check_edges(config);
  const int n = config.n_qubits;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> best;
  bool first = true;
  do {
    std::vector<std::vector<int>> relabeled;
    relabeled.reserve(config.edges.size());
    for (const auto& e : config.edges) {
      std::vector<int> r;
      r.reserve(e.size());
      for (int q : e) r.push_back(perm[q - 1]);
      std::sort(r.begin(), r.end());
      relabeled.push_back(std::move(r));
    }
    std::sort(relabeled.begin(), relabeled.end());
    if (first || relabeled < best) {
      best = std::move(relabeled);
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {n, std::move(best)};
}

std::vector<HypergraphConfig> enumerate_configs(int n_qubits, int width) {
  if (n_qubits > 8)
    throw std::invalid_argument("enumeration budget limited to n_qubits <= 8");
  if (width < 3 || width > n_qubits)
    throw std::invalid_argument("need 3 <= width <= n_qubits");

  // All possible width-w edges, lexicographic.
  std::vector<std::vector<int>> all_edges;
  std::vector<int> pick(width);
  std::iota(pick.begin(), pick.end(), 1);
  while (true) {
    all_edges.push_back(pick);
    int i = width - 1;
    while (i >= 0 && pick[i] == n_qubits - (width - 1 - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < width; ++j) pick[j] = pick[j - 1] + 1;
  }

  // Grow canonical representatives one edge at a time: every class with m+1
  // edges contains a labeling extending some canonical class with m edges.
  std::vector<HypergraphConfig> result;
  std::set<std::vector<std::vector<int>>> level;
  for (const auto& e : all_edges)
    level.insert(canonical_form({n_qubits, {e}}).edges);
  while (!level.empty()) {
    for (const auto& edges : level) result.push_back({n_qubits, edges});
    std::set<std::vector<std::vector<int>>> next;
    for (const auto& edges : level) {
      for (const auto& e : all_edges) {
        if (std::binary_search(edges.begin(), edges.end(), e)) continue;
        auto grown = edges;
        grown.insert(std::upper_bound(grown.begin(), grown.end(), e), e);
        next.insert(canonical_form({n_qubits, grown}).edges);
      }
    }
    level = std::move(next);
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const HypergraphConfig& a, const HypergraphConfig& b) {
                     if (a.edges.size() != b.edges.size())
                       return a.edges.size() < b.edges.size();
                     return a.edges < b.edges;
                   });
  return result;
}

HamiltonianSpec build_hamiltonian(int n_qubits, HamiltonianFamily family) {
  if (n_qubits < 3)
    throw std::invalid_argument("build_hamiltonian requires n_qubits >= 3");
  HamiltonianSpec spec;
  spec.n_qubits = n_qubits;
  switch (family) {
    case HamiltonianFamily::Minimal:
      // Drives on qubits 1 and 2; each unbalanced pair closed with a single
      // trilinear coefficient set to -(a_k + a_l).
      spec.a[1] = 1.0;
      spec.a[2] = -1.0;
      for (int j = 3; j <= n_qubits; ++j) {
        spec.f[{2, 1, j}] = -1.0;  // pair {1,j}: a_1 + a_j = 1
        spec.f[{1, 2, j}] = 1.0;   // pair {2,j}: a_2 + a_j = -1
      }
      break;
    case HamiltonianFamily::NearlyMinimal: {
      const Complex w = unit_phase(kTwoPi / 3.0);
      spec.a[1] = 1.0;
      spec.a[2] = w;
      spec.a[3] = w * w;
      spec.f[{1, 2, 3}] = 1.0;
      spec.f[{2, 1, 3}] = w;
      spec.f[{3, 1, 2}] = w * w;
      for (int j = 4; j <= n_qubits; ++j) {
        spec.f[{1, 2, j}] = 1.0;
        spec.f[{1, 3, j}] = 1.0;
        spec.f[{2, 1, j}] = w;
        spec.f[{2, 3, j}] = w;
        spec.f[{3, 1, j}] = w * w;
        spec.f[{3, 2, j}] = w * w;
      }
      break;
    }
    case HamiltonianFamily::Maximal:
      for (int j = 1; j <= n_qubits; ++j)
        spec.a[j] = unit_phase(kTwoPi * j / n_qubits);
      for (int k = 1; k <= n_qubits; ++k)
        for (int l = k + 1; l <= n_qubits; ++l)
          for (int j = 1; j <= n_qubits; ++j)
            if (j != k && j != l)
              spec.f[{j, k, l}] = unit_phase(kTwoPi * j / n_qubits);
      break;
  }
  return spec;
}

ConstraintReport validate_hamiltonian(const HamiltonianSpec& spec) {
  ConstraintReport report;
  const int n = spec.n_qubits;
  auto coeff_a = [&](int j) {
    auto it = spec.a.find(j);
    return it == spec.a.end() ? Complex(0) : it->second;
  };
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) {
      Complex res = coeff_a(k) + coeff_a(l);
      for (int j = 1; j <= n; ++j) {
        if (j == k || j == l) continue;
        auto it = spec.f.find({j, k, l});
        if (it != spec.f.end()) res += it->second;
      }
      report.pair_residuals[{k, l}] = res;
      report.max_abs_residual = std::max(report.max_abs_residual, std::abs(res));
    }
  Complex sum = 0;
  for (const auto& [j, aj] : spec.a) sum += std::conj(aj);
  report.sum_residual = sum;
  report.max_abs_residual = std::max(report.max_abs_residual, std::abs(sum));
  return report;
}

namespace {

// Exact rank over the rationals; entries are 0/1 so cpp_rational never
// overflows or loses precision.
int rational_rank(const Eigen::MatrixXd& m) {
  using Rational = boost::multiprecision::cpp_rational;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = Rational(int(std::lround(m(i, j))));
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i)
      if (a[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int i = rank + 1; i < rows; ++i) {
      if (a[i][col] == 0) continue;
      const Rational factor = a[i][col] / a[rank][col];
      for (int j = col; j < cols; ++j) a[i][j] -= factor * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

ConstraintMatrix constraint_matrix(int n_qubits) {
  if (n_qubits < 3 || n_qubits > 12)
    throw std::invalid_argument("constraint_matrix requires 3 <= N <= 12");
  const int n = n_qubits;
  std::map<PairKey, int> pair_col;
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k)
      pair_col.emplace(PairKey{j, k}, int(pair_col.size()));
  const int n_pairs = static_cast<int>(pair_col.size());
  const int n_triples = n * (n - 1) * (n - 2) / 6;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_triples, n_pairs);
  int row = 0;
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k)
      for (int l = k + 1; l <= n; ++l) {
        m(row, pair_col[{j, k}]) = 1;
        m(row, pair_col[{j, l}]) = 1;
        m(row, pair_col[{k, l}]) = 1;
        ++row;
      }
  ConstraintMatrix out{std::move(m), 0};
  out.rank = rational_rank(out.m);
  return out;
}

bool bilinear_solution_exists(int n_qubits) {
  if (n_qubits < 3) throw std::invalid_argument("requires n_qubits >= 3");
  const auto cm = constraint_matrix(n_qubits);
  return cm.rank < cm.m.cols();
}

ResourceCounts resource_report(const ProtocolSpec& protocol) {
  ResourceCounts counts;
  for (const auto& [j, aj] : protocol.hamiltonian.a)
    if (aj != Complex(0)) ++counts.n_linear;
  for (const auto& [key, fj] : protocol.hamiltonian.f)
    if (fj != Complex(0)) ++counts.n_trilinear;
  counts.n_dissipators = static_cast<int>(protocol.dissipators.size());
  for (const auto& d : protocol.dissipators)
    counts.max_width = std::max(counts.max_width, d.width());
  if (counts.n_trilinear > 0)
    counts.max_interaction_depth = 3;
  else if (counts.n_linear > 0)
    counts.max_interaction_depth = 1;
  return counts;
}

SparseOp hamiltonian_sparse(const HamiltonianSpec& spec) {
  const int n = spec.n_qubits;
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<Eigen::Triplet<Complex>> trip;
  auto add_with_hc = [&](std::uint64_t row, std::uint64_t col, Complex v) {
    trip.emplace_back(row, col, v);
    trip.emplace_back(col, row, std::conj(v));
  };
  for (const auto& [j, aj] : spec.a) {
    const std::uint64_t mask = qalg::qubit_mask(n, j);
    for (std::uint64_t b = 0; b < dim; ++b)
      if (!(b & mask)) add_with_hc(b | mask, b, aj);  // a_j sigma+_j
  }
  for (const auto& [key, fv] : spec.f) {
    const auto [j, k, l] = key;
    const std::uint64_t mj = qalg::qubit_mask(n, j);
    const std::uint64_t mk = qalg::qubit_mask(n, k);
    const std::uint64_t ml = qalg::qubit_mask(n, l);
    for (std::uint64_t b = 0; b < dim; ++b)
      if ((b & mj) && !(b & mk) && !(b & ml))
        add_with_hc((b ^ mj) | mk | ml, b, fv);  // f sigma_j sigma+_k sigma+_l
  }
  SparseOp h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

std::vector<JumpOperator> default_dissipators(const HypergraphConfig& config) {
  check_edges(config);
  std::vector<JumpOperator> ops;
  for (const auto& e : config.edges) {
    if (e.size() == 3) {
      auto c = default_width3_coefficients();
      ops.push_back(build_jump_operator(e, {c.begin(), c.end()}));
    } else if (e.size() == 4) {
      auto c = default_width4_coefficients();
      ops.push_back(build_jump_operator(e, {c.begin(), c.end()}));
    } else {
      throw std::invalid_argument("no default coefficients for this width");
    }
  }
  return ops;
}

ProtocolSpec make_protocol(int n_qubits, ConfigFamily cf, HamiltonianFamily hf,
                           double lambda) {
  ProtocolSpec spec;
  spec.hamiltonian = build_hamiltonian(n_qubits, hf);
  if (cf == ConfigFamily::Global)
    spec.dissipators = {global_jump_coefficients(n_qubits)};
  else
    spec.dissipators = default_dissipators(standard_config(n_qubits, cf));
  spec.lambda = lambda;
  return spec;
}

std::string family_name(ConfigFamily f) {
  switch (f) {
    case ConfigFamily::Chain3: return "chain3";
    case ConfigFamily::Ring3: return "ring3";
    case ConfigFamily::Chain4: return "chain4";
    case ConfigFamily::Global: return "global";
  }
  return "?";
}

std::string family_name(HamiltonianFamily f) {
  switch (f) {
    case HamiltonianFamily::Minimal: return "minimal";
    case HamiltonianFamily::NearlyMinimal: return "nearly_minimal";
    case HamiltonianFamily::Maximal: return "maximal";
  }
  return "?";
}

}  // namespace wstab::protocol
