// Copyright 2026 The spinlab Authors
//
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

// Qubit/barrier array layouts, the qubit density R_Q, and the search for barrier
// detunings at which every input of a k-qubit star revives at one common time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinlab/evolution.hpp"
#include "spinlab/parallel.hpp"
#include "spinlab/spin_core.hpp"
#include "spinlab/switching.hpp"

namespace spinlab {

enum class Role { qubit, barrier };

inline std::string to_string(Role r) { return r == Role::qubit ? "qubit" : "barrier"; }

inline Role role_from_string(std::string_view s) {
  if (s == "qubit") return Role::qubit;
  if (s == "barrier") return Role::barrier;
  throw ContractError("unknown node role '" + std::string(s) + "'");
}

/// Exact non-negative ratio in lowest terms.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw ContractError("Fraction: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    return {n / g, d / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

using Edge = std::pair<std::size_t, std::size_t>;

class SpinGraph {
 public:
  SpinGraph() = default;
  SpinGraph(std::vector<Role> roles, std::vector<Edge> edges) : roles_(std::move(roles)), edges_(std::move(edges)) {
    validate();
  }

  const std::vector<Role>& roles() const { return roles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return roles_.size(); }
  bool empty() const { return roles_.empty(); }

  std::size_t count(Role r) const { return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), r)); }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(roles_.size(), 0);
    for (const auto& [a, b] : edges_) {
      ++d[a];
      ++d[b];
    }
    return d;
  }

  bool has_qubit_qubit_edge() const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) {
      return roles_[e.first] == Role::qubit && roles_[e.second] == Role::qubit;
    });
  }

  /// Every node of the requested role has degree k.
  bool is_regular(std::size_t k, Role r) const {
    const auto d = degrees();
    for (std::size_t i = 0; i < roles_.size(); ++i) {
      if (roles_[i] == r && d[i] != k) return false;
    }
    return true;
  }

  SpinGraph with_roles_swapped() const {
    std::vector<Role> r = roles_;
    for (auto& x : r) x = x == Role::qubit ? Role::barrier : Role::qubit;
    return {std::move(r), edges_};
  }

 private:
  void validate() const {
    std::set<Edge> seen;
    for (const auto& [a, b] : edges_) {
      if (a >= roles_.size() || b >= roles_.size()) throw ContractError("SpinGraph: edge endpoint out of range");
      if (a == b) throw ContractError("SpinGraph: self-loop on node " + std::to_string(a));
      if (!seen.insert(std::minmax(a, b)).second) {
        throw ContractError("SpinGraph: duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
      }
    }
  }

  std::vector<Role> roles_;
  std::vector<Edge> edges_;
};

/// Qubits stored per spin.
inline Fraction r_q(const SpinGraph& g) {
  if (g.empty()) throw ContractError("r_q: empty graph");
  return Fraction::make(static_cast<std::int64_t>(g.count(Role::qubit)), static_cast<std::int64_t>(g.size()));
}

/// R_Q of a k-regular qubit graph after barrier insertion: 1 / (1 + k/2).
inline Fraction r_q_for_degree(std::int64_t k) { return Fraction::make(2, 2 + k); }

/// Replaces every qubit-qubit edge by a qubit-barrier-qubit pair of edges.
inline SpinGraph insert_barriers(const SpinGraph& qubit_graph) {
  for (Role r : qubit_graph.roles()) {
    if (r != Role::qubit) throw ContractError("insert_barriers: input must contain qubit nodes only");
  }
  std::vector<Role> roles = qubit_graph.roles();
  std::vector<Edge> edges;
  edges.reserve(2 * qubit_graph.edges().size());
  for (const auto& [a, b] : qubit_graph.edges()) {
    const std::size_t barrier = roles.size();
    roles.push_back(Role::barrier);
    edges.emplace_back(a, barrier);
    edges.emplace_back(barrier, b);
  }
  return {std::move(roles), std::move(edges)};
}

namespace lattices {

inline SpinGraph qubit_ring(std::size_t n) {
  if (n < 3) throw ContractError("qubit_ring: need at least 3 qubits");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return {std::vector<Role>(n, Role::qubit), std::move(edges)};
}

inline SpinGraph qubit_path(std::size_t n) {
  if (n < 1) throw ContractError("qubit_path: need at least 1 qubit");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return {std::vector<Role>(n, Role::qubit), std::move(edges)};
}

/// Periodic honeycomb of lx * ly unit cells (two sites each); every node has degree 3.
inline SpinGraph qubit_honeycomb(std::size_t lx, std::size_t ly) {
  if (lx < 3 || ly < 3) throw ContractError("qubit_honeycomb: need at least 3x3 cells");
  auto id = [&](std::size_t x, std::size_t y, std::size_t s) { return 2 * (x * ly + y) + s; };
  std::vector<Edge> edges;
  for (std::size_t x = 0; x < lx; ++x) {
    for (std::size_t y = 0; y < ly; ++y) {
      edges.emplace_back(id(x, y, 0), id(x, y, 1));
      edges.emplace_back(id(x, y, 0), id((x + lx - 1) % lx, y, 1));
      edges.emplace_back(id(x, y, 0), id(x, (y + ly - 1) % ly, 1));
    }
  }
  return {std::vector<Role>(2 * lx * ly, Role::qubit), std::move(edges)};
}

/// Periodic 1-D chain, qubits and barriers alternating.
inline SpinGraph chain(std::size_t n_qubits = 6) { return insert_barriers(qubit_ring(n_qubits)); }

/// Honeycomb qubits with one barrier per bond.
inline SpinGraph hex(std::size_t cells = 3) { return insert_barriers(qubit_honeycomb(cells, cells)); }

/// Same graph as hex with the roles exchanged.
inline SpinGraph hex_complement(std::size_t cells = 3) { return hex(cells).with_roles_swapped(); }

}  // namespace lattices

/// {"nodes": ["qubit", "barrier", ...], "edges": [[i, j], ...]}
inline nlohmann::json graph_to_json(const SpinGraph& g) {
  auto nodes = nlohmann::json::array();
  for (Role r : g.roles()) nodes.push_back(to_string(r));
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return {{"nodes", nodes}, {"edges", edges}};
}

inline SpinGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges")) {
    throw ContractError("graph JSON: expected an object with 'nodes' and 'edges'");
  }
  std::vector<Role> roles;
  for (const auto& n : j.at("nodes")) {
    if (!n.is_string()) throw ContractError("graph JSON: node roles must be strings");
    roles.push_back(role_from_string(n.get<std::string>()));
  }
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      throw ContractError("graph JSON: edges must be pairs of non-negative integers");
    }
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return {std::move(roles), std::move(edges)};
}

// ---------------------------------------------------------------------------
// Star of k qubits around one barrier.

/// Site 0 is the barrier (Zeeman b), sites 1..k the qubits (Zeeman a).
inline ManyBodyOperator star_hamiltonian(int k, double a, double b, double j_xy, double j_z) {
  if (k < 1) throw ContractError("star_hamiltonian: k must be >= 1");
  std::vector<Bond> bonds;
  for (int q = 1; q <= k; ++q) bonds.push_back({0, q});
  std::vector<double> zeeman(static_cast<std::size_t>(k + 1), a);
  zeeman[0] = b;
  return xxz_hamiltonian(k + 1, bonds, j_xy, j_z, zeeman);
}

/// Basis indices with the barrier up, ordered by the qubit bits (qubit bit 1 = up).
inline std::vector<std::size_t> star_inputs(int k) {
  std::vector<std::size_t> out;
  for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
    std::string label = "u";
    for (int q = k - 1; q >= 0; --q) label += ((bits >> q) & 1U) ? 'u' : 'd';
    out.push_back(basis_index(label));
  }
  return out;
}

/// P(barrier up)(t) for one initial basis state, evaluated from a fixed spectrum.
class RevivalCurve {
 public:
  RevivalCurve(const Spectrum& spectrum, std::size_t input, int n_sites)
      : energies_(spectrum.energies()), coeffs_(spectrum.vectors().row(static_cast<Eigen::Index>(input)).adjoint()) {
    std::vector<Eigen::Index> rows;
    for (std::size_t r = 0; r < dimension(n_sites); ++r) {
      if (sz_value(r, 0, n_sites) == 1) rows.push_back(static_cast<Eigen::Index>(r));
    }
    up_rows_.resize(static_cast<Eigen::Index>(rows.size()), spectrum.vectors().cols());
    for (std::size_t k = 0; k < rows.size(); ++k) up_rows_.row(static_cast<Eigen::Index>(k)) = spectrum.vectors().row(rows[k]);
  }

  double operator()(double t) const {
    Vector phased(coeffs_.size());
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) phased(k) = coeffs_(k) * std::polar(1.0, -energies_(k) * t);
    return std::clamp((up_rows_ * phased).squaredNorm(), 0.0, 1.0);
  }

 private:
  Eigen::VectorXd energies_;
  Vector coeffs_;
  Matrix up_rows_;
};

struct CommensurateOptions {
  double tolerance = 1e-6;
  /// Looser revival threshold used to locate periods and rational relations.
  double screen_tolerance = 1e-3;
  int max_multiple = 8;
  double max_time = 40.0;
  /// Time-scan step; zero picks one from the spectral width.
  double scan_step = 0.0;
  bool refine = true;
};

struct RevivalCandidate {
  double detuning = 0.0;  // a - b
  double common_time = 0.0;
  double max_error = 1.0;  // from direct simulation over every input
  std::vector<double> periods;
  std::vector<int> multiples;
  Matrix gate;  // 2^k x 2^k block on the barrier-up inputs
  double gate_unitarity_defect = 0.0;
};

namespace detail {

/// First time in (0, max_time] where the curve rises above 1 - tol; nullopt if none.
/// A curve that never drops below 1 - 1e-12 is reported as stationary (period 0).
inline std::optional<double> first_revival(const RevivalCurve& curve, double tol, double max_time, double step) {
  const long n = static_cast<long>(std::ceil(max_time / step));
  double prev2 = curve(0.0);
  double prev = curve(step);
  double lowest = std::min(prev2, prev);
  for (long i = 2; i <= n; ++i) {
    const double t = static_cast<double>(i) * step;
    const double cur = curve(t);
    lowest = std::min(lowest, cur);
    if (lowest < 1.0 - 1e-12 && prev >= prev2 && prev >= cur && prev > 1.0 - 100.0 * tol) {
      const auto [tm, neg] =
          golden_minimize([&](double x) { return -curve(x); }, t - 2.0 * step, t, 1e-12 * std::max(1.0, t));
      if (1.0 + neg < tol) return tm;
    }
    prev2 = prev;
    prev = cur;
  }
  if (lowest >= 1.0 - 1e-12) return 0.0;
  return std::nullopt;
}

/// Qubit permutations commute with the star Hamiltonian, so inputs with the same
/// number of up qubits share one revival curve.
inline std::vector<std::size_t> class_representatives(int k) {
  std::vector<std::size_t> reps;
  for (int up = 0; up <= k; ++up) {
    std::string label = "u";
    for (int q = 0; q < k; ++q) label += q < up ? 'u' : 'd';
    reps.push_back(basis_index(label));
  }
  return reps;
}

inline double verify_revival(int k, double detuning, double j_xy, double j_z, double t, Matrix* gate = nullptr) {
  const Matrix u = exp_minus_i(star_hamiltonian(k, detuning, 0.0, j_xy, j_z), t);
  const auto inputs = star_inputs(k);
  double worst = 0.0;
  Matrix block(static_cast<Eigen::Index>(inputs.size()), static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    const auto col = u.col(static_cast<Eigen::Index>(inputs[c]));
    double up = 0.0;
    for (std::size_t r = 0; r < inputs.size(); ++r) {
      const Complex v = col(static_cast<Eigen::Index>(inputs[r]));
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      if (sz_value(static_cast<std::size_t>(r), 0, k + 1) == 1) up += std::norm(col(r));
    }
    worst = std::max(worst, 1.0 - up);
  }
  if (gate) *gate = block;
  return std::clamp(worst, 0.0, 1.0);
}

struct Screen {
  bool found = false;
  double common_time = 0.0;
  std::vector<double> periods;
  std::vector<int> multiples;
  double error = 1.0;  // max over classes of 1 - P at common_time, after local time refinement
};

inline Screen screen_detuning(int k, double detuning, double j_xy, double j_z, const CommensurateOptions& o) {
  const ManyBodyOperator h = star_hamiltonian(k, detuning, 0.0, j_xy, j_z);
  const Spectrum spectrum(h);
  const double width = spectrum.energies().maxCoeff() - spectrum.energies().minCoeff();
  const double step = o.scan_step > 0.0 ? o.scan_step : std::min(0.02, 0.25 / std::max(width, 1e-9));

  Screen s;
  std::vector<RevivalCurve> curves;
  for (std::size_t rep : class_representatives(k)) {
    curves.emplace_back(spectrum, rep, k + 1);
    const auto p = first_revival(curves.back(), o.screen_tolerance, o.max_time, step);
    if (!p) return s;
    s.periods.push_back(*p);
  }

  // Smallest common time T = c_0 p_0 with every other period dividing T to within the
  // screening tolerance, each multiple at most max_multiple.
  std::vector<double> moving;
  for (double p : s.periods)
    if (p > 0.0) moving.push_back(p);
  if (moving.empty()) return s;
  const double base = moving.front();
  for (int c0 = 1; c0 <= o.max_multiple; ++c0) {
    const double t = c0 * base;
    std::vector<int> mult;
    bool ok = true;
    for (double p : s.periods) {
      if (p == 0.0) {
        mult.push_back(0);
        continue;
      }
      const int c = static_cast<int>(std::lround(t / p));
      if (c < 1 || c > o.max_multiple || std::abs(t - c * p) > o.screen_tolerance * t) {
        ok = false;
        break;
      }
      mult.push_back(c);
    }
    if (!ok) continue;
    auto err = [&](double x) {
      double worst = 0.0;
      for (const auto& c : curves) worst = std::max(worst, 1.0 - c(x));
      return worst;
    };
    const auto [tm, e] = golden_minimize(err, t - 2.0 * step, t + 2.0 * step, 1e-12 * std::max(1.0, t));
    s.found = true;
    s.common_time = tm;
    s.error = e;
    s.multiples = std::move(mult);
    return s;
  }
  return s;
}

}  // namespace detail

/// Scans the detuning grid for coincident barrier revivals of every input of the
/// k-qubit star. Screening uses revival curves; refinement polishes (detuning, time)
/// near promising points; every reported candidate has been re-simulated from
/// scratch and meets `tolerance`.
inline std::vector<RevivalCandidate> commensurate_search(int k, double j_xy, double j_z,
                                                         const std::vector<double>& detuning_grid,
                                                         const CommensurateOptions& options = {}) {
  if (k < 2 || k > 4) throw ContractError("commensurate_search: k must be 2, 3 or 4");
  if (detuning_grid.empty()) throw ContractError("commensurate_search: empty detuning grid");
  if (!(options.tolerance > 0.0)) throw ContractError("commensurate_search: tolerance must be positive");

  double grid_step = 0.0;
  for (std::size_t i = 1; i < detuning_grid.size(); ++i) {
    const double gap = std::abs(detuning_grid[i] - detuning_grid[i - 1]);
    grid_step = grid_step == 0.0 ? gap : std::min(grid_step, gap);
  }

  const auto screens = parallel_map(detuning_grid, [&](double d) { return detail::screen_detuning(k, d, j_xy, j_z, options); });

  // Indices of grid points that either pass outright or look worth refining.
  std::vector<std::size_t> promising;
  for (std::size_t i = 0; i < screens.size(); ++i) {
    if (screens[i].found && screens[i].error < 10.0 * options.screen_tolerance) promising.push_back(i);
  }

  const auto refined = parallel_map(promising, [&](std::size_t i) {
    RevivalCandidate c;
    c.detuning = detuning_grid[i];
    c.common_time = screens[i].common_time;
    c.periods = screens[i].periods;
    c.multiples = screens[i].multiples;
    c.max_error = detail::verify_revival(k, c.detuning, j_xy, j_z, c.common_time);
    if (c.max_error >= options.tolerance && options.refine && grid_step > 0.0) {
      auto objective = [&](double d) {
        const auto s = detail::screen_detuning(k, d, j_xy, j_z, options);
        return s.found ? s.error : 1.0;
      };
      const auto [d, e] = detail::golden_minimize(objective, c.detuning - grid_step, c.detuning + grid_step,
                                          1e-10 * std::max(1.0, std::abs(c.detuning)));
      if (e < 1.0) {
        const auto s = detail::screen_detuning(k, d, j_xy, j_z, options);
        const double verified = detail::verify_revival(k, d, j_xy, j_z, s.common_time);
        if (verified < c.max_error) {
          c.detuning = d;
          c.common_time = s.common_time;
          c.periods = s.periods;
          c.multiples = s.multiples;
          c.max_error = verified;
        }
      }
    }
    c.max_error = detail::verify_revival(k, c.detuning, j_xy, j_z, c.common_time, &c.gate);
    c.gate_unitarity_defect = unitarity_defect(c.gate);
    return c;
  });

  // Keep verified candidates; neighbouring grid points that refined onto the same
  // detuning collapse to the best one.
  std::vector<RevivalCandidate> out;
  for (const auto& c : refined) {
    if (!(c.max_error < options.tolerance)) continue;
    const double merge = std::max(grid_step, 1e-9);
    auto same = std::find_if(out.begin(), out.end(), [&](const RevivalCandidate& o) {
      return std::abs(o.detuning - c.detuning) < merge && std::abs(o.common_time - c.common_time) < 1e-3;
    });
    if (same == out.end()) {
      out.push_back(c);
    } else if (c.max_error < same->max_error) {
      *same = c;
    }
  }
  std::sort(out.begin(), out.end(), [](const RevivalCandidate& x, const RevivalCandidate& y) {
    return x.detuning < y.detuning;
  });
  return out;
}

}  // namespace spinlab
