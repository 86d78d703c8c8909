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

// Acceptance checks. One line per criterion: "[n] PASS|FAIL <name> :: <details>".
// Usage: acceptance [n ...]   (no arguments runs all ten)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "spinlab/spinlab.hpp"

using namespace spinlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (ok ? "" : "[x] ") << what << "; ";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

const std::vector<double> kAlphas{0.0, 0.3, 0.7, 1.0};

// 1. Residual of the far-detuned ABAB ring scales linearly in delta.
void criterion_1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double alpha : {0.0, 1.0}) {
    const auto rep = scaling_sweep(PatternKind::abab, {50, 100, 200, 400}, 1.0, 6, alpha);
    o.check(std::abs(rep.fitted_slope - 1.0) <= 0.15, "alpha=" + num(alpha) + " slope=" + num(rep.fitted_slope));
  }
  const double dt = seconds_since(t0);
  o.check(dt < 10.0, "runtime " + num(dt) + " s");
}

// 2. Barrier revival at t_R for every input, independent Kronecker-built Hamiltonian.
void criterion_2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double alpha : kAlphas) {
    const double t_r = std::numbers::pi / std::sqrt(8.0 + alpha * alpha);
    const double a = 0.4 + alpha;  // any common Zeeman energy
    const auto h = oracle::xxz(3, oracle::path(3), 1.0, alpha, {a, a, a});
    double worst = 0.0;
    for (double t : {t_r - 1e-9, t_r, t_r + 1e-9}) {
      const auto u = oracle::expm_minus_i(h, t);
      for (const char* in : {"dud", "duu", "uud", "uuu"}) {
        worst = std::max(worst, 1.0 - oracle::prob_up(u, oracle::index(in), 1, 3));
      }
    }
    o.check(worst < 1e-10, "alpha=" + num(alpha) + " max(1-P)=" + num(worst));
    // library agrees with the formula
    o.check(std::abs(revival_time(1.0, alpha) - t_r) < 1e-15, "t_R formula alpha=" + num(alpha));
  }
  const double dt = seconds_since(t0);
  o.check(dt < 1.0, "runtime " + num(dt) + " s");
}

Matrix4 reference_up() {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 2) = u(2, 1) = -1.0;
  u(3, 3) = -1.0;
  return u;
}

// 3. Simulated primitive gate against the closed form.
void criterion_3(Outcome& o) {
  for (double alpha : kAlphas) {
    const auto sim = primitive_gate_numeric(1.0, alpha);
    const auto ana = primitive_gate_analytic(1.0, alpha);
    double mod = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) mod = std::max(mod, std::abs(std::abs(sim.passive(r, c)) - std::abs(ana(r, c))));
    const auto a = makhlin(sim.passive);
    const auto b = makhlin(ana);
    const double inv = std::max(std::abs(a.g1.real() - b.g1.real()),
                                std::max(std::abs(a.g1.imag() - b.g1.imag()), std::abs(a.g2 - b.g2)));
    o.check(mod <= 1e-8, "alpha=" + num(alpha) + " moduli " + num(mod));
    o.check(inv <= 1e-8, "alpha=" + num(alpha) + " makhlin " + num(inv));
  }
  const auto sim0 = primitive_gate_numeric(1.0, 0.0);
  const double d = phase_aligned_distance(Matrix(sim0.passive.matrix()), Matrix(reference_up()));
  o.check(d < 1e-8, "alpha=0 passive-frame distance to U_P " + num(d));
}

// 4. Dressed XY gate is iSWAP.
void criterion_4(Outcome& o) {
  const double d = phase_aligned_distance(Matrix(dressed_gate(1.0, 0.0).matrix()), Matrix(gates::iswap()));
  o.check(d < 1e-10, "distance to iSWAP " + num(d));
  const double d_small = phase_aligned_distance(Matrix(dressed_gate(1.0, 1e-12).matrix()), Matrix(gates::iswap()));
  o.check(d_small < 1e-10, "alpha=1e-12 distance " + num(d_small));
}

// 5. CNOT from two U_P, and from at most four U(alpha).
void criterion_5(Outcome& o) {
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = synthesize_cnot(TwoQubitGate(reference_up()), 2);
    const double dt = seconds_since(t0);
    const double check = oracle::phase_distance(res.circuit.unitary(reference_up()), gates::cnot());
    o.check(check < 1e-6 && dt < 60.0, "U_P x2 distance " + num(check) + " in " + num(dt) + " s");
  }
  for (double alpha : {0.3, 0.7, 1.0}) {
    const auto prim = primitive_gate_numeric(1.0, alpha).passive;
    bool done = false;
    for (int uses = 2; uses <= 4 && !done; ++uses) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto res = synthesize_cnot(prim, uses);
      const double dt = seconds_since(t0);
      const double check = oracle::phase_distance(res.circuit.unitary(prim.matrix()), gates::cnot());
      if (check < 1e-6) {
        done = true;
        o.check(dt < 60.0, "alpha=" + num(alpha) + " uses=" + std::to_string(uses) + " distance " + num(check) +
                               " in " + num(dt) + " s");
      } else if (uses == 4) {
        o.check(false, "alpha=" + num(alpha) + " no circuit with <= 4 uses (best " + num(check) + ")");
      }
    }
  }
}

// 6. Smooth ramps: a flat duration exists that revives the barrier for every input.
void criterion_6(Outcome& o) {
  const SwitchSystem sys{1.0, 0.7, 0.7};
  for (ProfileKind kind : {ProfileKind::cos2, ProfileKind::sin4}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = search_flat_duration(sys, kind);
    const double dt = seconds_since(t0);
    o.check(res.revival_error < 1e-6, to_string(kind) + " flat=" + num(res.optimal_flat_duration) + " error " +
                                          num(res.revival_error));
    o.check(res.entangling, to_string(kind) + " entangling");
    o.check(res.closure_defect < 1e-8, to_string(kind) + " block closure " + num(res.closure_defect));
    o.check(dt < 120.0, to_string(kind) + " runtime " + num(dt) + " s");
  }
}

// 7. Frozen outer neighbours perturb the gate at order J/Delta.
void criterion_7(Outcome& o) {
  const auto a = frozen_neighbor_check(1.0, 0.7, 100.0);
  const auto b = frozen_neighbor_check(1.0, 0.7, 200.0);
  const double ratio = a.distance / b.distance;
  o.check(std::abs(ratio - 2.0) <= 0.5,
          "d(100)=" + num(a.distance) + " d(200)=" + num(b.distance) + " ratio " + num(ratio));
}

// 8. Qubit densities of the three layouts.
void criterion_8(Outcome& o) {
  o.check(r_q(lattices::chain()) == Fraction{1, 2}, "chain " + r_q(lattices::chain()).str());
  o.check(r_q(lattices::hex()) == Fraction{2, 5}, "hex " + r_q(lattices::hex()).str());
  o.check(r_q(lattices::hex_complement()) == Fraction{3, 5}, "hex-complement " + r_q(lattices::hex_complement()).str());
}

// Independent re-simulation of a star candidate: Kronecker-built Hamiltonian, Pade exponential.
double star_error(int k, double detuning, double alpha, double t) {
  std::vector<std::pair<int, int>> bonds;
  for (int q = 1; q <= k; ++q) bonds.emplace_back(0, q);
  std::vector<double> b(static_cast<std::size_t>(k + 1), detuning);
  b[0] = 0.0;
  const auto u = oracle::expm_minus_i(oracle::xxz(k + 1, bonds, 1.0, alpha, b), t);
  double worst = 0.0;
  for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
    std::string label = "u";
    for (int q = k - 1; q >= 0; --q) label += ((bits >> q) & 1U) ? 'u' : 'd';
    worst = std::max(worst, 1.0 - oracle::prob_up(u, oracle::index(label), 0, k + 1));
  }
  return worst;
}

// 9. Commensurate revivals: k=2 finds a-b=0; every k=3 candidate re-verifies.
void criterion_9(Outcome& o) {
  const double alpha = 1.0;
  std::vector<double> grid2;
  for (int i = -100; i <= 100; ++i) grid2.push_back(0.01 * i);
  CommensurateOptions opt2;
  opt2.tolerance = 1e-8;
  const auto c2 = commensurate_search(2, 1.0, alpha, grid2, opt2);
  bool found_zero = false;
  for (const auto& c : c2) {
    if (std::abs(c.detuning) < 1e-6) {
      const double e = star_error(2, c.detuning, alpha, c.common_time);
      found_zero = e < 1e-8;
      o.check(found_zero, "k=2 a-b=" + num(c.detuning) + " t=" + num(c.common_time) + " error " + num(e));
    }
  }
  if (!found_zero) o.check(false, "k=2 candidate at a-b=0 missing (" + std::to_string(c2.size()) + " candidates)");

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid3;
  for (int i = -1000; i <= 1000; ++i) grid3.push_back(0.01 * i);
  const auto c3 = commensurate_search(3, 1.0, alpha, grid3);
  int bad = 0;
  for (const auto& c : c3) {
    const double e = star_error(3, c.detuning, alpha, c.common_time);
    if (!(e < 1e-6)) ++bad;
    o.detail << "k=3 a-b=" << num(c.detuning) << " t=" << num(c.common_time) << " err=" << num(e) << "; ";
  }
  o.check(bad == 0, "k=3 " + std::to_string(c3.size()) + " candidates, " + std::to_string(bad) +
                        " fail re-verification (" + num(seconds_since(t0)) + " s)");
}

Matrix4 random_local(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const EulerAngles a{ang(rng), ang(rng), ang(rng)};
  const EulerAngles b{ang(rng), ang(rng), ang(rng)};
  return gates::kron(a.unitary(), b.unitary());
}

// 10. Property suites.
void criterion_10(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  // Unitarity and magnetisation blocks of random open/ring chains.
  double worst_unitary = 0.0;
  double worst_leak = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    std::vector<double> b;
    for (int s = 0; s < n; ++s) b.push_back(5.0 * uni(rng));
    const ChainSpec spec{n, trial % 2 ? Topology::ring : Topology::open, 1.0 + 0.5 * uni(rng), 1.0 + uni(rng), b};
    const auto u = propagator_exact(build_hamiltonian(spec), 2.0 + uni(rng)).matrix();
    worst_unitary = std::max(worst_unitary, unitarity_defect(u));
    for (Eigen::Index r = 0; r < u.rows(); ++r)
      for (Eigen::Index c = 0; c < u.cols(); ++c)
        if (magnetization(static_cast<std::size_t>(r), n) != magnetization(static_cast<std::size_t>(c), n))
          worst_leak = std::max(worst_leak, std::abs(u(r, c)));
  }
  o.check(worst_unitary < 1e-10, "unitarity " + num(worst_unitary));
  o.check(worst_leak < 1e-12, "magnetisation leakage " + num(worst_leak));

  // Makhlin invariance under local dressings.
  double worst_inv = 0.0;
  for (double alpha : kAlphas) {
    const Matrix4 u = primitive_gate_analytic(1.0, alpha).matrix();
    const auto ref = makhlin(u);
    for (int k = 0; k < 25; ++k) {
      const Matrix4 v = random_local(rng) * u * random_local(rng);
      worst_inv = std::max(worst_inv, invariant_distance(makhlin(v), ref));
    }
  }
  o.check(worst_inv < 1e-9, "makhlin local invariance (100 dressings) " + num(worst_inv));

  // First-order Trotter error.
  const ChainSpec spec{6, Topology::ring, 1.0, 1.0, DetuningPattern::abab(2.0, 6).zeeman(6, Topology::ring)};
  const auto exact = propagator_exact(build_hamiltonian(spec), 1.0).matrix();
  std::vector<double> ns, errs;
  for (int n = 8; n <= 512; n *= 2) {
    ns.push_back(n);
    errs.push_back((trotter_propagator(build_h1(spec), build_h2(spec), 1.0, n).matrix() - exact).norm());
  }
  const double slope = fit_loglog_slope(ns, errs);
  o.check(std::abs(slope + 1.0) <= 0.1, "trotter slope " + num(slope));

  const double dt = seconds_since(t0);
  o.check(dt < 60.0, "runtime " + num(dt) + " s");
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria{
    {"ising-limit scaling", criterion_1},   {"revival time", criterion_2},
    {"primitive gate", criterion_3},        {"dressed gate is iSWAP", criterion_4},
    {"CNOT synthesis", criterion_5},        {"smooth switching", criterion_6},
    {"frozen-neighbour scaling", criterion_7}, {"geometry ratios", criterion_8},
    {"commensurate revivals", criterion_9}, {"property suites", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);

  int failures = 0;
  for (int n : which) {
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 64;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(n - 1)];
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("[%d] %s %s :: %s\n", n, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
