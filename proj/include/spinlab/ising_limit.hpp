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

// Residual dynamics of a far-detuned XXZ chain. Writing the exact evolution as
// U(t) = R(t) exp(-i H1 t), with H1 the Ising part, R(t) should approach the
// identity (up to a global phase) linearly in delta = J / Delta.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spinlab/evolution.hpp"
#include "spinlab/parallel.hpp"
#include "spinlab/spin_core.hpp"

namespace spinlab {

enum class PatternKind { abab, abcabc, custom };

inline std::string to_string(PatternKind k) {
  switch (k) {
    case PatternKind::abab: return "abab";
    case PatternKind::abcabc: return "abcabc";
    case PatternKind::custom: return "custom";
  }
  return "custom";
}

/// Neighbour detunings Delta_j = 2 (B_{j+1} - B_j), indices modulo n on a ring.
inline std::vector<double> detunings_of(const std::vector<double>& zeeman, Topology topology) {
  const std::size_t n = zeeman.size();
  const std::size_t count = topology == Topology::ring ? n : n - 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back(2.0 * (zeeman[(j + 1) % n] - zeeman[j]));
  return out;
}

/// Detuning pattern described by a base detuning Delta and ratios rho_j = Delta / Delta_j.
struct DetuningPattern {
  PatternKind kind = PatternKind::abab;
  double delta = 1.0;
  std::vector<double> rho;

  static DetuningPattern abab(double delta, int n_bonds) {
    DetuningPattern p{PatternKind::abab, delta, {}};
    for (int j = 0; j < n_bonds; ++j) p.rho.push_back(j % 2 == 0 ? 1.0 : -1.0);
    return p;
  }

  /// rho runs 1, 1, -1/2, ... so that the three detunings of a period sum to zero.
  static DetuningPattern abcabc(double delta, int n_bonds) {
    DetuningPattern p{PatternKind::abcabc, delta, {}};
    for (int j = 0; j < n_bonds; ++j) p.rho.push_back(j % 3 == 2 ? -0.5 : 1.0);
    return p;
  }

  static DetuningPattern make(PatternKind kind, double delta, int n_bonds) {
    switch (kind) {
      case PatternKind::abab: return abab(delta, n_bonds);
      case PatternKind::abcabc: return abcabc(delta, n_bonds);
      case PatternKind::custom: break;
    }
    throw ContractError("DetuningPattern::make: custom patterns need explicit ratios");
  }

  std::vector<double> detunings() const {
    std::vector<double> out;
    for (double r : rho) {
      if (r == 0.0) throw ContractError("DetuningPattern: rho_j must be nonzero");
      out.push_back(delta / r);
    }
    return out;
  }

  /// Zeeman energies with B_0 = 0 that realise the detunings. On a ring the detunings
  /// must sum to zero for the pattern to close.
  std::vector<double> zeeman(int n_sites, Topology topology) const {
    const std::size_t needed = topology == Topology::ring ? static_cast<std::size_t>(n_sites)
                                                          : static_cast<std::size_t>(n_sites - 1);
    if (rho.size() != needed) throw ContractError("DetuningPattern: need one ratio per bond");
    const auto d = detunings();
    std::vector<double> b(static_cast<std::size_t>(n_sites), 0.0);
    for (std::size_t j = 0; j + 1 < b.size(); ++j) b[j + 1] = b[j] + 0.5 * d[j];
    if (topology == Topology::ring) {
      double sum = 0.0;
      for (double x : d) sum += x;
      if (std::abs(sum) > 1e-9 * std::abs(delta) * static_cast<double>(d.size())) {
        throw ContractError("DetuningPattern: detunings do not close around the ring");
      }
    }
    return b;
  }
};

/// R(t) = exp(-i (H1 + H2) t) exp(+i H1 t); unitary by construction.
inline ManyBodyOperator residual_operator(const ChainSpec& spec, double t) {
  const auto h1 = build_h1(spec);
  const auto h = h1 + build_h2(spec);
  Matrix r = exp_minus_i(h, t) * exp_minus_i(h1, -t);
  return {std::move(r), spec.n_sites, false};
}

enum class ResidualNorm { frobenius, spectral };

/// Distance of R(t) from the identity after removing the best global phase.
inline double residual_norm(const ChainSpec& spec, double t, ResidualNorm norm = ResidualNorm::frobenius) {
  const auto r = residual_operator(spec, t);
  const Matrix id = Matrix::Identity(r.dim(), r.dim());
  return norm == ResidualNorm::frobenius ? phase_aligned_distance(r.matrix(), id)
                                         : phase_aligned_operator_distance(r.matrix(), id);
}

struct ResidualReport {
  std::vector<double> deltas;  // delta = J / Delta
  std::vector<double> norms;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double t = 0.0;
};

/// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("fit_loglog_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ContractError("fit_loglog_slope: abscissae are all equal");
  return (n * sxy - sx * sy) / denom;
}

struct SweepOptions {
  double j_xy = 1.0;
  Topology topology = Topology::ring;
  ResidualNorm norm = ResidualNorm::frobenius;
  /// Smallest accepted ratio between the largest and smallest detuning.
  double min_span = 4.0;
  double max_delta = 0.1;
};

inline constexpr double kPrecisionFloor = 1e-13;

/// Residual norm against delta = J/Delta over a grid of base detunings Delta.
inline ResidualReport scaling_sweep(PatternKind pattern, const std::vector<double>& big_deltas, double t,
                                    int n_sites, double alpha, const SweepOptions& options = {}) {
  if (big_deltas.size() < 3) throw ContractError("scaling_sweep: need at least 3 detunings");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double d : big_deltas) {
    if (!(d > 0.0)) throw ContractError("scaling_sweep: detunings must be positive");
    if (options.j_xy / d > options.max_delta) {
      throw ContractError("scaling_sweep: delta = J/Delta exceeds " + std::to_string(options.max_delta));
    }
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (hi / lo < options.min_span) throw ContractError("scaling_sweep: detuning grid spans too narrow a range");

  const int n_bonds = options.topology == Topology::ring ? n_sites : n_sites - 1;
  ResidualReport report;
  report.t = t;
  report.norms = parallel_map(big_deltas, [&](double big_delta) {
    ChainSpec spec{n_sites, options.topology, options.j_xy, alpha,
                   DetuningPattern::make(pattern, big_delta, n_bonds).zeeman(n_sites, options.topology)};
    return residual_norm(spec, t, options.norm);
  });
  for (double d : big_deltas) report.deltas.push_back(options.j_xy / d);

  bool all_below_floor = true;
  for (double v : report.norms) all_below_floor = all_below_floor && v < kPrecisionFloor;
  if (all_below_floor) {
    throw PrecisionFloorError("scaling_sweep: every residual is below " + std::to_string(kPrecisionFloor) +
                              "; no slope can be fitted");
  }
  report.fitted_slope = fit_loglog_slope(report.deltas, report.norms);
  return report;
}

/// Closed form of the dressing factor x_j, with s_left = sigma^Z_{j-1} and
/// s_right = sigma^Z_{j+2} eigenvalues (+-1).
inline double x_factor(double rho_j, double delta_j, double alpha, int s_left, int s_right) {
  if ((s_left != 1 && s_left != -1) || (s_right != 1 && s_right != -1)) {
    throw ContractError("x_factor: spin eigenvalues must be +1 or -1");
  }
  const double a2d2 = alpha * alpha * delta_j * delta_j;
  const double denom = 1.0 - 16.0 * a2d2;
  if (std::abs(denom) < 1e-14) throw SingularityError("x_factor: |4 alpha delta_j| = 1");
  const double sl = s_left;
  const double sr = s_right;
  return rho_j * (1.0 - 8.0 * a2d2 * (1.0 + sl * sr)) * (1.0 - 2.0 * alpha * delta_j * (sr - sl)) / denom;
}

/// Smallest <sigma^Z_site> seen on `samples` evenly spaced times in (0, t_end].
inline double min_sz_over_window(const ChainSpec& spec, const SpinState& initial, int site, double t_end,
                                 int samples) {
  const Spectrum spectrum(build_hamiltonian(spec));
  double lowest = initial.sz(site);
  for (int k = 1; k <= samples; ++k) {
    const double t = t_end * k / samples;
    const SpinState s(spectrum.exp_minus_i(t) * initial.amplitudes(), spec.n_sites);
    lowest = std::min(lowest, s.sz(site));
  }
  return lowest;
}

}  // namespace spinlab
