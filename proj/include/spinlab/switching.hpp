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

// Smooth Zeeman switching of the barrier spin and the search for the flat
// (on-resonance) duration that revives the barrier for every qubit input.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinlab/evolution.hpp"
#include "spinlab/gate_synth.hpp"
#include "spinlab/triplet_gate.hpp"

namespace spinlab {

enum class ProfileKind { abrupt, cos2, sin4 };

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::abrupt: return "abrupt";
    case ProfileKind::cos2: return "cos2";
    case ProfileKind::sin4: return "sin4";
  }
  return "abrupt";
}

inline ProfileKind profile_kind_from_string(std::string_view s) {
  if (s == "abrupt") return ProfileKind::abrupt;
  if (s == "cos2") return ProfileKind::cos2;
  if (s == "sin4") return ProfileKind::sin4;
  throw ContractError("unknown profile '" + std::string(s) + "'");
}

/// Barrier Zeeman energy over one gate: passive until t0, ramp to resonance over
/// t_delta, flat for flat_duration, mirrored ramp back, passive afterwards.
///
/// Ramp shapes, with x = (t - t0) / t_delta in [0, 1]:
///   cos2: resonant + D cos^2(pi x / 2)
///   sin4: passive  - D sin^4(pi x / 2)
/// where D = passive_detuning. abrupt has zero-length ramps.
struct SwitchProfile {
  ProfileKind kind = ProfileKind::cos2;
  double t0 = 0.0;
  double t_delta = 1.25;
  double flat_duration = 0.0;
  double passive_detuning = 100.0;
  double resonant_value = 0.0;

  double passive_value() const { return resonant_value + passive_detuning; }
  double ramp_duration() const { return kind == ProfileKind::abrupt ? 0.0 : t_delta; }
  double flat_start() const { return t0 + ramp_duration(); }
  double flat_end() const { return flat_start() + flat_duration; }
  double end_time() const { return flat_end() + ramp_duration(); }

  void validate() const {
    if (kind != ProfileKind::abrupt && !(t_delta > 0.0)) throw ContractError("SwitchProfile: t_delta must be positive");
    if (flat_duration < 0.0) throw ContractError("SwitchProfile: flat_duration must be >= 0");
    if (!std::isfinite(passive_detuning) || !std::isfinite(resonant_value)) {
      throw ContractError("SwitchProfile: energies must be finite");
    }
  }
};

namespace detail {

/// Fraction of the way from passive to resonant at ramp coordinate x in [0, 1].
inline double ramp_fraction(ProfileKind kind, double x) {
  const double s = std::sin(0.5 * std::numbers::pi * x);
  if (kind == ProfileKind::cos2) return s * s;
  return s * s * s * s;
}

}  // namespace detail

inline double profile_value(const SwitchProfile& p, double t) {
  if (p.kind == ProfileKind::abrupt) {
    return (t >= p.t0 && t <= p.flat_end()) ? p.resonant_value : p.passive_value();
  }
  if (t <= p.t0 || t >= p.end_time()) return p.passive_value();
  if (t >= p.flat_start() && t <= p.flat_end()) return p.resonant_value;
  const double x = t < p.flat_start() ? (t - p.t0) / p.t_delta : (p.end_time() - t) / p.t_delta;
  return p.passive_value() - p.passive_detuning * detail::ramp_fraction(p.kind, x);
}

/// Qubit-barrier-qubit system with the qubits at effective energy `qubit_zeeman`
/// (already including the J_Z of frozen outer neighbours); resonance puts the
/// barrier at the same energy.
struct SwitchSystem {
  double j_xy = 1.0;
  double j_z = 0.7;
  double qubit_zeeman = 0.7;

  ManyBodyOperator hamiltonian(double barrier_zeeman) const {
    return triplet_hamiltonian({qubit_zeeman, barrier_zeeman, j_xy, j_z});
  }
  double resonant_value() const { return qubit_zeeman; }
};

/// Ramp propagators of one protocol; the flat phase is evaluated exactly from the
/// spectrum of the resonant Hamiltonian, so any flat duration costs one product.
class ProtocolPropagators {
 public:
  ProtocolPropagators(const SwitchSystem& system, ProfileKind kind, double t_delta, double passive_detuning,
                      const IntegratorConfig& config)
      : system_(system), flat_(system.hamiltonian(system.resonant_value())) {
    template_profile_ = {kind, 0.0, t_delta, 0.0, passive_detuning, system.resonant_value()};
    template_profile_.validate();
    up_ = Matrix::Identity(8, 8);
    down_ = Matrix::Identity(8, 8);
    if (kind != ProfileKind::abrupt) {
      const SwitchProfile prof = template_profile_;
      const Drive drive = [this, prof](double t) { return system_.hamiltonian(profile_value(prof, t)); };
      up_ = timedep_propagator(drive, 3, prof.t0, prof.flat_start(), config).matrix();
      down_ = timedep_propagator(drive, 3, prof.flat_end(), prof.end_time(), config).matrix();
    }
  }

  Matrix full(double flat_duration) const { return down_ * flat_.exp_minus_i(flat_duration) * up_; }

  double window(double flat_duration) const { return 2.0 * template_profile_.ramp_duration() + flat_duration; }

  const SwitchSystem& system() const { return system_; }
  SwitchProfile profile(double flat_duration) const {
    SwitchProfile p = template_profile_;
    p.flat_duration = flat_duration;
    return p;
  }

 private:
  SwitchSystem system_;
  SwitchProfile template_profile_;
  Spectrum flat_;
  Matrix up_;
  Matrix down_;
};

/// Max over the four qubit inputs of 1 - P(barrier up) after the full protocol.
inline double revival_error(const ProtocolPropagators& props, double flat_duration) {
  const Matrix4 block = qubit_block(props.full(flat_duration));
  double worst = 0.0;
  for (int c = 0; c < 4; ++c) worst = std::max(worst, 1.0 - block.col(c).squaredNorm());
  return std::clamp(worst, 0.0, 1.0);
}

inline double revival_error(const SwitchSystem& system, const SwitchProfile& profile,
                            const IntegratorConfig& config = {}) {
  profile.validate();
  const ProtocolPropagators props(system, profile.kind, profile.t_delta, profile.passive_detuning, config);
  return revival_error(props, profile.flat_duration);
}

struct SearchOptions {
  double t_delta = 1.25;
  double passive_detuning = 100.0;
  /// Coarse grid over (0, range_factor * t_R] in steps of t_R / grid_divisions.
  double range_factor = 3.0;
  int grid_divisions = 50;
  int refine_candidates = 3;
  double duration_tolerance = 1e-7;
  IntegratorConfig integrator{};
  /// dt is halved until the optimum's revival error moves by less than this.
  double dt_change_threshold = 1e-8;
  int max_halvings = 4;
  double window_threshold = 0.1;
};

struct RevivalSearchResult {
  double optimal_flat_duration = 0.0;
  double revival_error = 1.0;
  TwoQubitGate resulting_gate;  // nearest unitary to the qubit block, passive frame
  TwoQubitGate raw_gate;
  double closure_defect = 0.0;  // ||B^dag B - I||_F of the extracted block
  bool entangling = false;
  double dt_used = 0.0;
  std::vector<std::pair<double, double>> trace;  // (flat_duration, revival_error) on the grid
};

namespace detail {

inline Matrix4 nearest_unitary(const Matrix4& m) {
  Eigen::JacobiSVD<Matrix4> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Golden-section minimization of f on [lo, hi].
template <typename F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

struct SearchPass {
  double duration;
  double error;
  std::vector<std::pair<double, double>> trace;
};

inline SearchPass search_pass(const ProtocolPropagators& props, double t_r, const SearchOptions& o) {
  const double step = t_r / o.grid_divisions;
  const int points = static_cast<int>(std::lround(o.range_factor * o.grid_divisions));
  SearchPass pass{0.0, 1.0, {}};
  for (int k = 1; k <= points; ++k) {
    const double d = k * step;
    pass.trace.emplace_back(d, revival_error(props, d));
  }
  std::vector<std::size_t> order(pass.trace.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return pass.trace[x].second < pass.trace[y].second; });
  if (order.empty() || pass.trace[order.front()].second >= o.window_threshold) {
    throw NoRevivalWindowError("search_flat_duration: no grid point has revival error below " +
                               std::to_string(o.window_threshold));
  }

  const double lo_bound = 0.5 * step;
  const double hi_bound = o.range_factor * t_r;
  std::vector<std::pair<double, double>> refined;
  const std::size_t count = std::min<std::size_t>(order.size(), static_cast<std::size_t>(o.refine_candidates));
  for (std::size_t c = 0; c < count; ++c) {
    const double centre = pass.trace[order[c]].first;
    refined.push_back(golden_minimize([&](double d) { return revival_error(props, d); },
                                      std::max(lo_bound, centre - step), std::min(hi_bound, centre + step),
                                      o.duration_tolerance));
  }
  // Lowest error wins; near-ties (below double resolution) go to the shorter duration.
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& r : refined) best_err = std::min(best_err, r.second);
  pass.duration = std::numeric_limits<double>::infinity();
  for (const auto& r : refined) {
    if (r.second <= best_err + 1e-12 && r.first < pass.duration) {
      pass.duration = r.first;
      pass.error = r.second;
    }
  }
  return pass;
}

}  // namespace detail

/// 1-D search of the flat duration that minimises the worst-case revival error.
inline RevivalSearchResult search_flat_duration(const SwitchSystem& system, ProfileKind kind,
                                                const SearchOptions& options = {}) {
  const double t_r = revival_time(system.j_xy, system.j_z);
  IntegratorConfig config = options.integrator;

  auto run = [&](const IntegratorConfig& cfg) {
    ProtocolPropagators props(system, kind, options.t_delta, options.passive_detuning, cfg);
    auto pass = detail::search_pass(props, t_r, options);
    return std::pair{std::move(props), std::move(pass)};
  };

  auto [props, pass] = run(config);
  if (kind != ProfileKind::abrupt) {
    for (int h = 0; h < options.max_halvings; ++h) {
      IntegratorConfig finer = config;
      finer.dt = 0.5 * config.dt;
      auto [props2, pass2] = run(finer);
      const double change = std::abs(pass2.error - pass.error);
      props = std::move(props2);
      pass = std::move(pass2);
      config = finer;
      if (change < options.dt_change_threshold) break;
    }
  }

  RevivalSearchResult out;
  out.optimal_flat_duration = pass.duration;
  out.revival_error = pass.error;
  out.trace = std::move(pass.trace);
  out.dt_used = config.dt;

  const Matrix4 block = qubit_block(props.full(pass.duration));
  out.closure_defect = unitarity_defect(block);
  const Matrix4 unitary = detail::nearest_unitary(block);
  out.raw_gate = TwoQubitGate(unitary, Frame::raw);
  out.resulting_gate = TwoQubitGate(
      detail::nearest_unitary(to_passive_frame(unitary, system.qubit_zeeman, system.j_z, props.window(pass.duration))),
      Frame::passive_referenced);
  out.entangling = is_entangling(out.resulting_gate);
  return out;
}

struct TrajectorySample {
  double t;
  double barrier_zeeman;
  double barrier_sz;
};

/// <sigma^Z> of the barrier through one protocol for a single qubit input (0..3).
inline std::vector<TrajectorySample> barrier_trajectory(const SwitchSystem& system, const SwitchProfile& profile,
                                                        int input, const IntegratorConfig& config = {}) {
  profile.validate();
  if (input < 0 || input > 3) throw IndexError("barrier_trajectory: input must be 0..3");
  std::vector<TrajectorySample> out;
  SpinState state = SpinState::basis(triplet_qubit_states()[static_cast<std::size_t>(input)], 3);
  out.push_back({profile.t0, profile_value(profile, profile.t0), state.sz(1)});

  const Drive drive = [&](double t) { return system.hamiltonian(profile_value(profile, t)); };
  auto record = [&](double t, const Vector& psi) {
    const SpinState s(psi / psi.norm(), 3);
    out.push_back({t, profile_value(profile, t), s.sz(1)});
  };
  if (profile.ramp_duration() > 0.0) state = evolve_timedep(drive, state, profile.t0, profile.flat_start(), config, record);
  if (profile.flat_duration > 0.0) {
    const Spectrum flat(system.hamiltonian(profile.resonant_value));
    const long steps = std::max(1L, static_cast<long>(std::ceil(profile.flat_duration / config.dt)));
    const double h = profile.flat_duration / static_cast<double>(steps);
    const Matrix step = flat.exp_minus_i(h);
    Vector psi = state.amplitudes();
    for (long k = 1; k <= steps; ++k) {
      psi = step * psi;
      record(profile.flat_start() + static_cast<double>(k) * h, psi);
    }
    state = SpinState::normalized(psi, 3);
  }
  if (profile.ramp_duration() > 0.0) evolve_timedep(drive, state, profile.flat_end(), profile.end_time(), config, record);
  return out;
}

}  // namespace spinlab
