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

// The resonant qubit-barrier-qubit segment: its 8x8 Hamiltonian, the two
// magnetization blocks, the revival time and the primitive two-qubit gate.
//
// Spins are labelled 0 (qubit), 1 (barrier), 2 (qubit). Qubit encoding |0> = |down>,
// |1> = |up>, barrier idling in |up>:
//   |00> = |d u d>, |01> = |d u u>, |10> = |u u d>, |11> = |u u u>.
//
// Hamiltonian convention: a (the effective Zeeman energy of the qubits, already
// including the J_Z pull of frozen outer neighbours) multiplies sigma^Z on both
// qubits, b multiplies the barrier's sigma^Z, plus XXZ exchange on the two bonds.
// With that reading the up block is exactly b I + 2 J_XY [[0,1,0],[1,p,1],[0,1,0]].

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "spinlab/evolution.hpp"
#include "spinlab/gate_synth.hpp"
#include "spinlab/spin_core.hpp"
#include "spinlab/two_qubit.hpp"

namespace spinlab {

struct TripletParams {
  double a = 0.0;  // effective Zeeman energy of the two qubits
  double b = 0.0;  // barrier Zeeman energy
  double j_xy = 1.0;
  double j_z = 0.0;

  double p() const { return (a - b - j_z) / j_xy; }
  double q() const { return (b - a - j_z) / j_xy; }
  double s_p() const { return std::sqrt(8.0 + p() * p()); }
  double s_q() const { return std::sqrt(8.0 + q() * q()); }

  void validate() const {
    if (!(j_xy > 0.0)) throw ContractError("TripletParams: j_xy must be positive");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(j_z)) {
      throw ContractError("TripletParams: energies must be finite");
    }
  }
};

inline const std::vector<Bond>& triplet_bonds() {
  static const std::vector<Bond> bonds{{0, 1}, {1, 2}};
  return bonds;
}

inline ManyBodyOperator triplet_hamiltonian(const TripletParams& params) {
  params.validate();
  return xxz_hamiltonian(3, triplet_bonds(), params.j_xy, params.j_z, {params.a, params.b, params.a});
}

/// Computational states in gate-basis order.
inline const std::array<std::size_t, 4>& triplet_qubit_states() {
  static const std::array<std::size_t, 4> states{basis_index("dud"), basis_index("duu"), basis_index("uud"),
                                                 basis_index("uuu")};
  return states;
}

enum class Block { up, down };

/// up: {|d u u>, |u d u>, |u u d>};  down: {|u d d>, |d u d>, |d d u>}.
inline std::array<std::size_t, 3> block_states(Block which) {
  if (which == Block::up) return {basis_index("duu"), basis_index("udu"), basis_index("uud")};
  return {basis_index("udd"), basis_index("dud"), basis_index("ddu")};
}

inline Eigen::Matrix3cd block_hamiltonian(const TripletParams& params, Block which) {
  const auto h = triplet_hamiltonian(params);
  const auto idx = block_states(which);
  Eigen::Matrix3cd m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      m(r, c) = h.matrix()(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                           static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  return m;
}

struct SubspaceEigensystem {
  Block which = Block::up;
  /// antisymmetric, plus, minus
  std::array<double, 3> energies{};
  /// Columns are the normalized eigenvectors in the block basis, same order.
  Eigen::Matrix3cd vectors;
};

/// Closed-form block energies {E_a, E_+, E_-}: up gives b, b + J(p +- S_p); down
/// gives -b, -b + J(q +- S_q).
inline std::array<double, 3> closed_form_energies(const TripletParams& params, Block which) {
  if (which == Block::up) {
    return {params.b, params.b + params.j_xy * (params.p() + params.s_p()),
            params.b + params.j_xy * (params.p() - params.s_p())};
  }
  return {-params.b, -params.b + params.j_xy * (params.q() + params.s_q()),
          -params.b + params.j_xy * (params.q() - params.s_q())};
}

/// Diagonalizes the 3x3 block taken from the 8x8 Hamiltonian.
inline SubspaceEigensystem subspace_eigensystem(const TripletParams& params, Block which) {
  const Eigen::Matrix3cd h = block_hamiltonian(params, which);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(h);
  const Eigen::Vector3d e = solver.eigenvalues();
  const Eigen::Matrix3cd v = solver.eigenvectors();

  Eigen::Vector3cd anti(1.0, 0.0, -1.0);
  anti /= std::sqrt(2.0);
  int a_idx = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double overlap = std::abs(anti.dot(v.col(k)));
    if (overlap > best) {
      best = overlap;
      a_idx = k;
    }
  }
  std::array<int, 2> rest{};
  int n = 0;
  for (int k = 0; k < 3; ++k)
    if (k != a_idx) rest[static_cast<std::size_t>(n++)] = k;
  if (e(rest[0]) < e(rest[1])) std::swap(rest[0], rest[1]);

  SubspaceEigensystem out;
  out.which = which;
  const std::array<int, 3> order{a_idx, rest[0], rest[1]};
  for (int k = 0; k < 3; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    out.energies[static_cast<std::size_t>(k)] = e(src);
    Eigen::Vector3cd col = v.col(src);
    // Fix the phase so the first component is real and positive.
    if (std::abs(col(0)) > 1e-14) col *= std::abs(col(0)) / col(0);
    out.vectors.col(k) = col;
  }
  return out;
}

/// First simultaneous barrier revival at resonance a = b.
inline double revival_time(double j_xy, double j_z) {
  if (!(j_xy > 0.0)) throw ContractError("revival_time: j_xy must be positive");
  return std::numbers::pi / std::sqrt(8.0 * j_xy * j_xy + j_z * j_z);
}

/// phi = (pi/2) J_Z / sqrt(8 J_XY^2 + J_Z^2), regular at J_Z = 0.
inline double primitive_phase(double j_xy, double j_z) {
  return 0.5 * std::numbers::pi * j_z / std::sqrt(8.0 * j_xy * j_xy + j_z * j_z);
}

/// [[1,0,0,0],[0,iQs,Qc,0],[0,Qc,iQs,0],[0,0,0,W]], Q = -e^{i phi}, W = -e^{-2 i phi}.
inline TwoQubitGate primitive_gate_analytic(double j_xy, double j_z) {
  if (!(j_xy > 0.0)) throw ContractError("primitive_gate_analytic: j_xy must be positive");
  if (j_z < 0.0) throw ContractError("primitive_gate_analytic: j_z must be >= 0");
  const double phi = primitive_phase(j_xy, j_z);
  const Complex i{0.0, 1.0};
  const Complex q = -std::polar(1.0, phi);
  const Complex w = -std::polar(1.0, -2.0 * phi);
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = u(2, 2) = i * q * s;
  u(1, 2) = u(2, 1) = q * c;
  u(3, 3) = w;
  return TwoQubitGate(u, Frame::passive_referenced);
}

/// Z(psi) x Z(psi) applied after the primitive, psi = (pi/4)(1 - J_Z / sqrt(8 J^2 + J_Z^2)).
/// Global phase fixed so the |00> entry is 1.
inline TwoQubitGate dressed_gate(double j_xy, double j_z) {
  const double psi = 0.25 * std::numbers::pi * (1.0 - j_z / std::sqrt(8.0 * j_xy * j_xy + j_z * j_z));
  const Matrix2 z = gates::z_rotation(psi);
  const Matrix4 m = gates::kron(z, z) * primitive_gate_analytic(j_xy, j_z).matrix();
  return TwoQubitGate(fix_global_phase(m), Frame::passive_referenced);
}

/// How resonance a = b is reached: by moving the barrier (the standard protocol) or
/// by moving both qubits onto the barrier. The two differ by single-qubit Z gates.
enum class ResonanceShift { central, outer };

struct NumericGateOptions {
  double qubit_zeeman = 0.0;    // A, bare Zeeman energy of the qubits
  ResonanceShift shift = ResonanceShift::central;
  double barrier_zeeman = 0.0;  // B, only used with ResonanceShift::outer
  double revival_tolerance = 1e-8;
};

struct NumericGate {
  TwoQubitGate raw;
  TwoQubitGate passive;
  std::array<double, 4> barrier_up_probability{};
  double revival_time = 0.0;
  TripletParams params;
};

/// 4x4 block of an 8x8 propagator on the computational states.
inline Matrix4 qubit_block(const Matrix& u) {
  const auto& idx = triplet_qubit_states();
  Matrix4 g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      g(r, c) = u(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                  static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  return g;
}

/// Removes the idle evolution of the qubits (effective energy a_idle + J_Z, the
/// barrier contributing J_Z through its Ising bond) over `duration`, then fixes
/// the global phase.
inline Matrix4 to_passive_frame(const Matrix4& raw, double a_idle, double j_z, double duration) {
  static const std::array<int, 4> qubit_sz_sum{-2, 0, 0, 2};
  Matrix4 m = raw;
  for (int r = 0; r < 4; ++r) m.row(r) *= std::polar(1.0, (a_idle + j_z) * qubit_sz_sum[static_cast<std::size_t>(r)] * duration);
  return fix_global_phase(m);
}

/// Simulates the isolated triplet at resonance for t_R and reads off the gate.
inline NumericGate primitive_gate_numeric(double j_xy, double j_z, const NumericGateOptions& options = {}) {
  const double a_idle = options.qubit_zeeman + j_z;
  TripletParams params{a_idle, a_idle, j_xy, j_z};
  if (options.shift == ResonanceShift::outer) params = {options.barrier_zeeman, options.barrier_zeeman, j_xy, j_z};

  const double t_r = revival_time(j_xy, j_z);
  const auto prop = propagator_exact(triplet_hamiltonian(params), t_r);
  const Matrix4 block = qubit_block(prop.matrix());

  NumericGate out;
  out.params = params;
  out.revival_time = t_r;
  for (int c = 0; c < 4; ++c) {
    out.barrier_up_probability[static_cast<std::size_t>(c)] = block.col(c).squaredNorm();
    if (1.0 - block.col(c).squaredNorm() > options.revival_tolerance) {
      throw ProtocolError("primitive_gate_numeric: barrier did not revive for input " + std::to_string(c) +
                          " (1 - P = " + std::to_string(1.0 - block.col(c).squaredNorm()) + ")");
    }
  }
  out.raw = TwoQubitGate(block, Frame::raw);
  out.passive = TwoQubitGate(to_passive_frame(block, a_idle, j_z, t_r), Frame::passive_referenced);
  return out;
}

struct FrozenNeighborReport {
  double big_delta = 0.0;
  double distance = 0.0;          // phase-aligned distance of the 5-spin gate to the 3-spin gate
  double scaling_constant = 0.0;  // distance / (J / big_delta)
  double min_barrier_revival = 0.0;
  double min_edge_sz = 0.0;  // smallest final <sigma^Z> of spins 0 and 4 over the inputs
  TwoQubitGate gate;
};

/// Embeds the triplet in a 5-spin open chain whose end spins sit big_delta/2
/// above the qubits in |up>, and compares the resulting gate on spins 1 and 3
/// with the isolated 3-spin gate (both in the raw frame).
inline FrozenNeighborReport frozen_neighbor_check(double j_xy, double j_z, double big_delta,
                                                  double qubit_zeeman = 0.0) {
  if (!(big_delta > 0.0)) throw ContractError("frozen_neighbor_check: big_delta must be positive");
  const double t_r = revival_time(j_xy, j_z);
  const double a = qubit_zeeman + j_z;
  const Matrix4 reference =
      qubit_block(propagator_exact(triplet_hamiltonian({a, a, j_xy, j_z}), t_r).matrix());

  const double edge = qubit_zeeman + 0.5 * big_delta;
  ChainSpec spec{5, Topology::open, j_xy, j_z / j_xy, {edge, qubit_zeeman, a, qubit_zeeman, edge}};
  const auto prop = propagator_exact(build_hamiltonian(spec), t_r);

  const std::array<std::string, 4> inner{"dud", "duu", "uud", "uuu"};
  std::array<std::size_t, 4> idx{};
  for (std::size_t k = 0; k < 4; ++k) idx[k] = basis_index("u" + inner[k] + "u");

  Matrix4 block;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      block(r, c) = prop.matrix()(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                                  static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));

  FrozenNeighborReport out;
  out.big_delta = big_delta;
  out.distance = phase_aligned_distance(Matrix(block), Matrix(reference));
  out.scaling_constant = out.distance * big_delta / j_xy;
  out.min_barrier_revival = 1.0;
  out.min_edge_sz = 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    const SpinState s = prop.apply(SpinState::basis(idx[c], 5));
    out.min_barrier_revival = std::min(out.min_barrier_revival, s.probability_up(2));
    out.min_edge_sz = std::min({out.min_edge_sz, s.sz(0), s.sz(4)});
  }
  // The block is only unitary up to O(delta) leakage; keep the closest unitary.
  Eigen::JacobiSVD<Matrix4> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.gate = TwoQubitGate(svd.matrixU() * svd.matrixV().adjoint(), Frame::raw);
  return out;
}

}  // namespace spinlab
