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

// Local invariants of two-qubit gates and numerical CNOT synthesis from a
// fixed entangling primitive interleaved with single-qubit rotations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinlab/parallel.hpp"
#include "spinlab/two_qubit.hpp"

namespace spinlab {

struct MakhlinInvariants {
  Complex g1;
  double g2 = 0.0;
};

/// Makhlin's local invariants (Y. Makhlin, Quantum Inf. Process. 1, 243 (2002)).
/// In the magic basis Q, local gates become real orthogonal, so with
/// U_B = Q^dag U Q and m = U_B^T U_B:
///   g1 = tr(m)^2 / (16 det U),   g2 = (tr(m)^2 - tr(m^2)) / (4 det U).
/// g2 is real for any unitary U. Identity -> (1, 3), CNOT -> (0, 1), SWAP -> (-1, -3).
inline MakhlinInvariants makhlin(const Matrix4& u) {
  if (unitarity_defect(u) >= kUnitaryTolerance) throw ContractError("makhlin: input is not unitary");
  const Complex i{0.0, 1.0};
  Matrix4 q;
  q << 1, 0, 0, i,
       0, i, 1, 0,
       0, i, -1, 0,
       1, 0, 0, -i;
  q /= std::sqrt(2.0);
  const Matrix4 ub = q.adjoint() * u * q;
  const Matrix4 m = ub.transpose() * ub;
  const Complex det = u.determinant();
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  return {tr * tr / (16.0 * det), ((tr * tr - tr2) / (4.0 * det)).real()};
}

inline MakhlinInvariants makhlin(const TwoQubitGate& g) { return makhlin(g.matrix()); }

inline double invariant_distance(const MakhlinInvariants& a, const MakhlinInvariants& b) {
  return std::max(std::abs(a.g1 - b.g1), std::abs(a.g2 - b.g2));
}

/// True unless U is locally equivalent to the identity or to SWAP, the two classes
/// that map every product state to a product state.
inline bool is_entangling(const Matrix4& u, double tol = 1e-9) {
  const auto inv = makhlin(u);
  const bool identity_class = std::abs(inv.g1 - 1.0) <= tol && std::abs(inv.g2 - 3.0) <= tol;
  const bool swap_class = std::abs(inv.g1 + 1.0) <= tol && std::abs(inv.g2 + 3.0) <= tol;
  return !identity_class && !swap_class;
}

inline bool is_entangling(const TwoQubitGate& g, double tol = 1e-9) { return is_entangling(g.matrix(), tol); }

/// Single-qubit unitary Z(beta) Y(gamma) Z(rho).
struct EulerAngles {
  double beta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;

  Matrix2 unitary() const {
    return gates::z_rotation(beta) * gates::y_rotation(gamma) * gates::z_rotation(rho);
  }
};

struct CircuitLayer {
  enum class Kind { primitive, local } kind = Kind::local;
  EulerAngles first;   // acts on the first (more significant) qubit
  EulerAngles second;

  static CircuitLayer primitive() { return {Kind::primitive, {}, {}}; }
  static CircuitLayer local(EulerAngles a, EulerAngles b) { return {Kind::local, a, b}; }
};

/// Layers listed in time order; the first layer acts first.
struct GateCircuit {
  std::vector<CircuitLayer> layers;

  int primitive_count() const {
    return static_cast<int>(std::count_if(layers.begin(), layers.end(), [](const CircuitLayer& l) {
      return l.kind == CircuitLayer::Kind::primitive;
    }));
  }

  Matrix4 unitary(const Matrix4& primitive) const {
    Matrix4 u = Matrix4::Identity();
    for (const auto& layer : layers) {
      if (layer.kind == CircuitLayer::Kind::primitive) {
        u = primitive * u;
      } else {
        u = gates::kron(layer.first.unitary(), layer.second.unitary()) * u;
      }
    }
    return u;
  }
};

inline nlohmann::json circuit_to_json(const GateCircuit& c) {
  auto layers = nlohmann::json::array();
  for (const auto& l : c.layers) {
    if (l.kind == CircuitLayer::Kind::primitive) {
      layers.push_back({{"type", "primitive"}});
    } else {
      layers.push_back({{"type", "local"},
                        {"qubit0", {l.first.beta, l.first.gamma, l.first.rho}},
                        {"qubit1", {l.second.beta, l.second.gamma, l.second.rho}}});
    }
  }
  return {{"euler_convention", "Z(beta) Y(gamma) Z(rho)"}, {"layers", layers}};
}

inline GateCircuit circuit_from_json(const nlohmann::json& j) {
  GateCircuit c;
  for (const auto& l : j.at("layers")) {
    const auto type = l.at("type").get<std::string>();
    if (type == "primitive") {
      c.layers.push_back(CircuitLayer::primitive());
    } else if (type == "local") {
      const auto a = l.at("qubit0").get<std::vector<double>>();
      const auto b = l.at("qubit1").get<std::vector<double>>();
      if (a.size() != 3 || b.size() != 3) throw ContractError("circuit JSON: angle triples expected");
      c.layers.push_back(CircuitLayer::local({a[0], a[1], a[2]}, {b[0], b[1], b[2]}));
    } else {
      throw ContractError("circuit JSON: unknown layer type '" + type + "'");
    }
  }
  return c;
}

struct SynthesisOptions {
  int restarts = 64;
  std::uint64_t seed = 20260101;
  double tolerance = 1e-6;
  int max_sweeps = 3000;
};

struct SynthesisResult {
  GateCircuit circuit;
  double distance = std::numeric_limits<double>::infinity();
  bool converged = false;
  int best_restart = -1;
};

namespace detail {

/// Builds local, primitive, local, ..., local with `uses` primitives from a flat angle list.
inline GateCircuit interleaved_circuit(int uses, const std::vector<double>& angles) {
  GateCircuit c;
  std::size_t k = 0;
  auto take = [&] {
    EulerAngles e{angles[k], angles[k + 1], angles[k + 2]};
    k += 3;
    return e;
  };
  for (int layer = 0; layer <= uses; ++layer) {
    const EulerAngles a = take();
    const EulerAngles b = take();
    c.layers.push_back(CircuitLayer::local(a, b));
    if (layer < uses) c.layers.push_back(CircuitLayer::primitive());
  }
  return c;
}

/// Coordinate ascent on |tr(target^dag C)|. Each angle enters C as
/// A e^{i theta} + B e^{-i theta}, so the coordinate optimum is exact:
/// 2 theta = arg B - arg A.
inline double rotosolve(const Matrix4& primitive, const Matrix4& target, int uses, std::vector<double>& angles,
                        int max_sweeps, double stop_distance) {
  auto overlap = [&](const std::vector<double>& a) {
    return (target.adjoint() * interleaved_circuit(uses, a).unitary(primitive)).trace();
  };
  auto distance = [&](const std::vector<double>& a) {
    return phase_aligned_distance(Matrix(interleaved_circuit(uses, a).unitary(primitive)), Matrix(target));
  };

  double best = distance(angles);
  int stalled = 0;
  for (int sweep = 0; sweep < max_sweeps && best > stop_distance; ++sweep) {
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double keep = angles[k];
      angles[k] = 0.0;
      const Complex t0 = overlap(angles);
      angles[k] = std::numbers::pi / 2;
      const Complex t1 = overlap(angles);
      const Complex a = 0.5 * (t0 - Complex{0.0, 1.0} * t1);
      const Complex b = 0.5 * (t0 + Complex{0.0, 1.0} * t1);
      angles[k] = (std::abs(a) > 0.0 && std::abs(b) > 0.0) ? 0.5 * (std::arg(b) - std::arg(a)) : keep;
    }
    const double d = distance(angles);
    stalled = (best - d) <= 1e-15 * std::max(1.0, best) ? stalled + 1 : 0;
    best = std::min(best, d);
    if (stalled >= 25) break;
  }
  return distance(angles);
}

}  // namespace detail

/// Searches the rotation angles of local-[primitive-local] x uses for the circuit
/// closest (up to global phase) to CNOT. Restarts run independently from seeded
/// random angles; ties keep the lowest restart index so the result never depends
/// on thread scheduling.
inline SynthesisResult synthesize_cnot(const TwoQubitGate& primitive, int uses, const SynthesisOptions& options = {}) {
  if (uses < 1 || uses > 4) throw ContractError("synthesize_cnot: uses must be in 1..4");
  if (options.restarts < 1) throw ContractError("synthesize_cnot: need at least one restart");
  const Matrix4 prim = primitive.matrix();
  const Matrix4 target = gates::cnot();
  const std::size_t n_angles = static_cast<std::size_t>(6 * (uses + 1));

  struct Attempt {
    std::vector<double> angles;
    double distance;
  };
  std::vector<int> indices(static_cast<std::size_t>(options.restarts));
  for (int r = 0; r < options.restarts; ++r) indices[static_cast<std::size_t>(r)] = r;

  const auto attempts = parallel_map(indices, [&](int r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> a(n_angles);
    for (auto& x : a) x = angle(rng);
    const double d = detail::rotosolve(prim, target, uses, a, options.max_sweeps, 1e-3 * options.tolerance);
    return Attempt{std::move(a), d};
  });

  SynthesisResult result;
  for (std::size_t r = 0; r < attempts.size(); ++r) {
    if (attempts[r].distance < result.distance) {
      result.distance = attempts[r].distance;
      result.best_restart = static_cast<int>(r);
      result.circuit = detail::interleaved_circuit(uses, attempts[r].angles);
    }
  }
  result.distance = phase_aligned_distance(Matrix(result.circuit.unitary(prim)), Matrix(target));
  result.converged = result.distance < options.tolerance;
  return result;
}

}  // namespace spinlab
