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

// 4x4 gates on a qubit pair. Basis order |00>, |01>, |10>, |11>; the first qubit
// is the more significant one.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include <json.hpp>

#include "spinlab/errors.hpp"
#include "spinlab/evolution.hpp"

namespace spinlab {

using Matrix4 = Eigen::Matrix4cd;
using Matrix2 = Eigen::Matrix2cd;

/// raw: phases exactly as simulated. passive_referenced: phases measured against
/// the idle (far-detuned) evolution of the same qubits, global phase fixed so
/// that the |00> entry is real and positive.
enum class Frame { raw, passive_referenced };

inline std::string to_string(Frame f) { return f == Frame::raw ? "raw" : "passive"; }

inline Frame frame_from_string(std::string_view s) {
  if (s == "raw") return Frame::raw;
  if (s == "passive" || s == "passive_referenced") return Frame::passive_referenced;
  throw ContractError("unknown frame '" + std::string(s) + "'");
}

class TwoQubitGate {
 public:
  TwoQubitGate() : matrix_(Matrix4::Identity()) {}

  explicit TwoQubitGate(const Matrix4& matrix, Frame frame = Frame::raw) : matrix_(matrix), frame_(frame) {
    if (unitarity_defect(matrix_) >= kUnitaryTolerance) {
      throw ContractError("TwoQubitGate: matrix is not unitary (defect " +
                          std::to_string(unitarity_defect(matrix_)) + ")");
    }
  }

  const Matrix4& matrix() const { return matrix_; }
  Frame frame() const { return frame_; }
  Complex operator()(int r, int c) const { return matrix_(r, c); }

 private:
  Matrix4 matrix_;
  Frame frame_ = Frame::raw;
};

inline double phase_aligned_distance(const TwoQubitGate& u, const TwoQubitGate& v) {
  return phase_aligned_distance(Matrix(u.matrix()), Matrix(v.matrix()));
}

/// Divides out the phase of the |00><00| entry (or of the trace when that entry vanishes).
inline Matrix4 fix_global_phase(const Matrix4& m) {
  Complex ref = m(0, 0);
  if (std::abs(ref) < 1e-12) ref = m.trace();
  if (std::abs(ref) < 1e-12) return m;
  return m * (std::abs(ref) / ref);
}

namespace gates {

inline Matrix4 identity() { return Matrix4::Identity(); }

inline Matrix4 cnot() {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

inline Matrix4 swap() {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return m;
}

inline Matrix4 iswap() {
  const Complex i{0.0, 1.0};
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 2) = m(2, 1) = i;
  return m;
}

/// Z(theta) = diag(e^{i theta}, e^{-i theta}).
inline Matrix2 z_rotation(double theta) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = std::polar(1.0, theta);
  m(1, 1) = std::polar(1.0, -theta);
  return m;
}

/// Y(theta) = exp(-i theta sigma^Y) = [[cos, -sin], [sin, cos]].
inline Matrix2 y_rotation(double theta) {
  Matrix2 m;
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
  Matrix4 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return m;
}

}  // namespace gates

inline void to_json(nlohmann::json& j, const Matrix4& m) {
  j = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    j.push_back(row);
  }
}

inline Matrix4 matrix4_from_json(const nlohmann::json& j) {
  Matrix4 m;
  if (!j.is_array() || j.size() != 4) throw ContractError("gate JSON: expected 4 rows");
  for (int r = 0; r < 4; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != 4) throw ContractError("gate JSON: expected 4 columns");
    for (int c = 0; c < 4; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      m(r, c) = Complex{e.at(0).get<double>(), e.at(1).get<double>()};
    }
  }
  return m;
}

/// {"frame": "raw"|"passive", "basis": [...], "matrix": 4x4 of [re, im]}
inline nlohmann::json gate_to_json(const TwoQubitGate& g) {
  nlohmann::json m;
  to_json(m, g.matrix());
  return {{"frame", to_string(g.frame())}, {"basis", {"00", "01", "10", "11"}}, {"matrix", m}};
}

inline TwoQubitGate gate_from_json(const nlohmann::json& j) {
  return TwoQubitGate(matrix4_from_json(j.at("matrix")), frame_from_string(j.at("frame").get<std::string>()));
}

}  // namespace spinlab
