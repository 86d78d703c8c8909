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

// Reference constructions for the tests, deliberately built a different way from
// the library: explicit Kronecker products of 2x2 Pauli matrices and a Pade/scaling
// matrix exponential instead of bit tricks and eigen-decomposition.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <string>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M pauli(char which) {
  M m = M::Zero(2, 2);
  switch (which) {
    case 'x': m(0, 1) = m(1, 0) = 1.0; break;
    case 'y': m(0, 1) = C{0, -1}; m(1, 0) = C{0, 1}; break;
    case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: m = M::Identity(2, 2);
  }
  return m;
}

inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// sigma^which on `site` of n (site 0 leftmost factor).
inline M op(char which, int site, int n) {
  M out = M::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? pauli(which) : pauli('i'));
  return out;
}

/// sum_j B_j Z_j + sum_bonds [ J (XX + YY) + J_Z ZZ ]
inline M xxz(int n, const std::vector<std::pair<int, int>>& bonds, double j, double j_z, const std::vector<double>& b) {
  const Eigen::Index d = Eigen::Index{1} << n;
  M h = M::Zero(d, d);
  for (int s = 0; s < n; ++s) h += b[static_cast<std::size_t>(s)] * op('z', s, n);
  for (auto [p, q] : bonds) {
    h += j * (op('x', p, n) * op('x', q, n) + op('y', p, n) * op('y', q, n));
    h += j_z * op('z', p, n) * op('z', q, n);
  }
  return h;
}

inline std::vector<std::pair<int, int>> ring(int n) {
  std::vector<std::pair<int, int>> b;
  for (int s = 0; s < n; ++s) b.emplace_back(s, (s + 1) % n);
  return b;
}

inline std::vector<std::pair<int, int>> path(int n) {
  std::vector<std::pair<int, int>> b;
  for (int s = 0; s + 1 < n; ++s) b.emplace_back(s, s + 1);
  return b;
}

inline M expm_minus_i(const M& h, double t) {
  const M a = C{0.0, -t} * h;
  return a.exp();
}

/// Index of a "udu..." label with site 0 most significant and 'd' = 1.
inline std::size_t index(const std::string& label) {
  std::size_t k = 0;
  for (char ch : label) k = (k << 1) | (ch == 'd' ? 1U : 0U);
  return k;
}

/// P(site is up) for column `input` of u.
inline double prob_up(const M& u, std::size_t input, int site, int n) {
  double p = 0.0;
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    if (((static_cast<std::size_t>(r) >> (n - 1 - site)) & 1U) == 0U) p += std::norm(u(r, static_cast<Eigen::Index>(input)));
  }
  return p;
}

/// min over global phase of ||u - e^{i t} v||_F, evaluated directly.
inline double phase_distance(const M& u, const M& v) {
  const C ov = (v.adjoint() * u).trace();
  const double ph = std::abs(ov) > 0 ? std::arg(ov) : 0.0;
  return (u * std::polar(1.0, -ph) - v).norm();
}

}  // namespace oracle
