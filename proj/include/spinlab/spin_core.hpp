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

// Spin-1/2 product spaces, embedded Pauli operators and the anisotropic
// exchange Hamiltonians.
//
// Conventions shared by every module:
//   * hbar = 1, energies in units of J_XY, times in units of 1/J_XY.
//   * Per-site basis {|up>, |down>} with sigma^Z |up> = +|up>.
//   * Site 0 is the most significant position of the product-basis index, so
//     bit (n-1-j) of the index holds site j and a 0 bit means |up>.
//   * sigma^{+-} = sigma^X +- i sigma^Y (not halved): sigma^+ |down> = 2 |up>.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinlab/errors.hpp"

namespace spinlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kDefaultSiteCap = 14;
inline constexpr double kHermitianTolerance = 1e-12;

enum class Topology { ring, open };
enum class Axis { X, Y, Z, plus, minus };

inline std::size_t dimension(int n_sites) { return std::size_t{1} << n_sites; }

inline std::size_t site_mask(int site, int n_sites) {
  return std::size_t{1} << (n_sites - 1 - site);
}

/// +1 for |up>, -1 for |down>.
inline int sz_value(std::size_t index, int site, int n_sites) {
  return (index & site_mask(site, n_sites)) ? -1 : 1;
}

/// Index of a product state written as a string of 'u'/'d' (site 0 first).
inline std::size_t basis_index(std::string_view spins) {
  std::size_t index = 0;
  for (char c : spins) {
    index <<= 1;
    if (c == 'd' || c == 'D') {
      index |= 1;
    } else if (c != 'u' && c != 'U') {
      throw ContractError("basis label must contain only 'u' or 'd': " + std::string(spins));
    }
  }
  return index;
}

inline std::string basis_label(std::size_t index, int n_sites) {
  std::string label(static_cast<std::size_t>(n_sites), 'u');
  for (int j = 0; j < n_sites; ++j) {
    if (sz_value(index, j, n_sites) < 0) label[static_cast<std::size_t>(j)] = 'd';
  }
  return label;
}

/// Total sigma^Z eigenvalue (sum over sites) of a basis state.
inline int magnetization(std::size_t index, int n_sites) {
  int m = 0;
  for (int j = 0; j < n_sites; ++j) m += sz_value(index, j, n_sites);
  return m;
}

struct Bond {
  int i = 0;
  int j = 0;
  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Nearest-neighbour bonds of a chain. A ring wraps site n-1 back to 0, which
/// for n = 2 doubles the single bond, exactly as the modular sum does.
inline std::vector<Bond> chain_bonds(int n_sites, Topology topology) {
  std::vector<Bond> bonds;
  const int count = topology == Topology::ring ? n_sites : n_sites - 1;
  for (int j = 0; j < count; ++j) bonds.push_back({j, (j + 1) % n_sites});
  return bonds;
}

struct ChainSpec {
  int n_sites = 2;
  Topology topology = Topology::ring;
  double j_xy = 1.0;
  double alpha = 0.0;
  std::vector<double> zeeman;

  double j_z() const { return alpha * j_xy; }

  std::vector<Bond> bonds() const { return chain_bonds(n_sites, topology); }

  /// j_xy = 0 is accepted: it is the decoupled limit used by the residual checks.
  void validate(int site_cap = kDefaultSiteCap) const {
    if (n_sites < 2) throw ContractError("ChainSpec: n_sites must be >= 2");
    if (n_sites > site_cap) {
      throw ContractError("ChainSpec: n_sites " + std::to_string(n_sites) +
                          " exceeds the site cap " + std::to_string(site_cap));
    }
    if (!(j_xy >= 0.0) || !std::isfinite(j_xy)) throw ContractError("ChainSpec: j_xy must be >= 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ContractError("ChainSpec: alpha must be >= 0");
    if (zeeman.size() != static_cast<std::size_t>(n_sites)) {
      throw ContractError("ChainSpec: zeeman list must have n_sites entries");
    }
    for (double b : zeeman) {
      if (!std::isfinite(b)) throw ContractError("ChainSpec: zeeman energies must be finite");
    }
  }
};

/// Dense operator on the 2^n product space.
class ManyBodyOperator {
 public:
  ManyBodyOperator() = default;

  ManyBodyOperator(Matrix matrix, int n_sites, bool hermitian)
      : matrix_(std::move(matrix)), n_sites_(n_sites), hermitian_(hermitian) {
    const auto dim = static_cast<Eigen::Index>(dimension(n_sites_));
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
      throw ContractError("ManyBodyOperator: matrix is not 2^n x 2^n");
    }
    if (hermitian_ && hermiticity_defect() >= kHermitianTolerance) {
      throw ContractError("ManyBodyOperator: flagged hermitian but ||M - M^dag|| = " +
                          std::to_string(hermiticity_defect()));
    }
  }

  const Matrix& matrix() const { return matrix_; }
  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  bool is_hermitian() const { return hermitian_; }

  double hermiticity_defect() const { return (matrix_ - matrix_.adjoint()).norm(); }

  bool is_diagonal(double tol = 0.0) const {
    for (Eigen::Index c = 0; c < dim(); ++c) {
      for (Eigen::Index r = 0; r < dim(); ++r) {
        if (r != c && std::abs(matrix_(r, c)) > tol) return false;
      }
    }
    return true;
  }

  friend ManyBodyOperator operator+(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    check_same_space(a, b);
    return {a.matrix_ + b.matrix_, a.n_sites_, a.hermitian_ && b.hermitian_};
  }
  friend ManyBodyOperator operator-(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    check_same_space(a, b);
    return {a.matrix_ - b.matrix_, a.n_sites_, a.hermitian_ && b.hermitian_};
  }
  friend ManyBodyOperator operator*(double s, const ManyBodyOperator& a) {
    return {s * a.matrix_, a.n_sites_, a.hermitian_};
  }
  friend ManyBodyOperator operator*(Complex s, const ManyBodyOperator& a) {
    return {s * a.matrix_, a.n_sites_, a.hermitian_ && s.imag() == 0.0};
  }
  friend ManyBodyOperator operator*(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    check_same_space(a, b);
    return {a.matrix_ * b.matrix_, a.n_sites_, false};
  }

 private:
  static void check_same_space(const ManyBodyOperator& a, const ManyBodyOperator& b) {
    if (a.n_sites_ != b.n_sites_) throw ContractError("operators act on different spaces");
  }

  Matrix matrix_;
  int n_sites_ = 0;
  bool hermitian_ = false;
};

inline ManyBodyOperator commutator(const ManyBodyOperator& a, const ManyBodyOperator& b) {
  return {a.matrix() * b.matrix() - b.matrix() * a.matrix(), a.n_sites(), false};
}

/// Normalized pure state on the 2^n product space.
class SpinState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  SpinState(Vector amplitudes, int n_sites) : amps_(std::move(amplitudes)), n_sites_(n_sites) {
    if (amps_.size() != static_cast<Eigen::Index>(dimension(n_sites_))) {
      throw ContractError("SpinState: amplitude vector is not of length 2^n");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance) {
      throw ContractError("SpinState: amplitudes are not normalized");
    }
  }

  static SpinState normalized(Vector amplitudes, int n_sites) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) throw ContractError("SpinState: zero vector");
    return {amplitudes / norm, n_sites};
  }

  static SpinState basis(std::size_t index, int n_sites) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension(n_sites)));
    if (index >= dimension(n_sites)) throw IndexError("SpinState: basis index out of range");
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(v), n_sites};
  }

  static SpinState product(std::string_view spins) {
    return basis(basis_index(spins), static_cast<int>(spins.size()));
  }

  const Vector& amplitudes() const { return amps_; }
  int n_sites() const { return n_sites_; }
  double norm() const { return amps_.norm(); }

  Complex expectation(const ManyBodyOperator& op) const {
    return amps_.dot(op.matrix() * amps_);
  }

  /// <sigma^Z_site>, evaluated directly on the diagonal.
  double sz(int site) const {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < amps_.size(); ++k) {
      acc += sz_value(static_cast<std::size_t>(k), site, n_sites_) * std::norm(amps_(k));
    }
    return acc;
  }

  /// Probability that `site` is found in |up>.
  double probability_up(int site) const { return 0.5 * (1.0 + sz(site)); }

 private:
  Vector amps_;
  int n_sites_;
};

namespace detail {

inline Eigen::Matrix2cd single_site(Axis axis) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << 0, -i, i, 0; break;
    case Axis::Z: m << 1, 0, 0, -1; break;
    case Axis::plus: m << 0, 2, 0, 0; break;
    case Axis::minus: m << 0, 0, 2, 0; break;
  }
  return m;
}

}  // namespace detail

/// I x ... x sigma^axis x ... x I with the Pauli factor on `site`.
inline ManyBodyOperator embed_pauli(Axis axis, int site, int n_sites) {
  if (n_sites < 1) throw ContractError("embed_pauli: n_sites must be positive");
  if (site < 0 || site >= n_sites) {
    throw IndexError("embed_pauli: site " + std::to_string(site) + " out of range for " +
                     std::to_string(n_sites) + " sites");
  }
  const Eigen::Matrix2cd local = detail::single_site(axis);
  const std::size_t dim = dimension(n_sites);
  const std::size_t mask = site_mask(site, n_sites);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const int in_bit = (col & mask) ? 1 : 0;
    for (int out_bit = 0; out_bit < 2; ++out_bit) {
      const Complex v = local(out_bit, in_bit);
      if (v == Complex{}) continue;
      const std::size_t row = out_bit ? (col | mask) : (col & ~mask);
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    }
  }
  const bool hermitian = axis == Axis::X || axis == Axis::Y || axis == Axis::Z;
  return {std::move(m), n_sites, hermitian};
}

inline ManyBodyOperator total_sz(int n_sites) {
  const std::size_t dim = dimension(n_sites);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = magnetization(k, n_sites);
  }
  return {std::move(m), n_sites, true};
}

/// Diagonal part: sum_j B_j sigma^Z_j + J_Z sum_bonds sigma^Z_i sigma^Z_j.
inline ManyBodyOperator ising_operator(int n_sites, const std::vector<Bond>& bonds, double j_z,
                                       const std::vector<double>& zeeman) {
  if (zeeman.size() != static_cast<std::size_t>(n_sites)) {
    throw ContractError("ising_operator: zeeman list must have n_sites entries");
  }
  const std::size_t dim = dimension(n_sites);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    double e = 0.0;
    for (int j = 0; j < n_sites; ++j) e += zeeman[static_cast<std::size_t>(j)] * sz_value(k, j, n_sites);
    for (const Bond& b : bonds) e += j_z * sz_value(k, b.i, n_sites) * sz_value(k, b.j, n_sites);
    m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = e;
  }
  return {std::move(m), n_sites, true};
}

/// (J/2) sum_bonds (sigma^+_i sigma^-_j + sigma^-_i sigma^+_j). With the un-halved
/// sigma^{+-} each bond contributes 2J between |..up..down..> and |..down..up..>.
inline ManyBodyOperator flip_flop_operator(int n_sites, const std::vector<Bond>& bonds, double j_xy) {
  const std::size_t dim = dimension(n_sites);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const Bond& b : bonds) {
    const std::size_t mi = site_mask(b.i, n_sites);
    const std::size_t mj = site_mask(b.j, n_sites);
    for (std::size_t k = 0; k < dim; ++k) {
      const bool bi = k & mi;
      const bool bj = k & mj;
      if (bi == bj) continue;
      const std::size_t flipped = k ^ mi ^ mj;
      m(static_cast<Eigen::Index>(flipped), static_cast<Eigen::Index>(k)) += 2.0 * j_xy;
    }
  }
  return {std::move(m), n_sites, true};
}

/// Full XXZ Hamiltonian on an arbitrary bond list; reused by the graph geometries.
inline ManyBodyOperator xxz_hamiltonian(int n_sites, const std::vector<Bond>& bonds, double j_xy,
                                        double j_z, const std::vector<double>& zeeman) {
  return ising_operator(n_sites, bonds, j_z, zeeman) + flip_flop_operator(n_sites, bonds, j_xy);
}

/// sum_j B_j sigma^Z_j for an explicit field list (any n >= 1).
inline ManyBodyOperator build_h_single(const std::vector<double>& zeeman) {
  return ising_operator(static_cast<int>(zeeman.size()), {}, 0.0, zeeman);
}

inline ManyBodyOperator build_h_single(const ChainSpec& spec) {
  spec.validate();
  return ising_operator(spec.n_sites, {}, 0.0, spec.zeeman);
}

inline ManyBodyOperator build_h_int(const ChainSpec& spec) {
  spec.validate();
  const auto bonds = spec.bonds();
  const std::vector<double> no_field(static_cast<std::size_t>(spec.n_sites), 0.0);
  return ising_operator(spec.n_sites, bonds, spec.j_z(), no_field) +
         flip_flop_operator(spec.n_sites, bonds, spec.j_xy);
}

/// Ising part: Zeeman terms plus the sigma^Z sigma^Z bonds (diagonal).
inline ManyBodyOperator build_h1(const ChainSpec& spec) {
  spec.validate();
  return ising_operator(spec.n_sites, spec.bonds(), spec.j_z(), spec.zeeman);
}

/// Flip-flop part (J/2) sum (sigma^+ sigma^- + h.c.).
inline ManyBodyOperator build_h2(const ChainSpec& spec) {
  spec.validate();
  return flip_flop_operator(spec.n_sites, spec.bonds(), spec.j_xy);
}

inline ManyBodyOperator build_hamiltonian(const ChainSpec& spec) {
  return build_h1(spec) + build_h2(spec);
}

// JSON: {"n_sites", "topology": "ring"|"open", "j_xy", "alpha", "zeeman": [...]}

inline std::string to_string(Topology t) { return t == Topology::ring ? "ring" : "open"; }

inline Topology topology_from_string(std::string_view s) {
  if (s == "ring") return Topology::ring;
  if (s == "open") return Topology::open;
  throw ContractError("unknown topology '" + std::string(s) + "'");
}

inline void to_json(nlohmann::json& j, const ChainSpec& spec) {
  j = nlohmann::json{{"n_sites", spec.n_sites},
                     {"topology", to_string(spec.topology)},
                     {"j_xy", spec.j_xy},
                     {"alpha", spec.alpha},
                     {"zeeman", spec.zeeman}};
}

inline void from_json(const nlohmann::json& j, ChainSpec& spec) {
  spec.n_sites = j.at("n_sites").get<int>();
  spec.topology = topology_from_string(j.at("topology").get<std::string>());
  spec.j_xy = j.at("j_xy").get<double>();
  spec.alpha = j.at("alpha").get<double>();
  spec.zeeman = j.at("zeeman").get<std::vector<double>>();
  spec.validate();
}

}  // namespace spinlab
