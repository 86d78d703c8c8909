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

// Exact, Trotterized and time-dependent unitary propagation.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "spinlab/spin_core.hpp"

namespace spinlab {

inline constexpr double kUnitaryTolerance = 1e-10;

inline double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

class Propagator {
 public:
  Propagator(Matrix matrix, int n_sites, double duration)
      : matrix_(std::move(matrix)), n_sites_(n_sites), duration_(duration) {
    if (unitarity_defect(matrix_) >= kUnitaryTolerance) {
      throw ContractError("Propagator: matrix is not unitary (defect " +
                          std::to_string(unitarity_defect(matrix_)) + ")");
    }
  }

  const Matrix& matrix() const { return matrix_; }
  int n_sites() const { return n_sites_; }
  double duration() const { return duration_; }

  SpinState apply(const SpinState& s) const {
    return SpinState::normalized(matrix_ * s.amplitudes(), s.n_sites());
  }

  /// Later-after-earlier composition: (*this) follows `earlier`.
  Propagator after(const Propagator& earlier) const {
    return {matrix_ * earlier.matrix_, n_sites_, duration_ + earlier.duration_};
  }

 private:
  Matrix matrix_;
  int n_sites_;
  double duration_;
};

/// Eigen-decomposition of a hermitian operator, reusable for many evolution times.
class Spectrum {
 public:
  explicit Spectrum(const ManyBodyOperator& h) : n_sites_(h.n_sites()) {
    if (h.hermiticity_defect() >= kHermitianTolerance) {
      throw ContractError("Spectrum: operator is not hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) throw Error("Spectrum: eigen-decomposition failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  const Eigen::VectorXd& energies() const { return energies_; }
  const Matrix& vectors() const { return vectors_; }
  int n_sites() const { return n_sites_; }

  /// V exp(-i Lambda t) V^dag
  Matrix exp_minus_i(double t) const {
    Vector phases(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * t);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

 private:
  Eigen::VectorXd energies_;
  Matrix vectors_;
  int n_sites_;
};

inline Matrix exp_minus_i(const ManyBodyOperator& h, double t) {
  if (h.is_diagonal()) {
    if (h.hermiticity_defect() >= kHermitianTolerance) throw ContractError("exp_minus_i: non-hermitian input");
    Vector phases(h.dim());
    for (Eigen::Index k = 0; k < h.dim(); ++k) phases(k) = std::polar(1.0, -h.matrix()(k, k).real() * t);
    return phases.asDiagonal();
  }
  return Spectrum(h).exp_minus_i(t);
}

/// U = exp(-i H t) from the spectral decomposition of H.
inline Propagator propagator_exact(const ManyBodyOperator& h, double t) {
  return {exp_minus_i(h, t), h.n_sites(), t};
}

/// First-order Trotter product (exp(-i H1 t/n) exp(-i H2 t/n))^n.
inline Propagator trotter_propagator(const ManyBodyOperator& h1, const ManyBodyOperator& h2, double t,
                                     long slices) {
  if (slices < 1) throw ContractError("trotter_propagator: slice count must be >= 1");
  if (h1.n_sites() != h2.n_sites()) throw ContractError("trotter_propagator: operator size mismatch");
  const double tau = t / static_cast<double>(slices);
  Matrix step = exp_minus_i(h1, tau) * exp_minus_i(h2, tau);
  Matrix result = Matrix::Identity(step.rows(), step.cols());
  for (long e = slices; e > 0; e >>= 1) {
    if (e & 1) result = result * step;
    if (e > 1) step = step * step;
  }
  return {std::move(result), h1.n_sites(), t};
}

enum class IntegratorMethod { midpoint_exponential };

struct IntegratorConfig {
  double dt = 1e-3;
  IntegratorMethod method = IntegratorMethod::midpoint_exponential;
  long max_step_count = 50'000'000;

  void validate() const {
    if (!(dt > 0.0)) throw ContractError("IntegratorConfig: dt must be positive");
    if (max_step_count < 1) throw ContractError("IntegratorConfig: max_step_count must be positive");
  }
};

using Drive = std::function<ManyBodyOperator(double)>;

namespace detail {

inline long step_count(double t0, double t1, const IntegratorConfig& config) {
  config.validate();
  if (!(t1 > t0)) throw ContractError("time-dependent evolution requires t1 > t0");
  const double raw = std::ceil((t1 - t0) / config.dt - 1e-9);
  if (raw > static_cast<double>(config.max_step_count)) {
    throw BudgetError("time-dependent evolution needs " + std::to_string(static_cast<long long>(raw)) +
                      " steps, budget is " + std::to_string(config.max_step_count));
  }
  return std::max(1L, static_cast<long>(raw));
}

}  // namespace detail

/// Evolves a state under H(t) with midpoint-exponential steps; each step is exactly
/// unitary and the global error is O(dt^2). `observer(t, state)` is called after
/// every step when provided.
inline SpinState evolve_timedep(const Drive& h_of_t, const SpinState& state, double t0, double t1,
                                const IntegratorConfig& config,
                                const std::function<void(double, const Vector&)>& observer = {}) {
  const long steps = detail::step_count(t0, t1, config);
  const double h = (t1 - t0) / static_cast<double>(steps);
  Vector psi = state.amplitudes();
  for (long k = 0; k < steps; ++k) {
    const double mid = t0 + (static_cast<double>(k) + 0.5) * h;
    psi = exp_minus_i(h_of_t(mid), h) * psi;
    if (observer) observer(t0 + static_cast<double>(k + 1) * h, psi);
  }
  return SpinState::normalized(std::move(psi), state.n_sites());
}

/// Same stepping scheme applied to the identity: the full propagator over [t0, t1].
inline Propagator timedep_propagator(const Drive& h_of_t, int n_sites, double t0, double t1,
                                     const IntegratorConfig& config) {
  const long steps = detail::step_count(t0, t1, config);
  const double h = (t1 - t0) / static_cast<double>(steps);
  const auto dim = static_cast<Eigen::Index>(dimension(n_sites));
  Matrix u = Matrix::Identity(dim, dim);
  for (long k = 0; k < steps; ++k) {
    const double mid = t0 + (static_cast<double>(k) + 0.5) * h;
    u = exp_minus_i(h_of_t(mid), h) * u;
  }
  return {std::move(u), n_sites, t1 - t0};
}

/// min over phi of ||U - e^{i phi} V||_F, attained at phi = arg tr(V^dag U).
inline double phase_aligned_distance(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw ContractError("phase_aligned_distance: shape mismatch");
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return (u - phase * v).norm();
}

/// Spectral (largest singular value) norm of U - e^{i phi} V at the Frobenius-optimal phase.
inline double phase_aligned_operator_distance(const Matrix& u, const Matrix& v) {
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  Eigen::JacobiSVD<Matrix> svd(u - phase * v);
  return svd.singularValues()(0);
}

}  // namespace spinlab
