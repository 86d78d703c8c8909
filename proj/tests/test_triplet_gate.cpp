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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracle.hpp"
#include "spinlab/gate_synth.hpp"
#include "spinlab/triplet_gate.hpp"

using namespace spinlab;

namespace {

Matrix4 zz() { return gates::kron(gates::z_rotation(std::numbers::pi / 2), gates::z_rotation(std::numbers::pi / 2)); }

}  // namespace

TEST(TripletHamiltonian, AllUpDiagonalElement) {
  const TripletParams p{0.4, -1.1, 1.0, 0.6};
  const auto h = triplet_hamiltonian(p).matrix();
  const auto k = static_cast<Eigen::Index>(basis_index("uuu"));
  EXPECT_NEAR(h(k, k).real(), 2 * 0.4 - 1.1 + 2 * 0.6, 1e-14);
}

TEST(TripletHamiltonian, MatchesOracle) {
  const TripletParams p{0.3, 0.9, 1.2, 0.5};
  const auto ref = oracle::xxz(3, {{0, 1}, {1, 2}}, 1.2, 0.5, {0.3, 0.9, 0.3});
  EXPECT_LT((triplet_hamiltonian(p).matrix() - ref).norm(), 1e-13);
}

TEST(TripletBlocks, UpBlockForm) {
  const TripletParams p{0.7, 0.2, 1.3, 0.4};
  Eigen::Matrix3cd expected;
  expected << 0, 1, 0, 1, p.p(), 1, 0, 1, 0;
  expected = p.b * Eigen::Matrix3cd::Identity() + 2.0 * p.j_xy * expected;
  EXPECT_LT((block_hamiltonian(p, Block::up) - expected).norm(), 1e-13);
}

TEST(TripletBlocks, BlocksAreClosedUnderH) {
  const TripletParams p{0.7, 0.2, 1.3, 0.4};
  const auto h = triplet_hamiltonian(p).matrix();
  for (Block which : {Block::up, Block::down}) {
    const auto in = block_states(which);
    for (std::size_t c : in)
      for (Eigen::Index r = 0; r < 8; ++r) {
        const bool inside = std::find(in.begin(), in.end(), static_cast<std::size_t>(r)) != in.end();
        if (!inside) {
          EXPECT_EQ(h(r, static_cast<Eigen::Index>(c)), Complex{});
        }
      }
  }
}

TEST(TripletBlocks, ClosedFormEnergiesMatchDiagonalisation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const TripletParams p{u(rng), u(rng), 0.2 + std::abs(u(rng)), std::abs(u(rng))};
    for (Block which : {Block::up, Block::down}) {
      const auto es = subspace_eigensystem(p, which);
      const auto cf = closed_form_energies(p, which);
      for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(es.energies[k], cf[k], 1e-11);
      const Eigen::Matrix3cd h = block_hamiltonian(p, which);
      for (int k = 0; k < 3; ++k)
        EXPECT_LT((h * es.vectors.col(k) - es.energies[static_cast<std::size_t>(k)] * es.vectors.col(k)).norm(), 1e-11);
      EXPECT_LT((es.vectors.adjoint() * es.vectors - Eigen::Matrix3cd::Identity()).norm(), 1e-11);
    }
  }
}

TEST(TripletBlocks, AntisymmetricStateIsDark) {
  const auto es = subspace_eigensystem({0.5, 0.5, 1.0, 0.7}, Block::up);
  EXPECT_NEAR(std::abs(es.vectors(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(es.vectors(0, 0)), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(RevivalTime, Examples) {
  EXPECT_NEAR(revival_time(1.0, 0.0), std::numbers::pi / std::sqrt(8.0), 1e-15);
  EXPECT_NEAR(revival_time(1.0, 0.7), 1.0781918, 1e-7);
  EXPECT_NEAR(revival_time(1.0, 1.0), std::numbers::pi / 3.0, 1e-15);
  EXPECT_THROW(revival_time(0.0, 1.0), ContractError);
}

TEST(PrimitivePhase, SixthOfPiAtUnitAnisotropy) {
  EXPECT_NEAR(primitive_phase(1.0, 1.0), std::numbers::pi / 6, 1e-15);
  EXPECT_DOUBLE_EQ(primitive_phase(1.0, 0.0), 0.0);
  const auto g = primitive_gate_analytic(1.0, 1.0);
  EXPECT_NEAR(std::abs(g(1, 1)), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(g(1, 2)), std::sqrt(3.0) / 2, 1e-14);
  EXPECT_NEAR(std::abs(g(3, 3)), 1.0, 1e-14);
}

TEST(PrimitiveGateAnalytic, IsotropicLimitIsSignedSwap) {
  const auto g = primitive_gate_analytic(1.0, 0.0).matrix();
  Matrix4 expected = Matrix4::Zero();
  expected(0, 0) = 1.0;
  expected(1, 2) = expected(2, 1) = -1.0;
  expected(3, 3) = -1.0;
  EXPECT_LT((g - expected).norm(), 1e-14);
  EXPECT_THROW(primitive_gate_analytic(1.0, -0.1), ContractError);
}

TEST(BarrierRevival, AllInputsReviveAtRevivalTime) {
  for (double jz : {0.0, 0.3, 0.7, 1.0}) {
    const double t_r = revival_time(1.0, jz);
    const auto u = oracle::expm_minus_i(oracle::xxz(3, {{0, 1}, {1, 2}}, 1.0, jz, {0.25, 0.25, 0.25}), t_r);
    for (const char* in : {"dud", "duu", "uud", "uuu"}) EXPECT_NEAR(oracle::prob_up(u, oracle::index(in), 1, 3), 1.0, 1e-12) << in;
  }
}

TEST(BarrierRevival, RevivalTimeIsTheFirst) {
  for (double jz : {0.0, 0.7, 1.0}) {
    const double t_r = revival_time(1.0, jz);
    const Spectrum sp(triplet_hamiltonian({0.0, 0.0, 1.0, jz}));
    for (double f = 0.05; f <= 0.95 + 1e-12; f += 0.01) {
      double worst = 1.0;
      for (const char* in : {"dud", "duu", "uud", "uuu"}) {
        const SpinState s(sp.exp_minus_i(f * t_r) * SpinState::product(in).amplitudes(), 3);
        worst = std::min(worst, s.probability_up(1));
      }
      EXPECT_LT(worst, 1.0 - 1e-4) << "jz " << jz << " fraction " << f;
    }
  }
}

TEST(PrimitiveGateNumeric, ClosedAndMatchesAnalyticInvariants) {
  for (double jz : {0.0, 0.3, 0.7, 1.0}) {
    const auto g = primitive_gate_numeric(1.0, jz);
    for (double p : g.barrier_up_probability) EXPECT_NEAR(p, 1.0, 1e-10);
    EXPECT_LT(unitarity_defect(g.raw.matrix()), 1e-10);
    const auto analytic = primitive_gate_analytic(1.0, jz);
    EXPECT_LT(invariant_distance(makhlin(g.passive), makhlin(analytic)), 1e-10);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(g.passive(r, c)), std::abs(analytic(r, c)), 1e-10);
  }
}

// The simulated passive-frame gate and the closed form differ by a diagonal local
// frame change diag(e^{-i t}, 1, 1, e^{i t}) up to global phase (see README).
TEST(PrimitiveGateNumeric, PassiveFrameDiffersFromClosedFormByLocalZZ) {
  for (double jz : {0.0, 0.3, 0.7, 1.0}) {
    const auto g = primitive_gate_numeric(1.0, jz, {0.4});
    const Matrix4 d = primitive_gate_analytic(1.0, jz).matrix() * g.passive.matrix().adjoint();
    EXPECT_LT((d - Matrix4(d.diagonal().asDiagonal())).norm(), 1e-10) << jz;
    EXPECT_LT(std::abs(d(1, 1) - d(2, 2)), 1e-10);
    EXPECT_LT(std::abs(d(0, 0) * d(3, 3) - d(1, 1) * d(2, 2)), 1e-10);
  }
}

TEST(PrimitiveGateNumeric, IsotropicLimitDiffersBySigmaZZ) {
  const auto g = primitive_gate_numeric(1.0, 0.0);
  const auto analytic = primitive_gate_analytic(1.0, 0.0);
  EXPECT_NEAR(phase_aligned_distance(g.passive, analytic), 2.0 * std::sqrt(2.0), 1e-8);
  EXPECT_LT(phase_aligned_distance(Matrix(zz() * g.passive.matrix()), Matrix(analytic.matrix())), 1e-8);
}

TEST(PrimitiveGateNumeric, OuterShiftDiffersByLocalGatesOnly) {
  NumericGateOptions outer;
  outer.shift = ResonanceShift::outer;
  outer.barrier_zeeman = 2.5;
  const auto a = primitive_gate_numeric(1.0, 0.7);
  const auto b = primitive_gate_numeric(1.0, 0.7, outer);
  EXPECT_LT(invariant_distance(makhlin(a.raw), makhlin(b.raw)), 1e-10);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(a.raw(r, c)), std::abs(b.raw(r, c)), 1e-10);
}

TEST(PrimitiveGateNumeric, ProtocolErrorWhenRevivalCheckCannotPass) {
  NumericGateOptions strict;
  strict.revival_tolerance = -1.0;
  EXPECT_THROW(primitive_gate_numeric(1.0, 0.7, strict), ProtocolError);
}

TEST(DressedGate, CornerEntriesEqual) {
  for (double jz : {0.0, 0.3, 0.7, 1.0}) {
    const auto g = dressed_gate(1.0, jz);
    EXPECT_LT(std::abs(g(0, 0) - 1.0), 1e-12);
    EXPECT_LT(std::abs(g(3, 3) - g(0, 0)), 1e-12) << jz;
    EXPECT_LT(invariant_distance(makhlin(g), makhlin(primitive_gate_analytic(1.0, jz))), 1e-12);
  }
}

TEST(QubitBlock, ToPassiveFrameRemovesIdlePhases) {
  const double a = 0.9, jz = 0.4, t = 1.3;
  Matrix4 idle = Matrix4::Zero();
  const std::array<int, 4> m{-2, 0, 0, 2};
  for (int k = 0; k < 4; ++k) idle(k, k) = std::polar(1.0, -(a + jz) * m[static_cast<std::size_t>(k)] * t);
  EXPECT_LT((to_passive_frame(idle, a, jz, t) - Matrix4::Identity()).norm(), 1e-13);
}

TEST(FrozenNeighbour, GateDeviationScalesAsInverseDetuning) {
  const auto r100 = frozen_neighbor_check(1.0, 0.0, 100.0);
  const auto r200 = frozen_neighbor_check(1.0, 0.0, 200.0);
  EXPECT_LT(r100.distance, 0.05);
  EXPECT_NEAR(r100.distance / r200.distance, 2.0, 0.1);
  EXPECT_NEAR(r100.scaling_constant, r200.scaling_constant, 0.1 * r100.scaling_constant);
  EXPECT_GT(r100.min_barrier_revival, 0.99);
  EXPECT_LT(unitarity_defect(r100.gate.matrix()), 1e-10);
}

// Two-level Rabi bound with the un-halved flip-flop element 2J.
TEST(FrozenNeighbour, EdgeSpinsStayFrozen) {
  for (double big_delta : {100.0, 200.0, 400.0}) {
    const auto r = frozen_neighbor_check(1.0, 0.7, big_delta);
    const double d2 = 1.0 / (big_delta * big_delta);
    EXPECT_LT(1.0 - r.min_edge_sz, 32.0 * d2) << big_delta;
  }
  EXPECT_THROW(frozen_neighbor_check(1.0, 0.0, 0.0), ContractError);
}
