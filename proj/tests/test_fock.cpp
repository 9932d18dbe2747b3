#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dlambda/checks.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/fock.hpp"
#include "properties.hpp"

namespace {

using namespace dlambda;
using std::numbers::pi;

// tests/oracles/closed_forms.py
constexpr double kDipP20 = 0.476220291427536;
constexpr double kDipP11 = 0.000579474251742291;
constexpr double kDipLoss = 0.0469799428931856;
constexpr double kTwoPhotonP20 = 0.238294688261903;
constexpr double kTwoPhotonP11 = 0.476220291427536;
constexpr double kTwoPhotonP02 = 0.237925746080913;
constexpr double kNoonLinear500 = 0.980550594869901;
constexpr double kNoonSqrt500 = 0.990227547016291;

TransferMatrix balanced(double od = 200.0) { return transfer_matrix(MediumParams{.od = od, .delta = od / pi}); }

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(FockState, IndexAndOrientation) {
  const PureTwoModeState psi(std::map<FockLabel, cplx>{{{1, 0}, 1.0 / std::sqrt(2.0)}, {{0, 1}, cplx(0.0, 1.0 / std::sqrt(2.0))}});
  const FockDensityMatrix rho = FockDensityMatrix::pure(psi, 2);
  EXPECT_EQ(rho.index(1, 2), 5);
  EXPECT_EQ(rho.label(5), FockLabel(1, 2));
  // <10|rho|01> = psi_10 conj(psi_01)
  EXPECT_LT(std::abs(rho.element(1, 0, 0, 1) - cplx(0.0, -0.5)), 1e-15);
  EXPECT_LT(std::abs(rho.element(0, 1, 1, 0) - cplx(0.0, 0.5)), 1e-15);
  EXPECT_NEAR(rho.probability(1, 0), 0.5, 1e-15);
}

TEST(FockState, Validation) {
  EXPECT_THROW(PureTwoModeState(std::map<FockLabel, cplx>{{{1, 0}, 0.5}}), DomainError);
  EXPECT_THROW(FockDensityMatrix::fock_state(3, 0, 2), CapacityError);
  EXPECT_THROW(FockDensityMatrix(2, Eigen::MatrixXcd::Identity(4, 4)), DomainError);
  EXPECT_THROW(PureTwoModeState::two_color_qubit(-1.0, 0.0), DomainError);
}

TEST(FockState, CoherentTruncation) {
  const FockDensityMatrix rho = FockDensityMatrix::coherent({0.3, cplx(0.0, 0.2)}, 10);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  EXPECT_NEAR(rho.probability(0, 0), std::exp(-0.09 - 0.04), 1e-15);
  EXPECT_NEAR(rho.min_eigenvalue(), 0.0, 1e-12);
}

TEST(Channel, IdentityMediumIsIdentityMap) {
  std::mt19937_64 rng(3);
  const FockDensityMatrix rho = props::random_density(3, 3, rng);
  const FockDensityMatrix out = apply_channel(TransferMatrix::identity(), rho);
  EXPECT_LT(max_abs(out.matrix() - rho.matrix()), 1e-15);
  const FockDensityMatrix dil = apply_channel_dilation(TransferMatrix::identity(), rho);
  EXPECT_LT(max_abs(dil.matrix() - rho.matrix()), 1e-14);
}

TEST(Channel, SinglePhotonSplitter) {
  const TransferMatrix tm = transfer_matrix(MediumParams{.od = 50.0, .delta = 13.0, .phi_c = 0.4});
  const FockDensityMatrix out = apply_channel(tm, FockDensityMatrix::fock_state(1, 0, 1));
  EXPECT_NEAR(out.probability(1, 0), std::norm(tm.a), 1e-15);
  EXPECT_NEAR(out.probability(0, 1), std::norm(tm.c), 1e-15);
  EXPECT_NEAR(out.probability(0, 0), 1.0 - std::norm(tm.a) - std::norm(tm.c), 1e-15);
  // Coherence between the two colors: <10|rho|01> = A* C.
  EXPECT_LT(std::abs(out.element(1, 0, 0, 1) - std::conj(tm.a) * tm.c), 1e-15);
}

TEST(Channel, HomDip) {
  const FockDensityMatrix out = apply_channel(balanced(), FockDensityMatrix::fock_state(1, 1));
  EXPECT_NEAR(out.probability(2, 0), kDipP20, 1e-12);
  EXPECT_NEAR(out.probability(0, 2), kDipP20, 1e-12);
  EXPECT_NEAR(out.probability(1, 1), kDipP11, 1e-12);
  EXPECT_NEAR(out.weight_above(1), 1.0 - kDipLoss, 1e-12);
  EXPECT_NEAR(out.trace(), 1.0, 1e-12);
  const FockDensityMatrix dil = apply_channel_dilation(balanced(), FockDensityMatrix::fock_state(1, 1));
  EXPECT_LT(max_abs(out.matrix() - dil.matrix()), 1e-10);
}

TEST(Channel, TwoPhotonsInOneColor) {
  const FockDensityMatrix input = FockDensityMatrix::fock_state(2, 0, 2);
  const FockDensityMatrix out = apply_channel(balanced(), input);
  EXPECT_NEAR(out.probability(2, 0), kTwoPhotonP20, 1e-12);
  EXPECT_NEAR(out.probability(1, 1), kTwoPhotonP11, 1e-12);
  EXPECT_NEAR(out.probability(0, 2), kTwoPhotonP02, 1e-12);
  const FockDensityMatrix dil = apply_channel_dilation(balanced(), input);
  EXPECT_LT(max_abs(out.matrix() - dil.matrix()), 1e-10);
}

TEST(Channel, MatchesDilationOnRandomInputsOverGrid) {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (const MediumParams& p : integrity_grid()) {
    const TransferMatrix tm = transfer_matrix(p);
    const FockDensityMatrix rho = props::random_density(2, 2, rng);
    worst = std::max(worst, max_abs(apply_channel(tm, rho).matrix() - apply_channel_dilation(tm, rho).matrix()));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Channel, MatchesDilationOnCoherentInputs) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> phase(-pi, pi), mag(0.0, 0.5);
  for (const MediumParams& p : {MediumParams{.od = 50.0, .delta = 13.0}, MediumParams{.od = 200.0, .delta = 200.0 / pi, .phi_c = 1.0},
                                MediumParams{.od = 1000.0, .delta = 1000.0 / (2.0 * pi)}}) {
    const TransferMatrix tm = transfer_matrix(p);
    const FockDensityMatrix rho = props::truncate_total(
        FockDensityMatrix::coherent({std::polar(mag(rng), phase(rng)), std::polar(mag(rng), phase(rng))}, 4), 4);
    EXPECT_LE(max_abs(apply_channel(tm, rho).matrix() - apply_channel_dilation(tm, rho).matrix()), 1e-10);
  }
}

TEST(Channel, TraceHermiticityPositivity) {
  std::mt19937_64 rng(5);
  for (const MediumParams& p : integrity_grid()) {
    const FockDensityMatrix out = apply_channel(transfer_matrix(p), props::random_density(2, 2, rng));
    EXPECT_NEAR(out.trace(), 1.0, 1e-10);
    EXPECT_LE(out.hermiticity_error(), 1e-12);
    EXPECT_GE(out.min_eigenvalue(), -1e-10);
  }
}

TEST(Channel, ChoiMatrixIsPositive) {
  for (const MediumParams& p : {MediumParams{.od = 200.0, .delta = 200.0 / pi}, MediumParams{.od = 10.0, .delta = 1.0, .phi_d = 2.0},
                                MediumParams{.od = 1000.0, .delta = 0.0}}) {
    const Eigen::MatrixXcd choi = choi_matrix(transfer_matrix(p), 2);
    EXPECT_LT(max_abs(choi - choi.adjoint()), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(choi, Eigen::EigenvaluesOnly);
    EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(Channel, Linearity) { EXPECT_LE(props::linearity_residual(41), 1e-12); }

TEST(Channel, TwoPhotonDiagonalIgnoresLoopPhase) {
  EXPECT_LE(props::two_photon_diagonal_phase_residual(43), 1e-12);
}

TEST(Channel, CoherentStatesStayCoherent) { EXPECT_LE(props::coherent_consistency_residual(47), 1e-6); }

TEST(Channel, CapacityIsChecked) {
  EXPECT_THROW(apply_channel(balanced(), FockDensityMatrix::fock_state(2, 0, 2), 1), CapacityError);
  EXPECT_THROW(apply_channel_dilation(balanced(), FockDensityMatrix::fock_state(1, 1, 2), 1), CapacityError);
  // A larger output cutoff only pads with zeros.
  const FockDensityMatrix wide = apply_channel(balanced(), FockDensityMatrix::fock_state(1, 1, 2), 4);
  EXPECT_NEAR(wide.probability(2, 0), kDipP20, 1e-12);
  EXPECT_EQ(wide.weight_above(2), 0.0);
  // Operators that fit a smaller cutoff are accepted.
  const FockDensityMatrix narrow = apply_channel(balanced(), FockDensityMatrix::fock_state(1, 0, 3), 1);
  EXPECT_NEAR(narrow.trace(), 1.0, 1e-12);
}

TEST(Dilation, IdentityAndUnitarity) {
  EXPECT_LT((dilation_unitary(TransferMatrix::identity()) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  for (const MediumParams& p : integrity_grid()) {
    const TransferMatrix tm = transfer_matrix(p);
    const Eigen::Matrix4cd u = dilation_unitary(tm);
    EXPECT_LT((u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(((u.topLeftCorner<2, 2>() - tm.annihilation_map()).cwiseAbs().maxCoeff()), 1e-15);
  }
}

TEST(Dilation, LosslessLimitDecouplesLossModes) {
  // The coupling block has spectral norm sqrt(1 - exp(-2r)), about pi / sqrt(od)
  // along delta = od / pi, so it vanishes slowly.
  double previous = 1.0;
  for (double od : {1e2, 1e4, 1e6, 1e8}) {
    const MediumParams p{.od = od, .delta = od / pi};
    const Eigen::Matrix4cd u = dilation_unitary(transfer_matrix(p));
    const double expected = std::sqrt(-std::expm1(-2.0 * absorption_exponent(p)));
    const Eigen::Matrix2cd upper = u.topRightCorner<2, 2>(), lower = u.bottomLeftCorner<2, 2>();
    const double norm_upper = Eigen::JacobiSVD<Eigen::Matrix2cd>(upper).singularValues()(0);
    const double norm_lower = Eigen::JacobiSVD<Eigen::Matrix2cd>(lower).singularValues()(0);
    EXPECT_NEAR(norm_upper, expected, 1e-10) << "od=" << od;
    EXPECT_NEAR(norm_lower, expected, 1e-10) << "od=" << od;
    EXPECT_LT(norm_upper, previous);
    previous = norm_upper;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Dilation, RejectsActiveMap) {
  TransferMatrix gain;
  gain.a = 1.2;
  EXPECT_THROW(dilation_unitary(gain), DomainError);
}

TEST(CoherentOutput, ColumnReadOff) {
  const TransferMatrix tm = balanced(50.0);
  const CoherentPair out = coherent_output(tm, {1.0, 0.0});
  EXPECT_EQ(out.beta_p, std::conj(tm.a));
  EXPECT_EQ(out.beta_s, std::conj(tm.c));
  const CoherentPair same = coherent_output(TransferMatrix::identity(), {0.2, cplx(0.1, 0.3)});
  EXPECT_EQ(same.beta_s, cplx(0.1, 0.3));
}

TEST(CoherentOutput, PhaseContrastValue) {
  const TransferMatrix tm = transfer_matrix(MediumParams{.od = 50.0, .delta = 13.0});
  const CoherentPair out = coherent_output(tm, {cplx(0.0, 1.0), 1.0});
  EXPECT_NEAR(std::norm(out.beta_p), 1.6861418009172, 1e-12);
}

TEST(Fidelity, Conventions) {
  const PureTwoModeState noon = PureTwoModeState::noon(0.3);
  EXPECT_NEAR(uhlmann_fidelity(FockDensityMatrix::pure(noon), noon), 1.0, 1e-15);
  EXPECT_EQ(uhlmann_fidelity(FockDensityMatrix::fock_state(0, 0), noon), 0.0);

  const TransferMatrix tm = balanced(500.0);
  const FockDensityMatrix out = apply_channel(tm, FockDensityMatrix::fock_state(1, 1));
  const PureTwoModeState target = PureTwoModeState::noon(-2.0 * tm.loop_phase());
  EXPECT_NEAR(overlap_fidelity(out, target), kNoonLinear500, 1e-12);
  EXPECT_NEAR(uhlmann_fidelity(out, target), kNoonSqrt500, 1e-12);
}

TEST(ModeProbabilities, Diagonals) {
  const auto single = mode_probabilities(FockDensityMatrix::fock_state(1, 0));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single.at({1, 0}), 1.0);
  const auto noon = mode_probabilities(FockDensityMatrix::pure(PureTwoModeState::noon(1.0)));
  EXPECT_NEAR(noon.at({2, 0}), 0.5, 1e-15);
  EXPECT_NEAR(noon.at({0, 2}), 0.5, 1e-15);
  const FockDensityMatrix out = apply_channel(balanced(), FockDensityMatrix::fock_state(1, 1));
  double sum = 0.0;
  for (const auto& [label, p] : mode_probabilities(out)) sum += p;
  EXPECT_NEAR(sum, out.trace(), 1e-15);
  EXPECT_NEAR(mode_probabilities(out).at({1, 1}), kDipP11, 1e-12);
}

}  // namespace
