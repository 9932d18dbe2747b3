#include "dlambda/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "dlambda/fock.hpp"
#include "dlambda/gates.hpp"
#include "dlambda/table.hpp"

namespace dlambda {

namespace {

using std::numbers::pi;

double max_element_diff(const TransferMatrix& x, const TransferMatrix& y) {
  return (x.matrix() - y.matrix()).cwiseAbs().maxCoeff();
}

CheckResult make(std::string name, double residual, double tolerance, bool lower_bound = false) {
  CheckResult r{std::move(name), residual, tolerance, false, {}};
  r.passed = lower_bound ? residual >= tolerance : residual <= tolerance;
  return r;
}

/// Every two-mode input with at most two photons, plus two superpositions.
std::vector<FockDensityMatrix> few_photon_inputs() {
  std::vector<FockDensityMatrix> inputs;
  for (int n_p = 0; n_p <= 2; ++n_p) {
    for (int n_s = 0; n_p + n_s <= 2; ++n_s) inputs.push_back(FockDensityMatrix::fock_state(n_p, n_s, 2));
  }
  inputs.push_back(FockDensityMatrix::pure(PureTwoModeState::two_color_qubit(0.7, 0.4), 2));
  inputs.push_back(FockDensityMatrix::pure(PureTwoModeState::noon(1.1), 2));
  return inputs;
}

}  // namespace

Eigen::MatrixXcd choi_matrix(const TransferMatrix& tm, int nmax_in) {
  const int din = (nmax_in + 1) * (nmax_in + 1);
  const int nout = 2 * nmax_in;
  const int dout = (nout + 1) * (nout + 1);
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(din * dout, din * dout);
  for (int i = 0; i < din; ++i) {
    for (int j = 0; j < din; ++j) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(din, din);
      unit(i, j) = 1.0;
      const FockDensityMatrix image = apply_channel(tm, FockDensityMatrix(nmax_in, unit), nout);
      choi.block(i * dout, j * dout, dout, dout) = image.matrix();
    }
  }
  return choi;
}

std::vector<MediumParams> integrity_grid() {
  std::vector<MediumParams> grid;
  for (double od : {0.0, 1.0, 10.0, 50.0, 200.0, 1000.0}) {
    for (double delta : {0.0, 1.0, 13.0, od / pi, od / (2.0 * pi)}) {
      for (double loop : {0.0, pi / 3.0, pi}) grid.push_back(MediumParams{.od = od, .delta = delta, .phi_c = loop});
    }
  }
  return grid;
}

std::vector<CheckResult> run_integrity_checks(int quad_points) {
  std::vector<CheckResult> results;
  const std::vector<MediumParams> grid = integrity_grid();

  double expm_diff = 0.0, row_identity = 0.0, passivity = 0.0;
  for (const MediumParams& p : grid) {
    const TransferMatrix tm = transfer_matrix(p);
    expm_diff = std::max(expm_diff, max_element_diff(tm, transfer_matrix_expm(p)));
    const cplx loop = std::polar(1.0, p.loop_phase());
    row_identity = std::max({row_identity, std::abs(tm.a + tm.b * loop - 1.0), std::abs(tm.d + tm.c / loop - 1.0)});
    passivity = std::max(passivity, std::abs(1.0 - std::norm(tm.a) - std::norm(tm.b) - closed_form_loss(p)));
  }
  results.push_back(make("transfer_matrix_expm_agreement", expm_diff, 1e-12));
  results.push_back(make("transfer_matrix_row_identity", row_identity, 1e-14));
  results.push_back(make("transfer_matrix_passivity", passivity, 1e-12));

  double loss_residual = 0.0;
  bool loss_converged = true;
  for (double od : {1.0, 50.0, 200.0, 1000.0}) {
    for (double delta : {0.0, 13.0, od / pi}) {
      const LossIdentityReport r = loss_identity_check(MediumParams{.od = od, .delta = delta}, quad_points);
      loss_residual = std::max(loss_residual, r.max_residual());
      loss_converged = loss_converged && r.converged;
    }
  }
  CheckResult loss = make("loss_identity_quadrature", loss_residual, 1e-9);
  loss.passed = loss.passed && loss_converged;
  if (!loss_converged) loss.detail = "quadrature did not converge";
  results.push_back(loss);

  double channel_diff = 0.0, trace_dev = 0.0, hermitian = 0.0;
  const std::vector<FockDensityMatrix> inputs = few_photon_inputs();
  for (const MediumParams& p : grid) {
    const TransferMatrix tm = transfer_matrix(p);
    for (const FockDensityMatrix& rho : inputs) {
      const FockDensityMatrix eq = apply_channel(tm, rho);
      const FockDensityMatrix dil = apply_channel_dilation(tm, rho);
      channel_diff = std::max(channel_diff, (eq.matrix() - dil.matrix()).cwiseAbs().maxCoeff());
      trace_dev = std::max(trace_dev, std::abs(eq.trace() - 1.0));
      hermitian = std::max(hermitian, eq.hermiticity_error());
    }
  }
  results.push_back(make("channel_vs_dilation", channel_diff, 1e-10));
  results.push_back(make("channel_trace_preservation", trace_dev, 1e-10));
  results.push_back(make("channel_hermiticity", hermitian, 1e-12));

  double choi_min = 0.0;
  for (const MediumParams& p : {MediumParams{.od = 200.0, .delta = 200.0 / pi},
                                MediumParams{.od = 50.0, .delta = 13.0, .phi_c = pi / 3.0},
                                MediumParams{.od = 10.0, .delta = 1.0}}) {
    const Eigen::MatrixXcd choi = choi_matrix(transfer_matrix(p), 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
    choi_min = std::min(choi_min, solver.eigenvalues().minCoeff());
  }
  results.push_back(make("choi_min_eigenvalue", choi_min, -1e-10, true));
  return results;
}

}  // namespace dlambda
