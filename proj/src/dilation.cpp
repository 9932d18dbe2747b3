// Passive-network dilation of the lossy mode map, used as an independent
// reference for the channel.

#include <array>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/SVD>

#include "dlambda/errors.hpp"
#include "dlambda/fock.hpp"
#include "fock_internal.hpp"

namespace dlambda {

namespace {

constexpr double kContractionTolerance = 1e-12;

using Occupation = std::array<int, 4>;

/// U |n_p, n_s, 0, 0> expanded on the four-mode Fock basis, where each input
/// creation operator a+_j maps to sum_i U(i, j) a+_i.
std::map<Occupation, cplx> evolve_basis_state(const Eigen::Matrix4cd& u, int n_p, int n_s) {
  std::map<Occupation, cplx> poly{{Occupation{0, 0, 0, 0}, cplx(1.0, 0.0)}};
  auto multiply = [&](int mode) {
    std::map<Occupation, cplx> next;
    for (const auto& [occ, coef] : poly) {
      for (int r = 0; r < 4; ++r) {
        if (u(r, mode) == cplx(0.0, 0.0)) continue;
        Occupation o = occ;
        ++o[r];
        next[o] += coef * u(r, mode);
      }
    }
    poly = std::move(next);
  };
  for (int i = 0; i < n_p; ++i) multiply(0);
  for (int i = 0; i < n_s; ++i) multiply(1);

  // Monomial coefficients to normalized Fock amplitudes.
  const double input_norm = std::sqrt(detail::factorial(n_p) * detail::factorial(n_s));
  for (auto& [occ, coef] : poly) {
    double f = 1.0;
    for (int n : occ) f *= detail::factorial(n);
    coef *= std::sqrt(f) / input_norm;
  }
  return poly;
}

}  // namespace

Eigen::Matrix4cd dilation_unitary(const TransferMatrix& tm) {
  const Eigen::Matrix2cd s = tm.annihilation_map();
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector2d sigma = svd.singularValues();
  if (sigma.maxCoeff() > 1.0 + kContractionTolerance) {
    throw DomainError("transfer matrix is not passive (largest singular value " + std::to_string(sigma.maxCoeff()) +
                      ")");
  }
  sigma = sigma.cwiseMin(1.0);
  const Eigen::Vector2d leak = (Eigen::Vector2d::Ones() - sigma.cwiseAbs2()).cwiseSqrt();
  const Eigen::Matrix2cd w = svd.matrixU();
  const Eigen::Matrix2cd v = svd.matrixV();

  // diag(W, 1) [[Sigma, C], [-C, Sigma]] diag(V^dagger, 1)
  Eigen::Matrix4cd u;
  u.topLeftCorner<2, 2>() = s;
  u.topRightCorner<2, 2>() = w * leak.cast<cplx>().asDiagonal();
  u.bottomLeftCorner<2, 2>() = -(leak.cast<cplx>().asDiagonal() * v.adjoint());
  u.bottomRightCorner<2, 2>() = sigma.cast<cplx>().asDiagonal();
  return u;
}

FockDensityMatrix apply_channel_dilation(const TransferMatrix& tm, const FockDensityMatrix& rho_in,
                                         std::optional<int> nmax_out) {
  const int nin = rho_in.nmax();
  const int nout = detail::resolve_output_cutoff(rho_in, nmax_out);
  const int total = detail::support_total(rho_in.matrix(), nin);
  FockDensityMatrix out(nout);
  if (total < 0) return out;

  const Eigen::Matrix4cd u = dilation_unitary(tm);

  // Kraus operators <loss occupation| U |0_loss>, one per loss occupation.
  std::map<std::pair<int, int>, Eigen::MatrixXcd> kraus;
  for (int n_p = 0; n_p <= nin; ++n_p) {
    for (int n_s = 0; n_s <= nin && n_p + n_s <= total; ++n_s) {
      const int col = rho_in.index(n_p, n_s);
      for (const auto& [occ, amp] : evolve_basis_state(u, n_p, n_s)) {
        if (occ[0] > nout || occ[1] > nout) continue;
        auto [it, inserted] = kraus.try_emplace({occ[2], occ[3]});
        if (inserted) it->second = Eigen::MatrixXcd::Zero(out.dim(), rho_in.dim());
        it->second(out.index(occ[0], occ[1]), col) += amp;
      }
    }
  }

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(out.dim(), out.dim());
  for (const auto& [loss, k] : kraus) result += k * rho_in.matrix() * k.adjoint();
  return FockDensityMatrix(nout, std::move(result));
}

}  // namespace dlambda
