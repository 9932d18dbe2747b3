#include "dlambda/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "dlambda/errors.hpp"

namespace dlambda {

namespace {

using std::numbers::pi;

double wrap_phase(double phase) {
  double w = std::remainder(phase, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

/// B'* and C'*: the mode-converting elements with the loop phase removed.
std::pair<cplx, cplx> reduced_conversion(const TransferMatrix& tm) {
  const cplx loop = std::polar(1.0, tm.loop_phase());
  return {std::conj(tm.b) / loop, std::conj(tm.c) * loop};
}

/// Largest detuning where the lossy eigenmode phase reaches pi; below it the
/// loss dominates and |A|, |B| both sit near 1/2.
double swap_branch_floor(double od, double gamma) {
  const double half = od / 2.0;
  const double disc = half * half - 4.0 * pi * pi;
  if (disc < 0.0) return gamma;
  return gamma * (half + std::sqrt(disc)) / (2.0 * pi);
}

}  // namespace

std::string fock_label(const FockLabel& label) {
  return std::to_string(label.first) + std::to_string(label.second);
}

CoherentResponse coherent_response(const MediumParams& params, double u_beta, double phi_r) {
  if (!(u_beta > 0.0) || !std::isfinite(u_beta)) throw DomainError("u_beta must be positive");
  const TransferMatrix tm = transfer_matrix(params);
  const auto [b_red, c_red] = reduced_conversion(tm);
  const cplx probe = std::conj(tm.a) + u_beta * b_red * std::polar(1.0, -phi_r);
  const cplx signal = c_red * std::polar(1.0, phi_r) / u_beta + std::conj(tm.d);
  return {std::norm(probe), std::norm(signal), wrap_phase(std::arg(probe)), wrap_phase(std::arg(signal))};
}

QubitReport qubit_probabilities(const MediumParams& params, double u, double phi_u, Branch target) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("u must be non-negative");
  const TransferMatrix tm = transfer_matrix(params);
  const auto [b_red, c_red] = reduced_conversion(tm);
  const double phi_r = phi_u - params.loop_phase();
  const double norm = 1.0 + u * u;

  QubitReport r;
  r.p_1p0s = std::norm(std::conj(tm.a) + u * b_red * std::polar(1.0, -phi_r)) / norm;
  r.p_0p1s = std::norm(c_red * std::polar(1.0, phi_r) + u * std::conj(tm.d)) / norm;
  r.p_loss = 1.0 - r.p_1p0s - r.p_0p1s;
  r.target = target;
  r.fidelity_linear = target == Branch::probe ? r.p_1p0s : r.p_0p1s;
  r.fidelity_sqrt = std::sqrt(std::max(0.0, r.fidelity_linear));
  return r;
}

std::optional<double> hadamard_detuning(double od, double u, Branch branch, double gamma) {
  if (!(od > 0.0) || !std::isfinite(od)) throw DomainError("od must be positive");
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("u must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive");

  auto f = [&](double delta) {
    const TransferMatrix tm = transfer_matrix(MediumParams{.od = od, .delta = delta, .gamma = gamma});
    return branch == Branch::probe ? u * std::abs(tm.a) - std::abs(tm.b) : u * std::abs(tm.c) - std::abs(tm.d);
  };

  const double lo = swap_branch_floor(od, gamma);
  const double hi = od * gamma;
  if (!(lo < hi)) return std::nullopt;

  // Locate the first sign change on a coarse grid, then refine it.
  constexpr int kScan = 512;
  double left = lo;
  double f_left = f(left);
  for (int i = 1; i <= kScan; ++i) {
    const double right = lo + (hi - lo) * i / kScan;
    const double f_right = f(right);
    if (f_left == 0.0) return left;
    if ((f_left < 0.0) != (f_right < 0.0)) {
      std::uintmax_t max_iter = 200;
      auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-10; };
      const auto [a, b] = boost::math::tools::toms748_solve(f, left, right, f_left, f_right, tol, max_iter);
      return 0.5 * (a + b);
    }
    left = right;
    f_left = f_right;
  }
  if (f_left == 0.0) return left;
  return std::nullopt;
}

HomReport hom_probabilities(const MediumParams& params) {
  const TransferMatrix tm = transfer_matrix(params);
  const cplx a = std::conj(tm.a), b = std::conj(tm.b), c = std::conj(tm.c), d = std::conj(tm.d);

  HomReport r;
  r.p_2p0s = 2.0 * std::norm(a * b);
  r.p_0p2s = 2.0 * std::norm(c * d);
  r.p_1p1s = std::norm(a * d + b * c);
  r.loss_sector = 1.0 - r.p_2p0s - r.p_0p2s - r.p_1p1s;
  r.noon_phase = wrap_phase(-2.0 * params.loop_phase());

  const FockDensityMatrix out = apply_channel(tm, FockDensityMatrix::fock_state(1, 1));
  const PureTwoModeState noon = PureTwoModeState::noon(-2.0 * params.loop_phase());
  r.noon_fidelity_linear = overlap_fidelity(out, noon);
  r.noon_fidelity = std::sqrt(r.noon_fidelity_linear);
  return r;
}

HomReport noon_report(const MediumParams& params) { return hom_probabilities(params); }

SwapReport swap_report(const MediumParams& params) {
  const TransferMatrix tm = transfer_matrix(params);
  const cplx a = std::conj(tm.a), b = std::conj(tm.b), c = std::conj(tm.c), d = std::conj(tm.d);

  // Swapped targets carry the deterministic conversion phases.
  const std::array<PureTwoModeState, 4> targets{
      PureTwoModeState::fock(0, 0),
      PureTwoModeState::fock(0, 1, std::polar(1.0, std::arg(c))),
      PureTwoModeState::fock(1, 0, std::polar(1.0, std::arg(b))),
      PureTwoModeState::fock(1, 1, std::polar(1.0, std::arg(a * d + b * c))),
  };

  SwapReport r;
  for (std::size_t i = 0; i < kSwapInputs.size(); ++i) {
    const auto [n_p, n_s] = kSwapInputs[i];
    const FockDensityMatrix out = apply_channel(tm, FockDensityMatrix::fock_state(n_p, n_s));
    r.per_input_fidelity_linear[i] = overlap_fidelity(out, targets[i]);
    r.per_input_fidelity[i] = std::sqrt(r.per_input_fidelity_linear[i]);
    for (std::size_t o = 0; o < kSwapOutputs.size(); ++o) {
      r.truth_table[i][o] = std::max(0.0, out.probability(kSwapOutputs[o].first, kSwapOutputs[o].second));
    }
  }

  double sum = 0.0, sum_linear = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    sum += r.per_input_fidelity[i];
    sum_linear += r.per_input_fidelity_linear[i];
  }
  r.mean_fidelity = sum / 4.0;
  r.mean_fidelity_linear = sum_linear / 4.0;
  double var = 0.0;
  for (double f : r.per_input_fidelity) var += (f - r.mean_fidelity) * (f - r.mean_fidelity);
  r.std_fidelity = std::sqrt(var / 4.0);

  // Success: probability of the exactly swapped computational outcome.
  constexpr std::array<std::size_t, 4> kSwappedOutput{0, 2, 1, 3};
  double success = 0.0;
  for (std::size_t i = 0; i < 4; ++i) success += r.truth_table[i][kSwappedOutput[i]];
  r.mean_success = success / 4.0;
  return r;
}

}  // namespace dlambda
