#include "dlambda/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "dlambda/errors.hpp"
#include "fock_internal.hpp"

namespace dlambda {

namespace {

constexpr double kNormTolerance = 1e-12;

using SparseOp = Eigen::SparseMatrix<cplx>;

/// a_p or a_s on the truncated two-mode space. Annihilators are exact on a
/// truncated space, so no headroom is needed.
SparseOp annihilator(int nmax, bool probe) {
  const int dim = (nmax + 1) * (nmax + 1);
  std::vector<Eigen::Triplet<cplx>> entries;
  for (int np = 0; np <= nmax; ++np) {
    for (int ns = 0; ns <= nmax; ++ns) {
      const int n = probe ? np : ns;
      if (n == 0) continue;
      const int from = np * (nmax + 1) + ns;
      const int to = probe ? (np - 1) * (nmax + 1) + ns : np * (nmax + 1) + ns - 1;
      entries.emplace_back(to, from, std::sqrt(static_cast<double>(n)));
    }
  }
  SparseOp op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

/// Triangular index of (c, d) with c + d <= total.
class PairIndex {
 public:
  explicit PairIndex(int total) : total_(total) {}
  int size() const { return (total_ + 1) * (total_ + 2) / 2; }
  int operator()(int c, int d) const {
    const int s = c + d;
    return s * (s + 1) / 2 + d;
  }

 private:
  int total_;
};

}  // namespace

namespace detail {

double factorial(int n) { return std::tgamma(n + 1.0); }

int total_photons(int index, int nmax) { return index / (nmax + 1) + index % (nmax + 1); }

int support_total(const Eigen::MatrixXcd& op, int nmax) {
  int total = -1;
  for (int j = 0; j < op.cols(); ++j) {
    for (int i = 0; i < op.rows(); ++i) {
      if (op(i, j) != cplx(0.0, 0.0)) {
        total = std::max({total, total_photons(i, nmax), total_photons(j, nmax)});
      }
    }
  }
  return total;
}

double content_above(const Eigen::MatrixXcd& op, int nmax, int cutoff) {
  double sq = 0.0;
  for (int j = 0; j < op.cols(); ++j) {
    for (int i = 0; i < op.rows(); ++i) {
      if (total_photons(i, nmax) > cutoff || total_photons(j, nmax) > cutoff) sq += std::norm(op(i, j));
    }
  }
  return std::sqrt(sq);
}

int resolve_output_cutoff(const FockDensityMatrix& rho_in, std::optional<int> nmax_out) {
  const int out = nmax_out.value_or(rho_in.nmax());
  if (out < 0) throw DomainError("output cutoff must be non-negative");
  const double spill = content_above(rho_in.matrix(), rho_in.nmax(), out);
  if (spill > kNormTolerance) {
    throw CapacityError("output cutoff " + std::to_string(out) + " cannot hold the input photon content (" +
                        std::to_string(spill) + " above the cutoff)");
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PureTwoModeState

PureTwoModeState::PureTwoModeState(std::map<FockLabel, cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
  double norm = 0.0;
  for (const auto& [label, amp] : amplitudes_) {
    if (label.first < 0 || label.second < 0) throw DomainError("photon numbers must be non-negative");
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) throw DomainError("amplitudes must be finite");
    norm += std::norm(amp);
  }
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw DomainError("target state is not normalized (norm^2 = " + std::to_string(norm) + ")");
  }
}

PureTwoModeState PureTwoModeState::fock(int n_p, int n_s, cplx phase) {
  return PureTwoModeState(std::map<FockLabel, cplx>{{{n_p, n_s}, phase / std::abs(phase)}});
}

PureTwoModeState PureTwoModeState::two_color_qubit(double u, double phi_u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("u must be non-negative");
  const double norm = 1.0 / std::sqrt(1.0 + u * u);
  return PureTwoModeState(std::map<FockLabel, cplx>{{{1, 0}, norm}, {{0, 1}, norm * u * std::polar(1.0, -phi_u)}});
}

PureTwoModeState PureTwoModeState::noon(double theta) {
  const double h = 1.0 / std::sqrt(2.0);
  return PureTwoModeState(std::map<FockLabel, cplx>{{{2, 0}, h}, {{0, 2}, h * std::polar(1.0, theta)}});
}

int PureTwoModeState::max_occupation() const noexcept {
  int m = 0;
  for (const auto& [label, amp] : amplitudes_) m = std::max({m, label.first, label.second});
  return m;
}

Eigen::VectorXcd PureTwoModeState::vector(int nmax) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero((nmax + 1) * (nmax + 1));
  for (const auto& [label, amp] : amplitudes_) {
    if (label.first <= nmax && label.second <= nmax) v(label.first * (nmax + 1) + label.second) = amp;
  }
  return v;
}

// ---------------------------------------------------------------------------
// FockDensityMatrix

FockDensityMatrix::FockDensityMatrix(int nmax) : nmax_(nmax) {
  if (nmax < 0) throw DomainError("cutoff must be non-negative");
  matrix_ = Eigen::MatrixXcd::Zero(dim(), dim());
}

FockDensityMatrix::FockDensityMatrix(int nmax, Eigen::MatrixXcd matrix) : nmax_(nmax), matrix_(std::move(matrix)) {
  if (nmax < 0) throw DomainError("cutoff must be non-negative");
  if (matrix_.rows() != dim() || matrix_.cols() != dim()) {
    throw DomainError("density matrix dimension does not match cutoff " + std::to_string(nmax));
  }
}

FockDensityMatrix FockDensityMatrix::fock_state(int n_p, int n_s, int nmax) {
  if (n_p > nmax || n_s > nmax) throw CapacityError("Fock state exceeds the cutoff");
  return pure(PureTwoModeState::fock(n_p, n_s), nmax);
}

FockDensityMatrix FockDensityMatrix::pure(const PureTwoModeState& state, int nmax) {
  if (state.max_occupation() > nmax) throw CapacityError("pure state exceeds the cutoff");
  const Eigen::VectorXcd v = state.vector(nmax);
  return FockDensityMatrix(nmax, v * v.adjoint());
}

FockDensityMatrix FockDensityMatrix::coherent(const CoherentPair& fields, int nmax) {
  auto amplitudes = [nmax](cplx beta) {
    Eigen::VectorXcd c(nmax + 1);
    c(0) = std::exp(-0.5 * std::norm(beta));
    for (int n = 1; n <= nmax; ++n) c(n) = c(n - 1) * beta / std::sqrt(static_cast<double>(n));
    return c;
  };
  const Eigen::VectorXcd cp = amplitudes(fields.beta_p);
  const Eigen::VectorXcd cs = amplitudes(fields.beta_s);
  Eigen::VectorXcd v((nmax + 1) * (nmax + 1));
  for (int np = 0; np <= nmax; ++np) {
    for (int ns = 0; ns <= nmax; ++ns) v(np * (nmax + 1) + ns) = cp(np) * cs(ns);
  }
  return FockDensityMatrix(nmax, v * v.adjoint());
}

cplx FockDensityMatrix::element(int m_p, int m_s, int n_p, int n_s) const {
  for (int n : {m_p, m_s, n_p, n_s}) {
    if (n < 0 || n > nmax_) throw DomainError("Fock index outside the cutoff");
  }
  return matrix_(index(m_p, m_s), index(n_p, n_s));
}

double FockDensityMatrix::trace() const { return matrix_.trace().real(); }

double FockDensityMatrix::hermiticity_error() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

double FockDensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

int FockDensityMatrix::max_total_photons(double tolerance) const {
  int total = -1;
  for (int i = 0; i < dim(); ++i) {
    if (std::abs(matrix_(i, i)) > tolerance) total = std::max(total, detail::total_photons(i, nmax_));
  }
  return total;
}

double FockDensityMatrix::weight_above(int total) const {
  double w = 0.0;
  for (int i = 0; i < dim(); ++i) {
    if (detail::total_photons(i, nmax_) > total) w += matrix_(i, i).real();
  }
  return w;
}

// ---------------------------------------------------------------------------
// Channel

FockDensityMatrix apply_channel(const TransferMatrix& tm, const FockDensityMatrix& rho_in,
                                std::optional<int> nmax_out) {
  const int nin = rho_in.nmax();
  const int nout = detail::resolve_output_cutoff(rho_in, nmax_out);
  const Eigen::MatrixXcd& x = rho_in.matrix();
  FockDensityMatrix out(nout);
  const int total = detail::support_total(x, nin);
  if (total < 0) return out;

  // K(c, d) = (A* a_p + B* a_s)^c (C* a_p + D* a_s)^d
  const SparseOp ap = annihilator(nin, true);
  const SparseOp as = annihilator(nin, false);
  const SparseOp x_dag = std::conj(tm.a) * ap + std::conj(tm.b) * as;
  const SparseOp y_dag = std::conj(tm.c) * ap + std::conj(tm.d) * as;

  const PairIndex pairs(total);
  std::vector<SparseOp> k(pairs.size());
  SparseOp identity(rho_in.dim(), rho_in.dim());
  identity.setIdentity();
  k[pairs(0, 0)] = identity;
  for (int d = 1; d <= total; ++d) k[pairs(0, d)] = (y_dag * k[pairs(0, d - 1)]).pruned();
  for (int d = 0; d <= total; ++d) {
    for (int c = 1; c + d <= total; ++c) k[pairs(c, d)] = (x_dag * k[pairs(c - 1, d)]).pruned();
  }

  // G(u, v) = Tr{K_u rho K_v^dagger}, filled lazily.
  std::vector<Eigen::MatrixXcd> w(pairs.size());
  std::vector<cplx> g(static_cast<std::size_t>(pairs.size()) * pairs.size());
  std::vector<char> known(g.size(), 0);
  auto trace_term = [&](int u, int v) -> cplx {
    const std::size_t slot = static_cast<std::size_t>(u) * pairs.size() + v;
    if (known[slot]) return g[slot];
    if (w[u].size() == 0) w[u] = k[u] * x;
    cplx sum{0.0, 0.0};
    for (int col = 0; col < k[v].outerSize(); ++col) {
      for (SparseOp::InnerIterator it(k[v], col); it; ++it) sum += w[u](it.row(), col) * std::conj(it.value());
    }
    g[slot] = sum;
    known[slot] = 1;
    return sum;
  };

  std::vector<double> fact(2 * total + 2);
  for (std::size_t n = 0; n < fact.size(); ++n) fact[n] = detail::factorial(static_cast<int>(n));

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(out.dim(), out.dim());
  for (int m_p = 0; m_p <= std::min(nout, total); ++m_p) {
    for (int m_s = 0; m_s <= std::min(nout, total - m_p); ++m_s) {
      for (int n_p = 0; n_p <= std::min(nout, total); ++n_p) {
        for (int n_s = 0; n_s <= std::min(nout, total - n_p); ++n_s) {
          const int headroom = total - std::max(m_p + m_s, n_p + n_s);
          cplx sum{0.0, 0.0};
          for (int l_p = 0; l_p <= headroom; ++l_p) {
            for (int l_s = 0; l_p + l_s <= headroom; ++l_s) {
              const double sign = ((l_p + l_s) % 2 == 0) ? 1.0 : -1.0;
              const cplx term = trace_term(pairs(m_p + l_p, m_s + l_s), pairs(n_p + l_p, n_s + l_s));
              sum += sign / (fact[l_p] * fact[l_s]) * term;
            }
          }
          const double chi = 1.0 / std::sqrt(fact[m_p] * fact[m_s] * fact[n_p] * fact[n_s]);
          result(out.index(m_p, m_s), out.index(n_p, n_s)) = chi * sum;
        }
      }
    }
  }
  return FockDensityMatrix(nout, std::move(result));
}

CoherentPair coherent_output(const TransferMatrix& tm, const CoherentPair& fields) {
  for (double v : {fields.beta_p.real(), fields.beta_p.imag(), fields.beta_s.real(), fields.beta_s.imag()}) {
    if (!std::isfinite(v)) throw DomainError("coherent amplitudes must be finite");
  }
  return {std::conj(tm.a) * fields.beta_p + std::conj(tm.b) * fields.beta_s,
          std::conj(tm.c) * fields.beta_p + std::conj(tm.d) * fields.beta_s};
}

double overlap_fidelity(const FockDensityMatrix& rho, const PureTwoModeState& target) {
  const Eigen::VectorXcd psi = target.vector(rho.nmax());
  const double value = (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
  return std::clamp(value, 0.0, 1.0);
}

double uhlmann_fidelity(const FockDensityMatrix& rho, const PureTwoModeState& target) {
  return std::sqrt(overlap_fidelity(rho, target));
}

std::map<FockLabel, double> mode_probabilities(const FockDensityMatrix& rho) {
  std::map<FockLabel, double> probs;
  for (int i = 0; i < rho.dim(); ++i) {
    const double p = rho.matrix()(i, i).real();
    if (p != 0.0) probs[rho.label(i)] = p;
  }
  return probs;
}

}  // namespace dlambda
