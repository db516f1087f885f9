#include "contlim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contlim {

Lindblad Lindblad::zero(Index dim) { return {dim, CMatrix::Zero(dim, dim), {}}; }

void Lindblad::validate() const {
  if (dim < 1) throw ShapeError("Lindblad: dim must be positive");
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) throw ShapeError("Lindblad: H has the wrong shape");
  if (!is_hermitian(hamiltonian, 1e-10)) throw PreconditionError("Lindblad: H is not Hermitian");
  for (const auto& r : jumps)
    if (r.rows() != dim || r.cols() != dim) throw ShapeError("Lindblad: jump operator has the wrong shape");
}

CMatrix q_from(const CMatrix& h, const std::vector<CMatrix>& jumps) {
  require_square(h, "q_from");
  if (!is_hermitian(h, 1e-10)) throw PreconditionError("q_from: H is not Hermitian");
  CMatrix q = Complex(0.0, -1.0) * h;
  for (const auto& r : jumps) {
    if (r.rows() != h.rows() || r.cols() != h.cols()) throw ShapeError("q_from: jump operator has the wrong shape");
    q -= 0.5 * r.adjoint() * r;
  }
  return q;
}

CMatrix liouvillian_from_q(const CMatrix& q, const std::vector<CMatrix>& jumps) {
  require_square(q, "liouvillian_from_q");
  const Index d = q.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix l = kron(q, id) + kron(id, q.conjugate());
  for (const auto& r : jumps) l += kron(r, r.conjugate());
  return l;
}

LiouvillianMatrix liouvillian_matrix(const Lindblad& g) {
  g.validate();
  return {g.dim, liouvillian_from_q(q_from(g.hamiltonian, g.jumps), g.jumps)};
}

SuperOp channel_at(const LiouvillianMatrix& l, double t) {
  if (!(t >= 0.0)) throw PreconditionError("channel_at: t must be nonnegative");
  SuperOp e{l.dim, expm(t * l.matrix)};
#ifndef NDEBUG
  if (!is_cptp(e, 1e-7).ok()) throw NumericalError("channel_at: result is not CPTP");
#endif
  return e;
}

SuperOp channel_at(const Lindblad& g, double t) { return channel_at(liouvillian_matrix(g), t); }

CMatrix projected_choi(const CMatrix& liouvillian, Index dim) {
  const Index n = dim * dim;
  const CMatrix c = reshuffle(liouvillian, dim);
  const CVector omega = vec(CMatrix::Identity(dim, dim)) / std::sqrt(static_cast<double>(dim));
  const CMatrix pi = CMatrix::Identity(n, n) - omega * omega.adjoint();
  return pi * c * pi;
}

GeneratorReport is_generator(const LiouvillianMatrix& l, double tol) {
  const Index n = l.dim * l.dim;
  if (l.dim < 1 || l.matrix.rows() != n || l.matrix.cols() != n)
    throw ShapeError("is_generator: matrix is not dim^2 x dim^2");
  GeneratorReport r;
  const double scale = std::max(1.0, l.matrix.norm());
  const CVector id = vec(CMatrix::Identity(l.dim, l.dim));
  r.trace_violation = (l.matrix.adjoint() * id).norm();
  r.trace_annihilating = r.trace_violation <= tol * scale;

  const CMatrix c = reshuffle(l.matrix, l.dim);
  r.hermiticity_violation = (c - c.adjoint()).norm();
  r.hermiticity_preserving = r.hermiticity_violation <= tol * scale;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(projected_choi(l.matrix, l.dim)),
                                            Eigen::EigenvaluesOnly);
  r.min_projected_eigenvalue = es.eigenvalues()(0);
  r.conditionally_cp = r.min_projected_eigenvalue >= -tol * scale;
  return r;
}

BranchCutScan scan_branch_cut(const std::vector<Complex>& spectrum) {
  BranchCutScan scan;
  for (const auto& group : cluster_values(spectrum)) {
    Complex mean = 0.0;
    for (Index i : group) mean += spectrum[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(group.size());
    if (std::abs(mean) == 0.0 || std::abs(std::arg(mean)) <= M_PI - kBranchCutMargin) continue;
    scan.touches_cut = true;
    if (group.size() % 2 == 1 && !scan.odd_negative) {
      scan.odd_negative = mean;
      scan.multiplicity = static_cast<long>(group.size());
    }
  }
  return scan;
}

MarkovianResult markovian_test(const SuperOp& e, double tol) {
  if (!is_cptp(e, tol).ok()) throw PreconditionError("markovian_test: input is not CPTP");
  MarkovianResult out;
  const Index n = e.matrix.rows();
  if (numerical_rank(e.matrix, tol) < n) {
    out.status = MarkovianStatus::no;
    out.diagnostic = "singular channel: Markovian channels are invertible";
    return out;
  }

  const std::vector<Complex> spectrum = sorted_eigenvalues(e.matrix);
  const BranchCutScan scan = scan_branch_cut(spectrum);
  if (scan.odd_negative) {
    std::ostringstream os;
    os << "negative eigenvalue " << scan.odd_negative->real() << " with odd multiplicity " << scan.multiplicity
       << ": no Hermiticity-preserving logarithm exists";
    out.status = MarkovianStatus::no;
    out.diagnostic = os.str();
    return out;
  }
  if (scan.touches_cut) {
    out.status = MarkovianStatus::inconclusive;
    out.diagnostic = "spectrum touches the branch cut with even multiplicity; other logarithm branches were not searched";
    return out;
  }

  CMatrix log;
  try {
    log = logm_principal(e.matrix);
  } catch (const SingularMatrixError& err) {
    out.status = MarkovianStatus::no;
    out.diagnostic = err.what();
    return out;
  } catch (const NumericalError& err) {
    out.status = MarkovianStatus::inconclusive;
    out.diagnostic = err.what();
    return out;
  }

  LiouvillianMatrix l{e.dim, log};
  const GeneratorReport report = is_generator(l, tol);
  if (report.ok()) {
    out.status = MarkovianStatus::yes;
    out.generator = l;
    return out;
  }

  bool positive = true;
  for (const Complex& v : spectrum) positive = positive && v.real() > 0.0 && std::abs(v.imag()) < kEigenGap;
  const bool simple = cluster_values(spectrum).size() == spectrum.size();
  std::ostringstream os;
  os << "principal logarithm is not a generator (min projected Choi eigenvalue " << report.min_projected_eigenvalue
     << ", trace violation " << report.trace_violation << ")";
  if (positive && simple) {
    os << "; simple positive spectrum makes the principal branch the only candidate";
    out.status = MarkovianStatus::no;
  } else {
    os << "; other logarithm branches were not searched";
    out.status = MarkovianStatus::inconclusive;
  }
  out.diagnostic = os.str();
  return out;
}

Lindblad split_generator(const LiouvillianMatrix& l, double tol) {
  const GeneratorReport report = is_generator(l, tol);
  if (!report.ok()) throw PreconditionError("split_generator: matrix is not a valid generator");
  const Index d = l.dim;
  const Index n = d * d;
  const double scale = std::max(1.0, l.matrix.norm());

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(projected_choi(l.matrix, d)));
  const RVector& lambda = es.eigenvalues();
  std::vector<Index> kept;
  std::vector<Complex> values;
  for (Index i = n - 1; i >= 0; --i) {
    if (lambda(i) > tol * scale) {
      kept.push_back(i);
      values.emplace_back(lambda(i), 0.0);
    }
  }

  Lindblad g{d, CMatrix::Zero(d, d), {}};
  CMatrix dissipative = CMatrix::Zero(n, n);
  for (const auto& group : cluster_values(values)) {
    CMatrix v(n, static_cast<Index>(group.size()));
    CMatrix block = CMatrix::Zero(n, n);
    for (std::size_t k = 0; k < group.size(); ++k) {
      const Index col = kept[group[k]];
      v.col(static_cast<Index>(k)) = es.eigenvectors().col(col);
      block += lambda(col) * es.eigenvectors().col(col) * es.eigenvectors().col(col).adjoint();
    }
    const CMatrix w = canonical_basis(v);
    Eigen::SelfAdjointEigenSolver<CMatrix> small(hermitian_part(w.adjoint() * block * w));
    const CMatrix vectors = w * small.operatorSqrt();
    for (Index j = 0; j < vectors.cols(); ++j) {
      g.jumps.push_back(unvec(vectors.col(j), d));
      dissipative += vectors.col(j) * vectors.col(j).adjoint();
    }
  }

  const CMatrix rest = reshuffle(l.matrix, d) - dissipative;
  CMatrix k = unvec(rest * vec(CMatrix::Identity(d, d)), d) / static_cast<double>(d);
  k -= (k.trace() / (2.0 * static_cast<double>(d))) * CMatrix::Identity(d, d);
  CMatrix anticommutator = CMatrix::Zero(d, d);
  for (const auto& r : g.jumps) anticommutator += r.adjoint() * r;
  CMatrix h = hermitian_part(Complex(0.0, 1.0) * (k + 0.5 * anticommutator));
  h -= (h.trace() / static_cast<double>(d)) * CMatrix::Identity(d, d);
  g.hamiltonian = h;

  const double residual = (liouvillian_matrix(g).matrix - l.matrix).norm();
  if (residual > std::max(1e-8, 100.0 * tol) * scale) {
    std::ostringstream os;
    os << "split_generator: reconstruction residual " << residual;
    throw NumericalError(os.str());
  }
  return g;
}

}  // namespace contlim
