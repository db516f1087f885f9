#include "contlim/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contlim {

CVector vec(const CMatrix& x) {
  CVector v(x.size());
  const Index cols = x.cols();
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < cols; ++j) v(i * cols + j) = x(i, j);
  return v;
}

CMatrix unvec(const CVector& v, Index dim) {
  if (v.size() != dim * dim) throw ShapeError("unvec: vector length is not dim^2");
  CMatrix x(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) x(i, j) = v(i * dim + j);
  return x;
}

void KrausChannel::validate() const {
  if (dim < 1) throw ShapeError("KrausChannel: dim must be positive");
  if (kraus.empty()) throw ShapeError("KrausChannel: empty Kraus list");
  for (const auto& a : kraus) {
    if (a.rows() != dim || a.cols() != dim) throw ShapeError("KrausChannel: Kraus operator has the wrong shape");
    if (!all_finite(a)) throw NumericalError("KrausChannel: non-finite entries");
  }
}

SuperOp SuperOp::identity(Index dim) { return {dim, CMatrix::Identity(dim * dim, dim * dim)}; }

void SuperOp::validate() const {
  if (dim < 1) throw ShapeError("SuperOp: dim must be positive");
  if (matrix.rows() != dim * dim || matrix.cols() != dim * dim) throw ShapeError("SuperOp: matrix is not dim^2 x dim^2");
  if (!all_finite(matrix)) throw NumericalError("SuperOp: non-finite entries");
}

CMatrix reshuffle(const CMatrix& m, Index dim) {
  const Index n = dim * dim;
  if (m.rows() != n || m.cols() != n) throw ShapeError("reshuffle: matrix is not dim^2 x dim^2");
  CMatrix out(n, n);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j)
      for (Index k = 0; k < dim; ++k)
        for (Index l = 0; l < dim; ++l) out(i * dim + k, j * dim + l) = m(i * dim + j, k * dim + l);
  return out;
}

SuperOp kraus_to_superop(const KrausChannel& ch) {
  ch.validate();
  const Index n = ch.dim * ch.dim;
  SuperOp e{ch.dim, CMatrix::Zero(n, n)};
  for (const auto& a : ch.kraus) e.matrix += kron(a, a.conjugate());
  return e;
}

ChoiMatrix choi(const SuperOp& e) {
  e.validate();
  return {e.dim, reshuffle(e.matrix, e.dim)};
}

SuperOp from_choi(const ChoiMatrix& c) { return {c.dim, reshuffle(c.matrix, c.dim)}; }

KrausChannel superop_to_kraus(const SuperOp& e, double tol) {
  const ChoiMatrix c = choi(e);
  const double scale = std::max(1.0, c.matrix.norm());
  if ((c.matrix - c.matrix.adjoint()).norm() > tol * scale)
    throw PreconditionError("superop_to_kraus: Choi matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c.matrix));
  const RVector& lambda = es.eigenvalues();
  const Index n = lambda.size();
  if (lambda(0) < -tol * std::max(1.0, lambda(n - 1))) {
    std::ostringstream os;
    os << "superop_to_kraus: not completely positive (Choi eigenvalue " << lambda(0) << ")";
    throw PreconditionError(os.str());
  }

  // Descending order, truncated at tol * lambda_max.
  const double cutoff = tol * std::max(lambda(n - 1), 0.0);
  std::vector<Index> kept;
  std::vector<Complex> values;
  for (Index i = n - 1; i >= 0; --i) {
    if (lambda(i) > cutoff && lambda(i) > 0.0) {
      kept.push_back(i);
      values.emplace_back(lambda(i), 0.0);
    }
  }

  KrausChannel out{e.dim, {}};
  for (const auto& group : cluster_values(values)) {
    CMatrix v(n, static_cast<Index>(group.size()));
    CMatrix block = CMatrix::Zero(n, n);
    for (std::size_t g = 0; g < group.size(); ++g) {
      const Index col = kept[group[g]];
      v.col(static_cast<Index>(g)) = es.eigenvectors().col(col);
      block += lambda(col) * es.eigenvectors().col(col) * es.eigenvectors().col(col).adjoint();
    }
    const CMatrix w = canonical_basis(v);
    Eigen::SelfAdjointEigenSolver<CMatrix> small(hermitian_part(w.adjoint() * block * w));
    const CMatrix root = small.operatorSqrt();
    const CMatrix vectors = w * root;
    for (Index j = 0; j < vectors.cols(); ++j) out.kraus.push_back(unvec(vectors.col(j), e.dim));
  }
  if (out.kraus.empty()) out.kraus.push_back(CMatrix::Zero(e.dim, e.dim));
  return out;
}

CptpReport is_cptp(const SuperOp& e, double tol) {
  e.validate();
  CptpReport r;
  const CMatrix c = reshuffle(e.matrix, e.dim);
  r.hermiticity_preserving = (c - c.adjoint()).norm() <= tol * std::max(1.0, c.norm());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c), Eigen::EigenvaluesOnly);
  r.min_choi_eigenvalue = es.eigenvalues()(0);
  r.completely_positive = r.hermiticity_preserving && r.min_choi_eigenvalue >= -tol;
  const CVector id = vec(CMatrix::Identity(e.dim, e.dim));
  r.tp_violation = (e.matrix.adjoint() * id - id).norm();
  r.trace_preserving = r.tp_violation <= tol;
  return r;
}

bool is_projector_channel(const SuperOp& e, double tol) {
  e.validate();
  const double idem = (e.matrix * e.matrix - e.matrix).norm();
  if (idem > tol * std::max(1.0, e.matrix.norm())) return false;
  return is_cptp(e, tol).ok();
}

SuperOp compose(const SuperOp& e1, const SuperOp& e2) {
  e1.validate();
  e2.validate();
  if (e1.dim != e2.dim) throw ShapeError("compose: dimension mismatch");
  return {e1.dim, e1.matrix * e2.matrix};
}

SuperOp power(const SuperOp& e, int p) {
  if (p < 0) throw PreconditionError("power: negative exponent");
  SuperOp out = SuperOp::identity(e.dim);
  for (int i = 0; i < p; ++i) out.matrix = out.matrix * e.matrix;
  return out;
}

CMatrix apply(const SuperOp& e, const CMatrix& rho) {
  if (rho.rows() != e.dim || rho.cols() != e.dim) throw ShapeError("apply: operand has the wrong shape");
  return unvec(e.matrix * vec(rho), e.dim);
}

CMatrix apply_dual(const SuperOp& e, const CMatrix& x) {
  if (x.rows() != e.dim || x.cols() != e.dim) throw ShapeError("apply_dual: operand has the wrong shape");
  return unvec(e.matrix.adjoint() * vec(x), e.dim);
}

KrausChannel identity_channel(Index dim) {
  if (dim < 1) throw ShapeError("identity_channel: dim must be positive");
  return {dim, {CMatrix::Identity(dim, dim)}};
}

KrausChannel pinching_channel(const CMatrix& basis) {
  require_square(basis, "pinching_channel");
  const Index d = basis.rows();
  if (d < 1) throw ShapeError("pinching_channel: empty basis");
  if ((basis.adjoint() * basis - CMatrix::Identity(d, d)).norm() > 1e-10)
    throw PreconditionError("pinching_channel: basis is not orthonormal");
  KrausChannel out{d, {}};
  for (Index i = 0; i < d; ++i) out.kraus.push_back(basis.col(i) * basis.col(i).adjoint());
  return out;
}

KrausChannel depolarizing_channel(const CMatrix& sigma) {
  require_square(sigma, "depolarizing_channel");
  const Index d = sigma.rows();
  if (d < 1) throw ShapeError("depolarizing_channel: empty sigma");
  if (!is_hermitian(sigma, 1e-10)) throw PreconditionError("depolarizing_channel: sigma is not Hermitian");
  if (std::abs(sigma.trace() - Complex(1.0, 0.0)) > 1e-9)
    throw PreconditionError("depolarizing_channel: sigma does not have unit trace");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(sigma));
  if (es.eigenvalues()(0) < -1e-12) throw PreconditionError("depolarizing_channel: sigma is not positive");

  KrausChannel out{d, {}};
  for (Index j = d - 1; j >= 0; --j) {
    const double lj = es.eigenvalues()(j);
    if (lj <= 0.0) continue;
    for (Index i = 0; i < d; ++i) {
      CMatrix a = CMatrix::Zero(d, d);
      a.col(i) = std::sqrt(lj) * es.eigenvectors().col(j);
      out.kraus.push_back(a);
    }
  }
  return out;
}

KrausChannel builtin(const BuiltinKind& kind) {
  struct Visitor {
    KrausChannel operator()(const Identity& k) const { return identity_channel(k.dim); }
    KrausChannel operator()(const Pinching& k) const { return pinching_channel(k.basis); }
    KrausChannel operator()(const Depolarize& k) const { return depolarizing_channel(k.sigma); }
  };
  return std::visit(Visitor{}, kind);
}

CMatrix to_pauli_basis(const SuperOp& e) {
  if (e.dim != 2) throw ShapeError("to_pauli_basis: qubit superoperator required");
  const Complex i(0.0, 1.0);
  CMatrix t(4, 4);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  t.col(0) = vec(CMatrix::Identity(2, 2));
  t.col(1) = vec(sx);
  t.col(2) = vec(sy);
  t.col(3) = vec(sz);
  t /= std::sqrt(2.0);
  return t.adjoint() * e.matrix * t;
}

}  // namespace contlim
