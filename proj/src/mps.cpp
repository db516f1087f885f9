#include "contlim/mps.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace contlim {

void MpsTensor::validate() const {
  if (d < 1 || D < 1) throw ShapeError("MpsTensor: d and D must be positive");
  if (static_cast<Index>(matrices.size()) != d) throw ShapeError("MpsTensor: number of matrices differs from d");
  for (const auto& a : matrices) {
    if (a.rows() != D || a.cols() != D) throw ShapeError("MpsTensor: matrix has the wrong shape");
    if (!all_finite(a)) throw NumericalError("MpsTensor: non-finite entries");
  }
  if (!(spacing > 0.0)) throw PreconditionError("MpsTensor: spacing must be positive");
}

SuperOp transfer_matrix(const MpsTensor& t) {
  t.validate();
  SuperOp e{t.D, CMatrix::Zero(t.D * t.D, t.D * t.D)};
  for (const auto& a : t.matrices) e.matrix += kron(a, a.conjugate());
  return e;
}

MpsTensor normalize_tp(const MpsTensor& t, double tol) {
  const SuperOp e = transfer_matrix(t);
  Eigen::ComplexEigenSolver<CMatrix> es(e.matrix.adjoint());
  Index best = 0;
  for (Index i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > std::abs(es.eigenvalues()(best))) best = i;
  const double radius = std::abs(es.eigenvalues()(best));
  if (radius <= 0.0) throw PreconditionError("normalize_tp: transfer matrix is nilpotent");

  CMatrix lambda = unvec(es.eigenvectors().col(best), t.D);
  lambda /= lambda.trace();
  lambda = hermitian_part(lambda);
  Eigen::SelfAdjointEigenSolver<CMatrix> les(lambda);
  if (les.eigenvalues()(0) <= tol * les.eigenvalues()(t.D - 1))
    throw PreconditionError("normalize_tp: dominant left fixed point is not full rank");
  const CMatrix x = les.operatorSqrt();
  const CMatrix xinv = les.operatorInverseSqrt();

  MpsTensor out = t;
  for (auto& a : out.matrices) a = x * a * xinv / std::sqrt(radius);
  return out;
}

CVector dense_state(const MpsTensor& t, Index n_sites) {
  t.validate();
  if (n_sites < 1) throw PreconditionError("dense_state: need at least one site");
  double size = 1.0;
  for (Index i = 0; i < n_sites; ++i) size *= static_cast<double>(t.d);
  if (size > static_cast<double>(kDenseStateLimit)) throw PreconditionError("dense_state: d^N exceeds the size guard");

  CVector out(static_cast<Index>(size));
  std::vector<CMatrix> prefix(static_cast<std::size_t>(n_sites) + 1);
  prefix[0] = CMatrix::Identity(t.D, t.D);
  std::function<void(Index, Index)> walk = [&](Index depth, Index index) {
    if (depth == n_sites) {
      out(index) = prefix[static_cast<std::size_t>(depth)].trace();
      return;
    }
    for (Index i = 0; i < t.d; ++i) {
      prefix[static_cast<std::size_t>(depth) + 1] = prefix[static_cast<std::size_t>(depth)] * t.matrices[static_cast<std::size_t>(i)];
      walk(depth + 1, index * t.d + i);
    }
  };
  walk(0, 0);
  return out;
}

namespace {

CMatrix matrix_power(const CMatrix& m, Index p) {
  CMatrix result = CMatrix::Identity(m.rows(), m.cols());
  CMatrix base = m;
  while (p > 0) {
    if (p & 1) result = result * base;
    base = base * base;
    p >>= 1;
  }
  return result;
}

CMatrix inserted(const MpsTensor& t, const CMatrix& op) {
  CMatrix e = CMatrix::Zero(t.D * t.D, t.D * t.D);
  for (Index i = 0; i < t.d; ++i)
    for (Index j = 0; j < t.d; ++j)
      if (op(j, i) != Complex(0.0)) e += op(j, i) * kron(t.matrices[static_cast<std::size_t>(i)], t.matrices[static_cast<std::size_t>(j)].conjugate());
  return e;
}

}  // namespace

Complex discrete_two_point(const MpsTensor& t, Index n_sites, const CMatrix& op1, Index site1, const CMatrix& op2,
                           Index site2) {
  t.validate();
  if (n_sites < 1) throw PreconditionError("discrete_two_point: need at least one site");
  if (site1 < 0 || site1 >= n_sites || site2 < 0 || site2 >= n_sites)
    throw PreconditionError("discrete_two_point: site out of range");
  if (op1.rows() != t.d || op1.cols() != t.d || op2.rows() != t.d || op2.cols() != t.d)
    throw ShapeError("discrete_two_point: operators must be d x d");

  const CMatrix e = transfer_matrix(t).matrix;
  const Complex norm = matrix_power(e, n_sites).trace();
  if (std::abs(norm) == 0.0) throw NumericalError("discrete_two_point: state has zero norm");

  CMatrix chain;
  if (site1 == site2) {
    chain = matrix_power(e, site1) * inserted(t, op1 * op2) * matrix_power(e, n_sites - site1 - 1);
  } else {
    const Index lo = std::min(site1, site2), hi = std::max(site1, site2);
    const CMatrix& olo = site1 < site2 ? op1 : op2;
    const CMatrix& ohi = site1 < site2 ? op2 : op1;
    chain = matrix_power(e, lo) * inserted(t, olo) * matrix_power(e, hi - lo - 1) * inserted(t, ohi) *
            matrix_power(e, n_sites - hi - 1);
  }
  return chain.trace() / norm;
}

DivisibilityVerdict has_continuum_limit(const MpsTensor& t, double tol) {
  return is_infinitely_divisible(transfer_matrix(t), t.spacing, tol);
}

namespace presets {

namespace {

CMatrix ket_bra(Index dim, Index i, Index j, Complex value = 1.0) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = value;
  return m;
}

}  // namespace

MpsTensor ferromagnet(Index k, double spacing) {
  if (k < 1) throw PreconditionError("ferromagnet: need at least one branch");
  MpsTensor t{k, k, {}, spacing};
  for (Index i = 0; i < k; ++i) t.matrices.push_back(ket_bra(k, i, i));
  return t;
}

MpsTensor antiferromagnet(double spacing) {
  return {2, 2, {ket_bra(2, 0, 1), ket_bra(2, 1, 0)}, spacing};
}

MpsTensor depolarizing(double spacing) {
  const double s = M_SQRT1_2;
  return {4, 2, {ket_bra(2, 0, 0, s), ket_bra(2, 0, 1, s), ket_bra(2, 1, 0, s), ket_bra(2, 1, 1, s)}, spacing};
}

MpsTensor bracket(double gamma, double spacing) {
  if (!(gamma >= 0.0)) throw PreconditionError("bracket: gamma must be nonnegative");
  const double p = 0.5 * (1.0 + std::exp(-2.0 * gamma));
  const double q = 0.5 * (1.0 - std::exp(-2.0 * gamma));
  return {4,
          2,
          {ket_bra(2, 0, 0, std::sqrt(p)), ket_bra(2, 1, 1, std::sqrt(p)), ket_bra(2, 0, 1, std::sqrt(q)),
           ket_bra(2, 1, 0, std::sqrt(q))},
          spacing};
}

MpsTensor aklt(double spacing) {
  CMatrix a0(2, 2);
  a0 << 1.0, 0.0, 0.0, -1.0;
  a0 /= std::sqrt(3.0);
  const double s = std::sqrt(2.0 / 3.0);
  return {3, 2, {a0, ket_bra(2, 1, 0, s), ket_bra(2, 0, 1, -s)}, spacing};
}

MpsTensor identity(Index D, double spacing) { return {1, D, {CMatrix::Identity(D, D)}, spacing}; }

MpsTensor by_name(const std::string& name, double gamma, double spacing) {
  if (name == "ferro") return ferromagnet(2, spacing);
  if (name == "antiferro") return antiferromagnet(spacing);
  if (name == "depolarizing") return depolarizing(spacing);
  if (name == "bracket") return bracket(gamma, spacing);
  if (name == "aklt") return aklt(spacing);
  if (name == "identity") return identity(2, spacing);
  throw PreconditionError("unknown preset '" + name + "'");
}

std::vector<std::string> names() { return {"ferro", "antiferro", "depolarizing", "bracket", "aklt", "identity"}; }

CMatrix bracket_number_operator() {
  CMatrix n = CMatrix::Zero(4, 4);
  n(2, 2) = 1.0;
  n(3, 3) = 1.0;
  return n;
}

}  // namespace presets

}  // namespace contlim
