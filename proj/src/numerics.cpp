#include "contlim/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace contlim {

namespace {

double one_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Pade approximant of degree 3, 5, 7 or 9.
CMatrix pade_low(const CMatrix& a, int degree) {
  static const std::array<double, 4> b3 = {120., 60., 12., 1.};
  static const std::array<double, 6> b5 = {30240., 15120., 3360., 420., 30., 1.};
  static const std::array<double, 8> b7 = {17297280., 8648640., 1995840., 277200.,
                                           25200.,    1512.,    56.,      1.};
  static const std::array<double, 10> b9 = {17643225600., 8821612800., 2075673600., 302702400.,
                                            30270240.,    2162160.,    110880.,     3960.,
                                            90.,          1.};
  const double* b = degree == 3 ? b3.data() : degree == 5 ? b5.data() : degree == 7 ? b7.data() : b9.data();

  const Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix power = id;
  CMatrix u_inner = CMatrix::Zero(n, n);
  CMatrix v = CMatrix::Zero(n, n);
  for (int k = 0; k <= degree; k += 2) {
    v += b[k] * power;
    u_inner += b[k + 1] * power;
    power = power * a2;
  }
  const CMatrix u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

CMatrix pade13_squared(const CMatrix& input, double norm1) {
  static const std::array<double, 14> b = {64764752532480000., 32382376266240000., 7771770303897600.,
                                           1187353796428800.,  129060195264000.,   10559470521600.,
                                           670442572800.,      33522128640.,       1323241920.,
                                           40840800.,          960960.,            16380.,
                                           182.,               1.};
  constexpr double theta13 = 5.371920351148152;
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const CMatrix a = input / std::ldexp(1.0, s);

  const Index n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

}  // namespace

bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw ShapeError(os.str());
  }
}

// tol is validated but does not change the approximant.
CMatrix expm(const CMatrix& m, double tol) {
  require_square(m, "expm");
  if (!(tol > 0.0 && tol <= 1e-6)) throw PreconditionError("expm: tol must lie in (0, 1e-6]");
  if (!all_finite(m)) throw NumericalError("expm: input has non-finite entries");
  if (m.size() == 0) return m;

  const double norm1 = one_norm(m);
  if (norm1 > kExpmNormLimit) {
    std::ostringstream os;
    os << "expm: 1-norm " << norm1 << " exceeds the supported bound " << kExpmNormLimit;
    throw NumericalError(os.str());
  }

  static const std::array<std::pair<double, int>, 4> low = {
      {{1.495585217958292e-2, 3}, {2.539398330063230e-1, 5}, {9.504178996162932e-1, 7}, {2.097847961257068, 9}}};
  CMatrix result;
  bool done = false;
  for (const auto& [theta, degree] : low) {
    if (norm1 <= theta) {
      result = pade_low(m, degree);
      done = true;
      break;
    }
  }
  if (!done) result = pade13_squared(m, norm1);
  if (!all_finite(result)) throw NumericalError("expm: overflow in scaling and squaring");
  return result;
}

CMatrix logm_principal(const CMatrix& m) {
  require_square(m, "logm_principal");
  if (!all_finite(m)) throw NumericalError("logm_principal: input has non-finite entries");
  const Index n = m.rows();
  if (n == 0) return m;

  Eigen::ComplexEigenSolver<CMatrix> es(m, true);
  if (es.info() != Eigen::Success) throw NumericalError("logm_principal: eigensolver failed");
  const CVector& lambda = es.eigenvalues();

  double scale = 1.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(lambda(i)));
  for (Index i = 0; i < n; ++i) {
    const Complex l = lambda(i);
    if (std::abs(l) <= 1e-14 * scale) {
      std::ostringstream os;
      os << "logm_principal: singular matrix (eigenvalue " << l << ")";
      throw SingularMatrixError(os.str());
    }
    if (std::abs(std::arg(l)) > M_PI - kBranchCutMargin) {
      long mult = 0;
      for (Index j = 0; j < n; ++j)
        if (std::abs(lambda(j) - l) < kEigenGap) ++mult;
      std::ostringstream os;
      os << "logm_principal: eigenvalue " << l << " (multiplicity " << mult << ") lies on the branch cut";
      throw BranchCutError(os.str(), l, mult);
    }
  }

  const CMatrix& v = es.eigenvectors();
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sv = svd.singularValues();
  const double cond = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : INFINITY;

  CMatrix result;
  if (cond <= kDefectiveCondition) {
    CVector logs(n);
    for (Index i = 0; i < n; ++i) logs(i) = std::log(lambda(i));
    result = v * logs.asDiagonal() * v.inverse();
  } else {
    result = m.log();
  }
  if (!all_finite(result)) throw NumericalError("logm_principal: non-finite result");
  return result;
}

SubspaceBasis null_space(const CMatrix& m, double tol) {
  if (tol < 0.0) throw PreconditionError("null_space: tol must be nonnegative");
  SubspaceBasis out;
  out.ambient_dim = m.cols();
  out.tol_used = tol;
  if (m.cols() == 0) {
    out.vectors = CMatrix(0, 0);
    return out;
  }
  if (m.rows() == 0) {
    out.vectors = CMatrix::Identity(m.cols(), m.cols());
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  out.vectors = svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

SubspaceBasis range_space(const CMatrix& m, double tol) {
  if (tol < 0.0) throw PreconditionError("range_space: tol must be nonnegative");
  SubspaceBasis out;
  out.ambient_dim = m.rows();
  out.tol_used = tol;
  if (m.size() == 0) {
    out.vectors = CMatrix(m.rows(), 0);
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  out.vectors = svd.matrixU().leftCols(rank);
  return out;
}

CMatrix oblique_projector(const SubspaceBasis& range, const SubspaceBasis& kernel) {
  const Index n = range.ambient_dim;
  if (kernel.ambient_dim != n || range.vectors.rows() != n || kernel.vectors.rows() != n)
    throw ShapeError("oblique_projector: ambient dimensions differ");
  if (range.dim() + kernel.dim() != n)
    throw DefectiveError("defective: no oblique projector (dimensions of range and kernel do not add up)");
  if (kernel.empty()) return CMatrix::Identity(n, n);
  if (range.empty()) return CMatrix::Zero(n, n);

  CMatrix stacked(n, n);
  stacked << range.vectors, kernel.vectors;
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) <= 0.0 || sv(0) / sv(n - 1) > kDefectiveCondition)
    throw DefectiveError("defective: no oblique projector (range and kernel intersect)");
  const CMatrix inv = stacked.inverse();
  return range.vectors * inv.topRows(range.dim());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Index numerical_rank(const CMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

bool is_proportional_to_identity(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Index n = m.rows();
  if (n == 0) return true;
  const Complex c = m.trace() / static_cast<double>(n);
  const CMatrix dev = m - c * CMatrix::Identity(n, n);
  return dev.norm() <= tol * std::max(1.0, m.norm());
}

std::vector<std::vector<Index>> cluster_values(const std::vector<Complex>& values, double gap) {
  const Index n = static_cast<Index>(values.size());
  std::vector<Index> parent(values.size());
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) < gap) parent[find(j)] = find(i);

  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(values.size(), -1);
  for (Index i = 0; i < n; ++i) {
    const Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

CMatrix canonical_basis(const CMatrix& vectors) {
  const Index n = vectors.rows();
  const Index k = vectors.cols();
  if (k == 0) return vectors;

  // Reduced row echelon form of the span, pivoting in coordinate order.
  CMatrix rows = vectors.transpose();
  Index pivot_row = 0;
  for (Index col = 0; col < n && pivot_row < k; ++col) {
    Index best = pivot_row;
    for (Index r = pivot_row + 1; r < k; ++r)
      if (std::abs(rows(r, col)) > std::abs(rows(best, col)) * (1.0 + 1e-9)) best = r;
    if (std::abs(rows(best, col)) <= 1e-8) continue;
    rows.row(pivot_row).swap(rows.row(best));
    const Complex pivot = rows(pivot_row, col);
    rows.row(pivot_row) /= pivot;
    for (Index r = 0; r < k; ++r) {
      const Complex factor = rows(r, col);
      if (r != pivot_row) rows.row(r) -= factor * rows.row(pivot_row);
    }
    ++pivot_row;
  }

  CMatrix out = rows.transpose();
  for (Index j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < j; ++i) out.col(j) -= out.col(i).dot(out.col(j)) * out.col(i);
    out.col(j).normalize();
    Index imax = 0;
    double vmax = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (std::abs(out(i, j)) > vmax * (1.0 + 1e-9)) {
        vmax = std::abs(out(i, j));
        imax = i;
      }
    }
    if (vmax > 0.0) out.col(j) *= std::conj(out(imax, j)) / vmax;
  }
  return out;
}

std::vector<Complex> sorted_eigenvalues(const CMatrix& m) {
  require_square(m, "sorted_eigenvalues");
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return out;
}

}  // namespace contlim
