#include <algorithm>
#include <cmath>
#include <sstream>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <ceres/iteration_callback.h>

#include "contlim/divisibility.hpp"

namespace contlim {

namespace {

// Orthonormal real coordinates on Hermitian n x n matrices (optionally real symmetric only).
class HermitianCoordinates {
 public:
  enum class Kind { diagonal, symmetric, antisymmetric };
  struct Entry {
    Kind kind;
    Index i;
    Index j;
  };

  HermitianCoordinates(Index n, bool real_only) : n_(n) {
    for (Index i = 0; i < n; ++i) entries_.push_back({Kind::diagonal, i, i});
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        entries_.push_back({Kind::symmetric, i, j});
        if (!real_only) entries_.push_back({Kind::antisymmetric, i, j});
      }
  }

  Index size() const { return static_cast<Index>(entries_.size()); }
  const Entry& entry(Index c) const { return entries_[static_cast<std::size_t>(c)]; }

  CMatrix to_matrix(const RVector& x) const {
    CMatrix c = CMatrix::Zero(n_, n_);
    for (Index k = 0; k < size(); ++k) {
      const Entry& e = entry(k);
      switch (e.kind) {
        case Kind::diagonal:
          c(e.i, e.i) += x(k);
          break;
        case Kind::symmetric:
          c(e.i, e.j) += x(k) * M_SQRT1_2;
          c(e.j, e.i) += x(k) * M_SQRT1_2;
          break;
        case Kind::antisymmetric:
          c(e.i, e.j) += Complex(0.0, x(k) * M_SQRT1_2);
          c(e.j, e.i) -= Complex(0.0, x(k) * M_SQRT1_2);
          break;
      }
    }
    return c;
  }

  RVector to_coords(const CMatrix& c) const {
    RVector x(size());
    for (Index k = 0; k < size(); ++k) {
      const Entry& e = entry(k);
      switch (e.kind) {
        case Kind::diagonal:
          x(k) = c(e.i, e.i).real();
          break;
        case Kind::symmetric:
          x(k) = (c(e.i, e.j).real() + c(e.j, e.i).real()) * M_SQRT1_2;
          break;
        case Kind::antisymmetric:
          x(k) = (c(e.i, e.j).imag() - c(e.j, e.i).imag()) * M_SQRT1_2;
          break;
      }
    }
    return x;
  }

 private:
  Index n_;
  std::vector<Entry> entries_;
};

RVector split_complex(const CMatrix& m) {
  const Index n = m.size();
  RVector out(2 * n);
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      out(r * m.cols() + c) = m(r, c).real();
      out(n + r * m.cols() + c) = m(r, c).imag();
    }
  return out;
}

// Orthonormal basis of ker a from a rank-revealing QR of a^T (pivots above the threshold count as rank).
RMatrix null_basis(const RMatrix& a, double threshold) {
  Eigen::ColPivHouseholderQR<RMatrix> qr(a.transpose());
  Index rank = 0;
  const Index top = std::min(a.rows(), a.cols());
  while (rank < top && std::abs(qr.matrixR()(rank, rank)) > threshold) ++rank;
  const RMatrix q = qr.householderQ();
  return q.rightCols(a.cols() - rank);
}

// Minimum-norm least-squares solution; tall systems are first reduced by Householder QR.
RVector min_norm_solve(const RMatrix& a, const RVector& b, double threshold) {
  if (a.rows() > a.cols()) {
    Eigen::HouseholderQR<RMatrix> hq(a);
    const RMatrix r = hq.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    const RVector qtb = (hq.householderQ().transpose() * b).head(a.cols());
    Eigen::JacobiSVD<RMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(threshold);
    return svd.solve(qtb);
  }
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(threshold);
  return svd.solve(b);
}

// f(z) = |neg(Pi C(x0 + N z) Pi)|^2 / 2 in units of the drift scale.
class NegativePart final : public ceres::FirstOrderFunction {
 public:
  NegativePart(const HermitianCoordinates& coords, const CMatrix& pi, const RVector& x0, const RMatrix& null, double scale)
      : coords_(coords), pi_(pi), x0_(x0 / scale), null_(null) {}

  int NumParameters() const override { return static_cast<int>(null_.cols()); }

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const RVector x = x0_ + null_ * Eigen::Map<const RVector>(parameters, null_.cols());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(pi_ * coords_.to_matrix(x) * pi_));
    if (es.info() != Eigen::Success) return false;
    const RVector neg = es.eigenvalues().cwiseMin(0.0);
    *cost = 0.5 * neg.squaredNorm();
    if (gradient != nullptr) {
      const CMatrix g = pi_ * (es.eigenvectors() * neg.asDiagonal() * es.eigenvectors().adjoint()) * pi_;
      Eigen::Map<RVector>(gradient, null_.cols()) = null_.transpose() * coords_.to_coords(g);
    }
    return true;
  }

 private:
  const HermitianCoordinates& coords_;
  CMatrix pi_;
  RVector x0_;
  RMatrix null_;
};

class StopWhenSmall final : public ceres::IterationCallback {
 public:
  explicit StopWhenSmall(double threshold) : threshold_(threshold) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& summary) override {
    return summary.cost <= threshold_ ? ceres::SOLVER_TERMINATE_SUCCESSFULLY : ceres::SOLVER_CONTINUE;
  }

 private:
  double threshold_;
};

}  // namespace

CompletionResult complete_generator(const SuperOp& p, const CMatrix& drift, double tol, const CompletionOptions& options) {
  CompletionResult result;
  const Index d = p.dim;
  const Index n = d * d;
  if (drift.rows() != n || drift.cols() != n) throw ShapeError("complete_generator: drift has the wrong shape");
  if (d > options.max_dim) {
    std::ostringstream os;
    os << "completion search skipped: dimension " << d << " exceeds " << options.max_dim;
    result.diagnostic = os.str();
    return result;
  }

  const double scale = std::max(1.0, drift.norm());
  const bool real_only = drift.imag().norm() <= 1e-12 * scale && p.matrix.imag().norm() <= 1e-12 * std::max(1.0, p.matrix.norm());
  const CMatrix target = real_only ? CMatrix(drift.real().cast<Complex>()) : drift;
  const HermitianCoordinates coords(n, real_only);
  const Index m = coords.size();

  // Affine constraint P * reshuffle(C(x)) = target, written over the reals.
  RMatrix a = RMatrix::Zero(2 * n * n, m);
  for (Index k = 0; k < m; ++k) {
    RVector unit = RVector::Zero(m);
    unit(k) = 1.0;
    const CMatrix lk = reshuffle(coords.to_matrix(unit), d);
    a.col(k) = split_complex(p.matrix * lk);
  }
  const RVector b = split_complex(target);
  // Rank-revealing QR of A^T: A^T Perm = Q R, so null(A) = span of the trailing columns of Q.
  Eigen::ColPivHouseholderQR<RMatrix> qr(a.transpose());
  qr.setThreshold(1e-12);
  const Index rank = qr.rank();
  const RMatrix q = qr.householderQ();
  const RVector pb = qr.colsPermutation().transpose() * b;
  const RVector y = qr.matrixR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>().transpose().solve(pb.head(rank));
  const RVector x0 = q.leftCols(rank) * y;
  const RMatrix null = q.rightCols(m - rank);
  const double residual = (a * x0 - b).norm();
  if (residual > 1e-8 * scale) {
    std::ostringstream os;
    os << "drift is inconsistent with the projector (residual " << residual << ")";
    result.diagnostic = os.str();
    return result;
  }

  const CVector omega = vec(CMatrix::Identity(d, d)) / std::sqrt(static_cast<double>(d));
  const CMatrix pi = CMatrix::Identity(n, n) - omega * omega.adjoint();
  auto project_affine = [&](const RVector& x) -> RVector { return x0 + null * (null.transpose() * (x - x0)); };

  // Minimise half the squared negative part of the projected Choi matrix over the affine set.
  RVector x = project_affine(coords.to_coords(reshuffle(target, d)));
  if (null.cols() > 0) {
    std::vector<double> z(static_cast<std::size_t>(null.cols()), 0.0);
    ceres::GradientProblemSolver::Options solver;
    solver.line_search_direction_type = ceres::LBFGS;
    solver.max_lbfgs_rank = 30;
    solver.max_num_iterations = options.max_iterations;
    solver.function_tolerance = 1e-18;
    solver.gradient_tolerance = 1e-18;
    solver.parameter_tolerance = 1e-18;
    solver.logging_type = ceres::SILENT;
    StopWhenSmall stop(1e-20);
    solver.callbacks.push_back(&stop);
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(solver, ceres::GradientProblem(new NegativePart(coords, pi, x, null, scale)), z.data(), &summary);
    result.iterations = static_cast<int>(summary.iterations.size());
    x += scale * (null * Eigen::Map<const RVector>(z.data(), null.cols()));
  }
  if (!x.allFinite()) {
    result.diagnostic = "completion search diverged";
    return result;
  }

  // Snap onto the face spanned by the near-kernel of the projected Choi matrix.
  for (int pass = 0; pass < 4 && null.cols() > 0; ++pass) {
    const CMatrix current = hermitian_part(pi * coords.to_matrix(x) * pi);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(current);
    const RVector& ev = es.eigenvalues();
    const double top = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev(0) >= -1e-13 * top) break;
    const double cut = std::max(std::sqrt(-ev(0) * top), -10.0 * ev(0));
    Index wc = 0;
    while (wc < n && ev(wc) < cut) ++wc;
    const CMatrix w = es.eigenvectors().leftCols(wc);
    const CMatrix vr = es.eigenvectors().rightCols(n - wc);
    RMatrix rows(2 * (wc * wc + wc * (n - wc)), null.cols());
    for (Index k = 0; k < null.cols(); ++k) {
      const CMatrix dk = pi * coords.to_matrix(null.col(k)) * pi;
      RVector col(rows.rows());
      col << split_complex(w.adjoint() * dk * w), split_complex(w.adjoint() * dk * vr);
      rows.col(k) = col;
    }
    RVector rhs(rows.rows());
    rhs << split_complex(w.adjoint() * current * w), split_complex(w.adjoint() * current * vr);
    x -= null * min_norm_solve(rows, rhs, 1e-10);
  }

  // Face reduction: move along affine directions that keep the current kernel of the
  // dissipator fixed until another eigenvalue hits zero.
  for (int red = 0; red < options.max_reductions && null.cols() > 0; ++red) {
    const CMatrix c = coords.to_matrix(x);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(pi * c * pi));
    const RVector& ev = es.eigenvalues();
    const double thr = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<Index> pos, zero;
    for (Index i = 0; i < n; ++i) (ev(i) > thr ? pos : zero).push_back(i);
    if (pos.empty()) break;
    CMatrix vr(n, static_cast<Index>(pos.size())), w(n, static_cast<Index>(zero.size()));
    for (std::size_t i = 0; i < pos.size(); ++i) vr.col(static_cast<Index>(i)) = es.eigenvectors().col(pos[i]);
    for (std::size_t i = 0; i < zero.size(); ++i) w.col(static_cast<Index>(i)) = es.eigenvectors().col(zero[i]);

    const Index nz = null.cols();
    std::vector<CMatrix> directions(static_cast<std::size_t>(nz));
    const Index wc = w.cols(), vc = vr.cols();
    RMatrix face(2 * (wc * wc + wc * vc), nz);
    for (Index k = 0; k < nz; ++k) {
      directions[static_cast<std::size_t>(k)] = pi * coords.to_matrix(null.col(k)) * pi;
      const CMatrix& dk = directions[static_cast<std::size_t>(k)];
      const CMatrix c1 = w.adjoint() * dk * w;
      const CMatrix c2 = w.adjoint() * dk * vr;
      RVector col(face.rows());
      col << split_complex(c1), split_complex(c2);
      face.col(k) = col;
    }
    RMatrix z;
    if (face.rows() == 0) {
      z = RMatrix::Identity(nz, nz);
    } else {
      z = null_basis(face, 1e-10);
    }
    if (z.cols() == 0) break;

    RMatrix smap(2 * vc * vc, z.cols());
    for (Index k = 0; k < z.cols(); ++k) {
      CMatrix dz = CMatrix::Zero(n, n);
      for (Index j = 0; j < nz; ++j) dz += z(j, k) * directions[static_cast<std::size_t>(j)];
      smap.col(k) = split_complex(vr.adjoint() * dz * vr);
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> ss(smap.transpose() * smap);
    if (std::sqrt(std::max(ss.eigenvalues()(z.cols() - 1), 0.0)) < 1e-10) break;
    const RVector step = null * (z * ss.eigenvectors().col(z.cols() - 1));

    const CMatrix s = hermitian_part(vr.adjoint() * (pi * coords.to_matrix(step) * pi) * vr);
    RVector inv_sqrt(vc);
    for (Index i = 0; i < vc; ++i) inv_sqrt(i) = 1.0 / std::sqrt(ev(pos[static_cast<std::size_t>(i)]));
    const CMatrix scaled = inv_sqrt.asDiagonal() * s * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<CMatrix> mes(hermitian_part(scaled), Eigen::EigenvaluesOnly);
    const RVector& mu = mes.eigenvalues();

    bool have = false;
    RVector best;
    double best_key = 0.0;
    for (double sign : {1.0, -1.0}) {
      const double reach = (-sign * mu).maxCoeff();
      if (reach <= 1e-14 || 1.0 / reach > 1e2 * std::max(scale, x.norm())) continue;
      const RVector candidate = x + (sign / reach) * step;
      // Deterministic tie-break between the two boundary points.
      const double key = coords.to_matrix(candidate).sum().real();
      if (!have || key > best_key + 1e-12) {
        best = candidate;
        best_key = key;
        have = true;
      }
    }
    if (!have) break;
    x = project_affine(best);
    result.reductions = red + 1;
  }

  LiouvillianMatrix l{d, reshuffle(coords.to_matrix(x), d)};
  const GeneratorReport report = is_generator(l, tol);
  if (!report.ok()) {
    std::ostringstream os;
    os << "completion search found no generator (min projected Choi eigenvalue " << report.min_projected_eigenvalue
       << " after " << result.iterations << " iterations)";
    result.diagnostic = os.str();
    return result;
  }
  result.generator = l;
  return result;
}

}  // namespace contlim
