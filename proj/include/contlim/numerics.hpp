#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "contlim/errors.hpp"

namespace contlim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kEigenGap = 1e-7;
inline constexpr double kBranchCutMargin = 1e-6;
inline constexpr double kDefectiveCondition = 1e8;
// expm refuses inputs whose 1-norm exceeds this bound.
inline constexpr double kExpmNormLimit = 1e5;

struct SubspaceBasis {
  Index ambient_dim = 0;
  CMatrix vectors;  // ambient_dim x dim, orthonormal columns
  double tol_used = 0.0;

  Index dim() const { return vectors.cols(); }
  bool empty() const { return vectors.cols() == 0; }
};

CMatrix expm(const CMatrix& m, double tol = 1e-12);
CMatrix logm_principal(const CMatrix& m);

SubspaceBasis null_space(const CMatrix& m, double tol);
SubspaceBasis range_space(const CMatrix& m, double tol);
CMatrix oblique_projector(const SubspaceBasis& range, const SubspaceBasis& kernel);

CMatrix kron(const CMatrix& a, const CMatrix& b);
Index numerical_rank(const CMatrix& m, double tol);
bool all_finite(const CMatrix& m);
void require_square(const CMatrix& m, const char* what);

// Hermitian part (M + M^dagger) / 2.
CMatrix hermitian_part(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol);
// ||M - (tr M / n) I||_F <= tol * max(1, ||M||_F)
bool is_proportional_to_identity(const CMatrix& m, double tol);

// Groups of indices whose eigenvalues lie within kEigenGap of each other (transitively).
std::vector<std::vector<Index>> cluster_values(const std::vector<Complex>& values, double gap = kEigenGap);

// Reproducible orthonormal basis of span(vectors): pivoted QR of the projector onto the
// span, with each column rotated so that its largest entry is real and positive.
CMatrix canonical_basis(const CMatrix& vectors);

// Spectrum sorted by descending modulus, then by argument.
std::vector<Complex> sorted_eigenvalues(const CMatrix& m);

}  // namespace contlim
