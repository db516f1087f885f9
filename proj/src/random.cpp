#include "contlim/random.hpp"

namespace contlim {

CMatrix random_ginibre(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

CMatrix random_hermitian(Rng& rng, Index n) { return hermitian_part(random_ginibre(rng, n, n)); }

CMatrix random_isometry(Rng& rng, Index rows, Index cols) {
  const CMatrix g = random_ginibre(rng, rows, cols);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR();
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_unitary(Rng& rng, Index n) { return random_isometry(rng, n, n); }

CMatrix random_density(Rng& rng, Index n) {
  const CMatrix g = random_ginibre(rng, n, n);
  CMatrix rho = g * g.adjoint() + 1e-3 * CMatrix::Identity(n, n);
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

}  // namespace contlim
