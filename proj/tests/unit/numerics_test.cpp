#include <cmath>

#include "check.hpp"
#include "contlim/random.hpp"

using namespace contlim;
using contlim::testing::dist;

TEST_CASE("expm of diagonal and nilpotent matrices") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = Complex(0.0, M_PI);
  d(2, 2) = -2.5;
  const CMatrix e = expm(d);
  CHECK(std::abs(e(0, 0) - std::exp(1.0)) < 1e-13);
  CHECK(std::abs(e(1, 1) + 1.0) < 1e-13);
  CHECK(std::abs(e(2, 2) - std::exp(-2.5)) < 1e-13);

  CMatrix n = CMatrix::Zero(2, 2);
  n(0, 1) = 3.0;
  CMatrix want = CMatrix::Identity(2, 2);
  want(0, 1) = 3.0;
  CHECK(dist(expm(n), want) < 1e-14);
}

TEST_CASE("expm is a group homomorphism on commuting arguments") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_ginibre(rng, 4, 4);
    CHECK(dist(expm(a) * expm(-a), CMatrix::Identity(4, 4)) < 1e-10);
    CHECK(dist(expm(2.0 * a), expm(a) * expm(a)) < 1e-9 * expm(2.0 * a).norm());
  }
}

TEST_CASE("expm refuses huge norms") {
  CHECK_THROWS_AS(expm(CMatrix::Identity(2, 2) * 1e6), NumericalError);
}

TEST_CASE("logm inverts expm near the identity") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = 0.3 * random_ginibre(rng, 3, 3);
    CHECK(dist(logm_principal(expm(a)), a) < 1e-10);
  }
}

TEST_CASE("logm rejects the negative axis") {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(logm_principal(m), BranchCutError);
}

TEST_CASE("null and range spaces") {
  Rng rng(3);
  const CMatrix b = random_ginibre(rng, 5, 2);
  const CMatrix m = b * random_ginibre(rng, 2, 5);
  const SubspaceBasis ker = null_space(m, 1e-10);
  const SubspaceBasis ran = range_space(m, 1e-10);
  CHECK(ker.dim() == 3);
  CHECK(ran.dim() == 2);
  CHECK((m * ker.vectors).norm() < 1e-10);
  CHECK(dist(ker.vectors.adjoint() * ker.vectors, CMatrix::Identity(3, 3)) < 1e-12);
  CHECK((ran.vectors * ran.vectors.adjoint() * b - b).norm() < 1e-10);
  CHECK(numerical_rank(m, 1e-10) == 2);
}

TEST_CASE("oblique projector is idempotent with the requested range and kernel") {
  Rng rng(4);
  const CMatrix basis = random_ginibre(rng, 4, 4);
  CMatrix diag = CMatrix::Zero(4, 4);
  diag(0, 0) = 1.0;
  diag(1, 1) = 1.0;
  const CMatrix proj = basis * diag * basis.inverse();
  const CMatrix p = oblique_projector(range_space(proj, 1e-10), null_space(proj, 1e-10));
  CHECK(dist(p, proj) < 1e-9);
  CHECK(dist(p * p, p) < 1e-9);
}

TEST_CASE("kron mixed product") {
  Rng rng(5);
  const CMatrix a = random_ginibre(rng, 2, 3), b = random_ginibre(rng, 3, 2);
  const CMatrix c = random_ginibre(rng, 3, 2), d = random_ginibre(rng, 2, 2);
  CHECK(kron(a, b).rows() == 6);
  CHECK(kron(a, b).cols() == 6);
  CHECK(dist(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-12);
}

TEST_CASE("hermitian helpers") {
  Rng rng(6);
  const CMatrix g = random_ginibre(rng, 3, 3);
  CHECK(is_hermitian(hermitian_part(g), 1e-14));
  CHECK_FALSE(is_hermitian(g, 1e-6));
  CHECK(is_proportional_to_identity(CMatrix(Complex(2.0, 1.0) * CMatrix::Identity(3, 3)), 1e-12));
  CHECK_FALSE(is_proportional_to_identity(g, 1e-6));
}

TEST_CASE("cluster_values groups transitively") {
  const std::vector<Complex> v{1.0, 1.0 + 5e-8, 1.0 + 1e-7, 0.5, 0.5 + 1e-3};
  const auto groups = cluster_values(v);
  REQUIRE(groups.size() == 3);
  std::size_t total = 0;
  for (const auto& g : groups) total += g.size();
  CHECK(total == v.size());
}

TEST_CASE("canonical_basis depends only on the span") {
  Rng rng(7);
  const CMatrix span = random_ginibre(rng, 5, 2);
  const CMatrix mix = random_ginibre(rng, 2, 2);
  const CMatrix b1 = canonical_basis(span), b2 = canonical_basis(span * mix);
  CHECK(dist(b1, b2) < 1e-9);
  CHECK(dist(b1.adjoint() * b1, CMatrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("sorted_eigenvalues orders by modulus") {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 0.1;
  m(1, 1) = -2.0;
  m(2, 2) = 1.0;
  const auto ev = sorted_eigenvalues(m);
  REQUIRE(ev.size() == 3);
  CHECK(std::abs(ev[0] + 2.0) < 1e-14);
  CHECK(std::abs(ev[1] - 1.0) < 1e-14);
  CHECK(std::abs(ev[2] - 0.1) < 1e-14);
}

TEST_CASE("random ensembles have the advertised structure") {
  Rng rng(8);
  const CMatrix u = random_unitary(rng, 4);
  CHECK(dist(u.adjoint() * u, CMatrix::Identity(4, 4)) < 1e-12);
  const CMatrix v = random_isometry(rng, 5, 3);
  CHECK(dist(v.adjoint() * v, CMatrix::Identity(3, 3)) < 1e-12);
  const CMatrix rho = random_density(rng, 3);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
  CHECK(is_hermitian(rho, 1e-12));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}
