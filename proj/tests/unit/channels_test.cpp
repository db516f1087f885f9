#include "check.hpp"
#include "contlim/channels.hpp"
#include "contlim/random.hpp"

using namespace contlim;
using contlim::testing::dist;

namespace {

KrausChannel random_channel(Rng& rng, Index dim, Index kraus) {
  const CMatrix v = random_isometry(rng, dim * kraus, dim);
  KrausChannel ch{dim, {}};
  for (Index k = 0; k < kraus; ++k) ch.kraus.push_back(v.middleRows(k * dim, dim));
  return ch;
}

CMatrix act(const KrausChannel& ch, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(ch.dim, ch.dim);
  for (const auto& k : ch.kraus) out += k * rho * k.adjoint();
  return out;
}

}  // namespace

TEST_CASE("vec is row-major and intertwines left and right multiplication") {
  Rng rng(10);
  const CMatrix x = random_ginibre(rng, 3, 3), a = random_ginibre(rng, 3, 3), b = random_ginibre(rng, 3, 3);
  const CVector v = vec(x);
  CHECK(std::abs(v(1) - x(0, 1)) < 1e-15);
  CHECK(std::abs(v(3) - x(1, 0)) < 1e-15);
  CHECK(dist(unvec(v, 3), x) < 1e-15);
  CHECK((vec(a * x * b.adjoint()) - kron(a, b.conjugate()) * v).norm() < 1e-12);
}

TEST_CASE("reshuffle is an involution") {
  Rng rng(11);
  const CMatrix m = random_ginibre(rng, 9, 9);
  CHECK(dist(reshuffle(reshuffle(m, 3), 3), m) < 1e-15);
}

TEST_CASE("superoperator agrees with the Kraus action") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const KrausChannel ch = random_channel(rng, 3, 2);
    const SuperOp e = kraus_to_superop(ch);
    const CMatrix rho = random_density(rng, 3);
    CHECK(dist(contlim::apply(e, rho), act(ch, rho)) < 1e-12);
  }
}

TEST_CASE("Kraus and Choi round trips") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const SuperOp e = kraus_to_superop(random_channel(rng, 3, 3));
    CHECK(dist(kraus_to_superop(superop_to_kraus(e)).matrix, e.matrix) < 1e-10);
    CHECK(dist(from_choi(choi(e)).matrix, e.matrix) < 1e-14);
    const CptpReport rep = is_cptp(e);
    CHECK(rep.ok());
    CHECK(rep.hermiticity_preserving);
  }
}

TEST_CASE("Choi matrix of the identity channel is the unnormalised Bell projector") {
  const ChoiMatrix c = choi(SuperOp::identity(2));
  CVector omega = CVector::Zero(4);
  omega(0) = 1.0;
  omega(3) = 1.0;
  CHECK(dist(c.matrix, omega * omega.adjoint()) < 1e-15);
}

TEST_CASE("is_cptp flags non-CP and non-TP maps") {
  KrausChannel scaled{2, {CMatrix(2.0 * CMatrix::Identity(2, 2))}};
  CHECK_FALSE(is_cptp(kraus_to_superop(scaled)).trace_preserving);

  SuperOp transpose{2, CMatrix::Zero(4, 4)};
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) transpose.matrix(i * 2 + j, j * 2 + i) = 1.0;
  const CptpReport rep = is_cptp(transpose);
  CHECK(rep.trace_preserving);
  CHECK_FALSE(rep.completely_positive);
  CHECK(rep.min_choi_eigenvalue < -0.5);
}

TEST_CASE("apply_dual is the Hilbert-Schmidt adjoint") {
  Rng rng(14);
  const SuperOp e = kraus_to_superop(random_channel(rng, 3, 2));
  const CMatrix rho = random_ginibre(rng, 3, 3), x = random_ginibre(rng, 3, 3);
  CHECK(std::abs((x.adjoint() * contlim::apply(e, rho)).trace() - (apply_dual(e, x).adjoint() * rho).trace()) < 1e-12);
}

TEST_CASE("builtin channels") {
  Rng rng(15);
  const CMatrix u = random_unitary(rng, 3);
  const SuperOp pinch = kraus_to_superop(builtin(Pinching{u}));
  CHECK(is_projector_channel(pinch));
  const CMatrix rho = random_density(rng, 3);
  const CMatrix out = u.adjoint() * contlim::apply(pinch, rho) * u;
  CHECK(dist(out, CMatrix(out.diagonal().asDiagonal())) < 1e-12);

  const CMatrix sigma = random_density(rng, 3);
  const SuperOp dep = kraus_to_superop(builtin(Depolarize{sigma}));
  CHECK(is_projector_channel(dep));
  CHECK(dist(contlim::apply(dep, rho), sigma) < 1e-12);

  CHECK(dist(kraus_to_superop(builtin(Identity{3})).matrix, SuperOp::identity(3).matrix) < 1e-15);
  CHECK_FALSE(is_projector_channel(kraus_to_superop(random_channel(rng, 3, 2))));
}

TEST_CASE("compose and power") {
  Rng rng(16);
  const KrausChannel a = random_channel(rng, 2, 2), b = random_channel(rng, 2, 2);
  const SuperOp ea = kraus_to_superop(a), eb = kraus_to_superop(b);
  const CMatrix rho = random_density(rng, 2);
  CHECK(dist(contlim::apply(compose(ea, eb), rho), act(a, act(b, rho))) < 1e-12);
  CHECK(dist(power(ea, 3).matrix, ea.matrix * ea.matrix * ea.matrix) < 1e-12);
}

TEST_CASE("Pauli basis of the identity and of full depolarisation") {
  CHECK(dist(to_pauli_basis(SuperOp::identity(2)), CMatrix::Identity(4, 4)) < 1e-14);
  const SuperOp dep = kraus_to_superop(depolarizing_channel(CMatrix::Identity(2, 2) / 2.0));
  CMatrix want = CMatrix::Zero(4, 4);
  want(0, 0) = 1.0;
  CHECK(dist(to_pauli_basis(dep), want) < 1e-14);
}

TEST_CASE("malformed channels are rejected") {
  KrausChannel bad{2, {CMatrix::Identity(3, 3)}};
  CHECK_THROWS_AS(bad.validate(), ShapeError);
  CHECK_THROWS_AS(reshuffle(CMatrix::Identity(5, 5), 2), ShapeError);
}
