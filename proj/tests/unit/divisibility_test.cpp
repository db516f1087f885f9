#include <cmath>

#include "check.hpp"
#include "contlim/divisibility.hpp"
#include "contlim/mps.hpp"
#include "support/fixtures.hpp"

using namespace contlim;
using contlim::testing::dist;
using contlim::testing::random_divisible;

TEST_CASE("status names") {
  CHECK(std::string(to_string(DivisibilityStatus::divisible)) == "divisible");
  CHECK(std::string(to_string(DivisibilityStatus::markovian)) == "markovian");
  CHECK(std::string(to_string(DivisibilityStatus::not_divisible)) == "not_divisible");
  CHECK(std::string(to_string(DivisibilityStatus::inconclusive)) == "inconclusive");
}

TEST_CASE("projector extraction recovers P from P e^{aL}") {
  Rng rng(40);
  for (int trial = 0; trial < 15; ++trial) {
    const auto s = random_divisible(rng, 4, 0.7);
    CHECK(dist(extract_projector(s.channel).matrix, s.projector.matrix) < 1e-8);
  }
}

TEST_CASE("random divisible channels are reconstructed") {
  Rng rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    const double a = 0.5 + 0.1 * trial;
    const auto s = random_divisible(rng, 4, a);
    const DivisibilityVerdict v = is_infinitely_divisible(s.channel, a);
    if (v.status == DivisibilityStatus::inconclusive) continue;
    REQUIRE(v.generator.has_value());
    CHECK(is_generator(*v.generator).ok());
    CHECK(check_plp(*v.projector, *v.generator));
    CHECK(dist(v.projector->matrix * expm(a * v.generator->matrix), s.channel.matrix) < 1e-7);
    CHECK(v.spacing == a);
  }
}

TEST_CASE("the segment property of divisible channels") {
  Rng rng(42);
  const auto s = random_divisible(rng, 4, 1.0);
  const DivisibilityVerdict v = is_infinitely_divisible(s.channel, 1.0);
  REQUIRE(v.generator.has_value());
  const CMatrix& p = v.projector->matrix;
  const CMatrix& l = v.generator->matrix;
  CHECK(dist(p * expm(0.4 * l) * p * expm(0.6 * l), s.channel.matrix) < 1e-8);
}

TEST_CASE("invertible Markovian channels") {
  const SuperOp e = SuperOp::identity(3);
  const DivisibilityVerdict v = is_infinitely_divisible(e, 1.0);
  CHECK(v.status == DivisibilityStatus::markovian);
  CHECK(v.generator->matrix.norm() < 1e-10);
}

TEST_CASE("odd negative eigenvalues make a channel indivisible") {
  const SuperOp flip = transfer_matrix(presets::antiferromagnet());
  CHECK(is_infinitely_divisible(flip, 1.0).status == DivisibilityStatus::not_divisible);
  const SuperOp aklt = transfer_matrix(presets::aklt());
  const DivisibilityVerdict v = is_infinitely_divisible(aklt, 1.0);
  CHECK(v.status == DivisibilityStatus::not_divisible);
  CHECK_FALSE(v.diagnostics.empty());
}

TEST_CASE("coarse graining repairs the AKLT channel") {
  const SuperOp aklt = transfer_matrix(presets::aklt());
  const auto coarse = coarse_divisibility(aklt, 4);
  REQUIRE(coarse.has_value());
  CHECK(coarse->power == 2);
  CHECK(dist(expm(coarse->generator.matrix), power(aklt, 2).matrix) < 1e-9);
  const DivisibilityVerdict v = analyze(aklt, 1.0);
  CHECK(v.status == DivisibilityStatus::not_divisible);
  REQUIRE(v.coarse.has_value());
  CHECK(v.coarse->power == 2);
  CHECK_THROWS_AS(coarse_divisibility(aklt, 1), PreconditionError);
}

TEST_CASE("check_plp detects generators that leak out of the support") {
  const SuperOp p = kraus_to_superop(pinching_channel(CMatrix::Identity(2, 2)));
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  CHECK_FALSE(check_plp(p, liouvillian_matrix({2, x, {}})));
  CHECK(check_plp(p, liouvillian_matrix({2, z, {}})));
  CHECK(check_plp(p, liouvillian_matrix({2, CMatrix::Zero(2, 2), {x}})));
}

TEST_CASE("completion search finds a generator for the bracket channel") {
  const SuperOp e = transfer_matrix(presets::bracket(1.0));
  const DivisibilityVerdict v = is_infinitely_divisible(e, 1.0);
  REQUIRE(v.status == DivisibilityStatus::divisible);
  CHECK(v.completed_by_search);
  CHECK(is_generator(*v.generator).ok());
  CHECK(dist(v.projector->matrix * expm(v.generator->matrix), e.matrix) < 1e-8);
}

TEST_CASE("completion returns a generator whose drift matches") {
  Rng rng(43);
  const auto s = random_divisible(rng, 3, 1.0);
  const CMatrix drift = s.projector.matrix * liouvillian_matrix(s.generator).matrix;
  const CompletionResult res = complete_generator(s.projector, drift);
  REQUIRE(res.generator.has_value());
  CHECK(is_generator(*res.generator).ok());
  CHECK(dist(s.projector.matrix * res.generator->matrix, drift) < 1e-8);
}

TEST_CASE("non-CPTP input is rejected") {
  SuperOp e{2, 2.0 * CMatrix::Identity(4, 4)};
  CHECK_THROWS_AS(is_infinitely_divisible(e, 1.0), PreconditionError);
  CHECK_THROWS_AS(is_infinitely_divisible(SuperOp::identity(2), 0.0), PreconditionError);
}
