#include <cstdlib>

#include "check.hpp"
#include "contlim/io.hpp"
#include "support/fixtures.hpp"

using namespace contlim;
using contlim::testing::dist;

TEST_CASE("matrices round trip bit-exactly") {
  Rng rng(80);
  const CMatrix m = random_ginibre(rng, 3, 2);
  const Json j = parse_json(to_json(m).dump());
  CHECK(matrix_from_json(j) == m);
  CHECK(matrix_from_json(parse_json("[[1, 2], [3, [0, 1]]]"))(1, 1) == Complex(0.0, 1.0));
  CHECK_THROWS_AS(matrix_from_json(parse_json("[[1, 2], [3]]")), ShapeError);
  CHECK_THROWS_AS(matrix_from_json(j, 2, 2), ShapeError);
}

TEST_CASE("structures round trip") {
  Rng rng(81);
  const auto s = contlim::testing::random_divisible(rng, 4, 0.5);

  const MpsTensor t = mps_from_json(parse_json(to_json(s.tensor).dump()));
  CHECK(t.spacing == 0.5);
  CHECK(dist(transfer_matrix(t).matrix, transfer_matrix(s.tensor).matrix) == 0.0);

  const ProjectorCanonicalForm cf = canonical_form_from_json(parse_json(to_json(s.form).dump()));
  CHECK(dist(build_projector(cf).matrix, s.projector.matrix) == 0.0);

  const Lindblad g = lindblad_from_json(parse_json(to_json(s.generator).dump()));
  CHECK(dist(liouvillian_matrix(g).matrix, liouvillian_matrix(s.generator).matrix) == 0.0);

  const KrausChannel k = superop_to_kraus(s.channel);
  const KrausChannel k2 = channel_from_json(parse_json(to_json(k).dump()));
  CHECK(dist(kraus_to_superop(k2).matrix, kraus_to_superop(k).matrix) == 0.0);

  const GeneralizedCmps gc = from_verdict(is_infinitely_divisible(s.channel, 0.5));
  const GeneralizedCmps gc2 = gcmps_from_json(parse_json(to_json(gc).dump()));
  CHECK(dist(transfer(gc2, 1.0).matrix, transfer(gc, 1.0).matrix) == 0.0);
}

TEST_CASE("analyze input dispatch") {
  CHECK(std::holds_alternative<MpsTensor>(analyze_input_from_json(to_json(presets::aklt()))));
  CHECK(std::holds_alternative<KrausChannel>(analyze_input_from_json(to_json(identity_channel(2)))));
  CHECK_THROWS_AS(analyze_input_from_json(parse_json("{\"dim\": 2}")), ShapeError);
}

TEST_CASE("malformed JSON reports the position") {
  try {
    parse_json("{\n  \"a\": [1,\n  }");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(channel_from_json(parse_json("{\"kraus\": []}")), ShapeError);
}

TEST_CASE("verdict serialisation") {
  const DivisibilityVerdict v = analyze(transfer_matrix(presets::aklt()), 1.0);
  const Json j = to_json(v);
  CHECK(j["status"] == "not_divisible");
  CHECK(j["generator"].is_null());
  CHECK(j["coarse"]["p"] == 2);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}
