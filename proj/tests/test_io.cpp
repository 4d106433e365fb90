#include <gtest/gtest.h>

#include <cmath>

#include "nbmp/io.hpp"

using namespace nbmp;

namespace {

const char* kTanhSpec = R"({
  "n": 2, "m": 2, "d": [3, 4], "l": [2, 2], "theta": 0,
  "sigma": [240, 32], "C": [[1, 27], [0.4, 2]]
})";

}  // namespace

TEST(SystemSpecJson, NestedAndFlatMatricesAgree) {
  const SystemSpec a = system_spec_from_json(parse_json(kTanhSpec));
  json flat = parse_json(kTanhSpec);
  flat["C"] = {1, 27, 0.4, 2};
  const SystemSpec b = system_spec_from_json(flat);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.reaction.C(1, 0), 0.4);
  EXPECT_EQ(a.l, (Vector{2, 2}));
}

TEST(SystemSpecJson, RoundTrips) {
  const SystemSpec a = system_spec_from_json(parse_json(kTanhSpec));
  EXPECT_EQ(system_spec_from_json(parse_json(to_json(a).dump())), a);
}

TEST(SystemSpecJson, Defaults) {
  const SystemSpec s = system_spec_from_json(parse_json(R"({"d":[1],"sigma":[2],"C":[[1]]})"));
  EXPECT_EQ(s.n, 1u);
  EXPECT_EQ(s.m, 1.0);
  EXPECT_EQ(s.l, (Vector{1}));
  EXPECT_EQ(s.theta, 0.0);
}

TEST(SystemSpecJson, ErrorsNameTheField) {
  try {
    system_spec_from_json(parse_json(R"({"d":[1,2,3],"sigma":[1,1],"C":[[1,2],[3,1]]})"));
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("d has length 3"), std::string::npos) << e.what();
  }
  try {
    system_spec_from_json(parse_json(R"({"d":[1,2],"sigma":[1,1],"C":[[1,2],[3]]})"));
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("C row 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(system_spec_from_json(parse_json(R"({"d":[1,2],"C":[[1,2],[3,1]]})")), UsageError);
  EXPECT_THROW(system_spec_from_json(parse_json(R"({"d":[1,"x"],"sigma":[1,1],"C":[1,2,3,1]})")),
               UsageError);
  EXPECT_THROW(system_spec_from_json(parse_json(R"({"n":3,"d":[1,2],"sigma":[1,1],"C":[1,2,3,1]})")),
               ShapeError);
}

TEST(ParseJson, ReportsLineAndColumn) {
  try {
    parse_json("{\n  \"d\": [1, 2,\n  oops]\n}", "spec.json");
    FAIL();
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("spec.json"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 3"), std::string::npos) << msg;
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(240), "240");
  EXPECT_EQ(format_double(1.0 / 3), "0.3333333333333333");
  for (double v : {M_PI, 1e-300, 123456.789, -2.5e17}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(BoundsJson, RoundTrips) {
  BoundsResult b{1.7013576400105292, 254.55844123139974, 1, BoundsBranch::two_species_m2};
  const BoundsResult c = bounds_result_from_json(parse_json(to_json(b).dump()));
  EXPECT_EQ(c.lower, b.lower);
  EXPECT_EQ(c.upper, b.upper);
  EXPECT_EQ(c.chi, b.chi);
  EXPECT_EQ(c.branch, b.branch);
}

TEST(BarrierJson, RoundTrips) {
  const auto e = build_upper_barrier(Vector{1, 2}, Vector{3, 4}, Vector{1, 1}, 2);
  const json j = to_json(e);
  for (const char* k : {"lambda1", "eta1", "lambda2", "eta2", "orientation"}) EXPECT_TRUE(j.contains(k)) << k;
  const auto f = barrier_envelope_from_json(parse_json(j.dump()));
  EXPECT_EQ(f.lambda1, e.lambda1);
  EXPECT_EQ(f.eta2, e.eta2);
  EXPECT_EQ(f.orientation, Orientation::upper);
  EXPECT_EQ(f.alpha, e.alpha);
  EXPECT_EQ(f.first_tangent, e.first_tangent);
}

TEST(ExactJson, RoundTrips) {
  const auto t = tanh_family(3.0, 4.0, 1.0, 2.0);
  EXPECT_EQ(tanh_solution_from_json(parse_json(to_json(t).dump())), t);
  const auto c = cos_family(CosFreeParameters<double>{
      {-0.1, 1.0 / 11, 1.0 / 12}, 2.0, {1, 1, 1}, 1067.0 / 60, 1, 175.0 / 11, 6.0 / 11, 15, 11.0 / 12});
  EXPECT_EQ(cos_solution_from_json(parse_json(to_json(c).dump())), c);
}

TEST(NonexistenceJson, ParamsAndVerdictRoundTrip) {
  const json doc = parse_json(R"({"d":[1,1,1],"sigma":[1,1,0.05],"C":[[1,0.5,1],[0.5,1,1],[15,0.9,1]],
                                  "w_minus_inf":0,"H4":false})");
  const auto p = three_species_from_json(doc);
  EXPECT_EQ(p.w_minus_inf, 0.0);
  EXPECT_FALSE(p.w_plus_inf.has_value());
  const auto a = assumptions_from_json(doc);
  EXPECT_FALSE(a.H4);
  EXPECT_TRUE(a.H0);
  const auto v = check_nonexistence(p, a);
  const json out = to_json(v);
  const auto back = nonexistence_verdict_from_json(parse_json(out.dump()));
  EXPECT_EQ(to_json(back), out);
  EXPECT_THROW(three_species_from_json(parse_json(R"({"d":[1,1],"sigma":[1,1,1],"C":[1,1,1,1,1,1,1,1,1]})")),
               ShapeError);
}
