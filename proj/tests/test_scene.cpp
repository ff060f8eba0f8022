#include <doctest.h>

#include <json.hpp>

#include "quadpos/scene.hpp"

using namespace quadpos;
using nlohmann::json;

namespace {

const char* kReferenceScene = R"({
  "ellipsoid": {
    "center": [0.0, 0.5, 0.712045],
    "semi_axes": [0.25, 0.25, 0.25],
    "orientation": [1.0, 0.0, 0.0, 0.0]
  },
  "paraboloid": {
    "vertex": [0.0, 0.0, 0.0],
    "orientation": [1.0, 0.0, 0.0, 0.0],
    "a": 1.2,
    "b": 1.5
  }
})";

}  // namespace

TEST_CASE("scene parsing: values, validation, and diagnostics") {
  const SceneFile sc = parse_scene(kReferenceScene);
  CHECK(sc.ellipsoid_center[2] == 0.712045);
  CHECK(sc.ellipsoid_semi_axes[0] == 0.25);
  CHECK(sc.paraboloid_a == 1.2);
  CHECK(sc.paraboloid_b == 1.5);
  CHECK(sc.ellipsoid().semi_axes[0] == 0.25);

  SUBCASE("unknown fields are rejected, with the field named") {
    json j = json::parse(kReferenceScene);
    j["ellipsoid"]["color"] = "red";
    try {
      parse_scene(j.dump());
      FAIL("expected InvalidParameters");
    } catch (const InvalidParameters& e) {
      CHECK(std::string(e.what()).find("ellipsoid.color") != std::string::npos);
    }
  }
  SUBCASE("missing fields are rejected") {
    json j = json::parse(kReferenceScene);
    j["paraboloid"].erase("a");
    CHECK_THROWS_AS(parse_scene(j.dump()), InvalidParameters);
  }
  SUBCASE("non-positive paraboloid axis") {
    json j = json::parse(kReferenceScene);
    j["paraboloid"]["a"] = -1.0;
    try {
      parse_scene(j.dump());
      FAIL("expected InvalidParameters");
    } catch (const InvalidParameters& e) {
      CHECK(std::string(e.what()).find("paraboloid.a") != std::string::npos);
    }
  }
  SUBCASE("quaternion norm gate at 1e-6, then renormalized") {
    json j = json::parse(kReferenceScene);
    j["ellipsoid"]["orientation"] = {1.0 + 1e-7, 0.0, 0.0, 0.0};
    const SceneFile ok = parse_scene(j.dump());
    CHECK(ok.ellipsoid_orientation.norm() == doctest::Approx(1.0).epsilon(1e-14));
    j["ellipsoid"]["orientation"] = {1.001, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(parse_scene(j.dump()), InvalidParameters);
  }
  SUBCASE("malformed document") {
    CHECK_THROWS_AS(parse_scene("{not json"), InvalidParameters);
    CHECK_THROWS_AS(parse_scene("[1,2,3]"), InvalidParameters);
  }
  SUBCASE("non-finite numbers never enter") {
    json j = json::parse(kReferenceScene);
    j["ellipsoid"]["center"][0] = "1e999";  // wrong type; Infinity cannot be JSON anyway
    CHECK_THROWS_AS(parse_scene(j.dump()), InvalidParameters);
  }
}

TEST_CASE("scene serialization round-trips exactly") {
  const SceneFile sc = parse_scene(kReferenceScene);
  const SceneFile back = parse_scene(scene_to_json(sc));
  CHECK(back.ellipsoid_center == sc.ellipsoid_center);
  CHECK(back.ellipsoid_semi_axes == sc.ellipsoid_semi_axes);
  CHECK(back.ellipsoid_orientation.coeffs() == sc.ellipsoid_orientation.coeffs());
  CHECK(back.paraboloid_vertex == sc.paraboloid_vertex);
  CHECK(back.paraboloid_a == sc.paraboloid_a);
  CHECK(back.paraboloid_b == sc.paraboloid_b);
}

TEST_CASE("12-significant-digit rounding") {
  CHECK(round_sig12(1.0 / 3.0) == 0.333333333333);
  CHECK(round_sig12(-3.548085020828302) == -3.54808502083);
  CHECK(round_sig12(0.81) == 0.81);
  CHECK(fmt12(0.25) == "0.25");
  CHECK(fmt12(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("report JSON carries the documented schema") {
  const SceneFile sc = parse_scene(kReferenceScene);
  const Classification<double> c = classify(sc.ellipsoid(), sc.paraboloid());
  const json rep = json::parse(report_to_json(c, sc));

  CHECK(rep.at("position") == "I");
  REQUIRE(rep.at("roots").is_array());
  CHECK(rep.at("roots").size() == 3);
  bool has_double = false;
  for (const auto& r : rep.at("roots"))
    if (r.at("multiplicity") == 2 && std::abs(r.at("value").get<double>() + 1.44) < 1e-5)
      has_double = true;
  CHECK(has_double);
  CHECK(rep.at("complex_pairs") == 0);
  REQUIRE(rep.at("coefficients").size() == 4);
  CHECK(rep.at("coefficients")[0].get<double>() == doctest::Approx(6.53818));
  CHECK(rep.at("coefficients")[3].get<double>() == doctest::Approx(0.81));
  CHECK(rep.at("smallness").at("satisfied") == true);
  CHECK(rep.at("tangent_point").is_null());

  // the echoed scene re-ingests to the identical verdict
  const SceneFile again = parse_scene(rep.at("scene").dump());
  const Classification<double> c2 = classify(again.ellipsoid(), again.paraboloid());
  CHECK(c2.position == c.position);
  CHECK(c2.quartic.c2 == c.quartic.c2);
}

TEST_CASE("text report names the essentials") {
  const SceneFile sc = parse_scene(kReferenceScene);
  const Classification<double> c = classify(sc.ellipsoid(), sc.paraboloid());
  const std::string text = report_to_text(c);
  CHECK(text.find("position: I") != std::string::npos);
  CHECK(text.find("(x2)") != std::string::npos);
  CHECK(text.find("delta:") != std::string::npos);
  CHECK(text.find("smallness: satisfied") != std::string::npos);
}

TEST_CASE("tangent point appears in the report when there is one") {
  const SceneFile tangent = parse_scene(R"({
    "ellipsoid": {"center": [0, 0, 0.4], "semi_axes": [0.4, 0.4, 0.4],
                  "orientation": [1, 0, 0, 0]},
    "paraboloid": {"vertex": [0, 0, 0], "orientation": [1, 0, 0, 0], "a": 1.0, "b": 2.0}
  })");
  const Classification<double> c = classify(tangent.ellipsoid(), tangent.paraboloid());
  REQUIRE(c.position == Position::TI);
  const json rep = json::parse(report_to_json(c, tangent));
  REQUIRE(rep.at("tangent_point").is_array());
  CHECK(std::abs(rep.at("tangent_point")[0].get<double>()) < 1e-6);
  const std::string text = report_to_text(c);
  CHECK(text.find("tangent point") != std::string::npos);
}
