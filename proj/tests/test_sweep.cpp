#include <doctest.h>

#include "quadpos/sweep.hpp"

using namespace quadpos;
using V3 = Vec3<double>;

namespace {

EllipsoidParams<double> ball(double r) {
  return ellipsoid_from_sphere(SphereParams<double>(V3(0, 0, 0), r));
}

}  // namespace

TEST_CASE("on-axis descent hits all four transitions at |z_c| = r") {
  const auto res = sweep(ball(0.4), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, -5),
                         V3(0, 0, 5), 100, 1e-7);
  CHECK(res.smallness.satisfied);
  REQUIRE(res.events.size() == 4);

  const Position seq[][2] = {{Position::E, Position::TE},
                             {Position::TE, Position::C},
                             {Position::C, Position::TI},
                             {Position::TI, Position::I}};
  for (int i = 0; i < 4; ++i) {
    CHECK(res.events[i].from == seq[i][0]);
    CHECK(res.events[i].to == seq[i][1]);
    CHECK(res.events[i].bracket_width <= 1e-7);
  }
  // z_c(t) = -5 + 10 t crosses -r at t = 0.46 and +r at t = 0.54
  CHECK(res.events[0].t == doctest::Approx(0.46).epsilon(1e-6));
  CHECK(res.events[1].t == doctest::Approx(0.46).epsilon(1e-6));
  CHECK(res.events[2].t == doctest::Approx(0.54).epsilon(1e-6));
  CHECK(res.events[3].t == doctest::Approx(0.54).epsilon(1e-6));
  for (size_t i = 1; i < res.events.size(); ++i)
    CHECK(res.events[i].t >= res.events[i - 1].t);
}

TEST_CASE("doubling steps keeps the event sequence, brackets no wider") {
  const auto coarse = sweep(ball(0.4), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, -5),
                            V3(0, 0, 5), 100, 1e-6);
  const auto fine = sweep(ball(0.4), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, -5),
                          V3(0, 0, 5), 200, 1e-6);
  REQUIRE(coarse.events.size() == fine.events.size());
  for (size_t i = 0; i < coarse.events.size(); ++i) {
    CHECK(coarse.events[i].from == fine.events[i].from);
    CHECK(coarse.events[i].to == fine.events[i].to);
    CHECK(fine.events[i].bracket_width <= coarse.events[i].bracket_width + 1e-12);
    CHECK(fine.events[i].t == doctest::Approx(coarse.events[i].t).epsilon(1e-5));
  }
}

TEST_CASE("interior-only path yields no events") {
  const auto res = sweep(ball(0.4), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, 3),
                         V3(0, 0, 5), 10, 1e-6);
  CHECK(res.events.empty());
  CHECK(res.warnings.empty());
}

TEST_CASE("path ending exactly on the tangency emits a final TE event") {
  const auto res = sweep(ball(0.4), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, -5),
                         V3(0, 0, -0.4), 50, 1e-7);
  REQUIRE(res.events.size() == 1);
  CHECK(res.events[0].from == Position::E);
  CHECK(res.events[0].to == Position::TE);
  CHECK(res.events[0].t > 1.0 - 1e-5);
  CHECK(res.events[0].bracket_width <= 1e-7);
}

TEST_CASE("undersampled contact interval warns and still resolves") {
  // 4 samples on a long path: the C band between z = -0.4 and 0.4 falls
  // between adjacent samples, so they jump E -> I
  const auto res = sweep(ball(0.4), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, -30),
                         V3(0, 0, 30), 3, 1e-7);
  CHECK_FALSE(res.warnings.empty());
  REQUIRE(res.events.size() == 4);
  CHECK(res.events[0].from == Position::E);
  CHECK(res.events[0].to == Position::TE);
  CHECK(res.events[3].from == Position::TI);
  CHECK(res.events[3].to == Position::I);
}

TEST_CASE("smallness violation is reported but does not suppress events") {
  // 2r = 1.2 > a^2 = 1
  const auto res = sweep(ball(0.6), ParaboloidParams<double>(1.0, 2.0), V3(0, 0, -5),
                         V3(0, 0, 5), 100, 1e-6);
  CHECK_FALSE(res.smallness.satisfied);
  CHECK(res.events.size() >= 4);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(
      sweep(ball(0.4), ParaboloidParams<double>(1, 2), V3(0, 0, 0), V3(0, 0, 1), 1, 1e-6),
      InvalidParameters);
  CHECK_THROWS_AS(
      sweep(ball(0.4), ParaboloidParams<double>(1, 2), V3(0, 0, 0), V3(0, 0, 1), 10, 0.0),
      InvalidParameters);
}
