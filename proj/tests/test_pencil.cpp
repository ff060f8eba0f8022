#include <doctest.h>

#include <random>

#include "quadpos/pencil.hpp"

using namespace quadpos;
using V3 = Vec3<double>;

namespace {

CanonicalPair<double> canonical_scene(double xc, double yc, double zc, double r, double a,
                                      double b) {
  return CanonicalPair<double>{SphereParams<double>(V3(xc, yc, zc), r), a, b,
                              AffineTransform<double>::identity()};
}

QuarticPoly<double> from_roots(const std::vector<double>& roots) {
  // expand prod (lambda - r_i); also used with a complex pair appended as
  // (lambda^2 + p lambda + q)
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i] * (-r);
      next[i + 1] += c[i];
    }
    c = next;
  }
  // c is ascending, degree 4
  return QuarticPoly<double>{c[3], c[2], c[1], c[0], 1.0};
}

double eval_quartic(const QuarticPoly<double>& q, double x) {
  return (((x + q.c3) * x + q.c2) * x + q.c1) * x + q.c0;
}

}  // namespace

TEST_CASE("closed-form quartic for the small-sphere reference scene") {
  const auto cp = canonical_scene(0.0, 0.5, 0.712045, 0.25, 1.2, 1.5);
  const QuarticPoly<double> q = quartic_from_canonical(cp);
  CHECK(q.c3 == doctest::Approx(6.53818).epsilon(1e-12));
  CHECK(q.c2 == doctest::Approx(12.9997842).epsilon(1e-12));
  CHECK(q.c1 == doctest::Approx(8.7106032).epsilon(1e-12));
  CHECK(q.c0 == doctest::Approx(0.81).epsilon(1e-12));
  CHECK(q.scale == doctest::Approx(-1.0 / (4.0 * 1.44 * 2.25)).epsilon(1e-14));
}

TEST_CASE("determinant interpolation reproduces the closed form") {
  const auto cp = canonical_scene(0.0, 0.5, 0.712045, 0.25, 1.2, 1.5);
  const QuarticPoly<double> closed = quartic_from_canonical(cp);
  const QuarticPoly<double> interp = characteristic_quartic(
      standard_paraboloid_quadric(1.2, 1.5), quadric_from_sphere(cp.sphere));
  CHECK(interp.c3 == doctest::Approx(closed.c3).epsilon(1e-12));
  CHECK(interp.c2 == doctest::Approx(closed.c2).epsilon(1e-12));
  CHECK(interp.c1 == doctest::Approx(closed.c1).epsilon(1e-12));
  CHECK(interp.c0 == doctest::Approx(closed.c0).epsilon(1e-12));
  CHECK(interp.scale == doctest::Approx(closed.scale).epsilon(1e-12));
}

TEST_CASE("monic quartic is invariant under a rigid motion of the whole scene") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = 0.7 + 0.8 * std::abs(u(rng));
    const double b = a + 0.1 + std::abs(u(rng));
    const V3 center(u(rng), u(rng), 2.0 + u(rng));
    const double r = 0.15 + 0.2 * std::abs(u(rng));
    const auto cp = canonical_scene(center[0], center[1], center[2], r, a, b);
    const QuarticPoly<double> ref = quartic_from_canonical(cp);

    Quat<double> rot(u(rng) + 2.0, u(rng), u(rng), u(rng));  // bias away from zero
    rot.normalize();
    const V3 shift(u(rng), u(rng), u(rng));
    const EllipsoidParams<double> e(V3(rot * center + shift), V3::Constant(r),
                                    rot);
    const ParaboloidParams<double> p(shift, rot, a, b);
    const QuarticPoly<double> moved = characteristic_quartic(quadric_from_paraboloid(p),
                                                             quadric_from_ellipsoid(e));
    CHECK(moved.c3 == doctest::Approx(ref.c3).epsilon(1e-7));
    CHECK(moved.c2 == doctest::Approx(ref.c2).epsilon(1e-7));
    CHECK(moved.c1 == doctest::Approx(ref.c1).epsilon(1e-7));
    CHECK(moved.c0 == doctest::Approx(ref.c0).epsilon(1e-7));
  }
}

TEST_CASE("hand-checked discriminants") {
  // lambda^4 - 1: roots {1, -1, i, -i} -> delta = 256 c0^3 = -256
  CHECK(discriminant(QuarticPoly<double>{0, 0, 0, -1, 1}) == -256.0);
  // (l+1)(l+2)(l+3)(l+4): pairwise gaps 1,2,3,1,2,1 -> 144
  CHECK(discriminant(from_roots({-1, -2, -3, -4})) == doctest::Approx(144.0).epsilon(1e-12));
  // a double root forces delta = 0
  CHECK(discriminant(from_roots({-1, -1, -2, -3})) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("descartes sign changes") {
  CHECK(descartes_sign_changes(QuarticPoly<double>{25, 104.64, 83.2, 2.56, 1}) == 0);
  CHECK(descartes_sign_changes(QuarticPoly<double>{-15, -95.36, -76.8, 2.56, 1}) == 2);
  CHECK(descartes_sign_changes(QuarticPoly<double>{0, -1, 0, 1, 1}) == 2);  // zeros skipped
}

TEST_CASE("on-axis interior and exterior coefficient rows") {
  // z_c = +-5, r = 0.4, a = 1, b = 2
  const QuarticPoly<double> qi = quartic_from_canonical(canonical_scene(0, 0, 5, 0.4, 1, 2));
  CHECK(qi.c3 == doctest::Approx(25.0));
  CHECK(qi.c2 == doctest::Approx(104.64));
  CHECK(qi.c1 == doctest::Approx(83.2));
  CHECK(qi.c0 == doctest::Approx(2.56));

  const QuarticPoly<double> qe = quartic_from_canonical(canonical_scene(0, 0, -5, 0.4, 1, 2));
  CHECK(qe.c3 == doctest::Approx(-15.0));
  CHECK(qe.c2 == doctest::Approx(-95.36));
  CHECK(qe.c1 == doctest::Approx(-76.8));
  CHECK(qe.c0 == doctest::Approx(2.56));

  const RootSet<double> ri = real_roots(qi, default_cluster_tol(qi));
  REQUIRE(ri.real_roots.size() == 4);
  CHECK(ri.real_roots[0].value == doctest::Approx(-19.9679486355017).epsilon(1e-10));
  CHECK(ri.real_roots[1].value == doctest::Approx(-4.0).epsilon(1e-10));
  CHECK(ri.real_roots[2].value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(ri.real_roots[3].value == doctest::Approx(-0.0320513644983102).epsilon(1e-8));

  const RootSet<double> re = real_roots(qe, default_cluster_tol(qe));
  REQUIRE(re.real_roots.size() == 4);
  CHECK(re.real_roots[0].value == doctest::Approx(-4.0).epsilon(1e-10));
  CHECK(re.real_roots[1].value == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(re.real_roots[2].value == doctest::Approx(0.0320513644983102).epsilon(1e-8));
  CHECK(re.real_roots[3].value == doctest::Approx(19.9679486355017).epsilon(1e-10));
}

TEST_CASE("reference scene roots: outer pair simple, -1.44 clusters to a double") {
  const auto cp = canonical_scene(0.0, 0.5, 0.712045, 0.25, 1.2, 1.5);
  const QuarticPoly<double> q = quartic_from_canonical(cp);
  const RootSet<double> rs = real_roots(q, default_cluster_tol(q));
  REQUIRE(rs.real_roots.size() == 3);
  CHECK(rs.complex_pairs == 0);
  CHECK(rs.real_roots[0].value == doctest::Approx(-3.548085020828302).epsilon(1e-8));
  CHECK(rs.real_roots[0].multiplicity == 1);
  CHECK(rs.real_roots[1].value == doctest::Approx(-1.44).epsilon(1e-6));
  CHECK(rs.real_roots[1].multiplicity == 2);
  CHECK(rs.real_roots[2].value == doctest::Approx(-0.110094568264649).epsilon(1e-8));
  CHECK(rs.real_roots[2].multiplicity == 1);
}

TEST_CASE("conjugate pair detected on a crossing scene") {
  // (l+16)(l+0.25)(l^2+16)
  const QuarticPoly<double> q{16.25, 20.0, 260.0, 64.0, 1.0};
  CHECK(discriminant(q) < 0.0);
  const RootSet<double> rs = real_roots(q, default_cluster_tol(q));
  REQUIRE(rs.real_roots.size() == 2);
  CHECK(rs.complex_pairs == 1);
  CHECK(rs.real_roots[0].value == doctest::Approx(-16.0).epsilon(1e-10));
  CHECK(rs.real_roots[1].value == doctest::Approx(-0.25).epsilon(1e-10));
}

TEST_CASE("planted simple roots are recovered to high accuracy") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int done = 0;
  while (done < 100) {
    std::vector<double> r{u(rng), u(rng), u(rng), u(rng)};
    std::sort(r.begin(), r.end());
    if (r[1] - r[0] < 1e-3 || r[2] - r[1] < 1e-3 || r[3] - r[2] < 1e-3) continue;
    ++done;
    const QuarticPoly<double> q = from_roots(r);
    const RootSet<double> rs = real_roots(q, default_cluster_tol(q));
    REQUIRE(rs.real_roots.size() == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(rs.real_roots[i].multiplicity == 1);
      CHECK(rs.real_roots[i].value == doctest::Approx(r[i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("planted multiple roots: certified multiplicity and location") {
  // coefficient rounding alone scatters an m-fold root by ~eps^(1/m), so
  // multiple-root clusters are planted isolated (>= 1e-2) and located with
  // m-dependent slack
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);

  auto isolated = [](const std::vector<double>& vals, double gap) {
    for (size_t i = 0; i < vals.size(); ++i)
      for (size_t j = i + 1; j < vals.size(); ++j)
        if (std::abs(vals[i] - vals[j]) < gap) return false;
    return true;
  };

  SUBCASE("double plus two simple") {
    int done = 0;
    while (done < 60) {
      const double d = u(rng), s1 = u(rng), s2 = u(rng);
      if (!isolated({d, s1, s2}, 1e-2)) continue;
      ++done;
      const RootSet<double> rs =
          real_roots(from_roots({d, d, s1, s2}), default_cluster_tol(from_roots({d, d, s1, s2})));
      int doubles = 0;
      for (const auto& e : rs.real_roots)
        if (e.multiplicity == 2) {
          ++doubles;
          CHECK(e.value == doctest::Approx(d).epsilon(1e-6));
        }
      CHECK(doubles == 1);
      CHECK(rs.real_roots.size() == 3);
    }
  }

  SUBCASE("two double roots") {
    int done = 0;
    while (done < 60) {
      const double d1 = u(rng), d2 = u(rng);
      if (!isolated({d1, d2}, 1e-2)) continue;
      ++done;
      const QuarticPoly<double> q = from_roots({d1, d1, d2, d2});
      const RootSet<double> rs = real_roots(q, default_cluster_tol(q));
      REQUIRE(rs.real_roots.size() == 2);
      CHECK(rs.real_roots[0].multiplicity == 2);
      CHECK(rs.real_roots[1].multiplicity == 2);
      CHECK(rs.real_roots[0].value == doctest::Approx(std::min(d1, d2)).epsilon(1e-6));
      CHECK(rs.real_roots[1].value == doctest::Approx(std::max(d1, d2)).epsilon(1e-6));
    }
  }

  SUBCASE("triple plus simple") {
    int done = 0;
    while (done < 60) {
      const double t = u(rng), s = u(rng);
      if (!isolated({t, s}, 5e-2)) continue;
      ++done;
      const QuarticPoly<double> q = from_roots({t, t, t, s});
      const RootSet<double> rs = real_roots(q, default_cluster_tol(q));
      REQUIRE(rs.real_roots.size() == 2);
      int triples = 0;
      for (const auto& e : rs.real_roots)
        if (e.multiplicity == 3) {
          ++triples;
          CHECK(e.value == doctest::Approx(t).epsilon(1e-4));
        }
      CHECK(triples == 1);
    }
  }

  SUBCASE("quadruple root") {
    for (double v : {-2.5, -1.0, -0.3, 0.7, 3.1}) {
      const QuarticPoly<double> q = from_roots({v, v, v, v});
      const RootSet<double> rs = real_roots(q, default_cluster_tol(q));
      REQUIRE(rs.real_roots.size() == 1);
      CHECK(rs.real_roots[0].multiplicity == 4);
      CHECK(rs.real_roots[0].value == doctest::Approx(v).epsilon(1e-3));
    }
  }
}

TEST_CASE("residuals of reported roots stay inside the gate") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const QuarticPoly<double> q = from_roots({u(rng), u(rng), u(rng), u(rng)});
    const double tol = default_cluster_tol(q);
    const RootSet<double> rs = real_roots(q, tol);
    const double cmax =
        std::max({std::abs(q.c3), std::abs(q.c2), std::abs(q.c1), std::abs(q.c0)});
    for (const auto& e : rs.real_roots)
      CHECK(std::abs(eval_quartic(q, e.value)) <= tol * std::max(1.0, cmax));
  }
}

TEST_CASE("degenerate pencil is rejected") {
  Mat4<double> flat = Mat4<double>::Zero();
  flat(3, 3) = 1.0;
  const Quadric<double> not_a_paraboloid(flat);
  const Quadric<double> sphere = quadric_from_sphere(SphereParams<double>(V3(0, 0, 1), 0.5));
  CHECK_THROWS_AS(characteristic_quartic(not_a_paraboloid, sphere), DegeneratePencil);
}

TEST_CASE("root isolation rejects a non-positive tolerance") {
  const QuarticPoly<double> q{1, 1, 1, 1, 1};
  CHECK_THROWS_AS(real_roots(q, 0.0), InvalidParameters);
  CHECK_THROWS_AS(real_roots(q, -1e-9), InvalidParameters);
}

TEST_CASE("tolerance scales track the coefficient magnitude") {
  const QuarticPoly<double> q{3.0, -1.0, 0.5, 2.0, 1.0};
  CHECK(default_cluster_tol(q) == doctest::Approx(1e-7 * 4.0));
  CHECK(delta_zero_band(q) == doctest::Approx(1e-8 * std::pow(4.0, 6)));
}
