#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>

#include "geometry.hpp"

namespace quadpos {

// Result of reducing (ellipsoid, paraboloid) to (sphere, standard paraboloid)
// with one affine map. `transform` carries original coordinates to canonical
// coordinates; 0 < a <= b.
template <class S>
struct CanonicalPair {
  SphereParams<S> sphere;
  S paraboloid_a;
  S paraboloid_b;
  AffineTransform<S> transform;

  bool circular(S rel_tol = S(1e-9)) const {
    return paraboloid_b - paraboloid_a < rel_tol * paraboloid_b;
  }
};

template <class S>
struct SmallnessReport {
  S paraboloid_max_curvature;
  S ellipsoid_min_curvature;
  bool satisfied;
  S margin;  // ellipsoid_min - paraboloid_max
};

// kappa(t) of the tight (x-z) parabola section; maximal at the vertex t = 0.
template <class S>
S paraboloid_curvature(S a, S t) {
  const S a4 = a * a * a * a;
  const S s = std::sqrt(a4 + S(4) * t * t);
  return S(2) * a4 / (s * s * s);
}

// Minimum principal curvature c1/c3^2, attained at the co-vertices of the
// longest axis (semi-axes stored ascending).
template <class S>
S ellipsoid_min_curvature(const EllipsoidParams<S>& e) {
  return e.semi_axes[0] / (e.semi_axes[2] * e.semi_axes[2]);
}

// Curvature-form smallness test, evaluated in the original frame: the
// ellipsoid's flattest point must still be at least as curved as the
// paraboloid's tightest point. For a canonical pair this is exactly 2r <= a^2.
template <class S>
SmallnessReport<S> smallness_check(const EllipsoidParams<S>& e, const ParaboloidParams<S>& p) {
  SmallnessReport<S> rep;
  rep.paraboloid_max_curvature = S(2) / (p.a * p.a);
  rep.ellipsoid_min_curvature = ellipsoid_min_curvature(e);
  rep.margin = rep.ellipsoid_min_curvature - rep.paraboloid_max_curvature;
  rep.satisfied = rep.margin >= S(0);
  return rep;
}

namespace detail {

// Deterministic sign: largest-|entry| component made positive.
template <class S>
void canonical_sign(Eigen::Ref<Vec3<S>> v) {
  int i = 0;
  v.cwiseAbs().maxCoeff(&i);
  if (v[i] < S(0)) v = -v;
}

}  // namespace detail

// Reduce the pair with (i) the similarity taking e to a sphere of radius
// (c1 c2 c3)^(1/3) about its own center, then (ii) the rigid motion taking the
// image of p back to standard form. The image paraboloid's a, b are read off
// the eigenvalues of its quadratic part, the axis from the null eigenvector,
// the vertex by completing the square along the axis.
template <class S>
CanonicalPair<S> canonicalize(const EllipsoidParams<S>& e, const ParaboloidParams<S>& p) {
  using std::sqrt;

  // (i) e -> sphere, fixing e's center
  const S r = std::cbrt(e.semi_axes.prod());
  Mat3<S> rot = e.orientation.toRotationMatrix();
  Vec3<S> axis_scale = r * e.semi_axes.cwiseInverse();
  Mat3<S> l1 = rot * axis_scale.asDiagonal() * rot.transpose();
  AffineTransform<S> t1(l1, Vec3<S>(e.center - l1 * e.center));

  // (ii) image of p -> standard form
  Quadric<S> qp = transform_quadric(quadric_from_paraboloid(p), t1);
  Mat3<S> quad = qp.m.template topLeftCorner<3, 3>();
  Vec3<S> lin = qp.m.template topRightCorner<3, 1>();
  const S cst = qp.m(3, 3);

  Eigen::SelfAdjointEigenSolver<Mat3<S>> es(quad);
  Vec3<S> mu = es.eigenvalues();  // ascending
  const S zero_tol = S(1e-10) * mu.cwiseAbs().maxCoeff();
  if (!(std::abs(mu[0]) <= zero_tol) || !(mu[1] > zero_tol) || !(mu[2] > zero_tol))
    throw DegenerateParaboloid("canonicalize: quadratic part is not rank-2 positive");

  Vec3<S> w = es.eigenvectors().col(0);
  S gamma = lin.dot(w);
  if (gamma > S(0)) {
    w = -w;
    gamma = -gamma;
  }
  if (!(gamma < -zero_tol))
    throw DegenerateParaboloid("canonicalize: no linear term along the axis (cylinder)");

  Vec3<S> u1 = es.eigenvectors().col(2);  // largest eigenvalue -> shorter semi-axis a
  Vec3<S> u2 = es.eigenvectors().col(1);
  detail::canonical_sign<S>(u1);
  detail::canonical_sign<S>(u2);
  Mat3<S> frame;
  frame << u1, u2, w;
  if (frame.determinant() < S(0)) {
    u2 = -u2;
    frame.col(1) = u2;
  }

  const S alpha1 = mu[2];
  const S alpha2 = mu[1];
  Vec3<S> v_perp = -(lin.dot(u1) / alpha1) * u1 - (lin.dot(u2) / alpha2) * u2;
  const S s = -(v_perp.dot(quad * v_perp) + S(2) * lin.dot(v_perp) + cst) / (S(2) * gamma);
  Vec3<S> vertex = v_perp + s * w;

  AffineTransform<S> t2(Mat3<S>(frame.transpose()), Vec3<S>(-(frame.transpose() * vertex)));

  const S a = sqrt(-S(2) * gamma / alpha1);
  const S b = sqrt(-S(2) * gamma / alpha2);
  return CanonicalPair<S>{SphereParams<S>(t2(e.center), r), a, b, t2 * t1};
}

}  // namespace quadpos
