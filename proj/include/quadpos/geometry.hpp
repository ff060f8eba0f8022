#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "errors.hpp"
#include "types.hpp"

namespace quadpos {

//
// Parameter records. All are immutable values validated on construction.
//

template <class S>
struct SphereParams {
  Vec3<S> center;
  S radius;

  SphereParams(const Vec3<S>& center_, S radius_) : center(center_), radius(radius_) {
    if (!(radius > S(0)) || !std::isfinite(radius) || !center.allFinite())
      throw InvalidParameters("sphere: radius must be finite and > 0");
  }
};

namespace detail {

template <class S>
void check_unit_quaternion(const Quat<S>& q, S tol) {
  using std::abs;
  if (!(abs(q.norm() - S(1)) <= tol))
    throw InvalidParameters("orientation quaternion is not unit norm");
}

}  // namespace detail

// Axis-aligned-in-own-frame ellipsoid. Semi-axes are stored sorted ascending
// (c1 <= c2 <= c3); the rotation columns are permuted to compensate, so the
// surface is unchanged.
template <class S>
struct EllipsoidParams {
  Vec3<S> center;
  Vec3<S> semi_axes;
  Quat<S> orientation;

  EllipsoidParams(const Vec3<S>& center_, const Vec3<S>& semi_axes_, const Quat<S>& orientation_)
      : center(center_), semi_axes(semi_axes_), orientation(orientation_) {
    if (!center.allFinite() || !semi_axes.allFinite())
      throw InvalidParameters("ellipsoid: non-finite parameters");
    if (!(semi_axes.minCoeff() > S(0)))
      throw InvalidParameters("ellipsoid: semi-axes must be > 0");
    detail::check_unit_quaternion(orientation, S(1e-9));
    orientation.normalize();

    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int i, int j) { return semi_axes_[i] < semi_axes_[j]; });
    if (idx != std::array<int, 3>{0, 1, 2}) {
      Mat3<S> rot = orientation.toRotationMatrix();
      Mat3<S> permuted;
      for (int k = 0; k < 3; ++k) {
        permuted.col(k) = rot.col(idx[k]);
        semi_axes[k] = semi_axes_[idx[k]];
      }
      // negating a principal axis leaves the ellipsoid invariant
      if (permuted.determinant() < S(0)) permuted.col(2) = -permuted.col(2);
      orientation = Quat<S>(permuted).normalized();
    }
  }

  EllipsoidParams(const Vec3<S>& center_, const Vec3<S>& semi_axes_)
      : EllipsoidParams(center_, semi_axes_, Quat<S>::Identity()) {}
};

template <class S>
EllipsoidParams<S> ellipsoid_from_sphere(const SphereParams<S>& s) {
  return EllipsoidParams<S>(s.center, Vec3<S>::Constant(s.radius));
}

// Elliptic paraboloid x^2/a^2 + y^2/b^2 = z in its own frame, posed by
// (orientation, vertex). a <= b is enforced by swapping the transverse axes
// (a quarter-turn about the paraboloid axis) when given in the other order.
template <class S>
struct ParaboloidParams {
  Vec3<S> vertex;
  Quat<S> orientation;
  S a, b;

  ParaboloidParams(const Vec3<S>& vertex_, const Quat<S>& orientation_, S a_, S b_)
      : vertex(vertex_), orientation(orientation_), a(a_), b(b_) {
    if (!vertex.allFinite() || !std::isfinite(a) || !std::isfinite(b) || !(a > S(0)) ||
        !(b > S(0)))
      throw InvalidParameters("paraboloid: a, b must be finite and > 0; vertex finite");
    detail::check_unit_quaternion(orientation, S(1e-9));
    orientation.normalize();
    if (a > b) {
      std::swap(a, b);
      const S h = std::sqrt(S(0.5));
      orientation = orientation * Quat<S>(h, S(0), S(0), h);  // compose with Rz(pi/2)
    }
  }

  ParaboloidParams(S a_, S b_)
      : ParaboloidParams(Vec3<S>::Zero(), Quat<S>::Identity(), a_, b_) {}
};

// Invertible affine point map p -> linear*p + translation.
template <class S>
struct AffineTransform {
  Mat3<S> linear;
  Vec3<S> translation;

  AffineTransform(const Mat3<S>& linear_, const Vec3<S>& translation_)
      : linear(linear_), translation(translation_) {
    using std::abs;
    if (!linear.allFinite() || !translation.allFinite() ||
        !(abs(linear.determinant()) > S(1e-12)))
      throw SingularTransform("affine transform: |det| <= 1e-12");
  }

  AffineTransform() : linear(Mat3<S>::Identity()), translation(Vec3<S>::Zero()) {}

  static AffineTransform identity() { return AffineTransform(); }

  template <class D>
  Vec3<S> operator()(const Eigen::MatrixBase<D>& p) const {
    return linear * p + translation;
  }

  AffineTransform inverse() const {
    Mat3<S> inv = linear.inverse();
    return AffineTransform(inv, Vec3<S>(-(inv * translation)));
  }
};

// composition: (t2 * t1)(p) = t2(t1(p))
template <class S>
AffineTransform<S> operator*(const AffineTransform<S>& t2, const AffineTransform<S>& t1) {
  return AffineTransform<S>(Mat3<S>(t2.linear * t1.linear),
                            Vec3<S>(t2.linear * t1.translation + t2.translation));
}

// Symmetric homogeneous quadric matrix; X' m X = 0 is the surface,
// negative values are interior for all constructors below.
template <class S>
struct Quadric {
  Mat4<S> m;

  explicit Quadric(const Mat4<S>& raw) : m(S(0.5) * (raw + raw.transpose())) {
    if (!m.allFinite() || m.cwiseAbs().maxCoeff() == S(0))
      throw InvalidParameters("quadric: matrix must be finite and nonzero");
  }
};

template <class S, class D>
S evaluate(const Quadric<S>& q, const Eigen::MatrixBase<D>& point) {
  Vec4<S> x;
  x << point(0), point(1), point(2), S(1);
  return x.dot(q.m * x);
}

// Sphere quadric with unit leading coefficients: bordered identity block,
// last diagonal entry -r^2 + |center|^2.
template <class S>
Quadric<S> quadric_from_sphere(const SphereParams<S>& s) {
  Mat4<S> m = Mat4<S>::Identity();
  m.template topRightCorner<3, 1>() = -s.center;
  m.template bottomLeftCorner<1, 3>() = -s.center.transpose();
  m(3, 3) = -s.radius * s.radius + s.center.squaredNorm();
  return Quadric<S>(m);
}

// General ellipsoid quadric. Normalization: plain form (x-c)'M(x-c) - 1 scaled
// by (c1 c2 c3)^(2/3), which makes the three leading coefficients have unit
// geometric mean and reduces to the S matrix exactly when the ellipsoid is a
// sphere.
template <class S>
Quadric<S> quadric_from_ellipsoid(const EllipsoidParams<S>& e) {
  Mat3<S> rot = e.orientation.toRotationMatrix();
  Vec3<S> inv_sq = e.semi_axes.array().square().inverse();
  Mat3<S> m3 = rot * inv_sq.asDiagonal() * rot.transpose();
  const S scale = std::pow(e.semi_axes.prod(), S(2) / S(3));
  m3 *= scale;

  Mat4<S> m = Mat4<S>::Zero();
  m.template topLeftCorner<3, 3>() = m3;
  m.template topRightCorner<3, 1>() = -m3 * e.center;
  m.template bottomLeftCorner<1, 3>() = m.template topRightCorner<3, 1>().transpose();
  m(3, 3) = e.center.dot(m3 * e.center) - scale;
  return Quadric<S>(m);
}

// Standard-form matrix P: diag(a^-2, b^-2) block, zero z^2 term, -1/2 in the
// (z, homogeneous) slots.
template <class S>
Quadric<S> standard_paraboloid_quadric(S a, S b) {
  Mat4<S> m = Mat4<S>::Zero();
  m(0, 0) = S(1) / (a * a);
  m(1, 1) = S(1) / (b * b);
  m(2, 3) = m(3, 2) = S(-0.5);
  return Quadric<S>(m);
}

// Transform the surface forward: point p on q <=> t(p) on result. Implemented
// as congruence with the homogeneous matrix of the inverse point map.
template <class S>
Quadric<S> transform_quadric(const Quadric<S>& q, const AffineTransform<S>& t) {
  using std::abs;
  if (!(abs(t.linear.determinant()) > S(1e-12)))
    throw SingularTransform("transform_quadric: |det| <= 1e-12");
  AffineTransform<S> inv = t.inverse();
  Mat4<S> tinv = Mat4<S>::Identity();
  tinv.template topLeftCorner<3, 3>() = inv.linear;
  tinv.template topRightCorner<3, 1>() = inv.translation;
  return Quadric<S>(Mat4<S>(tinv.transpose() * q.m * tinv));
}

template <class S>
Quadric<S> quadric_from_paraboloid(const ParaboloidParams<S>& p) {
  const bool identity_pose =
      p.vertex.isZero(S(0)) && p.orientation.isApprox(Quat<S>::Identity(), S(0));
  Quadric<S> std_q = standard_paraboloid_quadric(p.a, p.b);
  if (identity_pose) return std_q;  // keep the standard pattern bit-exact
  return transform_quadric(std_q,
                           AffineTransform<S>(p.orientation.toRotationMatrix(), p.vertex));
}

}  // namespace quadpos
