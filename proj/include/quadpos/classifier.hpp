#pragma once

#include <optional>
#include <utility>

#include "pencil.hpp"

namespace quadpos {

template <class S>
struct Classification {
  Position position;
  RootSet<S> roots;
  S delta;
  std::pair<S, S> special_roots;  // (-a^2, -b^2) of the canonical paraboloid
  std::optional<Vec3<S>> tangent_point;  // canonical frame; set for TI/TE when recoverable
  SmallnessReport<S> smallness;
  QuarticPoly<S> quartic;
  CanonicalPair<S> canonical;
  S delta_margin;  // |delta| - zero band; negative means inside the band
};

template <class S>
struct ClassifyOptions {
  S cluster_tol = S(0);           // <= 0: use default_cluster_tol
  S special_tol_scale = S(1e-6);  // root-vs-special match width, times (1 + a^2)
  bool want_tangent_point = true;
};

namespace detail {

// TI test on the all-negative side: a multiple root away from both special
// values is a genuine tangency; at the special values only -a^2 with
// multiplicity >= 3 (>= 4 when circular) is.
template <class S>
bool interior_is_tangent(const RootSet<S>& rs, const std::pair<S, S>& special, S special_tol,
                         bool circular, S* lambda_out = nullptr) {
  using std::abs;
  for (const auto& e : rs.real_roots) {
    if (e.multiplicity < 2) continue;
    const bool at_a2 = abs(e.value - special.first) <= special_tol;
    const bool at_b2 = abs(e.value - special.second) <= special_tol;
    const bool tangent = (!at_a2 && !at_b2) || (at_a2 && e.multiplicity >= (circular ? 4 : 3));
    if (tangent) {
      if (lambda_out) *lambda_out = e.value;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Position from the root structure alone (Table rows on the sign pattern).
template <class S>
Position classify_by_roots(const RootSet<S>& rs, const std::pair<S, S>& special, S special_tol,
                           bool circular = false) {
  using std::abs;
  if (rs.complex_pairs >= 2)
    throw InvalidConfiguration("classify_by_roots: two conjugate pairs never arise for a valid pair");

  int n_neg = 0, n_pos = 0;
  for (const auto& e : rs.real_roots) {
    if (abs(e.value) <= rs.tolerance)
      throw InvalidConfiguration("classify_by_roots: zero root (the constant term 4 a^2 b^2 r^2 is positive)");
    (e.value < S(0) ? n_neg : n_pos) += e.multiplicity;
  }
  if (n_neg + n_pos + 2 * rs.complex_pairs != 4)
    throw InvalidConfiguration("classify_by_roots: multiplicities do not sum to 4");

  if (rs.complex_pairs == 1) {
    if (n_pos > 0)
      throw InvalidConfiguration("classify_by_roots: positive root next to a conjugate pair");
    return Position::C;
  }
  if (n_pos > 0) {
    // exterior side: exactly the two largest roots cross zero
    if (n_neg != 2 || n_pos != 2)
      throw InvalidConfiguration("classify_by_roots: sign pattern matches no valid configuration");
    for (const auto& e : rs.real_roots)
      if (e.value > S(0) && e.multiplicity >= 2) return Position::TE;
    return Position::E;
  }
  return detail::interior_is_tangent(rs, special, special_tol, circular) ? Position::TI
                                                                         : Position::I;
}

// Position from discriminant and coefficient signs; the I-vs-TI split and
// everything inside the Delta zero band fall back to root clustering.
template <class S>
Position classify_by_coefficients(const QuarticPoly<S>& q, S delta,
                                  const std::pair<S, S>& special, S special_tol,
                                  bool circular = false) {
  const S band = delta_zero_band(q);
  const bool some_negative = q.c3 < S(0) || q.c2 < S(0) || q.c1 < S(0) || q.c0 < S(0);
  if (delta < -band) return Position::C;
  if (delta > band && some_negative) return Position::E;
  const RootSet<S> rs = real_roots(q, default_cluster_tol(q));
  return classify_by_roots(rs, special, special_tol, circular);
}

// lambda_{3,4} = -2 (z_c +- sqrt(z_c^2 - r^2)) for a sphere centered on the
// paraboloid axis; complex when |z_c| < r.
template <class S>
std::pair<std::complex<S>, std::complex<S>> on_axis_roots(S z_c, S r) {
  if (!(r > S(0))) throw InvalidParameters("on_axis_roots: radius must be > 0");
  const std::complex<S> sq = std::sqrt(std::complex<S>(z_c * z_c - r * r));
  const std::complex<S> zc(z_c);
  return {S(-2) * (zc + sq), S(-2) * (zc - sq)};
}

template <class S>
struct SpecialRootFlags {
  bool a2_root = false;    // -a^2 is a root            <=> x_c = 0
  bool a2_double = false;  // r^2 = a^2 z_c - a^2 y_c^2/(b^2-a^2) - a^4/4 as well
  bool a2_triple = false;  // y_c = 0, z_c = r = a^2/2 as well
  bool b2_root = false;    // -b^2 is a root            <=> y_c = 0
  bool b2_double = false;  // r^2 = b^2 z_c + b^2 x_c^2/(b^2-a^2) - b^4/4 as well
};

// Closed-form membership/multiplicity conditions for the special values,
// tested to a relative tolerance in the scene scale.
template <class S>
SpecialRootFlags<S> special_root_multiplicity_condition(const CanonicalPair<S>& cp,
                                                        S rel_tol = S(1e-9)) {
  using std::abs;
  if (cp.circular())
    throw InvalidParameters(
        "special_root_multiplicity_condition: circular paraboloid (-a^2 is always a root)");
  const S a2 = cp.paraboloid_a * cp.paraboloid_a;
  const S b2 = cp.paraboloid_b * cp.paraboloid_b;
  const S xc = cp.sphere.center[0], yc = cp.sphere.center[1], zc = cp.sphere.center[2];
  const S r = cp.sphere.radius;
  const S len = S(1) + abs(xc) + abs(yc) + abs(zc) + r;

  SpecialRootFlags<S> f;
  f.a2_root = abs(xc) <= rel_tol * len;
  f.b2_root = abs(yc) <= rel_tol * len;
  {
    const S t1 = a2 * zc, t2 = a2 * yc * yc / (b2 - a2), t3 = a2 * a2 / S(4);
    const S scale = S(1) + r * r + abs(t1) + abs(t2) + t3;
    f.a2_double = f.a2_root && abs(r * r - (t1 - t2 - t3)) <= rel_tol * scale;
  }
  f.a2_triple = f.a2_root && abs(yc) <= rel_tol * len && abs(zc - r) <= rel_tol * len &&
                abs(r - a2 / S(2)) <= rel_tol * len;
  {
    const S t1 = b2 * zc, t2 = b2 * xc * xc / (b2 - a2), t3 = b2 * b2 / S(4);
    const S scale = S(1) + r * r + abs(t1) + abs(t2) + t3;
    f.b2_double = f.b2_root && abs(r * r - (t1 + t2 - t3)) <= rel_tol * scale;
  }
  return f;
}

// Common point of the two surfaces at a multiple root: kernel of
// lambda*P + E, affinely normalized. A two-dimensional kernel leaves one free
// parameter, fixed by intersecting the kernel line with either surface; a
// negative discriminant there means the multiple root carries no real common
// point (NotOnSurfaces).
template <class S>
Vec3<S> tangent_point(const Quadric<S>& P, const Quadric<S>& E, S lambda,
                      S kernel_tol = S(1e-4)) {
  using std::abs;
  const Mat4<S> M = lambda * P.m + E.m;
  Eigen::SelfAdjointEigenSolver<Mat4<S>> es(M);
  if (es.info() != Eigen::Success) throw NoKernel("tangent_point: eigensolver failed");
  const Vec4<S> mu = es.eigenvalues();
  const S mnorm = mu.cwiseAbs().maxCoeff();
  const S ktol = kernel_tol * (S(1) + mnorm);

  std::vector<int> kernel;
  for (int i = 0; i < 4; ++i)
    if (abs(mu[i]) <= ktol) kernel.push_back(i);
  if (kernel.empty()) throw NoKernel("tangent_point: lambda*P + E has trivial kernel");
  // most-singular directions first
  std::sort(kernel.begin(), kernel.end(), [&](int i, int j) { return abs(mu[i]) < abs(mu[j]); });

  Vec4<S> X;
  if (kernel.size() == 1) {
    Vec4<S> v = es.eigenvectors().col(kernel[0]);
    if (abs(v[3]) <= S(1e-10))
      throw NotOnSurfaces("tangent_point: kernel direction lies at infinity");
    X = v / v[3];
  } else {
    Vec4<S> v1 = es.eigenvectors().col(kernel[0]);
    Vec4<S> v2 = es.eigenvectors().col(kernel[1]);
    if (abs(v1[3]) < abs(v2[3])) std::swap(v1, v2);
    if (abs(v1[3]) <= S(1e-10))
      throw NotOnSurfaces("tangent_point: kernel plane lies at infinity");
    const Vec4<S> vaff = v1 / v1[3];
    Vec4<S> vdir = v2 - v2[3] * vaff;  // direction with zero last coordinate
    const S dn = vdir.template head<3>().norm();
    if (dn > S(0)) vdir /= dn;
    // pick the kernel-line point on the sphere/ellipsoid surface
    const S qa = vdir.dot(E.m * vdir);
    const S qb = S(2) * vaff.dot(E.m * vdir);
    const S qc = vaff.dot(E.m * vaff);
    S s0, s1;
    if (abs(qa) <= S(1e-14) * (abs(qb) + abs(qc) + S(1))) {
      s0 = s1 = (qb != S(0)) ? -qc / qb : S(0);
    } else {
      const S disc = std::max(qb * qb - S(4) * qa * qc, S(0));
      const S sq = std::sqrt(disc);
      const S qq = S(-0.5) * (qb + std::copysign(sq, qb));
      s0 = (qq != S(0)) ? qq / qa : S(0);
      s1 = (qq != S(0)) ? qc / qq : -qb / (S(2) * qa);
    }
    auto residual_at = [&](S s) {
      Vec4<S> cand = vaff + s * vdir;
      return abs(cand.dot(P.m * cand)) + abs(cand.dot(E.m * cand));
    };
    X = vaff + (residual_at(s0) <= residual_at(s1) ? s0 : s1) * vdir;
  }

  // the point must lie on both surfaces, not just in the kernel
  auto abs_form = [&](const Mat4<S>& q) {
    return (q.cwiseAbs() * X.cwiseAbs()).dot(X.cwiseAbs());
  };
  const S rp = abs(X.dot(P.m * X));
  const S re = abs(X.dot(E.m * X));
  if (!(rp <= S(1e-6) * (S(1) + abs_form(P.m)) && re <= S(1e-6) * (S(1) + abs_form(E.m))))
    throw NotOnSurfaces("tangent_point: kernel point misses the surfaces");
  return X.template head<3>();
}

// Circular paraboloid: -a^2 is always a root, so deflate it and classify from
// the cubic. Vertex tangency is cubic multiplicity 3 (quartic 4); smaller
// multiplicities of -a^2 carry no tangency.
template <class S>
Position classify_circular(const CanonicalPair<S>& cp, S cluster_tol = S(0)) {
  using std::abs;
  if (!cp.circular()) throw InvalidParameters("classify_circular: paraboloid is not circular");
  const QuarticPoly<S> q = quartic_from_canonical(cp);
  const S a2 = cp.paraboloid_a * cp.paraboloid_b;

  std::array<S, 5> h{};  // p / (lambda + a^2), remainder dropped
  h[3] = S(1);
  h[2] = q.c3 - a2;
  h[1] = q.c2 - a2 * h[2];
  h[0] = q.c1 - a2 * h[1];

  const S tol = cluster_tol > S(0) ? cluster_tol : default_cluster_tol(q);
  const auto iso = detail::isolate_roots<S, 3>(h, tol);

  int n_neg = 0, n_pos = 0;
  for (const auto& e : iso.entries) {
    if (abs(e.value) <= tol)
      throw InvalidConfiguration("classify_circular: zero root in the deflated cubic");
    (e.value < S(0) ? n_neg : n_pos) += e.multiplicity;
  }
  if (iso.complex_pairs == 1) {
    if (n_pos > 0)
      throw InvalidConfiguration("classify_circular: positive root next to a conjugate pair");
    return Position::C;
  }
  if (n_pos > 0) {
    if (n_neg != 1 || n_pos != 2)
      throw InvalidConfiguration("classify_circular: sign pattern matches no valid configuration");
    for (const auto& e : iso.entries)
      if (e.value > S(0) && e.multiplicity >= 2) return Position::TE;
    return Position::E;
  }
  const S special_tol = S(1e-6) * (S(1) + a2);
  for (const auto& e : iso.entries) {
    if (e.multiplicity < 2) continue;
    const bool at_a2 = abs(e.value + a2) <= special_tol;
    if (!at_a2 || e.multiplicity >= 3) return Position::TI;
  }
  return Position::I;
}

// Full pipeline: canonicalize, closed-form quartic, discriminant, root
// clustering, sign-pattern classification, and (for tangency verdicts) the
// common point in canonical coordinates.
template <class S>
Classification<S> classify(const EllipsoidParams<S>& e, const ParaboloidParams<S>& p,
                           const ClassifyOptions<S>& opts = {}) {
  using std::abs;
  CanonicalPair<S> cp = canonicalize(e, p);
  const SmallnessReport<S> small = smallness_check(e, p);
  const QuarticPoly<S> q = quartic_from_canonical(cp);
  const S delta = discriminant(q);
  const S a2 = cp.paraboloid_a * cp.paraboloid_a;
  const S b2 = cp.paraboloid_b * cp.paraboloid_b;
  const std::pair<S, S> special{-a2, -b2};

  const S tol = opts.cluster_tol > S(0) ? opts.cluster_tol : default_cluster_tol(q);
  RootSet<S> rs = real_roots(q, tol);
  const S special_tol = opts.special_tol_scale * (S(1) + a2);
  const bool circ = cp.circular();
  const Position pos = classify_by_roots(rs, special, special_tol, circ);

  std::optional<Vec3<S>> tp;
  if (opts.want_tangent_point && (pos == Position::TI || pos == Position::TE)) {
    S lambda = S(0);
    bool have = false;
    if (pos == Position::TE) {
      for (const auto& en : rs.real_roots)
        if (en.value > S(0) && en.multiplicity >= 2) {
          lambda = en.value;
          have = true;
          break;
        }
    } else {
      have = detail::interior_is_tangent(rs, special, special_tol, circ, &lambda);
    }
    if (have) {
      const Quadric<S> P0 = standard_paraboloid_quadric(cp.paraboloid_a, cp.paraboloid_b);
      const Quadric<S> E0 = quadric_from_sphere(cp.sphere);
      try {
        tp = tangent_point(P0, E0, lambda);
      } catch (const Error&) {
        tp.reset();
      }
    }
  }

  return Classification<S>{pos,
                           std::move(rs),
                           delta,
                           special,
                           std::move(tp),
                           small,
                           q,
                           std::move(cp),
                           abs(delta) - delta_zero_band(q)};
}

}  // namespace quadpos
