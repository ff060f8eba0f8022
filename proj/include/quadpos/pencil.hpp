#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "reduction.hpp"

namespace quadpos {

// Monic quartic lambda^4 + c3 l^3 + c2 l^2 + c1 l + c0; `scale` is the factor
// such that scale * p(lambda) = det(lambda*P + E) (for a canonical pair,
// -1/(4 a^2 b^2)).
template <class S>
struct QuarticPoly {
  S c3, c2, c1, c0;
  S scale;
};

template <class S>
struct RootEntry {
  S value;
  int multiplicity;
};

template <class S>
struct RootSet {
  std::vector<RootEntry<S>> real_roots;  // sorted ascending
  int complex_pairs = 0;
  S tolerance = S(0);  // clustering width used
};

// Default clustering width for real_roots.
template <class S>
S default_cluster_tol(const QuarticPoly<S>& q) {
  using std::abs;
  const S cmax = std::max({abs(q.c3), abs(q.c2), abs(q.c1), abs(q.c0)});
  return S(1e-7) * (S(1) + cmax);
}

// Half-width of the Delta == 0 band (Delta is degree 6 in the coefficients).
template <class S>
S delta_zero_band(const QuarticPoly<S>& q) {
  using std::abs;
  const S cmax = std::max({abs(q.c3), abs(q.c2), abs(q.c1), abs(q.c0)});
  const S s = S(1) + cmax;
  const S s3 = s * s * s;
  return S(1e-8) * s3 * s3;
}

// Closed-form coefficients for the canonical (sphere, standard paraboloid)
// pair.
template <class S>
QuarticPoly<S> quartic_from_canonical(const CanonicalPair<S>& cp) {
  const S a2 = cp.paraboloid_a * cp.paraboloid_a;
  const S b2 = cp.paraboloid_b * cp.paraboloid_b;
  const S xc = cp.sphere.center[0];
  const S yc = cp.sphere.center[1];
  const S zc = cp.sphere.center[2];
  const S r2 = cp.sphere.radius * cp.sphere.radius;

  QuarticPoly<S> q;
  q.c3 = S(4) * zc + a2 + b2;
  q.c2 = S(4) * zc * (a2 + b2) - S(4) * (xc * xc + yc * yc - r2) + a2 * b2;
  q.c1 = S(4) * (zc * a2 * b2 - yc * yc * a2 - xc * xc * b2 + r2 * (a2 + b2));
  q.c0 = S(4) * a2 * b2 * r2;
  q.scale = S(-1) / (S(4) * a2 * b2);
  return q;
}

// det(lambda*P + E) extracted by evaluating the 4x4 determinant at the five
// nodes -2..2 and interpolating with the exact rational inverse Vandermonde.
template <class S>
QuarticPoly<S> characteristic_quartic(const Quadric<S>& P, const Quadric<S>& E) {
  std::array<S, 5> f;
  for (int i = 0; i < 5; ++i) f[i] = Mat4<S>(S(i - 2) * P.m + E.m).determinant();

  // rows of V^{-1} for nodes (-2,-1,0,1,2), denominators 12/24
  const S a0 = f[2];
  const S a1 = (f[0] - f[4]) / S(12) + S(2) * (f[3] - f[1]) / S(3);
  const S a2 = -(f[0] + f[4]) / S(24) + S(2) * (f[1] + f[3]) / S(3) - S(5) * f[2] / S(4);
  const S a3 = (f[4] - f[0]) / S(12) + (f[1] - f[3]) / S(6);
  const S a4 = (f[0] + f[4]) / S(24) - (f[1] + f[3]) / S(6) + f[2] / S(4);

  const S pnorm = P.m.cwiseAbs().maxCoeff();
  const S p4 = pnorm * pnorm * pnorm * pnorm;
  using std::abs;
  if (!(abs(a4) > S(1e-12) * std::max(p4, std::numeric_limits<S>::min())))
    throw DegeneratePencil("characteristic_quartic: lambda^4 coefficient vanishes");

  return QuarticPoly<S>{a3 / a4, a2 / a4, a1 / a4, a0 / a4, a4};
}

// The 16-term quartic discriminant; Delta < 0 <=> one conjugate pair,
// Delta = 0 <=> multiple root, Delta > 0 <=> four distinct reals (two
// conjugate pairs cannot occur for valid pairs).
template <class S>
S discriminant(const QuarticPoly<S>& q) {
  const S c3 = q.c3, c2 = q.c2, c1 = q.c1, c0 = q.c0;
  const S c3_2 = c3 * c3, c3_3 = c3_2 * c3, c3_4 = c3_2 * c3_2;
  const S c2_2 = c2 * c2, c2_3 = c2_2 * c2, c2_4 = c2_2 * c2_2;
  const S c1_2 = c1 * c1, c1_3 = c1_2 * c1, c1_4 = c1_2 * c1_2;
  const S c0_2 = c0 * c0, c0_3 = c0_2 * c0;
  return S(256) * c0_3 - S(192) * c3 * c1 * c0_2 - S(128) * c2_2 * c0_2 +
         S(144) * c2 * c1_2 * c0 - S(27) * c1_4 + S(144) * c3_2 * c2 * c0_2 -
         S(6) * c3_2 * c1_2 * c0 - S(80) * c3 * c2_2 * c1 * c0 + S(18) * c3 * c2 * c1_3 +
         S(16) * c2_4 * c0 - S(4) * c2_3 * c1_2 - S(27) * c3_4 * c0_2 +
         S(18) * c3_3 * c2 * c1 * c0 - S(4) * c3_3 * c1_3 - S(4) * c3_2 * c2_3 * c0 +
         c3_2 * c2_2 * c1_2;
}

// Sign changes in (1, c3, c2, c1, c0), zeros skipped.
template <class S>
int descartes_sign_changes(const QuarticPoly<S>& q) {
  const std::array<S, 5> c{S(1), q.c3, q.c2, q.c1, q.c0};
  int changes = 0;
  S prev = S(1);
  for (int i = 1; i < 5; ++i) {
    if (c[i] == S(0)) continue;
    if ((c[i] > S(0)) != (prev > S(0))) ++changes;
    prev = c[i];
  }
  return changes;
}

namespace detail {

// Monic polynomials of degree <= 4 as ascending coefficient arrays:
// c[k] is the coefficient of x^k, c[deg] = 1.

// p and all derivatives (not divided by factorials) at x.
template <class S, std::size_t N>
std::array<S, N> eval_derivatives(const std::array<S, N>& c, int deg, S x) {
  std::array<S, N> d{};
  for (int i = deg; i >= 0; --i) {
    for (int k = deg - i; k > 0; --k) d[k] = d[k] * x + d[k - 1];
    d[0] = d[0] * x + c[i];
  }
  S fact = S(1);
  for (int k = 2; k <= deg; ++k) {
    fact *= S(k);
    d[k] *= fact;
  }
  return d;
}

template <class S, std::size_t N>
std::array<S, N> derivative(const std::array<S, N>& c, int deg) {
  std::array<S, N> d{};
  for (int k = 1; k <= deg; ++k) d[k - 1] = S(k) * c[k];
  return d;
}

template <class S, int D, std::size_t N>
std::array<std::complex<S>, D> companion_eigenvalues(const std::array<S, N>& c) {
  Eigen::Matrix<S, D, D> comp = Eigen::Matrix<S, D, D>::Zero();
  for (int i = 1; i < D; ++i) comp(i, i - 1) = S(1);
  for (int i = 0; i < D; ++i) comp(i, D - 1) = -c[i];
  Eigen::EigenSolver<Eigen::Matrix<S, D, D>> es(comp);
  std::array<std::complex<S>, D> out;
  for (int i = 0; i < D; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

// Newton iteration on the polynomial c of degree `deg`.
template <class S, std::size_t N>
S newton_polish(const std::array<S, N>& c, int deg, S x0) {
  const S eps = std::numeric_limits<S>::epsilon();
  S x = x0;
  for (int it = 0; it < 50; ++it) {
    auto d = eval_derivatives(c, deg, x);
    if (d[1] == S(0)) break;
    const S step = d[0] / d[1];
    x -= step;
    using std::abs;
    if (abs(step) <= S(4) * eps * (S(1) + abs(x))) break;
  }
  return x;
}

// Real roots of a monic polynomial of degree <= 3 (used on the derivative
// ladder, so isolation is not critical here).
template <class S>
std::vector<S> low_degree_real_roots(const std::array<S, 5>& c, int deg) {
  using std::abs;
  std::vector<S> out;
  if (deg == 1) {
    out.push_back(-c[0]);
  } else if (deg == 2) {
    const S disc = c[1] * c[1] - S(4) * c[0];
    if (disc >= S(0)) {
      const S sq = std::sqrt(disc);
      const S qq = S(-0.5) * (c[1] + std::copysign(sq, c[1]));
      if (qq != S(0)) {
        out.push_back(qq);
        out.push_back(c[0] / qq);
      } else {
        out.push_back(S(-0.5) * c[1]);
      }
    }
  } else {
    for (const auto& z : companion_eigenvalues<S, 3>(c))
      if (abs(z.imag()) <= S(1e-7) * (S(1) + abs(z.real()))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Certify an m-fold root near y_init: polish on p^(m-1), bound the radius of
// the m local roots from the Taylor coefficients (Fujiwara), check that the
// truncated local model dominates, and accept when the radius is inside
// max(tol, coefficient-rounding noise floor). The noise floor matters because
// rounding the coefficients of an exact m-fold root already scatters it by
// ~eps^(1/m) (~1e-5 for a triple), far above the default cluster width. On
// success *accept_out is the radius within which the m seed eigenvalues must
// corroborate the cluster.
template <class S>
bool certify_multiple(const std::array<S, 5>& c, int deg, S y_init, int m, S tol, S* y_out,
                      S* accept_out) {
  using std::abs;
  using std::pow;
  const S eps = std::numeric_limits<S>::epsilon();

  std::array<S, 5> dm1 = c;
  for (int k = 1; k < m; ++k) dm1 = derivative(dm1, deg - k + 1);
  // make p^(m-1) monic for a well-scaled Newton
  std::array<S, 5> dm1n = dm1;
  const S lead = dm1[deg - m + 1];
  for (auto& v : dm1n) v /= lead;
  const S y = newton_polish(dm1n, deg - m + 1, y_init);
  if (!std::isfinite(y)) return false;

  auto d = eval_derivatives(c, deg, y);
  S fact_m = S(1);
  for (int k = 2; k <= m; ++k) fact_m *= S(k);
  const S am = d[m] / fact_m;  // Taylor coefficient of h^m
  if (am == S(0)) return false;

  S radius = S(0);
  S fact_j = S(1);
  for (int j = 0; j < m; ++j) {
    if (j >= 2) fact_j *= S(j);
    const S aj = d[j] / fact_j;
    radius = std::max(radius, pow(abs(aj / am), S(1) / S(m - j)));
  }
  radius *= S(2);  // Fujiwara bound on the truncated model's roots

  // normwise coefficient perturbation: both coefficient rounding and the
  // companion eigensolver's backward error act like eps * max|c_k| on every
  // coefficient, so the cluster scatters by (eps * cmax * sum |y|^k / am)^(1/m)
  S cmax = S(0), pow_sum = S(0), yp = S(1);
  for (int k = 0; k <= deg; ++k) {
    cmax = std::max(cmax, abs(c[k]));
    pow_sum += yp;
    yp *= abs(y);
  }
  const S noise = pow(S(64) * eps * cmax * pow_sum / abs(am), S(1) / S(m));
  const S accept = std::max(tol, noise);
  if (!(radius <= accept)) return false;

  // the neglected Taylor tail must be dominated at the acceptance radius
  if (m < deg) {
    const S rad = std::max(radius, noise);
    S tail = S(0);
    S fact_k = fact_m;
    for (int k = m + 1; k <= deg; ++k) {
      fact_k *= S(k);
      tail += abs(d[k]) / fact_k * pow(rad, S(k - m));
    }
    if (!(tail <= S(0.5) * abs(am))) return false;
  }

  *y_out = y;
  *accept_out = accept;
  return true;
}

template <class S>
struct IsolatedRoots {
  std::vector<RootEntry<S>> entries;  // sorted ascending
  int complex_pairs = 0;
};

// Shared machinery for the quartic (and the deflated cubic of the circular
// case): companion eigenvalues seed the locations, multiple roots are
// certified at critical points of the derivative ladder, roots closer than
// tol merge with multiplicities summed.
template <class S, int D>
IsolatedRoots<S> isolate_roots(const std::array<S, 5>& c, S tol) {
  using std::abs;
  auto eigs = companion_eigenvalues<S, D>(c);
  std::array<bool, D> consumed{};
  IsolatedRoots<S> out;

  auto near_existing = [&](S y) {
    for (const auto& e : out.entries)
      if (abs(e.value - y) <= tol) return true;
    return false;
  };

  // multiple roots, highest multiplicity first
  for (int m = D; m >= 2; --m) {
    std::array<S, 5> dm1 = c;
    for (int k = 1; k < m; ++k) dm1 = derivative(dm1, D - k + 1);
    const S lead = dm1[D - m + 1];
    std::array<S, 5> dm1n{};
    for (int k = 0; k <= D - m + 1; ++k) dm1n[k] = dm1[k] / lead;
    std::vector<S> candidates = low_degree_real_roots(dm1n, D - m + 1);

    for (S y0 : candidates) {
      if (near_existing(y0)) continue;
      S y, accept;
      if (!certify_multiple(c, D, y0, m, tol, &y, &accept)) continue;
      if (near_existing(y)) continue;

      // the m nearest seed eigenvalues must corroborate the cluster
      std::vector<int> order;
      for (int i = 0; i < D; ++i)
        if (!consumed[i]) order.push_back(i);
      if (static_cast<int>(order.size()) < m) continue;
      std::sort(order.begin(), order.end(), [&](int i, int j) {
        return abs(eigs[i] - std::complex<S>(y)) < abs(eigs[j] - std::complex<S>(y));
      });
      if (abs(eigs[order[m - 1]] - std::complex<S>(y)) > accept) continue;
      for (int k = 0; k < m; ++k) consumed[order[k]] = true;
      out.entries.push_back({y, m});
    }
  }

  // leftover seeds: simple real roots and conjugate pairs
  std::vector<std::complex<S>> leftovers;
  for (int i = 0; i < D; ++i)
    if (!consumed[i]) leftovers.push_back(eigs[i]);
  std::sort(leftovers.begin(), leftovers.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<std::complex<S>> complex_left;
  for (const auto& z : leftovers) {
    if (abs(z.imag()) <= tol) {
      out.entries.push_back({newton_polish(c, D, z.real()), 1});
    } else {
      complex_left.push_back(z);
    }
  }
  if (complex_left.size() % 2 != 0) {
    // defensive: a conjugate pair split by consumption; treat the stray as real
    auto it = std::min_element(
        complex_left.begin(), complex_left.end(),
        [](const auto& a, const auto& b) { return abs(a.imag()) < abs(b.imag()); });
    out.entries.push_back({newton_polish(c, D, it->real()), 1});
    complex_left.erase(it);
  }
  out.complex_pairs = static_cast<int>(complex_left.size()) / 2;

  // final merge pass: entries within tol collapse, multiplicities summed
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<RootEntry<S>> merged;
  for (const auto& e : out.entries) {
    if (!merged.empty() && e.value - merged.back().value <= tol) {
      auto& back = merged.back();
      back.value = (back.value * S(back.multiplicity) + e.value * S(e.multiplicity)) /
                   S(back.multiplicity + e.multiplicity);
      back.multiplicity += e.multiplicity;
    } else {
      merged.push_back(e);
    }
  }
  out.entries = std::move(merged);
  return out;
}

}  // namespace detail

// All real roots of the quartic with multiplicities.
template <class S>
RootSet<S> real_roots(const QuarticPoly<S>& q, S tol) {
  using std::abs;
  if (!(tol > S(0))) throw InvalidParameters("real_roots: tol must be > 0");

  const std::array<S, 5> c{q.c0, q.c1, q.c2, q.c3, S(1)};
  auto iso = detail::isolate_roots<S, 4>(c, tol);
  RootSet<S> rs;
  rs.real_roots = std::move(iso.entries);
  rs.complex_pairs = iso.complex_pairs;
  rs.tolerance = tol;

  int total = 2 * rs.complex_pairs;
  for (const auto& e : rs.real_roots) total += e.multiplicity;
  if (total > 4) throw ToleranceTooCoarse("real_roots: merged multiplicity exceeds degree");

  const S cmax = std::max({abs(q.c3), abs(q.c2), abs(q.c1), abs(q.c0)});
  const S gate = tol * std::max(S(1), cmax);
  for (const auto& e : rs.real_roots) {
    const S residual = abs(detail::eval_derivatives(c, 4, e.value)[0]);
    if (!(residual <= gate))
      throw ToleranceTooCoarse("real_roots: residual check failed after merging");
  }
  return rs;
}

}  // namespace quadpos
