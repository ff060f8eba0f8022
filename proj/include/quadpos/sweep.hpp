#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"

namespace quadpos {

template <class S>
struct SweepEvent {
  S t;  // path parameter in [0, 1]
  Position from, to;
  S bracket_width;
};

template <class S>
struct SweepResult {
  std::vector<SweepEvent<S>> events;
  SmallnessReport<S> smallness;  // constant along the path: curvatures ignore translation
  std::vector<std::string> warnings;
};

namespace detail {

// transitions E|C and C|I pass through a tangency of zero width
inline std::optional<Position> sweep_mediator(Position a, Position b) {
  const auto pair_is = [&](Position x, Position y) {
    return (a == x && b == y) || (a == y && b == x);
  };
  if (pair_is(Position::E, Position::C)) return Position::TE;
  if (pair_is(Position::C, Position::I)) return Position::TI;
  return std::nullopt;
}

template <class S, class Eval>
void sweep_bisect(const Eval& eval, S lo, Position a, S hi, Position b, S tol,
                  std::vector<SweepEvent<S>>& out, int depth) {
  if (hi - lo <= tol || depth > 80) {
    const S mid = (lo + hi) / S(2);
    const S width = hi - lo;
    if (const auto med = sweep_mediator(a, b)) {
      out.push_back({mid, a, *med, width});
      out.push_back({mid, *med, b, width});
    } else {
      out.push_back({mid, a, b, width});
    }
    return;
  }
  const S mid = (lo + hi) / S(2);
  const Position m = eval(mid);
  if (m == a) {
    sweep_bisect(eval, mid, a, hi, b, tol, out, depth + 1);
  } else if (m == b) {
    sweep_bisect(eval, lo, a, mid, b, tol, out, depth + 1);
  } else {
    sweep_bisect(eval, lo, a, mid, m, tol, out, depth + 1);
    sweep_bisect(eval, mid, m, hi, b, tol, out, depth + 1);
  }
}

}  // namespace detail

// Classify along a straight-line path of the ellipsoid center (orientation
// fixed), then bisect every change of class down to a bracket of width <= tol.
template <class S>
SweepResult<S> sweep(const EllipsoidParams<S>& base, const ParaboloidParams<S>& par,
                     const Vec3<S>& from, const Vec3<S>& to, int steps, S tol) {
  if (steps < 2) throw InvalidParameters("sweep: steps must be >= 2");
  if (!(tol > S(0))) throw InvalidParameters("sweep: tol must be > 0");

  ClassifyOptions<S> opts;
  opts.want_tangent_point = false;
  auto eval = [&](S t) {
    const EllipsoidParams<S> e(Vec3<S>(from + t * (to - from)), base.semi_axes,
                               base.orientation);
    return classify(e, par, opts).position;
  };

  SweepResult<S> result;
  result.smallness =
      smallness_check(EllipsoidParams<S>(from, base.semi_axes, base.orientation), par);

  std::vector<S> ts(steps + 1);
  std::vector<Position> cls(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    ts[i] = S(i) / S(steps);
    cls[i] = eval(ts[i]);
  }

  auto depth_of = [](Position p) {
    switch (p) {
      case Position::E: return 0;
      case Position::TE: return 1;
      case Position::C: return 2;
      case Position::TI: return 3;
      case Position::I: return 4;
    }
    return 0;
  };
  for (int i = 0; i < steps; ++i) {
    if (std::abs(depth_of(cls[i]) - depth_of(cls[i + 1])) >= 4) {
      result.warnings.push_back("adjacent samples jump " + std::string(to_string(cls[i])) +
                                " -> " + to_string(cls[i + 1]) + " near t=" +
                                std::to_string(ts[i]) +
                                "; a contact interval may be narrower than the step");
    }
    if (cls[i] != cls[i + 1])
      detail::sweep_bisect(eval, ts[i], cls[i], ts[i + 1], cls[i + 1], tol, result.events, 0);
  }
  return result;
}

}  // namespace quadpos
