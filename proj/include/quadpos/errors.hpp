#pragma once

#include <stdexcept>
#include <string>

namespace quadpos {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter records rejected at construction (non-positive axes, bad quaternion, ...).
struct InvalidParameters : Error {
  using Error::Error;
};

// transform_quadric / AffineTransform with |det| <= 1e-12.
struct SingularTransform : Error {
  using Error::Error;
};

// canonicalize: transformed quadratic part is not an elliptic paraboloid.
struct DegenerateParaboloid : Error {
  using Error::Error;
};

// characteristic_quartic: lambda^4 coefficient vanishes.
struct DegeneratePencil : Error {
  using Error::Error;
};

// real_roots: cluster merging inconsistent with the polynomial (multiplicity > 4,
// or a merged root fails the residual gate).
struct ToleranceTooCoarse : Error {
  using Error::Error;
};

// classifier: root pattern matches no Table row (smallness violation or numerics).
struct InvalidConfiguration : Error {
  using Error::Error;
};

// tangent_point: lambda*P + S is numerically nonsingular.
struct NoKernel : Error {
  using Error::Error;
};

// tangent_point: kernel vector fails the on-both-surfaces residual check
// (the non-tangent multiple-root exception).
struct NotOnSurfaces : Error {
  using Error::Error;
};

}  // namespace quadpos
