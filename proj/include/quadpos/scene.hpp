#pragma once

#include <string>

#include "classifier.hpp"

namespace quadpos {

// On-disk scene: one JSON document, strict field set, quaternions as
// [w, x, y, z]. Values are stored post-validation (quaternions normalized),
// so writing and re-reading a scene reproduces the classification verdict.
struct SceneFile {
  Vec3<double> ellipsoid_center;
  Vec3<double> ellipsoid_semi_axes;
  Quat<double> ellipsoid_orientation;
  Vec3<double> paraboloid_vertex;
  Quat<double> paraboloid_orientation;
  double paraboloid_a;
  double paraboloid_b;

  EllipsoidParams<double> ellipsoid() const;
  ParaboloidParams<double> paraboloid() const;
};

// Throws InvalidParameters with a message naming the offending field.
SceneFile parse_scene(const std::string& text);
SceneFile load_scene(const std::string& path);

SceneFile make_scene(const EllipsoidParams<double>& e, const ParaboloidParams<double>& p);

std::string scene_to_json(const SceneFile& sc);

// Machine-readable report; numeric values rounded to 12 significant digits,
// the scene echoed verbatim for fixture round-trips.
std::string report_to_json(const Classification<double>& c, const SceneFile& sc);
std::string report_to_text(const Classification<double>& c);

// Nearest double to the 12-significant-digit decimal rendering of x.
double round_sig12(double x);
std::string fmt12(double x);

}  // namespace quadpos
