#include "quadpos/scene.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace quadpos {

using nlohmann::json;

namespace {

void require_object_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw InvalidParameters("scene: " + where + " must be an object");
  for (const char* k : keys)
    if (!j.contains(k)) throw InvalidParameters("scene: missing field " + where + "." + k);
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) throw InvalidParameters("scene: unknown field " + where + "." + item.key());
  }
}

double read_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidParameters("scene: " + where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidParameters("scene: " + where + " must be finite");
  return v;
}

Vec3<double> read_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw InvalidParameters("scene: " + where + " must be an array of 3 numbers");
  Vec3<double> v;
  for (int i = 0; i < 3; ++i) v[i] = read_number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Quat<double> read_quat(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4)
    throw InvalidParameters("scene: " + where + " must be an array [w, x, y, z]");
  double c[4];
  for (int i = 0; i < 4; ++i) c[i] = read_number(j[i], where + "[" + std::to_string(i) + "]");
  Quat<double> q(c[0], c[1], c[2], c[3]);
  if (std::abs(q.norm() - 1.0) > 1e-6)
    throw InvalidParameters("scene: " + where + " is not a unit quaternion (|norm - 1| > 1e-6)");
  q.normalize();
  return q;
}

double read_positive(const json& j, const std::string& where) {
  const double v = read_number(j, where);
  if (!(v > 0)) throw InvalidParameters("scene: " + where + " must be > 0");
  return v;
}

json vec3_json(const Vec3<double>& v) { return json::array({v[0], v[1], v[2]}); }
json quat_json(const Quat<double>& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

}  // namespace

EllipsoidParams<double> SceneFile::ellipsoid() const {
  return EllipsoidParams<double>(ellipsoid_center, ellipsoid_semi_axes, ellipsoid_orientation);
}

ParaboloidParams<double> SceneFile::paraboloid() const {
  return ParaboloidParams<double>(paraboloid_vertex, paraboloid_orientation, paraboloid_a,
                                  paraboloid_b);
}

SceneFile parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParameters(std::string("scene: JSON parse error: ") + e.what());
  }
  require_object_keys(j, "scene", {"ellipsoid", "paraboloid"});
  const json& je = j["ellipsoid"];
  const json& jp = j["paraboloid"];
  require_object_keys(je, "ellipsoid", {"center", "semi_axes", "orientation"});
  require_object_keys(jp, "paraboloid", {"vertex", "orientation", "a", "b"});

  SceneFile sc;
  sc.ellipsoid_center = read_vec3(je["center"], "ellipsoid.center");
  sc.ellipsoid_semi_axes = read_vec3(je["semi_axes"], "ellipsoid.semi_axes");
  for (int i = 0; i < 3; ++i)
    if (!(sc.ellipsoid_semi_axes[i] > 0))
      throw InvalidParameters("scene: ellipsoid.semi_axes[" + std::to_string(i) +
                              "] must be > 0");
  sc.ellipsoid_orientation = read_quat(je["orientation"], "ellipsoid.orientation");
  sc.paraboloid_vertex = read_vec3(jp["vertex"], "paraboloid.vertex");
  sc.paraboloid_orientation = read_quat(jp["orientation"], "paraboloid.orientation");
  sc.paraboloid_a = read_positive(jp["a"], "paraboloid.a");
  sc.paraboloid_b = read_positive(jp["b"], "paraboloid.b");
  return sc;
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameters("scene: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

SceneFile make_scene(const EllipsoidParams<double>& e, const ParaboloidParams<double>& p) {
  SceneFile sc;
  sc.ellipsoid_center = e.center;
  sc.ellipsoid_semi_axes = e.semi_axes;
  sc.ellipsoid_orientation = e.orientation;
  sc.paraboloid_vertex = p.vertex;
  sc.paraboloid_orientation = p.orientation;
  sc.paraboloid_a = p.a;
  sc.paraboloid_b = p.b;
  return sc;
}

namespace {

json scene_json_object(const SceneFile& sc) {
  return json{{"ellipsoid",
               {{"center", vec3_json(sc.ellipsoid_center)},
                {"semi_axes", vec3_json(sc.ellipsoid_semi_axes)},
                {"orientation", quat_json(sc.ellipsoid_orientation)}}},
              {"paraboloid",
               {{"vertex", vec3_json(sc.paraboloid_vertex)},
                {"orientation", quat_json(sc.paraboloid_orientation)},
                {"a", sc.paraboloid_a},
                {"b", sc.paraboloid_b}}}};
}

}  // namespace

std::string scene_to_json(const SceneFile& sc) { return scene_json_object(sc).dump(2); }

double round_sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string report_to_json(const Classification<double>& c, const SceneFile& sc) {
  json roots = json::array();
  for (const auto& e : c.roots.real_roots)
    roots.push_back({{"value", round_sig12(e.value)}, {"multiplicity", e.multiplicity}});
  json tp;
  if (c.tangent_point) {
    tp = json::array({round_sig12((*c.tangent_point)[0]), round_sig12((*c.tangent_point)[1]),
                      round_sig12((*c.tangent_point)[2])});
  } else {
    tp = nullptr;
  }
  json rep{{"position", to_string(c.position)},
           {"roots", roots},
           {"complex_pairs", c.roots.complex_pairs},
           {"coefficients", json::array({round_sig12(c.quartic.c3), round_sig12(c.quartic.c2),
                                         round_sig12(c.quartic.c1), round_sig12(c.quartic.c0)})},
           {"delta", round_sig12(c.delta)},
           {"smallness",
            {{"satisfied", c.smallness.satisfied}, {"margin", round_sig12(c.smallness.margin)}}},
           {"tangent_point", tp},
           {"scene", scene_json_object(sc)}};
  return rep.dump(2);
}

std::string report_to_text(const Classification<double>& c) {
  std::ostringstream out;
  out << "position: " << to_string(c.position) << "\n";
  out << "coefficients: c3=" << fmt12(c.quartic.c3) << " c2=" << fmt12(c.quartic.c2)
      << " c1=" << fmt12(c.quartic.c1) << " c0=" << fmt12(c.quartic.c0) << "\n";
  out << "delta: " << fmt12(c.delta) << "\n";
  out << "roots:";
  if (c.roots.real_roots.empty()) out << " (none real)";
  for (const auto& e : c.roots.real_roots) {
    out << " " << fmt12(e.value);
    if (e.multiplicity > 1) out << " (x" << e.multiplicity << ")";
  }
  if (c.roots.complex_pairs > 0)
    out << "  [+" << c.roots.complex_pairs << " conjugate pair"
        << (c.roots.complex_pairs > 1 ? "s" : "") << "]";
  out << "\n";
  out << "smallness: " << (c.smallness.satisfied ? "satisfied" : "VIOLATED")
      << " (margin " << fmt12(c.smallness.margin) << ")\n";
  if (c.tangent_point) {
    out << "tangent point (canonical frame): (" << fmt12((*c.tangent_point)[0]) << ", "
        << fmt12((*c.tangent_point)[1]) << ", " << fmt12((*c.tangent_point)[2]) << ")\n";
  }
  return out.str();
}

}  // namespace quadpos
