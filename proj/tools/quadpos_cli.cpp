#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "quadpos/oracle.hpp"
#include "quadpos/scene.hpp"
#include "quadpos/sweep.hpp"

namespace {

using namespace quadpos;

int run_classify(const std::string& scene_path, bool json_out) {
  const SceneFile sc = load_scene(scene_path);
  const Classification<double> c = classify(sc.ellipsoid(), sc.paraboloid());
  if (json_out) {
    std::cout << report_to_json(c, sc) << "\n";
  } else {
    std::cout << report_to_text(c);
  }
  if (!c.smallness.satisfied) {
    std::cerr << "warning: smallness condition violated (margin " << fmt12(c.smallness.margin)
              << "); verdict reliable only under it\n";
    return 4;
  }
  return 0;
}

int run_check(const std::string& scene_path) {
  const SceneFile sc = load_scene(scene_path);
  const auto e = sc.ellipsoid();
  const auto p = sc.paraboloid();
  const SmallnessReport<double> rep = smallness_check(e, p);
  std::cout << "paraboloid max curvature: " << fmt12(rep.paraboloid_max_curvature) << "\n";
  std::cout << "ellipsoid min curvature:  " << fmt12(rep.ellipsoid_min_curvature) << "\n";
  std::cout << "satisfied: " << (rep.satisfied ? "yes" : "no") << " (margin "
            << fmt12(rep.margin) << ")\n";
  // the same condition in the canonical frame reads 2r <= a^2
  const CanonicalPair<double> cp = canonicalize(e, p);
  std::cout << "canonical form: 2r = " << fmt12(2 * cp.sphere.radius)
            << " vs a^2 = " << fmt12(cp.paraboloid_a * cp.paraboloid_a) << "\n";
  return rep.satisfied ? 0 : 4;
}

int run_sweep(const std::string& scene_path, const std::vector<double>& from_v,
              const std::vector<double>& to_v, int steps, double tol) {
  const SceneFile sc = load_scene(scene_path);
  if (from_v.size() != 3 || to_v.size() != 3)
    throw InvalidParameters("sweep: --from and --to need 3 comma-separated numbers");
  const Vec3<double> from(from_v[0], from_v[1], from_v[2]);
  const Vec3<double> to(to_v[0], to_v[1], to_v[2]);
  const SweepResult<double> res = sweep(sc.ellipsoid(), sc.paraboloid(), from, to, steps, tol);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& ev : res.events) {
    std::cout << "t=" << fmt12(ev.t) << "  " << to_string(ev.from) << " -> "
              << to_string(ev.to) << "  bracket=" << fmt12(ev.bracket_width) << "\n";
  }
  if (!res.smallness.satisfied) {
    std::cerr << "warning: smallness condition violated along the path (margin "
              << fmt12(res.smallness.margin) << ")\n";
    return 4;
  }
  return 0;
}

int run_oracle_agree(std::uint64_t seed, int trials, int samples) {
  const AgreementStats<double> st = agreement_test<double>(seed, trials, samples);
  std::cout << "seed: " << seed << "\n";
  std::cout << "scenes: " << st.total << "  compared: " << st.compared
            << "  skipped (tangent/near-band): " << st.skipped << "\n";
  std::cout << "agreed: " << st.agreed << " / " << st.compared;
  if (st.compared > 0)
    std::cout << " (" << fmt12(100.0 * st.agreed / st.compared) << "%)";
  std::cout << "\n";
  std::cout << "disagreed: " << st.disagreements.size() << "\n";
  for (const auto& d : st.disagreements) {
    std::cout << "disagreement: classifier=" << to_string(d.classifier_position)
              << " oracle=" << to_string(d.oracle_position) << "\n";
    std::cout << scene_to_json(make_scene(d.ellipsoid, d.paraboloid)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relative position of an ellipsoid and an elliptic paraboloid"};
  app.require_subcommand(1);

  std::string scene_path;
  bool json_out = false;
  std::vector<double> from_v, to_v;
  int steps = 100;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  int trials = 100;
  int samples = 2000;

  auto* cmd_classify = app.add_subcommand("classify", "classify one scene");
  cmd_classify->add_option("--scene", scene_path, "scene JSON file")->required();
  cmd_classify->add_flag("--json", json_out, "emit the JSON report");

  auto* cmd_sweep =
      app.add_subcommand("sweep", "contact events while the ellipsoid center moves on a segment");
  cmd_sweep->add_option("--scene", scene_path, "scene JSON file")->required();
  cmd_sweep->add_option("--from", from_v, "start center X,Y,Z")->delimiter(',')->required();
  cmd_sweep->add_option("--to", to_v, "end center X,Y,Z")->delimiter(',')->required();
  cmd_sweep->add_option("--steps", steps, "number of uniform samples minus one");
  cmd_sweep->add_option("--tol", tol, "bracket width for each event");

  auto* cmd_check = app.add_subcommand("check", "smallness condition report");
  cmd_check->add_option("--scene", scene_path, "scene JSON file")->required();

  auto* cmd_oracle = app.add_subcommand("oracle", "sampling cross-checks");
  cmd_oracle->require_subcommand(1);
  auto* cmd_agree =
      cmd_oracle->add_subcommand("agree", "classifier vs sampling oracle on random scenes");
  cmd_agree->add_option("--trials", trials, "number of random scenes");
  cmd_agree->add_option("--seed", seed, "PRNG seed");
  cmd_agree->add_option("--samples", samples, "lattice points per scene");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // malformed invocation
  }

  try {
    if (*cmd_classify) return run_classify(scene_path, json_out);
    if (*cmd_sweep) return run_sweep(scene_path, from_v, to_v, steps, tol);
    if (*cmd_check) return run_check(scene_path);
    if (*cmd_agree) return run_oracle_agree(seed, trials, samples);
  } catch (const quadpos::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
