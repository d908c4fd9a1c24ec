#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "adtl/scene_sim.hpp"
#include "adtl/validate.hpp"
#include "test_support.hpp"

using namespace adtl;

namespace {

bool has_violation(const std::vector<Violation>& v, ErrorKind kind, const std::string& field_part) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) {
    return x.kind == kind && x.field.find(field_part) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("validate_scene rejects a zero-length finger") {
  Scene s = testing_support::simple_scene();
  s.skeleton.fingertip = s.skeleton.mcp;
  const auto v = find_violations(s);
  CHECK(has_violation(v, ErrorKind::DegenerateSkeleton, "fingertip/mcp"));
  CHECK_THROWS_AS(validate_scene(s), ValidationError);
  try {
    validate_scene(s);
  } catch (const ValidationError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSkeleton);
  }
}

TEST_CASE("validate_scene rejects an empty box") {
  Scene s = testing_support::simple_scene();
  s.gt_box.x_min = 10;
  s.gt_box.x_max = 10;
  CHECK(has_violation(find_violations(s), ErrorKind::EmptyBox, "gt_box.x_min"));
}

TEST_CASE("validate_scene reports every violation with a field path") {
  Scene s = testing_support::simple_scene();
  s.skeleton.eye.x = std::numeric_limits<double>::quiet_NaN();
  s.skeleton.wrist = s.skeleton.elbow;
  s.gt_box = {90, 90, 120, 95};
  s.candidates.push_back({{1, 1, 0, 2}, 0.5});
  s.candidates.push_back({{1, 1, 2, 2}, std::numeric_limits<double>::infinity()});
  const auto v = find_violations(s);
  CHECK(has_violation(v, ErrorKind::NonFiniteValue, "skeleton.eye"));
  CHECK(has_violation(v, ErrorKind::OutOfFrame, "gt_box"));
  CHECK(has_violation(v, ErrorKind::EmptyBox, "candidates[0].box"));
  CHECK(has_violation(v, ErrorKind::NonFiniteValue, "candidates[1].conf"));
  for (const auto& x : v) CHECK_FALSE(x.field.empty());
}

TEST_CASE("wrist on elbow and elbow on shoulder are both degenerate") {
  Scene s = testing_support::simple_scene();
  s.skeleton.wrist = s.skeleton.elbow;
  s.skeleton.shoulder = s.skeleton.elbow;
  const auto v = find_violations(s);
  CHECK(has_violation(v, ErrorKind::DegenerateSkeleton, "wrist/elbow"));
  CHECK(has_violation(v, ErrorKind::DegenerateSkeleton, "elbow/shoulder"));
}

TEST_CASE("frame check allows the clamping tolerance") {
  Scene s = testing_support::simple_scene();
  s.gt_box = {-5e-7, 0, 100 + 5e-7, 100};
  CHECK(find_violations(s).empty());
  s.gt_box = {-1e-3, 0, 50, 50};
  CHECK(has_violation(find_violations(s), ErrorKind::OutOfFrame, "gt_box"));
}

TEST_CASE("simulated scenes pass validation unchanged and idempotently") {
  SimSpec spec;
  spec.n_scenes = 50;
  spec.noise_px = 2.0;
  spec.rng_seed = 3;
  for (const auto& ls : generate(spec)) {
    const Scene& once = validate_scene(ls.scene);
    CHECK(once == ls.scene);
    CHECK(validate_scene(once) == once);
  }
}

TEST_CASE("config validation") {
  Config c;
  CHECK_NOTHROW(validate_config(c));
  CHECK(c.collinearity_threshold == 0.95);
  CHECK(c.iou_thresholds == std::vector<double>{0.25, 0.5, 0.75});

  Config bad = c;
  bad.collinearity_threshold = 1.0;
  CHECK_THROWS_AS(validate_config(bad), Error);
  bad = c;
  bad.size_bucket_cutoffs = {0.05, 0.01};
  CHECK_THROWS_AS(validate_config(bad), Error);
  bad = c;
  bad.iou_thresholds = {0.5, 0.25};
  CHECK_THROWS_AS(validate_config(bad), Error);
  bad = c;
  bad.rerank_weight = 1.5;
  CHECK_THROWS_AS(validate_config(bad), Error);
}

TEST_CASE("mode parsing") {
  CHECK(parse_mode("adtl") == TouchLineMode::ADTL);
  CHECK(parse_mode("VTL") == TouchLineMode::VTL);
  CHECK(parse_mode("Fl") == TouchLineMode::FL);
  CHECK_FALSE(parse_mode("eye").has_value());
}
