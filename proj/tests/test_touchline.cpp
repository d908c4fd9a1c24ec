#include <cmath>
#include <random>

#include "doctest.h"

#include "adtl/errors.hpp"
#include "adtl/scene_sim.hpp"
#include "adtl/touchline.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace adtl;
using testing_support::collinear_arm;
using testing_support::right_angle_arm;

TEST_CASE("segment vectors by direct subtraction") {
  const auto a = segment_vectors(collinear_arm());
  CHECK(a.if_vec.x == doctest::Approx(0.8));
  CHECK(a.if_vec.y == 0.0);
  CHECK(a.fa_vec == Vec2{1.0, 0.0});
  CHECK(a.ua_vec == Vec2{1.0, 0.0});

  const auto b = segment_vectors(right_angle_arm());
  CHECK(b.if_vec == Vec2{1.0, 0.0});
  CHECK(b.fa_vec == Vec2{0.0, 1.0});
  CHECK(b.ua_vec == Vec2{1.0, 0.0});
}

TEST_CASE("segment vectors match scalar recomputation on simulator skeletons") {
  SimSpec spec;
  spec.n_scenes = 200;
  spec.noise_px = 4.0;
  spec.rng_seed = 11;
  for (const auto& ls : generate(spec)) {
    const Skeleton& s = ls.scene.skeleton;
    const auto v = segment_vectors(s);
    CHECK(std::abs(v.if_vec.x - (s.fingertip.x - s.mcp.x)) < 1e-12);
    CHECK(std::abs(v.if_vec.y - (s.fingertip.y - s.mcp.y)) < 1e-12);
    CHECK(std::abs(v.fa_vec.x - (s.wrist.x - s.elbow.x)) < 1e-12);
    CHECK(std::abs(v.fa_vec.y - (s.wrist.y - s.elbow.y)) < 1e-12);
    CHECK(std::abs(v.ua_vec.x - (s.elbow.x - s.shoulder.x)) < 1e-12);
    CHECK(std::abs(v.ua_vec.y - (s.elbow.y - s.shoulder.y)) < 1e-12);
  }
}

TEST_CASE("segment vectors reject degenerate skeletons") {
  Skeleton s = collinear_arm();
  s.mcp = s.fingertip;
  CHECK_THROWS_AS(segment_vectors(s), Error);
  try {
    segment_vectors(s);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSkeleton);
  }
}

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity({1, 0}, {1, 0}) == 1.0);
  CHECK(cosine_similarity({1, 0}, {0, 1}) == 0.0);
  CHECK(cosine_similarity({1, 0}, {-1, 0}) == -1.0);
  CHECK(cosine_similarity({3, 3}, {1e-3, 1e-3}) <= 1.0);
  CHECK_THROWS_AS(cosine_similarity({0, 0}, {1, 0}), Error);
}

TEST_CASE("collinear arm selects the eye") {
  const Config c;
  const auto src = select_attention_source(collinear_arm(), c);
  CHECK(src.kind == SourceKind::Eye);
  CHECK(src.collinearity == 1.0);
  CHECK(src.point == collinear_arm().eye);
}

TEST_CASE("right-angle arm selects the MCP") {
  const Config c;
  const auto src = select_attention_source(right_angle_arm(), c);
  CHECK(src.kind == SourceKind::MCP);
  CHECK(src.collinearity == 0.0);
  CHECK(src.point == right_angle_arm().mcp);
}

TEST_CASE("collinearity equal to the threshold goes to the MCP") {
  Config c;
  c.collinearity_threshold = 0.0;
  CHECK(select_attention_source(right_angle_arm(), c).kind == SourceKind::MCP);
  c.collinearity_threshold = -1e-12;
  CHECK(select_attention_source(right_angle_arm(), c).kind == SourceKind::Eye);
}

// The largest of three pairwise cosines in the plane is at least -1/2, so
// the most-aligned pair of valid segments never cancels. Near-degenerate
// inputs must therefore come back without ZeroSum.
TEST_CASE("most-aligned pair never cancels on valid skeletons") {
  Skeleton folded{{0, -5}, {0, 0}, {1, 0}, {0, 0}, {0.5, 0}, {1.5, 0}};
  CHECK_NOTHROW(select_attention_source(folded, Config{}));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    const double a = angle(rng);
    const Vec2 d{std::cos(a), std::sin(a)};
    // Finger folded back along the forearm, upper arm at a random angle.
    const Skeleton s{{0, -5}, {0, 0}, Vec2{0, 0} + Vec2{std::cos(angle(rng)), std::sin(angle(rng))},
                     {5, 5}, Vec2{5, 5} - 1e-3 * d, Vec2{5, 5} - 1e-3 * d - 1e-3 * d};
    CHECK_NOTHROW(select_attention_source(s, Config{}));
  }
}

TEST_CASE("select_attention_source matches brute-force enumeration") {
  std::mt19937_64 rng(5);
  const Config c;
  int checked = 0;
  while (checked < 2000) {
    const Skeleton s = testing_support::random_skeleton(rng);
    const auto src = select_attention_source(s, c);
    CHECK(std::abs(src.collinearity - oracle::brute_force_collinearity(s)) < 1e-12);
    ++checked;
  }
}

TEST_CASE("selection is scale invariant") {
  std::mt19937_64 rng(17);
  const Config c;
  for (int i = 0; i < 500; ++i) {
    const Skeleton s = testing_support::random_skeleton(rng);
    const double scale = std::uniform_real_distribution<double>(0.01, 100.0)(rng);
    const Vec2 origin = testing_support::random_point(rng);
    auto scaled = [&](Vec2 p) { return origin + scale * (p - origin); };
    const Skeleton t{scaled(s.eye), scaled(s.shoulder), scaled(s.elbow),
                     scaled(s.wrist), scaled(s.mcp), scaled(s.fingertip)};
    const auto a = select_attention_source(s, c);
    const auto b = select_attention_source(t, c);
    if (std::abs(a.collinearity - c.collinearity_threshold) > 1e-9) CHECK(a.kind == b.kind);
  }
}

TEST_CASE("raising the threshold only flips Eye to MCP") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const Skeleton s = testing_support::random_skeleton(rng);
    SourceKind prev = SourceKind::Eye;
    for (double t = -0.99; t < 0.99; t += 0.02) {
      Config c;
      c.collinearity_threshold = t;
      const SourceKind k = select_attention_source(s, c).kind;
      if (prev == SourceKind::MCP) CHECK(k == SourceKind::MCP);
      prev = k;
    }
  }
}

TEST_CASE("build_touch_line") {
  const Config c;
  const Skeleton bent = right_angle_arm();
  const Skeleton straight = collinear_arm();

  const auto vtl = build_touch_line(bent, TouchLineMode::VTL, c);
  CHECK(vtl.mode == TouchLineMode::VTL);
  CHECK(vtl.source == bent.eye);
  CHECK(vtl.tip == bent.fingertip);

  const auto fl = build_touch_line(straight, TouchLineMode::FL, c);
  CHECK(fl.mode == TouchLineMode::FL);
  CHECK(fl.source == straight.mcp);

  const auto adtl_bent = build_touch_line(bent, TouchLineMode::ADTL, c);
  CHECK(adtl_bent.mode == TouchLineMode::FL);
  CHECK(adtl_bent.source == bent.mcp);
  CHECK(adtl_bent.tip == bent.fingertip);

  const auto adtl_straight = build_touch_line(straight, TouchLineMode::ADTL, c);
  CHECK(adtl_straight.mode == TouchLineMode::VTL);
  CHECK(adtl_straight.source == straight.eye);
}

TEST_CASE("resolved lines are never ADTL and sources follow the mode") {
  std::mt19937_64 rng(29);
  const Config c;
  for (int i = 0; i < 500; ++i) {
    const Skeleton s = testing_support::random_skeleton(rng);
    const auto line = build_touch_line(s, TouchLineMode::ADTL, c);
    CHECK(line.mode != TouchLineMode::ADTL);
    CHECK(line.source == (line.mode == TouchLineMode::VTL ? s.eye : s.mcp));
  }
}

TEST_CASE("eye on the fingertip is a degenerate VTL") {
  Skeleton s = collinear_arm();
  s.eye = s.fingertip;
  CHECK_THROWS_AS(build_touch_line(s, TouchLineMode::VTL, Config{}), Error);
  CHECK_NOTHROW(build_touch_line(s, TouchLineMode::FL, Config{}));
}
