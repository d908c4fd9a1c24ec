#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adtl {

// 2D point or displacement in image pixels, y increasing downward.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Keypoint2D = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Keypoints of a single pointer.
struct Skeleton {
  Keypoint2D eye;
  Keypoint2D shoulder;
  Keypoint2D elbow;
  Keypoint2D wrist;
  Keypoint2D mcp;
  Keypoint2D fingertip;

  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

// Axis-aligned box in corner form.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Candidate {
  BoundingBox box;
  double confidence = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct ImageSize {
  double width = 0.0;
  double height = 0.0;

  double diagonal() const { return std::hypot(width, height); }
};

struct Scene {
  std::string id;
  double image_width = 0.0;
  double image_height = 0.0;
  Skeleton skeleton;
  BoundingBox gt_box;
  std::vector<Candidate> candidates;
  // Externally supplied prediction, used when there are no candidates.
  std::optional<BoundingBox> pred_box;
  std::string text;

  ImageSize image() const { return {image_width, image_height}; }

  friend bool operator==(const Scene&, const Scene&) = default;
};

// VTL: eye -> fingertip. FL: MCP -> fingertip. ADTL is a request that
// resolves to one of the other two.
enum class TouchLineMode { VTL, FL, ADTL };

std::string_view to_string(TouchLineMode mode);
// Accepts "vtl", "fl", "adtl" in any case.
std::optional<TouchLineMode> parse_mode(std::string_view text);

struct SizeBucketCutoffs {
  double small_max_frac = 0.01;
  double medium_max_frac = 0.05;
};

struct Config {
  double collinearity_threshold = 0.95;
  double rerank_weight = 0.5;
  double focal_gamma = 2.0;
  double focal_alpha = 0.25;
  SizeBucketCutoffs size_bucket_cutoffs;
  std::vector<double> iou_thresholds = {0.25, 0.5, 0.75};
  // Per-term weights for the total loss: box, giou, alignment, as, ae.
  std::array<double, 5> loss_weights = {1.0, 1.0, 1.0, 1.0, 1.0};
  unsigned long long rng_seed = 0;
};

// Throws Error(InvalidArgument) naming the offending field.
void validate_config(const Config& config);

}  // namespace adtl
