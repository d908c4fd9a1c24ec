#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "adtl/errors.hpp"
#include "adtl/types.hpp"
#include "adtl/validate.hpp"

namespace adtl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateSkeleton: return "DegenerateSkeleton";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::EmptyBox: return "EmptyBox";
    case ErrorKind::OutOfFrame: return "OutOfFrame";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ZeroSum: return "ZeroSum";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NegativeLossTerm: return "NegativeLossTerm";
    case ErrorKind::EmptyCandidateList: return "EmptyCandidateList";
    case ErrorKind::InfeasiblePlacement: return "InfeasiblePlacement";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::NoPredictionSource: return "NoPredictionSource";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::string msg = "invalid scene:";
  for (const auto& v : violations) {
    msg += " ";
    msg += to_string(v.kind);
    msg += "(" + v.field + ")";
  }
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorKind::InvalidArgument
                               : violations.front().kind,
            summarize(violations)),
      violations_(std::move(violations)) {}

std::string_view to_string(TouchLineMode mode) {
  switch (mode) {
    case TouchLineMode::VTL: return "VTL";
    case TouchLineMode::FL: return "FL";
    case TouchLineMode::ADTL: return "ADTL";
  }
  return "Unknown";
}

std::optional<TouchLineMode> parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "vtl") return TouchLineMode::VTL;
  if (lower == "fl") return TouchLineMode::FL;
  if (lower == "adtl") return TouchLineMode::ADTL;
  return std::nullopt;
}

void validate_config(const Config& c) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "invalid config: " + what);
  };
  if (!(c.collinearity_threshold > -1.0 && c.collinearity_threshold < 1.0))
    fail("collinearity_threshold must be in (-1, 1)");
  if (!(c.rerank_weight >= 0.0 && c.rerank_weight <= 1.0))
    fail("rerank_weight must be in [0, 1]");
  if (!(c.focal_gamma >= 0.0) || !std::isfinite(c.focal_gamma))
    fail("focal_gamma must be finite and nonnegative");
  if (!(c.focal_alpha >= 0.0 && c.focal_alpha <= 1.0))
    fail("focal_alpha must be in [0, 1]");
  const auto& cut = c.size_bucket_cutoffs;
  if (!(cut.small_max_frac > 0.0 && cut.small_max_frac < cut.medium_max_frac &&
        cut.medium_max_frac < 1.0))
    fail("size_bucket_cutoffs must satisfy 0 < small < medium < 1");
  if (c.iou_thresholds.empty()) fail("iou_thresholds must be nonempty");
  double prev = 0.0;
  for (double t : c.iou_thresholds) {
    if (!(t > prev && t <= 1.0))
      fail("iou_thresholds must be strictly increasing in (0, 1]");
    prev = t;
  }
  for (double w : c.loss_weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      fail("loss_weights must be finite and nonnegative");
  }
}

void check_skeleton(const Skeleton& s, const std::string& prefix,
                    std::vector<Violation>& out) {
  const std::pair<const char*, Keypoint2D> points[] = {
      {"eye", s.eye},     {"shoulder", s.shoulder}, {"elbow", s.elbow},
      {"wrist", s.wrist}, {"mcp", s.mcp},           {"fingertip", s.fingertip},
  };
  bool finite = true;
  for (const auto& [name, p] : points) {
    if (!is_finite(p)) {
      out.push_back({ErrorKind::NonFiniteValue, prefix + name, "non-finite coordinate"});
      finite = false;
    }
  }
  if (!finite) return;

  struct Segment {
    const char* tip_name;
    Keypoint2D tip;
    const char* base_name;
    Keypoint2D base;
  };
  const Segment segments[] = {
      {"fingertip", s.fingertip, "mcp", s.mcp},
      {"wrist", s.wrist, "elbow", s.elbow},
      {"elbow", s.elbow, "shoulder", s.shoulder},
  };
  for (const auto& seg : segments) {
    if (norm(seg.tip - seg.base) < kMinSegmentLength) {
      out.push_back({ErrorKind::DegenerateSkeleton,
                     prefix + seg.tip_name + "/" + seg.base_name,
                     "zero-length segment"});
    }
  }
}

void check_box(const BoundingBox& b, const std::string& prefix,
               std::vector<Violation>& out) {
  const std::pair<const char*, double> fields[] = {
      {"x_min", b.x_min}, {"y_min", b.y_min}, {"x_max", b.x_max}, {"y_max", b.y_max}};
  bool finite = true;
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v)) {
      out.push_back({ErrorKind::NonFiniteValue, prefix + "." + name, "non-finite coordinate"});
      finite = false;
    }
  }
  if (!finite) return;
  if (!(b.x_min < b.x_max)) {
    out.push_back({ErrorKind::EmptyBox, prefix + ".x_min/" + prefix + ".x_max",
                   "requires x_min < x_max"});
  }
  if (!(b.y_min < b.y_max)) {
    out.push_back({ErrorKind::EmptyBox, prefix + ".y_min/" + prefix + ".y_max",
                   "requires y_min < y_max"});
  }
}

namespace {

void check_in_frame(const BoundingBox& b, const Scene& scene,
                    const std::string& prefix, std::vector<Violation>& out) {
  const double w = scene.image_width;
  const double h = scene.image_height;
  if (!std::isfinite(w) || !std::isfinite(h) || w <= 0.0 || h <= 0.0) return;
  const double tol = kFrameTolerance;
  if (b.x_min < -tol || b.y_min < -tol || b.x_max > w + tol || b.y_max > h + tol) {
    out.push_back({ErrorKind::OutOfFrame, prefix, "box extends outside the image"});
  }
}

void check_box_in_scene(const BoundingBox& b, const Scene& scene,
                        const std::string& prefix, std::vector<Violation>& out) {
  const auto before = out.size();
  check_box(b, prefix, out);
  if (out.size() == before) check_in_frame(b, scene, prefix, out);
}

}  // namespace

std::vector<Violation> find_violations(const Scene& scene) {
  std::vector<Violation> out;
  if (!std::isfinite(scene.image_width) || !std::isfinite(scene.image_height)) {
    out.push_back({ErrorKind::NonFiniteValue, "image_width/image_height",
                   "non-finite image size"});
  } else {
    if (!(scene.image_width > 0.0))
      out.push_back({ErrorKind::InvalidArgument, "image_width", "must be positive"});
    if (!(scene.image_height > 0.0))
      out.push_back({ErrorKind::InvalidArgument, "image_height", "must be positive"});
  }
  check_skeleton(scene.skeleton, "skeleton.", out);
  check_box_in_scene(scene.gt_box, scene, "gt_box", out);
  for (std::size_t i = 0; i < scene.candidates.size(); ++i) {
    const std::string prefix = "candidates[" + std::to_string(i) + "]";
    check_box_in_scene(scene.candidates[i].box, scene, prefix + ".box", out);
    if (!std::isfinite(scene.candidates[i].confidence)) {
      out.push_back({ErrorKind::NonFiniteValue, prefix + ".conf", "non-finite confidence"});
    } else if (scene.candidates[i].confidence < 0.0 || scene.candidates[i].confidence > 1.0) {
      out.push_back({ErrorKind::InvalidArgument, prefix + ".conf", "confidence outside [0, 1]"});
    }
  }
  if (scene.pred_box) check_box(*scene.pred_box, "pred_box", out);
  return out;
}

const Scene& validate_scene(const Scene& scene) {
  auto violations = find_violations(scene);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return scene;
}

void require_valid_skeleton(const Skeleton& skeleton) {
  std::vector<Violation> v;
  check_skeleton(skeleton, "skeleton.", v);
  if (!v.empty()) {
    throw Error(v.front().kind, std::string(to_string(v.front().kind)) + ": " +
                                    v.front().field);
  }
}

void require_valid_box(const BoundingBox& box) {
  std::vector<Violation> v;
  check_box(box, "box", v);
  if (!v.empty()) {
    throw Error(v.front().kind, std::string(to_string(v.front().kind)) + ": " +
                                    v.front().field);
  }
}

}  // namespace adtl
