#include "adtl/scene_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "adtl/alignment_loss.hpp"
#include "adtl/errors.hpp"
#include "adtl/geometry.hpp"
#include "adtl/touchline.hpp"
#include "adtl/validate.hpp"

namespace adtl {

std::string_view to_string(PoseLabel label) {
  return label == PoseLabel::Extended ? "extended" : "bent";
}

void validate_sim_spec(const SimSpec& spec) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::InvalidArgument, "invalid sim spec: " + what);
  };
  if (spec.n_scenes == 0) fail("n_scenes must be positive");
  if (!(spec.bent_fraction >= 0.0 && spec.bent_fraction <= 1.0))
    fail("bent_fraction must be in [0, 1]");
  if (!(spec.noise_px >= 0.0) || !std::isfinite(spec.noise_px))
    fail("noise_px must be finite and nonnegative");
  if (!(spec.image_width > 0.0 && spec.image_height > 0.0) ||
      !std::isfinite(spec.image_width) || !std::isfinite(spec.image_height))
    fail("image size must be positive");
  if (!(spec.arm_bend_degrees_min > 0.0 && spec.arm_bend_degrees_min < kMaxArmBendDegrees))
    fail("arm_bend_degrees_min must be in (0, " + std::to_string(kMaxArmBendDegrees) + ")");
  if (!(spec.design_weight > 0.0 && spec.design_weight < 1.0))
    fail("design_weight must be in (0, 1)");
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Smallest admissible confidence headroom for a distractor.
constexpr double kMinAlignmentGap = 1e-3;
constexpr double kMaxConfidence = 0.98;
constexpr int kDrawsPerDistractor = 100;

constexpr std::array<const char*, 8> kPhrases = {
    "the cup on the table",      "that bottle over there", "the book next to it",
    "the bag I am pointing at",  "this remote",            "the plant by the window",
    "the red box",               "that chair",
};

class Placer {
 public:
  Placer(const SimSpec& spec, std::mt19937_64& rng) : spec_(spec), rng_(rng) {}

  std::optional<LabeledScene> attempt(PoseLabel label, const std::string& id);

 private:
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  bool in_frame(Vec2 p) const {
    return p.x >= 0.0 && p.x <= spec_.image_width && p.y >= 0.0 && p.y <= spec_.image_height;
  }

  bool in_frame(const BoundingBox& b) const {
    return b.x_min >= 0.0 && b.y_min >= 0.0 && b.x_max <= spec_.image_width &&
           b.y_max <= spec_.image_height;
  }

  BoundingBox box_at(Vec2 center, double scale) {
    const double w = uniform(24.0, 70.0) * scale;
    const double h = uniform(24.0, 70.0) * scale;
    return {center.x - w / 2.0, center.y - h / 2.0, center.x + w / 2.0, center.y + h / 2.0};
  }

  const SimSpec& spec_;
  std::mt19937_64& rng_;
};

std::optional<LabeledScene> Placer::attempt(PoseLabel label, const std::string& id) {
  const double W = spec_.image_width;
  const double H = spec_.image_height;
  const double scale = uniform(0.85, 1.15);
  const double upper_arm = 80.0 * scale;
  const double forearm = 70.0 * scale;
  const double hand = 22.0 * scale;
  const double finger = 28.0 * scale;

  const double side = std::bernoulli_distribution(0.5)(rng_) ? 1.0 : -1.0;
  const double shoulder_x = uniform(0.12 * W, 0.35 * W);
  Skeleton sk;
  sk.shoulder = {side > 0.0 ? shoulder_x : W - shoulder_x, uniform(0.45 * H, 0.75 * H)};
  sk.eye = sk.shoulder + Vec2{-side * 12.0 * scale, -62.0 * scale};

  // Image y points down, so a positive angle turns the arm downward.
  const double point_angle = uniform(-45.0, 25.0) * kDegToRad;
  double upper_angle = point_angle;
  if (label == PoseLabel::Bent) {
    upper_angle += uniform(spec_.arm_bend_degrees_min, kMaxArmBendDegrees) * kDegToRad;
  }
  const Vec2 forearm_dir{side * std::cos(point_angle), std::sin(point_angle)};
  const Vec2 upper_dir{side * std::cos(upper_angle), std::sin(upper_angle)};

  sk.elbow = sk.shoulder + upper_arm * upper_dir;
  sk.wrist = sk.elbow + forearm * forearm_dir;
  sk.mcp = sk.wrist + hand * forearm_dir;
  sk.fingertip = sk.mcp + finger * forearm_dir;

  for (Vec2 p : {sk.eye, sk.shoulder, sk.elbow, sk.wrist, sk.mcp, sk.fingertip}) {
    if (!in_frame(p)) return std::nullopt;
  }

  const bool extended = label == PoseLabel::Extended;
  const TouchLine intended_line = extended
      ? TouchLine{sk.eye, sk.fingertip, TouchLineMode::VTL}
      : TouchLine{sk.mcp, sk.fingertip, TouchLineMode::FL};
  const TouchLine wrong_line = extended
      ? TouchLine{sk.mcp, sk.fingertip, TouchLineMode::FL}
      : TouchLine{sk.eye, sk.fingertip, TouchLineMode::VTL};
  const Ray2D intended = Ray2D::from_line(intended_line);
  const Ray2D wrong = Ray2D::from_line(wrong_line);

  const double reach = extended ? uniform(120.0, 300.0) : uniform(45.0, 150.0);
  const BoundingBox gt = box_at(sk.fingertip + reach * scale * intended.direction(), scale);
  if (!in_frame(gt)) return std::nullopt;
  if (!ray_box_intersects(intended, gt) || ray_box_intersects(wrong, gt)) {
    return std::nullopt;
  }

  const double gt_diag = std::hypot(gt.width(), gt.height());
  const double gain = spec_.design_weight / (1.0 - spec_.design_weight);
  const double gt_conf = uniform(0.3, 0.6);
  const auto mapped_alignment = [](const TouchLine& l, const BoundingBox& b) {
    return (alignment_score(l.source, l.tip, b) + 1.0) / 2.0;
  };
  const double gt_intended = mapped_alignment(intended_line, gt);
  const double gt_wrong = mapped_alignment(wrong_line, gt);

  std::vector<Candidate> candidates;
  candidates.push_back({gt, gt_conf});
  for (std::size_t k = 0; k < spec_.distractors_per_scene; ++k) {
    bool placed = false;
    for (int draw = 0; draw < kDrawsPerDistractor && !placed; ++draw) {
      const Vec2 center{uniform(0.0, W), uniform(0.0, H)};
      const BoundingBox box = box_at(center, scale);
      if (!in_frame(box)) continue;
      if (point_to_ray_distance(center, intended) <= 2.0 * gt_diag) continue;
      if (intersection_area(box, gt) > 0.0) continue;
      double on_intended = 0.0;
      double on_wrong = 0.0;
      try {
        on_intended = mapped_alignment(intended_line, box);
        on_wrong = mapped_alignment(wrong_line, box);
      } catch (const Error&) {
        continue;
      }
      // Confidence lead over the target must stay below `hi` for the target
      // to win under the intended line. The decoy must also exceed `lo` so
      // that it beats the target under the other line.
      const double hi = std::min(gain * (gt_intended - on_intended), kMaxConfidence - gt_conf);
      const double lo = k == 0 ? std::max(0.0, gain * (gt_wrong - on_wrong)) : 0.0;
      if (hi - lo < kMinAlignmentGap) continue;
      candidates.push_back({box, gt_conf + lo + uniform(0.2, 0.8) * (hi - lo)});
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  std::shuffle(candidates.begin(), candidates.end(), rng_);

  if (spec_.noise_px > 0.0) {
    std::normal_distribution<double> jitter(0.0, spec_.noise_px);
    for (Keypoint2D* p : {&sk.eye, &sk.shoulder, &sk.elbow, &sk.wrist, &sk.mcp, &sk.fingertip}) {
      p->x += jitter(rng_);
      p->y += jitter(rng_);
    }
  }

  LabeledScene out;
  out.truth = label;
  out.intended_line = intended_line.mode;
  Scene& scene = out.scene;
  scene.id = id;
  scene.image_width = W;
  scene.image_height = H;
  scene.skeleton = sk;
  scene.gt_box = gt;
  scene.candidates = std::move(candidates);
  scene.text = kPhrases[std::uniform_int_distribution<std::size_t>(0, kPhrases.size() - 1)(rng_)];
  if (!find_violations(scene).empty()) return std::nullopt;
  return out;
}

}  // namespace

std::vector<LabeledScene> generate(const SimSpec& spec) {
  validate_sim_spec(spec);
  std::mt19937_64 rng(spec.rng_seed);

  const auto n_bent = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.n_scenes) * spec.bent_fraction));
  std::vector<PoseLabel> labels(spec.n_scenes, PoseLabel::Extended);
  std::fill_n(labels.begin(), n_bent, PoseLabel::Bent);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<LabeledScene> scenes;
  scenes.reserve(spec.n_scenes);
  Placer placer(spec, rng);
  for (std::size_t i = 0; i < spec.n_scenes; ++i) {
    const std::string id = "sim" + std::to_string(spec.rng_seed) + "-" + std::to_string(i);
    std::optional<LabeledScene> scene;
    for (int attempt = 0; attempt < kPlacementRetryBudget && !scene; ++attempt) {
      scene = placer.attempt(labels[i], id);
    }
    if (!scene) {
      throw Error(ErrorKind::InfeasiblePlacement,
                  "could not place scene " + id + " within " +
                      std::to_string(kPlacementRetryBudget) + " attempts");
    }
    scenes.push_back(std::move(*scene));
  }
  return scenes;
}

double classification_accuracy(const std::vector<LabeledScene>& scenes,
                               const Config& config) {
  if (scenes.empty()) {
    throw Error(ErrorKind::InvalidArgument, "classification_accuracy of an empty corpus");
  }
  std::size_t correct = 0;
  for (const auto& s : scenes) {
    try {
      const SourceKind kind = select_attention_source(s.scene.skeleton, config).kind;
      const SourceKind expected =
          s.truth == PoseLabel::Extended ? SourceKind::Eye : SourceKind::MCP;
      if (kind == expected) ++correct;
    } catch (const Error&) {
    }
  }
  return static_cast<double>(correct) / static_cast<double>(scenes.size());
}

}  // namespace adtl
