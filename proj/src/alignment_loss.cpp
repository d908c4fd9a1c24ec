#include "adtl/alignment_loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adtl/errors.hpp"
#include "adtl/geometry.hpp"
#include "adtl/validate.hpp"

namespace adtl {

namespace {

struct CenterVectors {
  Vec2 to_center_from_source;
  Vec2 to_center_from_tip;
  double source_norm;
  double tip_norm;
};

CenterVectors center_vectors(Keypoint2D attention, Keypoint2D fingertip, Vec2 center) {
  if (!is_finite(attention) || !is_finite(fingertip) || !is_finite(center)) {
    throw Error(ErrorKind::NonFiniteValue, "non-finite alignment input");
  }
  CenterVectors cv{center - attention, center - fingertip, 0.0, 0.0};
  cv.source_norm = norm(cv.to_center_from_source);
  cv.tip_norm = norm(cv.to_center_from_tip);
  if (cv.source_norm < kMinSegmentLength || cv.tip_norm < kMinSegmentLength) {
    throw Error(ErrorKind::DegenerateGeometry,
                "object center coincides with the attention source or fingertip");
  }
  return cv;
}

double cosine(const CenterVectors& cv) {
  return std::clamp(dot(cv.to_center_from_source, cv.to_center_from_tip) /
                        (cv.source_norm * cv.tip_norm),
                    -1.0, 1.0);
}

// Gradient of the (unclamped) cosine with respect to the shared endpoint.
Vec2 cosine_gradient(const CenterVectors& cv) {
  const Vec2 u = cv.to_center_from_source;
  const Vec2 v = cv.to_center_from_tip;
  const double nu = cv.source_norm;
  const double nv = cv.tip_norm;
  const double c = dot(u, v) / (nu * nv);
  return (1.0 / (nu * nv)) * (u + v) - c * ((1.0 / (nu * nu)) * u + (1.0 / (nv * nv)) * v);
}

}  // namespace

double alignment_score(Keypoint2D attention, Keypoint2D fingertip, Vec2 object_center) {
  return cosine(center_vectors(attention, fingertip, object_center));
}

double alignment_score(Keypoint2D attention, Keypoint2D fingertip, const BoundingBox& box) {
  return alignment_score(attention, fingertip, box.center());
}

double ae_loss(Vec2 gt_center, Vec2 pred_center, Keypoint2D gt_attention,
               Keypoint2D fingertip) {
  const double ae_gt = alignment_score(gt_attention, fingertip, gt_center);
  const double ae_pred = alignment_score(gt_attention, fingertip, pred_center);
  return std::max(0.0, ae_gt - ae_pred);
}

double ae_loss(const BoundingBox& gt_box, const BoundingBox& pred_box,
               Keypoint2D gt_attention, Keypoint2D fingertip) {
  require_valid_box(gt_box);
  require_valid_box(pred_box);
  return ae_loss(gt_box.center(), pred_box.center(), gt_attention, fingertip);
}

Vec2 ae_gradient(Vec2 gt_center, Vec2 pred_center, Keypoint2D gt_attention,
                 Keypoint2D fingertip) {
  const double ae_gt = alignment_score(gt_attention, fingertip, gt_center);
  const CenterVectors pred = center_vectors(gt_attention, fingertip, pred_center);
  if (!(ae_gt > cosine(pred))) return {0.0, 0.0};
  const Vec2 g = cosine_gradient(pred);
  return {-g.x, -g.y};
}

Vec2 ae_gradient(const BoundingBox& gt_box, const BoundingBox& pred_box,
                 Keypoint2D gt_attention, Keypoint2D fingertip) {
  require_valid_box(gt_box);
  require_valid_box(pred_box);
  return ae_gradient(gt_box.center(), pred_box.center(), gt_attention, fingertip);
}

double l1_box_loss(const BoundingBox& gt, const BoundingBox& pred,
                   std::optional<ImageSize> normalize_by) {
  require_valid_box(gt);
  require_valid_box(pred);
  const double sum = std::abs(gt.x_min - pred.x_min) + std::abs(gt.y_min - pred.y_min) +
                     std::abs(gt.x_max - pred.x_max) + std::abs(gt.y_max - pred.y_max);
  return normalize_by ? sum / normalize_by->diagonal() : sum;
}

double giou_loss(const BoundingBox& gt_box, const BoundingBox& pred_box) {
  require_valid_box(gt_box);
  require_valid_box(pred_box);
  return 1.0 - giou(gt_box, pred_box);
}

double attention_source_loss(Keypoint2D gt, Keypoint2D pred,
                             std::optional<ImageSize> normalize_by) {
  if (!is_finite(gt) || !is_finite(pred)) {
    throw Error(ErrorKind::NonFiniteValue, "non-finite attention source");
  }
  const double sum = std::abs(gt.x - pred.x) + std::abs(gt.y - pred.y);
  return normalize_by ? sum / normalize_by->diagonal() : sum;
}

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace

double focal_alignment_loss(const Matrix& logits, const Matrix& targets,
                            const Config& config) {
  if (logits.rows != targets.rows || logits.cols != targets.cols ||
      logits.data.size() != logits.rows * logits.cols ||
      targets.data.size() != targets.rows * targets.cols) {
    throw Error(ErrorKind::ShapeMismatch, "logit and target shapes differ");
  }
  if (logits.data.empty()) {
    throw Error(ErrorKind::ShapeMismatch, "focal loss over an empty matrix");
  }
  const double alpha = config.focal_alpha;
  const double gamma = config.focal_gamma;
  double total = 0.0;
  for (std::size_t i = 0; i < logits.data.size(); ++i) {
    const double y = targets.data[i];
    const double x = logits.data[i];
    if (y != 0.0 && y != 1.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "focal targets must be 0 or 1 (cell " + std::to_string(i) + ")");
    }
    if (std::isnan(x)) {
      throw Error(ErrorKind::NonFiniteValue, "NaN logit (cell " + std::to_string(i) + ")");
    }
    // z is the logit of the true class, so p_t = sigmoid(z).
    const double z = y == 1.0 ? x : -x;
    const double log_pt = -softplus(-z);
    const double one_minus_pt = 1.0 / (1.0 + std::exp(z));
    const double alpha_t = y == 1.0 ? alpha : 1.0 - alpha;
    const double modulator = gamma == 0.0 ? 1.0 : std::pow(one_minus_pt, gamma);
    total += -alpha_t * modulator * log_pt;
  }
  return total / static_cast<double>(logits.data.size());
}

LossBreakdown total_loss(const LossParts& parts, const std::array<double, 5>& weights) {
  const std::pair<const char*, double> named[] = {
      {"l_box", parts.l_box}, {"l_giou", parts.l_giou}, {"l_alignment", parts.l_alignment},
      {"l_as", parts.l_as},   {"l_ae", parts.l_ae}};
  for (const auto& [name, v] : named) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::NegativeLossTerm,
                  std::string(name) + " must be finite and nonnegative");
    }
  }
  LossBreakdown b{weights[0] * parts.l_box, weights[1] * parts.l_giou,
                  weights[2] * parts.l_alignment, weights[3] * parts.l_as,
                  weights[4] * parts.l_ae, 0.0};
  b.total = b.l_box + b.l_giou + b.l_alignment + b.l_as + b.l_ae;
  return b;
}

LossBreakdown total_loss(const LossParts& parts) {
  return total_loss(parts, {1.0, 1.0, 1.0, 1.0, 1.0});
}

}  // namespace adtl
