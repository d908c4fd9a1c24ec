#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "adtl/types.hpp"

namespace adtl {

/// Cosine of the angle at the object center between the directions to the
/// attention source and to the fingertip, clamped to [-1, 1]. A value of 1
/// means the three points are collinear with the object beyond the
/// fingertip (or behind the source); -1 means the object sits between them.
///
/// Throws DegenerateGeometry when the center coincides with either point.
double alignment_score(Keypoint2D attention, Keypoint2D fingertip, Vec2 object_center);
double alignment_score(Keypoint2D attention, Keypoint2D fingertip, const BoundingBox& box);

/// ReLU(AE(gt box) - AE(pred box)), both scored against the ground-truth
/// attention source.
double ae_loss(const BoundingBox& gt_box, const BoundingBox& pred_box,
               Keypoint2D gt_attention, Keypoint2D fingertip);
double ae_loss(Vec2 gt_center, Vec2 pred_center, Keypoint2D gt_attention,
               Keypoint2D fingertip);

/// Gradient of ae_loss with respect to the predicted box center. Zero when
/// the ReLU is inactive or exactly at its kink.
Vec2 ae_gradient(const BoundingBox& gt_box, const BoundingBox& pred_box,
                 Keypoint2D gt_attention, Keypoint2D fingertip);
Vec2 ae_gradient(Vec2 gt_center, Vec2 pred_center, Keypoint2D gt_attention,
                 Keypoint2D fingertip);

// L1 over the four corners; divided by the image diagonal when given.
double l1_box_loss(const BoundingBox& gt_box, const BoundingBox& pred_box,
                   std::optional<ImageSize> normalize_by = std::nullopt);

double giou_loss(const BoundingBox& gt_box, const BoundingBox& pred_box);

double attention_source_loss(Keypoint2D gt_source, Keypoint2D pred_source,
                             std::optional<ImageSize> normalize_by = std::nullopt);

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Sigmoid focal loss over a query x token logit matrix, averaged over all
/// cells, with alpha-balancing and focusing exponent taken from the config.
/// Throws ShapeMismatch for mismatched or empty shapes and InvalidArgument
/// for targets outside {0, 1}.
double focal_alignment_loss(const Matrix& logits, const Matrix& targets,
                            const Config& config);

struct LossParts {
  double l_box = 0.0;
  double l_giou = 0.0;
  double l_alignment = 0.0;
  double l_as = 0.0;
  double l_ae = 0.0;
};

struct LossBreakdown {
  double l_box = 0.0;
  double l_giou = 0.0;
  double l_alignment = 0.0;
  double l_as = 0.0;
  double l_ae = 0.0;
  double total = 0.0;
};

// Unweighted sum. Throws NegativeLossTerm for negative or non-finite parts.
LossBreakdown total_loss(const LossParts& parts);
// Weighted sum, weights ordered box, giou, alignment, as, ae.
LossBreakdown total_loss(const LossParts& parts, const std::array<double, 5>& weights);

}  // namespace adtl
