#pragma once

#include <optional>

#include "adtl/touchline.hpp"
#include "adtl/types.hpp"

namespace adtl {

// Half-line origin + t * direction, t >= 0, with |direction| = 1.
class Ray2D {
 public:
  // Throws DegenerateGeometry for a zero or non-finite direction.
  Ray2D(Keypoint2D origin, Vec2 direction);

  // Ray from `from` passing through `through`.
  static Ray2D through(Keypoint2D from, Keypoint2D through);
  // Attention source towards the fingertip and beyond.
  static Ray2D from_line(const TouchLine& line);

  Keypoint2D origin() const { return origin_; }
  Vec2 direction() const { return direction_; }
  Vec2 at(double t) const { return origin_ + t * direction_; }

 private:
  Keypoint2D origin_;
  Vec2 direction_;
};

double intersection_area(const BoundingBox& a, const BoundingBox& b);
BoundingBox enclosing_box(const BoundingBox& a, const BoundingBox& b);

double iou(const BoundingBox& a, const BoundingBox& b);
double giou(const BoundingBox& a, const BoundingBox& b);

// Smallest t >= 0 at which the ray meets the closed box, or nullopt.
std::optional<double> ray_box_intersects(const Ray2D& ray, const BoundingBox& box);

double point_to_ray_distance(Keypoint2D p, const Ray2D& ray);

}  // namespace adtl
