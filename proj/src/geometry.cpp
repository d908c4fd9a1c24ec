#include "adtl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adtl/errors.hpp"

namespace adtl {

Ray2D::Ray2D(Keypoint2D origin, Vec2 direction) : origin_(origin) {
  const double n = norm(direction);
  if (!(n > 0.0) || !std::isfinite(n) || !is_finite(origin)) {
    throw Error(ErrorKind::DegenerateGeometry, "ray needs a finite nonzero direction");
  }
  direction_ = (1.0 / n) * direction;
}

Ray2D Ray2D::through(Keypoint2D from, Keypoint2D through) {
  return Ray2D(from, through - from);
}

Ray2D Ray2D::from_line(const TouchLine& line) {
  return through(line.source, line.tip);
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

BoundingBox enclosing_box(const BoundingBox& a, const BoundingBox& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
          std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double giou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  const double hull = enclosing_box(a, b).area();
  return std::clamp(inter / uni, 0.0, 1.0) - (hull - uni) / hull;
}

std::optional<double> ray_box_intersects(const Ray2D& ray, const BoundingBox& box) {
  // Slab method over the closed box, t restricted to [0, inf).
  double t_enter = 0.0;
  double t_exit = std::numeric_limits<double>::infinity();
  const double origin[2] = {ray.origin().x, ray.origin().y};
  const double dir[2] = {ray.direction().x, ray.direction().y};
  const double lo[2] = {box.x_min, box.y_min};
  const double hi[2] = {box.x_max, box.y_max};
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return std::nullopt;
      continue;
    }
    double t0 = (lo[axis] - origin[axis]) / dir[axis];
    double t1 = (hi[axis] - origin[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return std::nullopt;
  }
  return t_enter;
}

double point_to_ray_distance(Keypoint2D p, const Ray2D& ray) {
  const Vec2 rel = p - ray.origin();
  const double t = std::max(0.0, dot(rel, ray.direction()));
  return norm(rel - t * ray.direction());
}

}  // namespace adtl
