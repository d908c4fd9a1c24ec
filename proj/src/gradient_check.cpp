#include "adtl/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adtl/alignment_loss.hpp"

namespace adtl {

namespace {

constexpr double kMinCenterDistance = 5.0;
constexpr double kMaxAbsAlignment = 0.99;

}  // namespace

GradientCheckResult check_ae_gradient(const GradientCheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> ux(0.0, options.extent.width);
  std::uniform_real_distribution<double> uy(0.0, options.extent.height);
  auto draw = [&] { return Vec2{ux(rng), uy(rng)}; };

  GradientCheckResult result;
  const double h = options.step;
  while (result.n_checked < options.n_configs) {
    const Vec2 attention = draw();
    const Vec2 tip = draw();
    const Vec2 gt = draw();
    const Vec2 pred = draw();
    if (norm(pred - attention) < kMinCenterDistance || norm(pred - tip) < kMinCenterDistance ||
        norm(gt - attention) < kMinCenterDistance || norm(gt - tip) < kMinCenterDistance) {
      continue;
    }
    const double ae_gt = alignment_score(attention, tip, gt);
    const double ae_pred = alignment_score(attention, tip, pred);
    if (std::abs(ae_gt - ae_pred) < options.kink_margin) continue;
    if (std::abs(ae_pred) > kMaxAbsAlignment) continue;

    const Vec2 analytic = ae_gradient(gt, pred, attention, tip);
    auto loss_at = [&](Vec2 c) { return ae_loss(gt, c, attention, tip); };
    const Vec2 numeric{
        (loss_at(pred + Vec2{h, 0.0}) - loss_at(pred - Vec2{h, 0.0})) / (2.0 * h),
        (loss_at(pred + Vec2{0.0, h}) - loss_at(pred - Vec2{0.0, h})) / (2.0 * h)};

    const double scale = std::max(norm(analytic), norm(numeric));
    const double rel = scale > 0.0 ? norm(analytic - numeric) / scale : 0.0;
    result.max_relative_error = std::max(result.max_relative_error, rel);
    if (ae_gt > ae_pred) ++result.n_active;
    ++result.n_checked;
  }
  return result;
}

}  // namespace adtl
