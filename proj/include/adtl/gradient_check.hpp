#pragma once

#include <cstddef>
#include <cstdint>

#include "adtl/types.hpp"

namespace adtl {

struct GradientCheckOptions {
  std::size_t n_configs = 1000;
  std::uint64_t seed = 1;
  double step = 1e-5;
  // Configurations with |AE_gt - AE_pred| below this are too close to the
  // ReLU kink for a central difference and are redrawn.
  double kink_margin = 1e-3;
  ImageSize extent{640.0, 480.0};
};

struct GradientCheckResult {
  std::size_t n_checked = 0;
  std::size_t n_active = 0;  // configurations with the ReLU switched on
  double max_relative_error = 0.0;
};

// Random configurations of attention source, fingertip, ground-truth and
// predicted centers; compares ae_gradient against a central difference of
// ae_loss in the predicted center.
GradientCheckResult check_ae_gradient(const GradientCheckOptions& options);

}  // namespace adtl
