#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adtl/types.hpp"

namespace adtl {

struct SimSpec {
  std::size_t n_scenes = 100;
  double bent_fraction = 0.5;
  double noise_px = 0.0;
  std::size_t distractors_per_scene = 3;
  double image_width = 640.0;
  double image_height = 480.0;
  std::uint64_t rng_seed = 0;
  double arm_bend_degrees_min = 30.0;
  // Reranker weight the distractor confidences are calibrated against.
  double design_weight = 0.5;
};

inline constexpr double kMaxArmBendDegrees = 120.0;
inline constexpr int kPlacementRetryBudget = 100;

enum class PoseLabel { Extended, Bent };

std::string_view to_string(PoseLabel label);

struct LabeledScene {
  Scene scene;
  PoseLabel truth = PoseLabel::Extended;
  // VTL for Extended, FL for Bent.
  TouchLineMode intended_line = TouchLineMode::VTL;
};

// Throws InvalidArgument for an invalid spec.
void validate_sim_spec(const SimSpec& spec);

/// Deterministic synthetic corpus. Exactly round(n * bent_fraction) scenes
/// are bent; which ones is decided by the seed.
///
/// Extended scenes keep upper arm, forearm and finger on one line and put
/// the target on the eye-fingertip ray, off the finger ray. Bent scenes
/// bend the elbow by at least arm_bend_degrees_min (finger in line with
/// the forearm) and put the target on the finger ray, off the
/// eye-fingertip ray. At noise 0 the intended ray therefore hits the
/// target and the other ray misses it.
///
/// Candidates are the target plus the distractors, shuffled. Every
/// distractor center lies farther than twice the target diagonal from the
/// intended ray and is disjoint from the target. Each distractor is more
/// confident than the target, by less than the target's alignment
/// advantage along the intended line at design_weight, so the target wins
/// the fused ranking under the intended line and loses on confidence
/// alone. The first distractor is a decoy whose lead also exceeds the
/// target's advantage along the other line, so it outranks the target
/// when the wrong touch line is used. Keypoint jitter is applied after
/// placement.
///
/// Throws InfeasiblePlacement after kPlacementRetryBudget failed attempts
/// on one scene.
std::vector<LabeledScene> generate(const SimSpec& spec);

// Fraction of scenes whose selected attention source matches the label.
double classification_accuracy(const std::vector<LabeledScene>& scenes,
                               const Config& config);

}  // namespace adtl
