#pragma once

#include "adtl/types.hpp"

namespace adtl {

// Index finger (fingertip - MCP), forearm (wrist - elbow) and upper arm
// (elbow - shoulder) as displacement vectors.
struct SegmentVectors {
  Vec2 if_vec;
  Vec2 fa_vec;
  Vec2 ua_vec;
};

enum class SourceKind { Eye, MCP };

std::string_view to_string(SourceKind kind);

struct AttentionSource {
  Keypoint2D point;
  SourceKind kind = SourceKind::MCP;
  // Cosine between the sum of the most-aligned segment pair and the
  // remaining segment.
  double collinearity = 0.0;
};

// A resolved touch line; mode is VTL or FL, never ADTL.
struct TouchLine {
  Keypoint2D source;
  Keypoint2D tip;
  TouchLineMode mode = TouchLineMode::VTL;
};

SegmentVectors segment_vectors(const Skeleton& skeleton);

// (u.v) / (|u||v|) clamped to [-1, 1]. Throws ZeroVector if either input
// has zero or non-finite length.
double cosine_similarity(Vec2 u, Vec2 v);

// Arm-collinearity rule: eye when the arm is extended (collinearity
// strictly above the threshold), MCP otherwise. Pairwise ties are broken
// in the order IF/FA, FA/UA, IF/UA.
AttentionSource select_attention_source(const Skeleton& skeleton,
                                        const Config& config);

TouchLine build_touch_line(const Skeleton& skeleton, TouchLineMode mode,
                           const Config& config);

}  // namespace adtl
