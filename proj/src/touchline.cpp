#include "adtl/touchline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "adtl/errors.hpp"
#include "adtl/validate.hpp"

namespace adtl {

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::Eye ? "Eye" : "MCP";
}

SegmentVectors segment_vectors(const Skeleton& s) {
  require_valid_skeleton(s);
  return {s.fingertip - s.mcp, s.wrist - s.elbow, s.elbow - s.shoulder};
}

double cosine_similarity(Vec2 u, Vec2 v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (!(nu > 0.0) || !(nv > 0.0) || !std::isfinite(nu) || !std::isfinite(nv)) {
    throw Error(ErrorKind::ZeroVector, "cosine similarity of a zero-length vector");
  }
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

AttentionSource select_attention_source(const Skeleton& skeleton,
                                        const Config& config) {
  const SegmentVectors seg = segment_vectors(skeleton);

  struct Pair {
    Vec2 first;
    Vec2 second;
    Vec2 remaining;
  };
  // Priority order doubles as the tie-break.
  const std::array<Pair, 3> pairs = {{
      {seg.if_vec, seg.fa_vec, seg.ua_vec},
      {seg.fa_vec, seg.ua_vec, seg.if_vec},
      {seg.if_vec, seg.ua_vec, seg.fa_vec},
  }};

  std::size_t best = 0;
  double best_cos = cosine_similarity(pairs[0].first, pairs[0].second);
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const double c = cosine_similarity(pairs[i].first, pairs[i].second);
    if (c > best_cos) {
      best = i;
      best_cos = c;
    }
  }

  const Vec2 sum = pairs[best].first + pairs[best].second;
  if (norm(sum) < kMinSegmentLength) {
    throw Error(ErrorKind::ZeroSum, "most-aligned segment pair sums to zero");
  }
  const double collinearity = cosine_similarity(sum, pairs[best].remaining);

  if (collinearity > config.collinearity_threshold) {
    return {skeleton.eye, SourceKind::Eye, collinearity};
  }
  return {skeleton.mcp, SourceKind::MCP, collinearity};
}

TouchLine build_touch_line(const Skeleton& skeleton, TouchLineMode mode,
                           const Config& config) {
  require_valid_skeleton(skeleton);
  TouchLine line{skeleton.eye, skeleton.fingertip, TouchLineMode::VTL};
  switch (mode) {
    case TouchLineMode::VTL:
      break;
    case TouchLineMode::FL:
      line = {skeleton.mcp, skeleton.fingertip, TouchLineMode::FL};
      break;
    case TouchLineMode::ADTL: {
      const AttentionSource src = select_attention_source(skeleton, config);
      line.source = src.point;
      line.mode = src.kind == SourceKind::Eye ? TouchLineMode::VTL : TouchLineMode::FL;
      break;
    }
  }
  if (norm(line.tip - line.source) < kMinSegmentLength) {
    throw Error(ErrorKind::DegenerateSkeleton,
                std::string("touch line source coincides with fingertip (") +
                    std::string(to_string(line.mode)) + ")");
  }
  return line;
}

}  // namespace adtl
