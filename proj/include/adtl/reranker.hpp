#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adtl/touchline.hpp"
#include "adtl/types.hpp"

namespace adtl {

struct RankedCandidate {
  BoundingBox box;
  double base_confidence = 0.0;
  double alignment = -1.0;
  double fused_score = 0.0;
  std::size_t rank = 0;         // 1-based
  std::size_t input_index = 0;  // position in the input list
};

// fused = (1 - w) * confidence + w * (alignment + 1) / 2, with w the
// configured rerank weight. Sorted by fused score descending, ties by input
// order. Candidates whose alignment is undefined score alignment = -1.
// Throws EmptyCandidateList.
std::vector<RankedCandidate> rerank(std::span<const Candidate> candidates,
                                    const TouchLine& line, const Config& config);

}  // namespace adtl
