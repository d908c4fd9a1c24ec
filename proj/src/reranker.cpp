#include "adtl/reranker.hpp"

#include <algorithm>

#include "adtl/alignment_loss.hpp"
#include "adtl/errors.hpp"

namespace adtl {

std::vector<RankedCandidate> rerank(std::span<const Candidate> candidates,
                                    const TouchLine& line, const Config& config) {
  if (candidates.empty()) {
    throw Error(ErrorKind::EmptyCandidateList, "rerank needs at least one candidate");
  }
  const double w = config.rerank_weight;
  std::vector<RankedCandidate> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    RankedCandidate r;
    r.box = candidates[i].box;
    r.base_confidence = candidates[i].confidence;
    r.input_index = i;
    try {
      r.alignment = alignment_score(line.source, line.tip, r.box);
    } catch (const Error&) {
      r.alignment = -1.0;
    }
    r.fused_score = (1.0 - w) * r.base_confidence + w * (r.alignment + 1.0) / 2.0;
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.fused_score > b.fused_score;
                   });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

}  // namespace adtl
