#pragma once

#include <string>
#include <vector>

#include "adtl/errors.hpp"
#include "adtl/types.hpp"

namespace adtl {

// Minimum segment length, in pixels, for a skeleton segment or a
// direction vector to count as nonzero.
inline constexpr double kMinSegmentLength = 1e-9;

// Slack allowed when checking that boxes lie inside the image.
inline constexpr double kFrameTolerance = 1e-6;

void check_skeleton(const Skeleton& skeleton, const std::string& prefix,
                    std::vector<Violation>& out);
void check_box(const BoundingBox& box, const std::string& prefix,
               std::vector<Violation>& out);

// Every violated invariant of the scene. Empty iff the scene is valid.
std::vector<Violation> find_violations(const Scene& scene);

// Returns the scene unchanged when valid, otherwise throws ValidationError
// carrying every violation.
const Scene& validate_scene(const Scene& scene);

// Throws Error(DegenerateSkeleton / NonFiniteValue) on the first violation.
void require_valid_skeleton(const Skeleton& skeleton);
// Throws Error(EmptyBox / NonFiniteValue) on the first violation.
void require_valid_box(const BoundingBox& box);

}  // namespace adtl
