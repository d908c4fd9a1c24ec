#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adtl/scene_io.hpp"
#include "adtl/types.hpp"

namespace adtl {

enum class Metric { IoU, GIoU };
enum class SizeBucket { S, M, L };

std::string_view to_string(Metric metric);
std::string_view to_string(SizeBucket bucket);
std::optional<Metric> parse_metric(std::string_view text);

struct Prediction {
  BoundingBox gt_box;
  BoundingBox pred_box;
};

// threshold -> fraction of predictions whose metric strictly exceeds it.
// Throws InvalidArgument for an empty prediction list.
std::map<double, double> threshold_accuracy(std::span<const Prediction> predictions,
                                            std::span<const double> thresholds,
                                            Metric metric);

// Relative-area bucket: S below small_max_frac, M below medium_max_frac,
// L otherwise.
SizeBucket size_bucket(const BoundingBox& box, ImageSize image, const Config& config);

struct BucketStats {
  std::size_t count = 0;
  // Empty when count == 0.
  std::map<double, double> accuracy;
};

struct EvalReport {
  std::map<double, double> per_threshold;       // IoU
  std::map<double, double> per_threshold_giou;  // GIoU
  std::map<SizeBucket, BucketStats> per_size_bucket;
  Metric bucket_metric = Metric::IoU;
  std::size_t n_scenes = 0;  // every record, including skipped ones
  std::size_t n_evaluated = 0;
  TouchLineMode mode = TouchLineMode::ADTL;
  Config config_echo;
  std::vector<SkippedRecord> skipped;
};

// Prediction for one scene: top-1 of the reranker when candidates exist,
// else the record's pred_box. Throws NoPredictionSource otherwise.
BoundingBox predict_box(const Scene& scene, TouchLineMode mode, const Config& config);

// Scenes whose prediction fails are added to the report's skipped list and
// excluded from every denominator.
EvalReport evaluate(const LoadResult& loaded, TouchLineMode mode, const Config& config,
                    Metric bucket_metric = Metric::IoU);
EvalReport evaluate(const std::filesystem::path& path, TouchLineMode mode,
                    const Config& config, Metric bucket_metric = Metric::IoU);

std::string report_to_json(const EvalReport& report);
// Rows: metric,bucket,threshold,accuracy,count.
std::string report_to_csv(const EvalReport& report);

}  // namespace adtl
