#include "adtl/eval.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "adtl/geometry.hpp"
#include "adtl/reranker.hpp"
#include "adtl/touchline.hpp"

namespace adtl {

std::string_view to_string(Metric metric) {
  return metric == Metric::IoU ? "iou" : "giou";
}

std::string_view to_string(SizeBucket bucket) {
  switch (bucket) {
    case SizeBucket::S: return "S";
    case SizeBucket::M: return "M";
    case SizeBucket::L: return "L";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view text) {
  if (text == "iou" || text == "IoU") return Metric::IoU;
  if (text == "giou" || text == "GIoU") return Metric::GIoU;
  return std::nullopt;
}

namespace {

double metric_value(const Prediction& p, Metric metric) {
  return metric == Metric::IoU ? iou(p.pred_box, p.gt_box) : giou(p.pred_box, p.gt_box);
}

}  // namespace

std::map<double, double> threshold_accuracy(std::span<const Prediction> predictions,
                                            std::span<const double> thresholds,
                                            Metric metric) {
  if (predictions.empty()) {
    throw Error(ErrorKind::InvalidArgument, "threshold_accuracy of an empty prediction list");
  }
  std::vector<double> values;
  values.reserve(predictions.size());
  for (const auto& p : predictions) values.push_back(metric_value(p, metric));

  std::map<double, double> out;
  for (double tau : thresholds) {
    const auto correct = std::count_if(values.begin(), values.end(),
                                       [tau](double v) { return v > tau; });
    out[tau] = static_cast<double>(correct) / static_cast<double>(values.size());
  }
  return out;
}

SizeBucket size_bucket(const BoundingBox& box, ImageSize image, const Config& config) {
  const double ratio = box.area() / (image.width * image.height);
  if (ratio < config.size_bucket_cutoffs.small_max_frac) return SizeBucket::S;
  if (ratio < config.size_bucket_cutoffs.medium_max_frac) return SizeBucket::M;
  return SizeBucket::L;
}

BoundingBox predict_box(const Scene& scene, TouchLineMode mode, const Config& config) {
  if (!scene.candidates.empty()) {
    const TouchLine line = build_touch_line(scene.skeleton, mode, config);
    return rerank(scene.candidates, line, config).front().box;
  }
  if (scene.pred_box) return *scene.pred_box;
  throw Error(ErrorKind::NoPredictionSource,
              "scene " + scene.id + " has neither candidates nor pred_box");
}

EvalReport evaluate(const LoadResult& loaded, TouchLineMode mode, const Config& config,
                    Metric bucket_metric) {
  validate_config(config);
  EvalReport report;
  report.mode = mode;
  report.bucket_metric = bucket_metric;
  report.config_echo = config;
  report.n_scenes = loaded.n_records();
  report.skipped = loaded.skipped;

  std::vector<Prediction> predictions;
  std::map<SizeBucket, std::vector<Prediction>> by_bucket;
  for (const Scene& scene : loaded.scenes) {
    try {
      const Prediction p{scene.gt_box, predict_box(scene, mode, config)};
      predictions.push_back(p);
      by_bucket[size_bucket(scene.gt_box, scene.image(), config)].push_back(p);
    } catch (const Error& e) {
      report.skipped.push_back({scene.id, 0, e.kind(), e.what()});
    }
  }
  report.n_evaluated = predictions.size();

  const std::span<const double> thresholds = config.iou_thresholds;
  if (!predictions.empty()) {
    report.per_threshold = threshold_accuracy(predictions, thresholds, Metric::IoU);
    report.per_threshold_giou = threshold_accuracy(predictions, thresholds, Metric::GIoU);
  }
  for (SizeBucket b : {SizeBucket::S, SizeBucket::M, SizeBucket::L}) {
    BucketStats stats;
    if (const auto it = by_bucket.find(b); it != by_bucket.end()) {
      stats.count = it->second.size();
      stats.accuracy = threshold_accuracy(it->second, thresholds, bucket_metric);
    }
    report.per_size_bucket[b] = std::move(stats);
  }
  return report;
}

EvalReport evaluate(const std::filesystem::path& path, TouchLineMode mode,
                    const Config& config, Metric bucket_metric) {
  return evaluate(load_scenes(path), mode, config, bucket_metric);
}

namespace {

using nlohmann::ordered_json;

ordered_json accuracy_json(const std::map<double, double>& acc,
                           std::span<const double> thresholds) {
  ordered_json j = ordered_json::object();
  for (double t : thresholds) {
    const auto it = acc.find(t);
    j[format_number(t)] = it == acc.end() ? ordered_json(nullptr) : ordered_json(it->second);
  }
  return j;
}

ordered_json config_json(const Config& c) {
  ordered_json j;
  j["collinearity_threshold"] = c.collinearity_threshold;
  j["rerank_weight"] = c.rerank_weight;
  j["focal_gamma"] = c.focal_gamma;
  j["focal_alpha"] = c.focal_alpha;
  j["small_max_frac"] = c.size_bucket_cutoffs.small_max_frac;
  j["medium_max_frac"] = c.size_bucket_cutoffs.medium_max_frac;
  j["iou_thresholds"] = c.iou_thresholds;
  j["loss_weights"] = c.loss_weights;
  j["rng_seed"] = c.rng_seed;
  return j;
}

}  // namespace

std::string report_to_json(const EvalReport& r) {
  const std::span<const double> thresholds = r.config_echo.iou_thresholds;
  ordered_json j;
  j["mode"] = std::string(to_string(r.mode));
  j["n_scenes"] = r.n_scenes;
  j["n_evaluated"] = r.n_evaluated;
  j["per_threshold"] = accuracy_json(r.per_threshold, thresholds);
  j["per_threshold_giou"] = accuracy_json(r.per_threshold_giou, thresholds);
  ordered_json buckets;
  buckets["metric"] = std::string(to_string(r.bucket_metric));
  for (const auto& [bucket, stats] : r.per_size_bucket) {
    buckets[std::string(to_string(bucket))] = {
        {"count", stats.count}, {"accuracy", accuracy_json(stats.accuracy, thresholds)}};
  }
  j["per_size_bucket"] = std::move(buckets);
  j["config"] = config_json(r.config_echo);
  ordered_json skipped = ordered_json::array();
  for (const auto& s : r.skipped) {
    skipped.push_back({{"id", s.id},
                       {"line", s.line},
                       {"error", std::string(to_string(s.kind))},
                       {"message", s.message}});
  }
  j["skipped"] = std::move(skipped);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "metric,bucket,threshold,accuracy,count\n";
  auto rows = [&](std::string_view metric, std::string_view bucket,
                  const std::map<double, double>& acc, std::size_t count) {
    for (double t : r.config_echo.iou_thresholds) {
      const auto it = acc.find(t);
      out << metric << ',' << bucket << ',' << format_number(t) << ','
          << (it == acc.end() ? std::string() : format_number(it->second)) << ','
          << count << '\n';
    }
  };
  rows("iou", "all", r.per_threshold, r.n_evaluated);
  rows("giou", "all", r.per_threshold_giou, r.n_evaluated);
  for (const auto& [bucket, stats] : r.per_size_bucket) {
    rows(to_string(r.bucket_metric), to_string(bucket), stats.accuracy, stats.count);
  }
  return out.str();
}

}  // namespace adtl
