#include "adtl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "adtl/alignment_loss.hpp"
#include "adtl/errors.hpp"
#include "adtl/eval.hpp"
#include "adtl/gradient_check.hpp"
#include "adtl/reranker.hpp"
#include "adtl/scene_io.hpp"
#include "adtl/scene_sim.hpp"
#include "adtl/touchline.hpp"

namespace adtl::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kGradientTolerance = 1e-6;

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, "config: " + what);
}

double parse_double(std::string_view text, const std::string& key) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    bad_config("bad number for " + key + ": '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_double_list(std::string_view text, const std::string& key) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_double(text.substr(start, end - start), key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Single setter table shared by the JSON and key=value readers.
void apply_setting(Config& c, const std::string& key, const json& value) {
  auto num = [&]() -> double {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return parse_double(value.get<std::string>(), key);
    bad_config(key + " expects a number");
  };
  if (key == "collinearity_threshold") {
    c.collinearity_threshold = num();
  } else if (key == "rerank_weight") {
    c.rerank_weight = num();
  } else if (key == "focal_gamma") {
    c.focal_gamma = num();
  } else if (key == "focal_alpha") {
    c.focal_alpha = num();
  } else if (key == "small_max_frac") {
    c.size_bucket_cutoffs.small_max_frac = num();
  } else if (key == "medium_max_frac") {
    c.size_bucket_cutoffs.medium_max_frac = num();
  } else if (key == "iou_thresholds") {
    if (value.is_string()) {
      c.iou_thresholds = parse_double_list(value.get<std::string>(), key);
    } else if (value.is_array()) {
      c.iou_thresholds.clear();
      for (const auto& v : value) {
        if (!v.is_number()) bad_config("iou_thresholds expects numbers");
        c.iou_thresholds.push_back(v.get<double>());
      }
    } else {
      bad_config("iou_thresholds expects a list");
    }
  } else if (key == "loss_weights") {
    std::vector<double> w;
    if (value.is_string()) {
      w = parse_double_list(value.get<std::string>(), key);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        if (!v.is_number()) bad_config("loss_weights expects numbers");
        w.push_back(v.get<double>());
      }
    }
    if (w.size() != c.loss_weights.size()) bad_config("loss_weights expects 5 values");
    std::copy(w.begin(), w.end(), c.loss_weights.begin());
  } else if (key == "rng_seed") {
    const double v = num();
    if (v < 0.0 || v != std::floor(v)) bad_config("rng_seed expects an unsigned integer");
    c.rng_seed = static_cast<unsigned long long>(v);
  } else {
    bad_config("unknown key '" + key + "'");
  }
}

}  // namespace

Config parse_config_text(std::string_view text, Config base) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      bad_config(std::string("invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) apply_setting(base, key, value);
  } else {
    std::istringstream lines{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) bad_config("line " + std::to_string(line_no) + ": expected key=value");
      std::string key = line.substr(0, eq);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t\r") + 1);
      apply_setting(base, key, json(line.substr(eq + 1)));
    }
  }
  validate_config(base);
  return base;
}

namespace {

struct CommonOptions {
  std::string input;
  bool use_stdin = false;
  std::string out_path;
  std::string config_path;
  std::string mode = "adtl";
  std::optional<double> threshold;
  std::optional<double> weight;
  std::string iou_thresholds;
  std::string metric = "iou";
  std::optional<unsigned long long> seed;
  std::string format = "json";
};

struct SimOptions {
  std::size_t n = 100;
  double bent_fraction = 0.5;
  double noise = 0.0;
  std::size_t distractors = 3;
  double width = 640.0;
  double height = 480.0;
  unsigned long long seed = 0;
  double bend_min = 30.0;
};

struct LossOptions {
  std::size_t n = 1000;
  unsigned long long seed = 1;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_input_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("file", o.input, "Scene JSONL file");
  cmd->add_flag("--stdin", o.use_stdin, "Read scenes from standard input");
}

void add_config_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Config file (JSON or key=value)");
  cmd->add_option("--threshold", o.threshold, "Arm collinearity threshold");
  cmd->add_option("--weight", o.weight, "Rerank fusion weight in [0, 1]");
  cmd->add_option("--iou-thresholds", o.iou_thresholds, "Comma-separated IoU thresholds");
  cmd->add_option("--seed", o.seed, "RNG seed echoed in the config");
}

void add_mode_option(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--mode", o.mode, "Touch line: vtl, fl or adtl")
      ->check(CLI::IsMember({"vtl", "fl", "adtl", "VTL", "FL", "ADTL"}));
}

void add_out_option(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out", o.out_path, "Write output to this path instead of stdout");
}

Config resolve_config(const CommonOptions& o) {
  Config config;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw UsageError("cannot open config file " + o.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    config = parse_config_text(buf.str(), config);
  }
  if (o.threshold) config.collinearity_threshold = *o.threshold;
  if (o.weight) config.rerank_weight = *o.weight;
  if (!o.iou_thresholds.empty()) {
    config.iou_thresholds = parse_double_list(o.iou_thresholds, "--iou-thresholds");
  }
  if (o.seed) config.rng_seed = *o.seed;
  validate_config(config);
  return config;
}

LoadResult read_input(const CommonOptions& o, std::istream& in) {
  if (o.use_stdin) {
    if (!o.input.empty()) throw UsageError("give either a scene file or --stdin, not both");
    return read_scenes(in);
  }
  if (o.input.empty()) throw UsageError("missing scene file (or --stdin)");
  try {
    return load_scenes(o.input);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::FileNotFound) throw UsageError(e.what());
    throw;
  }
}

ordered_json point_json(Vec2 p) { return ordered_json::array({p.x, p.y}); }

ordered_json box_json(const BoundingBox& b) {
  return ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

// Runs `per_scene` over every loaded scene, emitting one JSON line each.
// Returns the number of failed records (load skips plus per-scene errors).
std::size_t for_each_scene(const LoadResult& loaded, std::ostream& out, std::ostream& err,
                           const std::function<ordered_json(const Scene&)>& per_scene) {
  std::size_t failures = loaded.skipped.size();
  for (const auto& s : loaded.skipped) {
    err << "skipped " << s.id << ": " << to_string(s.kind) << ": " << s.message << '\n';
  }
  for (const Scene& scene : loaded.scenes) {
    try {
      out << per_scene(scene).dump() << '\n';
    } catch (const Error& e) {
      err << "failed " << scene.id << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return failures;
}

TouchLineMode mode_of(const CommonOptions& o) {
  const auto mode = parse_mode(o.mode);
  if (!mode) throw UsageError("unknown mode " + o.mode);
  return *mode;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Touch-line toolkit for pointing-gesture grounding", "adtl"};
  app.require_subcommand(1);

  CommonOptions o;
  SimOptions sim;
  LossOptions loss;

  auto* classify = app.add_subcommand("classify", "Attention source per scene");
  add_input_options(classify, o);
  add_config_options(classify, o);
  add_out_option(classify, o);

  auto* line = app.add_subcommand("line", "Resolved touch line per scene");
  add_input_options(line, o);
  add_config_options(line, o);
  add_mode_option(line, o);
  add_out_option(line, o);

  auto* score = app.add_subcommand("score", "Alignment of the ground-truth box per scene");
  add_input_options(score, o);
  add_config_options(score, o);
  add_mode_option(score, o);
  add_out_option(score, o);

  auto* rerank_cmd = app.add_subcommand("rerank", "Rerank candidates per scene");
  add_input_options(rerank_cmd, o);
  add_config_options(rerank_cmd, o);
  add_mode_option(rerank_cmd, o);
  add_out_option(rerank_cmd, o);

  auto* eval_cmd = app.add_subcommand("eval", "Threshold accuracy report");
  add_input_options(eval_cmd, o);
  add_config_options(eval_cmd, o);
  add_mode_option(eval_cmd, o);
  add_out_option(eval_cmd, o);
  eval_cmd->add_option("--metric", o.metric, "Metric for the size-bucket table")
      ->check(CLI::IsMember({"iou", "giou"}));
  eval_cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* simulate = app.add_subcommand("simulate", "Generate synthetic scenes as JSONL");
  simulate->add_option("--n", sim.n, "Number of scenes")->check(CLI::PositiveNumber);
  simulate->add_option("--bent-fraction", sim.bent_fraction, "Fraction of bent-arm scenes")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--noise", sim.noise, "Keypoint jitter std in pixels")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--distractors", sim.distractors, "Distractors per scene");
  simulate->add_option("--width", sim.width, "Image width")->check(CLI::PositiveNumber);
  simulate->add_option("--height", sim.height, "Image height")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--bend-min", sim.bend_min, "Minimum elbow bend in degrees");
  add_out_option(simulate, o);

  auto* losscheck = app.add_subcommand("losscheck", "Finite-difference check of the AE gradient");
  losscheck->add_option("--n", loss.n, "Number of configurations")->check(CLI::PositiveNumber);
  losscheck->add_option("--seed", loss.seed, "RNG seed");
  add_out_option(losscheck, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "adtl: " << e.what() << '\n';
    return kUsageError;
  }

  std::ostringstream buffer;
  std::size_t failures = 0;
  std::size_t records = 0;
  try {
    if (*simulate) {
      SimSpec spec;
      spec.n_scenes = sim.n;
      spec.bent_fraction = sim.bent_fraction;
      spec.noise_px = sim.noise;
      spec.distractors_per_scene = sim.distractors;
      spec.image_width = sim.width;
      spec.image_height = sim.height;
      spec.rng_seed = sim.seed;
      spec.arm_bend_degrees_min = sim.bend_min;
      try {
        validate_sim_spec(spec);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      const auto scenes = generate(spec);
      write_labeled_scenes(buffer, scenes);
    } else if (*losscheck) {
      GradientCheckOptions opts;
      opts.n_configs = loss.n;
      opts.seed = loss.seed;
      const GradientCheckResult r = check_ae_gradient(opts);
      ordered_json j;
      j["n"] = r.n_checked;
      j["active"] = r.n_active;
      j["max_relative_error"] = r.max_relative_error;
      j["tolerance"] = kGradientTolerance;
      j["pass"] = r.max_relative_error < kGradientTolerance;
      buffer << j.dump() << '\n';
      if (!(r.max_relative_error < kGradientTolerance)) failures = 1;
    } else {
      const Config config = resolve_config(o);
      const LoadResult loaded = read_input(o, in);
      records = loaded.n_records();
      if (*classify) {
        failures = for_each_scene(loaded, buffer, err, [&](const Scene& s) {
          const AttentionSource src = select_attention_source(s.skeleton, config);
          ordered_json j;
          j["id"] = s.id;
          j["kind"] = std::string(to_string(src.kind));
          j["collinearity"] = src.collinearity;
          j["source"] = point_json(src.point);
          return j;
        });
      } else if (*line) {
        const TouchLineMode mode = mode_of(o);
        failures = for_each_scene(loaded, buffer, err, [&](const Scene& s) {
          const TouchLine tl = build_touch_line(s.skeleton, mode, config);
          ordered_json j;
          j["id"] = s.id;
          j["mode"] = std::string(to_string(tl.mode));
          j["source"] = point_json(tl.source);
          j["tip"] = point_json(tl.tip);
          return j;
        });
      } else if (*score) {
        const TouchLineMode mode = mode_of(o);
        failures = for_each_scene(loaded, buffer, err, [&](const Scene& s) {
          const TouchLine tl = build_touch_line(s.skeleton, mode, config);
          ordered_json j;
          j["id"] = s.id;
          j["mode"] = std::string(to_string(tl.mode));
          j["ae"] = alignment_score(tl.source, tl.tip, s.gt_box);
          return j;
        });
      } else if (*rerank_cmd) {
        const TouchLineMode mode = mode_of(o);
        failures = for_each_scene(loaded, buffer, err, [&](const Scene& s) {
          const TouchLine tl = build_touch_line(s.skeleton, mode, config);
          ordered_json ranked = ordered_json::array();
          for (const auto& r : rerank(s.candidates, tl, config)) {
            ordered_json c;
            c["rank"] = r.rank;
            c["index"] = r.input_index;
            c["box"] = box_json(r.box);
            c["conf"] = r.base_confidence;
            c["alignment"] = r.alignment;
            c["score"] = r.fused_score;
            ranked.push_back(std::move(c));
          }
          ordered_json j;
          j["id"] = s.id;
          j["mode"] = std::string(to_string(tl.mode));
          j["ranked"] = std::move(ranked);
          return j;
        });
      } else if (*eval_cmd) {
        const EvalReport report =
            evaluate(loaded, mode_of(o), config, *parse_metric(o.metric));
        buffer << (o.format == "csv" ? report_to_csv(report) : report_to_json(report));
        failures = report.skipped.size();
        for (const auto& s : report.skipped) {
          err << "skipped " << s.id << ": " << to_string(s.kind) << ": " << s.message << '\n';
        }
      }
    }
  } catch (const UsageError& e) {
    err << "adtl: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "adtl: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kUsageError : kDataError;
  }

  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
      err << "adtl: cannot write " << o.out_path << '\n';
      return kUsageError;
    }
    file << buffer.str();
    if (!file) {
      err << "adtl: write to " << o.out_path << " failed\n";
      return kDataError;
    }
  } else {
    out << buffer.str();
  }

  if (failures > 0) {
    if (*losscheck) {
      err << "adtl: gradient check exceeded tolerance " << kGradientTolerance << '\n';
    } else {
      err << "adtl: " << failures << " of " << records << " records failed\n";
    }
    return kDataError;
  }
  return kSuccess;
}

}  // namespace adtl::cli
