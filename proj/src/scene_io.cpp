#include "adtl/scene_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "adtl/validate.hpp"

namespace adtl {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::MalformedRecord, path + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) malformed(path, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) malformed(path, "expected a number");
  return j.get<double>();
}

Vec2 point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) malformed(path, "expected [x, y]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

// A single [x, y], or a pair of eyes [[x, y], [x, y]] that is averaged.
Vec2 eye_point(const json& j, const std::string& path) {
  if (j.is_array() && j.size() == 2 && j[0].is_array()) {
    const Vec2 a = point(j[0], path + "[0]");
    const Vec2 b = point(j[1], path + "[1]");
    return 0.5 * (a + b);
  }
  return point(j, path);
}

BoundingBox box(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) malformed(path, "expected [x_min, y_min, x_max, y_max]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]"),
          number(j[2], path + "[2]"), number(j[3], path + "[3]")};
}

std::string string_field(const json& obj, const char* key) {
  const json& j = member(obj, key, key);
  if (!j.is_string()) malformed(key, "expected a string");
  return j.get<std::string>();
}

ordered_json point_json(Vec2 p) { return ordered_json::array({p.x, p.y}); }

ordered_json box_json(const BoundingBox& b) {
  return ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

}  // namespace

Scene scene_from_json(const json& record) {
  if (!record.is_object()) malformed("<record>", "expected a JSON object");
  Scene s;
  s.id = string_field(record, "id");
  s.image_width = number(member(record, "image_width", "image_width"), "image_width");
  s.image_height = number(member(record, "image_height", "image_height"), "image_height");

  const json& sk = member(record, "skeleton", "skeleton");
  if (!sk.is_object()) malformed("skeleton", "expected an object");
  auto joint = [&](const char* name) {
    const std::string path = std::string("skeleton.") + name;
    return point(member(sk, name, path), path);
  };
  s.skeleton.eye = eye_point(member(sk, "eye", "skeleton.eye"), "skeleton.eye");
  s.skeleton.shoulder = joint("shoulder");
  s.skeleton.elbow = joint("elbow");
  s.skeleton.wrist = joint("wrist");
  s.skeleton.mcp = joint("mcp");
  s.skeleton.fingertip = joint("fingertip");

  s.gt_box = box(member(record, "gt_box", "gt_box"), "gt_box");

  if (const auto it = record.find("candidates"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) malformed("candidates", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "candidates[" + std::to_string(i) + "]";
      const json& c = (*it)[i];
      if (!c.is_object()) malformed(path, "expected an object");
      s.candidates.push_back({box(member(c, "box", path + ".box"), path + ".box"),
                              number(member(c, "conf", path + ".conf"), path + ".conf")});
    }
  }
  if (const auto it = record.find("pred_box"); it != record.end() && !it->is_null()) {
    s.pred_box = box(*it, "pred_box");
  }
  s.text = string_field(record, "text");
  return s;
}

ordered_json scene_to_json(const Scene& s) {
  ordered_json j;
  j["id"] = s.id;
  j["image_width"] = s.image_width;
  j["image_height"] = s.image_height;
  j["skeleton"] = {
      {"eye", point_json(s.skeleton.eye)},
      {"shoulder", point_json(s.skeleton.shoulder)},
      {"elbow", point_json(s.skeleton.elbow)},
      {"wrist", point_json(s.skeleton.wrist)},
      {"mcp", point_json(s.skeleton.mcp)},
      {"fingertip", point_json(s.skeleton.fingertip)},
  };
  j["gt_box"] = box_json(s.gt_box);
  if (!s.candidates.empty()) {
    ordered_json cands = ordered_json::array();
    for (const auto& c : s.candidates) {
      cands.push_back({{"box", box_json(c.box)}, {"conf", c.confidence}});
    }
    j["candidates"] = std::move(cands);
  }
  if (s.pred_box) j["pred_box"] = box_json(*s.pred_box);
  j["text"] = s.text;
  return j;
}

LoadResult read_scenes(std::istream& in) {
  LoadResult result;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    SkippedRecord skip;
    skip.line = line_no;
    skip.id = "line:" + std::to_string(line_no);
    try {
      const json record = json::parse(text);
      if (record.is_object()) {
        if (const auto it = record.find("id"); it != record.end() && it->is_string()) {
          skip.id = it->get<std::string>();
        }
      }
      Scene scene = scene_from_json(record);
      validate_scene(scene);
      result.scenes.push_back(std::move(scene));
      continue;
    } catch (const json::exception& e) {
      skip.kind = ErrorKind::MalformedRecord;
      skip.message = "line " + std::to_string(line_no) + ": " + e.what();
    } catch (const Error& e) {
      skip.kind = e.kind();
      skip.message = "line " + std::to_string(line_no) + ": " + e.what();
    }
    result.skipped.push_back(std::move(skip));
  }
  return result;
}

LoadResult load_scenes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open " + path.string());
  return read_scenes(in);
}

void write_scenes(std::ostream& out, std::span<const Scene> scenes) {
  for (const auto& s : scenes) out << scene_to_json(s).dump() << '\n';
}

void write_labeled_scenes(std::ostream& out, std::span<const LabeledScene> scenes) {
  for (const auto& s : scenes) {
    ordered_json j = scene_to_json(s.scene);
    j["label"] = std::string(to_string(s.truth));
    out << j.dump() << '\n';
  }
}

}  // namespace adtl
