#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "adtl/errors.hpp"
#include "adtl/scene_io.hpp"
#include "adtl/scene_sim.hpp"
#include "test_support.hpp"

using namespace adtl;

namespace {

const char* kRecord =
    R"({"id":"r1","image_width":100,"image_height":100,)"
    R"("skeleton":{"eye":[10,10],"shoulder":[20,30],"elbow":[30,30],"wrist":[40,30],)"
    R"("mcp":[42,30],"fingertip":[45,30]},"gt_box":[60,25,70,35],)"
    R"("candidates":[{"box":[60,25,70,35],"conf":0.5}],"text":"the cup"})";

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("empty input yields no scenes") {
  std::istringstream in("");
  const auto r = read_scenes(in);
  CHECK(r.scenes.empty());
  CHECK(r.skipped.empty());
  std::istringstream blanks("\n  \n\t\n");
  CHECK(read_scenes(blanks).n_records() == 0);
}

TEST_CASE("a well-formed record parses") {
  std::istringstream in(kRecord);
  const auto r = read_scenes(in);
  REQUIRE(r.scenes.size() == 1);
  const Scene& s = r.scenes[0];
  CHECK(s.id == "r1");
  CHECK(s.skeleton.mcp == Vec2{42, 30});
  CHECK(s.gt_box == BoundingBox{60, 25, 70, 35});
  REQUIRE(s.candidates.size() == 1);
  CHECK(s.candidates[0].confidence == 0.5);
  CHECK_FALSE(s.pred_box.has_value());
  CHECK(s.text == "the cup");
}

TEST_CASE("a record missing the mcp is skipped with its field path") {
  std::string bad = kRecord;
  bad.replace(bad.find(R"("mcp":[42,30],)"), std::string(R"("mcp":[42,30],)").size(), "");
  bad.replace(bad.find("\"r1\""), 4, "\"r2\"");
  std::istringstream in(std::string(kRecord) + "\n" + bad + "\n");
  const auto r = read_scenes(in);
  CHECK(r.scenes.size() == 1);
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].id == "r2");
  CHECK(r.skipped[0].line == 2);
  CHECK(r.skipped[0].kind == ErrorKind::MalformedRecord);
  CHECK(r.skipped[0].message.find("skeleton.mcp") != std::string::npos);
}

TEST_CASE("unparseable and invalid lines are skipped") {
  std::string invalid = kRecord;
  invalid.replace(invalid.find(R"("fingertip":[45,30])"), 19, R"("fingertip":[42,30])");
  std::istringstream in("{not json\n" + invalid + "\n");
  const auto r = read_scenes(in);
  REQUIRE(r.skipped.size() == 2);
  CHECK(r.skipped[0].id == "line:1");
  CHECK(r.skipped[0].kind == ErrorKind::MalformedRecord);
  CHECK(r.skipped[1].kind == ErrorKind::DegenerateSkeleton);
}

TEST_CASE("two eyes are averaged") {
  std::string rec = kRecord;
  rec.replace(rec.find(R"("eye":[10,10])"), 13, R"("eye":[[8,10],[12,14]])");
  const Scene s = scene_from_json(nlohmann::json::parse(rec));
  CHECK(s.skeleton.eye == Vec2{10, 12});
}

TEST_CASE("optional pred_box") {
  std::string rec = kRecord;
  rec.replace(rec.find(R"("candidates")"), std::string(R"("candidates":[{"box":[60,25,70,35],"conf":0.5}])").size(),
              R"("pred_box":[61,25,70,36])");
  const Scene s = scene_from_json(nlohmann::json::parse(rec));
  CHECK(s.candidates.empty());
  REQUIRE(s.pred_box.has_value());
  CHECK(*s.pred_box == BoundingBox{61, 25, 70, 36});
}

TEST_CASE("write then read round-trips simulator scenes") {
  SimSpec spec;
  spec.n_scenes = 60;
  spec.noise_px = 3.0;
  spec.rng_seed = 37;
  const auto labeled = generate(spec);
  std::vector<Scene> scenes;
  for (const auto& l : labeled) scenes.push_back(l.scene);
  scenes[0].pred_box = BoundingBox{1.0 / 3.0, 0.1, 50.25, 60.5};

  std::stringstream buf;
  write_scenes(buf, scenes);
  const auto back = read_scenes(buf);
  REQUIRE(back.skipped.empty());
  REQUIRE(back.scenes.size() == scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const Scene& a = scenes[i];
    const Scene& b = back.scenes[i];
    CHECK(a.id == b.id);
    CHECK(std::abs(a.skeleton.fingertip.x - b.skeleton.fingertip.x) < 1e-9);
    CHECK(std::abs(a.gt_box.x_max - b.gt_box.x_max) < 1e-9);
    CHECK(a == b);
  }

  std::stringstream lab;
  write_labeled_scenes(lab, labeled);
  std::string first;
  std::getline(lab, first);
  const auto j = nlohmann::json::parse(first);
  CHECK(j["label"] == std::string(to_string(labeled[0].truth)));
  std::stringstream again(first);
  CHECK(read_scenes(again).scenes.size() == 1);
}

TEST_CASE("load_scenes reads a file and reports a missing one") {
  const auto p = temp_file("adtl_io_test.jsonl", std::string(kRecord) + "\n");
  CHECK(load_scenes(p).scenes.size() == 1);
  std::filesystem::remove(p);
  try {
    load_scenes(p);
    FAIL("expected FileNotFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FileNotFound);
  }
}

TEST_CASE("format_number is the shortest round-trip form") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_number(third)) == third);
}
