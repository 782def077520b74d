#include "motionscript/motion_io.hpp"
#include "scenarios.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(MOTIONSCRIPT_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + MOTIONSCRIPT_CLI + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read(e.path());
  return out;
}

}  // namespace

TEST_CASE("cli writes one file per caption") {
  const auto dir = fresh_dir("cli_basic");
  write(dir / "bend.json", motionscript::to_canonical_json(scenario::both_elbows_bend()));
  const auto out = dir / "out";
  REQUIRE(run("--captions-per-motion 3 --emit-intermediate --out " + out.string() + " " + (dir / "bend.json").string()) ==
          0);
  for (int k = 0; k < 3; ++k) {
    const auto txt = out / ("bend." + std::to_string(k) + ".txt");
    CHECK(fs::exists(txt));
    CHECK(fs::exists(out / ("bend." + std::to_string(k) + ".dump")));
    CHECK_FALSE(read(txt).empty());
  }
  const auto report = json::parse(read(out / "report.json"));
  REQUIRE(report["inputs"].size() == 1);
  CHECK(report["inputs"][0]["ok"] == true);
  CHECK(report["inputs"][0]["outputs"].size() == 6);
}

TEST_CASE("cli reports malformed inputs and continues") {
  const auto dir = fresh_dir("cli_bad");
  write(dir / "good.json", motionscript::to_canonical_json(scenario::left_arm_reaches_down()));
  write(dir / "bad.json", R"({"fps": 20, "joints": ["pelvis"], "frames": [[[0, 0, 0]]]})");
  const auto out = dir / "out";
  CHECK(run("--out " + out.string() + " " + (dir / "good.json").string() + " " + (dir / "bad.json").string()) == 1);
  CHECK(fs::exists(out / "good.0.txt"));
  const auto report = json::parse(read(out / "report.json"));
  REQUIRE(report["inputs"].size() == 2);
  CHECK(report["inputs"][0]["ok"] == true);
  CHECK(report["inputs"][1]["ok"] == false);
  CHECK(report["inputs"][1]["path"].get<std::string>().find("bad.json") != std::string::npos);
  CHECK_FALSE(report["inputs"][1]["error"].get<std::string>().empty());
}

TEST_CASE("cli output is reproducible") {
  const auto dir = fresh_dir("cli_repeat");
  write(dir / "a.json", motionscript::to_canonical_json(scenario::elbow_cycles_with_knee()));
  write(dir / "b.csv", motionscript::to_flat_csv(scenario::right_elbow_bend_and_spread()));
  const auto args = [&](const std::string& out) {
    return "--no-noise --seed 7 --emit-intermediate --captions-per-motion 2 --out " + (dir / out).string() + " " +
           (dir / "a.json").string();
  };
  REQUIRE(run(args("one")) == 0);
  REQUIRE(run(args("two")) == 0);
  CHECK(tree(dir / "one") == tree(dir / "two"));
  CHECK(tree(dir / "one").size() == 5);

  REQUIRE(run("--format flat-csv --seed 7 --out " + (dir / "csv").string() + " " + (dir / "b.csv").string()) == 0);
  CHECK(fs::exists(dir / "csv" / "b.0.txt"));
}

TEST_CASE("cli rejects bad configuration") {
  const auto dir = fresh_dir("cli_config");
  write(dir / "a.json", motionscript::to_canonical_json(scenario::both_elbows_bend()));
  write(dir / "bad.json", R"({"aggregation": {"N_maximum": 3}})");
  const auto out = (dir / "out").string();
  CHECK(run("--config " + (dir / "bad.json").string() + " --out " + out + " " + (dir / "a.json").string()) == 2);
  CHECK(run("--captions-per-motion 0 --out " + out + " " + (dir / "a.json").string()) == 2);
  CHECK(run("--format bvh --out " + out + " " + (dir / "a.json").string()) != 0);
  CHECK(run("--out " + out) != 0);
}
