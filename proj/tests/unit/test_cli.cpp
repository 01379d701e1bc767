#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "../support/bench_scenarios.h"
#include "../support/scenarios.h"
#include "structlens/chartgen/corpus.h"
#include "structlens/cli/cli.h"
#include "structlens/cli/config.h"
#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"
#include "structlens/geomtools/diagram.h"

using namespace structlens;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "structlens");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("structlens_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::map<std::string, std::vector<std::uint8_t>> dir_bytes(const fs::path& d) {
  std::map<std::string, std::vector<std::uint8_t>> out;
  for (const auto& e : fs::directory_iterator(d)) out[e.path().filename().string()] = read_file(e.path());
  return out;
}

}  // namespace

TEST_CASE("ini parsing and config mapping") {
  const auto t = cli::parse_ini(
      "# comment\n[grounding]\nmode = remote\nurl = \"http://h:1/v1\"  \nmodel = g # trailing\n"
      "[agents]\nvision = false\n[tools]\ntau = 25\n[workflow]\nmax_rounds = 2\n[synth]\nseed = 9\n");
  const auto c = cli::config_from_ini(t);
  CHECK(c.grounding_mode == "remote");
  CHECK(c.grounding.url == "http://h:1/v1");
  CHECK(c.grounding.model == "g");
  CHECK_FALSE(c.agents_vision);
  CHECK(c.tau == 25);
  CHECK(c.max_rounds == 2);
  CHECK(c.seed == 9);
  CHECK(c.max_steps == 10);
  CHECK_THROWS_AS(cli::config_from_ini(cli::parse_ini("[tools]\nblur = 1\n")), SchemaError);
  CHECK_THROWS_AS(cli::config_from_ini(cli::parse_ini("[grounding]\nmode = magic\n")), SchemaError);
  CHECK_THROWS_AS(cli::config_from_ini(cli::parse_ini("[workflow]\nmax_steps = many\n")), SchemaError);
  CHECK_THROWS_AS(cli::parse_ini("[broken\n"), SchemaError);
  CHECK_THROWS_AS(cli::parse_ini("novalue\n"), SchemaError);
}

TEST_CASE("help and usage errors") {
  auto r = invoke({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("synth") != std::string::npos);
  for (const char* sub : {"synth", "ground-eval", "tool", "solve", "bench", "import-intergps"}) {
    r = invoke({sub, "--help"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
  r = invoke({"frobnicate"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("--help") != std::string::npos);
  r = invoke({});
  CHECK(r.code == cli::kExitUsage);
  r = invoke({"synth", "--n", "x", "--out", "/tmp/x"});
  CHECK(r.code == cli::kExitUsage);
  r = invoke({"ground-eval", "--manifest", "/nonexistent/structlens/manifest.json"});
  CHECK(r.code == cli::kExitFailure);
}

TEST_CASE("synth writes 50 + 10 images deterministically, ground-eval scores 1") {
  const auto d = scratch("synth");
  auto r = invoke({"synth", "--n", "50", "--seed", "1", "--out", (d / "a").string()});
  REQUIRE(r.code == cli::kExitOk);
  int pngs = 0;
  for (const auto& e : fs::directory_iterator(d / "a")) pngs += e.path().extension() == ".png";
  CHECK(pngs == 60);
  CHECK(fs::exists(d / "a" / "manifest.json"));
  r = invoke({"synth", "--n", "50", "--seed", "1", "--out", (d / "b").string(), "--threads", "1"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(dir_bytes(d / "a") == dir_bytes(d / "b"));

  r = invoke({"ground-eval", "--manifest", (d / "a").string(), "--mode", "oracle", "--limit", "8"});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["overall"] == 1.0);
  CHECK(j["images"] == 8);

  r = invoke({"ground-eval", "--manifest", (d / "a").string(), "--limit", "4", "--perturb", "25",
           "--out", (d / "report.json").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(nlohmann::json::parse(read_text(d / "report.json"))["overall"].get<double>() < 1.0);
  CHECK(r.out.rfind("overall: ", 0) == 0);
  fs::remove_all(d);
}

TEST_CASE("tool subcommand") {
  const auto d = scratch("tool");
  const auto comp = testsupport::composite(2, 4);
  write_png(d / "chart.png", comp.image);
  write_annotations(d / "chart.jsonl", comp.annotations);
  auto r = invoke({"tool", "crop_subfigure", "--image", (d / "chart.png").string(), "--annotations",
                (d / "chart.jsonl").string(), "--arg", "target_desc=the subplot at row 1, column 2",
                "--out", (d / "crop.png").string(), "--provenance", (d / "prov.json").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(read_png(d / "crop.png").width() < comp.image.width());
  const auto prov = nlohmann::json::parse(read_text(d / "prov.json"));
  CHECK(prov["tool"] == "crop_subfigure");

  r = invoke({"tool", "Numeric_Computation", "--arg", "expression=sqrt(3^2+4^2)"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out == "5\n");

  r = invoke({"tool", "compute", "--arg", "expression=1/0"});
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("MathDomain") != std::string::npos);

  r = invoke({"tool", "crop_subfigure", "--image", (d / "chart.png").string(), "--arg",
           "target_desc=the subplot", "--out", (d / "x.png").string()});
  CHECK(r.code == cli::kExitUsage);  // oracle grounding without annotations
  r = invoke({"tool", "no_such_tool", "--arg", "a=1"});
  CHECK(r.code == cli::kExitUsage);
  r = invoke({"tool", "compute", "--arg", "novalue"});
  CHECK(r.code == cli::kExitUsage);
  fs::remove_all(d);
}

TEST_CASE("solve subcommand with a scripted backend") {
  const auto d = scratch("solve");
  const auto comp = testsupport::composite(11, 4);
  write_png(d / "chart.png", comp.image);
  write_annotations(d / "chart.jsonl", comp.annotations);
  write_text(d / "script.json", testsupport::crop_reason_script().dump());
  auto args = std::vector<std::string>{"solve", "--image", (d / "chart.png").string(), "--question",
                                       "What is the highest value?", "--annotations",
                                       (d / "chart.jsonl").string(), "--script",
                                       (d / "script.json").string()};
  auto r = invoke(args);
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["final_answer"] == "42");
  CHECK(j["rounds_used"] == 1);
  CHECK(invoke(args).out == r.out);

  args.push_back("--out");
  args.push_back((d / "trace.json").string());
  r = invoke(args);
  REQUIRE(r.code == cli::kExitOk);
  CHECK(nlohmann::json::parse(read_text(d / "trace.json"))["final_answer"] == "42");

  r = invoke({"solve", "--image", (d / "chart.png").string(), "--question", "q", "--annotations",
           (d / "chart.jsonl").string()});
  CHECK(r.code == cli::kExitUsage);  // no script and no endpoint
  fs::remove_all(d);
}

TEST_CASE("bench subcommand and the accuracy floor") {
  const auto d = scratch("bench");
  write_png(d / "blank.png", RasterImage(16, 16));
  write_text(d / "empty.jsonl", "");
  std::string items;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "q" + std::to_string(i);
    const std::string answer = i < 3 ? "7" : "8";
    write_text(d / (id + ".json"), testsupport::rounds_script({answer}, {false}).dump());
    write_text(d / (id + ".jsonl"), "");
    items += nlohmann::json{{"id", id}, {"image", "blank.png"}, {"question", "?"}, {"answer", "7"},
                            {"annotations", id + ".jsonl"}, {"script", id + ".json"}}
                 .dump() +
             "\n";
  }
  write_text(d / "items.jsonl", items);
  auto r = invoke({"bench", "--items", (d / "items.jsonl").string(), "--out", (d / "report.json").string(),
                "--concurrency", "2"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.rfind("accuracy: 0.750 (3/4)", 0) == 0);
  CHECK(nlohmann::json::parse(read_text(d / "report.json"))["accuracy"] == 0.75);
  r = invoke({"bench", "--items", (d / "items.jsonl").string(), "--floor", "0.8"});
  CHECK(r.code == cli::kExitFailure);
  CHECK(r.err.find("below the floor") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("import-intergps") {
  const auto d = scratch("intergps");
  write_text(d / "rec.json", R"({"point_positions": {"A": [10, 10], "B": [50.5, 60]}})");
  auto r = invoke({"import-intergps", "--input", (d / "rec.json").string(), "--out", (d / "pts.jsonl").string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto pts = geom::points_from_annotations(read_annotations(d / "pts.jsonl"));
  REQUIRE(pts.size() == 2);
  CHECK(pts[1].point == Point{50.5, 60});
  write_png(d / "small.png", RasterImage(20, 20));
  r = invoke({"import-intergps", "--input", (d / "rec.json").string(), "--out", (d / "x.jsonl").string(),
           "--image", (d / "small.png").string()});
  CHECK(r.code == cli::kExitFailure);
  fs::remove_all(d);
}
