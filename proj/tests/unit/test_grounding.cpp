#include <doctest.h>

#include <filesystem>

#include "../support/fixtures.h"
#include "structlens/chartgen/corpus.h"
#include "structlens/core/errors.h"
#include "structlens/grounding/evaluator.h"
#include "structlens/grounding/prompt.h"
#include "structlens/grounding/remote.h"
#include "structlens/grounding/response_parser.h"

using namespace structlens;
using namespace structlens::grounding;
namespace fs = std::filesystem;

TEST_CASE("element prompt grammar") {
  auto r = parse_element_prompt("the subplot at row 2, column 1");
  CHECK(r.category == ElementCategory::subplot);
  CHECK(r.panel == GridPos{2, 1});
  r = parse_element_prompt("tick 25 on the x axis");
  CHECK(r.category == ElementCategory::axis_tick);
  CHECK(r.axis == 'x');
  CHECK(r.value == 25.0);
  r = parse_element_prompt("point B");
  CHECK(r.category == ElementCategory::geom_point);
  CHECK(r.label == "B");
  r = parse_element_prompt("the legend entry \"Group A\" of the subplot at row 1, column 2");
  CHECK(r.category == ElementCategory::legend_region);
  CHECK(r.label == "Group A");
  CHECK(r.panel == GridPos{1, 2});
  CHECK_FALSE(parse_element_prompt("the weather tomorrow").category);
}

TEST_CASE("canonical prompts resolve back to their own annotation") {
  const auto comp = testsupport::composite(4, 4);
  for (const auto& a : comp.annotations) {
    const auto ref = parse_element_prompt(canonical_prompt(a));
    const auto* hit = find_element(comp.annotations, ref);
    REQUIRE(hit);
    if (a.bbox) CHECK(hit->bbox == a.bbox);
    if (a.point) CHECK(hit->point == a.point);
  }
}

TEST_CASE("oracle lookups on a composite") {
  const auto comp = testsupport::composite(2, 4);
  auto oracle = testsupport::oracle_for(comp.annotations);
  const auto truth = testsupport::find_id(comp.annotations, "r1c2/subplot");
  auto res = oracle->ground({"img_0", "subplot at row 1, column 2", ExpectedKind::box}, comp.image);
  REQUIRE(res.box());
  CHECK(*res.box() == *truth.bbox);
  res = oracle->ground({"img_0", "the subplot at row 9, column 1", ExpectedKind::box}, comp.image);
  CHECK_FALSE(res.found());
  res = oracle->ground({"img_7", "the subplot at row 1, column 1", ExpectedKind::box}, comp.image);
  CHECK_FALSE(res.found());
}

TEST_CASE("oracle follows derived images through transforms") {
  const auto comp = testsupport::composite(3, 4);
  auto oracle = testsupport::oracle_for(comp.annotations);
  const auto sub = *testsupport::find_id(comp.annotations, "r2c1/subplot").bbox;
  const PixelRect rect = covering_rect(sub, 0, comp.image.width(), comp.image.height());
  oracle->on_derived_image("img_1", "img_0", ImageTransform::crop(rect), {});
  const auto res = oracle->ground({"img_1", "the title of the subplot at row 2, column 1", ExpectedKind::box},
                                  comp.image.crop(rect));
  REQUIRE(res.box());
  const auto title = *testsupport::find_id(comp.annotations, "r2c1/title").bbox;
  CHECK(res.box()->x1 == title.x1 - rect.x);
  CHECK(res.box()->y1 == title.y1 - rect.y);
  CHECK_FALSE(oracle->ground({"img_1", "the subplot at row 1, column 1", ExpectedKind::box}, comp.image)
                  .found());
}

TEST_CASE("response parser formats") {
  auto o = parse_grounding_text("[12, 30, 200, 180]", ExpectedKind::box, 640, 480);
  CHECK(std::get<BBox>(o) == BBox{12, 30, 200, 180});
  o = parse_grounding_text("<|box_start|>(1,2),(3,4)<|box_end|>", ExpectedKind::box, 640, 480);
  CHECK(std::get<BBox>(o) == BBox{1, 2, 3, 4});
  o = parse_grounding_text("The point is at (15, 22).", ExpectedKind::point, 640, 480);
  CHECK(std::get<Point>(o) == Point{15, 22});
  o = parse_grounding_text("Not found", ExpectedKind::box, 640, 480);
  CHECK(std::holds_alternative<NotFound>(o));
  o = parse_grounding_text("[-5, 10, 900, 20]", ExpectedKind::box, 640, 480);
  CHECK(std::get<BBox>(o) == BBox{0, 10, 640, 20});
  CHECK_THROWS_AS(parse_grounding_text("no idea", ExpectedKind::box, 640, 480), MalformedResponse);
}

TEST_CASE("clamping keeps results inside the image") {
  for (int i = -50; i < 700; i += 37) {
    const auto b = std::get<BBox>(clamp_outcome(BBox{double(i), double(-i), double(i + 100), double(i * 2)}, 640, 480));
    CHECK(b.x1 >= 0);
    CHECK(b.y1 >= 0);
    CHECK(b.x2 <= 640);
    CHECK(b.y2 <= 480);
    const auto p = std::get<Point>(clamp_outcome(Point{double(i), double(i)}, 640, 480));
    CHECK(p.x <= 639);
    CHECK(p.y <= 479);
    CHECK(p.x >= 0);
  }
}

TEST_CASE("remote grounding over a canned transport") {
  auto transport = std::make_shared<testsupport::CannedTransport>(std::deque<HttpResponse>{
      {503, "busy"}, {200, testsupport::chat_body("<|box_start|>[12, 30, 200, 180]<|box_end|>")}});
  ChatClient client({"http://model.invalid/v1/chat", "grounder", "STRUCTLENS_TEST_TOKEN", 5, 2},
                    transport);
  RemoteGroundingBackend backend(client);
  RasterImage img(320, 240);
  const auto res = backend.ground({"img_0", "the legend", ExpectedKind::box}, img);
  REQUIRE(res.box());
  CHECK(*res.box() == BBox{12, 30, 200, 180});
  CHECK(res.raw_text);
  REQUIRE(transport->posted.size() == 2);
  const auto body = nlohmann::json::parse(transport->posted[1].body);
  CHECK(body["model"] == "grounder");
  CHECK(body["messages"].back()["content"][0]["type"] == "image");
  CHECK(body.dump().find("the legend") != std::string::npos);

  auto dead = std::make_shared<testsupport::CannedTransport>(std::deque<HttpResponse>{});
  RemoteGroundingBackend down(ChatClient({"http://model.invalid", "g", "X", 1, 1}, dead));
  CHECK_THROWS_AS(down.ground({"img_0", "the legend", ExpectedKind::box}, img), BackendUnavailable);
  CHECK(dead->posted.size() == 2);
}

TEST_CASE("chat reply extraction") {
  CHECK(chat_reply_text(testsupport::chat_body("hi")) == "hi");
  CHECK(chat_reply_text(R"({"content": "x"})") == "x");
  CHECK_THROWS_AS(chat_reply_text("<html>"), MalformedResponse);
}

namespace {

class NeverFinds : public GroundingBackend {
 public:
  std::string id() const override { return "never"; }
  GroundingResult ground(const GroundingRequest&, const RasterImage&) override {
    return {NotFound{}, id(), std::nullopt};
  }
};

}  // namespace

TEST_CASE("evaluator: oracle, misses, monotonicity and report arithmetic") {
  const auto dir = fs::temp_directory_path() / "structlens_geval_test";
  fs::remove_all(dir);
  const auto manifest = chartgen::read_manifest(chartgen::export_corpus(10, 5, dir));

  OracleBackend oracle(manifest);
  const auto exact = evaluate_grounding(oracle, manifest);
  CHECK(exact.overall == 1.0);
  for (const auto& [cat, s] : exact.per_category) CHECK(s == 1.0);
  CHECK(exact.images == 12);

  NeverFinds never;
  const auto none = evaluate_grounding(never, manifest, {3, 2});
  CHECK(none.overall == 0.0);
  CHECK(none.images == 3);
  CHECK(none.not_found > 0);

  GroundingReport prev = exact;
  for (double d : {2.0, 25.0}) {
    PerturbedBackend p(oracle, d);
    const auto rep = evaluate_grounding(p, manifest);
    for (const auto& [cat, s] : rep.per_category) CHECK(s <= prev.per_category.at(cat));
    CHECK(rep.overall <= prev.overall);
    double mean = 0;
    for (const auto& [cat, s] : rep.per_category) mean += s;
    CHECK(std::abs(mean / double(rep.per_category.size()) - rep.overall) < 1e-12);
    prev = rep;
  }
  const auto j = to_json(exact);
  CHECK(j["overall"] == 1.0);
  fs::remove_all(dir);
}
