#include <doctest.h>

#include <random>

#include "structlens/core/annotation.h"
#include "structlens/core/color.h"
#include "structlens/core/draw.h"
#include "structlens/core/errors.h"
#include "structlens/core/geometry.h"
#include "structlens/core/png_io.h"
#include "structlens/core/prompts.h"
#include "structlens/core/raster.h"
#include "structlens/core/transform.h"

using namespace structlens;

namespace {

// Counts covered cells directly on an integer grid.
double pixel_iou(int ax1, int ay1, int ax2, int ay2, int bx1, int by1, int bx2, int by2, int grid) {
  long inter = 0;
  long uni = 0;
  for (int y = 0; y < grid; ++y) {
    for (int x = 0; x < grid; ++x) {
      const bool in_a = x >= ax1 && x < ax2 && y >= ay1 && y < ay2;
      const bool in_b = x >= bx1 && x < bx2 && y >= by1 && y < by2;
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return uni == 0 ? 0.0 : double(inter) / double(uni);
}

}  // namespace

TEST_CASE("bbox_iou worked examples") {
  CHECK(bbox_iou({0, 0, 10, 10}, {0, 0, 10, 10}) == 1.0);
  CHECK(bbox_iou({0, 0, 10, 10}, {20, 20, 30, 30}) == 0.0);
  const double expect = pixel_iou(0, 0, 10, 10, 5, 5, 15, 15, 30);
  CHECK(expect == doctest::Approx(25.0 / 175.0).epsilon(1e-12));
  CHECK(std::abs(bbox_iou({0, 0, 10, 10}, {5, 5, 15, 15}) - expect) < 1e-12);
}

TEST_CASE("bbox_iou matches pixel counting on random 50x50 boxes") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coord(0, 50);
  for (int i = 0; i < 400; ++i) {
    int c[8];
    for (int& v : c) v = coord(rng);
    if (c[0] > c[2]) std::swap(c[0], c[2]);
    if (c[1] > c[3]) std::swap(c[1], c[3]);
    if (c[4] > c[6]) std::swap(c[4], c[6]);
    if (c[5] > c[7]) std::swap(c[5], c[7]);
    if (c[0] == c[2] || c[1] == c[3] || c[4] == c[6] || c[5] == c[7]) continue;
    const double oracle = pixel_iou(c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7], 50);
    const double got = bbox_iou({double(c[0]), double(c[1]), double(c[2]), double(c[3])},
                                {double(c[4]), double(c[5]), double(c[6]), double(c[7])});
    CHECK(std::abs(got - oracle) < 1e-12);
  }
}

TEST_CASE("bbox_iou is symmetric, bounded and 1 only for equal boxes") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 5000; ++i) {
    BBox a{u(rng), u(rng), 0, 0};
    a.x2 = a.x1 + u(rng) + 0.01;
    a.y2 = a.y1 + u(rng) + 0.01;
    BBox b{u(rng), u(rng), 0, 0};
    b.x2 = b.x1 + u(rng) + 0.01;
    b.y2 = b.y1 + u(rng) + 0.01;
    const double ab = bbox_iou(a, b);
    CHECK(ab == bbox_iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    if (ab > 1.0 - 1e-9) CHECK(a == b);
    CHECK(bbox_iou(a, a) == 1.0);
  }
}

TEST_CASE("pck examples and translation invariance") {
  CHECK(pck_threshold(1000, 800) == doctest::Approx(10.0));
  CHECK(pck_hit({100, 100}, {100, 100}, 1000, 800));
  CHECK(pck_hit({109, 100}, {100, 100}, 1000, 800));
  CHECK_FALSE(pck_hit({110.5, 100}, {100, 100}, 1000, 800));
  CHECK(pck_hit({110, 100}, {100, 100}, 1000, 800));  // inclusive boundary

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const Point p{u(rng), u(rng)};
    const Point g{u(rng) / 5, u(rng) / 5};
    const Point t{std::round(u(rng)), std::round(u(rng))};
    CHECK(pck_hit(p, g, 640, 480) == pck_hit(p + t, g + t, 640, 480));
  }
}

TEST_CASE("color_distance examples and triangle inequality") {
  CHECK(color_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(color_distance({255, 0, 0}, {0, 0, 0}) == 255.0);
  CHECK(color_distance({10, 20, 30}, {13, 24, 30}) == 5.0);
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> c(0, 255);
  auto rc = [&] {
    return ColorRGB{std::uint8_t(c(rng)), std::uint8_t(c(rng)), std::uint8_t(c(rng))};
  };
  for (int i = 0; i < 5000; ++i) {
    const auto a = rc(), b = rc(), d = rc();
    CHECK(color_distance(a, d) <= color_distance(a, b) + color_distance(b, d) + 1e-9);
  }
}

TEST_CASE("annotation json round trip and validation") {
  ElementAnnotation a{"r1c2/x_tick/3", ElementCategory::axis_tick, std::nullopt, Point{12, 40},
                      "25", 25.0, std::nullopt};
  ElementAnnotation b{"r1c2/subplot", ElementCategory::subplot, BBox{1, 2, 30, 40}, std::nullopt,
                      std::nullopt, std::nullopt, GridPos{1, 2}};
  const auto text = to_jsonl({a, b});
  const auto back = parse_jsonl(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == a);
  CHECK(back[1] == b);

  ElementAnnotation bad = a;
  bad.bbox = BBox{0, 0, 1, 1};
  CHECK_THROWS_AS(validate(bad), SchemaError);
  CHECK_THROWS_AS(category_from_string("nope"), SchemaError);

  const auto [pos, local] = split_element_id("r2c1/title");
  REQUIRE(pos);
  CHECK(*pos == GridPos{2, 1});
  CHECK(local == "title");
  CHECK_FALSE(split_element_id("title").first);
  CHECK(format_number(25.0) == "25");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("png encode is canonical and lossless") {
  RasterImage img(7, 5);
  img.set(3, 2, {1, 2, 3});
  img.set(6, 4, colors::kRed);
  const auto bytes = encode_png(img);
  CHECK(bytes == encode_png(img));
  CHECK(decode_png(bytes) == img);
  CHECK_THROWS_AS(decode_png({1, 2, 3}), IoError);
}

TEST_CASE("raster crop, blit and scale") {
  RasterImage img(10, 8);
  img.set(4, 3, colors::kBlack);
  const auto c = img.crop({3, 2, 4, 4});
  CHECK(c.width() == 4);
  CHECK(c.at(1, 1) == colors::kBlack);
  const auto s = scale_nearest(img, 1.5);
  CHECK(s.width() == 15);
  CHECK(s.height() == 12);
  CHECK(content_hash(img) != content_hash(s));
  const auto r = covering_rect({2.5, 3.2, 7.1, 7.9}, 2, 10, 8);
  CHECK(r == PixelRect{0, 1, 10, 7});
}

TEST_CASE("dash schedule over a 3-4-5 segment") {
  const auto iv = draw::dash_intervals(50.0, {});
  CHECK(iv.size() == 5);
  RasterImage img(40, 50);
  draw::segment(img, {0, 0}, {30, 40}, colors::kBlack, {});
  int lit = 0;
  for (int y = 0; y < 50; ++y)
    for (int x = 0; x < 40; ++x) lit += img.at(x, y) == colors::kBlack;
  CHECK(lit > 0);
}

TEST_CASE("transform maps points and boxes through crops") {
  const auto t = ImageTransform::crop({10, 20, 30, 40});
  CHECK(*t.map_point({15, 25}) == Point{5, 5});
  CHECK_FALSE(t.map_point({0, 0}));
  CHECK(*t.map_box({0, 0, 20, 30}) == BBox{0, 0, 10, 10});
  CHECK_FALSE(t.map_box({100, 100, 110, 110}));
}

TEST_CASE("prompt templates render known slots only") {
  CHECK(prompts::render("a <|x|> b <|y|>", {{"x", "1"}}) == "a 1 b <|y|>");
  for (const auto& name : prompts::builtin_names()) CHECK_FALSE(prompts::builtin(name).empty());
  CHECK_THROWS_AS(prompts::builtin("nope"), InvalidArgument);
}
