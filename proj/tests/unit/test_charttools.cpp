#include <doctest.h>

#include <random>
#include <set>

#include "../support/fixtures.h"
#include "structlens/charttools/chart_tools.h"
#include "structlens/core/errors.h"
#include "structlens/grounding/prompt.h"

using namespace structlens;
using namespace structlens::tools;
using testsupport::find_id;
using testsupport::oracle_for;

namespace {

ElementAnnotation box_ann(std::string id, ElementCategory cat, BBox b) {
  ElementAnnotation a;
  a.element_id = std::move(id);
  a.category = cat;
  a.bbox = b;
  return a;
}

ElementAnnotation tick_ann(std::string id, Point p, double value) {
  ElementAnnotation a;
  a.element_id = std::move(id);
  a.category = ElementCategory::axis_tick;
  a.point = p;
  a.axis_value = value;
  a.label_text = format_number(value);
  return a;
}

// A 600x400 canvas with hand-placed ticks: x 0 at 50, 10 at 450; y 0 at 300, 10 at 200, 20 at 100.
std::vector<ElementAnnotation> ruler_annotations() {
  return {box_ann("subplot", ElementCategory::subplot, {30, 40, 480, 330}),
          tick_ann("x_tick/0", {50, 320}, 0),  tick_ann("x_tick/1", {450, 320}, 10),
          tick_ann("y_tick/0", {40, 300}, 0),  tick_ann("y_tick/1", {40, 200}, 10),
          tick_ann("y_tick/2", {40, 100}, 20)};
}

RasterImage noise_image(int w, int h, unsigned seed) {
  RasterImage img(w, h);
  std::mt19937 rng(seed);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.set(x, y, {std::uint8_t(rng()), std::uint8_t(rng()), std::uint8_t(rng())});
  return img;
}

}  // namespace

TEST_CASE("crop of a composite subplot is the padded annotation box") {
  const auto comp = testsupport::composite(6, 4);
  auto oracle = oracle_for(comp.annotations);
  const RasterImage before = comp.image;
  const int W = comp.image.width(), H = comp.image.height();
  int plain = 0;
  for (int row = 1; row <= 2; ++row) {
    for (int col = 1; col <= 2; ++col) {
      grounding::Grounder g(*oracle, "img_0");
      const std::string prefix = panel_prefix({row, col});
      const auto out = crop_subfigure(comp.image, grounding::subplot_prompt({row, col}), g);
      const BBox b = *find_id(comp.annotations, prefix + "subplot").bbox;
      const BBox legend = *find_id(comp.annotations, prefix + "legend").bbox;
      const PixelRect expect = covering_rect(b, kCropPad, W, H);
      CHECK(out.image.width() >= expect.width);
      CHECK(out.image.crop({0, 0, expect.width, expect.height}) == comp.image.crop(expect));
      if (b.contains(legend)) {
        ++plain;
        CHECK(out.image.width() == expect.width);
        CHECK(out.image.height() == expect.height);
      } else {
        const PixelRect lr = covering_rect(legend, kCropPad, W, H);
        CHECK(out.image.height() == expect.height + kStackSeparator + lr.height);
      }
      CHECK(out.provenance.tool == "crop_subfigure");
      CHECK_FALSE(out.provenance.grounding_calls.empty());
    }
  }
  CHECK(plain > 0);
  CHECK(comp.image == before);
}

TEST_CASE("crop covering the whole canvas is the identity") {
  const auto img = noise_image(60, 40, 1);
  auto oracle = oracle_for({box_ann("subplot", ElementCategory::subplot, {0, 0, 60, 40})});
  grounding::Grounder g(*oracle, "img_0");
  CHECK(crop_subfigure(img, "the subplot", g).image == img);
}

TEST_CASE("crop stacks an outside legend under the subplot") {
  const auto img = noise_image(200, 150, 2);
  auto oracle = oracle_for({box_ann("r1c1/subplot", ElementCategory::subplot, {10, 10, 110, 90}),
                            box_ann("r1c1/legend", ElementCategory::legend_region, {20, 110, 80, 130})});
  grounding::Grounder g(*oracle, "img_0");
  const auto out = crop_subfigure(img, "the subplot at row 1, column 1", g);
  const auto sub = covering_rect({10, 10, 110, 90}, kCropPad, 200, 150);
  const auto leg = covering_rect({20, 110, 80, 130}, kCropPad, 200, 150);
  CHECK(out.image.height() == sub.height + leg.height + kStackSeparator);
  CHECK(out.image.width() == std::max(sub.width, leg.width));
  CHECK(out.image.crop({0, 0, sub.width, sub.height}) == img.crop(sub));
  CHECK(out.image.crop({0, sub.height + kStackSeparator, leg.width, leg.height}) == img.crop(leg));
  CHECK(out.transform.pieces().size() == 2);
  const auto mapped = out.transform.map_box({20, 110, 80, 130});
  REQUIRE(mapped);
  CHECK(mapped->y1 == sub.height + kStackSeparator + (110 - leg.y));
}

TEST_CASE("crop errors") {
  const auto img = noise_image(100, 100, 3);
  auto oracle = oracle_for({box_ann("r1c1/subplot", ElementCategory::subplot, {10, 10, 12, 12})});
  grounding::Grounder g(*oracle, "img_0");
  CHECK_THROWS_AS(crop_subfigure(img, "the subplot at row 2, column 2", g), GroundingMiss);
  auto tiny = oracle_for({box_ann("r1c1/subplot", ElementCategory::subplot, {10, 10, 10, 10})});
  grounding::Grounder g2(*tiny, "img_0");
  CHECK_THROWS_AS(crop_subfigure(noise_image(100, 100, 3), "the subplot at row 1, column 1", g2),
                  DegenerateRegion);
}

TEST_CASE("magnify window arithmetic") {
  const auto img = noise_image(600, 400, 4);
  auto oracle = oracle_for(ruler_annotations());
  grounding::Grounder g(*oracle, "img_0");
  MagnifyRequest req;
  req.x = AxisWindow{0, 10};
  req.scale = 2;
  const auto out = magnify_region(img, req, g);
  CHECK(out.image.width() == 2 * (450 - 50 + kRulerMargin));
  CHECK(out.image.height() == 2 * (330 - 40));

  MagnifyRequest both;
  both.x = AxisWindow{0, 10};
  both.y = AxisWindow{0, 20};
  both.scale = 1.5;
  const auto o2 = magnify_region(img, both, g);
  const int rw = 450 - 50 + kRulerMargin;
  const int rh = 300 - 100 + kRulerMargin;
  CHECK(o2.image.width() == int(std::ceil(rw * 1.5)));
  CHECK(o2.image.height() == int(std::ceil(rh * 1.5)));

  MagnifyRequest empty;
  empty.x = AxisWindow{10, 10};
  CHECK_THROWS_AS(magnify_region(img, empty, g), EmptyWindow);
  MagnifyRequest small;
  small.x = AxisWindow{0, 10};
  small.scale = 0.5;
  CHECK_THROWS_AS(magnify_region(img, small, g), InvalidArgument);
  MagnifyRequest missing;
  missing.x = AxisWindow{0, 35};
  CHECK_THROWS_AS(magnify_region(img, missing, g), GroundingMiss);
}

TEST_CASE("magnify at scale 1 over the full axis keeps the plot area") {
  const auto spec = chartgen::generate_chart_spec(12, chartgen::ChartKind::line);
  const auto r = chartgen::render_chart(spec);
  auto oracle = oracle_for(r.annotations);
  grounding::Grounder g(*oracle, "img_0");
  MagnifyRequest req;
  req.x = AxisWindow{spec.x_ticks.front(), spec.x_ticks.back()};
  req.y = AxisWindow{spec.y_ticks.front(), spec.y_ticks.back()};
  req.scale = 1;
  const auto out = magnify_region(r.image, req, g);
  const auto region = out.transform.pieces().front().source;
  CHECK(out.image == r.image.crop(region));
  CHECK(region.x <= r.plot_rect.x + 1);
  CHECK(region.right() >= r.plot_rect.right() - 1);
  CHECK(region.y <= r.plot_rect.y + 1);
  CHECK(region.bottom() >= r.plot_rect.bottom() - 1);
}

TEST_CASE("magnify scale law on random windows") {
  const auto img = noise_image(600, 400, 5);
  auto oracle = oracle_for(ruler_annotations());
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> s(1.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    grounding::Grounder g(*oracle, "img_0");
    MagnifyRequest req;
    req.y = AxisWindow{0, 10};
    req.scale = s(rng);
    const auto out = magnify_region(img, req, g);
    const auto src = out.transform.pieces().front().source;
    CHECK(out.image.width() == int(std::ceil(src.width * req.scale)));
    CHECK(out.image.height() == int(std::ceil(src.height * req.scale)));
  }
}

TEST_CASE("auxiliary line placement and locality") {
  const auto img = noise_image(600, 400, 6);
  auto oracle = oracle_for(ruler_annotations());
  grounding::Grounder g(*oracle, "img_0");

  AuxiliaryLineRequest at_tick{'y', 10, {}, std::nullopt, {}};
  const auto o1 = add_auxiliary_line(img, at_tick, g);
  AuxiliaryLineRequest mid{'y', 15, {10, 20}, std::nullopt, {}};
  const auto o2 = add_auxiliary_line(img, mid, g);

  auto changed_rows = [&](const RasterImage& out) {
    std::set<int> rows;
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        if (!(out.at(x, y) == img.at(x, y))) rows.insert(y);
    return rows;
  };
  const auto r1 = changed_rows(o1.image);
  REQUIRE(r1.size() == 1);
  CHECK(std::abs(*r1.begin() - 200) <= 1);
  const auto r2 = changed_rows(o2.image);
  REQUIRE(r2.size() == 1);
  CHECK(std::abs(*r2.begin() - 150) <= 1);

  AuxiliaryLineRequest vert{'x', 5, {0, 10}, std::nullopt, {}};
  const auto o3 = add_auxiliary_line(img, vert, g);
  std::set<int> cols;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (!(o3.image.at(x, y) == img.at(x, y))) cols.insert(x);
  CHECK(cols == std::set<int>{250});

  AuxiliaryLineRequest far{'y', 100, {0, 10, 20}, std::nullopt, {}};
  CHECK_THROWS_AS(add_auxiliary_line(img, far, g), GroundingMiss);
  AuxiliaryLineRequest no_refs{'y', 15, {}, std::nullopt, {}};
  CHECK_THROWS_AS(add_auxiliary_line(img, no_refs, g), GroundingMiss);
}

TEST_CASE("tick interpolation rules") {
  const std::vector<std::pair<double, double>> t{{0, 300}, {10, 200}, {20, 100}};
  CHECK(interpolate_tick_pixel(t, 10) == 200);
  CHECK(interpolate_tick_pixel(t, 5) == 250);
  CHECK(interpolate_tick_pixel(t, 21) == doctest::Approx(90));
  CHECK(interpolate_tick_pixel(t, -2) == doctest::Approx(320));
  CHECK_THROWS_AS(interpolate_tick_pixel(t, 23), GroundingMiss);
  const std::vector<std::pair<double, double>> one{{0, 300}};
  CHECK_THROWS_AS(interpolate_tick_pixel(one, 5), GroundingMiss);
}

TEST_CASE("dominant colour examples") {
  RasterImage red(10, 10, colors::kRed);
  CHECK(dominant_color(red, {0, 0, 10, 10}) == colors::kRed);

  RasterImage mix(10, 10, ColorRGB{0, 0, 200});
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 10; ++y) mix.set(x, y, {0, 160, 0});
  CHECK(dominant_color(mix, {0, 0, 10, 10}) == ColorRGB{0, 0, 200});

  RasterImage icon(20, 20);
  for (int i = 0; i < 30; ++i) icon.set(i % 10, i / 10, {220, 30, 30});
  CHECK(dominant_color(icon, {0, 0, 20, 20}) == ColorRGB{220, 30, 30});
  CHECK(dominant_share(icon, {0, 0, 20, 20}) == 1.0);

  CHECK_THROWS_AS(dominant_color(RasterImage(5, 5), {0, 0, 5, 5}), EmptyAfterFiltering);
  CHECK_THROWS_AS(dominant_color(red, {3, 3, 3, 8}), InvalidArgument);
  CHECK(is_data_color({200, 30, 30}));
  CHECK_FALSE(is_data_color({250, 250, 250}));
  CHECK_FALSE(is_data_color({5, 5, 5}));
}

TEST_CASE("legend masking on a two-series chart") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto spec = testsupport::two_series_spec(seed);
    const auto r = chartgen::render_chart(spec);
    auto oracle = oracle_for(r.annotations);
    grounding::Grounder g(*oracle, "img_0");
    const auto out = mask_by_legend(r.image, "the legend entry \"B\"", MaskMode::remove, g);
    const int w = r.image.width();
    auto px = [&](const RasterImage& im, std::uint32_t i) { return im.at(int(i % w), int(i / w)); };
    std::size_t b_white = 0;
    for (auto i : r.series_pixels[1]) b_white += px(out.image, i) == colors::kWhite;
    CHECK(double(b_white) >= 0.95 * double(r.series_pixels[1].size()));
    std::size_t a_same = 0;
    for (auto i : r.series_pixels[0]) a_same += px(out.image, i) == px(r.image, i);
    CHECK(double(a_same) >= 0.95 * double(r.series_pixels[0].size()));
  }
}

TEST_CASE("keep_only on a one-series chart changes nothing in the plot") {
  auto spec = testsupport::two_series_spec(3);
  spec.series.resize(1);
  const auto r = chartgen::render_chart(spec);
  auto oracle = oracle_for(r.annotations);
  grounding::Grounder g(*oracle, "img_0");
  const auto out =
      mask_by_legend(r.image, "the legend entry \"" + spec.series[0].name + "\"", MaskMode::keep_only, g);
  const auto legend = *find_id(r.annotations, "legend").bbox;
  std::size_t diff = 0;
  for (int y = r.plot_rect.y; y < r.plot_rect.bottom(); ++y)
    for (int x = r.plot_rect.x; x < r.plot_rect.right(); ++x)
      if (!legend.contains(Point{double(x), double(y)}) && !(out.image.at(x, y) == r.image.at(x, y))) ++diff;
  // Only antialias-free stroke borders could differ; the renderer paints flat colours.
  CHECK(diff == 0);
}

TEST_CASE("masking errors and modes") {
  const auto r = chartgen::render_chart(testsupport::two_series_spec(1));
  auto oracle = oracle_for(r.annotations);
  grounding::Grounder g(*oracle, "img_0");
  CHECK_THROWS_AS(mask_by_legend(r.image, "the legend entry \"Nope\"", MaskMode::remove, g), GroundingMiss);
  CHECK(mask_mode_from_string("keep_only") == MaskMode::keep_only);
  CHECK(mask_mode_from_string("remove") == MaskMode::remove);
  CHECK_THROWS_AS(mask_mode_from_string("blur"), InvalidArgument);

  RasterImage img(10, 10);
  img.set(2, 2, {200, 0, 0});
  img.set(3, 3, {190, 10, 0});
  img.set(4, 4, {0, 0, 200});
  const auto m = color_mask(img, {200, 0, 0}, img.bounds(), std::nullopt, 30);
  CHECK(m == std::vector<std::uint32_t>{22, 33});
  CHECK(color_mask(img, {200, 0, 0}, img.bounds(), PixelRect{0, 0, 3, 3}, 30) ==
        std::vector<std::uint32_t>{33});
}
