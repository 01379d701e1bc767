#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "structlens/chartgen/chart_spec.h"
#include "structlens/chartgen/compose.h"
#include "structlens/chartgen/renderer.h"
#include "structlens/grounding/chat_client.h"
#include "structlens/grounding/oracle.h"

namespace testsupport {

using namespace structlens;

inline std::unique_ptr<grounding::OracleBackend> oracle_for(
    std::vector<ElementAnnotation> annotations, const std::string& ref = "img_0") {
  auto o = std::make_unique<grounding::OracleBackend>();
  o->add_image(ref, std::move(annotations));
  return o;
}

inline chartgen::Composite composite(std::uint64_t seed, int panels, chartgen::Canvas canvas = {320, 240}) {
  std::vector<chartgen::Panel> ps;
  for (int i = 0; i < panels; ++i) {
    auto r = chartgen::render_chart(
        chartgen::generate_chart_spec(seed * 31 + i, chartgen::ChartKind(i % 3), canvas));
    ps.push_back({std::move(r.image), std::move(r.annotations)});
  }
  return chartgen::compose_multipanel(ps, seed);
}

inline const ElementAnnotation& find_id(const std::vector<ElementAnnotation>& items,
                                        const std::string& id) {
  for (const auto& a : items)
    if (a.element_id == id) return a;
  throw std::runtime_error("no annotation " + id);
}

// Two-series line chart with the given legend placement.
inline chartgen::ChartSpec two_series_spec(std::uint64_t seed,
                                           chartgen::LegendPosition pos =
                                               chartgen::LegendPosition::inside_top_right) {
  auto spec = chartgen::generate_chart_spec(seed, chartgen::ChartKind::line);
  const auto palette = chartgen::series_palette();
  while (spec.series.size() < 2) {
    auto s = spec.series.front();
    s.name = "Series " + std::to_string(spec.series.size() + 1);
    for (auto& p : s.points) p.y = spec.y_ticks.front() + spec.y_ticks.back() - p.y;
    spec.series.push_back(s);
  }
  spec.series.resize(2);
  spec.series[0].name = "A";
  spec.series[1].name = "B";
  spec.series[0].color = palette[seed % palette.size()];
  spec.series[1].color = palette[(seed + 1) % palette.size()];
  spec.legend_position = pos;
  return spec;
}

// Replays canned HTTP replies and records what was posted.
class CannedTransport : public grounding::HttpTransport {
 public:
  explicit CannedTransport(std::deque<grounding::HttpResponse> replies) : replies_(std::move(replies)) {}

  grounding::HttpResponse post(const std::string& url, const std::string& body,
                               const std::map<std::string, std::string>& headers,
                               int) override {
    std::lock_guard lock(mutex_);
    posted.push_back({url, body, headers});
    if (replies_.empty()) return {0, ""};
    auto r = replies_.front();
    if (replies_.size() > 1 || !sticky) replies_.pop_front();
    return r;
  }

  struct Posted {
    std::string url;
    std::string body;
    std::map<std::string, std::string> headers;
  };
  std::vector<Posted> posted;
  bool sticky = false;  // keep repeating the last reply

 private:
  std::mutex mutex_;
  std::deque<grounding::HttpResponse> replies_;
};

inline std::string chat_body(const std::string& content) {
  nlohmann::json j;
  j["choices"] = {{{"message", {{"role", "assistant"}, {"content", content}}}}};
  return j.dump();
}

}  // namespace testsupport
