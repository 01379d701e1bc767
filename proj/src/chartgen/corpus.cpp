#include "structlens/chartgen/corpus.h"

#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "structlens/chartgen/compose.h"
#include "structlens/chartgen/renderer.h"
#include "structlens/chartgen/sampler.h"
#include "structlens/core/errors.h"
#include "structlens/core/png_io.h"

namespace structlens::chartgen {

namespace {

constexpr std::uint64_t kMultiSalt = 0x6d756c7469ULL;
constexpr Canvas kSingleCanvas{640, 480};
constexpr Canvas kPanelCanvas{480, 360};

std::string numbered(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, i, ext);
  return buf;
}

ChartKind kind_for(std::uint64_t sub_seed) {
  return static_cast<ChartKind>(sub_seed % 3);
}

Panel single_panel(std::uint64_t sub_seed, Canvas canvas) {
  auto rendered = render_chart(generate_chart_spec(sub_seed, kind_for(sub_seed), canvas));
  return {std::move(rendered.image), std::move(rendered.annotations)};
}

Panel multi_panel_sample(std::uint64_t sub_seed) {
  Sampler rng(sub_seed);
  const int k = static_cast<int>(rng.uniform_int(kMinPanels, kMaxPanels));
  // A pool smaller than k forces duplicated panels.
  const int pool_size = static_cast<int>(rng.uniform_int((k + 1) / 2, k));
  std::vector<Panel> pool;
  for (int t = 0; t < pool_size; ++t) {
    pool.push_back(single_panel(mix_seed(sub_seed, static_cast<std::uint64_t>(t)), kPanelCanvas));
  }
  std::vector<Panel> chosen;
  for (int i = 0; i < k; ++i) {
    chosen.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, pool_size - 1))]);
  }
  auto composite = compose_multipanel(chosen, sub_seed);
  return {std::move(composite.image), std::move(composite.annotations)};
}

}  // namespace

std::size_t multi_panel_count(std::size_t n) { return (n + 4) / 5; }

Manifest read_manifest(const std::filesystem::path& path) {
  const auto text = read_text(path);
  try {
    const auto j = nlohmann::json::parse(text);
    Manifest m;
    m.version = j.at("version").get<int>();
    m.seed = j.value("seed", std::uint64_t{0});
    for (const auto& e : j.at("entries")) {
      m.entries.push_back({e.at("image").get<std::string>(), e.at("annotations").get<std::string>(),
                           e.value("kind", std::string("single"))});
    }
    m.base_dir = path.parent_path();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path.string() + ": malformed manifest: " + e.what());
  }
}

std::string manifest_json(const Manifest& manifest) {
  nlohmann::ordered_json j;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries) {
    entries.push_back({{"image", e.image}, {"annotations", e.annotations}, {"kind", e.kind}});
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::filesystem::path export_corpus(std::size_t n, std::uint64_t seed,
                                    const std::filesystem::path& out_dir, unsigned threads) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string() + ": " + ec.message());

  const std::size_t m = multi_panel_count(n);
  Manifest manifest;
  manifest.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    manifest.entries.push_back({numbered("single", i, "png"), numbered("single", i, "jsonl"), "single"});
  }
  for (std::size_t j = 0; j < m; ++j) {
    manifest.entries.push_back({numbered("multi", j, "png"), numbered("multi", j, "jsonl"), "multi"});
  }

  const std::size_t total = manifest.entries.size();
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      try {
        const auto& entry = manifest.entries[idx];
        Panel sample = idx < n ? single_panel(mix_seed(seed, idx), kSingleCanvas)
                               : multi_panel_sample(mix_seed(seed ^ kMultiSalt, idx - n));
        write_png(out_dir / entry.image, sample.image);
        write_annotations(out_dir / entry.annotations, sample.annotations);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(total, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const auto manifest_path = out_dir / kManifestName;
  write_text(manifest_path, manifest_json(manifest));
  return manifest_path;
}

}  // namespace structlens::chartgen
