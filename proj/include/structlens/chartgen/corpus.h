#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace structlens::chartgen {

struct ManifestEntry {
  std::string image;        // relative to the manifest directory
  std::string annotations;  // relative to the manifest directory
  std::string kind;         // "single", "multi" or "geometry"
};

struct Manifest {
  int version = 1;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;  // not serialized

  std::filesystem::path image_path(const ManifestEntry& e) const { return base_dir / e.image; }
  std::filesystem::path annotations_path(const ManifestEntry& e) const {
    return base_dir / e.annotations;
  }
};

Manifest read_manifest(const std::filesystem::path& path);
std::string manifest_json(const Manifest& manifest);

inline constexpr char kManifestName[] = "manifest.json";

// Number of composites accompanying n single-panel charts: ceil(n / 5).
std::size_t multi_panel_count(std::size_t n);

// Writes n single-panel charts plus ceil(n/5) composites (PNG + JSONL each)
// and manifest.json into out_dir. Output bytes depend only on (n, seed).
// `threads` = 0 picks the hardware concurrency.
std::filesystem::path export_corpus(std::size_t n, std::uint64_t seed,
                                    const std::filesystem::path& out_dir, unsigned threads = 0);

}  // namespace structlens::chartgen
