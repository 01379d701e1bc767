#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "structlens/core/raster.h"

namespace structlens {

// 8-bit RGB PNG, no alpha, fixed encoder settings so equal images give equal
// bytes.
std::vector<std::uint8_t> encode_png(const RasterImage& image);
RasterImage decode_png(const std::vector<std::uint8_t>& bytes);

void write_png(const std::filesystem::path& path, const RasterImage& image);
RasterImage read_png(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace structlens
