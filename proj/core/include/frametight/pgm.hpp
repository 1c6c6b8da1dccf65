#pragma once

// 8-bit binary PGM (P5) images and row-segment tiling.

#include <cstdint>
#include <string>
#include <vector>

#include "frametight/linalg.hpp"

namespace frametight {

struct GrayImage {
  Index width = 0;
  Index height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(Index row, Index col) const { return pixels[static_cast<size_t>(row * width + col)]; }
};

GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& image);

GrayImage parse_pgm(const std::string& bytes);
std::string format_pgm(const GrayImage& image);

/// Each image row is cut into segments of length `tile`; the last segment of
/// a row is padded by repeating the final pixel. Values are scaled to [0, 1].
std::vector<RealVector> tile_rows(const GrayImage& image, Index tile);

/// Inverse of tile_rows (padding dropped, values clamped and rounded).
GrayImage untile_rows(const std::vector<RealVector>& tiles, Index width, Index height, Index tile);

}  // namespace frametight
