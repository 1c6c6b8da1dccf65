#include "frametight/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "frametight/errors.hpp"

namespace frametight {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string header_token(const std::string& bytes, size_t& pos) {
  while (pos < bytes.size()) {
    const auto c = static_cast<unsigned char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(c) != 0) {
      ++pos;
    } else {
      break;
    }
  }
  const size_t start = pos;
  while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])) == 0) ++pos;
  if (start == pos) throw ParseError("pgm: truncated header");
  return bytes.substr(start, pos - start);
}

Index header_int(const std::string& bytes, size_t& pos) {
  const std::string tok = header_token(bytes, pos);
  if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
    throw ParseError("pgm: bad header value '" + tok + "'");
  }
  return std::stol(tok);
}

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  size_t pos = 0;
  if (header_token(bytes, pos) != "P5") throw ParseError("pgm: only binary P5 images are supported");
  GrayImage img;
  img.width = header_int(bytes, pos);
  img.height = header_int(bytes, pos);
  const Index maxval = header_int(bytes, pos);
  if (img.width <= 0 || img.height <= 0) throw ParseError("pgm: empty image");
  if (maxval <= 0 || maxval > 255) throw ParseError("pgm: only 8-bit images are supported");
  ++pos;  // the single whitespace byte after maxval
  const auto count = static_cast<size_t>(img.width * img.height);
  if (bytes.size() < pos + count) throw ParseError("pgm: truncated pixel data");
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  if (maxval != 255) {
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(std::lround(255.0 * p / static_cast<double>(maxval)));
  }
  return img;
}

std::string format_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pgm(buf.str());
}

void write_pgm(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << format_pgm(image);
}

std::vector<RealVector> tile_rows(const GrayImage& image, Index tile) {
  if (tile < 1) throw PreconditionError("tile size must be positive");
  std::vector<RealVector> tiles;
  for (Index row = 0; row < image.height; ++row) {
    for (Index start = 0; start < image.width; start += tile) {
      RealVector v(tile);
      for (Index i = 0; i < tile; ++i) {
        const Index col = std::min(start + i, image.width - 1);
        v(i) = image.at(row, col) / 255.0;
      }
      tiles.push_back(std::move(v));
    }
  }
  return tiles;
}

GrayImage untile_rows(const std::vector<RealVector>& tiles, Index width, Index height, Index tile) {
  const Index per_row = (width + tile - 1) / tile;
  if (static_cast<Index>(tiles.size()) != per_row * height) throw DimensionError("untile: wrong tile count");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width * height));
  for (Index row = 0; row < height; ++row) {
    for (Index b = 0; b < per_row; ++b) {
      const RealVector& v = tiles[static_cast<size_t>(row * per_row + b)];
      if (v.size() != tile) throw DimensionError("untile: wrong tile length");
      for (Index i = 0; i < tile && b * tile + i < width; ++i) {
        const double value = std::clamp(v(i), 0.0, 1.0) * 255.0;
        img.pixels[static_cast<size_t>(row * width + b * tile + i)] = static_cast<std::uint8_t>(std::lround(value));
      }
    }
  }
  return img;
}

}  // namespace frametight
