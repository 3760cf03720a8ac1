#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "edgesched/core/errors.hpp"

namespace edgesched::visual {

// Half-open pixel box [x_min, x_max) x [y_min, y_max).
struct BBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  bool valid() const { return x_min >= 0 && y_min >= 0 && x_min < x_max && y_min < y_max; }

  bool contains(const BBox& o) const {
    return x_min <= o.x_min && y_min <= o.y_min && x_max >= o.x_max && y_max >= o.y_max;
  }

  bool operator==(const BBox&) const = default;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// 8-bit RGB, row-major, interleaved.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, 0) {
    if (width <= 0 || height <= 0) throw ShapeError("raster dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  static constexpr int channels() { return 3; }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  Rgb at(int x, int y) const {
    const std::size_t i = offset(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }

  void set(int x, int y, Rgb c) {
    const std::size_t i = offset(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }

  BBox bounds() const { return {0, 0, width_, height_}; }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// ---------------------------------------------------------------------------
// Binary PPM (P6, maxval 255).

inline std::string encode_ppm(const Raster& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data().data()), img.data().size());
  return out;
}

inline Raster decode_ppm(const std::string& bytes) {
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space_and_comments();
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw ShapeError("ppm: malformed header");
    return std::stoi(bytes.substr(start, pos - start));
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw ShapeError("ppm: not P6");
  pos = 2;
  const int w = read_int();
  const int h = read_int();
  const int maxval = read_int();
  if (maxval != 255) throw ShapeError("ppm: only maxval 255 is supported");
  ++pos;  // single whitespace before the raster
  Raster img(w, h);
  if (bytes.size() - pos < img.data().size()) throw ShapeError("ppm: truncated pixel data");
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), img.data().size(),
              img.data().begin());
  return img;
}

inline void write_ppm(const std::string& path, const Raster& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  const auto bytes = encode_ppm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path, "write failed");
}

inline Raster read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_ppm(ss.str());
}

}  // namespace edgesched::visual
