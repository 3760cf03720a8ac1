#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/random.hpp"
#include "edgesched/visualprep/raster.hpp"

namespace edgesched::visual {

namespace detail {

// floor/ceil that treat values within 1e-9 of an integer as that integer,
// so k * side / 2 products like 1.5000000000000002 do not overshoot.
inline double snapped_floor(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? r : std::floor(x);
}
inline double snapped_ceil(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? r : std::ceil(x);
}

}  // namespace detail

// Context expansion: each side moves out by k * side_length / 2 (rounded
// outward to whole pixels), then the result is clipped to the image.
inline BBox expand_box(const BBox& b, double k, int image_width, int image_height) {
  if (!b.valid() || b.x_max > image_width || b.y_max > image_height) {
    throw ShapeError("expand_box: box outside image");
  }
  if (!(k >= 0) || !std::isfinite(k)) throw ShapeError("expand_box: k must be >= 0");
  const double gx = k * b.width() / 2.0;
  const double gy = k * b.height() / 2.0;
  BBox out;
  out.x_min = static_cast<int>(std::max(0.0, detail::snapped_floor(b.x_min - gx)));
  out.y_min = static_cast<int>(std::max(0.0, detail::snapped_floor(b.y_min - gy)));
  out.x_max = static_cast<int>(std::min<double>(image_width, detail::snapped_ceil(b.x_max + gx)));
  out.y_max = static_cast<int>(std::min<double>(image_height, detail::snapped_ceil(b.y_max + gy)));
  return out;
}

inline Raster crop(const Raster& image, const BBox& box) {
  if (!box.valid() || box.x_max > image.width() || box.y_max > image.height()) {
    throw ShapeError("crop: box (" + std::to_string(box.x_min) + "," + std::to_string(box.y_min) +
                     "," + std::to_string(box.x_max) + "," + std::to_string(box.y_max) +
                     ") not inside " + std::to_string(image.width()) + "x" +
                     std::to_string(image.height()) + " image");
  }
  Raster out(box.width(), box.height());
  const std::size_t row_bytes = static_cast<std::size_t>(box.width()) * 3;
  for (int y = 0; y < box.height(); ++y) {
    const auto src = (static_cast<std::size_t>(box.y_min + y) * image.width() + box.x_min) * 3;
    const auto dst = static_cast<std::size_t>(y) * row_bytes;
    std::copy_n(image.data().begin() + static_cast<std::ptrdiff_t>(src), row_bytes,
                out.data().begin() + static_cast<std::ptrdiff_t>(dst));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8-bit HSV. S and V are integers in [0,255]; H lives on the same 0..256
// circle but keeps its fraction, since rounding it to 256 steps alone moves
// saturated RGB values by up to 3 levels.

struct Hsv {
  double h = 0;        // [0,256)
  std::uint8_t s = 0;
  std::uint8_t v = 0;
};

inline std::uint8_t round_to_byte(double x) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(x + 0.5), 0.0, 255.0));
}

inline Hsv rgb_to_hsv(Rgb c) {
  const int r = c.r, g = c.g, b = c.b;
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  const int delta = mx - mn;
  Hsv out;
  out.v = static_cast<std::uint8_t>(mx);
  out.s = mx == 0 ? 0 : round_to_byte(255.0 * delta / mx);
  if (delta == 0) return out;
  double h6;
  if (mx == r) {
    h6 = static_cast<double>(g - b) / delta;
    if (h6 < 0) h6 += 6.0;
  } else if (mx == g) {
    h6 = 2.0 + static_cast<double>(b - r) / delta;
  } else {
    h6 = 4.0 + static_cast<double>(r - g) / delta;
  }
  out.h = h6 * 256.0 / 6.0;
  return out;
}

inline Rgb hsv_to_rgb(const Hsv& c) {
  const double v = c.v;
  const double lo = v - c.s * v / 255.0;
  double h6 = std::fmod(c.h, 256.0) * 6.0 / 256.0;
  if (h6 < 0) h6 += 6.0;
  const int sector = std::min(5, static_cast<int>(std::floor(h6)));
  const double f = h6 - sector;
  const double rise = lo + (v - lo) * f;
  const double fall = v - (v - lo) * f;
  double r = v, g = v, b = v;
  switch (sector) {
    case 0: r = v; g = rise; b = lo; break;
    case 1: r = fall; g = v; b = lo; break;
    case 2: r = lo; g = v; b = rise; break;
    case 3: r = lo; g = fall; b = v; break;
    case 4: r = rise; g = lo; b = v; break;
    default: r = v; g = lo; b = fall; break;
  }
  return {round_to_byte(r), round_to_byte(g), round_to_byte(b)};
}

// diag(1, alpha, beta) on HSV, projected back into [0,255].
inline Hsv scale_hsv(Hsv c, double alpha, double beta) {
  c.s = round_to_byte(alpha * c.s);
  c.v = round_to_byte(beta * c.v);
  return c;
}

inline Raster hsv_scale(const Raster& image, double alpha, double beta) {
  if (!(alpha > 0) || !(beta > 0)) throw ShapeError("hsv_scale: alpha and beta must be > 0");
  Raster out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.set(x, y, hsv_to_rgb(scale_hsv(rgb_to_hsv(image.at(x, y)), alpha, beta)));
    }
  }
  return out;
}

// Optional extras, off by default.
inline Raster hue_rotate(const Raster& image, double shift) {
  Raster out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      Hsv c = rgb_to_hsv(image.at(x, y));
      c.h = std::fmod(c.h + shift, 256.0);
      if (c.h < 0) c.h += 256.0;
      out.set(x, y, hsv_to_rgb(c));
    }
  }
  return out;
}

inline Raster adjust_contrast(const Raster& image, double factor) {
  Raster out = image;
  for (auto& px : out.data()) px = round_to_byte(128.0 + factor * (px - 128.0));
  return out;
}

struct AugRanges {
  double alpha_min = 0.7, alpha_max = 1.3;
  double beta_min = 0.7, beta_max = 1.3;
  bool hue_enabled = false;
  double hue_min = -8, hue_max = 8;
  bool contrast_enabled = false;
  double contrast_min = 0.8, contrast_max = 1.2;

  void validate() const {
    if (!(alpha_min > 0 && alpha_min <= alpha_max)) throw ShapeError("alpha range must be > 0");
    if (!(beta_min > 0 && beta_min <= beta_max)) throw ShapeError("beta range must be > 0");
    if (contrast_enabled && !(contrast_min <= contrast_max)) throw ShapeError("bad contrast range");
    if (hue_enabled && !(hue_min <= hue_max)) throw ShapeError("bad hue range");
  }
};

struct AugParams {
  double alpha = 1;
  double beta = 1;
  double hue_shift = 0;
  double contrast = 1;

  bool operator==(const AugParams&) const = default;
};

// alpha then beta are always drawn first, so enabling the extras does not
// change them for a given seed.
inline AugParams sample_aug(Rng& rng, const AugRanges& ranges) {
  ranges.validate();
  AugParams p;
  p.alpha = rng.uniform(ranges.alpha_min, ranges.alpha_max);
  p.beta = rng.uniform(ranges.beta_min, ranges.beta_max);
  if (ranges.hue_enabled) p.hue_shift = rng.uniform(ranges.hue_min, ranges.hue_max);
  if (ranges.contrast_enabled) p.contrast = rng.uniform(ranges.contrast_min, ranges.contrast_max);
  return p;
}

inline Raster augment(const Raster& image, const AugParams& p) {
  Raster out = hsv_scale(image, p.alpha, p.beta);
  if (p.hue_shift != 0) out = hue_rotate(out, p.hue_shift);
  if (p.contrast != 1) out = adjust_contrast(out, p.contrast);
  return out;
}

// Context-expanded crop of one detection, then photometric augmentation.
inline Raster prepare_region(const Raster& image, const BBox& box, double k, const AugParams& p) {
  return augment(crop(image, expand_box(box, k, image.width(), image.height())), p);
}

}  // namespace edgesched::visual
