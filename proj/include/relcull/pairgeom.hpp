#pragma once

#include <array>
#include <cmath>

#include "relcull/error.hpp"

namespace relcull {

/// Axis-aligned box in pixel coordinates, top-left corner convention.
struct BBox {
  double x = 0.0;  // left
  double y = 0.0;  // top
  double w = 0.0;
  double h = 0.0;

  bool operator==(const BBox&) const = default;
};

/// Box normalized by the image extent: x and w divided by image width,
/// y and h by image height. Valid boxes have 0 <= x,y <= 1 and 0 < w,h <= 1.
struct NormBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }

  bool operator==(const NormBox&) const = default;
};

/// The 12-component joint position embedding of a (subject, object) box pair:
///
///   [ o_x, o_y, w_o, w_s, h_o, h_s,
///     dx/w_s, dy/h_s, (dx/w_s)^2, (dy/h_s)^2,
///     log(w_o/w_s), log(h_o/h_s) ]
///
/// where o_x, o_y are top-left corner offsets (subject minus object) and
/// dx, dy are center offsets (subject center minus object center). Horizontal
/// center offsets are scaled by the subject width, vertical ones by the
/// subject height; logs are natural.
using PairGeometry = std::array<double, 12>;

inline NormBox normalize_box(const BBox& box, double image_width,
                             double image_height) {
  if (image_width <= 0.0 || image_height <= 0.0) {
    throw DataError("normalize_box: image dimensions must be positive");
  }
  if (box.w <= 0.0 || box.h <= 0.0) {
    throw DataError("normalize_box: box has non-positive width or height");
  }
  NormBox n{box.x / image_width, box.y / image_height, box.w / image_width,
            box.h / image_height};
  if (n.x < 0.0 || n.y < 0.0 || n.x + n.w > 1.0 + 1e-9 ||
      n.y + n.h > 1.0 + 1e-9) {
    throw DataError("normalize_box: box extends outside the image");
  }
  return n;
}

inline PairGeometry pair_embedding(const NormBox& subject,
                                   const NormBox& object) {
  if (subject.w <= 0.0 || subject.h <= 0.0 || object.w <= 0.0 ||
      object.h <= 0.0) {
    throw DataError("pair_embedding: boxes must have positive extent");
  }
  const double ox = subject.x - object.x;
  const double oy = subject.y - object.y;
  const double dx = subject.cx() - object.cx();
  const double dy = subject.cy() - object.cy();
  const double rx = dx / subject.w;
  const double ry = dy / subject.h;
  return PairGeometry{ox,
                      oy,
                      object.w,
                      subject.w,
                      object.h,
                      subject.h,
                      rx,
                      ry,
                      rx * rx,
                      ry * ry,
                      std::log(object.w / subject.w),
                      std::log(object.h / subject.h)};
}

}  // namespace relcull
