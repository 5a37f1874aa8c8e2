// Copyright 2026 The TextGround Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textground/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "textground/error.hpp"

namespace textground {
namespace {

std::string describe(double a, double b, double c, double d) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ", " +
         std::to_string(d) + ")";
}

template <typename Box>
Box union_of(std::span<const Box> boxes) {
  if (boxes.empty()) throw UsageError("box_union: empty box list");
  auto x0 = boxes.front().x_min(), y0 = boxes.front().y_min();
  auto x1 = boxes.front().x_max(), y1 = boxes.front().y_max();
  for (const auto& b : boxes.subspan(1)) {
    x0 = std::min(x0, b.x_min());
    y0 = std::min(y0, b.y_min());
    x1 = std::max(x1, b.x_max());
    y1 = std::max(y1, b.y_max());
  }
  return Box(x0, y0, x1, y1);
}

template <typename Box>
double iou_of(const Box& a, const Box& b) noexcept {
  const double iw = std::min<double>(a.x_max(), b.x_max()) - std::max<double>(a.x_min(), b.x_min());
  const double ih = std::min<double>(a.y_max(), b.y_max()) - std::max<double>(a.y_min(), b.y_min());
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (box_area(a) + box_area(b) - inter);
}

}  // namespace

PixelBox::PixelBox(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  const bool finite = std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
                      std::isfinite(y_max);
  if (!finite || x_min < 0 || y_min < 0 || !(x_min < x_max) || !(y_min < y_max)) {
    throw DataError("invalid pixel box " + describe(x_min, y_min, x_max, y_max));
  }
}

NormBox::NormBox(int x_min, int y_min, int x_max, int y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  const auto in_grid = [](int v) { return v >= 0 && v <= kGrid; };
  if (!in_grid(x_min) || !in_grid(y_min) || !in_grid(x_max) || !in_grid(y_max) || x_min >= x_max ||
      y_min >= y_max) {
    throw DataError("invalid normalized box " + describe(x_min, y_min, x_max, y_max));
  }
}

double box_area(const PixelBox& b) noexcept {
  return (b.x_max() - b.x_min()) * (b.y_max() - b.y_min());
}

double box_area(const NormBox& b) noexcept {
  return static_cast<double>(b.x_max() - b.x_min()) * static_cast<double>(b.y_max() - b.y_min());
}

PixelBox box_union(std::span<const PixelBox> boxes) { return union_of(boxes); }
NormBox box_union(std::span<const NormBox> boxes) { return union_of(boxes); }

double box_iou(const PixelBox& a, const PixelBox& b) noexcept { return iou_of(a, b); }
double box_iou(const NormBox& a, const NormBox& b) noexcept { return iou_of(a, b); }

}  // namespace textground
