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

#pragma once

#include <compare>
#include <span>

namespace textground {

/// Axis-aligned box in pixel space, corners (x_min, y_min) and (x_max, y_max).
/// Construction rejects degenerate, negative or non-finite boxes.
class PixelBox {
 public:
  PixelBox(double x_min, double y_min, double x_max, double y_max);

  double x_min() const noexcept { return x_min_; }
  double y_min() const noexcept { return y_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_max() const noexcept { return y_max_; }

  friend bool operator==(const PixelBox&, const PixelBox&) = default;

 private:
  double x_min_, y_min_, x_max_, y_max_;
};

/// Box on the fixed integer grid [0, 512] used by training targets and layout metrics.
class NormBox {
 public:
  static constexpr int kGrid = 512;

  NormBox(int x_min, int y_min, int x_max, int y_max);

  int x_min() const noexcept { return x_min_; }
  int y_min() const noexcept { return y_min_; }
  int x_max() const noexcept { return x_max_; }
  int y_max() const noexcept { return y_max_; }

  friend bool operator==(const NormBox&, const NormBox&) = default;

 private:
  int x_min_, y_min_, x_max_, y_max_;
};

double box_area(const PixelBox& b) noexcept;
double box_area(const NormBox& b) noexcept;

/// Minimal box covering every input. Throws UsageError on an empty list.
PixelBox box_union(std::span<const PixelBox> boxes);
NormBox box_union(std::span<const NormBox> boxes);

/// Intersection over union; 0 for disjoint interiors. Pixel and normalized
/// boxes live in different coordinate spaces and cannot be mixed.
double box_iou(const PixelBox& a, const PixelBox& b) noexcept;
double box_iou(const NormBox& a, const NormBox& b) noexcept;

}  // namespace textground
