/*
 * Copyright 2026 The gprmap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "gpr/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace gpr::metrics {
namespace {

void check_same_size(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::Domain, "shape mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + " values");
  }
  require(!a.empty(), "metrics need at least one value");
}

double sum_sq_diff(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

}  // namespace

double mse(std::span<const float> a, std::span<const float> b) {
  check_same_size(a, b);
  return sum_sq_diff(a, b) / static_cast<double>(a.size());
}

double e_distance(std::span<const float> a, std::span<const float> b) {
  check_same_size(a, b);
  return std::sqrt(sum_sq_diff(a, b));
}

double snr(std::span<const float> reference, std::span<const float> test) {
  check_same_size(reference, test);
  double signal = 0.0;
  for (float v : reference) signal += static_cast<double>(v) * static_cast<double>(v);
  require(signal > 0.0, "SNR undefined for an all-zero reference", ErrorKind::Domain);
  const double noise = sum_sq_diff(reference, test);
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

double ssim(std::span<const float> a, std::span<const float> b, const Shape& shape,
            std::size_t window) {
  check_same_size(a, b);
  require(!shape.empty() && shape.size() <= 3, "SSIM supports rank 1 to 3");
  require(window >= 1, "SSIM window must be >= 1");
  std::size_t total = 1;
  for (std::size_t n : shape) {
    require(n >= window, "every axis must be at least the SSIM window");
    total *= n;
  }
  if (total != a.size()) fail(ErrorKind::Domain, "shape does not match value count");

  const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  const double L = static_cast<double>(std::max(*amax, *bmax)) -
                   static_cast<double>(std::min(*amin, *bmin));
  if (L == 0.0) return 1.0;  // identical constant fields
  const double c1 = (0.01 * L) * (0.01 * L);
  const double c2 = (0.03 * L) * (0.03 * L);

  std::array<std::size_t, 3> n{1, 1, 1};
  std::array<std::size_t, 3> w{1, 1, 1};
  for (std::size_t d = 0; d < shape.size(); ++d) {
    n[d] = shape[d];
    w[d] = window;
  }
  const std::array<std::size_t, 3> blocks{n[0] / w[0], n[1] / w[1], n[2] / w[2]};
  const double cells = static_cast<double>(w[0] * w[1] * w[2]);

  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t bz = 0; bz < blocks[2]; ++bz) {
    for (std::size_t by = 0; by < blocks[1]; ++by) {
      for (std::size_t bx = 0; bx < blocks[0]; ++bx) {
        double sa = 0, sb = 0;
        for (std::size_t z = bz * w[2]; z < (bz + 1) * w[2]; ++z) {
          for (std::size_t y = by * w[1]; y < (by + 1) * w[1]; ++y) {
            for (std::size_t x = bx * w[0]; x < (bx + 1) * w[0]; ++x) {
              const std::size_t idx = x + n[0] * (y + n[1] * z);
              sa += a[idx];
              sb += b[idx];
            }
          }
        }
        const double ma = sa / cells;
        const double mb = sb / cells;
        double vaa = 0, vbb = 0, vab = 0;
        for (std::size_t z = bz * w[2]; z < (bz + 1) * w[2]; ++z) {
          for (std::size_t y = by * w[1]; y < (by + 1) * w[1]; ++y) {
            for (std::size_t x = bx * w[0]; x < (bx + 1) * w[0]; ++x) {
              const std::size_t idx = x + n[0] * (y + n[1] * z);
              const double da = a[idx] - ma;
              const double db = b[idx] - mb;
              vaa += da * da;
              vbb += db * db;
              vab += da * db;
            }
          }
        }
        vaa /= cells;
        vbb /= cells;
        vab /= cells;
        acc += ((2.0 * ma * mb + c1) * (2.0 * vab + c2)) /
               ((ma * ma + mb * mb + c1) * (vaa + vbb + c2));
        ++count;
      }
    }
  }
  return acc / static_cast<double>(count);
}

ImageMetrics evaluate(std::span<const float> reference, std::span<const float> test,
                      const Shape& shape) {
  return {e_distance(reference, test), mse(reference, test), snr(reference, test),
          ssim(reference, test, shape)};
}

ImageMetrics evaluate(const VoxelGrid& reference, const VoxelGrid& test) {
  if (reference.spec().dims != test.spec().dims) {
    fail(ErrorKind::Domain, "grid dims differ");
  }
  const auto& d = reference.spec().dims;
  return evaluate(reference.values(), test.values(), Shape{d[0], d[1], d[2]});
}

std::vector<float> flatten(const BScan& bscan) {
  std::vector<float> out;
  out.reserve(bscan.n_traces() * bscan.n_samples());
  for (const AScan& a : bscan.traces()) out.insert(out.end(), a.samples().begin(), a.samples().end());
  return out;
}

ImageMetrics evaluate(const BScan& reference, const BScan& test) {
  if (reference.n_traces() != test.n_traces() || reference.n_samples() != test.n_samples()) {
    fail(ErrorKind::Domain, "B-scan dims differ");
  }
  const auto a = flatten(reference);
  const auto b = flatten(test);
  return evaluate(a, b, Shape{reference.n_samples(), reference.n_traces()});
}

}  // namespace gpr::metrics
