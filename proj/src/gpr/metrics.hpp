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
#pragma once

// Image comparison metrics for migrated grids and B-scans.

#include <cstddef>
#include <span>
#include <vector>

#include "gpr/types.hpp"

namespace gpr::metrics {

/// Extent per axis, fastest-varying first. Rank 1 to 3.
using Shape = std::vector<std::size_t>;

inline constexpr std::size_t kSsimWindow = 8;

struct ImageMetrics {
  double e_distance;
  double mse;
  double snr_db;  // +inf when test == reference
  double ssim;
};

double mse(std::span<const float> a, std::span<const float> b);

/// L2 norm of a - b.
double e_distance(std::span<const float> a, std::span<const float> b);

/// 10 log10(sum ref^2 / sum (test - ref)^2).
double snr(std::span<const float> reference, std::span<const float> test);

/// Mean SSIM over non-overlapping window^rank blocks; trailing partial blocks
/// are ignored. C1 = (0.01 L)^2, C2 = (0.03 L)^2 with L the dynamic range of
/// both fields together, which keeps the index symmetric in its arguments.
double ssim(std::span<const float> a, std::span<const float> b, const Shape& shape,
            std::size_t window = kSsimWindow);

ImageMetrics evaluate(std::span<const float> reference, std::span<const float> test,
                      const Shape& shape);

ImageMetrics evaluate(const VoxelGrid& reference, const VoxelGrid& test);

/// B-scans as n_samples x n_traces images.
ImageMetrics evaluate(const BScan& reference, const BScan& test);

/// Samples of every trace, concatenated in trace order.
std::vector<float> flatten(const BScan& bscan);

}  // namespace gpr::metrics
