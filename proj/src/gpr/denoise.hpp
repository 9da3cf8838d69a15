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

// Mask-based background-noise removal: keep only samples inside the
// hyperbola mask, zero the rest.

#include <cstddef>
#include <filesystem>
#include <vector>

#include "gpr/types.hpp"

namespace gpr::denoise {

inline constexpr double kDefaultPercentile = 95.0;
inline constexpr std::size_t kDefaultMinComponentCells = 20;

/// Threshold segmentation: cells with |a| at or above the `energy_percentile`
/// of all |a| in the B-scan, with 8-connected components smaller than
/// `min_component_cells` erased. An all-zero B-scan gives an all-zero mask.
SegmentationMask segment_baseline(const BScan& bscan,
                                  double energy_percentile = kDefaultPercentile,
                                  std::size_t min_component_cells = kDefaultMinComponentCells);

/// Zeroes every sample whose mask cell is 0. Poses and timing are kept.
BScan apply_mask(const BScan& bscan, const SegmentationMask& mask);

/// Reads a GPRM file; dimensions are checked later by apply_mask.
SegmentationMask load_external_mask(const std::filesystem::path& path);

/// Sum of squared amplitudes over all traces.
double energy(const BScan& bscan);

/// 8-connected components of the set cells, each as a list of flat indices
/// (q * n_samples + i) in ascending order. Components are ordered by their
/// smallest index.
std::vector<std::vector<std::size_t>> connected_components(const SegmentationMask& mask);

}  // namespace gpr::denoise
