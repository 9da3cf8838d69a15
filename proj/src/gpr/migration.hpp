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

// Back-projection migration of pose-tagged A-scans into a voxel grid.
//
// Each sample recorded at time t spreads its magnitude over a semi-spherical
// shell of radius v*t/2 centred on the antenna at (x, y, 0), restricted to
// the lower half-space and to a cone of half-angle `aperture` around the
// downward vertical. Shells are one voxel thick (half-thickness h equals half
// the largest grid spacing) with a linear falloff 1 - |r - r_shell| / h.
// Targets show up where many shells intersect.

#include <array>
#include <numbers>
#include <span>
#include <vector>

#include "gpr/types.hpp"

namespace gpr::migration {

/// Propagation speed in a medium of relative permittivity `dielectric`, m/ns.
double wave_velocity(double dielectric);

/// Reflector depth for a two-way travel time, m.
double target_depth(double two_way_time_ns, double dielectric);

struct BackprojectOptions {
  double aperture_rad = std::numbers::pi / 3.0;
  /// Samples at or below this fraction of the trace's peak magnitude are skipped.
  double amplitude_floor = 0.01;
  /// Deposit signed amplitude; the finalized grid then holds |sum|.
  bool signed_accumulation = false;
};

struct MigrateOptions {
  BackprojectOptions backproject;
  /// Worker threads over depth planes; 0 picks hardware concurrency.
  unsigned threads = 1;
};

/// Adds one trace's shells to `grid`.
void backproject_ascan(const AScan& ascan, VoxelGrid& grid, double velocity,
                       const BackprojectOptions& opts = {});

/// Double-precision accumulation into raw storage laid out per `spec`.
void backproject_ascan(const AScan& ascan, const GridSpec& spec,
                       std::span<double> accumulator, double velocity,
                       const BackprojectOptions& opts = {});

/// Sum of backproject_ascan over every trace of every B-scan. Traces are
/// visited in a canonical order and each voxel is owned by one worker, so the
/// result is bit-identical however the input is split, ordered or scheduled.
VoxelGrid migrate(std::span<const BScan> bscans, double dielectric,
                  const GridSpec& spec, const MigrateOptions& opts = {});

struct Peak {
  std::array<double, 3> position;
  std::array<std::size_t, 3> index;
  double energy;
};

/// Local maxima (26-neighbourhood) at or above threshold_fraction * max,
/// accepted greedily in descending energy, suppressing anything within
/// min_separation of an accepted peak. Equal energies go to the
/// lexicographically smaller (i, j, k).
std::vector<Peak> locate_peaks(const VoxelGrid& grid, double threshold_fraction,
                               double min_separation);

}  // namespace gpr::migration
