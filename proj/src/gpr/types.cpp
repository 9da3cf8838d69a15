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
#include "gpr/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gpr {

double normalize_angle(double radians) {
  require(std::isfinite(radians), "pose heading must be finite");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = radians - kTwoPi * std::floor((radians + std::numbers::pi) / kTwoPi);
  // floor() can land exactly on +pi after rounding.
  if (r >= std::numbers::pi) r -= kTwoPi;
  if (r < -std::numbers::pi) r = -std::numbers::pi;
  return r;
}

Pose::Pose(double x, double y, double theta)
    : x_(x), y_(y), theta_(normalize_angle(theta)) {
  require(std::isfinite(x) && std::isfinite(y), "pose position must be finite");
}

AScan::AScan(std::vector<float> samples, double dt_ns, double t0_ns, Pose pose)
    : samples_(std::move(samples)), dt_(dt_ns), t0_(t0_ns), pose_(pose) {
  require(samples_.size() >= 2, "A-scan needs at least 2 samples");
  require(std::isfinite(dt_) && dt_ > 0.0, "A-scan dt must be finite and > 0");
  require(std::isfinite(t0_) && t0_ >= 0.0, "A-scan t0 must be finite and >= 0");
  for (float a : samples_) {
    require(std::isfinite(a), "A-scan amplitudes must be finite");
  }
}

AScan AScan::with_samples(std::vector<float> samples) const {
  require(samples.size() == samples_.size(), "replacement sample count differs");
  return AScan(std::move(samples), dt_, t0_, pose_);
}

BScan::BScan(std::vector<AScan> traces) : traces_(std::move(traces)) {
  require(traces_.size() >= 2, "B-scan needs at least 2 traces");
  const AScan& first = traces_.front();
  for (const AScan& a : traces_) {
    require(a.size() == first.size(), "B-scan traces differ in sample count");
    require(a.dt() == first.dt() && a.t0() == first.t0(),
            "B-scan traces differ in timing");
  }
}

SegmentationMask::SegmentationMask(std::size_t n_traces, std::size_t n_samples)
    : n_traces_(n_traces), n_samples_(n_samples), cells_(n_traces * n_samples, 0) {}

SegmentationMask::SegmentationMask(std::size_t n_traces, std::size_t n_samples,
                                   std::vector<std::uint8_t> cells)
    : n_traces_(n_traces), n_samples_(n_samples), cells_(std::move(cells)) {
  require(cells_.size() == n_traces_ * n_samples_, "mask cell count mismatch");
  for (std::uint8_t c : cells_) require(c <= 1, "mask cells must be 0 or 1");
}

std::size_t SegmentationMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

void GridSpec::validate() const {
  for (int a = 0; a < 3; ++a) {
    require(std::isfinite(origin[a]), "grid origin must be finite");
    require(std::isfinite(spacing[a]) && spacing[a] > 0.0,
            "grid spacing must be > 0");
    require(dims[a] >= 1, "grid dims must be >= 1");
  }
}

double GridSpec::max_spacing() const noexcept {
  return std::max({spacing[0], spacing[1], spacing[2]});
}

VoxelGrid::VoxelGrid(GridSpec spec) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.voxel_count(), 0.0f);
}

VoxelGrid::VoxelGrid(GridSpec spec, std::vector<float> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  require(values_.size() == spec_.voxel_count(),
          "voxel value count does not match grid dims");
}

std::size_t VoxelGrid::argmax() const noexcept {
  return static_cast<std::size_t>(
      std::max_element(values_.begin(), values_.end()) - values_.begin());
}

std::string_view to_string(EstimateSource s) noexcept {
  switch (s) {
    case EstimateSource::HyperbolaFit: return "hyperbola-fit";
    case EstimateSource::Learned: return "learned";
    case EstimateSource::UserSupplied: return "user-supplied";
  }
  return "user-supplied";
}

EstimateSource estimate_source_from_string(std::string_view s) {
  if (s == "hyperbola-fit") return EstimateSource::HyperbolaFit;
  if (s == "learned") return EstimateSource::Learned;
  if (s == "user-supplied") return EstimateSource::UserSupplied;
  fail(ErrorKind::InvalidArgument, "unknown estimate source: " + std::string(s));
}

}  // namespace gpr
