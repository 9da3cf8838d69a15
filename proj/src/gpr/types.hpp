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

// Shared domain values. Units everywhere: meters, nanoseconds, GHz.

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "gpr/error.hpp"

namespace gpr {

/// Speed of light in vacuum, m/ns.
inline constexpr double kSpeedOfLight = 0.299792458;

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians);

/// Antenna position on the ground plane. Heading is always normalized.
class Pose {
 public:
  Pose() = default;
  Pose(double x, double y, double theta);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double theta() const noexcept { return theta_; }

  friend bool operator==(const Pose&, const Pose&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

/// One reflection trace; sample i is recorded at t0 + i * dt.
class AScan {
 public:
  AScan(std::vector<float> samples, double dt_ns, double t0_ns, Pose pose);

  std::span<const float> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double dt() const noexcept { return dt_; }
  double t0() const noexcept { return t0_; }
  const Pose& pose() const noexcept { return pose_; }
  double time_at(std::size_t i) const noexcept {
    return t0_ + static_cast<double>(i) * dt_;
  }

  /// Copy with the same timing and pose but new amplitudes.
  AScan with_samples(std::vector<float> samples) const;

  friend bool operator==(const AScan&, const AScan&) = default;

 private:
  std::vector<float> samples_;
  double dt_;
  double t0_;
  Pose pose_;
};

/// Ordered traces sharing sample count and timing.
class BScan {
 public:
  explicit BScan(std::vector<AScan> traces);

  std::span<const AScan> traces() const noexcept { return traces_; }
  const AScan& trace(std::size_t q) const { return traces_.at(q); }
  std::size_t n_traces() const noexcept { return traces_.size(); }
  std::size_t n_samples() const noexcept { return traces_.front().size(); }
  double dt() const noexcept { return traces_.front().dt(); }
  double t0() const noexcept { return traces_.front().t0(); }

  friend bool operator==(const BScan&, const BScan&) = default;

 private:
  std::vector<AScan> traces_;
};

/// n_traces x n_samples cells, 1 = target response.
class SegmentationMask {
 public:
  SegmentationMask(std::size_t n_traces, std::size_t n_samples);
  SegmentationMask(std::size_t n_traces, std::size_t n_samples,
                   std::vector<std::uint8_t> cells);

  std::size_t n_traces() const noexcept { return n_traces_; }
  std::size_t n_samples() const noexcept { return n_samples_; }
  std::span<const std::uint8_t> cells() const noexcept { return cells_; }

  std::uint8_t at(std::size_t q, std::size_t i) const {
    return cells_[q * n_samples_ + i];
  }
  void set(std::size_t q, std::size_t i, bool on) {
    cells_[q * n_samples_ + i] = on ? 1 : 0;
  }
  std::size_t count() const noexcept;
  bool matches(const BScan& b) const noexcept {
    return b.n_traces() == n_traces_ && b.n_samples() == n_samples_;
  }

  friend bool operator==(const SegmentationMask&,
                         const SegmentationMask&) = default;

 private:
  std::size_t n_traces_;
  std::size_t n_samples_;
  std::vector<std::uint8_t> cells_;
};

/// Regular voxel lattice; voxel (i, j, k) sits at origin + (i, j, k) * spacing.
/// The third axis is depth below the surface, positive down.
struct GridSpec {
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<double, 3> spacing{0.005, 0.005, 0.005};
  std::array<std::size_t, 3> dims{1, 1, 1};

  void validate() const;
  std::size_t voxel_count() const noexcept {
    return dims[0] * dims[1] * dims[2];
  }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return i + dims[0] * (j + dims[1] * k);
  }
  std::array<std::size_t, 3> unravel(std::size_t flat) const noexcept {
    return {flat % dims[0], (flat / dims[0]) % dims[1],
            flat / (dims[0] * dims[1])};
  }
  std::array<double, 3> position(std::size_t i, std::size_t j,
                                 std::size_t k) const noexcept {
    return {origin[0] + static_cast<double>(i) * spacing[0],
            origin[1] + static_cast<double>(j) * spacing[1],
            origin[2] + static_cast<double>(k) * spacing[2]};
  }
  double max_spacing() const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Scalar energy field, x-fastest storage.
class VoxelGrid {
 public:
  explicit VoxelGrid(GridSpec spec);
  VoxelGrid(GridSpec spec, std::vector<float> values);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const float> values() const noexcept { return values_; }
  std::span<float> values() noexcept { return values_; }
  float at(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[spec_.index(i, j, k)];
  }
  /// Flat index of the largest value; ties go to the lowest index.
  std::size_t argmax() const noexcept;

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

 private:
  GridSpec spec_;
  std::vector<float> values_;
};

enum class EstimateSource { HyperbolaFit, Learned, UserSupplied };

std::string_view to_string(EstimateSource s) noexcept;
EstimateSource estimate_source_from_string(std::string_view s);

struct DielectricEstimate {
  double value = 1.0;       // relative permittivity, >= 1
  double confidence = 0.0;  // [0, 1]
  EstimateSource source = EstimateSource::UserSupplied;
};

}  // namespace gpr
