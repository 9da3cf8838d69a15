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

// Ray-based forward model: every target returns a Ricker pulse at its
// two-way travel time, attenuated by 1/range^2, followed by one weak
// "through-object" echo. Stand-in for full-wave simulation.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gpr/types.hpp"

namespace gpr::synth {

struct TargetSpec {
  std::array<double, 3> position{0.0, 0.0, 0.1};  // x, y, depth (> 0)
  double radius = 0.0;                            // 0 = point scatterer
  double reflectivity = 1.0;                      // [-1, 1]
};

struct NoiseSpec {
  double gaussian_sigma = 2.0;
  double weak_echo_gain = 0.3;   // [0, 1)
  double echo_delay_ns = 1.5;    // > 0
};

struct SceneSpec {
  double dielectric = 6.0;
  std::array<double, 3> extent{0.5, 0.5, 0.3};
  std::vector<TargetSpec> targets;
  NoiseSpec noise;
  double wavelet_center_freq_ghz = 1.5;

  void validate() const;
  /// Same geometry with noise and weak echoes switched off.
  SceneSpec noise_free() const;
};

/// Single point target at (0.25, 0.25, 0.1) in dielectric 6 with default noise.
SceneSpec default_scene();

std::string scene_to_json(const SceneSpec& scene);
SceneSpec scene_from_json(const std::string& text);

/// Ricker wavelet, unit peak at t = 0.
double wavelet(double t_offset_ns, double center_freq_ghz);

/// Distance from an antenna at (x, y, 0) to the reflecting surface of `t`.
double reflector_range(const TargetSpec& t, const Pose& pose);

/// Two-way time of the primary echo of `t` seen from `pose`.
double echo_time(const SceneSpec& scene, const TargetSpec& t, const Pose& pose);

/// Primary echo amplitude (reflectivity / range^2, range floored at 1 mm).
double echo_gain(const TargetSpec& t, const Pose& pose);

struct Sampling {
  std::size_t n_samples = 2560;
  double dt_ns = 0.005;
  double t0_ns = 0.0;
};

AScan simulate_ascan(const SceneSpec& scene, const Pose& pose,
                     const Sampling& sampling, std::uint64_t seed);

/// One trace per pose. Each trace's noise seed depends on (seed, pose) only,
/// so visiting the same poses in another order permutes identical traces.
BScan simulate_bscan(const SceneSpec& scene, std::span<const Pose> trajectory,
                     const Sampling& sampling, std::uint64_t seed);

/// Seed used for the trace recorded at `pose`.
std::uint64_t trace_seed(std::uint64_t seed, const Pose& pose);

/// Marks samples within `half_width_ns` of some target's primary echo.
SegmentationMask ground_truth_mask(const SceneSpec& scene, const BScan& bscan,
                                   double half_width_ns);

/// Default mask half-width: 0.75 of a wavelet period.
double default_mask_half_width(const SceneSpec& scene);

struct DatasetConfig {
  std::size_t count = 628;
  std::size_t n_traces = 64;
  Sampling sampling{256, 0.04, 0.0};
  std::array<double, 2> dielectric_range{3.0, 9.0};
  std::array<double, 2> depth_range{0.04, 0.18};
  std::array<double, 2> radius_range{0.0, 0.02};
  std::array<double, 2> reflectivity_range{0.5, 1.0};
  std::array<std::size_t, 2> target_count_range{1, 2};
  std::array<double, 3> extent{0.5, 0.5, 0.3};
  NoiseSpec noise;
  double wavelet_center_freq_ghz = 1.5;
  double mask_half_width_ns = 0.0;  // <= 0 means default_mask_half_width

  void validate() const;
};

std::string dataset_config_to_json(const DatasetConfig& cfg);
/// Missing keys keep their defaults.
DatasetConfig dataset_config_from_json(const std::string& text);

/// Quantizes onto the 0.1-step label grid within [1.0, 12.0].
double quantize_dielectric(double value);

struct ManifestRow {
  std::string bscan;
  std::string mask;
  std::string scene;
  double dielectric;
};

/// Writes sample_NNNN.{gprb,gprm,json} and manifest.jsonl into `out_dir`.
/// File names in the manifest are relative to `out_dir`.
std::vector<ManifestRow> generate_dataset(const DatasetConfig& cfg,
                                          const std::filesystem::path& out_dir,
                                          std::uint64_t seed);

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

}  // namespace gpr::synth
