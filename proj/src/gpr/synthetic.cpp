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
#include "gpr/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "gpr/io.hpp"
#include "gpr/migration.hpp"

namespace gpr::synth {
namespace {

using nlohmann::json;

constexpr double kMinRange = 1e-3;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

template <class T, std::size_t N>
std::array<T, N> array_from(const json& j, const char* key) {
  const auto v = j.at(key).get<std::vector<T>>();
  require(v.size() == N, std::string("'") + key + "' must have " +
                             std::to_string(N) + " entries");
  std::array<T, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

json noise_to_json(const NoiseSpec& n) {
  return {{"gaussian_sigma", n.gaussian_sigma},
          {"weak_echo_gain", n.weak_echo_gain},
          {"echo_delay_ns", n.echo_delay_ns}};
}

NoiseSpec noise_from_json(const json& j, NoiseSpec n) {
  n.gaussian_sigma = j.value("gaussian_sigma", n.gaussian_sigma);
  n.weak_echo_gain = j.value("weak_echo_gain", n.weak_echo_gain);
  n.echo_delay_ns = j.value("echo_delay_ns", n.echo_delay_ns);
  return n;
}

void validate_noise(const NoiseSpec& n) {
  require(std::isfinite(n.gaussian_sigma) && n.gaussian_sigma >= 0.0,
          "noise gaussian_sigma must be >= 0");
  require(n.weak_echo_gain >= 0.0 && n.weak_echo_gain < 1.0,
          "noise weak_echo_gain must be in [0, 1)");
  require(std::isfinite(n.echo_delay_ns) && n.echo_delay_ns > 0.0,
          "noise echo_delay_ns must be > 0");
}

template <class T>
T parse_json(const std::string& text, T (*build)(const json&)) {
  try {
    return build(json::parse(text));
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

void SceneSpec::validate() const {
  require(std::isfinite(dielectric) && dielectric >= 1.0, "scene dielectric must be >= 1");
  for (double e : extent) require(std::isfinite(e) && e > 0.0, "scene extent must be > 0");
  require(std::isfinite(wavelet_center_freq_ghz) && wavelet_center_freq_ghz > 0.0,
          "wavelet center frequency must be > 0");
  validate_noise(noise);
  for (const TargetSpec& t : targets) {
    require(std::isfinite(t.position[0]) && std::isfinite(t.position[1]),
            "target position must be finite");
    require(std::isfinite(t.position[2]) && t.position[2] > 0.0, "target depth must be > 0");
    require(std::isfinite(t.radius) && t.radius >= 0.0, "target radius must be >= 0");
    require(std::abs(t.reflectivity) <= 1.0, "target reflectivity must be in [-1, 1]");
  }
}

SceneSpec SceneSpec::noise_free() const {
  SceneSpec s = *this;
  s.noise.gaussian_sigma = 0.0;
  s.noise.weak_echo_gain = 0.0;
  return s;
}

SceneSpec default_scene() {
  SceneSpec s;
  s.targets.push_back(TargetSpec{{0.25, 0.25, 0.1}, 0.0, 1.0});
  return s;
}

std::string scene_to_json(const SceneSpec& scene) {
  json targets = json::array();
  for (const TargetSpec& t : scene.targets) {
    targets.push_back({{"position", t.position},
                       {"radius", t.radius},
                       {"reflectivity", t.reflectivity}});
  }
  json j = {{"dielectric", scene.dielectric},
            {"extent", scene.extent},
            {"targets", targets},
            {"noise", noise_to_json(scene.noise)},
            {"wavelet_center_freq_ghz", scene.wavelet_center_freq_ghz}};
  return j.dump(2) + "\n";
}

SceneSpec scene_from_json(const std::string& text) {
  return parse_json<SceneSpec>(text, [](const json& j) {
    SceneSpec s;
    s.dielectric = j.at("dielectric").get<double>();
    if (j.contains("extent")) s.extent = array_from<double, 3>(j, "extent");
    if (j.contains("targets")) {
      for (const json& t : j.at("targets")) {
        TargetSpec ts;
        ts.position = array_from<double, 3>(t, "position");
        ts.radius = t.value("radius", 0.0);
        ts.reflectivity = t.value("reflectivity", 1.0);
        s.targets.push_back(ts);
      }
    }
    if (j.contains("noise")) s.noise = noise_from_json(j.at("noise"), s.noise);
    s.wavelet_center_freq_ghz = j.value("wavelet_center_freq_ghz", s.wavelet_center_freq_ghz);
    s.validate();
    return s;
  });
}

double wavelet(double t_offset_ns, double center_freq_ghz) {
  const double a = std::numbers::pi * center_freq_ghz * t_offset_ns;
  const double a2 = a * a;
  return (1.0 - 2.0 * a2) * std::exp(-a2);
}

double reflector_range(const TargetSpec& t, const Pose& pose) {
  const double dx = t.position[0] - pose.x();
  const double dy = t.position[1] - pose.y();
  const double dz = t.position[2];
  return std::max(std::sqrt(dx * dx + dy * dy + dz * dz) - t.radius, kMinRange);
}

double echo_time(const SceneSpec& scene, const TargetSpec& t, const Pose& pose) {
  return 2.0 * reflector_range(t, pose) / migration::wave_velocity(scene.dielectric);
}

double echo_gain(const TargetSpec& t, const Pose& pose) {
  const double r = reflector_range(t, pose);
  return t.reflectivity / (r * r);
}

std::uint64_t trace_seed(std::uint64_t seed, const Pose& pose) {
  std::uint64_t h = splitmix64(seed);
  h = mix(h, std::bit_cast<std::uint64_t>(pose.x()));
  h = mix(h, std::bit_cast<std::uint64_t>(pose.y()));
  h = mix(h, std::bit_cast<std::uint64_t>(pose.theta()));
  return h;
}

AScan simulate_ascan(const SceneSpec& scene, const Pose& pose, const Sampling& sampling,
                     std::uint64_t seed) {
  scene.validate();
  require(sampling.n_samples >= 2, "need at least 2 samples per trace");
  require(std::isfinite(sampling.dt_ns) && sampling.dt_ns > 0.0, "dt must be > 0");
  require(std::isfinite(sampling.t0_ns) && sampling.t0_ns >= 0.0, "t0 must be >= 0");

  const double f = scene.wavelet_center_freq_ghz;
  const double t_end =
      sampling.t0_ns + static_cast<double>(sampling.n_samples - 1) * sampling.dt_ns;
  // A Ricker pulse is negligible (< 1e-3 of peak) one period past its center.
  const double tail = 1.0 / f;

  std::vector<double> trace(sampling.n_samples, 0.0);
  for (const TargetSpec& t : scene.targets) {
    const double tc = echo_time(scene, t, pose);
    if (tc + tail > t_end) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "time window too short: echo at %.4f ns needs window to %.4f ns, "
                    "have %.4f ns",
                    tc, tc + tail, t_end);
      fail(ErrorKind::Domain, buf);
    }
    const double gain = echo_gain(t, pose);
    const double weak = gain * scene.noise.weak_echo_gain;
    const double t_weak = tc + scene.noise.echo_delay_ns;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const double ti = sampling.t0_ns + static_cast<double>(i) * sampling.dt_ns;
      trace[i] += gain * wavelet(ti - tc, f);
      if (weak != 0.0) trace[i] += weak * wavelet(ti - t_weak, f);
    }
  }

  if (scene.noise.gaussian_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, scene.noise.gaussian_sigma);
    for (double& v : trace) v += noise(rng);
  }

  std::vector<float> samples(trace.begin(), trace.end());
  return AScan(std::move(samples), sampling.dt_ns, sampling.t0_ns, pose);
}

BScan simulate_bscan(const SceneSpec& scene, std::span<const Pose> trajectory,
                     const Sampling& sampling, std::uint64_t seed) {
  require(trajectory.size() >= 2, "trajectory needs at least 2 poses", ErrorKind::Domain);
  std::vector<AScan> traces;
  traces.reserve(trajectory.size());
  for (const Pose& p : trajectory) {
    traces.push_back(simulate_ascan(scene, p, sampling, trace_seed(seed, p)));
  }
  return BScan(std::move(traces));
}

double default_mask_half_width(const SceneSpec& scene) {
  return 0.75 / scene.wavelet_center_freq_ghz;
}

SegmentationMask ground_truth_mask(const SceneSpec& scene, const BScan& bscan,
                                   double half_width_ns) {
  require(std::isfinite(half_width_ns) && half_width_ns >= 0.0,
          "mask half-width must be >= 0");
  SegmentationMask mask(bscan.n_traces(), bscan.n_samples());
  const double dt = bscan.dt();
  const double t0 = bscan.t0();
  const auto n = static_cast<double>(bscan.n_samples());
  for (std::size_t q = 0; q < bscan.n_traces(); ++q) {
    const Pose& pose = bscan.trace(q).pose();
    for (const TargetSpec& t : scene.targets) {
      const double tc = echo_time(scene, t, pose);
      const double lo = std::max(0.0, std::ceil((tc - half_width_ns - t0) / dt));
      const double hi = std::min(n - 1.0, std::floor((tc + half_width_ns - t0) / dt));
      for (double i = lo; i <= hi; i += 1.0) {
        const auto idx = static_cast<std::size_t>(i);
        // Re-check against the exact sample time; the index bounds can be off
        // by one ulp-induced step.
        if (std::abs(bscan.trace(q).time_at(idx) - tc) <= half_width_ns) {
          mask.set(q, idx, true);
        }
      }
    }
  }
  return mask;
}

void DatasetConfig::validate() const {
  require(n_traces >= 2, "dataset needs at least 2 traces per B-scan");
  require(sampling.n_samples >= 2 && sampling.dt_ns > 0.0 && sampling.t0_ns >= 0.0,
          "dataset sampling is invalid");
  require(dielectric_range[0] >= 1.0 && dielectric_range[0] <= dielectric_range[1] &&
              dielectric_range[1] <= 12.0,
          "dielectric_range must lie within [1, 12] and be ordered");
  require(depth_range[0] > 0.0 && depth_range[0] <= depth_range[1],
          "depth_range must be positive and ordered");
  require(radius_range[0] >= 0.0 && radius_range[0] <= radius_range[1],
          "radius_range must be non-negative and ordered");
  require(reflectivity_range[0] >= -1.0 && reflectivity_range[0] <= reflectivity_range[1] &&
              reflectivity_range[1] <= 1.0,
          "reflectivity_range must lie within [-1, 1] and be ordered");
  require(target_count_range[0] >= 1 && target_count_range[0] <= target_count_range[1],
          "target_count_range must be >= 1 and ordered");
  for (double e : extent) require(e > 0.0, "extent must be > 0");
  validate_noise(noise);
  require(wavelet_center_freq_ghz > 0.0, "wavelet center frequency must be > 0");
}

std::string dataset_config_to_json(const DatasetConfig& cfg) {
  json j = {{"count", cfg.count},
            {"n_traces", cfg.n_traces},
            {"n_samples", cfg.sampling.n_samples},
            {"dt_ns", cfg.sampling.dt_ns},
            {"t0_ns", cfg.sampling.t0_ns},
            {"dielectric_range", cfg.dielectric_range},
            {"depth_range", cfg.depth_range},
            {"radius_range", cfg.radius_range},
            {"reflectivity_range", cfg.reflectivity_range},
            {"target_count_range", cfg.target_count_range},
            {"extent", cfg.extent},
            {"noise", noise_to_json(cfg.noise)},
            {"wavelet_center_freq_ghz", cfg.wavelet_center_freq_ghz},
            {"mask_half_width_ns", cfg.mask_half_width_ns}};
  return j.dump(2) + "\n";
}

DatasetConfig dataset_config_from_json(const std::string& text) {
  return parse_json<DatasetConfig>(text, [](const json& j) {
    DatasetConfig c;
    c.count = j.value("count", c.count);
    c.n_traces = j.value("n_traces", c.n_traces);
    c.sampling.n_samples = j.value("n_samples", c.sampling.n_samples);
    c.sampling.dt_ns = j.value("dt_ns", c.sampling.dt_ns);
    c.sampling.t0_ns = j.value("t0_ns", c.sampling.t0_ns);
    if (j.contains("dielectric_range")) c.dielectric_range = array_from<double, 2>(j, "dielectric_range");
    if (j.contains("depth_range")) c.depth_range = array_from<double, 2>(j, "depth_range");
    if (j.contains("radius_range")) c.radius_range = array_from<double, 2>(j, "radius_range");
    if (j.contains("reflectivity_range")) {
      c.reflectivity_range = array_from<double, 2>(j, "reflectivity_range");
    }
    if (j.contains("target_count_range")) {
      c.target_count_range = array_from<std::size_t, 2>(j, "target_count_range");
    }
    if (j.contains("extent")) c.extent = array_from<double, 3>(j, "extent");
    if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"), c.noise);
    c.wavelet_center_freq_ghz = j.value("wavelet_center_freq_ghz", c.wavelet_center_freq_ghz);
    c.mask_half_width_ns = j.value("mask_half_width_ns", c.mask_half_width_ns);
    c.validate();
    return c;
  });
}

double quantize_dielectric(double value) {
  require(std::isfinite(value), "dielectric must be finite");
  const double q = std::round(std::clamp(value, 1.0, 12.0) * 10.0);
  return q / 10.0;
}

std::vector<ManifestRow> generate_dataset(const DatasetConfig& cfg,
                                          const std::filesystem::path& out_dir,
                                          std::uint64_t seed) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  // Poses: one straight pass along x through the middle of the slab.
  std::vector<Pose> trajectory;
  const double y_line = cfg.extent[1] / 2.0;
  for (std::size_t q = 0; q < cfg.n_traces; ++q) {
    const double x = cfg.extent[0] * static_cast<double>(q) /
                     static_cast<double>(cfg.n_traces - 1);
    trajectory.emplace_back(x, y_line, 0.0);
  }

  std::vector<ManifestRow> rows;
  std::string manifest;
  for (std::size_t k = 0; k < cfg.count; ++k) {
    const std::uint64_t scene_seed = mix(splitmix64(seed), k);
    std::mt19937_64 rng(scene_seed);
    auto uniform = [&rng](const std::array<double, 2>& r) {
      return r[0] == r[1] ? r[0] : std::uniform_real_distribution<double>(r[0], r[1])(rng);
    };

    SceneSpec scene;
    scene.extent = cfg.extent;
    scene.noise = cfg.noise;
    scene.wavelet_center_freq_ghz = cfg.wavelet_center_freq_ghz;
    scene.dielectric = quantize_dielectric(uniform(cfg.dielectric_range));
    const std::size_t n_targets = std::uniform_int_distribution<std::size_t>(
        cfg.target_count_range[0], cfg.target_count_range[1])(rng);
    for (std::size_t t = 0; t < n_targets; ++t) {
      TargetSpec ts;
      ts.position = {uniform({0.2 * cfg.extent[0], 0.8 * cfg.extent[0]}), y_line,
                     uniform(cfg.depth_range)};
      ts.radius = std::min(uniform(cfg.radius_range), 0.5 * ts.position[2]);
      ts.reflectivity = uniform(cfg.reflectivity_range);
      scene.targets.push_back(ts);
    }

    const BScan bscan = simulate_bscan(scene, trajectory, cfg.sampling, scene_seed);
    const double hw = cfg.mask_half_width_ns > 0.0 ? cfg.mask_half_width_ns
                                                   : default_mask_half_width(scene);
    const SegmentationMask mask = ground_truth_mask(scene, bscan, hw);

    char stem[32];
    std::snprintf(stem, sizeof stem, "sample_%04zu", k);
    ManifestRow row{std::string(stem) + ".gprb", std::string(stem) + ".gprm",
                    std::string(stem) + ".json", scene.dielectric};
    io::save_bscan(bscan, out_dir / row.bscan);
    io::save_mask(mask, out_dir / row.mask);
    io::write_text(out_dir / row.scene, scene_to_json(scene));

    manifest += json{{"bscan", row.bscan},
                     {"mask", row.mask},
                     {"scene", row.scene},
                     {"dielectric", row.dielectric}}
                    .dump();
    manifest += '\n';
    rows.push_back(std::move(row));
  }
  io::write_text(out_dir / "manifest.jsonl", manifest);
  return rows;
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::istringstream in(io::read_text(path));
  std::vector<ManifestRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      rows.push_back({j.at("bscan").get<std::string>(), j.at("mask").get<std::string>(),
                      j.at("scene").get<std::string>(), j.at("dielectric").get<double>()});
    } catch (const json::exception& e) {
      fail(ErrorKind::Format, "bad manifest row " + std::to_string(rows.size() + 1) +
                                  ": " + e.what());
    }
  }
  return rows;
}

}  // namespace gpr::synth
