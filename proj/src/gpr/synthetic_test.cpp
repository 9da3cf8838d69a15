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
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

#include "doctest.h"
#include "gpr/io.hpp"
#include "gpr/trajectory.hpp"
#include "oracles.hpp"

namespace gpr::synth {
namespace {

std::size_t peak_index(const AScan& a) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (std::abs(a.samples()[i]) > std::abs(a.samples()[best])) best = i;
  }
  return best;
}

SceneSpec single_target(double dielectric, double x, double y, double depth) {
  SceneSpec s;
  s.dielectric = dielectric;
  s.targets = {TargetSpec{{x, y, depth}, 0.0, 1.0}};
  return s.noise_free();
}

std::string slurp(const std::filesystem::path& p) { return io::read_text(p); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected gpr::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("synthetic") {
  TEST_CASE("ricker wavelet values") {
    CHECK(wavelet(0.0, 1.5) == 1.0);
    CHECK(std::abs(wavelet(50.0, 1.5)) < 1e-300);
    CHECK(std::abs(wavelet(-50.0, 1.5)) < 1e-300);
    const double f = 1.5;
    const double root = 1.0 / (std::numbers::pi * f * std::sqrt(2.0));
    CHECK(std::abs(wavelet(root, f)) < 1e-15);
    CHECK(std::abs(wavelet(-root, f)) < 1e-15);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> t(-3.0, 3.0);
    std::uniform_real_distribution<double> fr(0.1, 4.0);
    for (int i = 0; i < 500; ++i) {
      const double ti = t(rng);
      const double fi = fr(rng);
      CHECK(wavelet(ti, fi) == doctest::Approx(oracle::ricker(ti, fi)).epsilon(1e-12));
    }
  }

  TEST_CASE("echo straight below at depth 0.1 in dielectric 9 arrives at 2.0014 ns") {
    const SceneSpec s = single_target(9.0, 0.25, 0.25, 0.1);
    const Pose p(0.25, 0.25, 0.0);
    const double t = echo_time(s, s.targets[0], p);
    CHECK(t == doctest::Approx(2.0014).epsilon(5e-5));
    CHECK(t == doctest::Approx(2.0 * 0.1 / (oracle::kC / 3.0)).epsilon(1e-12));
    const AScan a = simulate_ascan(s, p, Sampling{}, 0);
    CHECK(std::abs(a.time_at(peak_index(a)) - t) <= a.dt() / 2.0 + 1e-12);
    CHECK(a.samples()[peak_index(a)] > 0.0f);
  }

  TEST_CASE("no targets and no noise gives an all-zero trace") {
    SceneSpec s;
    s.noise.gaussian_sigma = 0.0;
    const AScan a = simulate_ascan(s, Pose(0.1, 0.2, 0.3), Sampling{}, 9);
    CHECK(std::all_of(a.samples().begin(), a.samples().end(), [](float v) { return v == 0.0f; }));
  }

  TEST_CASE("simulation is deterministic per seed") {
    const SceneSpec s = default_scene();
    const auto traj = trajectory::line(0.0, 0.25, 0.5, 0.25, 21);
    const BScan a = simulate_bscan(s, traj, Sampling{}, 42);
    const BScan b = simulate_bscan(s, traj, Sampling{}, 42);
    const BScan c = simulate_bscan(s, traj, Sampling{}, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
  }

  TEST_CASE("apex trace is the one nearest the target; apex time is 2d/v") {
    const SceneSpec s = single_target(6.0, 0.237, 0.25, 0.1);
    const auto traj = trajectory::line(0.0, 0.25, 0.5, 0.25, 101);
    const BScan b = simulate_bscan(s, traj, Sampling{}, 0);

    std::size_t apex = 0;
    for (std::size_t q = 1; q < b.n_traces(); ++q) {
      if (peak_index(b.trace(q)) < peak_index(b.trace(apex))) apex = q;
    }
    std::size_t oracle_apex = 0;
    double best = 1e300;
    for (std::size_t q = 0; q < traj.size(); ++q) {
      const double t = oracle::echo_time(6.0, 0.237, 0.25, 0.1, 0.0, traj[q].x(), traj[q].y());
      if (t < best) {
        best = t;
        oracle_apex = q;
      }
    }
    CHECK(apex == oracle_apex);
    CHECK(oracle_apex == 47);  // x = 0.235, nearest to 0.237
    const double v = oracle::kC / std::sqrt(6.0);
    const double t_apex_model = 2.0 * std::hypot(0.1, 0.002) / v;
    CHECK(std::abs(b.trace(apex).time_at(peak_index(b.trace(apex))) - t_apex_model) <=
          b.dt() / 2.0 + 1e-12);
    CHECK(2.0 * 0.1 / v == doctest::Approx(t_apex_model).epsilon(1e-3));
  }

  TEST_CASE("hyperbola consistency within dt/2") {
    for (double eps : {4.0, 6.0, 9.0}) {
      const double d = 0.12;
      const SceneSpec s = single_target(eps, 0.25, 0.25, d);
      const auto traj = trajectory::line(0.05, 0.25, 0.45, 0.25, 81);
      const BScan b = simulate_bscan(s, traj, Sampling{}, 0);
      const double v = oracle::kC / std::sqrt(eps);
      for (std::size_t q = 0; q < b.n_traces(); ++q) {
        const double sx = traj[q].x() - 0.25;
        const double t_model = 2.0 / v * std::sqrt(d * d + sx * sx);
        const double t_peak = b.trace(q).time_at(peak_index(b.trace(q)));
        CHECK(std::abs(t_peak - t_model) <= b.dt() / 2.0 + 1e-12);
      }
    }
  }

  TEST_CASE("noise-free trace energy matches wavelet energy times gain squared") {
    SceneSpec s;
    s.dielectric = 5.0;
    s.targets = {TargetSpec{{0.2, 0.25, 0.06}, 0.0, 0.8},
                 TargetSpec{{0.3, 0.25, 0.25}, 0.01, -0.6}};
    s = s.noise_free();
    const double f = s.wavelet_center_freq_ghz;
    const double wavelet_energy =
        0.75 * std::sqrt(std::numbers::pi / 2.0) / (std::numbers::pi * f);
    for (double x : {0.05, 0.1, 0.2, 0.27}) {  // echoes at least 1.5 ns apart
      const Pose p(x, 0.25, 0.0);
      const AScan a = simulate_ascan(s, p, Sampling{}, 0);
      double energy = 0.0;
      for (float v : a.samples()) energy += static_cast<double>(v) * v;
      double expected = 0.0;
      for (const TargetSpec& t : s.targets) {
        const double g = oracle::echo_gain(t.reflectivity, t.position[0], t.position[1],
                                           t.position[2], t.radius, x, 0.25);
        expected += g * g * wavelet_energy / a.dt();
      }
      CHECK(energy == doctest::Approx(expected).epsilon(0.01));
    }
  }

  TEST_CASE("raising the dielectric delays every echo") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int i = 0; i < 50; ++i) {
      const double tx = u(rng), ty = u(rng), depth = 0.02 + u(rng) * 0.3;
      const Pose p(u(rng), u(rng), 0.0);
      double prev_t = -1.0;
      std::size_t prev_peak = 0;
      for (double eps = 1.0; eps <= 12.0; eps += 0.5) {
        const SceneSpec s = single_target(eps, tx, ty, depth);
        const double t = echo_time(s, s.targets[0], p);
        CHECK(t > prev_t);
        CHECK(t == doctest::Approx(oracle::echo_time(eps, tx, ty, depth, 0.0, p.x(), p.y()))
                       .epsilon(1e-12));
        if (t + 1.0 < 12.0) {
          const std::size_t peak = peak_index(simulate_ascan(s, p, Sampling{}, 0));
          CHECK(peak >= prev_peak);
          prev_peak = peak;
        }
        prev_t = t;
      }
    }
  }

  TEST_CASE("zig-zag traces equal the same poses visited in any order") {
    const SceneSpec s = default_scene();
    const auto zz = trajectory::zigzag(0.1, 0.2, 0.4, 0.3, 4, 9);
    auto shuffled = zz;
    std::mt19937_64 rng(3);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const BScan a = simulate_bscan(s, zz, Sampling{}, 17);
    const BScan b = simulate_bscan(s, shuffled, Sampling{}, 17);
    std::map<std::tuple<double, double, double>, const AScan*> by_pose;
    for (const AScan& t : a.traces()) {
      by_pose[{t.pose().x(), t.pose().y(), t.pose().theta()}] = &t;
    }
    REQUIRE(by_pose.size() == a.n_traces());
    for (const AScan& t : b.traces()) {
      const auto it = by_pose.find({t.pose().x(), t.pose().y(), t.pose().theta()});
      REQUIRE(it != by_pose.end());
      CHECK(*it->second == t);
    }
  }

  TEST_CASE("trajectory and window errors") {
    const SceneSpec s = default_scene();
    std::vector<Pose> none;
    CHECK(kind_of([&] { simulate_bscan(s, none, Sampling{}, 0); }) == ErrorKind::Domain);
    std::vector<Pose> one{Pose(0.1, 0.1, 0)};
    CHECK(kind_of([&] { simulate_bscan(s, one, Sampling{}, 0); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { simulate_ascan(s, Pose(0.25, 0.25, 0), Sampling{100, 0.01, 0}, 0); }) ==
          ErrorKind::Domain);
    CHECK(kind_of([&] { simulate_ascan(s, Pose(), Sampling{1, 0.01, 0}, 0); }) ==
          ErrorKind::InvalidArgument);
  }

  TEST_CASE("ground-truth masks") {
    SceneSpec empty;
    const auto traj = trajectory::line(0.0, 0.25, 0.5, 0.25, 31);
    const BScan b0 = simulate_bscan(empty, traj, Sampling{}, 0);
    CHECK(ground_truth_mask(empty, b0, 1.0).count() == 0);

    const SceneSpec s = single_target(6.0, 0.25, 0.25, 0.1);
    const BScan b = simulate_bscan(s, traj, Sampling{}, 0);
    const double f = s.wavelet_center_freq_ghz;
    const double hw = 1.5 / f;
    const SegmentationMask m = ground_truth_mask(s, b, hw);
    for (std::size_t q = 0; q < b.n_traces(); ++q) {
      const double tc = oracle::echo_time(6.0, 0.25, 0.25, 0.1, 0.0, traj[q].x(), traj[q].y());
      for (std::size_t i = 0; i < b.n_samples(); ++i) {
        const double t = b.trace(q).time_at(i);
        const bool inside = std::abs(t - tc) <= hw;
        // Samples within an ulp of the band edge may go either way.
        if (std::abs(std::abs(t - tc) - hw) < 1e-9) continue;
        CHECK(m.at(q, i) == (inside ? 1 : 0));
      }
    }

    const SegmentationMask thin = ground_truth_mask(s, b, 0.0);
    for (std::size_t q = 0; q < b.n_traces(); ++q) {
      std::size_t marked = 0;
      for (std::size_t i = 0; i < b.n_samples(); ++i) marked += thin.at(q, i);
      CHECK(marked <= 1);
    }
    CHECK(default_mask_half_width(s) == doctest::Approx(0.5));
  }

  TEST_CASE("scene json round trip and validation") {
    SceneSpec s;
    s.dielectric = 7.25;
    s.extent = {1.0, 2.0, 0.5};
    s.targets = {TargetSpec{{0.1, 0.2, 0.3}, 0.01, -0.5}, TargetSpec{{0.4, 0.5, 0.2}, 0.0, 1.0}};
    s.noise = NoiseSpec{0.5, 0.2, 2.0};
    s.wavelet_center_freq_ghz = 2.0;
    const SceneSpec back = scene_from_json(scene_to_json(s));
    CHECK(scene_to_json(back) == scene_to_json(s));
    CHECK(back.targets.size() == 2);
    CHECK(back.targets[0].reflectivity == -0.5);
    CHECK(back.noise.echo_delay_ns == 2.0);

    CHECK(kind_of([] { scene_from_json("{not json"); }) == ErrorKind::Format);
    CHECK_THROWS_AS(scene_from_json(R"({"dielectric": 0.5})"), Error);
    CHECK_THROWS_AS(scene_from_json(R"({"targets": [{"position": [0, 0, -0.1]}]})"), Error);
  }

  TEST_CASE("dielectric labels are quantized to 0.1 within [1, 12]") {
    CHECK(quantize_dielectric(6.34) == doctest::Approx(6.3));
    CHECK(quantize_dielectric(6.35) == doctest::Approx(6.4));
    CHECK(quantize_dielectric(0.3) == doctest::Approx(1.0));
    CHECK(quantize_dielectric(15.0) == doctest::Approx(12.0));
  }

  TEST_CASE("dataset generation") {
    const auto root = std::filesystem::temp_directory_path() / "gpr_dataset_test";
    std::filesystem::remove_all(root);

    DatasetConfig cfg;
    cfg.n_traces = 4;
    SUBCASE("628 samples by default count") {
      CHECK(cfg.count == 628);
      const auto rows = generate_dataset(cfg, root / "full", 1);
      CHECK(rows.size() == 628);
      CHECK(read_manifest(root / "full" / "manifest.jsonl").size() == 628);
      std::size_t files = 0;
      for (const auto& e : std::filesystem::directory_iterator(root / "full")) {
        files += e.path().extension() != ".jsonl";
      }
      CHECK(files == 3 * 628);
      for (const ManifestRow& r : rows) {
        CHECK(r.dielectric >= cfg.dielectric_range[0] - 0.05);
        CHECK(r.dielectric <= cfg.dielectric_range[1] + 0.05);
        CHECK(std::abs(r.dielectric * 10.0 - std::round(r.dielectric * 10.0)) < 1e-9);
      }
    }
    SUBCASE("count 0 writes an empty manifest only") {
      cfg.count = 0;
      CHECK(generate_dataset(cfg, root / "empty", 1).empty());
      CHECK(slurp(root / "empty" / "manifest.jsonl").empty());
      CHECK(std::distance(std::filesystem::directory_iterator(root / "empty"),
                          std::filesystem::directory_iterator()) == 1);
    }
    SUBCASE("same config and seed give identical bytes; masks match their scenes") {
      cfg.count = 5;
      cfg.n_traces = 16;
      generate_dataset(cfg, root / "a", 7);
      generate_dataset(cfg, root / "b", 7);
      for (const auto& e : std::filesystem::directory_iterator(root / "a")) {
        CHECK(slurp(e.path()) == slurp(root / "b" / e.path().filename()));
      }
      for (const ManifestRow& r : read_manifest(root / "a" / "manifest.jsonl")) {
        const SceneSpec scene = scene_from_json(slurp(root / "a" / r.scene));
        const BScan b = io::load_bscan(root / "a" / r.bscan);
        const SegmentationMask m = io::load_mask(root / "a" / r.mask);
        CHECK(m == ground_truth_mask(scene, b, default_mask_half_width(scene)));
        CHECK(r.dielectric == doctest::Approx(quantize_dielectric(scene.dielectric)));
      }
    }
    SUBCASE("config json round trip") {
      cfg.count = 12;
      cfg.dielectric_range = {4.0, 5.0};
      const DatasetConfig back = dataset_config_from_json(dataset_config_to_json(cfg));
      CHECK(dataset_config_to_json(back) == dataset_config_to_json(cfg));
      CHECK(dataset_config_from_json("{}").count == 628);
    }
    std::filesystem::remove_all(root);
  }
}

}  // namespace gpr::synth
