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
#include "gpr/dielectric.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "gpr/denoise.hpp"
#include "gpr/migration.hpp"
#include "gpr/synthetic.hpp"
#include "gpr/trajectory.hpp"
#include "oracles.hpp"

namespace gpr::dielectric {
namespace {

std::vector<HyperbolaPoint> forward_points(double v, double d, double s0, double s_lo,
                                           double s_hi, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  std::vector<HyperbolaPoint> out;
  for (const auto& [si, ti] : oracle::hyperbola(v, d, s0, s)) out.push_back({si, ti});
  return out;
}

struct Survey {
  synth::SceneSpec scene;
  BScan bscan;
  SegmentationMask mask;
};

Survey straight_survey(synth::SceneSpec scene, std::uint64_t seed = 0) {
  const auto traj = trajectory::line(0.0, 0.25, 0.5, 0.25, 101);
  BScan b = synth::simulate_bscan(scene, traj, {}, seed);
  SegmentationMask m = synth::ground_truth_mask(scene, b, synth::default_mask_half_width(scene));
  return {std::move(scene), std::move(b), std::move(m)};
}

synth::SceneSpec single(double eps, double depth = 0.1) {
  synth::SceneSpec s;
  s.dielectric = eps;
  s.targets = {synth::TargetSpec{{0.25, 0.25, depth}, 0.0, 1.0}};
  return s.noise_free();
}

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

TEST_SUITE("dielectric") {
  TEST_CASE("noise-free forward points recover v to 1e-6") {
    const auto pts = forward_points(0.1, 0.1, 0.23, 0.0, 0.5, 101);
    const HyperbolaFit f = fit_hyperbola(pts);
    CHECK(f.velocity == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(f.apex_depth == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(f.apex_trace_position == doctest::Approx(0.23).epsilon(1e-6));
    CHECK(f.residual < 1e-20);

    // Uneven sampling along a short, off-centre window.
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.3, 0.6);
    std::vector<double> s(40);
    for (double& x : s) x = u(rng);
    std::vector<HyperbolaPoint> uneven;
    for (const auto& [si, ti] : oracle::hyperbola(0.2, 0.05, 0.45, s)) uneven.push_back({si, ti});
    CHECK(fit_hyperbola(uneven).velocity == doctest::Approx(0.2).epsilon(1e-6));
  }

  TEST_CASE("jittered points at dielectric 6 stay within 5% over 200 seeds") {
    const double v = migration::wave_velocity(6.0);
    const double dt = 0.005;
    const auto clean = forward_points(v, 0.1, 0.25, 0.0, 0.5, 101);
    std::size_t ok = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> jitter(0.0, dt / 2.0);
      auto pts = clean;
      for (auto& p : pts) p.t += jitter(rng);
      const double err = std::abs(fit_hyperbola(pts).velocity / v - 1.0);
      worst = std::max(worst, err);
      ok += err <= 0.05;
    }
    MESSAGE("worst relative velocity error " << worst);
    CHECK(ok == 200);
  }

  TEST_CASE("fit preconditions") {
    const auto pts = forward_points(0.1, 0.1, 0.25, 0.0, 0.5, 11);
    CHECK(kind_of([&] { fit_hyperbola(std::span(pts).first(2)); }) ==
          ErrorKind::InvalidArgument);
    std::vector<HyperbolaPoint> same{{0.1, 1.0}, {0.1, 1.1}, {0.1, 1.2}, {0.1, 1.3}};
    CHECK(kind_of([&] { fit_hyperbola(same); }) == ErrorKind::Domain);
    // A downward parabola has no physical reading.
    std::vector<HyperbolaPoint> cap;
    for (int i = 0; i < 9; ++i) cap.push_back({0.05 * i, 3.0 - 0.4 * (i - 4) * (i - 4) * 0.05});
    CHECK(kind_of([&] { fit_hyperbola(cap); }) == ErrorKind::Domain);
  }

  TEST_CASE("velocity to dielectric round trip") {
    CHECK(dielectric_from_velocity(kSpeedOfLight) == 1.0);
    CHECK(dielectric_from_velocity(2.0 * kSpeedOfLight) == 1.0);
    for (double eps = 1.0; eps <= 40.0; eps += 0.37) {
      CHECK(dielectric_from_velocity(migration::wave_velocity(eps)) ==
            doctest::Approx(eps).epsilon(1e-12));
    }
    CHECK_THROWS_AS(dielectric_from_velocity(0.0), Error);
  }

  TEST_CASE("single-target label: one component, per-trace t within dt of the echo") {
    const Survey sv = straight_survey(single(6.0));
    const auto comps = extract_hyperbola_points(sv.bscan, sv.mask);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].size() == sv.bscan.n_traces());
    const auto s = arc_length(sv.bscan);
    for (std::size_t q = 0; q < comps[0].size(); ++q) {
      const Pose& p = sv.bscan.trace(q).pose();
      const double tc = oracle::echo_time(6.0, 0.25, 0.25, 0.1, 0.0, p.x(), p.y());
      CHECK(comps[0][q].s == doctest::Approx(s[q]));
      CHECK(std::abs(comps[0][q].t - tc) <= sv.bscan.dt());
    }
    const HyperbolaFit f = fit_hyperbola(comps[0]);
    const double half = sv.bscan.dt() / 2.0;
    CHECK(f.residual <= half * half);
  }

  TEST_CASE("extraction errors and component counts") {
    const Survey sv = straight_survey(single(6.0));
    CHECK(kind_of([&] { extract_hyperbola_points(sv.bscan, SegmentationMask(101, 2560)); }) ==
          ErrorKind::Domain);
    CHECK(kind_of([&] { estimate_dielectric(sv.bscan, SegmentationMask(101, 2560)); }) ==
          ErrorKind::Domain);
    CHECK(kind_of([&] { extract_hyperbola_points(sv.bscan, SegmentationMask(100, 2560)); }) ==
          ErrorKind::Domain);

    // Two reflectors whose bands stay apart over x in [0, 0.4].
    synth::SceneSpec two;
    two.dielectric = 6.0;
    two.targets = {synth::TargetSpec{{0.1, 0.25, 0.04}, 0.0, 1.0},
                   synth::TargetSpec{{0.4, 0.25, 0.42}, 0.0, 1.0}};
    two = two.noise_free();
    const BScan b = synth::simulate_bscan(two, trajectory::line(0.0, 0.25, 0.4, 0.25, 81), {}, 0);
    const SegmentationMask m = synth::ground_truth_mask(two, b, synth::default_mask_half_width(two));
    CHECK(extract_hyperbola_points(b, m).size() == 2);
    const EstimateReport r = estimate_dielectric(b, m);
    CHECK(r.components.size() == 2);
    CHECK(r.estimate.value == doctest::Approx(6.0).epsilon(0.02));
  }

  TEST_CASE("noise-free estimate within 2% and strictly monotone in the true value") {
    double prev = 0.0;
    for (double eps : {3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0}) {
      const Survey sv = straight_survey(single(eps));
      const EstimateReport r = estimate_dielectric(sv.bscan, sv.mask);
      CHECK(r.estimate.value == doctest::Approx(eps).epsilon(0.02));
      CHECK(r.estimate.value > prev);
      CHECK(r.estimate.source == EstimateSource::HyperbolaFit);
      CHECK(r.estimate.confidence > 0.9);
      CHECK(r.estimate.confidence <= 1.0);
      prev = r.estimate.value;
    }
  }

  TEST_CASE("noisy default scene lands within 5%") {
    std::size_t ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      synth::SceneSpec s = synth::default_scene();
      const Survey sv = straight_survey(s, seed);
      const EstimateReport r = estimate_dielectric(sv.bscan, sv.mask);
      ok += std::abs(r.estimate.value / 6.0 - 1.0) <= 0.05;
    }
    CHECK(ok >= 9);
  }

  TEST_CASE("arc length and straight runs follow the poses") {
    std::vector<AScan> traces;
    const std::vector<Pose> poses = trajectory::zigzag(0.0, 0.0, 0.3, 0.1, 3, 4);
    for (const Pose& p : poses) traces.emplace_back(std::vector<float>(4, 0.f), 0.1, 0.0, p);
    const BScan b(std::move(traces));
    const auto s = arc_length(b);
    CHECK(s[0] == 0.0);
    CHECK(s[3] == doctest::Approx(0.3));
    CHECK(s[4] == doctest::Approx(0.35));
    CHECK(s.back() == doctest::Approx(0.9 + 0.1));
    const auto runs = straight_runs(b);
    REQUIRE(runs.size() == 3);
    CHECK(runs[0] == std::pair<std::size_t, std::size_t>{0, 4});
    CHECK(runs[1] == std::pair<std::size_t, std::size_t>{4, 8});
    CHECK(runs[2] == std::pair<std::size_t, std::size_t>{8, 12});
    CHECK(straight_runs(b, 4.0).size() == 1);
  }

  TEST_CASE("estimate json round trip and validation") {
    EstimateReport r;
    r.estimate = {6.25, 0.75, EstimateSource::HyperbolaFit};
    r.components = {{0.12, 0.0, 0.1, 1e-6}, {0.11, 0.0, 0.05, 2e-6}};
    const std::string text = report_to_json(r);
    const EstimateReport back = report_from_json(text);
    CHECK(back.estimate.value == 6.25);
    CHECK(back.estimate.confidence == 0.75);
    CHECK(back.estimate.source == EstimateSource::HyperbolaFit);
    REQUIRE(back.components.size() == 2);
    CHECK(back.components[1].apex_depth == 0.05);
    CHECK(report_to_json(back) == text);
    CHECK(text.find("\"dielectric\"") < text.find("\"confidence\""));

    const EstimateReport learned = report_from_json(R"({"dielectric": 5.1, "source": "learned"})");
    CHECK(learned.estimate.source == EstimateSource::Learned);
    CHECK(learned.estimate.confidence == 1.0);
    CHECK(report_from_json(R"({"dielectric": 4})").estimate.source ==
          EstimateSource::UserSupplied);

    CHECK(kind_of([] { report_from_json("{"); }) == ErrorKind::Format);
    CHECK(kind_of([] { report_from_json("{}"); }) == ErrorKind::Format);
    CHECK(kind_of([] { report_from_json(R"({"dielectric": 4, "source": "x"})"); }) ==
          ErrorKind::Format);
    CHECK(kind_of([] { report_from_json(R"({"dielectric": 0.5})"); }) == ErrorKind::Domain);
    CHECK(kind_of([] { report_from_json(R"({"dielectric": 4, "confidence": 2})"); }) ==
          ErrorKind::Domain);
  }
}

}  // namespace gpr::dielectric
