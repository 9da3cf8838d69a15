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

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"

namespace gpr {
namespace {

constexpr double kPi = std::numbers::pi;

AScan trace(std::size_t n, double x = 0.0, double dt = 0.1) {
  return AScan(std::vector<float>(n, 1.0f), dt, 0.0, Pose(x, 0.0, 0.0));
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected gpr::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("types") {
  TEST_CASE("pose heading is normalized to [-pi, pi)") {
    CHECK(Pose(0, 0, kPi).theta() == doctest::Approx(-kPi));
    CHECK(Pose(0, 0, -kPi).theta() == doctest::Approx(-kPi));
    CHECK(Pose(0, 0, 3 * kPi).theta() == doctest::Approx(-kPi));
    CHECK(Pose(0, 0, 7.0).theta() == doctest::Approx(7.0 - 2 * kPi));
    CHECK(Pose(0, 0, 0.5).theta() == 0.5);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1000.0, 1000.0);
    for (int i = 0; i < 2000; ++i) {
      const double raw = u(rng);
      const double t = Pose(0, 0, raw).theta();
      CHECK(t >= -kPi);
      CHECK(t < kPi);
      CHECK(std::cos(t) == doctest::Approx(std::cos(raw)).epsilon(1e-9));
      CHECK(std::sin(t) == doctest::Approx(std::sin(raw)).epsilon(1e-9));
    }
  }

  TEST_CASE("pose position must be finite") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(kind_of([&] { Pose(nan, 0, 0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { Pose(0, inf, 0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { Pose(0, 0, nan); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("a-scan invariants") {
    CHECK_THROWS_AS(trace(1), Error);
    CHECK_THROWS_AS(trace(0), Error);
    CHECK_THROWS_AS(trace(4, 0.0, 0.0), Error);
    CHECK_THROWS_AS(trace(4, 0.0, -1.0), Error);
    CHECK_THROWS_AS(AScan({1, 2}, 0.1, -0.5, Pose()), Error);
    CHECK_THROWS_AS(AScan({1, std::numeric_limits<float>::quiet_NaN()}, 0.1, 0.0, Pose()),
                    Error);
    const AScan a({1, 2, 3}, 0.25, 1.0, Pose(1, 2, 0));
    CHECK(a.time_at(2) == 1.5);
    const AScan b = a.with_samples({4, 5, 6});
    CHECK(b.pose() == a.pose());
    CHECK(b.dt() == a.dt());
    CHECK(b.samples()[2] == 6.0f);
    CHECK_THROWS_AS(a.with_samples({1}), Error);
  }

  TEST_CASE("b-scan invariants") {
    CHECK_THROWS_AS(BScan({}), Error);
    CHECK_THROWS_AS(BScan({trace(4)}), Error);
    CHECK_THROWS_AS(BScan({trace(4), trace(5)}), Error);
    CHECK_THROWS_AS(BScan({trace(4, 0.0, 0.1), trace(4, 0.0, 0.2)}), Error);
    CHECK_THROWS_AS(BScan({trace(4), AScan(std::vector<float>(4, 0.f), 0.1, 1.0, Pose())}),
                    Error);
    const BScan b({trace(4, 0.0), trace(4, 1.0), trace(4, 2.0)});
    CHECK(b.n_traces() == 3);
    CHECK(b.n_samples() == 4);
    CHECK(b.trace(2).pose().x() == 2.0);
  }

  TEST_CASE("mask cells are binary and sized") {
    CHECK_THROWS_AS(SegmentationMask(2, 2, {0, 1, 2, 0}), Error);
    CHECK_THROWS_AS(SegmentationMask(2, 2, {0, 1, 1}), Error);
    SegmentationMask m(3, 4);
    CHECK(m.count() == 0);
    m.set(1, 2, true);
    m.set(2, 3, true);
    CHECK(m.count() == 2);
    CHECK(m.at(1, 2) == 1);
    CHECK(m.cells()[1 * 4 + 2] == 1);
    CHECK(m.matches(BScan({trace(4), trace(4), trace(4)})));
    CHECK_FALSE(m.matches(BScan({trace(4), trace(4)})));
  }

  TEST_CASE("grid spec layout") {
    GridSpec g;
    g.origin = {1.0, -2.0, 0.5};
    g.spacing = {0.1, 0.2, 0.3};
    g.dims = {3, 4, 5};
    CHECK_NOTHROW(g.validate());
    CHECK(g.voxel_count() == 60);
    CHECK(g.max_spacing() == 0.3);
    for (std::size_t k = 0; k < 5; ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 3; ++i) {
          const auto u = g.unravel(g.index(i, j, k));
          CHECK(u == std::array<std::size_t, 3>{i, j, k});
        }
      }
    }
    CHECK(g.index(1, 0, 0) == 1);
    CHECK(g.index(0, 1, 0) == 3);
    CHECK(g.index(0, 0, 1) == 12);
    const auto p = g.position(2, 3, 4);
    CHECK(p[0] == doctest::Approx(1.2));
    CHECK(p[1] == doctest::Approx(-1.4));
    CHECK(p[2] == doctest::Approx(1.7));

    GridSpec bad = g;
    bad.dims[1] = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = g;
    bad.spacing[2] = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = g;
    bad.origin[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("voxel grid storage and argmax") {
    GridSpec g;
    g.dims = {2, 2, 2};
    CHECK_THROWS_AS(VoxelGrid(g, std::vector<float>(7)), Error);
    VoxelGrid grid(g);
    CHECK(grid.values().size() == 8);
    CHECK(grid.argmax() == 0);
    grid.values()[3] = 2.0f;
    grid.values()[6] = 2.0f;
    CHECK(grid.argmax() == 3);
    CHECK(grid.at(1, 1, 0) == 2.0f);
  }

  TEST_CASE("estimate source names round trip") {
    for (auto s : {EstimateSource::HyperbolaFit, EstimateSource::Learned,
                   EstimateSource::UserSupplied}) {
      CHECK(estimate_source_from_string(to_string(s)) == s);
    }
    CHECK(to_string(EstimateSource::HyperbolaFit) == "hyperbola-fit");
    CHECK_THROWS_AS(estimate_source_from_string("guess"), Error);
  }
}

}  // namespace gpr
