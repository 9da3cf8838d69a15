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

// Dielectric estimation from the hyperbolic signatures in a masked B-scan.
//
// A point reflector at depth d and along-track position s0 produces echoes at
//   t(s)^2 = (4 / v^2) * ((s - s0)^2 + d^2),
// which is a quadratic in s. Fitting that quadratic by linear least squares
// gives v, and the medium's permittivity follows as (C / v)^2.

#include <cstddef>
#include <numbers>
#include <utility>
#include <span>
#include <string>
#include <vector>

#include "gpr/types.hpp"

namespace gpr::dielectric {

inline constexpr std::size_t kDefaultMinFitPoints = 7;
/// Heading change that ends a straight run of the trajectory.
inline constexpr double kMaxTurnRad = 15.0 * std::numbers::pi / 180.0;

struct HyperbolaPoint {
  double s;  // arc length along the trajectory, m
  double t;  // two-way time, ns
};

struct HyperbolaFit {
  double velocity;             // m/ns, in (0, C]
  double apex_trace_position;  // m along the trajectory
  double apex_depth;           // m, > 0
  double residual;             // mean squared time residual, ns^2
};

struct EstimateReport {
  DielectricEstimate estimate;
  std::vector<HyperbolaFit> components;
};

/// Cumulative distance between consecutive poses, starting at 0.
std::vector<double> arc_length(const BScan& bscan);

/// Half-open trace ranges [begin, end) along which the trajectory keeps its
/// heading to within `max_turn_rad`.
std::vector<std::pair<std::size_t, std::size_t>> straight_runs(
    const BScan& bscan, double max_turn_rad = kMaxTurnRad);

/// Within each straight run, one point list per 8-connected mask component touching at least
/// `min_fit_points` traces. Each trace contributes the |a|-weighted centroid
/// time of its masked samples in that component.
std::vector<std::vector<HyperbolaPoint>> extract_hyperbola_points(
    const BScan& bscan, const SegmentationMask& mask,
    std::size_t min_fit_points = kDefaultMinFitPoints);

HyperbolaFit fit_hyperbola(std::span<const HyperbolaPoint> points);

/// (C / v)^2, clamped to >= 1.
double dielectric_from_velocity(double velocity);

/// Fits every component and combines them with weights 1 / residual.
EstimateReport estimate_dielectric(const BScan& bscan, const SegmentationMask& mask,
                                   std::size_t min_fit_points = kDefaultMinFitPoints);

/// {"dielectric", "confidence", "source",
///  "components": [{"velocity", "apex_depth", "residual"}, ...]}
std::string report_to_json(const EstimateReport& report);

/// Reads the same schema; "components" is optional and any producer
/// ("hyperbola-fit", "learned", "user-supplied") is accepted.
EstimateReport report_from_json(const std::string& text);

}  // namespace gpr::dielectric
