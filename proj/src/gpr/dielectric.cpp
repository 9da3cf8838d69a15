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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "json.hpp"

#include "gpr/denoise.hpp"

namespace gpr::dielectric {

std::vector<double> arc_length(const BScan& bscan) {
  std::vector<double> s(bscan.n_traces(), 0.0);
  for (std::size_t q = 1; q < s.size(); ++q) {
    const Pose& a = bscan.trace(q - 1).pose();
    const Pose& b = bscan.trace(q).pose();
    s[q] = s[q - 1] + std::hypot(b.x() - a.x(), b.y() - a.y());
  }
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> straight_runs(const BScan& bscan,
                                                               double max_turn_rad) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  bool have_heading = false;
  double heading = 0.0;
  for (std::size_t q = 0; q + 1 < bscan.n_traces(); ++q) {
    const Pose& a = bscan.trace(q).pose();
    const Pose& b = bscan.trace(q + 1).pose();
    const double dx = b.x() - a.x();
    const double dy = b.y() - a.y();
    if (dx == 0.0 && dy == 0.0) continue;
    const double h = std::atan2(dy, dx);
    if (!have_heading) {
      heading = h;
      have_heading = true;
    } else if (std::abs(normalize_angle(h - heading)) > max_turn_rad) {
      // Trace q closes the current run; q + 1 opens a new one whose heading
      // is set by its first step.
      runs.emplace_back(start, q + 1);
      start = q + 1;
      have_heading = false;
    }
  }
  runs.emplace_back(start, bscan.n_traces());
  return runs;
}

std::vector<std::vector<HyperbolaPoint>> extract_hyperbola_points(
    const BScan& bscan, const SegmentationMask& mask, std::size_t min_fit_points) {
  require(mask.matches(bscan), "mask dimensions do not match B-scan", ErrorKind::Domain);
  const std::size_t ns = bscan.n_samples();
  const std::vector<double> s = arc_length(bscan);

  std::vector<std::vector<HyperbolaPoint>> out;
  for (const auto& [begin, end] : straight_runs(bscan, kMaxTurnRad)) {
    // Components never cross a turn: a hyperbola only exists along a line.
    const std::size_t run_traces = end - begin;
    SegmentationMask local(
        run_traces, ns,
        std::vector<std::uint8_t>(mask.cells().begin() + static_cast<std::ptrdiff_t>(begin * ns),
                                  mask.cells().begin() + static_cast<std::ptrdiff_t>(end * ns)));
    for (const auto& comp : denoise::connected_components(local)) {
      // trace -> (sum |a| t, sum |a|, sum t, count)
      struct Acc { double wt = 0, w = 0, t = 0; std::size_t n = 0; };
      std::map<std::size_t, Acc> per_trace;
      for (std::size_t c : comp) {
        const std::size_t q = begin + c / ns;
        const std::size_t i = c % ns;
        const AScan& a = bscan.trace(q);
        const double t = a.time_at(i);
        const double w = std::abs(static_cast<double>(a.samples()[i]));
        Acc& acc = per_trace[q];
        acc.wt += w * t;
        acc.w += w;
        acc.t += t;
        ++acc.n;
      }
      if (per_trace.size() < min_fit_points) continue;
      std::vector<HyperbolaPoint> pts;
      pts.reserve(per_trace.size());
      for (const auto& [q, acc] : per_trace) {
        const double t = acc.w > 0.0 ? acc.wt / acc.w : acc.t / static_cast<double>(acc.n);
        pts.push_back({s[q], t});
      }
      out.push_back(std::move(pts));
    }
  }
  if (out.empty()) {
    fail(ErrorKind::Domain, "no mask component spans at least " +
                                std::to_string(min_fit_points) + " traces");
  }
  return out;
}

HyperbolaFit fit_hyperbola(std::span<const HyperbolaPoint> points) {
  require(points.size() >= 3, "hyperbola fit needs at least 3 points");
  std::set<double> distinct;
  double mean_s = 0.0;
  for (const HyperbolaPoint& p : points) {
    require(std::isfinite(p.s) && std::isfinite(p.t), "hyperbola points must be finite");
    distinct.insert(p.s);
    mean_s += p.s;
  }
  if (distinct.size() < 3) {
    fail(ErrorKind::Domain, "degenerate geometry: need 3 distinct trajectory positions");
  }
  mean_s /= static_cast<double>(points.size());

  // t^2 = A u^2 + B u + K with u = s - mean(s), for conditioning.
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double u = points[static_cast<std::size_t>(r)].s - mean_s;
    const double t = points[static_cast<std::size_t>(r)].t;
    design(r, 0) = u * u;
    design(r, 1) = u;
    design(r, 2) = 1.0;
    rhs(r) = t * t;
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < 3) fail(ErrorKind::Domain, "degenerate geometry: rank-deficient fit");
  const Eigen::Vector3d coef = qr.solve(rhs);
  const double A = coef(0);
  const double B = coef(1);
  const double K = coef(2);
  if (!(A > 0.0)) fail(ErrorKind::Domain, "degenerate fit: non-positive curvature");
  const double u0 = -B / (2.0 * A);
  const double d2 = K / A - u0 * u0;
  if (!(d2 > 0.0)) fail(ErrorKind::Domain, "degenerate fit: negative apex depth squared");

  const double v = 2.0 / std::sqrt(A);
  const double d = std::sqrt(d2);
  const double s0 = mean_s + u0;
  double residual = 0.0;
  for (const HyperbolaPoint& p : points) {
    const double du = p.s - s0;
    const double e = p.t - (2.0 / v) * std::sqrt(du * du + d2);
    residual += e * e;
  }
  residual /= static_cast<double>(points.size());
  return {std::min(v, kSpeedOfLight), s0, d, residual};
}

double dielectric_from_velocity(double velocity) {
  require(std::isfinite(velocity) && velocity > 0.0, "velocity must be > 0");
  const double r = kSpeedOfLight / velocity;
  return std::max(1.0, r * r);
}

EstimateReport estimate_dielectric(const BScan& bscan, const SegmentationMask& mask,
                                   std::size_t min_fit_points) {
  const auto components = extract_hyperbola_points(bscan, mask, min_fit_points);
  EstimateReport report;
  std::string last_error;
  for (const auto& pts : components) {
    try {
      report.components.push_back(fit_hyperbola(pts));
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (report.components.empty()) {
    fail(ErrorKind::Domain, "no mask component could be fitted: " + last_error);
  }

  const double dt2 = bscan.dt() * bscan.dt();
  // Keeps a zero-residual component from taking infinite weight.
  const double eps = 1e-4 * dt2;
  double wsum = 0.0;
  double vsum = 0.0;
  double rsum = 0.0;
  for (const HyperbolaFit& f : report.components) {
    const double w = 1.0 / (f.residual + eps);
    wsum += w;
    vsum += w * f.velocity;
    rsum += f.residual;
  }
  const double v_mean = vsum / wsum;
  const double normalized_residual =
      rsum / static_cast<double>(report.components.size()) / dt2;
  report.estimate.value = dielectric_from_velocity(v_mean);
  report.estimate.confidence = 1.0 / (1.0 + normalized_residual);
  report.estimate.source = EstimateSource::HyperbolaFit;
  return report;
}

std::string report_to_json(const EstimateReport& report) {
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const HyperbolaFit& f : report.components) {
    comps.push_back({{"velocity", f.velocity},
                     {"apex_depth", f.apex_depth},
                     {"residual", f.residual}});
  }
  const nlohmann::ordered_json j = {
      {"dielectric", report.estimate.value},
      {"confidence", report.estimate.confidence},
      {"source", std::string(to_string(report.estimate.source))},
      {"components", comps}};
  return j.dump(2) + "\n";
}

EstimateReport report_from_json(const std::string& text) {
  EstimateReport report;
  try {
    const auto j = nlohmann::json::parse(text);
    report.estimate.value = j.at("dielectric").get<double>();
    report.estimate.confidence = j.value("confidence", 1.0);
    report.estimate.source =
        estimate_source_from_string(j.value("source", std::string("user-supplied")));
    if (j.contains("components")) {
      for (const auto& c : j.at("components")) {
        report.components.push_back({c.at("velocity").get<double>(), 0.0,
                                     c.value("apex_depth", 0.0), c.value("residual", 0.0)});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("invalid dielectric JSON: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::Format, std::string("invalid dielectric JSON: ") + e.what());
  }
  require(std::isfinite(report.estimate.value) && report.estimate.value >= 1.0,
          "dielectric must be >= 1", ErrorKind::Domain);
  require(report.estimate.confidence >= 0.0 && report.estimate.confidence <= 1.0,
          "confidence must be in [0, 1]", ErrorKind::Domain);
  return report;
}

}  // namespace gpr::dielectric
