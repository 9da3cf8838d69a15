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
#include "gpr/migration.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <tuple>

namespace gpr::migration {
namespace {

void check_velocity(double velocity) {
  require(std::isfinite(velocity) && velocity > 0.0 && velocity <= kSpeedOfLight,
          "velocity must be in (0, C]");
}

void check_options(const BackprojectOptions& opts) {
  require(opts.aperture_rad > 0.0 && opts.aperture_rad <= std::numbers::pi / 2.0,
          "aperture must be in (0, pi/2]");
  require(opts.amplitude_floor >= 0.0 && opts.amplitude_floor < 1.0,
          "amplitude floor must be in [0, 1)");
}

struct TraceWindow {
  std::size_t first = 0;
  std::size_t last = 0;
  bool empty = true;
  // Prefix sums over deposited amplitudes b_s (zero at or below the floor):
  // p0[s] = sum_{u<s} b_u, p1[s] = sum_{u<s} u * b_u.
  std::vector<double> p0;
  std::vector<double> p1;
};

TraceWindow trace_window(const AScan& ascan, const BackprojectOptions& opts) {
  const std::span<const float> a = ascan.samples();
  float peak = 0.0f;
  for (float v : a) peak = std::max(peak, std::abs(v));
  const double amp_floor = opts.amplitude_floor * static_cast<double>(peak);
  TraceWindow w;
  w.first = a.size();
  w.p0.assign(a.size() + 1, 0.0);
  w.p1.assign(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double amp = static_cast<double>(a[i]);
    double b = 0.0;
    if (std::abs(amp) > amp_floor) {
      w.first = std::min(w.first, i);
      w.last = i;
      b = opts.signed_accumulation ? amp : std::abs(amp);
    }
    w.p0[i + 1] = w.p0[i] + b;
    w.p1[i + 1] = w.p1[i] + static_cast<double>(i) * b;
  }
  w.empty = w.first == a.size();
  return w;
}

// Deposits one trace into depth planes [k_begin, k_end).
template <class T>
void backproject_impl(const AScan& ascan, const TraceWindow& win, const GridSpec& spec,
                      std::span<T> acc, double velocity, const BackprojectOptions& opts,
                      std::size_t k_begin, std::size_t k_end) {
  if (win.empty) return;
  const std::size_t first = win.first;
  const std::size_t last = win.last;
  const double* p0 = win.p0.data();
  const double* p1 = win.p1.data();

  const double dt = ascan.dt();
  const double t0 = ascan.t0();
  const double h = spec.max_spacing() / 2.0;
  const double half_v = velocity / 2.0;
  const double r_lo = std::max(0.0, half_v * ascan.time_at(first) - h);
  const double r_hi = half_v * ascan.time_at(last) + h;
  const double r_lo2 = r_lo * r_lo;
  const double r_hi2 = r_hi * r_hi;
  const double cos_ap = std::cos(opts.aperture_rad);
  // Sample index i has shell radius half_v * (t0 + i * dt).
  const double idx_per_m = 1.0 / (half_v * dt);
  const double idx_at_0 = t0 / dt;
  const double alpha = half_v * t0;
  const double beta_h = half_v * dt / h;

  const double ox = spec.origin[0] - ascan.pose().x();
  const double oy = spec.origin[1] - ascan.pose().y();

  for (std::size_t k = k_begin; k < k_end; ++k) {
    const double z = spec.origin[2] + static_cast<double>(k) * spec.spacing[2];
    if (z <= 0.0) continue;
    if (z > r_hi) break;
    const double z2 = z * z;
    for (std::size_t j = 0; j < spec.dims[1]; ++j) {
      const double dy = oy + static_cast<double>(j) * spec.spacing[1];
      const double yz2 = dy * dy + z2;
      if (yz2 > r_hi2) continue;
      T* row = acc.data() + spec.index(0, j, k);
      for (std::size_t i = 0; i < spec.dims[0]; ++i) {
        const double dx = ox + static_cast<double>(i) * spec.spacing[0];
        const double r2 = dx * dx + yz2;
        if (r2 > r_hi2 || r2 < r_lo2) continue;
        const double r = std::sqrt(r2);
        if (z < cos_ap * r) continue;

        const double lo = std::ceil((r - h) * idx_per_m - idx_at_0);
        const double hi = std::floor((r + h) * idx_per_m - idx_at_0);
        if (lo > static_cast<double>(last) || hi < static_cast<double>(first)) continue;
        const auto s_lo = static_cast<std::size_t>(std::max(lo, static_cast<double>(first)));
        const auto s_hi = static_cast<std::size_t>(std::min(hi, static_cast<double>(last)));

        // Shell radius of sample s is alpha + beta * s, so the hat weight
        // is linear in s on each side of the sample nearest r.
        const double c = std::floor(r * idx_per_m - idx_at_0);
        const double e = (r - alpha) / h;
        double sum = 0.0;
        if (c >= static_cast<double>(s_lo)) {
          const std::size_t m = std::min(s_hi, static_cast<std::size_t>(c));
          sum += (1.0 - e) * (p0[m + 1] - p0[s_lo]) + beta_h * (p1[m + 1] - p1[s_lo]);
        }
        if (c < static_cast<double>(s_hi)) {
          const std::size_t m =
              c < static_cast<double>(s_lo) ? s_lo : static_cast<std::size_t>(c) + 1;
          sum += (1.0 + e) * (p0[s_hi + 1] - p0[m]) - beta_h * (p1[s_hi + 1] - p1[m]);
        }
        if (sum != 0.0) row[i] += static_cast<T>(sum);
      }
    }
  }
}

template <class T>
void backproject_all(const AScan& ascan, const GridSpec& spec, std::span<T> acc,
                     double velocity, const BackprojectOptions& opts) {
  backproject_impl<T>(ascan, trace_window(ascan, opts), spec, acc, velocity, opts, 0,
                      spec.dims[2]);
}

bool canonical_less(const AScan* lhs, const AScan* rhs) {
  const auto key = [](const AScan* a) {
    return std::tuple(a->pose().x(), a->pose().y(), a->pose().theta(), a->dt(), a->t0(),
                      a->size());
  };
  const auto kl = key(lhs);
  const auto kr = key(rhs);
  if (kl != kr) return kl < kr;
  const auto sl = lhs->samples();
  const auto sr = rhs->samples();
  return std::lexicographical_compare(sl.begin(), sl.end(), sr.begin(), sr.end());
}

}  // namespace

double wave_velocity(double dielectric) {
  require(std::isfinite(dielectric) && dielectric >= 1.0, "dielectric must be >= 1",
          ErrorKind::Domain);
  return kSpeedOfLight / std::sqrt(dielectric);
}

double target_depth(double two_way_time_ns, double dielectric) {
  require(std::isfinite(two_way_time_ns) && two_way_time_ns >= 0.0,
          "two-way time must be >= 0", ErrorKind::Domain);
  return two_way_time_ns * wave_velocity(dielectric) / 2.0;
}

void backproject_ascan(const AScan& ascan, VoxelGrid& grid, double velocity,
                       const BackprojectOptions& opts) {
  check_velocity(velocity);
  check_options(opts);
  backproject_all<float>(ascan, grid.spec(), grid.values(), velocity, opts);
}

void backproject_ascan(const AScan& ascan, const GridSpec& spec,
                       std::span<double> accumulator, double velocity,
                       const BackprojectOptions& opts) {
  spec.validate();
  check_velocity(velocity);
  check_options(opts);
  require(accumulator.size() == spec.voxel_count(), "accumulator size does not match grid");
  backproject_all<double>(ascan, spec, accumulator, velocity, opts);
}

VoxelGrid migrate(std::span<const BScan> bscans, double dielectric, const GridSpec& spec,
                  const MigrateOptions& opts) {
  const double velocity = wave_velocity(dielectric);
  spec.validate();
  check_options(opts.backproject);

  std::vector<const AScan*> traces;
  for (const BScan& b : bscans) {
    for (const AScan& a : b.traces()) traces.push_back(&a);
  }
  require(!traces.empty(), "migration needs at least one trace");
  std::sort(traces.begin(), traces.end(), canonical_less);

  std::vector<TraceWindow> windows(traces.size());
  for (std::size_t t = 0; t < traces.size(); ++t) {
    windows[t] = trace_window(*traces[t], opts.backproject);
  }

  unsigned workers = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, spec.dims[2]));

  // Workers own whole depth planes and visit every trace in canonical order,
  // so each voxel sees the same sequence of additions for any worker count.
  const std::size_t n_vox = spec.voxel_count();
  std::vector<double> total(n_vox, 0.0);
  std::atomic<std::size_t> next_plane{0};
  auto run = [&] {
    for (std::size_t k = next_plane++; k < spec.dims[2]; k = next_plane++) {
      for (std::size_t t = 0; t < traces.size(); ++t) {
        backproject_impl<double>(*traces[t], windows[t], spec, std::span<double>(total),
                                 velocity, opts.backproject, k, k + 1);
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  }

  std::vector<float> values(n_vox);
  for (std::size_t v = 0; v < n_vox; ++v) {
    values[v] = static_cast<float>(opts.backproject.signed_accumulation ? std::abs(total[v])
                                                                        : total[v]);
  }
  return VoxelGrid(spec, std::move(values));
}

std::vector<Peak> locate_peaks(const VoxelGrid& grid, double threshold_fraction,
                               double min_separation) {
  require(threshold_fraction >= 0.0 && threshold_fraction <= 1.0,
          "threshold fraction must be in [0, 1]");
  require(min_separation >= 0.0, "min separation must be >= 0");
  const GridSpec& s = grid.spec();
  const auto values = grid.values();
  if (values.empty()) return {};
  const float vmax = values[grid.argmax()];
  if (!(vmax > 0.0f)) return {};
  const double cutoff = threshold_fraction * static_cast<double>(vmax);

  auto is_local_max = [&](std::size_t i, std::size_t j, std::size_t k, float v) {
    for (int dk = -1; dk <= 1; ++dk) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          const auto ni = static_cast<std::ptrdiff_t>(i) + di;
          const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
          const auto nk = static_cast<std::ptrdiff_t>(k) + dk;
          if (ni < 0 || nj < 0 || nk < 0 || ni >= static_cast<std::ptrdiff_t>(s.dims[0]) ||
              nj >= static_cast<std::ptrdiff_t>(s.dims[1]) ||
              nk >= static_cast<std::ptrdiff_t>(s.dims[2])) {
            continue;
          }
          if (grid.at(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj),
                      static_cast<std::size_t>(nk)) > v) {
            return false;
          }
        }
      }
    }
    return true;
  };

  std::vector<Peak> candidates;
  for (std::size_t k = 0; k < s.dims[2]; ++k) {
    for (std::size_t j = 0; j < s.dims[1]; ++j) {
      for (std::size_t i = 0; i < s.dims[0]; ++i) {
        const float v = grid.at(i, j, k);
        if (!(v > 0.0f) || static_cast<double>(v) < cutoff) continue;
        if (is_local_max(i, j, k, v)) {
          candidates.push_back({s.position(i, j, k), {i, j, k}, static_cast<double>(v)});
        }
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
    if (a.energy != b.energy) return a.energy > b.energy;
    return a.index < b.index;
  });

  std::vector<Peak> accepted;
  for (const Peak& c : candidates) {
    const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](const Peak& p) {
      const double dx = c.position[0] - p.position[0];
      const double dy = c.position[1] - p.position[1];
      const double dz = c.position[2] - p.position[2];
      return std::sqrt(dx * dx + dy * dy + dz * dz) <= min_separation;
    });
    if (clear) accepted.push_back(c);
  }
  return accepted;
}

}  // namespace gpr::migration
