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
#include "gpr/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpr/io.hpp"

namespace gpr::denoise {
namespace {

// Linear interpolation between closest ranks, same as numpy's default.
double percentile_of(std::vector<float> values, double pct) {
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return static_cast<double>(values[lo]) +
         frac * (static_cast<double>(values[hi]) - static_cast<double>(values[lo]));
}

}  // namespace

std::vector<std::vector<std::size_t>> connected_components(const SegmentationMask& mask) {
  const std::size_t nq = mask.n_traces();
  const std::size_t ns = mask.n_samples();
  std::vector<std::uint8_t> seen(nq * ns, 0);
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < nq * ns; ++start) {
    if (!mask.cells()[start] || seen[start]) continue;
    std::vector<std::size_t> comp;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      comp.push_back(c);
      const auto q = static_cast<std::ptrdiff_t>(c / ns);
      const auto i = static_cast<std::ptrdiff_t>(c % ns);
      for (std::ptrdiff_t dq = -1; dq <= 1; ++dq) {
        for (std::ptrdiff_t di = -1; di <= 1; ++di) {
          const std::ptrdiff_t nqi = q + dq;
          const std::ptrdiff_t nii = i + di;
          if (nqi < 0 || nii < 0 || nqi >= static_cast<std::ptrdiff_t>(nq) ||
              nii >= static_cast<std::ptrdiff_t>(ns)) {
            continue;
          }
          const auto n = static_cast<std::size_t>(nqi) * ns + static_cast<std::size_t>(nii);
          if (mask.cells()[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

SegmentationMask segment_baseline(const BScan& bscan, double energy_percentile,
                                  std::size_t min_component_cells) {
  require(energy_percentile >= 0.0 && energy_percentile <= 100.0,
          "energy percentile must be in [0, 100]");
  const std::size_t nq = bscan.n_traces();
  const std::size_t ns = bscan.n_samples();
  SegmentationMask mask(nq, ns);

  std::vector<float> mags;
  mags.reserve(nq * ns);
  for (const AScan& a : bscan.traces()) {
    for (float v : a.samples()) mags.push_back(std::abs(v));
  }
  if (*std::max_element(mags.begin(), mags.end()) == 0.0f) return mask;

  const double threshold = percentile_of(mags, energy_percentile);
  for (std::size_t c = 0; c < mags.size(); ++c) {
    if (static_cast<double>(mags[c]) >= threshold) mask.set(c / ns, c % ns, true);
  }
  if (min_component_cells > 1) {
    for (const auto& comp : connected_components(mask)) {
      if (comp.size() >= min_component_cells) continue;
      for (std::size_t c : comp) mask.set(c / ns, c % ns, false);
    }
  }
  return mask;
}

BScan apply_mask(const BScan& bscan, const SegmentationMask& mask) {
  if (!mask.matches(bscan)) {
    fail(ErrorKind::Domain,
         "mask dimensions " + std::to_string(mask.n_traces()) + "x" +
             std::to_string(mask.n_samples()) + " do not match B-scan " +
             std::to_string(bscan.n_traces()) + "x" + std::to_string(bscan.n_samples()));
  }
  std::vector<AScan> out;
  out.reserve(bscan.n_traces());
  for (std::size_t q = 0; q < bscan.n_traces(); ++q) {
    const AScan& a = bscan.trace(q);
    std::vector<float> s(a.samples().begin(), a.samples().end());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!mask.at(q, i)) s[i] = 0.0f;
    }
    out.push_back(a.with_samples(std::move(s)));
  }
  return BScan(std::move(out));
}

SegmentationMask load_external_mask(const std::filesystem::path& path) {
  return io::load_mask(path);
}

double energy(const BScan& bscan) {
  double e = 0.0;
  for (const AScan& a : bscan.traces()) {
    for (float v : a.samples()) e += static_cast<double>(v) * static_cast<double>(v);
  }
  return e;
}

}  // namespace gpr::denoise
