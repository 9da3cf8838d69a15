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
#include "gpr/gpr.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "gpr/denoise.hpp"
#include "gpr/dielectric.hpp"
#include "gpr/io.hpp"
#include "gpr/metrics.hpp"
#include "gpr/migration.hpp"
#include "gpr/synthetic.hpp"
#include "gpr/trajectory.hpp"

struct gpr_scene {
  gpr::synth::SceneSpec value;
};
struct gpr_bscan {
  gpr::BScan value;
};
struct gpr_mask {
  gpr::SegmentationMask value;
};
struct gpr_grid {
  gpr::VoxelGrid value;
};
struct gpr_estimate {
  gpr::dielectric::EstimateReport value;
};

namespace {

thread_local std::string g_last_error;

gpr_status set_error(gpr_status status, const char* what) {
  g_last_error = what;
  return status;
}

gpr_status to_status(gpr::ErrorKind kind) {
  switch (kind) {
    case gpr::ErrorKind::InvalidArgument: return GPR_ERR_INVALID_ARGUMENT;
    case gpr::ErrorKind::Domain: return GPR_ERR_DOMAIN;
    case gpr::ErrorKind::Io: return GPR_ERR_IO;
    case gpr::ErrorKind::Format: return GPR_ERR_FORMAT;
  }
  return GPR_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread's message.
template <class F>
gpr_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return GPR_OK;
  } catch (const gpr::Error& e) {
    return set_error(to_status(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(GPR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(GPR_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(GPR_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) gpr::fail(gpr::ErrorKind::InvalidArgument, std::string(name) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gpr_pose to_c(const gpr::Pose& p) { return {p.x(), p.y(), p.theta()}; }

void copy_poses(const std::vector<gpr::Pose>& poses, gpr_pose* out) {
  for (std::size_t q = 0; q < poses.size(); ++q) out[q] = to_c(poses[q]);
}

gpr::GridSpec from_c(const gpr_grid_spec& s) {
  gpr::GridSpec spec;
  for (int d = 0; d < 3; ++d) {
    spec.origin[d] = s.origin[d];
    spec.spacing[d] = s.spacing[d];
    spec.dims[d] = s.dims[d];
  }
  return spec;
}

gpr_metrics to_c(const gpr::metrics::ImageMetrics& m) {
  return {m.e_distance, m.mse, m.snr_db, m.ssim};
}

}  // namespace

extern "C" {

const char* gpr_version(void) { return "1.0.0"; }

const char* gpr_last_error(void) { return g_last_error.c_str(); }

void gpr_string_free(char* s) { std::free(s); }

gpr_file_kind gpr_file_kind_of(const char* path) {
  if (path == nullptr) return GPR_FILE_UNKNOWN;
  try {
    switch (gpr::io::sniff(path)) {
      case gpr::io::FileKind::BScan: return GPR_FILE_BSCAN;
      case gpr::io::FileKind::Mask: return GPR_FILE_MASK;
      case gpr::io::FileKind::Grid: return GPR_FILE_GRID;
      case gpr::io::FileKind::Unknown: break;
    }
  } catch (...) {
  }
  return GPR_FILE_UNKNOWN;
}

void gpr_sampling_default(gpr_sampling* out) {
  if (out == nullptr) return;
  const gpr::synth::Sampling s;
  *out = {s.n_samples, s.dt_ns, s.t0_ns};
}

void gpr_migrate_options_default(gpr_migrate_options* out) {
  if (out == nullptr) return;
  const gpr::migration::MigrateOptions o;
  *out = {o.backproject.aperture_rad, o.backproject.amplitude_floor,
          o.backproject.signed_accumulation ? 1 : 0, o.threads};
}

double gpr_speed_of_light(void) { return gpr::kSpeedOfLight; }

gpr_status gpr_wave_velocity(double dielectric, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = gpr::migration::wave_velocity(dielectric);
  });
}

gpr_status gpr_target_depth(double two_way_time_ns, double dielectric, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = gpr::migration::target_depth(two_way_time_ns, dielectric);
  });
}

gpr_status gpr_scene_default(gpr_scene** out) {
  return guarded([&] {
    need(out, "out");
    *out = new gpr_scene{gpr::synth::default_scene()};
  });
}

gpr_status gpr_scene_from_json(const char* json, gpr_scene** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new gpr_scene{gpr::synth::scene_from_json(json)};
  });
}

gpr_status gpr_scene_load(const char* path, gpr_scene** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new gpr_scene{gpr::synth::scene_from_json(gpr::io::read_text(path))};
  });
}

gpr_status gpr_scene_to_json(const gpr_scene* scene, char** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = dup_string(gpr::synth::scene_to_json(scene->value));
  });
}

gpr_status gpr_scene_noise_free(const gpr_scene* scene, gpr_scene** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = new gpr_scene{scene->value.noise_free()};
  });
}

gpr_status gpr_scene_dielectric(const gpr_scene* scene, double* out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = scene->value.dielectric;
  });
}

gpr_status gpr_scene_target_count(const gpr_scene* scene, size_t* out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = scene->value.targets.size();
  });
}

gpr_status gpr_scene_target_position(const gpr_scene* scene, size_t index, double out[3]) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    gpr::require(index < scene->value.targets.size(), "target index out of range");
    const auto& p = scene->value.targets[index].position;
    for (int d = 0; d < 3; ++d) out[d] = p[d];
  });
}

void gpr_scene_free(gpr_scene* scene) { delete scene; }

gpr_status gpr_trajectory_line(double x0, double y0, double x1, double y1, size_t n,
                               gpr_pose* out) {
  return guarded([&] {
    const auto poses = gpr::trajectory::line(x0, y0, x1, y1, n);
    need(out, "out");
    copy_poses(poses, out);
  });
}

gpr_status gpr_trajectory_zigzag(double x0, double y0, double x1, double y1, size_t rows,
                                 size_t n_per_row, gpr_pose* out) {
  return guarded([&] {
    const auto poses = gpr::trajectory::zigzag(x0, y0, x1, y1, rows, n_per_row);
    need(out, "out");
    copy_poses(poses, out);
  });
}

gpr_status gpr_trajectory_parse_csv(const char* text, gpr_pose** out, size_t* count) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    need(count, "count");
    const auto poses = gpr::trajectory::parse_csv(text);
    auto* buf = static_cast<gpr_pose*>(std::malloc(std::max<std::size_t>(1, poses.size()) *
                                                   sizeof(gpr_pose)));
    if (buf == nullptr) throw std::bad_alloc();
    copy_poses(poses, buf);
    *out = buf;
    *count = poses.size();
  });
}

void gpr_poses_free(gpr_pose* poses) { std::free(poses); }

gpr_status gpr_simulate_bscan(const gpr_scene* scene, const gpr_pose* poses, size_t n_poses,
                              const gpr_sampling* sampling, uint64_t seed, gpr_bscan** out) {
  return guarded([&] {
    need(scene, "scene");
    need(poses, "poses");
    need(out, "out");
    std::vector<gpr::Pose> traj;
    traj.reserve(n_poses);
    for (std::size_t q = 0; q < n_poses; ++q) {
      traj.emplace_back(poses[q].x, poses[q].y, poses[q].theta);
    }
    gpr::synth::Sampling s;
    if (sampling != nullptr) s = {sampling->n_samples, sampling->dt_ns, sampling->t0_ns};
    *out = new gpr_bscan{gpr::synth::simulate_bscan(scene->value, traj, s, seed)};
  });
}

gpr_status gpr_bscan_create(size_t n_traces, size_t n_samples, double dt_ns, double t0_ns,
                            const gpr_pose* poses, const float* samples, gpr_bscan** out) {
  return guarded([&] {
    need(poses, "poses");
    need(samples, "samples");
    need(out, "out");
    std::vector<gpr::AScan> traces;
    traces.reserve(n_traces);
    for (std::size_t q = 0; q < n_traces; ++q) {
      const float* row = samples + q * n_samples;
      traces.emplace_back(std::vector<float>(row, row + n_samples), dt_ns, t0_ns,
                          gpr::Pose(poses[q].x, poses[q].y, poses[q].theta));
    }
    *out = new gpr_bscan{gpr::BScan(std::move(traces))};
  });
}

gpr_status gpr_bscan_load(const char* path, gpr_bscan** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new gpr_bscan{gpr::io::load_bscan(path)};
  });
}

gpr_status gpr_bscan_save(const gpr_bscan* bscan, const char* path) {
  return guarded([&] {
    need(bscan, "bscan");
    need(path, "path");
    gpr::io::save_bscan(bscan->value, path);
  });
}

gpr_status gpr_bscan_dims(const gpr_bscan* bscan, size_t* n_traces, size_t* n_samples) {
  return guarded([&] {
    need(bscan, "bscan");
    if (n_traces != nullptr) *n_traces = bscan->value.n_traces();
    if (n_samples != nullptr) *n_samples = bscan->value.n_samples();
  });
}

gpr_status gpr_bscan_timing(const gpr_bscan* bscan, double* dt_ns, double* t0_ns) {
  return guarded([&] {
    need(bscan, "bscan");
    if (dt_ns != nullptr) *dt_ns = bscan->value.dt();
    if (t0_ns != nullptr) *t0_ns = bscan->value.t0();
  });
}

gpr_status gpr_bscan_pose(const gpr_bscan* bscan, size_t trace, gpr_pose* out) {
  return guarded([&] {
    need(bscan, "bscan");
    need(out, "out");
    gpr::require(trace < bscan->value.n_traces(), "trace index out of range");
    *out = to_c(bscan->value.trace(trace).pose());
  });
}

gpr_status gpr_bscan_samples(const gpr_bscan* bscan, size_t trace, const float** out) {
  return guarded([&] {
    need(bscan, "bscan");
    need(out, "out");
    gpr::require(trace < bscan->value.n_traces(), "trace index out of range");
    *out = bscan->value.trace(trace).samples().data();
  });
}

gpr_status gpr_bscan_energy(const gpr_bscan* bscan, double* out) {
  return guarded([&] {
    need(bscan, "bscan");
    need(out, "out");
    *out = gpr::denoise::energy(bscan->value);
  });
}

void gpr_bscan_free(gpr_bscan* bscan) { delete bscan; }

gpr_status gpr_mask_ground_truth(const gpr_scene* scene, const gpr_bscan* bscan,
                                 double half_width_ns, gpr_mask** out) {
  return guarded([&] {
    need(scene, "scene");
    need(bscan, "bscan");
    need(out, "out");
    const double hw = half_width_ns > 0.0 ? half_width_ns
                                          : gpr::synth::default_mask_half_width(scene->value);
    *out = new gpr_mask{gpr::synth::ground_truth_mask(scene->value, bscan->value, hw)};
  });
}

gpr_status gpr_segment_baseline(const gpr_bscan* bscan, double energy_percentile,
                                size_t min_component_cells, gpr_mask** out) {
  return guarded([&] {
    need(bscan, "bscan");
    need(out, "out");
    *out = new gpr_mask{
        gpr::denoise::segment_baseline(bscan->value, energy_percentile, min_component_cells)};
  });
}

gpr_status gpr_apply_mask(const gpr_bscan* bscan, const gpr_mask* mask, gpr_bscan** out) {
  return guarded([&] {
    need(bscan, "bscan");
    need(mask, "mask");
    need(out, "out");
    *out = new gpr_bscan{gpr::denoise::apply_mask(bscan->value, mask->value)};
  });
}

gpr_status gpr_mask_load(const char* path, gpr_mask** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new gpr_mask{gpr::denoise::load_external_mask(path)};
  });
}

gpr_status gpr_mask_save(const gpr_mask* mask, const char* path) {
  return guarded([&] {
    need(mask, "mask");
    need(path, "path");
    gpr::io::save_mask(mask->value, path);
  });
}

gpr_status gpr_mask_dims(const gpr_mask* mask, size_t* n_traces, size_t* n_samples) {
  return guarded([&] {
    need(mask, "mask");
    if (n_traces != nullptr) *n_traces = mask->value.n_traces();
    if (n_samples != nullptr) *n_samples = mask->value.n_samples();
  });
}

gpr_status gpr_mask_cells(const gpr_mask* mask, const uint8_t** out) {
  return guarded([&] {
    need(mask, "mask");
    need(out, "out");
    *out = mask->value.cells().data();
  });
}

void gpr_mask_free(gpr_mask* mask) { delete mask; }

gpr_status gpr_estimate_dielectric(const gpr_bscan* bscan, const gpr_mask* mask,
                                   size_t min_fit_points, gpr_estimate** out) {
  return guarded([&] {
    need(bscan, "bscan");
    need(mask, "mask");
    need(out, "out");
    *out = new gpr_estimate{
        gpr::dielectric::estimate_dielectric(bscan->value, mask->value, min_fit_points)};
  });
}

gpr_status gpr_estimate_from_json(const char* json, gpr_estimate** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new gpr_estimate{gpr::dielectric::report_from_json(json)};
  });
}

gpr_status gpr_estimate_to_json(const gpr_estimate* est, char** out) {
  return guarded([&] {
    need(est, "estimate");
    need(out, "out");
    *out = dup_string(gpr::dielectric::report_to_json(est->value));
  });
}

gpr_status gpr_estimate_value(const gpr_estimate* est, double* out) {
  return guarded([&] {
    need(est, "estimate");
    need(out, "out");
    *out = est->value.estimate.value;
  });
}

gpr_status gpr_estimate_confidence(const gpr_estimate* est, double* out) {
  return guarded([&] {
    need(est, "estimate");
    need(out, "out");
    *out = est->value.estimate.confidence;
  });
}

gpr_status gpr_estimate_source(const gpr_estimate* est, const char** out) {
  return guarded([&] {
    need(est, "estimate");
    need(out, "out");
    // to_string views static literals, so data() is NUL-terminated.
    *out = gpr::to_string(est->value.estimate.source).data();
  });
}

gpr_status gpr_estimate_component_count(const gpr_estimate* est, size_t* out) {
  return guarded([&] {
    need(est, "estimate");
    need(out, "out");
    *out = est->value.components.size();
  });
}

gpr_status gpr_estimate_component(const gpr_estimate* est, size_t index, gpr_component* out) {
  return guarded([&] {
    need(est, "estimate");
    need(out, "out");
    gpr::require(index < est->value.components.size(), "component index out of range");
    const auto& c = est->value.components[index];
    *out = {c.velocity, c.apex_trace_position, c.apex_depth, c.residual};
  });
}

void gpr_estimate_free(gpr_estimate* est) { delete est; }

gpr_status gpr_migrate(const gpr_bscan* const* bscans, size_t n_bscans, double dielectric,
                       const gpr_grid_spec* spec, const gpr_migrate_options* options,
                       gpr_grid** out) {
  return guarded([&] {
    need(bscans, "bscans");
    need(spec, "spec");
    need(out, "out");
    std::vector<gpr::BScan> inputs;
    inputs.reserve(n_bscans);
    for (std::size_t b = 0; b < n_bscans; ++b) {
      need(bscans[b], "bscans[i]");
      inputs.push_back(bscans[b]->value);
    }
    gpr::migration::MigrateOptions opts;
    if (options != nullptr) {
      opts.backproject.aperture_rad = options->aperture_rad;
      opts.backproject.amplitude_floor = options->amplitude_floor;
      opts.backproject.signed_accumulation = options->signed_accumulation != 0;
      opts.threads = options->threads;
    }
    *out = new gpr_grid{gpr::migration::migrate(inputs, dielectric, from_c(*spec), opts)};
  });
}

gpr_status gpr_grid_load(const char* path, gpr_grid** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new gpr_grid{gpr::io::load_grid(path)};
  });
}

gpr_status gpr_grid_save(const gpr_grid* grid, const char* path) {
  return guarded([&] {
    need(grid, "grid");
    need(path, "path");
    gpr::io::save_grid(grid->value, path);
  });
}

gpr_status gpr_grid_spec_of(const gpr_grid* grid, gpr_grid_spec* out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    const gpr::GridSpec& s = grid->value.spec();
    for (int d = 0; d < 3; ++d) {
      out->origin[d] = s.origin[d];
      out->spacing[d] = s.spacing[d];
      out->dims[d] = s.dims[d];
    }
  });
}

gpr_status gpr_grid_values(const gpr_grid* grid, const float** out, size_t* count) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "out");
    *out = grid->value.values().data();
    if (count != nullptr) *count = grid->value.values().size();
  });
}

void gpr_grid_free(gpr_grid* grid) { delete grid; }

gpr_status gpr_locate_peaks(const gpr_grid* grid, double threshold_fraction,
                            double min_separation, gpr_peak* out, size_t capacity,
                            size_t* found) {
  return guarded([&] {
    need(grid, "grid");
    need(found, "found");
    if (capacity > 0) need(out, "out");
    const auto peaks =
        gpr::migration::locate_peaks(grid->value, threshold_fraction, min_separation);
    for (std::size_t p = 0; p < peaks.size() && p < capacity; ++p) {
      for (int d = 0; d < 3; ++d) {
        out[p].position[d] = peaks[p].position[d];
        out[p].index[d] = peaks[p].index[d];
      }
      out[p].energy = peaks[p].energy;
    }
    *found = peaks.size();
  });
}

gpr_status gpr_evaluate_grids(const gpr_grid* reference, const gpr_grid* test,
                              gpr_metrics* out) {
  return guarded([&] {
    need(reference, "reference");
    need(test, "test");
    need(out, "out");
    *out = to_c(gpr::metrics::evaluate(reference->value, test->value));
  });
}

gpr_status gpr_evaluate_bscans(const gpr_bscan* reference, const gpr_bscan* test,
                               gpr_metrics* out) {
  return guarded([&] {
    need(reference, "reference");
    need(test, "test");
    need(out, "out");
    *out = to_c(gpr::metrics::evaluate(reference->value, test->value));
  });
}

gpr_status gpr_evaluate_arrays(const float* reference, const float* test, const size_t* shape,
                               size_t rank, gpr_metrics* out) {
  return guarded([&] {
    need(reference, "reference");
    need(test, "test");
    need(shape, "shape");
    need(out, "out");
    gpr::require(rank >= 1 && rank <= 3, "rank must be 1 to 3");
    gpr::metrics::Shape s(shape, shape + rank);
    std::size_t n = 1;
    for (std::size_t e : s) n *= e;
    *out = to_c(gpr::metrics::evaluate({reference, n}, {test, n}, s));
  });
}

gpr_status gpr_generate_dataset(const char* config_json, const char* out_dir, uint64_t seed,
                                size_t* rows) {
  return guarded([&] {
    need(out_dir, "out_dir");
    const gpr::synth::DatasetConfig cfg =
        config_json != nullptr ? gpr::synth::dataset_config_from_json(config_json)
                               : gpr::synth::DatasetConfig{};
    const auto manifest = gpr::synth::generate_dataset(cfg, out_dir, seed);
    if (rows != nullptr) *rows = manifest.size();
  });
}

}  // extern "C"
