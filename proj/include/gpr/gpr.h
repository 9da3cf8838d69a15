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
#ifndef GPR_GPR_H_
#define GPR_GPR_H_

/*
 * C interface to the gprmap toolkit: synthetic GPR scenes, pose-tagged
 * B-scans, mask-based noise removal, hyperbola-fit dielectric estimation,
 * back-projection migration and image metrics.
 *
 * Conventions:
 *   - Units are meters, nanoseconds and GHz.
 *   - Every fallible call returns gpr_status. On failure the out-parameters
 *     are untouched and gpr_last_error() describes the failure (per thread).
 *   - Objects are opaque handles released with their *_free function.
 *     Passing NULL to a *_free function is a no-op.
 *   - Strings returned through char** are owned by the caller and released
 *     with gpr_string_free.
 *   - Pointers returned by *_samples, *_cells and *_values stay valid until
 *     the owning handle is freed.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(GPR_BUILDING_LIBRARY)
#define GPR_API __attribute__((visibility("default")))
#else
#define GPR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpr_status {
  GPR_OK = 0,
  GPR_ERR_INVALID_ARGUMENT = 1, /* bad parameter value or usage */
  GPR_ERR_DOMAIN = 2,           /* well-formed input outside the model */
  GPR_ERR_IO = 3,               /* file could not be opened, read or written */
  GPR_ERR_FORMAT = 4,           /* malformed file or JSON contents */
  GPR_ERR_INTERNAL = 5          /* unexpected failure, e.g. out of memory */
} gpr_status;

typedef enum gpr_file_kind {
  GPR_FILE_UNKNOWN = 0,
  GPR_FILE_BSCAN = 1, /* GPRB */
  GPR_FILE_MASK = 2,  /* GPRM */
  GPR_FILE_GRID = 3   /* GPRV */
} gpr_file_kind;

typedef struct gpr_scene gpr_scene;
typedef struct gpr_bscan gpr_bscan;
typedef struct gpr_mask gpr_mask;
typedef struct gpr_grid gpr_grid;
typedef struct gpr_estimate gpr_estimate;

typedef struct gpr_pose {
  double x;
  double y;
  double theta; /* heading, radians */
} gpr_pose;

typedef struct gpr_sampling {
  size_t n_samples;
  double dt_ns;
  double t0_ns;
} gpr_sampling;

/* Voxel (i, j, k) sits at origin + (i, j, k) * spacing; axis 2 is depth. */
typedef struct gpr_grid_spec {
  double origin[3];
  double spacing[3];
  size_t dims[3];
} gpr_grid_spec;

typedef struct gpr_migrate_options {
  double aperture_rad;     /* (0, pi/2] */
  double amplitude_floor;  /* fraction of each trace's peak, [0, 1) */
  int signed_accumulation; /* nonzero: deposit signed amplitude */
  unsigned threads;        /* 0 = hardware concurrency */
} gpr_migrate_options;

typedef struct gpr_peak {
  double position[3];
  size_t index[3];
  double energy;
} gpr_peak;

typedef struct gpr_component {
  double velocity;            /* m/ns */
  double apex_trace_position; /* m along the trajectory */
  double apex_depth;          /* m */
  double residual;            /* mean squared time residual, ns^2 */
} gpr_component;

typedef struct gpr_metrics {
  double e_distance;
  double mse;
  double snr_db; /* +inf when test equals reference */
  double ssim;
} gpr_metrics;

/* ---- errors, strings, defaults ---------------------------------------- */

GPR_API const char* gpr_version(void);
/* Message of the last failed call on this thread; "" if none. */
GPR_API const char* gpr_last_error(void);
GPR_API void gpr_string_free(char* s);

/* Identifies a binary file by its magic; UNKNOWN if unreadable or foreign. */
GPR_API gpr_file_kind gpr_file_kind_of(const char* path);

GPR_API void gpr_sampling_default(gpr_sampling* out);
GPR_API void gpr_migrate_options_default(gpr_migrate_options* out);
GPR_API double gpr_speed_of_light(void);

/* ---- propagation ------------------------------------------------------- */

GPR_API gpr_status gpr_wave_velocity(double dielectric, double* out);
GPR_API gpr_status gpr_target_depth(double two_way_time_ns, double dielectric, double* out);

/* ---- scenes ------------------------------------------------------------ */

GPR_API gpr_status gpr_scene_default(gpr_scene** out);
GPR_API gpr_status gpr_scene_from_json(const char* json, gpr_scene** out);
GPR_API gpr_status gpr_scene_load(const char* path, gpr_scene** out);
GPR_API gpr_status gpr_scene_to_json(const gpr_scene* scene, char** out);
/* Same geometry with noise and weak echoes off. */
GPR_API gpr_status gpr_scene_noise_free(const gpr_scene* scene, gpr_scene** out);
GPR_API gpr_status gpr_scene_dielectric(const gpr_scene* scene, double* out);
GPR_API gpr_status gpr_scene_target_count(const gpr_scene* scene, size_t* out);
/* Target center as (x, y, depth). */
GPR_API gpr_status gpr_scene_target_position(const gpr_scene* scene, size_t index,
                                             double out[3]);
GPR_API void gpr_scene_free(gpr_scene* scene);

/* ---- trajectories ------------------------------------------------------ */

/* `out` must hold n poses. */
GPR_API gpr_status gpr_trajectory_line(double x0, double y0, double x1, double y1, size_t n,
                                       gpr_pose* out);
/* `out` must hold rows * n_per_row poses. */
GPR_API gpr_status gpr_trajectory_zigzag(double x0, double y0, double x1, double y1,
                                         size_t rows, size_t n_per_row, gpr_pose* out);
/* Parses x,y,theta rows; release *out with gpr_poses_free. */
GPR_API gpr_status gpr_trajectory_parse_csv(const char* text, gpr_pose** out, size_t* count);
GPR_API void gpr_poses_free(gpr_pose* poses);

/* ---- B-scans ----------------------------------------------------------- */

GPR_API gpr_status gpr_simulate_bscan(const gpr_scene* scene, const gpr_pose* poses,
                                      size_t n_poses, const gpr_sampling* sampling,
                                      uint64_t seed, gpr_bscan** out);
/* samples holds n_traces * n_samples values, trace-major. */
GPR_API gpr_status gpr_bscan_create(size_t n_traces, size_t n_samples, double dt_ns,
                                    double t0_ns, const gpr_pose* poses, const float* samples,
                                    gpr_bscan** out);
GPR_API gpr_status gpr_bscan_load(const char* path, gpr_bscan** out);
GPR_API gpr_status gpr_bscan_save(const gpr_bscan* bscan, const char* path);
GPR_API gpr_status gpr_bscan_dims(const gpr_bscan* bscan, size_t* n_traces, size_t* n_samples);
GPR_API gpr_status gpr_bscan_timing(const gpr_bscan* bscan, double* dt_ns, double* t0_ns);
GPR_API gpr_status gpr_bscan_pose(const gpr_bscan* bscan, size_t trace, gpr_pose* out);
GPR_API gpr_status gpr_bscan_samples(const gpr_bscan* bscan, size_t trace, const float** out);
GPR_API gpr_status gpr_bscan_energy(const gpr_bscan* bscan, double* out);
GPR_API void gpr_bscan_free(gpr_bscan* bscan);

/* ---- masks and noise removal ------------------------------------------- */

/* half_width_ns <= 0 selects the default (0.75 wavelet periods). */
GPR_API gpr_status gpr_mask_ground_truth(const gpr_scene* scene, const gpr_bscan* bscan,
                                         double half_width_ns, gpr_mask** out);
GPR_API gpr_status gpr_segment_baseline(const gpr_bscan* bscan, double energy_percentile,
                                        size_t min_component_cells, gpr_mask** out);
GPR_API gpr_status gpr_apply_mask(const gpr_bscan* bscan, const gpr_mask* mask,
                                  gpr_bscan** out);
GPR_API gpr_status gpr_mask_load(const char* path, gpr_mask** out);
GPR_API gpr_status gpr_mask_save(const gpr_mask* mask, const char* path);
GPR_API gpr_status gpr_mask_dims(const gpr_mask* mask, size_t* n_traces, size_t* n_samples);
GPR_API gpr_status gpr_mask_cells(const gpr_mask* mask, const uint8_t** out);
GPR_API void gpr_mask_free(gpr_mask* mask);

/* ---- dielectric estimation --------------------------------------------- */

GPR_API gpr_status gpr_estimate_dielectric(const gpr_bscan* bscan, const gpr_mask* mask,
                                           size_t min_fit_points, gpr_estimate** out);
/* Reads a dielectric JSON document, from this library or another producer. */
GPR_API gpr_status gpr_estimate_from_json(const char* json, gpr_estimate** out);
GPR_API gpr_status gpr_estimate_to_json(const gpr_estimate* est, char** out);
GPR_API gpr_status gpr_estimate_value(const gpr_estimate* est, double* out);
GPR_API gpr_status gpr_estimate_confidence(const gpr_estimate* est, double* out);
/* "hyperbola-fit", "learned" or "user-supplied"; static storage. */
GPR_API gpr_status gpr_estimate_source(const gpr_estimate* est, const char** out);
GPR_API gpr_status gpr_estimate_component_count(const gpr_estimate* est, size_t* out);
GPR_API gpr_status gpr_estimate_component(const gpr_estimate* est, size_t index,
                                          gpr_component* out);
GPR_API void gpr_estimate_free(gpr_estimate* est);

/* ---- migration --------------------------------------------------------- */

/* options may be NULL for defaults. */
GPR_API gpr_status gpr_migrate(const gpr_bscan* const* bscans, size_t n_bscans,
                               double dielectric, const gpr_grid_spec* spec,
                               const gpr_migrate_options* options, gpr_grid** out);
GPR_API gpr_status gpr_grid_load(const char* path, gpr_grid** out);
GPR_API gpr_status gpr_grid_save(const gpr_grid* grid, const char* path);
GPR_API gpr_status gpr_grid_spec_of(const gpr_grid* grid, gpr_grid_spec* out);
GPR_API gpr_status gpr_grid_values(const gpr_grid* grid, const float** out, size_t* count);
GPR_API void gpr_grid_free(gpr_grid* grid);

/*
 * Writes up to `capacity` peaks, strongest first, and sets *found to the
 * total number located. `out` may be NULL when capacity is 0.
 */
GPR_API gpr_status gpr_locate_peaks(const gpr_grid* grid, double threshold_fraction,
                                    double min_separation, gpr_peak* out, size_t capacity,
                                    size_t* found);

/* ---- metrics ----------------------------------------------------------- */

GPR_API gpr_status gpr_evaluate_grids(const gpr_grid* reference, const gpr_grid* test,
                                      gpr_metrics* out);
/* B-scans are scored as n_samples x n_traces images. */
GPR_API gpr_status gpr_evaluate_bscans(const gpr_bscan* reference, const gpr_bscan* test,
                                       gpr_metrics* out);
/* shape lists the extent per axis, fastest first; rank 1 to 3. */
GPR_API gpr_status gpr_evaluate_arrays(const float* reference, const float* test,
                                       const size_t* shape, size_t rank, gpr_metrics* out);

/* ---- datasets ---------------------------------------------------------- */

/* config_json may be NULL for defaults; *rows receives the sample count. */
GPR_API gpr_status gpr_generate_dataset(const char* config_json, const char* out_dir,
                                        uint64_t seed, size_t* rows);

#ifdef __cplusplus
}
#endif

#endif /* GPR_GPR_H_ */
