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
// gprmap: file-based pipeline over the C API.
//
//   scene -> simulate -> mask | segment -> filter -> estimate -> migrate
//                                                    evaluate, peaks, dataset
//
// Exit codes: 0 ok, 1 internal, 2 usage, 3 I/O or format, 4 domain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpr/gpr.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kIo = 3, kDomain = 4 };

// Auto mode segments more strictly than `segment` so side lobes and weak
// echoes do not enter the hyperbola fit.
constexpr double kAutoPercentile = 98.0;
constexpr std::size_t kAutoMinCells = 200;
constexpr std::size_t kMaxAutoVoxels = 400'000'000;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

int exit_code_for(gpr_status s) {
  switch (s) {
    case GPR_OK: return kOk;
    case GPR_ERR_INVALID_ARGUMENT: return kUsage;
    case GPR_ERR_IO:
    case GPR_ERR_FORMAT: return kIo;
    case GPR_ERR_DOMAIN: return kDomain;
    case GPR_ERR_INTERNAL: break;
  }
  return kInternal;
}

void check(gpr_status s) {
  if (s != GPR_OK) throw CliError(exit_code_for(s), gpr_last_error());
}

[[noreturn]] void usage(const std::string& what) { throw CliError(kUsage, what); }

struct Free {
  void operator()(gpr_scene* p) const { gpr_scene_free(p); }
  void operator()(gpr_bscan* p) const { gpr_bscan_free(p); }
  void operator()(gpr_mask* p) const { gpr_mask_free(p); }
  void operator()(gpr_grid* p) const { gpr_grid_free(p); }
  void operator()(gpr_estimate* p) const { gpr_estimate_free(p); }
  void operator()(gpr_pose* p) const { gpr_poses_free(p); }
  void operator()(char* p) const { gpr_string_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Free>;

template <class T, class F>
Handle<T> make(F&& call) {
  T* raw = nullptr;
  check(call(&raw));
  return Handle<T>(raw);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CliError(kIo, "cannot read " + path);
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw CliError(kIo, "cannot write " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json metrics_json(const gpr_metrics& m) {
  // JSON has no infinity; a perfect match reports snr_db as null.
  return {{"e_distance", m.e_distance},
          {"mse", m.mse},
          {"snr_db", std::isfinite(m.snr_db) ? json(m.snr_db) : json(nullptr)},
          {"ssim", m.ssim}};
}

json estimate_json(const gpr_estimate* est) {
  Handle<char> text = make<char>([&](char** out) { return gpr_estimate_to_json(est, out); });
  return json::parse(text.get());
}

std::size_t to_count(double v, const std::string& what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e12) usage(what + " must be a whole number");
  return static_cast<std::size_t>(v);
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

unsigned thread_count(const std::optional<unsigned>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GPR_THREADS"); env != nullptr && *env != '\0') {
    const auto v = parse_number(env);
    if (!v || *v < 0.0 || *v != std::floor(*v) || *v > 4096.0) {
      usage("GPR_THREADS must be a non-negative integer");
    }
    return static_cast<unsigned>(*v);
  }
  return 0;
}

std::vector<Handle<gpr_bscan>> load_bscans(const std::vector<std::string>& paths) {
  std::vector<Handle<gpr_bscan>> out;
  for (const std::string& p : paths) {
    out.push_back(make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(p.c_str(), b); }));
  }
  return out;
}

std::vector<const gpr_bscan*> raw(const std::vector<Handle<gpr_bscan>>& v) {
  std::vector<const gpr_bscan*> out;
  for (const auto& h : v) out.push_back(h.get());
  return out;
}

// ---- scene ---------------------------------------------------------------

struct SceneArgs {
  std::string out;
  bool noise_free = false;
};

void run_scene(const SceneArgs& a) {
  auto scene = make<gpr_scene>([](gpr_scene** s) { return gpr_scene_default(s); });
  if (a.noise_free) {
    scene = make<gpr_scene>([&](gpr_scene** s) { return gpr_scene_noise_free(scene.get(), s); });
  }
  Handle<char> text =
      make<char>([&](char** out) { return gpr_scene_to_json(scene.get(), out); });
  write_output(a.out, text.get());
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string scene;
  std::string out;
  std::vector<double> line;
  std::vector<double> zigzag;
  std::string poses;
  std::uint64_t seed = 0;
  std::optional<std::size_t> samples;
  std::optional<double> dt_ns;
  std::optional<double> t0_ns;
  bool noise_free = false;
};

std::vector<gpr_pose> build_trajectory(const SimulateArgs& a) {
  const int given = !a.line.empty() + !a.zigzag.empty() + !a.poses.empty();
  if (given != 1) usage("give exactly one of --line, --zigzag, --poses");
  std::vector<gpr_pose> poses;
  if (!a.line.empty()) {
    if (a.line.size() != 5) usage("--line expects x0,y0,x1,y1,n");
    poses.resize(to_count(a.line[4], "--line n"));
    check(gpr_trajectory_line(a.line[0], a.line[1], a.line[2], a.line[3], poses.size(),
                              poses.data()));
  } else if (!a.zigzag.empty()) {
    if (a.zigzag.size() != 6) usage("--zigzag expects x0,y0,x1,y1,rows,n");
    const std::size_t rows = to_count(a.zigzag[4], "--zigzag rows");
    const std::size_t n = to_count(a.zigzag[5], "--zigzag n");
    poses.resize(rows * n);
    check(gpr_trajectory_zigzag(a.zigzag[0], a.zigzag[1], a.zigzag[2], a.zigzag[3], rows, n,
                                poses.data()));
  } else {
    const std::string text = read_file(a.poses);
    gpr_pose* buf = nullptr;
    std::size_t count = 0;
    check(gpr_trajectory_parse_csv(text.c_str(), &buf, &count));
    Handle<gpr_pose> owned(buf);
    poses.assign(buf, buf + count);
  }
  return poses;
}

void run_simulate(const SimulateArgs& a) {
  const std::vector<gpr_pose> poses = build_trajectory(a);
  auto scene = make<gpr_scene>([&](gpr_scene** s) { return gpr_scene_load(a.scene.c_str(), s); });
  if (a.noise_free) {
    scene = make<gpr_scene>([&](gpr_scene** s) { return gpr_scene_noise_free(scene.get(), s); });
  }
  gpr_sampling sampling;
  gpr_sampling_default(&sampling);
  if (a.samples) sampling.n_samples = *a.samples;
  if (a.dt_ns) sampling.dt_ns = *a.dt_ns;
  if (a.t0_ns) sampling.t0_ns = *a.t0_ns;
  auto bscan = make<gpr_bscan>([&](gpr_bscan** b) {
    return gpr_simulate_bscan(scene.get(), poses.data(), poses.size(), &sampling, a.seed, b);
  });
  check(gpr_bscan_save(bscan.get(), a.out.c_str()));
}

// ---- mask / segment / filter ---------------------------------------------

struct MaskArgs {
  std::string scene;
  std::string bscan;
  std::string out;
  double half_width_ns = 0.0;
};

void run_mask(const MaskArgs& a) {
  auto scene = make<gpr_scene>([&](gpr_scene** s) { return gpr_scene_load(a.scene.c_str(), s); });
  auto bscan = make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(a.bscan.c_str(), b); });
  auto mask = make<gpr_mask>([&](gpr_mask** m) {
    return gpr_mask_ground_truth(scene.get(), bscan.get(), a.half_width_ns, m);
  });
  check(gpr_mask_save(mask.get(), a.out.c_str()));
}

struct SegmentArgs {
  std::string bscan;
  std::string out;
  double percentile = 95.0;
  std::size_t min_cells = 20;
};

void run_segment(const SegmentArgs& a) {
  auto bscan = make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(a.bscan.c_str(), b); });
  auto mask = make<gpr_mask>([&](gpr_mask** m) {
    return gpr_segment_baseline(bscan.get(), a.percentile, a.min_cells, m);
  });
  check(gpr_mask_save(mask.get(), a.out.c_str()));
}

struct FilterArgs {
  std::string bscan;
  std::string mask;
  std::string out;
};

void run_filter(const FilterArgs& a) {
  auto bscan = make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(a.bscan.c_str(), b); });
  auto mask = make<gpr_mask>([&](gpr_mask** m) { return gpr_mask_load(a.mask.c_str(), m); });
  auto filtered =
      make<gpr_bscan>([&](gpr_bscan** b) { return gpr_apply_mask(bscan.get(), mask.get(), b); });
  check(gpr_bscan_save(filtered.get(), a.out.c_str()));
}

// ---- estimate ------------------------------------------------------------

struct EstimateArgs {
  std::string bscan;
  std::string mask;
  std::string out;
  std::size_t min_points = 7;
};

void run_estimate(const EstimateArgs& a) {
  auto bscan = make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(a.bscan.c_str(), b); });
  auto mask = make<gpr_mask>([&](gpr_mask** m) { return gpr_mask_load(a.mask.c_str(), m); });
  auto est = make<gpr_estimate>([&](gpr_estimate** e) {
    return gpr_estimate_dielectric(bscan.get(), mask.get(), a.min_points, e);
  });
  write_output(a.out, dump(estimate_json(est.get())));
}

// ---- migrate -------------------------------------------------------------

struct MigrateArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string dielectric;
  std::vector<double> origin;
  std::vector<std::size_t> dims;
  std::vector<double> spacing{0.005};
  double margin = 0.05;
  std::optional<double> depth_max;
  double aperture_deg = 60.0;
  double floor = 0.01;
  bool signed_accumulation = false;
  std::optional<unsigned> threads;
  double peak_threshold = 0.5;
  double peak_min_sep = 0.02;
  std::size_t max_peaks = 10;
  double auto_percentile = kAutoPercentile;
  std::size_t auto_min_cells = kAutoMinCells;
  std::size_t min_points = 7;
};

struct Dielectric {
  double value = 1.0;
  json report;
};

// `auto`: segment -> filter -> estimate on every input; the inputs are
// replaced by their filtered versions and the per-input estimates are
// combined weighted by confidence.
Dielectric auto_dielectric(std::vector<Handle<gpr_bscan>>& bscans, const MigrateArgs& a) {
  double wsum = 0.0;
  double vsum = 0.0;
  double csum = 0.0;
  json per_input = json::array();
  for (auto& b : bscans) {
    auto mask = make<gpr_mask>([&](gpr_mask** m) {
      return gpr_segment_baseline(b.get(), a.auto_percentile, a.auto_min_cells, m);
    });
    auto filtered =
        make<gpr_bscan>([&](gpr_bscan** f) { return gpr_apply_mask(b.get(), mask.get(), f); });
    auto est = make<gpr_estimate>([&](gpr_estimate** e) {
      return gpr_estimate_dielectric(filtered.get(), mask.get(), a.min_points, e);
    });
    double value = 0.0;
    double confidence = 0.0;
    check(gpr_estimate_value(est.get(), &value));
    check(gpr_estimate_confidence(est.get(), &confidence));
    const double w = std::max(confidence, 1e-12);
    wsum += w;
    vsum += w * value;
    csum += confidence;
    per_input.push_back(estimate_json(est.get()));
    b = std::move(filtered);
  }
  Dielectric d;
  d.value = vsum / wsum;
  d.report = {{"dielectric", d.value},
              {"confidence", csum / static_cast<double>(bscans.size())},
              {"source", "hyperbola-fit"},
              {"inputs", per_input}};
  return d;
}

Dielectric resolve_dielectric(std::vector<Handle<gpr_bscan>>& bscans, const MigrateArgs& a) {
  if (a.dielectric == "auto") return auto_dielectric(bscans, a);
  if (const auto v = parse_number(a.dielectric)) {
    return {*v, {{"dielectric", *v}, {"confidence", 1.0}, {"source", "user-supplied"}}};
  }
  if (!std::filesystem::exists(a.dielectric)) {
    usage("--dielectric must be a number, 'auto' or an estimate JSON file");
  }
  const std::string text = read_file(a.dielectric);
  auto est = make<gpr_estimate>([&](gpr_estimate** e) { return gpr_estimate_from_json(text.c_str(), e); });
  Dielectric d;
  check(gpr_estimate_value(est.get(), &d.value));
  d.report = estimate_json(est.get());
  return d;
}

std::array<double, 3> spacing_of(const std::vector<double>& s) {
  if (s.size() == 1) return {s[0], s[0], s[0]};
  if (s.size() == 3) return {s[0], s[1], s[2]};
  usage("--spacing expects s or sx,sy,sz");
}

// Bounding box of the poses widened by the margin, down to the depth of the
// latest sample above the amplitude floor. Corners snap to the spacing.
gpr_grid_spec auto_grid(const std::vector<const gpr_bscan*>& bscans, const MigrateArgs& a,
                        double dielectric) {
  const std::array<double, 3> sp = spacing_of(a.spacing);
  double x_lo = std::numeric_limits<double>::infinity();
  double y_lo = x_lo;
  double x_hi = -x_lo;
  double y_hi = -x_lo;
  double t_last = 0.0;
  for (const gpr_bscan* b : bscans) {
    std::size_t n_traces = 0;
    std::size_t n_samples = 0;
    double dt = 0.0;
    double t0 = 0.0;
    check(gpr_bscan_dims(b, &n_traces, &n_samples));
    check(gpr_bscan_timing(b, &dt, &t0));
    for (std::size_t q = 0; q < n_traces; ++q) {
      gpr_pose p;
      const float* s = nullptr;
      check(gpr_bscan_pose(b, q, &p));
      check(gpr_bscan_samples(b, q, &s));
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
      float peak = 0.0f;
      for (std::size_t i = 0; i < n_samples; ++i) peak = std::max(peak, std::abs(s[i]));
      const double amp_floor = a.floor * static_cast<double>(peak);
      for (std::size_t i = n_samples; i-- > 0;) {
        if (static_cast<double>(std::abs(s[i])) > amp_floor) {
          t_last = std::max(t_last, t0 + static_cast<double>(i) * dt);
          break;
        }
      }
    }
  }
  double v = 0.0;
  check(gpr_wave_velocity(dielectric, &v));
  const double depth = a.depth_max ? *a.depth_max : v * t_last / 2.0;
  if (!(depth > 0.0)) throw CliError(kDomain, "no signal above the amplitude floor");

  gpr_grid_spec spec{};
  const double lo[2] = {x_lo - a.margin, y_lo - a.margin};
  const double hi[2] = {x_hi + a.margin, y_hi + a.margin};
  double count = 1.0;
  for (int d = 0; d < 2; ++d) {
    // The tolerance keeps exact multiples of the spacing on their own cell.
    const double first = std::floor(lo[d] / sp[d] + 1e-9);
    const double last = std::ceil(hi[d] / sp[d] - 1e-9);
    spec.origin[d] = first * sp[d];
    spec.dims[d] = static_cast<std::size_t>(last - first) + 1;
    count *= static_cast<double>(spec.dims[d]);
  }
  spec.origin[2] = 0.0;
  spec.dims[2] = static_cast<std::size_t>(std::ceil(depth / sp[2])) + 1;
  count *= static_cast<double>(spec.dims[2]);
  for (int d = 0; d < 3; ++d) spec.spacing[d] = sp[d];
  if (count > static_cast<double>(kMaxAutoVoxels)) {
    usage("automatic grid would hold " + std::to_string(static_cast<long long>(count)) +
          " voxels; pass --origin and --dims");
  }
  return spec;
}

json peaks_json(const gpr_grid* grid, double threshold, double min_sep, std::size_t max_peaks) {
  std::size_t found = 0;
  check(gpr_locate_peaks(grid, threshold, min_sep, nullptr, 0, &found));
  std::vector<gpr_peak> peaks(std::min(found, max_peaks));
  check(gpr_locate_peaks(grid, threshold, min_sep, peaks.data(), peaks.size(), &found));
  json out = json::array();
  for (const gpr_peak& p : peaks) {
    out.push_back({{"position", {p.position[0], p.position[1], p.position[2]}},
                   {"index", {p.index[0], p.index[1], p.index[2]}},
                   {"energy", p.energy}});
  }
  return out;
}

json spec_json(const gpr_grid_spec& s) {
  return {{"origin", {s.origin[0], s.origin[1], s.origin[2]}},
          {"spacing", {s.spacing[0], s.spacing[1], s.spacing[2]}},
          {"dims", {s.dims[0], s.dims[1], s.dims[2]}}};
}

void run_migrate(const MigrateArgs& a) {
  if (a.inputs.empty()) usage("migrate needs at least one .gprb input");
  auto bscans = load_bscans(a.inputs);
  const Dielectric diel = resolve_dielectric(bscans, a);
  const std::vector<const gpr_bscan*> inputs = raw(bscans);

  gpr_grid_spec spec{};
  if (a.origin.empty() != a.dims.empty()) usage("--origin and --dims go together");
  if (!a.origin.empty()) {
    if (a.origin.size() != 3 || a.dims.size() != 3) usage("--origin and --dims take 3 values");
    const std::array<double, 3> sp = spacing_of(a.spacing);
    for (int d = 0; d < 3; ++d) {
      spec.origin[d] = a.origin[d];
      spec.spacing[d] = sp[d];
      spec.dims[d] = a.dims[d];
    }
  } else {
    spec = auto_grid(inputs, a, diel.value);
  }

  gpr_migrate_options opts;
  gpr_migrate_options_default(&opts);
  opts.aperture_rad = a.aperture_deg * std::numbers::pi / 180.0;
  opts.amplitude_floor = a.floor;
  opts.signed_accumulation = a.signed_accumulation ? 1 : 0;
  opts.threads = thread_count(a.threads);
  auto grid = make<gpr_grid>([&](gpr_grid** g) {
    return gpr_migrate(inputs.data(), inputs.size(), diel.value, &spec, &opts, g);
  });
  check(gpr_grid_save(grid.get(), a.out.c_str()));

  const json report = {{"dielectric", diel.report},
                       {"grid", spec_json(spec)},
                       {"peaks", peaks_json(grid.get(), a.peak_threshold, a.peak_min_sep,
                                            a.max_peaks)}};
  std::cout << dump(report);
}

// ---- peaks / evaluate / dataset ------------------------------------------

struct PeaksArgs {
  std::string grid;
  double threshold = 0.5;
  double min_sep = 0.02;
  std::size_t max_peaks = 10;
};

void run_peaks(const PeaksArgs& a) {
  auto grid = make<gpr_grid>([&](gpr_grid** g) { return gpr_grid_load(a.grid.c_str(), g); });
  std::cout << dump(peaks_json(grid.get(), a.threshold, a.min_sep, a.max_peaks));
}

struct EvaluateArgs {
  std::string reference;
  std::string test;
  std::string out;
};

void run_evaluate(const EvaluateArgs& a) {
  for (const std::string* p : {&a.reference, &a.test}) {
    if (!std::filesystem::exists(*p)) throw CliError(kIo, "cannot open " + *p);
  }
  const gpr_file_kind kr = gpr_file_kind_of(a.reference.c_str());
  const gpr_file_kind kt = gpr_file_kind_of(a.test.c_str());
  gpr_metrics m{};
  if (kr == GPR_FILE_GRID && kt == GPR_FILE_GRID) {
    auto r = make<gpr_grid>([&](gpr_grid** g) { return gpr_grid_load(a.reference.c_str(), g); });
    auto t = make<gpr_grid>([&](gpr_grid** g) { return gpr_grid_load(a.test.c_str(), g); });
    check(gpr_evaluate_grids(r.get(), t.get(), &m));
  } else if (kr == GPR_FILE_BSCAN && kt == GPR_FILE_BSCAN) {
    auto r = make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(a.reference.c_str(), b); });
    auto t = make<gpr_bscan>([&](gpr_bscan** b) { return gpr_bscan_load(a.test.c_str(), b); });
    check(gpr_evaluate_bscans(r.get(), t.get(), &m));
  } else if (kr == GPR_FILE_UNKNOWN || kt == GPR_FILE_UNKNOWN) {
    throw CliError(kIo, "evaluate reads GPRV grids or GPRB B-scans");
  } else {
    throw CliError(kDomain, "cannot compare files of different kinds");
  }
  write_output(a.out, dump(metrics_json(m)));
}

struct DatasetArgs {
  std::string out_dir;
  std::string config;
  std::uint64_t seed = 0;
  std::optional<std::size_t> count;
};

void run_dataset(const DatasetArgs& a) {
  json cfg = json::object();
  if (!a.config.empty()) {
    try {
      cfg = json::parse(read_file(a.config));
    } catch (const json::exception& e) {
      throw CliError(kIo, "invalid dataset config: " + std::string(e.what()));
    }
  }
  if (a.count) cfg["count"] = *a.count;
  const std::string text = cfg.dump();
  std::size_t rows = 0;
  check(gpr_generate_dataset(text.c_str(), a.out_dir.c_str(), a.seed, &rows));
  const json report = {
      {"rows", rows},
      {"manifest", (std::filesystem::path(a.out_dir) / "manifest.jsonl").string()}};
  std::cout << dump(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gprmap: ground-penetrating radar mapping toolkit"};
  app.set_version_flag("--version", std::string(gpr_version()));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::map<CLI::App*, std::function<void()>> actions;

  SceneArgs scene;
  auto* c_scene = app.add_subcommand("scene", "Write the default scene as JSON");
  c_scene->add_option("-o,--out", scene.out, "Output path (default stdout)");
  c_scene->add_flag("--noise-free", scene.noise_free, "Disable noise and weak echoes");
  actions[c_scene] = [&] { run_scene(scene); };

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a B-scan along a trajectory");
  c_sim->add_option("scene", sim.scene, "Scene JSON")->required();
  c_sim->add_option("out", sim.out, "Output .gprb")->required();
  c_sim->add_option("--line", sim.line, "x0,y0,x1,y1,n")->delimiter(',');
  c_sim->add_option("--zigzag", sim.zigzag, "x0,y0,x1,y1,rows,n")->delimiter(',');
  c_sim->add_option("--poses", sim.poses, "CSV of x,y,theta rows");
  c_sim->add_option("--seed", sim.seed, "Noise seed");
  c_sim->add_option("--samples", sim.samples, "Samples per trace");
  c_sim->add_option("--dt-ns", sim.dt_ns, "Sample interval, ns");
  c_sim->add_option("--t0-ns", sim.t0_ns, "Time of the first sample, ns");
  c_sim->add_flag("--noise-free", sim.noise_free, "Disable noise and weak echoes");
  actions[c_sim] = [&] { run_simulate(sim); };

  MaskArgs mask;
  auto* c_mask = app.add_subcommand("mask", "Ground-truth hyperbola mask of a simulated B-scan");
  c_mask->add_option("scene", mask.scene, "Scene JSON the B-scan was simulated from")->required();
  c_mask->add_option("bscan", mask.bscan, "Input .gprb")->required();
  c_mask->add_option("out", mask.out, "Output .gprm")->required();
  c_mask->add_option("--half-width-ns", mask.half_width_ns,
                     "Half-width around each echo, ns (default 0.75 wavelet periods)");
  actions[c_mask] = [&] { run_mask(mask); };

  SegmentArgs seg;
  auto* c_seg = app.add_subcommand("segment", "Baseline energy-threshold segmentation");
  c_seg->add_option("bscan", seg.bscan, "Input .gprb")->required();
  c_seg->add_option("out", seg.out, "Output .gprm")->required();
  c_seg->add_option("--percentile", seg.percentile, "Energy percentile");
  c_seg->add_option("--min-cells", seg.min_cells, "Smallest kept component");
  actions[c_seg] = [&] { run_segment(seg); };

  FilterArgs filt;
  auto* c_filt = app.add_subcommand("filter", "Zero every sample outside the mask");
  c_filt->add_option("bscan", filt.bscan, "Input .gprb")->required();
  c_filt->add_option("mask", filt.mask, "Mask .gprm")->required();
  c_filt->add_option("out", filt.out, "Output .gprb")->required();
  actions[c_filt] = [&] { run_filter(filt); };

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Dielectric from masked hyperbolas");
  c_est->add_option("bscan", est.bscan, "Input .gprb")->required();
  c_est->add_option("mask", est.mask, "Mask .gprm")->required();
  c_est->add_option("-o,--out", est.out, "Output JSON (default stdout)");
  c_est->add_option("--min-points", est.min_points, "Traces a component must span");
  actions[c_est] = [&] { run_estimate(est); };

  MigrateArgs mig;
  auto* c_mig = app.add_subcommand("migrate", "Back-project B-scans into a voxel grid");
  c_mig->add_option("inputs", mig.inputs, "Input .gprb files")->required();
  c_mig->add_option("-o,--out", mig.out, "Output .gprv")->required();
  c_mig->add_option("--dielectric", mig.dielectric, "Value, 'auto' or estimate JSON")
      ->required();
  c_mig->add_option("--origin", mig.origin, "Grid origin x,y,z (m)")->delimiter(',');
  c_mig->add_option("--dims", mig.dims, "Grid dims nx,ny,nz")->delimiter(',');
  c_mig->add_option("--spacing", mig.spacing, "Voxel spacing s or sx,sy,sz (m)")
      ->delimiter(',');
  c_mig->add_option("--margin", mig.margin, "Automatic grid margin around the poses (m)");
  c_mig->add_option("--depth-max", mig.depth_max, "Automatic grid depth (m)");
  c_mig->add_option("--aperture-deg", mig.aperture_deg, "Cone half-angle");
  c_mig->add_option("--floor", mig.floor, "Amplitude floor, fraction of trace peak");
  c_mig->add_flag("--signed", mig.signed_accumulation, "Accumulate signed amplitude");
  c_mig->add_option("--threads", mig.threads, "Worker threads (0 = all cores)");
  c_mig->add_option("--peak-threshold", mig.peak_threshold, "Peak fraction of the maximum");
  c_mig->add_option("--peak-min-sep", mig.peak_min_sep, "Peak separation (m)");
  c_mig->add_option("--max-peaks", mig.max_peaks, "Peaks to report");
  c_mig->add_option("--auto-percentile", mig.auto_percentile,
                    "Segmentation percentile for --dielectric auto");
  c_mig->add_option("--auto-min-cells", mig.auto_min_cells,
                    "Smallest component for --dielectric auto");
  c_mig->add_option("--min-points", mig.min_points, "Traces a fitted component must span");
  actions[c_mig] = [&] { run_migrate(mig); };

  PeaksArgs pk;
  auto* c_pk = app.add_subcommand("peaks", "Locate target peaks in a grid");
  c_pk->add_option("grid", pk.grid, "Input .gprv")->required();
  c_pk->add_option("--threshold", pk.threshold, "Fraction of the maximum");
  c_pk->add_option("--min-sep", pk.min_sep, "Peak separation (m)");
  c_pk->add_option("--max-peaks", pk.max_peaks, "Peaks to report");
  actions[c_pk] = [&] { run_peaks(pk); };

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Compare two grids or two B-scans");
  c_ev->add_option("reference", ev.reference, "Reference .gprv or .gprb")->required();
  c_ev->add_option("test", ev.test, "Test .gprv or .gprb")->required();
  c_ev->add_option("-o,--out", ev.out, "Output JSON (default stdout)");
  actions[c_ev] = [&] { run_evaluate(ev); };

  DatasetArgs ds;
  auto* c_ds = app.add_subcommand("dataset", "Generate a labelled synthetic dataset");
  c_ds->add_option("out_dir", ds.out_dir, "Output directory")->required();
  c_ds->add_option("--config", ds.config, "Dataset config JSON");
  c_ds->add_option("--seed", ds.seed, "Dataset seed");
  c_ds->add_option("--count", ds.count, "Number of samples");
  actions[c_ds] = [&] { run_dataset(ds); };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    for (const auto& [sub, action] : actions) {
      if (sub->parsed()) action();
    }
  } catch (const CliError& e) {
    std::cerr << "gprmap: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "gprmap: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
