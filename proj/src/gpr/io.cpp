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
#include "gpr/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace gpr::io {
namespace {

constexpr std::array<char, 4> kBScanMagic{'G', 'P', 'R', 'B'};
constexpr std::array<char, 4> kMaskMagic{'G', 'P', 'R', 'M'};
constexpr std::array<char, 4> kGridMagic{'G', 'P', 'R', 'V'};

class LeWriter {
 public:
  explicit LeWriter(std::ostream& os) : os_(os) {}

  void magic(const std::array<char, 4>& m) { put(m.data(), m.size()); }
  void u8(std::uint8_t v) { put(reinterpret_cast<const char*>(&v), 1); }
  void u16(std::uint16_t v) { uint_le(v, 2); }
  void u32(std::uint32_t v) { uint_le(v, 4); }
  void f32(float v) { uint_le(std::bit_cast<std::uint32_t>(v), 4); }
  void f64(double v) { uint_le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::span<const std::uint8_t> b) {
    put(reinterpret_cast<const char*>(b.data()), b.size());
  }
  void finish() {
    os_.flush();
    if (!os_) fail(ErrorKind::Io, "write to sink failed");
  }

 private:
  void uint_le(std::uint64_t v, int n) {
    std::array<char, 8> buf{};
    for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    put(buf.data(), static_cast<std::size_t>(n));
  }
  void put(const char* p, std::size_t n) {
    os_.write(p, static_cast<std::streamsize>(n));
    if (!os_) fail(ErrorKind::Io, "write to sink failed");
  }

  std::ostream& os_;
};

class LeReader {
 public:
  explicit LeReader(std::istream& is) : is_(is) {}

  std::uint64_t offset() const noexcept { return offset_; }

  void expect_magic(const std::array<char, 4>& m, std::string_view what) {
    std::array<char, 4> got{};
    take(got.data(), got.size(), "magic");
    if (got != m) {
      throw FormatError("bad magic: not a " + std::string(what) + " file", 0);
    }
  }
  void expect_version() {
    const std::uint64_t at = offset_;
    const std::uint16_t v = u16("version");
    if (v != kFormatVersion) {
      throw FormatError("unsupported version " + std::to_string(v), at);
    }
  }
  std::uint8_t u8(std::string_view what) {
    char c = 0;
    take(&c, 1, what);
    return static_cast<std::uint8_t>(c);
  }
  std::uint16_t u16(std::string_view what) {
    return static_cast<std::uint16_t>(uint_le(2, what));
  }
  std::uint32_t u32(std::string_view what) {
    return static_cast<std::uint32_t>(uint_le(4, what));
  }
  float f32(std::string_view what) {
    const std::uint64_t at = offset_;
    const float v = std::bit_cast<float>(static_cast<std::uint32_t>(uint_le(4, what)));
    if (!std::isfinite(v)) throw FormatError("non-finite " + std::string(what), at);
    return v;
  }
  double f64(std::string_view what) {
    const std::uint64_t at = offset_;
    const double v = std::bit_cast<double>(uint_le(8, what));
    if (!std::isfinite(v)) throw FormatError("non-finite " + std::string(what), at);
    return v;
  }
  void bytes(std::span<std::uint8_t> out, std::string_view what) {
    take(reinterpret_cast<char*>(out.data()), out.size(), what);
  }

 private:
  std::uint64_t uint_le(int n, std::string_view what) {
    std::array<char, 8> buf{};
    take(buf.data(), static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    }
    return v;
  }
  void take(char* p, std::size_t n, std::string_view what) {
    is_.read(p, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::uint64_t>(is_.gcount());
    if (got != n) {
      throw FormatError("truncated payload while reading " + std::string(what),
                        offset_ + got);
    }
    offset_ += n;
  }

  std::istream& is_;
  std::uint64_t offset_ = 0;
};

std::uint32_t checked_u32(std::size_t n, std::string_view what) {
  require(n <= std::numeric_limits<std::uint32_t>::max(),
          std::string(what) + " exceeds u32 range");
  return static_cast<std::uint32_t>(n);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::Io, "cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Io, "cannot open for reading: " + path.string());
  return is;
}

}  // namespace

void write_bscan(const BScan& bscan, std::ostream& sink) {
  LeWriter w(sink);
  w.magic(kBScanMagic);
  w.u16(kFormatVersion);
  w.u32(checked_u32(bscan.n_traces(), "trace count"));
  w.u32(checked_u32(bscan.n_samples(), "sample count"));
  w.f64(bscan.dt());
  w.f64(bscan.t0());
  for (const AScan& a : bscan.traces()) {
    w.f64(a.pose().x());
    w.f64(a.pose().y());
    w.f64(a.pose().theta());
    for (float v : a.samples()) w.f32(v);
  }
  w.finish();
}

BScan read_bscan(std::istream& source) {
  LeReader r(source);
  r.expect_magic(kBScanMagic, "B-scan");
  r.expect_version();
  const std::uint64_t dims_at = r.offset();
  const std::uint32_t n_traces = r.u32("trace count");
  const std::uint32_t n_samples = r.u32("sample count");
  if (n_traces < 2 || n_samples < 2) {
    throw FormatError("B-scan needs at least 2 traces of at least 2 samples", dims_at);
  }
  const std::uint64_t timing_at = r.offset();
  const double dt = r.f64("dt");
  const double t0 = r.f64("t0");
  if (dt <= 0.0 || t0 < 0.0) throw FormatError("invalid B-scan timing", timing_at);

  std::vector<AScan> traces;
  traces.reserve(n_traces);
  for (std::uint32_t q = 0; q < n_traces; ++q) {
    const double x = r.f64("pose x");
    const double y = r.f64("pose y");
    const double theta = r.f64("pose theta");
    std::vector<float> samples(n_samples);
    for (float& v : samples) v = r.f32("amplitude");
    traces.emplace_back(std::move(samples), dt, t0, Pose(x, y, theta));
  }
  return BScan(std::move(traces));
}

void write_mask(const SegmentationMask& mask, std::ostream& sink) {
  LeWriter w(sink);
  w.magic(kMaskMagic);
  w.u16(kFormatVersion);
  w.u32(checked_u32(mask.n_traces(), "trace count"));
  w.u32(checked_u32(mask.n_samples(), "sample count"));
  w.bytes(mask.cells());
  w.finish();
}

SegmentationMask read_mask(std::istream& source) {
  LeReader r(source);
  r.expect_magic(kMaskMagic, "mask");
  r.expect_version();
  const std::uint32_t n_traces = r.u32("trace count");
  const std::uint32_t n_samples = r.u32("sample count");
  const std::uint64_t cells_at = r.offset();
  const std::size_t total = static_cast<std::size_t>(n_traces) * n_samples;
  // Grow in chunks so a lying header cannot force a huge allocation up front.
  std::vector<std::uint8_t> cells;
  constexpr std::size_t kChunk = 1 << 16;
  while (cells.size() < total) {
    const std::size_t start = cells.size();
    cells.resize(std::min(total, start + kChunk));
    r.bytes(std::span(cells).subspan(start), "mask cells");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] > 1) {
      throw FormatError("mask cell value " + std::to_string(cells[i]) +
                            " is not 0 or 1",
                        cells_at + i);
    }
  }
  return SegmentationMask(n_traces, n_samples, std::move(cells));
}

void write_grid(const VoxelGrid& grid, std::ostream& sink) {
  const GridSpec& s = grid.spec();
  LeWriter w(sink);
  w.magic(kGridMagic);
  w.u16(kFormatVersion);
  for (std::size_t d : s.dims) w.u32(checked_u32(d, "grid dimension"));
  for (double o : s.origin) w.f64(o);
  for (double h : s.spacing) w.f64(h);
  for (float v : grid.values()) w.f32(v);
  w.finish();
}

VoxelGrid read_grid(std::istream& source) {
  LeReader r(source);
  r.expect_magic(kGridMagic, "voxel grid");
  r.expect_version();
  GridSpec spec;
  const std::uint64_t dims_at = r.offset();
  for (std::size_t& d : spec.dims) d = r.u32("grid dimension");
  for (double& o : spec.origin) o = r.f64("grid origin");
  for (double& h : spec.spacing) h = r.f64("grid spacing");
  try {
    spec.validate();
  } catch (const Error& e) {
    throw FormatError(e.what(), dims_at);
  }
  std::vector<float> values(spec.voxel_count());
  for (float& v : values) v = r.f32("voxel value");
  return VoxelGrid(spec, std::move(values));
}

void save_bscan(const BScan& bscan, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_bscan(bscan, os);
}

BScan load_bscan(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_bscan(is);
}

void save_mask(const SegmentationMask& mask, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_mask(mask, os);
}

SegmentationMask load_mask(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_mask(is);
}

void save_grid(const VoxelGrid& grid, const std::filesystem::path& path) {
  auto os = open_out(path);
  write_grid(grid, os);
}

VoxelGrid load_grid(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_grid(is);
}

FileKind sniff(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::array<char, 4> m{};
  if (!is.read(m.data(), m.size())) return FileKind::Unknown;
  if (m == kBScanMagic) return FileKind::BScan;
  if (m == kMaskMagic) return FileKind::Mask;
  if (m == kGridMagic) return FileKind::Grid;
  return FileKind::Unknown;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::Io, "cannot open for writing: " + path.string());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) fail(ErrorKind::Io, "write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace gpr::io
