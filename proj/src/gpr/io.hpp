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

// Little-endian binary containers.
//
//   GPRB  "GPRB" u16 version, u32 n_traces, u32 n_samples, f64 dt_ns, f64 t0_ns,
//         then per trace: f64 x, f64 y, f64 theta, n_samples x f32
//   GPRM  "GPRM" u16 version, u32 n_traces, u32 n_samples, n_traces*n_samples x u8
//   GPRV  "GPRV" u16 version, u32 dims[3], f64 origin[3], f64 spacing[3],
//         then f32 values, x fastest
//
// Readers throw FormatError (bad magic, version, truncation, non-finite or
// out-of-range values); write failures on the sink throw Error(Io).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "gpr/types.hpp"

namespace gpr::io {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kBScanHeaderBytes = 30;
inline constexpr std::size_t kMaskHeaderBytes = 14;
inline constexpr std::size_t kGridHeaderBytes = 66;

enum class FileKind { BScan, Mask, Grid, Unknown };

void write_bscan(const BScan& bscan, std::ostream& sink);
BScan read_bscan(std::istream& source);

void write_mask(const SegmentationMask& mask, std::ostream& sink);
SegmentationMask read_mask(std::istream& source);

void write_grid(const VoxelGrid& grid, std::ostream& sink);
VoxelGrid read_grid(std::istream& source);

void save_bscan(const BScan& bscan, const std::filesystem::path& path);
BScan load_bscan(const std::filesystem::path& path);
void save_mask(const SegmentationMask& mask, const std::filesystem::path& path);
SegmentationMask load_mask(const std::filesystem::path& path);
void save_grid(const VoxelGrid& grid, const std::filesystem::path& path);
VoxelGrid load_grid(const std::filesystem::path& path);

/// Identifies a file by its 4-byte magic; Unknown if unreadable or foreign.
FileKind sniff(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace gpr::io
