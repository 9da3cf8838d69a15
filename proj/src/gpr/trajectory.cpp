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
#include "gpr/trajectory.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace gpr::trajectory {
namespace {

double lerp(double a, double b, std::size_t q, std::size_t n) {
  if (n < 2) return a;
  return a + (b - a) * static_cast<double>(q) / static_cast<double>(n - 1);
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  return end != begin && end && *end == '\0';
}

}  // namespace

std::vector<Pose> line(double x0, double y0, double x1, double y1, std::size_t n) {
  require(n >= 1, "line trajectory needs at least 1 pose");
  const double heading = std::atan2(y1 - y0, x1 - x0);
  std::vector<Pose> out;
  out.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    out.emplace_back(lerp(x0, x1, q, n), lerp(y0, y1, q, n), heading);
  }
  return out;
}

std::vector<Pose> zigzag(double x0, double y0, double x1, double y1, std::size_t rows,
                         std::size_t n_per_row) {
  require(rows >= 1 && n_per_row >= 1, "zig-zag needs at least 1 row of 1 pose");
  std::vector<Pose> out;
  out.reserve(rows * n_per_row);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = lerp(y0, y1, r, rows);
    const bool forward = r % 2 == 0;
    const double heading = std::atan2(0.0, forward ? x1 - x0 : x0 - x1);
    for (std::size_t q = 0; q < n_per_row; ++q) {
      const std::size_t step = forward ? q : n_per_row - 1 - q;
      out.emplace_back(lerp(x0, x1, step, n_per_row), y, heading);
    }
  }
  return out;
}

std::vector<Pose> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::vector<Pose> out;
  std::string row;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, row)) {
    ++line_no;
    if (row.empty() || row == "\r" || row[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(row);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    double v[3] = {0, 0, 0};
    bool numeric = fields.size() == 3;
    for (std::size_t k = 0; numeric && k < 3; ++k) numeric = parse_double(fields[k], v[k]);
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      fail(ErrorKind::Format,
           "pose CSV line " + std::to_string(line_no) + ": expected x,y,theta");
    }
    header_allowed = false;
    out.emplace_back(v[0], v[1], v[2]);
  }
  return out;
}

}  // namespace gpr::trajectory
