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

#include <cstddef>
#include <string>
#include <vector>

#include "gpr/types.hpp"

namespace gpr::trajectory {

/// `n` evenly spaced poses from (x0, y0) to (x1, y1), heading along the line.
std::vector<Pose> line(double x0, double y0, double x1, double y1, std::size_t n);

/// Boustrophedon over the rectangle: `rows` passes parallel to x, evenly
/// spaced in y from y0 to y1, alternating direction, `n_per_row` poses each.
std::vector<Pose> zigzag(double x0, double y0, double x1, double y1, std::size_t rows,
                         std::size_t n_per_row);

/// One `x,y,theta` row per pose. Blank lines, `#` comments and a leading
/// non-numeric header are skipped.
std::vector<Pose> parse_csv(const std::string& text);

}  // namespace gpr::trajectory
