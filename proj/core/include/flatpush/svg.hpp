// Copyright 2026 The flatpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "flatpush/geometry.hpp"

namespace flatpush {

struct SvgLayer {
  std::vector<Vec2> polyline;
  std::vector<Polygon> footprints;
  std::string color = "#1f77b4";
  std::string label;
};

// One static panel: obstacles in grey, each layer as a polyline plus
// optional slider outlines. The view box fits everything with a margin.
std::string render_svg(const std::vector<Obstacle>& obstacles,
                       const std::vector<SvgLayer>& layers,
                       double pixels_per_unit = 60.0);

}  // namespace flatpush
