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

#include "flatpush/svg.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace flatpush {

namespace {

void points_attr(std::ostringstream& os, const std::vector<Vec2>& pts) {
  os << " points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    // y flipped so that +y points up
    os << pts[i].x() << ',' << -pts[i].y();
  }
  os << '"';
}

}  // namespace

std::string render_svg(const std::vector<Obstacle>& obstacles,
                       const std::vector<SvgLayer>& layers,
                       double pixels_per_unit) {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  const auto grow = [&](const Vec2& p) {
    lo_x = std::min(lo_x, p.x());
    hi_x = std::max(hi_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_y = std::max(hi_y, p.y());
  };
  for (const auto& o : obstacles) {
    for (const auto& v : o.outline().vertices()) grow(v);
  }
  for (const auto& l : layers) {
    for (const auto& v : l.polyline) grow(v);
    for (const auto& f : l.footprints) {
      for (const auto& v : f.vertices()) grow(v);
    }
  }
  if (!(lo_x <= hi_x)) lo_x = lo_y = -1.0, hi_x = hi_y = 1.0;
  const double margin = 0.5;
  lo_x -= margin, lo_y -= margin, hi_x += margin, hi_y += margin;
  const double w = hi_x - lo_x, h = hi_y - lo_y;

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << w * pixels_per_unit << "\" height=\"" << h * pixels_per_unit
     << "\" viewBox=\"" << lo_x << ' ' << -hi_y << ' ' << w << ' ' << h
     << "\">\n";
  const double stroke = 2.0 / pixels_per_unit;
  for (const auto& o : obstacles) {
    os << "  <polygon";
    points_attr(os, o.outline().vertices());
    os << " fill=\"#999999\" stroke=\"#555555\" stroke-width=\"" << stroke
       << "\"/>\n";
  }
  for (const auto& l : layers) {
    os << "  <g>";
    if (!l.label.empty()) os << "<title>" << l.label << "</title>";
    os << '\n';
    for (const auto& f : l.footprints) {
      os << "    <polygon";
      points_attr(os, f.vertices());
      os << " fill=\"none\" stroke=\"" << l.color << "\" stroke-opacity=\"0.4\""
         << " stroke-width=\"" << stroke << "\"/>\n";
    }
    if (!l.polyline.empty()) {
      os << "    <polyline";
      points_attr(os, l.polyline);
      os << " fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\""
         << 1.5 * stroke << "\"/>\n";
    }
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace flatpush
