#pragma once

#include "explore/world.hpp"

#include <initializer_list>
#include <string>
#include <string_view>

namespace explore::test {

// Builds a floorplan from rows written top-down as they appear on screen;
// the first row becomes lattice row 0.
inline Floorplan plan_from_rows(std::initializer_list<std::string_view> rows,
                                double resolution = 0.05, std::string name = "fixture") {
  std::string text = "EXPLORE-WORLD v1 resolution=" + std::to_string(resolution) +
                     " width=" + std::to_string(rows.begin()->size()) +
                     " height=" + std::to_string(rows.size()) + "\n";
  for (auto r : rows) {
    text += r;
    text += '\n';
  }
  return parse_floorplan(text, std::move(name));
}

// Closed rectangular room of w x h interior cells.
inline Floorplan empty_room(int w, int h, double resolution = 0.05) {
  Grid<std::uint8_t> cells = Grid<std::uint8_t>::Constant(h + 2, w + 2, 1);
  cells.block(1, 1, h, w).setZero();
  return Floorplan("room", resolution, std::move(cells));
}

}  // namespace explore::test
