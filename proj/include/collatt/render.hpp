#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collatt/record.hpp"

namespace collatt {

// Shared spacetime-diagram model: one cell grid, y = 0 at the initial
// surface, time increasing upward. Both renderers draw exactly this grid,
// so text and raster output encode identical link-value assignments.
enum class Cell : uint8_t {
  empty,
  dir_r,           // initial-surface slot, right mover
  dir_l,           // initial-surface slot, left mover
  link_r,          // right-moving link segment, value not realized
  link_l,          // left-moving link segment, value not realized
  value0,          // realized link value 0
  value1,          // realized link value 1
  vertex_hit,      // vertex with a realized pair event
  vertex_skipped,  // crossed vertex without an event
};

struct Diagram {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row major, index y * width + x

  Cell at(int x, int y) const { return cells.at(static_cast<size_t>(y) * width + x); }
};

Diagram build_diagram(const RunRecord& rec);

// Character grid, top row first, with a legend footer.
std::string render_text(const Diagram& d);

// Binary PPM (P6) raster, scale x scale pixels per cell.
std::string render_ppm(const Diagram& d, int scale = 8);

void save_ppm(const Diagram& d, const std::string& path, int scale = 8);

}  // namespace collatt
