#include "collatt/render.hpp"

#include <algorithm>
#include <fstream>

#include "collatt/errors.hpp"
#include "collatt/lattice.hpp"

namespace collatt {

namespace {

struct Grid {
  int width, height;
  std::vector<Cell>& cells;

  void put_plain(int x, int y, Cell c) {
    Cell& cur = cells[static_cast<size_t>(y) * width + ((x % width + width) % width)];
    if (cur == Cell::empty) cur = c;
  }
  void put(int x, int y, Cell c) {
    cells[static_cast<size_t>(y) * width + ((x % width + width) % width)] = c;
  }
};

}  // namespace

Diagram build_diagram(const RunRecord& rec) {
  const Geometry geom = rec.config.geometry;
  const int n = geom.num_slots();
  if (static_cast<int>(rec.events.size()) != static_cast<int>(rec.motions.size()))
    throw config_error("record motions and events disagree");

  const GrownLattice g = grow_lattice(geom, rec.motions);

  // Row of each vertex: one level above its highest direct predecessor.
  std::vector<int> level(g.dag.size(), 1);
  for (int v = 0; v < g.dag.size(); ++v)
    for (int p : g.dag.direct_predecessors(v))
      level[v] = std::max(level[v], level[p] + 1);
  const int max_level =
      level.empty() ? 0 : *std::max_element(level.begin(), level.end());

  Diagram d;
  d.width = 2 * n;
  d.height = level.empty() ? 1 : 2 * max_level + 2;
  d.cells.assign(static_cast<size_t>(d.width) * d.height, Cell::empty);
  Grid grid{d.width, d.height, d.cells};

  for (int i = 0; i < n; ++i)
    grid.put(2 * i, 0, i % 2 == 0 ? Cell::dir_r : Cell::dir_l);

  for (int v = 0; v < g.dag.size(); ++v) {
    const Vertex& vert = g.dag.vertex(v);
    const Event& ev = rec.events[v];
    const int xl = 2 * vert.slot;          // left slot column
    const int xr = 2 * vert.slot + 2;      // right slot column (mod width)
    const int vy = 2 * level[v];

    grid.put_plain(xl, vy - 1, Cell::link_r);  // ingoing right mover
    grid.put_plain(xr, vy - 1, Cell::link_l);  // ingoing left mover
    grid.put(2 * vert.slot + 1, vy,
             ev.realized ? Cell::vertex_hit : Cell::vertex_skipped);
    if (ev.realized) {
      grid.put(xl, vy + 1, ev.outcome.alpha_l ? Cell::value1 : Cell::value0);
      grid.put(xr, vy + 1, ev.outcome.alpha_r ? Cell::value1 : Cell::value0);
    } else {
      grid.put_plain(xl, vy + 1, Cell::link_l);  // outgoing left mover
      grid.put_plain(xr, vy + 1, Cell::link_r);  // outgoing right mover
    }
  }
  return d;
}

std::string render_text(const Diagram& d) {
  std::string out;
  for (int y = d.height - 1; y >= 0; --y) {
    std::string row;
    for (int x = 0; x < d.width; ++x) {
      switch (d.at(x, y)) {
        case Cell::empty: row += ' '; break;
        case Cell::dir_r: row += 'R'; break;
        case Cell::dir_l: row += 'L'; break;
        case Cell::link_r: row += '/'; break;
        case Cell::link_l: row += '\\'; break;
        case Cell::value0: row += '0'; break;
        case Cell::value1: row += '1'; break;
        case Cell::vertex_hit: row += 'X'; break;
        case Cell::vertex_skipped: row += 'o'; break;
      }
    }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row;
    out += '\n';
  }
  out += "\n";
  out += "time runs upward; the surface wraps at the right edge\n";
  out += "X vertex event   o crossed vertex, no event\n";
  out += "0 1 realized link values   / right mover   \\ left mover\n";
  out += "R L initial surface directions\n";
  return out;
}

std::string render_ppm(const Diagram& d, int scale) {
  if (scale < 1) throw config_error("render: scale must be >= 1");
  struct Rgb {
    uint8_t r, g, b;
  };
  auto color = [](Cell c) -> Rgb {
    switch (c) {
      case Cell::empty: return {250, 250, 250};
      case Cell::dir_r: return {120, 120, 120};
      case Cell::dir_l: return {120, 120, 120};
      case Cell::link_r: return {185, 185, 185};
      case Cell::link_l: return {185, 185, 185};
      case Cell::value0: return {40, 90, 200};
      case Cell::value1: return {220, 90, 30};
      case Cell::vertex_hit: return {20, 20, 20};
      case Cell::vertex_skipped: return {140, 140, 140};
    }
    return {0, 0, 0};
  };

  const int w = d.width * scale;
  const int h = d.height * scale;
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) +
                    "\n255\n";
  out.reserve(out.size() + static_cast<size_t>(w) * h * 3);
  for (int py = 0; py < h; ++py) {
    const int y = d.height - 1 - py / scale;  // top row first
    for (int px = 0; px < w; ++px) {
      const Rgb c = color(d.at(px / scale, y));
      out += static_cast<char>(c.r);
      out += static_cast<char>(c.g);
      out += static_cast<char>(c.b);
    }
  }
  return out;
}

void save_ppm(const Diagram& d, const std::string& path, int scale) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write image file: " + path);
  out << render_ppm(d, scale);
  if (!out) throw config_error("failed writing image file: " + path);
}

}  // namespace collatt
