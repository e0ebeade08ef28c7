#include "m3gen/render.hpp"

namespace m3gen {

namespace {

constexpr int kCellPx = 32;

char base_glyph(const CellState& cell) {
  if (cell.regular) return 'o';
  if (cell.special) return '*';
  if (cell.block) return '#';
  if (cell.shape) return '_';
  return '.';
}

char overlay_glyph(const CellState& cell) {
  if (cell.jelly && cell.lock) return '%';
  if (cell.jelly) return '~';
  if (cell.lock) return '+';
  return ' ';
}

const char* base_color(const CellState& cell) {
  if (cell.regular) return "#4a90d9";
  if (cell.special) return "#f5a623";
  if (cell.block) return "#7b5b3a";
  if (cell.shape) return "#dddddd";
  return "#222222";
}

}  // namespace

std::string render_text(const Level& level) {
  std::string out;
  for (int r = 0; r < kBoardSize; ++r) {
    std::string row;
    for (int c = 0; c < kBoardSize; ++c) {
      if (c > 0) row += ' ';
      row += base_glyph(level.at(r, c));
      row += overlay_glyph(level.at(r, c));
    }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row + '\n';
  }
  return out;
}

std::string render_svg(const Level& level) {
  const int size = kCellPx * kBoardSize;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size) +
                    "\" height=\"" + std::to_string(size) + "\" viewBox=\"0 0 " +
                    std::to_string(size) + " " + std::to_string(size) + "\">\n";
  out += "<rect width=\"" + std::to_string(size) + "\" height=\"" + std::to_string(size) +
         "\" fill=\"#222222\"/>\n";
  for (int r = 0; r < kBoardSize; ++r) {
    for (int c = 0; c < kBoardSize; ++c) {
      const auto& cell = level.at(r, c);
      if (cell.is_void()) continue;
      const std::string x = std::to_string(c * kCellPx);
      const std::string y = std::to_string(r * kCellPx);
      out += "<rect x=\"" + x + "\" y=\"" + y + "\" width=\"" + std::to_string(kCellPx) +
             "\" height=\"" + std::to_string(kCellPx) + "\" fill=\"" + base_color(cell) +
             "\" stroke=\"#111111\"/>\n";
      if (cell.jelly) {
        out += "<rect x=\"" + std::to_string(c * kCellPx + 4) + "\" y=\"" +
               std::to_string(r * kCellPx + 4) + "\" width=\"" + std::to_string(kCellPx - 8) +
               "\" height=\"" + std::to_string(kCellPx - 8) +
               "\" fill=\"#ff69b4\" fill-opacity=\"0.35\"/>\n";
      }
      if (cell.lock) {
        const int x0 = c * kCellPx + 6, y0 = r * kCellPx + 6;
        const int x1 = (c + 1) * kCellPx - 6, y1 = (r + 1) * kCellPx - 6;
        out += "<path d=\"M" + std::to_string(x0) + " " + std::to_string(y0) + "L" +
               std::to_string(x1) + " " + std::to_string(y1) + "M" + std::to_string(x1) + " " +
               std::to_string(y0) + "L" + std::to_string(x0) + " " + std::to_string(y1) +
               "\" stroke=\"#333333\" stroke-width=\"3\"/>\n";
      }
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace m3gen
