#pragma once

#include <string>

#include "m3gen/level.hpp"

namespace m3gen {

/// Nine lines, one per row. Each cell is a base glyph followed by an overlay
/// mark, cells separated by one space, trailing spaces trimmed.
///
///   base:    '.' void   '_' empty   'o' regular   '*' special   '#' block
///   overlay: ' ' none   '~' jelly   '+' lock      '%' jelly and lock
std::string render_text(const Level& level);

/// Standalone SVG with one 32px square per cell. Jelly is a translucent
/// inset, lock a dark cross.
std::string render_svg(const Level& level);

}  // namespace m3gen
