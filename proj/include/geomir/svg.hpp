#pragma once

#include <string>
#include <vector>

#include "geomir/layout.hpp"

namespace geomir {

/// Static scene: springs as lines, hierarchy particles as labeled dots and
/// image particles as boxes painted in `draw_order` (last on top).
std::string render_svg(const LayoutGraph& graph, const std::vector<std::string>& draw_order,
                       const LayoutConfig& cfg = {});

}  // namespace geomir
