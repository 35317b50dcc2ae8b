#pragma once

#include <string>
#include <vector>

#include "glvortex/grid.hpp"
#include "glvortex/vortex.hpp"

namespace glvortex {

struct RenderOptions {
  int max_glyphs = 64;
  double pixels = 640.0;
};

/// SVG 1.1 document: arrows (k-fold crosses for cross-field targets) on at
/// most max_glyphs x max_glyphs nodes, vortex markers and labelled balls.
std::string render_svg(const Field& field, const Target& t, const VortexCensus* census,
                       const std::vector<Ball>& balls, const RenderOptions& opts = {});

}  // namespace glvortex
