#ifndef EGR_RENDER_HPP
#define EGR_RENDER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egr/graph.hpp"
#include "egr/matrix.hpp"

namespace egr {

// SVG rendering of a realization. Coordinates are uniformly scaled so the
// largest vertex magnitude is 1. Edges are colored by weight on a linear
// blue (minimum) to red (maximum) map; uniform weights draw at the midpoint.
// dims selects a 2-D drawing or a fixed orthographic 3-D projection along
// (1,1,1)/sqrt(3) with up vector (-1,-1,2)/sqrt(6). Realizations with more
// coordinates than dims are truncated and annotated. Output is deterministic.
std::string render_svg_string(const Matrix& x, const std::vector<double>* w, const Graph& g,
                              int dims = 2);

void render_svg(const Matrix& x, const std::vector<double>* w, const Graph& g,
                const std::filesystem::path& path, int dims = 2);

}  // namespace egr

#endif
