#pragma once

#include "vhb/dynamics.hpp"

#include <string>
#include <vector>

namespace vhb {

/// CSV with header `t,x,y,sx,sy,side_id`. The first row is the initial
/// state and the last the final state (empty side_id); collision rows carry
/// the side index, or `v<k>` for a corner at vertex k. Signs are the ones
/// after the collision.
std::string orbit_csv(const OrbitSegmentList& orbit);

/// Standalone SVG: table outline, holes, and the trajectory polyline.
std::string orbit_svg(const VHTable& table, const OrbitSegmentList& orbit, int size_px = 600);

/// Standalone SVG line chart of y-values against x-values.
std::string series_svg(const std::vector<double>& xs, const std::vector<std::vector<double>>& ys,
                       const std::vector<std::string>& labels, const std::string& title, int width_px = 800,
                       int height_px = 400);

}  // namespace vhb
