#include "vhb/orbit_export.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace vhb {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string row(double t, Vec2 p, const DirectionState& d, const std::string& side) {
    return num(t) + "," + num(p.x) + "," + num(p.y) + "," + std::to_string(d.sx) + "," + std::to_string(d.sy) +
           "," + side + "\n";
}

}  // namespace

std::string orbit_csv(const OrbitSegmentList& orbit) {
    std::string out = "t,x,y,sx,sy,side_id\n";
    out += row(0.0, orbit.initial.position, orbit.initial.dir, "");
    for (const auto& c : orbit.collisions) {
        out += row(c.time, c.point, c.dir_after, c.vertex >= 0 ? "v" + std::to_string(c.vertex) : std::to_string(c.side));
    }
    if (!orbit.singular) out += row(orbit.total_time, orbit.final_state.position, orbit.final_state.dir, "");
    return out;
}

std::string orbit_svg(const VHTable& table, const OrbitSegmentList& orbit, int size_px) {
    const double w = to_double(table.width());
    const double h = to_double(table.height());
    const double margin = 10.0;
    const double scale = (size_px - 2 * margin) / std::max(w, h);
    auto X = [&](double x) { return short_num(margin + x * scale); };
    auto Y = [&](double y) { return short_num(size_px - margin - y * scale); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px << "\">\n";
    auto polygon = [&](const std::vector<Point>& pts, const char* fill) {
        svg << "  <polygon fill=\"" << fill << "\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : pts) svg << X(to_double(p.x)) << "," << Y(to_double(p.y)) << " ";
        svg << "\"/>\n";
    };
    polygon(table.outer().vertices(), "#f4f4f4");
    for (std::size_t k = 0; k < table.holes().size(); ++k) polygon(table.hole_vertices(k), "white");

    svg << "  <polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.8\" points=\"";
    svg << X(orbit.initial.position.x) << "," << Y(orbit.initial.position.y) << " ";
    for (const auto& c : orbit.collisions) svg << X(c.point.x) << "," << Y(c.point.y) << " ";
    svg << X(orbit.final_state.position.x) << "," << Y(orbit.final_state.position.y) << "\"/>\n";
    svg << "  <circle r=\"3\" fill=\"#2c3e50\" cx=\"" << X(orbit.initial.position.x) << "\" cy=\""
        << Y(orbit.initial.position.y) << "\"/>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string series_svg(const std::vector<double>& xs, const std::vector<std::vector<double>>& ys,
                       const std::vector<std::string>& labels, const std::string& title, int width_px,
                       int height_px) {
    static const char* colors[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400"};
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (const auto& s : ys) {
        for (double y : s) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double m = 40.0;
    auto X = [&](double x) { return short_num(m + (x - xmin) / (xmax - xmin) * (width_px - 2 * m)); };
    auto Y = [&](double y) { return short_num(height_px - m - (y - ymin) / (ymax - ymin) * (height_px - 2 * m)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\"" << height_px
        << "\">\n";
    svg << "  <text x=\"" << m << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    svg << "  <rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << width_px - 2 * m << "\" height=\""
        << height_px - 2 * m << "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg << "  <text x=\"4\" y=\"" << m << "\" font-size=\"10\">" << short_num(ymax) << "</text>\n";
    svg << "  <text x=\"4\" y=\"" << height_px - m << "\" font-size=\"10\">" << short_num(ymin) << "</text>\n";
    for (std::size_t s = 0; s < ys.size(); ++s) {
        const char* color = colors[s % 5];
        svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
        for (std::size_t k = 0; k < xs.size() && k < ys[s].size(); ++k) svg << X(xs[k]) << "," << Y(ys[s][k]) << " ";
        svg << "\"/>\n";
        if (s < labels.size()) {
            svg << "  <text x=\"" << width_px - 2 * m - 60 << "\" y=\"" << m + 14 * (s + 1) << "\" font-size=\"11\" fill=\""
                << color << "\">" << labels[s] << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace vhb
