#pragma once

// Grid drawings of arcs: ASCII (rows of `*`/`.`, origin bottom-left) and a
// ruled SVG grid with filled circles, 15 units per cell.

#include <string>

#include "arcs/arc_model.hpp"

namespace arcs {

inline std::string render_ascii(const ArcSet& X) {
    int n = X.modulus().value();
    std::string out;
    out.reserve((n + 1) * n);
    for (int y = n - 1; y >= 0; --y) {
        for (int x = 0; x < n; ++x)
            out += X.contains(Point(x, y, n)) ? '*' : '.';
        out += '\n';
    }
    return out;
}

inline std::string render_svg(const ArcSet& X) {
    int n = X.modulus().value();
    const int cell = 15;
    int side = n * cell;
    auto num = [](int v) { return std::to_string(v); };
    // centers sit at k*15 + 7.5
    auto center = [&](int k) { return num(k * cell + 7) + ".5"; };
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(side) +
         "\" height=\"" + num(side) + "\" viewBox=\"0 0 " + num(side) + " " + num(side) + "\">\n";
    s += "  <g stroke=\"#999\" stroke-width=\"1\">\n";
    for (int k = 0; k <= n; ++k) {
        s += "    <line x1=\"" + num(k * cell) + "\" y1=\"0\" x2=\"" + num(k * cell) +
             "\" y2=\"" + num(side) + "\"/>\n";
        s += "    <line x1=\"0\" y1=\"" + num(k * cell) + "\" x2=\"" + num(side) +
             "\" y2=\"" + num(k * cell) + "\"/>\n";
    }
    s += "  </g>\n";
    s += "  <g fill=\"#000\">\n";
    for (const Point& p : X.points())
        s += "    <circle cx=\"" + center(p.x.value()) + "\" cy=\"" +
             center(n - 1 - p.y.value()) + "\" r=\"4.5\"/>\n";
    s += "  </g>\n";
    s += "</svg>\n";
    return s;
}

} // namespace arcs
