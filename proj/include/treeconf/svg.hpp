#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "treeconf/chambers.hpp"

namespace treeconf {

/// Render the chamber arrangement with per-chamber Betti labels. Colors are
/// keyed by the h0 value so equal ranks share a color; a legend lists them.
/// Rational-to-double conversion happens only here, for presentation.
inline std::string arrangement_svg(const ChamberArrangement& arr,
                                   const std::vector<std::pair<long, long>>& betti_per_chamber) {
    const double W = 640, H = 640, margin = 60;
    double B = arr.bound.convert_to<double>();
    auto px = [&](double r) { return margin + r / B * (W - 2 * margin); };
    auto py = [&](double L) { return H - margin - L / B * (H - 2 * margin); };

    static const char* palette[] = {"#50e3c2", "#f5a623", "#9b9b9b", "#f8e71c", "#4a90d9",
                                    "#b8e986", "#d0021b", "#bd10e0", "#7ed321", "#8b5726",
                                    "#417505", "#9013fe"};
    std::map<long, std::string> color_of;
    for (const auto& [h0, h1] : betti_per_chamber)
        if (!color_of.count(h0))
            color_of[h0] = palette[color_of.size() % (sizeof(palette) / sizeof(palette[0]))];

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(W) << "\" height=\""
        << int(H) << "\" viewBox=\"0 0 " << int(W) << " " << int(H) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << int(W) << "\" height=\"" << int(H)
        << "\" fill=\"white\"/>\n";

    // chamber sample markers
    for (std::size_t c = 0; c < arr.chambers.size(); ++c) {
        double r = arr.chambers[c].sample.x.convert_to<double>();
        double L = arr.chambers[c].sample.y.convert_to<double>();
        auto [h0, h1] = betti_per_chamber[c];
        out << "<circle cx=\"" << px(r) << "\" cy=\"" << py(L) << "\" r=\"10\" fill=\""
            << color_of[h0] << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << px(r) + 12 << "\" y=\"" << py(L) + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">(" << h0 << "," << h1
            << ")</text>\n";
    }

    // critical lines clipped to the window
    for (const auto& ln : arr.lines) {
        double a = Rational(ln.alpha).convert_to<double>();
        double b = Rational(ln.beta).convert_to<double>();
        double g = Rational(ln.gamma).convert_to<double>();
        std::vector<std::pair<double, double>> pts;
        auto try_pt = [&](double r, double L) {
            if (r >= -1e-9 && r <= B + 1e-9 && L >= -1e-9 && L <= B + 1e-9)
                pts.push_back({r, L});
        };
        if (b != 0) {
            try_pt(0, g / b);
            try_pt(B, (g - a * B) / b);
        }
        if (a != 0) {
            try_pt(g / a, 0);
            try_pt((g - b * B) / a, B);
        }
        if (pts.size() >= 2) {
            out << "<line x1=\"" << px(pts[0].first) << "\" y1=\"" << py(pts[0].second)
                << "\" x2=\"" << px(pts[1].first) << "\" y2=\"" << py(pts[1].second)
                << "\" stroke=\"#333\" stroke-width=\"1.2\"/>\n";
        }
    }

    // axes
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(B) << "\" y2=\""
        << py(0) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
        << py(B) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << px(B) - 10 << "\" y=\"" << py(0) + 30
        << "\" font-size=\"13\" font-family=\"sans-serif\">r</text>\n";
    out << "<text x=\"" << px(0) - 30 << "\" y=\"" << py(B) + 5
        << "\" font-size=\"13\" font-family=\"sans-serif\">L</text>\n";

    // legend
    double ly = margin;
    for (const auto& [h0, color] : color_of) {
        out << "<circle cx=\"" << W - margin + 20 << "\" cy=\"" << ly
            << "\" r=\"7\" fill=\"" << color << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
        out << "<text x=\"" << W - margin + 32 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">h0=" << h0 << "</text>\n";
        ly += 20;
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace treeconf
