#include "torcast/render.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "torcast/errors.hpp"

namespace torcast {

namespace {

const char* level_color(RiskLevel level) {
    switch (level) {
        case RiskLevel::pct2: return "#66a864";
        case RiskLevel::pct5: return "#9d4e1b";
        case RiskLevel::pct10: return "#e4c520";
        case RiskLevel::pct15: return "#d6231e";
        case RiskLevel::pct30: return "#e04fa0";
        case RiskLevel::pct45: return "#8948c9";
        case RiskLevel::pct60: return "#2e5ee0";
        case RiskLevel::pct0: break;
    }
    return "#cccccc";
}

struct Frame {
    double min_x, min_y, max_x, max_y;
    double scale;
    double width, height;

    double sx(double x) const { return (x - min_x) * scale + 10.0; }
    double sy(double y) const { return height - 10.0 - (y - min_y) * scale; }
};

void append_path(std::string& svg, const MultiPolygon& g, const Frame& f,
                 const std::string& style) {
    if (g.empty()) return;
    std::string d;
    char buf[64];
    auto add_ring = [&](const Ring& r) {
        for (std::size_t i = 0; i + 1 < r.pts.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%c%.2f %.2f ", i == 0 ? 'M' : 'L',
                          f.sx(r.pts[i].x), f.sy(r.pts[i].y));
            d += buf;
        }
        d += "Z ";
    };
    for (const Polygon& p : g.parts) {
        add_ring(p.exterior);
        for (const Ring& h : p.holes) add_ring(h);
    }
    svg += "<path fill-rule=\"evenodd\" d=\"" + d + "\" " + style + "/>\n";
}

}  // namespace

void render_overlay_svg(const std::string& path, const RiskMap& gt, const RiskMap& pred,
                        const Domain& domain, const DailyOutcome& outcome) {
    Frame f{};
    f.min_x = f.min_y = 1e300;
    f.max_x = f.max_y = -1e300;
    for (const ProjCoord& v : domain.extent.exterior.pts) {
        f.min_x = std::min(f.min_x, v.x);
        f.min_y = std::min(f.min_y, v.y);
        f.max_x = std::max(f.max_x, v.x);
        f.max_y = std::max(f.max_y, v.y);
    }
    const double span_x = std::max(f.max_x - f.min_x, 1.0);
    const double span_y = std::max(f.max_y - f.min_y, 1.0);
    f.width = 960.0;
    f.scale = (f.width - 20.0) / span_x;
    f.height = span_y * f.scale + 20.0;

    std::string svg;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  f.width, f.height + 60.0, f.width, f.height + 60.0);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    append_path(svg, to_multi(domain.extent), f,
                "fill=\"#f4f6f8\" stroke=\"#889\" stroke-width=\"1\"");

    // Ground truth: solid fills, ascending level so higher bands sit on top.
    for (RiskLevel level : kNonZeroRiskLevels) {
        const MultiPolygon& band = gt.band(level);
        if (band.empty()) continue;
        append_path(svg, band, f,
                    std::string("fill=\"") + level_color(level) + "\" fill-opacity=\"0.55\"");
    }
    // Prediction: outlines with light fill.
    for (RiskLevel level : kNonZeroRiskLevels) {
        const MultiPolygon& band = pred.band(level);
        if (band.empty()) continue;
        append_path(svg, band, f,
                    std::string("fill=\"") + level_color(level) +
                        "\" fill-opacity=\"0.18\" stroke=\"" + level_color(level) +
                        "\" stroke-width=\"2\" stroke-dasharray=\"6 3\"");
    }
    // Overlapping solution regions, shaded darker.
    for (RiskLevel level : kNonZeroRiskLevels) {
        const MultiPolygon overlap = intersect(gt.band(level), pred.band(level));
        if (overlap.empty()) continue;
        append_path(svg, overlap, f,
                    std::string("fill=\"") + level_color(level) + "\" fill-opacity=\"0.9\"");
    }

    std::snprintf(buf, sizeof(buf),
                  "<text x=\"12\" y=\"%.0f\" font-family=\"sans-serif\" font-size=\"16\">"
                  "%s  gt_max=%s  pred_max=%s  tb=%s</text>\n",
                  f.height + 24.0, format_date(outcome.date).c_str(),
                  risk_label(outcome.gt_max).c_str(), risk_label(outcome.pred_max).c_str(),
                  outcome.tb ? (std::to_string(*outcome.tb).substr(0, 6)).c_str() : "absent");
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"12\" y=\"%.0f\" font-family=\"sans-serif\" font-size=\"12\" "
                  "fill=\"#555\">solid: ground truth, dashed: prediction, dark: overlap"
                  "</text>\n",
                  f.height + 44.0);
    svg += buf;
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open for writing: " + path);
    }
    out << svg;
    if (!out.good()) {
        throw DataError("write failed: " + path);
    }
}

}  // namespace torcast
