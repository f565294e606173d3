#ifndef ROBDA_PLOT_DATA_HPP
#define ROBDA_PLOT_DATA_HPP

// Renderer-agnostic description of a plot.

#include "robda/error.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robda {

enum class PlotKind { score_score, mosaic, silhouette, quasi_residual, class_map, qq, scatter };

inline std::string_view to_string(PlotKind k) {
    switch (k) {
    case PlotKind::score_score: return "score_score";
    case PlotKind::mosaic: return "mosaic";
    case PlotKind::silhouette: return "silhouette";
    case PlotKind::quasi_residual: return "quasi_residual";
    case PlotKind::class_map: return "class_map";
    case PlotKind::qq: return "qq";
    case PlotKind::scatter: return "scatter";
    }
    return "unknown";
}

// Okabe-Ito cycle for classes, then fixed special colors.
inline constexpr std::array<std::string_view, 12> kPalette = {
    "#E69F00", "#56B4E9", "#009E73", "#F0E442", "#0072B2", "#D55E00", "#CC79A7",
    "#404040", // outlier class
    "#D9D9D9", // band
    "#999999", // identity / reference
    "#000000", "#E41A1C"};
inline constexpr std::size_t kClassColors = 7;
inline constexpr std::size_t kOutlierColor = 7;
inline constexpr std::size_t kBandColor = 8;
inline constexpr std::size_t kReferenceColor = 9;
inline constexpr std::size_t kBlackColor = 10;
inline constexpr std::size_t kRedColor = 11;

inline constexpr std::size_t class_color(std::size_t g) { return g % kClassColors; }

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    std::size_t color = 0;
    bool border = false;
    std::string label;
};

struct PointSeries {
    std::string name;
    std::vector<PlotPoint> points;
};

/// Rectangles: mosaic cells ("cell"), silhouette bars ("bar") and shaded
/// background bands ("band"). x, y is the lower-left corner in data units.
struct PlotRect {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;
    std::size_t color = 0;
    std::string role = "cell";
    std::string label;
    std::size_t count = 0;
};

enum class LineStyle { solid, dashed, dashdot };

inline std::string_view to_string(LineStyle s) {
    switch (s) {
    case LineStyle::solid: return "solid";
    case LineStyle::dashed: return "dashed";
    case LineStyle::dashdot: return "dashdot";
    }
    return "solid";
}

/// A polyline, or with `segments` set, a list of disjoint segments
/// (points 2k and 2k+1 form segment k).
struct Curve {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::size_t color = kBlackColor;
    LineStyle style = LineStyle::solid;
    bool segments = false;
};

struct Axis {
    std::string label;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> ticks;
    std::vector<std::string> tick_labels; ///< empty: labels generated from tick values
    std::string transform;                ///< e.g. "farness" when positions are transformed
};

struct LegendEntry {
    std::string label;
    std::size_t color = 0;
};

struct Annotation {
    double x = 0.0;
    double y = 0.0;
    std::string text;
};

struct PlotData {
    PlotKind kind = PlotKind::scatter;
    std::string title;
    Axis x_axis;
    Axis y_axis;
    std::vector<PointSeries> series;
    std::vector<PlotRect> rects;
    std::vector<Curve> curves;
    std::vector<LegendEntry> legend;
    std::vector<Annotation> annotations;
    std::vector<std::string> warnings;

    /// Throws PlotError when a coordinate is not finite, a tick falls
    /// outside its axis, an axis range is empty or a color is out of range.
    void validate() const {
        auto finite = [](double v, const char* what) {
            if (!std::isfinite(v)) throw PlotError(std::string("plot data: non-finite ") + what);
        };
        auto color_ok = [](std::size_t c) {
            if (c >= kPalette.size()) throw PlotError("plot data: color index out of range");
        };
        for (const Axis* a : {&x_axis, &y_axis}) {
            finite(a->lo, "axis bound");
            finite(a->hi, "axis bound");
            if (!(a->lo < a->hi)) throw PlotError("plot data: empty axis range on '" + a->label + "'");
            for (double t : a->ticks) {
                finite(t, "tick");
                if (t < a->lo || t > a->hi) throw PlotError("plot data: tick outside axis range on '" + a->label + "'");
            }
            if (!a->tick_labels.empty() && a->tick_labels.size() != a->ticks.size())
                throw PlotError("plot data: tick labels do not match ticks");
        }
        for (const auto& s : series)
            for (const auto& pt : s.points) {
                finite(pt.x, "point");
                finite(pt.y, "point");
                color_ok(pt.color);
            }
        for (const auto& r : rects) {
            finite(r.x, "rectangle");
            finite(r.y, "rectangle");
            finite(r.width, "rectangle");
            finite(r.height, "rectangle");
            if (r.width < 0.0 || r.height < 0.0) throw PlotError("plot data: negative rectangle size");
            color_ok(r.color);
        }
        for (const auto& c : curves) {
            if (c.x.size() != c.y.size()) throw PlotError("plot data: curve coordinate count mismatch");
            if (c.segments && c.x.size() % 2) throw PlotError("plot data: odd segment endpoint count");
            for (double v : c.x) finite(v, "curve");
            for (double v : c.y) finite(v, "curve");
            color_ok(c.color);
        }
        for (const auto& l : legend) color_ok(l.color);
        for (const auto& a : annotations) {
            finite(a.x, "annotation");
            finite(a.y, "annotation");
        }
    }
};

} // namespace robda

#endif // ROBDA_PLOT_DATA_HPP
