#ifndef ROBDA_SVG_HPP
#define ROBDA_SVG_HPP

// Standalone SVG 1.1 rendering and plot-data CSV export of PlotData.

#include "robda/format.hpp"
#include "robda/plot_data.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>

namespace robda {

struct SvgStyle {
    double width = 640.0;
    double height = 480.0;
    double margin_left = 70.0;
    double margin_right = 140.0;
    double margin_top = 40.0;
    double margin_bottom = 60.0;
    double point_radius = 3.0;
    double font_size = 12.0;
};

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default:
            // drop control characters that XML 1.0 forbids
            if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r') continue;
            out += c;
        }
    }
    return out;
}

namespace detail {

class SvgFrame {
public:
    SvgFrame(const PlotData& pd, const SvgStyle& st)
        : pd_(pd), st_(st),
          w_(st.width - st.margin_left - st.margin_right),
          h_(st.height - st.margin_top - st.margin_bottom) {}

    double px(double x) const {
        const auto& a = pd_.x_axis;
        return st_.margin_left + (std::clamp(x, a.lo, a.hi) - a.lo) / (a.hi - a.lo) * w_;
    }
    double py(double y) const {
        const auto& a = pd_.y_axis;
        return st_.margin_top + h_ - (std::clamp(y, a.lo, a.hi) - a.lo) / (a.hi - a.lo) * h_;
    }
    double plot_width() const { return w_; }
    double plot_height() const { return h_; }

private:
    const PlotData& pd_;
    const SvgStyle& st_;
    double w_, h_;
};

inline std::string num(double v) { return format_fixed(v, 3); }

inline std::string_view dasharray(LineStyle s) {
    switch (s) {
    case LineStyle::dashed: return " stroke-dasharray=\"6,4\"";
    case LineStyle::dashdot: return " stroke-dasharray=\"8,3,2,3\"";
    case LineStyle::solid: break;
    }
    return "";
}

inline std::string tick_label(const Axis& a, std::size_t k) {
    return a.tick_labels.empty() ? format_short(a.ticks[k], 4) : a.tick_labels[k];
}

} // namespace detail

/// Renders validated plot data. Coordinates are clamped to the axis ranges;
/// output depends only on the input, so identical data gives identical bytes.
inline std::string render_svg(const PlotData& pd, const SvgStyle& st = {}) {
    pd.validate();
    if (!(st.width > st.margin_left + st.margin_right) || !(st.height > st.margin_top + st.margin_bottom))
        throw PlotError("render_svg: canvas smaller than its margins");
    const detail::SvgFrame f(pd, st);
    using detail::num;
    std::ostringstream o;
    const double left = st.margin_left, top = st.margin_top, right = left + f.plot_width(),
                 bottom = top + f.plot_height();
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(st.width) << "\" height=\""
      << num(st.height) << "\" viewBox=\"0 0 " << num(st.width) << ' ' << num(st.height) << "\" data-kind=\""
      << to_string(pd.kind) << "\" font-family=\"sans-serif\" font-size=\"" << num(st.font_size) << "\">\n";
    o << "<title>" << xml_escape(pd.title) << "</title>\n";
    for (const auto& w : pd.warnings) o << "<desc>warning: " << xml_escape(w) << "</desc>\n";
    o << "<defs><clipPath id=\"plot-area\"><rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
      << num(f.plot_width()) << "\" height=\"" << num(f.plot_height()) << "\"/></clipPath></defs>\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << num(st.width) << "\" height=\"" << num(st.height)
      << "\" fill=\"#FFFFFF\"/>\n";

    // rectangles: bands first, then cells and bars
    o << "<g id=\"rects\">\n";
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& r : pd.rects) {
            if ((r.role == "band") != (pass == 0)) continue;
            const double x0 = f.px(r.x), x1 = f.px(r.x + r.width);
            const double y0 = f.py(r.y + r.height), y1 = f.py(r.y);
            o << "<rect class=\"" << xml_escape(r.role) << "\" x=\"" << num(x0) << "\" y=\"" << num(y0)
              << "\" width=\"" << num(x1 - x0) << "\" height=\"" << num(y1 - y0) << "\" fill=\""
              << kPalette[r.color] << "\"";
            if (r.role == "cell") o << " stroke=\"#FFFFFF\" stroke-width=\"0.5\" data-count=\"" << r.count << "\"";
            if (!r.label.empty()) o << " data-label=\"" << xml_escape(r.label) << "\"";
            o << "/>\n";
        }
    o << "</g>\n";

    // axes frame and ticks
    o << "<g id=\"axes\" stroke=\"#000000\" fill=\"none\">\n";
    o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(f.plot_width()) << "\" height=\""
      << num(f.plot_height()) << "\"/>\n";
    for (std::size_t k = 0; k < pd.x_axis.ticks.size(); ++k) {
        const double x = f.px(pd.x_axis.ticks[k]);
        o << "<line x1=\"" << num(x) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(bottom + 5) << "\"/>\n";
    }
    for (std::size_t k = 0; k < pd.y_axis.ticks.size(); ++k) {
        const double y = f.py(pd.y_axis.ticks[k]);
        o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\"" << num(y)
          << "\"/>\n";
    }
    o << "</g>\n<g id=\"labels\" fill=\"#000000\">\n";
    for (std::size_t k = 0; k < pd.x_axis.ticks.size(); ++k)
        o << "<text x=\"" << num(f.px(pd.x_axis.ticks[k])) << "\" y=\"" << num(bottom + 5 + st.font_size)
          << "\" text-anchor=\"middle\">" << xml_escape(detail::tick_label(pd.x_axis, k)) << "</text>\n";
    for (std::size_t k = 0; k < pd.y_axis.ticks.size(); ++k)
        o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(f.py(pd.y_axis.ticks[k]) + 0.35 * st.font_size)
          << "\" text-anchor=\"end\">" << xml_escape(detail::tick_label(pd.y_axis, k)) << "</text>\n";
    o << "<text x=\"" << num(left + 0.5 * f.plot_width()) << "\" y=\"" << num(st.height - 0.6 * st.font_size)
      << "\" text-anchor=\"middle\">" << xml_escape(pd.x_axis.label) << "</text>\n";
    const double ylx = 1.2 * st.font_size, yly = top + 0.5 * f.plot_height();
    o << "<text x=\"" << num(ylx) << "\" y=\"" << num(yly) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << num(ylx) << ' ' << num(yly) << ")\">" << xml_escape(pd.y_axis.label) << "</text>\n";
    o << "<text x=\"" << num(left + 0.5 * f.plot_width()) << "\" y=\"" << num(0.6 * top)
      << "\" text-anchor=\"middle\" font-weight=\"bold\">" << xml_escape(pd.title) << "</text>\n";
    o << "</g>\n";

    // curves
    o << "<g id=\"curves\" fill=\"none\" clip-path=\"url(#plot-area)\">\n";
    for (const auto& c : pd.curves) {
        if (c.x.empty()) continue;
        if (c.segments) {
            o << "<path class=\"curve\" data-name=\"" << xml_escape(c.name) << "\" d=\"";
            for (std::size_t k = 0; k + 1 < c.x.size(); k += 2)
                o << (k ? " " : "") << 'M' << num(f.px(c.x[k])) << ' ' << num(f.py(c.y[k])) << 'L'
                  << num(f.px(c.x[k + 1])) << ' ' << num(f.py(c.y[k + 1]));
            o << "\"";
        } else {
            o << "<polyline class=\"curve\" data-name=\"" << xml_escape(c.name) << "\" points=\"";
            for (std::size_t k = 0; k < c.x.size(); ++k)
                o << (k ? " " : "") << num(f.px(c.x[k])) << ',' << num(f.py(c.y[k]));
            o << "\"";
        }
        o << " stroke=\"" << kPalette[c.color] << "\" stroke-width=\"1.5\"" << detail::dasharray(c.style) << "/>\n";
    }
    o << "</g>\n";

    // points
    o << "<g id=\"points\">\n";
    for (const auto& s : pd.series)
        for (const auto& pt : s.points) {
            o << "<circle cx=\"" << num(f.px(pt.x)) << "\" cy=\"" << num(f.py(pt.y)) << "\" r=\""
              << num(st.point_radius) << "\" fill=\"" << kPalette[pt.color] << "\"";
            if (pt.border) o << " stroke=\"#000000\" stroke-width=\"1.5\"";
            if (!pt.label.empty()) o << " data-label=\"" << xml_escape(pt.label) << "\"";
            o << "/>\n";
        }
    o << "</g>\n";

    // annotations and legend
    o << "<g id=\"annotations\" fill=\"#000000\">\n";
    for (const auto& a : pd.annotations)
        o << "<text x=\"" << num(f.px(a.x)) << "\" y=\"" << num(f.py(a.y)) << "\">" << xml_escape(a.text)
          << "</text>\n";
    o << "</g>\n<g id=\"legend\">\n";
    const double lx = right + 15;
    for (std::size_t k = 0; k < pd.legend.size(); ++k) {
        const double ly = top + 10 + 1.6 * st.font_size * static_cast<double>(k);
        o << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 0.8 * st.font_size) << "\" width=\""
          << num(st.font_size) << "\" height=\"" << num(st.font_size) << "\" fill=\"" << kPalette[pd.legend[k].color]
          << "\"/>\n";
        o << "<text x=\"" << num(lx + 1.5 * st.font_size) << "\" y=\"" << num(ly) << "\">"
          << xml_escape(pd.legend[k].label) << "</text>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

/// One row per point, rectangle and curve vertex, coordinates at 17
/// significant digits.
inline std::string export_plot_csv(const PlotData& pd) {
    pd.validate();
    std::ostringstream o;
    o << "# plot: " << to_string(pd.kind) << '\n'
      << "# x axis: " << pd.x_axis.label << (pd.x_axis.transform.empty() ? "" : " (transform: " + pd.x_axis.transform + ")")
      << "; y axis: " << pd.y_axis.label << '\n'
      << "# point: (x, y) data coordinates, color = palette index, border = 1 for outlined points\n"
      << "# rect: (x, y) lower-left corner, width, height; role cell/bar/band; count for mosaic cells\n"
      << "# curve: vertex `index` of the named curve; style solid/dashed/dashdot; segments pair consecutive vertices\n";
    o << "element,series,index,x,y,width,height,color,border,style,label,count\n";
    auto q = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
        return out + "\"";
    };
    for (const auto& s : pd.series)
        for (std::size_t k = 0; k < s.points.size(); ++k) {
            const auto& pt = s.points[k];
            o << "point," << q(s.name) << ',' << k << ',' << format_double(pt.x) << ',' << format_double(pt.y)
              << ",,," << pt.color << ',' << (pt.border ? 1 : 0) << ",," << q(pt.label) << ",\n";
        }
    for (std::size_t k = 0; k < pd.rects.size(); ++k) {
        const auto& r = pd.rects[k];
        o << "rect," << q(r.role) << ',' << k << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
          << format_double(r.width) << ',' << format_double(r.height) << ',' << r.color << ",,," << q(r.label) << ','
          << r.count << '\n';
    }
    for (const auto& c : pd.curves)
        for (std::size_t k = 0; k < c.x.size(); ++k)
            o << "curve," << q(c.name) << ',' << k << ',' << format_double(c.x[k]) << ',' << format_double(c.y[k])
              << ",,," << c.color << ",," << to_string(c.style) << (c.segments ? "-segments" : "") << ",,\n";
    return o.str();
}

inline void save_svg(const PlotData& pd, const std::filesystem::path& path, const SvgStyle& st = {}) {
    write_file_atomic(path, render_svg(pd, st));
}

inline void save_plot_csv(const PlotData& pd, const std::filesystem::path& path) {
    write_file_atomic(path, export_plot_csv(pd));
}

} // namespace robda

#endif // ROBDA_SVG_HPP
