#ifndef ROBDA_PLOTS_HPP
#define ROBDA_PLOTS_HPP

// Builders for the diagnostic plots. Each returns validated PlotData.

#include "robda/chi2.hpp"
#include "robda/dataset.hpp"
#include "robda/diagnostics.hpp"
#include "robda/discriminant.hpp"
#include "robda/error.hpp"
#include "robda/farness.hpp"
#include "robda/format.hpp"
#include "robda/plot_data.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace robda {

namespace detail {

/// [lo, hi] widened by `frac` of its length on both sides; a single value
/// gets a unit-width range.
inline std::pair<double, double> padded_range(double lo, double hi, double frac = 0.05) {
    if (!(hi > lo)) return {lo - 0.5, hi + 0.5};
    const double pad = (hi - lo) * frac;
    return {lo - pad, hi + pad};
}

/// Roughly `target` evenly spaced round ticks inside [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    std::vector<double> ticks;
    const double raw = (hi - lo) / target;
    if (!(raw > 0.0) || !std::isfinite(raw)) return ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    const double first = std::ceil(lo / step) * step;
    for (int k = 0;; ++k) {
        double t = first + k * step;
        if (t > hi + 1e-9 * step) break;
        if (std::abs(t) < 1e-12 * step) t = 0.0;
        ticks.push_back(std::clamp(t, lo, hi));
    }
    return ticks;
}

inline Axis make_axis(std::string label, double lo, double hi, bool pad = true) {
    Axis a;
    a.label = std::move(label);
    std::tie(a.lo, a.hi) = pad ? padded_range(lo, hi) : std::pair{lo, hi};
    a.ticks = nice_ticks(a.lo, a.hi);
    return a;
}

inline std::vector<LegendEntry> class_legend(const std::vector<std::string>& names) {
    std::vector<LegendEntry> out;
    for (std::size_t g = 0; g < names.size(); ++g) out.push_back({names[g], class_color(g)});
    return out;
}

inline void check_class_names(const std::vector<CaseDiagnostics>& diags, std::size_t G) {
    for (const auto& d : diags)
        if (d.given >= G || d.predicted >= G) throw PlotError("plot: class index out of range");
}

/// Gray band covering PAC < 0.5 across the full horizontal range.
inline PlotRect pac_band(const Axis& x) {
    PlotRect band;
    band.x = x.lo;
    band.y = 0.0;
    band.width = x.hi - x.lo;
    band.height = 0.5;
    band.color = kBandColor;
    band.role = "band";
    band.label = "PAC < 0.5";
    return band;
}

inline Axis pac_axis() {
    Axis a;
    a.label = "P[alternative class]";
    a.lo = 0.0;
    a.hi = 1.0;
    a.ticks = {0.0, 0.25, 0.5, 0.75, 1.0};
    return a;
}

} // namespace detail

/// Points (score_1, score_2) colored by given label, with the identity line.
inline PlotData score_score_plot(const DAModel& model, const LabeledDataset& data) {
    if (model.num_classes() != 2) throw PlotError("score-score plot is limited to two classes");
    if (data.p() != model.p() || data.num_classes() != 2) throw PlotError("score-score plot: data does not match the model");
    PlotData pd;
    pd.kind = PlotKind::score_score;
    pd.title = "Score-score plot";
    PointSeries s{"cases", {}};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto pred = predict(model, data.row(i));
        PlotPoint pt{pred.scores(0), pred.scores(1), class_color(data.label(i)), false, std::to_string(i + 1)};
        lo = std::min({lo, pt.x, pt.y});
        hi = std::max({hi, pt.x, pt.y});
        s.points.push_back(std::move(pt));
    }
    if (data.n() == 0) lo = hi = 0.0;
    pd.x_axis = detail::make_axis("score " + model.class_names()[0], lo, hi);
    pd.y_axis = detail::make_axis("score " + model.class_names()[1], lo, hi);
    pd.series.push_back(std::move(s));
    pd.curves.push_back({"identity", {pd.x_axis.lo, pd.x_axis.hi}, {pd.x_axis.lo, pd.x_axis.hi}, kReferenceColor,
                         LineStyle::solid, false});
    pd.legend = detail::class_legend(model.class_names());
    pd.validate();
    return pd;
}

/// Stacked mosaic of a confusion matrix on the unit square: one column per
/// given class with width proportional to its size, split by predicted class
/// with heights proportional to the counts. Cell area equals count / total.
inline PlotData mosaic_plot(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw PlotError("mosaic plot: confusion matrix is empty");
    PlotData pd;
    pd.kind = PlotKind::mosaic;
    pd.title = "Stacked mosaic plot";
    pd.x_axis.label = "given class";
    pd.y_axis.label = "predicted class";
    pd.x_axis.lo = pd.y_axis.lo = 0.0;
    pd.x_axis.hi = pd.y_axis.hi = 1.0;
    pd.y_axis.ticks = {0.0, 0.25, 0.5, 0.75, 1.0};
    double x = 0.0;
    for (std::size_t r = 0; r < cm.rows(); ++r) {
        const auto rs = cm.row_sum(r);
        if (rs == 0) continue;
        const double width = static_cast<double>(rs) / static_cast<double>(total);
        pd.x_axis.ticks.push_back(std::min(x + 0.5 * width, 1.0));
        pd.x_axis.tick_labels.push_back(cm.class_names()[r]);
        double y = 0.0;
        for (std::size_t c = 0; c < cm.cols(); ++c) {
            const auto k = cm.at(r, c);
            if (k == 0) continue;
            const double height = static_cast<double>(k) / static_cast<double>(rs);
            PlotRect rect;
            rect.x = x;
            rect.y = y;
            rect.width = width;
            rect.height = height;
            rect.color = c < cm.rows() ? class_color(c) : kOutlierColor;
            rect.role = "cell";
            rect.label = cm.class_names()[r] + "->" + cm.column_label(c);
            rect.count = k;
            pd.rects.push_back(std::move(rect));
            y += height;
        }
        x += width;
    }
    pd.legend = detail::class_legend(cm.class_names());
    if (cm.has_outlier_column()) pd.legend.push_back({"outliers", kOutlierColor});
    pd.validate();
    return pd;
}

enum class Orientation { horizontal, vertical };

/// One bar per case, grouped by given class and sorted by decreasing
/// silhouette width within each class. Horizontal: bars extend along x.
inline PlotData silhouette_plot(const std::vector<CaseDiagnostics>& diags, const std::vector<std::string>& class_names,
                                Orientation orientation = Orientation::horizontal) {
    const auto G = class_names.size();
    detail::check_class_names(diags, G);
    const auto summary = silhouette_summary(diags, G);
    PlotData pd;
    pd.kind = PlotKind::silhouette;
    pd.title = "Silhouette plot";
    double slot = 0.0;
    std::vector<PlotRect> bars;
    for (std::size_t g = 0; g < G; ++g) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < diags.size(); ++i)
            if (diags[i].given == g) idx.push_back(i);
        if (idx.empty()) continue;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return diags[a].silhouette > diags[b].silhouette; });
        const double group_start = slot;
        for (auto i : idx) {
            const double s = diags[i].silhouette;
            PlotRect bar;
            bar.color = class_color(g);
            bar.role = "bar";
            bar.label = std::to_string(i + 1);
            const double a = std::min(0.0, s), len = std::abs(s);
            if (orientation == Orientation::horizontal) {
                bar.x = a;
                bar.width = len;
                bar.y = slot;
                bar.height = 1.0;
            } else {
                bar.y = a;
                bar.height = len;
                bar.x = slot;
                bar.width = 1.0;
            }
            bars.push_back(std::move(bar));
            slot += 1.0;
        }
        const double mid = 0.5 * (group_start + slot);
        const std::string text = class_names[g] + ": " + format_fixed(summary.per_class[g], 2);
        pd.annotations.push_back(orientation == Orientation::horizontal ? Annotation{1.0, mid, text}
                                                                        : Annotation{mid, 1.0, text});
        slot += 1.0; // gap between classes
    }
    const double extent = std::max(slot, 1.0);
    Axis value;
    value.label = "silhouette width";
    value.lo = -1.0;
    value.hi = 1.0;
    value.ticks = {-1.0, -0.5, 0.0, 0.5, 1.0};
    Axis cases;
    cases.label = "cases";
    cases.lo = 0.0;
    cases.hi = extent;
    if (orientation == Orientation::horizontal) {
        pd.x_axis = value;
        pd.y_axis = cases;
    } else {
        pd.x_axis = cases;
        pd.y_axis = value;
    }
    if (orientation == Orientation::horizontal) {
        // first class on top, widest bar first
        for (auto& b : bars) b.y = extent - b.y - b.height;
        for (auto& a : pd.annotations) a.y = extent - a.y;
    }
    pd.rects = std::move(bars);
    if (!diags.empty()) {
        const std::string text = "overall average: " + format_fixed(summary.overall, 2);
        pd.annotations.push_back(orientation == Orientation::horizontal ? Annotation{-1.0, 0.0, text}
                                                                        : Annotation{0.0, -1.0, text});
    }
    pd.legend = detail::class_legend(class_names);
    pd.validate();
    return pd;
}

/// Binned running average of PAC against a feature.
struct QrpAverage {
    std::vector<double> centers;      ///< mean feature value per bin
    std::vector<double> means;        ///< mean PAC per bin
    std::vector<double> half_widths;  ///< sample sd / sqrt(bin size), 0 for singleton bins
    std::vector<std::size_t> sizes;
    bool degenerate = false;          ///< constant feature: a single bin
};

/// Sorts cases by feature (ties by index) and splits them into `bins`
/// equal-count bins; the first (m mod bins) bins get one extra case.
inline QrpAverage qrp_average(const std::vector<double>& feature, const std::vector<double>& pac_values,
                              std::size_t bins = 10) {
    if (feature.size() != pac_values.size()) throw ShapeError("qrp_average: feature and PAC lengths differ");
    QrpAverage out;
    const auto m = feature.size();
    if (m == 0) return out;
    if (bins == 0) throw ConfigError("qrp_average: bins must be positive");
    const auto [mn, mx] = std::minmax_element(feature.begin(), feature.end());
    if (*mn == *mx) {
        out.degenerate = true;
        bins = 1;
    }
    bins = std::min(bins, m);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return feature[a] < feature[b]; });
    std::size_t pos = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t k = m / bins + (b < m % bins ? 1 : 0);
        double fs = 0.0, ps = 0.0;
        for (std::size_t j = pos; j < pos + k; ++j) {
            fs += feature[order[j]];
            ps += pac_values[order[j]];
        }
        const double mean = ps / static_cast<double>(k);
        double ss = 0.0;
        for (std::size_t j = pos; j < pos + k; ++j) ss += (pac_values[order[j]] - mean) * (pac_values[order[j]] - mean);
        const double se = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) / std::sqrt(static_cast<double>(k)) : 0.0;
        out.centers.push_back(fs / static_cast<double>(k));
        out.means.push_back(mean);
        out.half_widths.push_back(se);
        out.sizes.push_back(k);
        pos += k;
    }
    return out;
}

enum class QrpMode { per_class, combined };

/// PAC against a per-case feature. per_class: colored by predicted class,
/// black border on overall outliers. combined: colored by given class with
/// the binned average PAC curve and one standard error on either side.
/// When `given_class` is set only cases with that given label are drawn.
inline PlotData quasi_residual_plot(const std::vector<CaseDiagnostics>& diags, const std::vector<double>& feature,
                                    const std::vector<std::string>& class_names, QrpMode mode,
                                    std::optional<std::size_t> given_class = std::nullopt,
                                    std::string feature_label = "feature") {
    if (feature.size() != diags.size()) throw ShapeError("quasi residual plot: feature length differs from case count");
    const auto G = class_names.size();
    detail::check_class_names(diags, G);
    if (given_class && *given_class >= G) throw PlotError("quasi residual plot: class index out of range");
    std::vector<double> fx, pacs;
    PlotData pd;
    pd.kind = PlotKind::quasi_residual;
    pd.title = "Quasi residual plot" + (given_class ? " of class " + class_names[*given_class] : std::string());
    PointSeries s{"cases", {}};
    for (std::size_t i = 0; i < diags.size(); ++i) {
        const auto& d = diags[i];
        if (given_class && d.given != *given_class) continue;
        if (!std::isfinite(feature[i])) throw DomainError("quasi residual plot: non-finite feature value");
        const bool per_class = mode == QrpMode::per_class;
        s.points.push_back({feature[i], d.pac, class_color(per_class ? d.predicted : d.given),
                            per_class && d.outlier_distance, std::to_string(i + 1)});
        fx.push_back(feature[i]);
        pacs.push_back(d.pac);
    }
    double lo = 0.0, hi = 1.0;
    if (!fx.empty()) std::tie(lo, hi) = std::pair{*std::min_element(fx.begin(), fx.end()), *std::max_element(fx.begin(), fx.end())};
    pd.x_axis = detail::make_axis(std::move(feature_label), lo, hi);
    pd.y_axis = detail::pac_axis();
    pd.rects.push_back(detail::pac_band(pd.x_axis));
    pd.series.push_back(std::move(s));
    if (mode == QrpMode::combined && !fx.empty()) {
        const auto avg = qrp_average(fx, pacs);
        if (avg.degenerate) pd.warnings.push_back("constant feature: average curve reduced to a single bin");
        Curve mean{"average PAC", {}, {}, kRedColor, LineStyle::solid, false};
        Curve upper{"average + SE", {}, {}, kRedColor, LineStyle::dashed, false};
        Curve lower{"average - SE", {}, {}, kRedColor, LineStyle::dashed, false};
        for (std::size_t b = 0; b < avg.centers.size(); ++b) {
            const double c = avg.centers[b];
            mean.x.push_back(c);
            mean.y.push_back(avg.means[b]);
            upper.x.push_back(c);
            upper.y.push_back(std::min(1.0, avg.means[b] + avg.half_widths[b]));
            lower.x.push_back(c);
            lower.y.push_back(std::max(0.0, avg.means[b] - avg.half_widths[b]));
        }
        pd.curves.push_back(std::move(mean));
        pd.curves.push_back(std::move(upper));
        pd.curves.push_back(std::move(lower));
    }
    pd.legend = detail::class_legend(class_names);
    pd.validate();
    return pd;
}

inline constexpr double kFarnessAxisMax = 4.0;

/// Horizontal class-map position t in [0, 4] with
/// farness = (Phi(t) - Phi(0)) / (Phi(4) - Phi(0)).
inline double farness_position(double farness) {
    if (!(farness > 0.0)) return 0.0;
    if (farness >= 1.0) return kFarnessAxisMax;
    const double a = normal_cdf(0.0), b = normal_cdf(kFarnessAxisMax);
    return std::clamp(normal_quantile(a + farness * (b - a)), 0.0, kFarnessAxisMax);
}

inline double farness_from_position(double t) {
    const double a = normal_cdf(0.0), b = normal_cdf(kFarnessAxisMax);
    return (normal_cdf(t) - a) / (b - a);
}

inline constexpr std::array<double, 6> kFarnessTicks = {0.0, 0.5, 0.75, 0.9, 0.99, 1.0};

/// Class map of class g: PAC against transformed farness to class g for the
/// cases with given label g. Colored by predicted class; black border on
/// farness-based overall outliers.
inline PlotData class_map(const std::vector<CaseDiagnostics>& diags, const FarnessModel& fm, std::size_t g,
                          const std::vector<std::string>& class_names) {
    const auto G = class_names.size();
    if (g >= G) throw PlotError("class map: class index out of range");
    if (fm.num_classes() != G) throw PlotError("class map: farness model does not match the classes");
    if (!fm.available(g)) throw PlotError("class map: farness unavailable for class '" + class_names[g] + "'");
    detail::check_class_names(diags, G);
    PlotData pd;
    pd.kind = PlotKind::class_map;
    pd.title = "Class map of class " + class_names[g];
    PointSeries s{"cases", {}};
    for (std::size_t i = 0; i < diags.size(); ++i) {
        const auto& d = diags[i];
        if (d.given != g) continue;
        Eigen::VectorXd far = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(G), std::numeric_limits<double>::quiet_NaN());
        for (std::size_t k = 0; k < G; ++k)
            if (fm.available(k)) far(static_cast<Eigen::Index>(k)) = fm.farness(k, d.distances(static_cast<Eigen::Index>(k)));
        s.points.push_back({farness_position(far(static_cast<Eigen::Index>(g))), d.pac, class_color(d.predicted),
                            farness_outlier(far, fm.cutoff_prob()), std::to_string(i + 1)});
    }
    pd.x_axis.label = "farness from given class";
    pd.x_axis.lo = 0.0;
    pd.x_axis.hi = kFarnessAxisMax;
    pd.x_axis.transform = "farness";
    for (double f : kFarnessTicks) {
        pd.x_axis.ticks.push_back(farness_position(f));
        pd.x_axis.tick_labels.push_back(format_short(f, 3));
    }
    pd.y_axis = detail::pac_axis();
    pd.rects.push_back(detail::pac_band(pd.x_axis));
    pd.series.push_back(std::move(s));
    pd.legend = detail::class_legend(class_names);
    pd.validate();
    return pd;
}

/// Chi-squared Q-Q plot with the identity line and the cutoff line
/// (horizontal, at the chi-squared cutoff quantile).
inline PlotData qq_plot(const QQData& qq) {
    if (qq.observed.empty()) throw PlotError("Q-Q plot: no data");
    PlotData pd;
    pd.kind = PlotKind::qq;
    pd.title = "Chi-squared Q-Q plot";
    PointSeries s{"squared distances", {}};
    for (std::size_t i = 0; i < qq.observed.size(); ++i)
        s.points.push_back({qq.theoretical[i], qq.observed[i], 0, false, {}});
    const double lo = std::min(qq.identity_lo, qq.cutoff), hi = std::max(qq.identity_hi, qq.cutoff);
    pd.x_axis = detail::make_axis("chi-squared(" + std::to_string(qq.dof) + ") quantiles", qq.identity_lo, qq.identity_hi);
    pd.y_axis = detail::make_axis("squared robust distances", lo, hi);
    pd.series.push_back(std::move(s));
    pd.curves.push_back({"identity", {qq.identity_lo, qq.identity_hi}, {qq.identity_lo, qq.identity_hi},
                         kReferenceColor, LineStyle::solid, false});
    pd.curves.push_back({"cutoff", {pd.x_axis.lo, pd.x_axis.hi}, {qq.cutoff, qq.cutoff}, kRedColor,
                         LineStyle::dashdot, false});
    pd.validate();
    return pd;
}

inline constexpr std::size_t kBoundaryGrid = 400;
inline constexpr std::size_t kEllipsePoints = 200;

namespace detail {

/// Marching squares for the zero level of f sampled on an (nx x ny) grid
/// (f indexed [i * ny + j]); appends segment endpoints, mapped through
/// (xs, ys), to `curve`. `keep(x, y)` filters segments by their midpoint.
template <class Keep>
void zero_contour(const std::vector<double>& f, const std::vector<double>& xs, const std::vector<double>& ys,
                  Curve& curve, Keep keep) {
    const auto nx = xs.size(), ny = ys.size();
    auto at = [&](std::size_t i, std::size_t j) { return f[i * ny + j]; };
    auto cross = [](double x0, double y0, double f0, double x1, double y1, double f1) {
        const double t = f0 / (f0 - f1);
        return std::pair{x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
    };
    for (std::size_t i = 0; i + 1 < nx; ++i)
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            // corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
            const std::array<double, 4> v{at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            const std::array<double, 4> cx{xs[i], xs[i + 1], xs[i + 1], xs[i]};
            const std::array<double, 4> cy{ys[j], ys[j], ys[j + 1], ys[j + 1]};
            std::vector<std::pair<double, double>> pts;
            for (int e = 0; e < 4; ++e) {
                const int n = (e + 1) % 4;
                if ((v[e] > 0.0) != (v[n] > 0.0)) pts.push_back(cross(cx[e], cy[e], v[e], cx[n], cy[n], v[n]));
            }
            auto emit = [&](std::pair<double, double> a, std::pair<double, double> b) {
                if (!keep(0.5 * (a.first + b.first), 0.5 * (a.second + b.second))) return;
                curve.x.push_back(a.first);
                curve.y.push_back(a.second);
                curve.x.push_back(b.first);
                curve.y.push_back(b.second);
            };
            if (pts.size() == 2) {
                emit(pts[0], pts[1]);
            } else if (pts.size() == 4) {
                // saddle: pair crossings by the sign of the cell center
                const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                if ((center > 0.0) == (v[0] > 0.0)) {
                    emit(pts[0], pts[3]);
                    emit(pts[1], pts[2]);
                } else {
                    emit(pts[0], pts[1]);
                    emit(pts[2], pts[3]);
                }
            }
        }
}

} // namespace detail

/// Bivariate scatter plot colored by given class with the tolerance ellipses
/// (distance = cutoff) of every class and the traced decision boundaries.
inline PlotData scatter_plot(const DAModel& model, const LabeledDataset& data) {
    if (model.p() != 2 || data.p() != 2) throw PlotError("scatter plot is limited to bivariate data");
    if (data.num_classes() != model.num_classes()) throw PlotError("scatter plot: data does not match the model");
    if (data.n() == 0) throw PlotError("scatter plot: no data");
    const auto G = model.num_classes();
    PlotData pd;
    pd.kind = PlotKind::scatter;
    pd.title = model.spec().name() + " scatter plot";
    PointSeries s{"cases", {}};
    for (std::size_t i = 0; i < data.n(); ++i)
        s.points.push_back({data.features()(static_cast<Eigen::Index>(i), 0),
                            data.features()(static_cast<Eigen::Index>(i), 1), class_color(data.label(i)), false,
                            std::to_string(i + 1)});
    const auto box = bounding_box(data.features());
    double xlo = box.lo(0), xhi = box.hi(0), ylo = box.lo(1), yhi = box.hi(1);

    const double r = model.distance_cutoff();
    for (std::size_t g = 0; g < G; ++g) {
        const auto& comp = model.component(g);
        const Eigen::MatrixXd L = comp.cholesky().matrixL();
        Curve e{"tolerance ellipse " + model.class_names()[g], {}, {}, class_color(g), LineStyle::dashed, false};
        for (std::size_t k = 0; k <= kEllipsePoints; ++k) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(k % kEllipsePoints) /
                              static_cast<double>(kEllipsePoints);
            const Eigen::Vector2d pt = comp.center() + r * L * Eigen::Vector2d(std::cos(th), std::sin(th));
            e.x.push_back(pt(0));
            e.y.push_back(pt(1));
            xlo = std::min(xlo, pt(0));
            xhi = std::max(xhi, pt(0));
            ylo = std::min(ylo, pt(1));
            yhi = std::max(yhi, pt(1));
        }
        pd.curves.push_back(std::move(e));
    }

    // decision boundaries over the data bounding box
    std::vector<double> xs(kBoundaryGrid), ys(kBoundaryGrid);
    for (std::size_t i = 0; i < kBoundaryGrid; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(kBoundaryGrid - 1);
        xs[i] = box.lo(0) + t * (box.hi(0) - box.lo(0));
        ys[i] = box.lo(1) + t * (box.hi(1) - box.lo(1));
    }
    if (box.hi(0) > box.lo(0) && box.hi(1) > box.lo(1)) {
        std::vector<Eigen::VectorXd> scores(kBoundaryGrid * kBoundaryGrid);
        for (std::size_t i = 0; i < kBoundaryGrid; ++i)
            for (std::size_t j = 0; j < kBoundaryGrid; ++j)
                scores[i * kBoundaryGrid + j] = predict(model, Eigen::Vector2d(xs[i], ys[j])).scores;
        Curve boundary{"decision boundary", {}, {}, kBlackColor, LineStyle::solid, true};
        std::vector<double> diff(scores.size());
        for (std::size_t a = 0; a < G; ++a)
            for (std::size_t b = a + 1; b < G; ++b) {
                const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
                for (std::size_t k = 0; k < scores.size(); ++k) diff[k] = scores[k](ia) - scores[k](ib);
                detail::zero_contour(diff, xs, ys, boundary, [&](double x, double y) {
                    if (G == 2) return true;
                    const auto sc = predict(model, Eigen::Vector2d(x, y)).scores;
                    const double top = std::min(sc(ia), sc(ib));
                    for (Eigen::Index k = 0; k < sc.size(); ++k)
                        if (k != ia && k != ib && sc(k) > top) return false;
                    return true;
                });
            }
        pd.curves.push_back(std::move(boundary));
    }

    const auto& names = data.feature_names();
    pd.x_axis = detail::make_axis(names.size() == 2 ? names[0] : "x1", xlo, xhi);
    pd.y_axis = detail::make_axis(names.size() == 2 ? names[1] : "x2", ylo, yhi);
    pd.series.push_back(std::move(s));
    pd.legend = detail::class_legend(model.class_names());
    pd.validate();
    return pd;
}

} // namespace robda

#endif // ROBDA_PLOTS_HPP
