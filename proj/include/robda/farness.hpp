#ifndef ROBDA_FARNESS_HPP
#define ROBDA_FARNESS_HPP

#include "robda/dataset.hpp"
#include "robda/discriminant.hpp"
#include "robda/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace robda {

/// Empirical CDF of a sample of distances with Hazen plotting positions
/// (k - 0.5) / m, linearly interpolated between order statistics and clamped
/// to [0.5 / m, 1 - 0.5 / m].
class DistanceCdf {
public:
    DistanceCdf() = default;
    explicit DistanceCdf(std::vector<double> distances) : sorted_(std::move(distances)) {
        if (sorted_.empty()) throw DomainError("DistanceCdf: empty sample");
        std::sort(sorted_.begin(), sorted_.end());
    }

    std::size_t size() const noexcept { return sorted_.size(); }
    const std::vector<double>& sorted() const noexcept { return sorted_; }

    /// Plotting position of the k-th order statistic (0-based).
    double position(std::size_t k) const { return (static_cast<double>(k) + 0.5) / static_cast<double>(size()); }

    double operator()(double rd) const {
        const auto m = size();
        if (rd <= sorted_.front()) return position(0);
        if (rd >= sorted_.back()) return position(m - 1);
        // last order statistic <= rd; the next one is strictly larger
        const auto upper = std::upper_bound(sorted_.begin(), sorted_.end(), rd);
        const auto k = static_cast<std::size_t>(upper - sorted_.begin()) - 1;
        const double lo = sorted_[k], hi = sorted_[k + 1];
        const double t = (rd - lo) / (hi - lo);
        return position(k) + t * (position(k + 1) - position(k));
    }

private:
    std::vector<double> sorted_;
};

inline constexpr double kFarnessTrimMads = 3.0;
inline constexpr std::size_t kFarnessMinCases = 5;

/// Drops gross outliers from a class's own-class distances: a case is left
/// out when ln(rd^2) exceeds the median of the class's ln(rd^2) values by more
/// than kFarnessTrimMads upper-side scaled MADs (median deviation of the values
/// above the median). On the log scale a long but smooth right tail stays in
/// the sample, so the CDF adapts to non-normal classes.
inline std::vector<double> trim_gross_outliers(const std::vector<double>& distances) {
    if (distances.empty()) return {};
    std::vector<double> logs;
    for (double d : distances) logs.push_back(std::log(std::max(d * d, std::numeric_limits<double>::min())));
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const auto n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    const double med = median(logs);
    std::vector<double> dev;
    for (double l : logs)
        if (l > med) dev.push_back(l - med);
    const double scale = dev.empty() ? 0.0 : 1.4826 * median(dev);
    std::vector<double> kept;
    for (std::size_t i = 0; i < distances.size(); ++i)
        if (!(scale > 0.0) || logs[i] <= med + kFarnessTrimMads * scale) kept.push_back(distances[i]);
    return kept;
}

/// Per-class distance CDFs used to turn robust distances into farness values.
class FarnessModel {
public:
    FarnessModel(std::vector<std::optional<DistanceCdf>> classes, std::vector<std::string> class_names,
                 double cutoff_prob)
        : classes_(std::move(classes)), names_(std::move(class_names)), cutoff_prob_(cutoff_prob) {}

    std::size_t num_classes() const noexcept { return classes_.size(); }
    double cutoff_prob() const noexcept { return cutoff_prob_; }
    bool available(std::size_t g) const { return classes_.at(g).has_value(); }
    const DistanceCdf& cdf(std::size_t g) const {
        if (!available(g)) throw DomainError("farness unavailable for class '" + names_.at(g) + "'");
        return *classes_[g];
    }

    /// Estimated P(RD(X) <= rd) for X drawn from class g.
    double farness(std::size_t g, double rd) const { return cdf(g)(rd); }

private:
    std::vector<std::optional<DistanceCdf>> classes_;
    std::vector<std::string> names_;
    double cutoff_prob_;
};

/// Builds the per-class CDFs from the distances of each class's cases to
/// their own class. Classes with fewer than five retained distances get no
/// CDF; farness is then unavailable for them.
inline FarnessModel fit_farness(const DAModel& model, const LabeledDataset& data,
                                std::optional<double> cutoff_prob = std::nullopt) {
    if (data.num_classes() != model.num_classes() || data.p() != model.p())
        throw ShapeError("fit_farness: data does not match the model");
    const auto G = model.num_classes();
    std::vector<std::vector<double>> dist(G);
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto g = data.label(i);
        dist[g].push_back(model.component(g).distance(data.row(i)));
    }
    std::vector<std::optional<DistanceCdf>> cdfs(G);
    for (std::size_t g = 0; g < G; ++g) {
        auto kept = trim_gross_outliers(dist[g]);
        if (kept.size() >= kFarnessMinCases) cdfs[g] = DistanceCdf(std::move(kept));
    }
    const double prob = cutoff_prob.value_or(model.spec().outlier_cutoff_prob);
    if (!(prob > 0.0 && prob < 1.0)) throw ConfigError("farness cutoff probability must lie in (0, 1)");
    return FarnessModel(std::move(cdfs), model.class_names(), prob);
}

} // namespace robda

#endif // ROBDA_FARNESS_HPP
