#ifndef ROBDA_DIAGNOSTICS_HPP
#define ROBDA_DIAGNOSTICS_HPP

// Per-case diagnostics (posteriors, PAC, silhouette width, farness),
// confusion matrices with an outlier class, and chi-squared Q-Q data.

#include "robda/chi2.hpp"
#include "robda/dataset.hpp"
#include "robda/discriminant.hpp"
#include "robda/error.hpp"
#include "robda/farness.hpp"
#include "robda/format.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace robda {

/// ln(prior_g) + ln(normal density of x under class g), for every class.
///
/// Built as discriminant score plus a class-independent offset, so the
/// ordering of the classes is exactly the ordering of the scores.
inline Eigen::VectorXd log_numerators(const DAModel& model, const Prediction& pred, const Eigen::VectorXd& x) {
    const double p = static_cast<double>(model.p());
    double offset = -0.5 * p * std::log(2.0 * std::numbers::pi);
    if (model.spec().rule == Rule::linear) {
        // score_L = log density + 1/2 x'S^{-1}x + 1/2 ln|S| + p/2 ln(2 pi) + ln prior
        const auto& common = model.component(0);
        Eigen::VectorXd z = x;
        common.cholesky().matrixL().solveInPlace(z);
        offset += -0.5 * z.squaredNorm() - 0.5 * common.log_det();
    }
    return (pred.scores.array() + offset).matrix();
}

template <class Derived>
Eigen::VectorXd log_numerators(const DAModel& model, const Eigen::MatrixBase<Derived>& x) {
    const Eigen::VectorXd xv = x.derived().reshaped();
    return log_numerators(model, predict(model, xv), xv);
}

/// Softmax of log-numerators with max subtraction.
inline Eigen::VectorXd softmax(const Eigen::VectorXd& logs) {
    const double mx = logs.maxCoeff();
    Eigen::VectorXd e = (logs.array() - mx).exp().matrix();
    return e / e.sum();
}

/// Estimated posterior probabilities P(g | x).
template <class Derived>
Eigen::VectorXd posteriors(const DAModel& model, const Eigen::MatrixBase<Derived>& x) {
    return softmax(log_numerators(model, x));
}

/// Conditional probability of the best alternative class:
/// max_{g != given} P(g|x) / (P(given|x) + max_{g != given} P(g|x)).
/// Returns 0.5 when both probabilities are zero.
inline double pac(const Eigen::VectorXd& post, std::size_t given) {
    const auto G = static_cast<std::size_t>(post.size());
    if (G < 2) throw DomainError("pac: needs at least two classes");
    if (given >= G) throw DomainError("pac: given class out of range");
    double alt = -1.0;
    for (std::size_t g = 0; g < G; ++g)
        if (g != given) alt = std::max(alt, post(static_cast<Eigen::Index>(g)));
    const double own = post(static_cast<Eigen::Index>(given));
    const double denom = own + alt;
    return denom > 0.0 ? alt / denom : 0.5;
}

/// PAC computed from log-numerators, well defined even when every posterior underflows.
inline double pac_from_log(const Eigen::VectorXd& logs, std::size_t given) {
    const auto G = static_cast<std::size_t>(logs.size());
    if (G < 2) throw DomainError("pac: needs at least two classes");
    if (given >= G) throw DomainError("pac: given class out of range");
    double alt = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < G; ++g)
        if (g != given) alt = std::max(alt, logs(static_cast<Eigen::Index>(g)));
    const double diff = logs(static_cast<Eigen::Index>(given)) - alt; // PAC = 1 / (1 + e^diff)
    if (std::isnan(diff)) return 0.5;
    if (diff >= 0.0) {
        const double e = std::exp(-diff);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(diff));
}

inline double silhouette(double pac_value) { return 1.0 - 2.0 * pac_value; }

struct CaseDiagnostics {
    Eigen::VectorXd posteriors;
    double pac = 0.0;
    double silhouette = 1.0;
    Eigen::VectorXd distances; ///< robust distance to every class
    double rd_given = 0.0;
    double rd_predicted = 0.0;
    Eigen::VectorXd farness;   ///< NaN where farness is unavailable for a class
    std::size_t given = 0;
    std::size_t predicted = 0;
    bool outlier_distance = false;
    bool outlier_farness = false;
};

/// Farness-based overall outlier: the farness to every class exceeds the
/// cutoff probability. Needs farness for all classes.
inline bool farness_outlier(const Eigen::VectorXd& farness, double cutoff_prob) {
    for (Eigen::Index g = 0; g < farness.size(); ++g)
        if (std::isnan(farness(g)) || !(farness(g) > cutoff_prob)) return false;
    return farness.size() > 0;
}

inline CaseDiagnostics diagnose_case(const DAModel& model, const Eigen::VectorXd& x, std::size_t given,
                                     const FarnessModel* fm = nullptr) {
    if (given >= model.num_classes()) throw DomainError("diagnose_case: given class out of range");
    const auto pred = predict(model, x);
    const auto logs = log_numerators(model, pred, x);
    CaseDiagnostics d;
    d.posteriors = softmax(logs);
    d.pac = pac_from_log(logs, given);
    d.silhouette = silhouette(d.pac);
    d.distances = pred.distances;
    d.given = given;
    d.predicted = pred.predicted;
    d.rd_given = pred.distances(static_cast<Eigen::Index>(given));
    d.rd_predicted = pred.distances(static_cast<Eigen::Index>(pred.predicted));
    d.outlier_distance = pred.overall_outlier;
    const auto G = static_cast<Eigen::Index>(model.num_classes());
    d.farness = Eigen::VectorXd::Constant(G, std::numeric_limits<double>::quiet_NaN());
    if (fm) {
        for (Eigen::Index g = 0; g < G; ++g)
            if (fm->available(static_cast<std::size_t>(g)))
                d.farness(g) = fm->farness(static_cast<std::size_t>(g), pred.distances(g));
        d.outlier_farness = farness_outlier(d.farness, fm->cutoff_prob());
    }
    return d;
}

/// Diagnostics for every case of `data`, in order.
inline std::vector<CaseDiagnostics> diagnose(const DAModel& model, const LabeledDataset& data,
                                             const FarnessModel* fm = nullptr) {
    if (data.p() != model.p()) throw ShapeError("diagnose: data dimension differs from the model");
    if (data.num_classes() != model.num_classes()) throw ShapeError("diagnose: class count differs from the model");
    std::vector<CaseDiagnostics> out;
    out.reserve(data.n());
    for (std::size_t i = 0; i < data.n(); ++i)
        out.push_back(diagnose_case(model, data.row(i).transpose(), data.label(i), fm));
    return out;
}

// ---------------------------------------------------------------------------
// Confusion matrices

enum class OutlierRule { none, distance, farness };

/// Rows: given classes. Columns: predicted classes, plus an "outliers"
/// column when an outlier rule is in effect.
class ConfusionMatrix {
public:
    ConfusionMatrix(std::vector<std::string> class_names, bool outlier_column)
        : names_(std::move(class_names)),
          outlier_column_(outlier_column),
          counts_(names_.size(), std::vector<std::size_t>(names_.size() + (outlier_column ? 1 : 0), 0)) {}

    std::size_t rows() const noexcept { return names_.size(); }
    std::size_t cols() const noexcept { return rows() + (outlier_column_ ? 1 : 0); }
    bool has_outlier_column() const noexcept { return outlier_column_; }
    const std::vector<std::string>& class_names() const noexcept { return names_; }
    std::string column_label(std::size_t c) const { return c < rows() ? names_.at(c) : "outliers"; }

    std::size_t at(std::size_t r, std::size_t c) const { return counts_.at(r).at(c); }
    void add(std::size_t r, std::size_t c, std::size_t k = 1) { counts_.at(r).at(c) += k; }

    std::size_t row_sum(std::size_t r) const {
        std::size_t s = 0;
        for (auto v : counts_.at(r)) s += v;
        return s;
    }
    std::size_t total() const {
        std::size_t s = 0;
        for (std::size_t r = 0; r < rows(); ++r) s += row_sum(r);
        return s;
    }
    std::size_t trace() const {
        std::size_t s = 0;
        for (std::size_t r = 0; r < rows(); ++r) s += counts_[r][r];
        return s;
    }
    std::size_t outliers() const {
        if (!outlier_column_) return 0;
        std::size_t s = 0;
        for (std::size_t r = 0; r < rows(); ++r) s += counts_[r][rows()];
        return s;
    }

    std::string to_text() const {
        std::size_t width = 9; // "predicted"
        for (std::size_t c = 0; c < cols(); ++c) width = std::max(width, column_label(c).size());
        for (std::size_t r = 0; r < rows(); ++r) {
            width = std::max(width, names_[r].size());
            for (auto v : counts_[r]) width = std::max(width, std::to_string(v).size());
        }
        std::ostringstream out;
        out << std::setw(static_cast<int>(width)) << "given";
        for (std::size_t c = 0; c < cols(); ++c) out << "  " << std::setw(static_cast<int>(width)) << column_label(c);
        out << '\n';
        for (std::size_t r = 0; r < rows(); ++r) {
            out << std::setw(static_cast<int>(width)) << names_[r];
            for (auto v : counts_[r]) out << "  " << std::setw(static_cast<int>(width)) << v;
            out << '\n';
        }
        return out.str();
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "given";
        for (std::size_t c = 0; c < cols(); ++c) out << ',' << column_label(c);
        out << '\n';
        for (std::size_t r = 0; r < rows(); ++r) {
            out << names_[r];
            for (auto v : counts_[r]) out << ',' << v;
            out << '\n';
        }
        return out.str();
    }

private:
    std::vector<std::string> names_;
    bool outlier_column_;
    std::vector<std::vector<std::size_t>> counts_;
};

inline ConfusionMatrix confusion(const std::vector<CaseDiagnostics>& diags, const std::vector<std::string>& class_names,
                                 OutlierRule rule = OutlierRule::none) {
    ConfusionMatrix cm(class_names, rule != OutlierRule::none);
    const auto G = class_names.size();
    for (const auto& d : diags) {
        if (d.given >= G || d.predicted >= G) throw ShapeError("confusion: class index out of range");
        const bool out = (rule == OutlierRule::distance && d.outlier_distance) ||
                         (rule == OutlierRule::farness && d.outlier_farness);
        cm.add(d.given, out ? G : d.predicted);
    }
    return cm;
}

/// Confusion matrix of a model on labeled data; with_outlier_class routes
/// overall outliers (distance rule) to the extra column.
inline ConfusionMatrix confusion(const DAModel& model, const LabeledDataset& data, bool with_outlier_class) {
    if (data.p() != model.p() || data.num_classes() != model.num_classes())
        throw ShapeError("confusion: data does not match the model");
    ConfusionMatrix cm(model.class_names(), with_outlier_class);
    const auto G = model.num_classes();
    const auto preds = predict_batch(model, data);
    for (std::size_t i = 0; i < data.n(); ++i)
        cm.add(data.label(i), with_outlier_class && preds[i].overall_outlier ? G : preds[i].predicted);
    return cm;
}

/// trace / total, or trace / (total - outliers) when excluding the outlier column.
inline double accuracy(const ConfusionMatrix& cm, bool exclude_outliers = false) {
    const std::size_t denom = cm.total() - (exclude_outliers ? cm.outliers() : 0);
    if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(cm.trace()) / static_cast<double>(denom);
}

struct SilhouetteSummary {
    std::vector<double> per_class; ///< NaN for classes without cases
    std::vector<std::size_t> class_counts;
    double overall = std::numeric_limits<double>::quiet_NaN();
};

inline SilhouetteSummary silhouette_summary(const std::vector<CaseDiagnostics>& diags, std::size_t num_classes) {
    SilhouetteSummary s;
    s.per_class.assign(num_classes, 0.0);
    s.class_counts.assign(num_classes, 0);
    double total = 0.0;
    for (const auto& d : diags) {
        if (d.given >= num_classes) throw ShapeError("silhouette_summary: class index out of range");
        s.per_class[d.given] += d.silhouette;
        ++s.class_counts[d.given];
        total += d.silhouette;
    }
    for (std::size_t g = 0; g < num_classes; ++g)
        s.per_class[g] = s.class_counts[g] ? s.per_class[g] / static_cast<double>(s.class_counts[g])
                                           : std::numeric_limits<double>::quiet_NaN();
    if (!diags.empty()) s.overall = total / static_cast<double>(diags.size());
    return s;
}

// ---------------------------------------------------------------------------
// Chi-squared Q-Q data

struct QQData {
    std::vector<double> theoretical; ///< chi2_dof quantile at (i - 0.5) / m
    std::vector<double> observed;    ///< ordered squared distances
    std::size_t dof = 1;
    double cutoff = 0.0;             ///< chi2_{dof, cutoff_prob}
    double identity_lo = 0.0;        ///< identity line from (lo, lo) to (hi, hi)
    double identity_hi = 0.0;
};

inline QQData qq_data(std::vector<double> squared_rds, std::size_t dof, double cutoff_prob = 0.99) {
    if (squared_rds.empty()) throw DomainError("qq_data: empty sample");
    if (dof == 0) throw DomainError("qq_data: dof must be positive");
    std::sort(squared_rds.begin(), squared_rds.end());
    QQData q;
    q.dof = dof;
    q.observed = std::move(squared_rds);
    const auto m = q.observed.size();
    for (std::size_t i = 0; i < m; ++i)
        q.theoretical.push_back(
            chi2_quantile(static_cast<double>(dof), (static_cast<double>(i) + 0.5) / static_cast<double>(m)));
    q.cutoff = chi2_quantile(static_cast<double>(dof), cutoff_prob);
    q.identity_lo = std::min(q.theoretical.front(), q.observed.front());
    q.identity_hi = std::max(q.theoretical.back(), q.observed.back());
    return q;
}

// ---------------------------------------------------------------------------
// Export

/// One CSV row per case.
inline std::string diagnostics_to_csv(const std::vector<CaseDiagnostics>& diags,
                                      const std::vector<std::string>& class_names) {
    std::ostringstream out;
    out << "case,given,predicted";
    for (const auto& c : class_names) out << ",posterior_" << c;
    out << ",pac,silhouette";
    for (const auto& c : class_names) out << ",rd_" << c;
    for (const auto& c : class_names) out << ",farness_" << c;
    out << ",outlier_distance,outlier_farness\n";
    auto num = [](double v) { return std::isnan(v) ? std::string("NA") : format_double(v); };
    for (std::size_t i = 0; i < diags.size(); ++i) {
        const auto& d = diags[i];
        out << (i + 1) << ',' << class_names.at(d.given) << ',' << class_names.at(d.predicted);
        for (Eigen::Index g = 0; g < d.posteriors.size(); ++g) out << ',' << num(d.posteriors(g));
        out << ',' << num(d.pac) << ',' << num(d.silhouette);
        for (Eigen::Index g = 0; g < d.distances.size(); ++g) out << ',' << num(d.distances(g));
        for (Eigen::Index g = 0; g < d.farness.size(); ++g) out << ',' << num(d.farness(g));
        out << ',' << (d.outlier_distance ? 1 : 0) << ',' << (d.outlier_farness ? 1 : 0) << '\n';
    }
    return out.str();
}

} // namespace robda

#endif // ROBDA_DIAGNOSTICS_HPP
