#ifndef ROBDA_DISCRIMINANT_HPP
#define ROBDA_DISCRIMINANT_HPP

#include "robda/chi2.hpp"
#include "robda/dataset.hpp"
#include "robda/error.hpp"
#include "robda/estimators.hpp"
#include "robda/location_scatter.hpp"
#include "robda/mcd.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace robda {

enum class Rule { linear, quadratic };
enum class Estimation { classical, robust };
enum class McdEngine { fastmcd, exact };

inline std::string_view to_string(Rule r) { return r == Rule::linear ? "linear" : "quadratic"; }
inline std::string_view to_string(Estimation e) { return e == Estimation::classical ? "classical" : "robust"; }
inline std::string_view to_string(McdEngine e) { return e == McdEngine::fastmcd ? "fastmcd" : "exact"; }

inline Rule rule_from_string(std::string_view s) {
    if (s == "linear") return Rule::linear;
    if (s == "quadratic") return Rule::quadratic;
    throw ConfigError("unknown rule '" + std::string(s) + "' (expected linear or quadratic)");
}
inline Estimation estimation_from_string(std::string_view s) {
    if (s == "classical") return Estimation::classical;
    if (s == "robust") return Estimation::robust;
    throw ConfigError("unknown estimation '" + std::string(s) + "' (expected classical or robust)");
}
inline McdEngine engine_from_string(std::string_view s) {
    if (s == "fastmcd") return McdEngine::fastmcd;
    if (s == "exact") return McdEngine::exact;
    throw ConfigError("unknown engine '" + std::string(s) + "' (expected fastmcd or exact)");
}

/// Method selector: CLDA, CQDA, RLDA or RQDA, plus robust-estimation settings.
struct DASpec {
    Rule rule = Rule::quadratic;
    Estimation estimation = Estimation::robust;
    EstimatorConfig estimator{};
    McdEngine engine = McdEngine::fastmcd;
    double outlier_cutoff_prob = 0.99;

    void validate() const {
        if (!(outlier_cutoff_prob > 0.0 && outlier_cutoff_prob < 1.0))
            throw ConfigError("outlier cutoff probability must lie in (0, 1)");
        if (estimation == Estimation::robust) estimator.validate();
    }

    std::string name() const {
        std::string s = estimation == Estimation::classical ? "C" : "R";
        return s + (rule == Rule::linear ? "LDA" : "QDA");
    }
};

/// Quadratic discriminant score:
/// -1/2 ln|S| - 1/2 (x - m)' S^{-1} (x - m) + ln(prior).
template <class Derived>
double quadratic_score(const Eigen::MatrixBase<Derived>& x, const LocationScatter& est, double prior) {
    if (!(prior > 0.0 && prior <= 1.0)) throw DomainError("quadratic_score: prior must lie in (0, 1]");
    return -0.5 * est.log_det() - 0.5 * est.squared_distance(x) + std::log(prior);
}

/// Linear discriminant score with a common scatter:
/// m' S^{-1} x - 1/2 m' S^{-1} m + ln(prior). Only the Cholesky factor of
/// `common` is used; its center is ignored.
template <class Derived>
double linear_score(const Eigen::MatrixBase<Derived>& x, const Eigen::VectorXd& center,
                    const LocationScatter& common, double prior) {
    if (!(prior > 0.0 && prior <= 1.0)) throw DomainError("linear_score: prior must lie in (0, 1]");
    if (x.size() != center.size() || center.size() != common.center().size())
        throw ShapeError("linear_score: dimension mismatch");
    const Eigen::VectorXd w = common.cholesky().solve(center);
    const Eigen::VectorXd xv = x.derived().reshaped();
    return w.dot(xv) - 0.5 * w.dot(center) + std::log(prior);
}

struct Prediction {
    Eigen::VectorXd scores;
    Eigen::VectorXd distances;
    std::size_t predicted = 0;
    bool overall_outlier = false;
};

/// Index of the largest entry, lowest index on ties.
inline std::size_t argmax(const Eigen::VectorXd& v) {
    std::size_t best = 0;
    for (Eigen::Index g = 1; g < v.size(); ++g)
        if (v(g) > v(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(g);
    return best;
}

/// A fitted discriminant model. Immutable after construction.
///
/// For the quadratic rule each component is the class's own center and
/// scatter. For the linear rule every component carries its class center
/// and the common (pooled) scatter.
class DAModel {
public:
    DAModel(DASpec spec, std::vector<std::string> class_names, std::vector<LocationScatter> components,
            std::vector<double> priors, std::vector<std::size_t> counts, std::vector<std::size_t> unflagged_counts)
        : spec_(std::move(spec)),
          class_names_(std::move(class_names)),
          components_(std::move(components)),
          priors_(std::move(priors)),
          counts_(std::move(counts)),
          unflagged_(std::move(unflagged_counts)) {
        const auto G = class_names_.size();
        if (G == 0) throw ConfigError("DAModel: no classes");
        if (components_.size() != G || priors_.size() != G || counts_.size() != G || unflagged_.size() != G)
            throw ShapeError("DAModel: per-class vectors disagree in length");
        double sum = 0.0;
        for (double pr : priors_) {
            if (!(pr > 0.0 && pr <= 1.0)) throw DegenerateError("DAModel: class priors must be positive");
            sum += pr;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw DegenerateError("DAModel: priors do not sum to one");
        for (const auto& c : components_)
            if (c.dim() != components_.front().dim()) throw ShapeError("DAModel: components differ in dimension");
        cutoff_ = robda::distance_cutoff(p(), spec_.outlier_cutoff_prob);
    }

    const DASpec& spec() const noexcept { return spec_; }
    std::size_t p() const noexcept { return components_.front().dim(); }
    std::size_t num_classes() const noexcept { return class_names_.size(); }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    const LocationScatter& component(std::size_t g) const { return components_.at(g); }
    const std::vector<LocationScatter>& components() const noexcept { return components_; }
    const std::vector<double>& priors() const noexcept { return priors_; }
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    const std::vector<std::size_t>& unflagged_counts() const noexcept { return unflagged_; }
    /// sqrt(chi2_{p, outlier_cutoff_prob}).
    double distance_cutoff() const noexcept { return cutoff_; }

private:
    DASpec spec_;
    std::vector<std::string> class_names_;
    std::vector<LocationScatter> components_;
    std::vector<double> priors_;
    std::vector<std::size_t> counts_;
    std::vector<std::size_t> unflagged_;
    double cutoff_ = 0.0;
};

/// The reweighting pass of FastMCD applied to an arbitrary raw MCD estimate.
inline LocationScatter reweight_mcd(const Eigen::MatrixXd& x, const LocationScatter& raw, const EstimatorConfig& cfg) {
    return detail::reweight(x, raw, cfg, raw.h_subset().value_or(std::vector<std::size_t>{}));
}

namespace detail {

inline LocationScatter robust_class_fit(const Eigen::MatrixXd& xg, const DASpec& spec, std::size_t g) {
    EstimatorConfig cfg = spec.estimator;
    cfg.seed = spec.estimator.seed + g;
    if (spec.engine == McdEngine::exact) return reweight_mcd(xg, exact_mcd(xg, cfg.alpha), cfg);
    return fast_mcd(xg, cfg);
}

} // namespace detail

/// Fits CLDA/CQDA/RLDA/RQDA.
///
/// Robust fits flag a training case when its robust distance to its own
/// class exceeds the model cutoff; priors are the unflagged class fractions
/// and the robust linear rule pools class scatters with weights (unflagged - 1).
inline DAModel fit(const LabeledDataset& data, const DASpec& spec) {
    spec.validate();
    const auto G = data.num_classes();
    const auto p = data.p();
    const auto sizes = data.class_sizes();
    std::vector<LocationScatter> fits;
    fits.reserve(G);
    std::vector<std::size_t> unflagged(G);

    for (std::size_t g = 0; g < G; ++g) {
        const auto& name = data.class_names()[g];
        const Eigen::MatrixXd xg = data.rows_of_class(g);
        try {
            if (spec.estimation == Estimation::classical) {
                if (sizes[g] < p + 1)
                    throw DegenerateError("has " + std::to_string(sizes[g]) + " cases, needs at least " +
                                          std::to_string(p + 1));
                fits.push_back(classical_moments(xg));
                unflagged[g] = sizes[g];
            } else {
                if (h_size(spec.estimator.alpha, sizes[g]) <= p)
                    throw DegenerateError("has " + std::to_string(sizes[g]) +
                                          " cases, too few for an MCD h-subset larger than p = " + std::to_string(p));
                fits.push_back(detail::robust_class_fit(xg, spec, g));
            }
        } catch (const ExactFitError& e) {
            throw ExactFitError("class '" + name + "': " + e.what(), e.normal(), e.offset());
        } catch (const DegenerateError& e) {
            throw DegenerateError("class '" + name + "': " + e.what());
        } catch (const ConfigError& e) {
            throw DegenerateError("class '" + name + "': " + e.what());
        }
    }

    if (spec.estimation == Estimation::robust) {
        const double cutoff = distance_cutoff(p, spec.outlier_cutoff_prob);
        for (std::size_t i = 0; i < data.n(); ++i) {
            const auto g = data.label(i);
            if (fits[g].distance(data.row(i)) <= cutoff) ++unflagged[g];
        }
        for (std::size_t g = 0; g < G; ++g)
            if (unflagged[g] == 0)
                throw DegenerateError("class '" + data.class_names()[g] + "': every case is flagged as an outlier");
    }

    std::size_t total = 0;
    for (auto u : unflagged) total += u;
    std::vector<double> priors(G);
    for (std::size_t g = 0; g < G; ++g) priors[g] = static_cast<double>(unflagged[g]) / static_cast<double>(total);

    if (spec.rule == Rule::quadratic)
        return DAModel(spec, data.class_names(), std::move(fits), std::move(priors), sizes, std::move(unflagged));

    if (G < 2) throw ConfigError("linear rule needs at least two classes");
    std::vector<PooledPart> parts;
    for (std::size_t g = 0; g < G; ++g) parts.push_back({unflagged[g], fits[g].scatter()});
    const Eigen::MatrixXd common = pooled_covariance(parts);
    std::vector<LocationScatter> comps;
    for (std::size_t g = 0; g < G; ++g) {
        try {
            LocationScatter c(fits[g].center(), common, fits[g].method());
            if (fits[g].alpha()) c.set_alpha(*fits[g].alpha());
            comps.push_back(std::move(c));
        } catch (const DegenerateError&) {
            throw DegenerateError("pooled covariance is singular");
        }
    }
    return DAModel(spec, data.class_names(), std::move(comps), std::move(priors), sizes, std::move(unflagged));
}

template <class Derived>
Prediction predict(const DAModel& model, const Eigen::MatrixBase<Derived>& x) {
    if (static_cast<std::size_t>(x.size()) != model.p())
        throw ShapeError("predict: point has dimension " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(model.p()));
    const auto G = static_cast<Eigen::Index>(model.num_classes());
    Prediction out;
    out.scores.resize(G);
    out.distances.resize(G);
    bool all_far = true;
    for (Eigen::Index g = 0; g < G; ++g) {
        const auto& comp = model.component(static_cast<std::size_t>(g));
        const double prior = model.priors()[static_cast<std::size_t>(g)];
        out.scores(g) = model.spec().rule == Rule::quadratic ? quadratic_score(x, comp, prior)
                                                             : linear_score(x, comp.center(), comp, prior);
        out.distances(g) = comp.distance(x);
        all_far = all_far && out.distances(g) > model.distance_cutoff();
    }
    out.predicted = argmax(out.scores);
    out.overall_outlier = all_far;
    return out;
}

inline std::vector<Prediction> predict_batch(const DAModel& model, const Eigen::MatrixXd& x) {
    if (x.rows() > 0 && static_cast<std::size_t>(x.cols()) != model.p())
        throw ShapeError("predict_batch: data has " + std::to_string(x.cols()) + " columns, model expects " +
                         std::to_string(model.p()));
    std::vector<Prediction> out;
    out.reserve(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out.push_back(predict(model, x.row(i)));
    return out;
}

inline std::vector<Prediction> predict_batch(const DAModel& model, const LabeledDataset& data) {
    return predict_batch(model, data.features());
}

/// Axis-aligned box [lo, hi] of the data.
struct BoundingBox {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

inline BoundingBox bounding_box(const Eigen::MatrixXd& x) {
    return {x.colwise().minCoeff().transpose(), x.colwise().maxCoeff().transpose()};
}

/// Fraction of points of a resolution x resolution grid over `box` on which
/// the two bivariate models predict different classes.
inline double decision_disagreement(const DAModel& a, const DAModel& b, const BoundingBox& box,
                                    std::size_t resolution = 200) {
    if (a.p() != 2 || b.p() != 2 || box.lo.size() != 2 || box.hi.size() != 2)
        throw ShapeError("decision_disagreement: bivariate models only");
    if (resolution < 2) throw ConfigError("decision_disagreement: resolution must be at least 2");
    std::size_t differ = 0;
    Eigen::Vector2d pt;
    const double step = 1.0 / static_cast<double>(resolution - 1);
    for (std::size_t i = 0; i < resolution; ++i) {
        pt(0) = box.lo(0) + (box.hi(0) - box.lo(0)) * static_cast<double>(i) * step;
        for (std::size_t j = 0; j < resolution; ++j) {
            pt(1) = box.lo(1) + (box.hi(1) - box.lo(1)) * static_cast<double>(j) * step;
            if (predict(a, pt).predicted != predict(b, pt).predicted) ++differ;
        }
    }
    return static_cast<double>(differ) / static_cast<double>(resolution * resolution);
}

} // namespace robda

#endif // ROBDA_DISCRIMINANT_HPP
