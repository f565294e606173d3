#ifndef ROBDA_MCD_HPP
#define ROBDA_MCD_HPP

// Minimum Covariance Determinant: concentration steps, FastMCD with
// reweighting, and exhaustive enumeration for small samples.

#include "robda/chi2.hpp"
#include "robda/error.hpp"
#include "robda/estimators.hpp"
#include "robda/location_scatter.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace robda {

struct EstimatorConfig {
    double alpha = 0.75;
    std::size_t n_starts = 500;
    std::size_t n_keep = 10;
    std::size_t max_csteps = 100;
    double convergence_tol = 1e-12;
    std::uint64_t seed = 0;
    double reweight_quantile = 0.975;

    void validate() const {
        if (!(alpha >= 0.5 && alpha < 1.0)) throw ConfigError("alpha must lie in [0.5, 1)");
        if (n_starts == 0) throw ConfigError("n_starts must be positive");
        if (n_keep == 0 || n_keep > n_starts) throw ConfigError("n_keep must lie in [1, n_starts]");
        if (max_csteps == 0) throw ConfigError("max_csteps must be positive");
        if (!(convergence_tol >= 0.0)) throw ConfigError("convergence_tol must be nonnegative");
        if (!(reweight_quantile > 0.0 && reweight_quantile < 1.0))
            throw ConfigError("reweight_quantile must lie in (0, 1)");
    }
};

/// h = ceil(alpha * m), guarding against alpha * m landing a hair above an integer.
inline std::size_t h_size(double alpha, std::size_t m) {
    const double raw = alpha * static_cast<double>(m);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

/// Mean, covariance (divisor h - 1) and log-determinant of a subset of rows.
struct SubsetFit {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double log_det = -std::numeric_limits<double>::infinity();
    bool singular = true;
};

namespace detail {

/// log det threshold under which a subset counts as an exact fit:
/// det < 1e-12 * (geometric mean of column variances)^p.
inline double exact_fit_log_floor(const Eigen::MatrixXd& x) {
    const auto m = x.rows();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    double floor = std::log(1e-12);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double var = (x.col(j).array() - mean(j)).square().sum() / static_cast<double>(std::max<Eigen::Index>(m - 1, 1));
        floor += std::log(var); // -inf for a constant column: nothing but a true zero counts as exact
    }
    return floor;
}

inline SubsetFit fit_subset(const Eigen::MatrixXd& x, const std::vector<std::size_t>& idx, double log_floor) {
    const auto p = x.cols();
    const auto h = static_cast<Eigen::Index>(idx.size());
    SubsetFit fit;
    fit.mean = Eigen::VectorXd::Zero(p);
    for (auto i : idx) fit.mean += x.row(static_cast<Eigen::Index>(i)).transpose();
    fit.mean /= static_cast<double>(h);
    fit.cov = Eigen::MatrixXd::Zero(p, p);
    for (auto i : idx) {
        const Eigen::VectorXd d = x.row(static_cast<Eigen::Index>(i)).transpose() - fit.mean;
        fit.cov.selfadjointView<Eigen::Lower>().rankUpdate(d);
    }
    fit.cov = fit.cov.selfadjointView<Eigen::Lower>();
    fit.cov /= static_cast<double>(h - 1);
    Eigen::LLT<Eigen::MatrixXd> llt(fit.cov);
    if (llt.info() != Eigen::Success) return fit;
    fit.log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    fit.singular = !(fit.log_det >= log_floor) || !(llt.rcond() >= kMinReciprocalCondition);
    return fit;
}

[[noreturn]] inline void throw_exact_fit(const SubsetFit& fit, std::size_t h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.cov);
    Eigen::VectorXd normal = es.eigenvectors().col(0);
    const double offset = normal.dot(fit.mean);
    std::string msg = "exact fit: at least " + std::to_string(h) + " cases lie on the hyperplane ";
    for (Eigen::Index j = 0; j < normal.size(); ++j)
        msg += (j ? " + " : "") + std::to_string(normal(j)) + "*x" + std::to_string(j + 1);
    msg += " = " + std::to_string(offset);
    throw ExactFitError(msg, std::move(normal), offset);
}

/// Indices of the h smallest squared distances, ties broken by case index,
/// returned in ascending index order.
inline std::vector<std::size_t> closest_h(const Eigen::MatrixXd& x, const SubsetFit& fit, std::size_t h) {
    Eigen::LLT<Eigen::MatrixXd> llt(fit.cov);
    const Eigen::MatrixXd centered = (x.rowwise() - fit.mean.transpose()).transpose();
    const Eigen::MatrixXd z = llt.matrixL().solve(centered);
    const Eigen::VectorXd d2 = z.colwise().squaredNorm().transpose();
    std::vector<std::size_t> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d2(static_cast<Eigen::Index>(a)) < d2(static_cast<Eigen::Index>(b));
    });
    order.resize(h);
    std::sort(order.begin(), order.end());
    return order;
}

} // namespace detail

struct CStepResult {
    std::vector<std::size_t> subset;
    double det = 0.0;
    double log_det = -std::numeric_limits<double>::infinity();
};

/// Covariance determinant of a subset of rows (divisor h - 1), the MCD objective.
inline double subset_determinant(const Eigen::MatrixXd& x, const std::vector<std::size_t>& idx) {
    return std::exp(detail::fit_subset(x, idx, -std::numeric_limits<double>::infinity()).log_det);
}

/// One concentration step: refit on `subset`, keep the h cases closest to
/// that fit (h defaults to the subset size). For equal sizes the determinant
/// of the new subset never exceeds the old one.
inline CStepResult c_step(const Eigen::MatrixXd& x, const std::vector<std::size_t>& subset, std::size_t h = 0) {
    if (h == 0) h = subset.size();
    if (subset.size() <= static_cast<std::size_t>(x.cols()))
        throw ConfigError("c_step: subset must contain more than p cases");
    if (h > static_cast<std::size_t>(x.rows())) throw ConfigError("c_step: h exceeds the number of cases");
    for (auto i : subset)
        if (i >= static_cast<std::size_t>(x.rows())) throw ShapeError("c_step: subset index out of range");
    const double floor = detail::exact_fit_log_floor(x);
    const auto fit = detail::fit_subset(x, subset, floor);
    if (fit.singular) detail::throw_exact_fit(fit, subset.size());
    CStepResult out;
    out.subset = detail::closest_h(x, fit, h);
    const auto next = detail::fit_subset(x, out.subset, floor);
    out.log_det = next.log_det;
    out.det = std::exp(next.log_det);
    return out;
}

/// Raw and reweighted MCD estimates together with the optimal h-subset.
struct McdFit {
    LocationScatter raw;
    LocationScatter reweighted;
    std::vector<std::size_t> best_subset;
    double objective_log_det; ///< log det of the unscaled h-subset covariance
};

namespace detail {

inline LocationScatter make_raw(const SubsetFit& fit, std::vector<std::size_t> subset, double alpha,
                                EstimationMethod method) {
    const double c = consistency_factor(alpha, static_cast<std::size_t>(fit.mean.size()));
    LocationScatter est(fit.mean, c * fit.cov, method);
    est.set_h_subset(std::move(subset)).set_alpha(alpha);
    return est;
}

inline LocationScatter reweight(const Eigen::MatrixXd& x, const LocationScatter& raw, const EstimatorConfig& cfg,
                                const std::vector<std::size_t>& subset) {
    const auto p = static_cast<std::size_t>(x.cols());
    const double cutoff = chi2_quantile(static_cast<double>(p), cfg.reweight_quantile);
    std::vector<double> w(static_cast<std::size_t>(x.rows()), 0.0);
    std::vector<std::size_t> kept;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (raw.squared_distance(x.row(i)) <= cutoff) {
            w[static_cast<std::size_t>(i)] = 1.0;
            kept.push_back(static_cast<std::size_t>(i));
        }
    }
    if (kept.size() <= p) throw DegenerateError("MCD reweighting kept too few cases");
    const auto fit = fit_subset(x, kept, -std::numeric_limits<double>::infinity());
    if (!std::isfinite(fit.log_det)) throw DegenerateError("MCD reweighting produced a singular covariance");
    const double c = consistency_factor(cfg.reweight_quantile, p);
    LocationScatter est(fit.mean, c * fit.cov, EstimationMethod::mcd_reweighted);
    est.set_h_subset(subset).set_weights(std::move(w)).set_alpha(cfg.alpha);
    return est;
}

struct Candidate {
    std::vector<std::size_t> subset;
    SubsetFit fit;
    std::size_t start = 0;
};

} // namespace detail

/// FastMCD: n_starts random (p+1)-subsets, two C-steps each, the n_keep best
/// iterated to convergence; raw estimate scaled for consistency, then one
/// reweighting pass. Deterministic in (x, config).
inline McdFit fast_mcd_detailed(const Eigen::MatrixXd& x, const EstimatorConfig& cfg) {
    cfg.validate();
    const auto m = static_cast<std::size_t>(x.rows());
    const auto p = static_cast<std::size_t>(x.cols());
    if (p == 0) throw ShapeError("fast_mcd: no columns");
    const std::size_t h = h_size(cfg.alpha, m);
    if (h <= p)
        throw ConfigError("fast_mcd: h = " + std::to_string(h) + " must exceed p = " + std::to_string(p));
    if (m < 2 * (p + 1))
        throw ConfigError("fast_mcd: need at least " + std::to_string(2 * (p + 1)) + " cases, got " +
                          std::to_string(m));

    const double floor = detail::exact_fit_log_floor(x);
    std::mt19937_64 rng(cfg.seed);

    // Start subsets are drawn sequentially from one stream, independent of how
    // the later refinement is scheduled.
    std::vector<detail::Candidate> candidates;
    candidates.reserve(cfg.n_starts);
    std::vector<std::size_t> perm(m);
    for (std::size_t s = 0; s < cfg.n_starts; ++s) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::vector<std::size_t> start;
        SubsetFit fit;
        for (std::size_t k = 0; k < m; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, m - 1);
            std::swap(perm[k], perm[pick(rng)]);
            start.push_back(perm[k]);
            if (start.size() < p + 1) continue;
            std::vector<std::size_t> sorted = start;
            std::sort(sorted.begin(), sorted.end());
            fit = detail::fit_subset(x, sorted, floor);
            if (!fit.singular) break;
        }
        if (fit.singular) {
            // even the whole sample is flat
            detail::throw_exact_fit(fit, m);
        }
        detail::Candidate c;
        c.start = s;
        c.subset = detail::closest_h(x, fit, h);
        c.fit = detail::fit_subset(x, c.subset, floor);
        if (c.fit.singular) detail::throw_exact_fit(c.fit, h);
        for (int step = 0; step < 2; ++step) {
            auto next = detail::closest_h(x, c.fit, h);
            if (next == c.subset) break;
            c.fit = detail::fit_subset(x, next, floor);
            c.subset = std::move(next);
            if (c.fit.singular) detail::throw_exact_fit(c.fit, h);
        }
        candidates.push_back(std::move(c));
    }

    auto better = [](const detail::Candidate& a, const detail::Candidate& b) {
        if (a.fit.log_det != b.fit.log_det) return a.fit.log_det < b.fit.log_det;
        return a.start < b.start;
    };
    const std::size_t keep = std::min(cfg.n_keep, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      better);
    candidates.resize(keep);

    for (auto& c : candidates) {
        for (std::size_t step = 0; step < cfg.max_csteps; ++step) {
            auto next = detail::closest_h(x, c.fit, h);
            if (next == c.subset) break;
            auto fit = detail::fit_subset(x, next, floor);
            if (fit.singular) detail::throw_exact_fit(fit, h);
            const double gain = c.fit.log_det - fit.log_det;
            c.fit = std::move(fit);
            c.subset = std::move(next);
            if (gain <= cfg.convergence_tol) break;
        }
    }
    const auto& best = *std::min_element(candidates.begin(), candidates.end(), better);

    auto raw = detail::make_raw(best.fit, best.subset, cfg.alpha, EstimationMethod::mcd_raw);
    auto reweighted = detail::reweight(x, raw, cfg, best.subset);
    return McdFit{std::move(raw), std::move(reweighted), best.subset, best.fit.log_det};
}

inline LocationScatter fast_mcd(const Eigen::MatrixXd& x, const EstimatorConfig& cfg) {
    return fast_mcd_detailed(x, cfg).reweighted;
}

/// Number of h-subsets of m cases, saturating at `cap + 1`.
inline std::uint64_t subset_count(std::size_t m, std::size_t h, std::uint64_t cap) {
    if (h > m) return 0;
    h = std::min(h, m - h);
    // C(m, h) grows monotonically along this product, so stop once past cap.
    std::uint64_t c = 1;
    for (std::size_t k = 1; k <= h; ++k) {
        c = c * (m - h + k) / k;
        if (c > cap) return cap + 1;
    }
    return c;
}

inline constexpr std::uint64_t kMaxExactSubsets = 1'000'000;

/// Exhaustive MCD: every h-subset is evaluated and the smallest covariance
/// determinant wins (first in lexicographic order on ties). Scaled like the
/// raw FastMCD estimate; no reweighting.
inline LocationScatter exact_mcd(const Eigen::MatrixXd& x, double alpha) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw ConfigError("exact_mcd: alpha must lie in [0.5, 1]");
    const auto m = static_cast<std::size_t>(x.rows());
    const auto p = static_cast<std::size_t>(x.cols());
    if (p == 0) throw ShapeError("exact_mcd: no columns");
    const std::size_t h = std::min(h_size(alpha, m), m);
    if (h <= p) throw ConfigError("exact_mcd: h = " + std::to_string(h) + " must exceed p = " + std::to_string(p));
    const auto count = subset_count(m, h, kMaxExactSubsets);
    if (count > kMaxExactSubsets)
        throw ConfigError("exact_mcd: C(" + std::to_string(m) + ", " + std::to_string(h) + ") exceeds " +
                          std::to_string(kMaxExactSubsets) + " subsets");

    const double floor = detail::exact_fit_log_floor(x);
    std::vector<std::size_t> idx(h);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<std::size_t> best_idx;
    SubsetFit best;
    bool have = false;
    while (true) {
        auto fit = detail::fit_subset(x, idx, floor);
        if (fit.singular) detail::throw_exact_fit(fit, h);
        if (!have || fit.log_det < best.log_det) {
            best = std::move(fit);
            best_idx = idx;
            have = true;
        }
        // next combination in lexicographic order
        std::size_t k = h;
        while (k > 0 && idx[k - 1] == m - h + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < h; ++j) idx[j] = idx[j - 1] + 1;
    }
    return detail::make_raw(best, std::move(best_idx), alpha, EstimationMethod::exact_mcd);
}

} // namespace robda

#endif // ROBDA_MCD_HPP
