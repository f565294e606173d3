#ifndef ROBDA_ESTIMATORS_HPP
#define ROBDA_ESTIMATORS_HPP

#include "robda/chi2.hpp"
#include "robda/error.hpp"
#include "robda/location_scatter.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>

namespace robda {

/// Column means and unbiased sample covariance (divisor m - 1).
inline LocationScatter classical_moments(const Eigen::MatrixXd& x) {
    const auto m = x.rows();
    const auto p = x.cols();
    if (p == 0) throw ShapeError("classical_moments: no columns");
    if (m < p + 1)
        throw DegenerateError("classical_moments: " + std::to_string(m) + " cases cannot support a " +
                              std::to_string(p) + "-dimensional covariance (need at least " +
                              std::to_string(p + 1) + ")");
    Eigen::VectorXd center = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - center.transpose();
    Eigen::MatrixXd scatter = (centered.transpose() * centered) / static_cast<double>(m - 1);
    try {
        return LocationScatter(std::move(center), std::move(scatter), EstimationMethod::classical);
    } catch (const DegenerateError&) {
        throw DegenerateError("classical_moments: sample covariance is singular");
    }
}

/// One class's contribution to a pooled covariance.
struct PooledPart {
    std::size_t count;
    Eigen::MatrixXd scatter;
};

/// sum_g (m_g - 1) S_g / (sum_g m_g - G).
inline Eigen::MatrixXd pooled_covariance(std::span<const PooledPart> parts) {
    if (parts.size() < 2) throw ConfigError("pooled_covariance: need at least two classes");
    const auto p = parts.front().scatter.rows();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p, p);
    std::size_t total = 0;
    for (const auto& part : parts) {
        if (part.scatter.rows() != p || part.scatter.cols() != p)
            throw ShapeError("pooled_covariance: scatter dimensions differ between classes");
        if (part.count == 0) throw DegenerateError("pooled_covariance: empty class");
        acc += static_cast<double>(part.count - 1) * part.scatter;
        total += part.count;
    }
    if (total <= parts.size())
        throw DegenerateError("pooled_covariance: degenerate pooling, total count equals number of classes");
    acc /= static_cast<double>(total - parts.size());
    return 0.5 * (acc + acc.transpose());
}

/// Factor making the covariance of the alpha-fraction of points closest to
/// the center consistent at the normal model: alpha / F_{chi2_{p+2}}(chi2_{p,alpha}).
inline double consistency_factor(double alpha, std::size_t p) {
    if (!(alpha >= 0.5 && alpha <= 1.0)) throw DomainError("consistency_factor: alpha must lie in [0.5, 1]");
    if (p == 0) throw DomainError("consistency_factor: p must be positive");
    if (alpha == 1.0) return 1.0;
    const double q = chi2_quantile(static_cast<double>(p), alpha);
    return alpha / chi2_cdf(static_cast<double>(p + 2), q);
}

} // namespace robda

#endif // ROBDA_ESTIMATORS_HPP
