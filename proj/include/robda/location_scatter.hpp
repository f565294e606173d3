#ifndef ROBDA_LOCATION_SCATTER_HPP
#define ROBDA_LOCATION_SCATTER_HPP

#include "robda/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robda {

enum class EstimationMethod { classical, mcd_raw, mcd_reweighted, exact_mcd };

inline std::string_view to_string(EstimationMethod m) {
    switch (m) {
    case EstimationMethod::classical: return "classical";
    case EstimationMethod::mcd_raw: return "mcd_raw";
    case EstimationMethod::mcd_reweighted: return "mcd_reweighted";
    case EstimationMethod::exact_mcd: return "exact_mcd";
    }
    return "classical";
}

inline EstimationMethod estimation_method_from_string(std::string_view s) {
    if (s == "classical") return EstimationMethod::classical;
    if (s == "mcd_raw") return EstimationMethod::mcd_raw;
    if (s == "mcd_reweighted") return EstimationMethod::mcd_reweighted;
    if (s == "exact_mcd") return EstimationMethod::exact_mcd;
    throw DataError("unknown estimation method '" + std::string(s) + "'");
}

/// Matrices with a reciprocal condition number below this are treated as singular.
inline constexpr double kMinReciprocalCondition = 1e-12;

/// Center and positive definite scatter of one class, with the Cholesky
/// factor and log-determinant cached for distance and score evaluation.
class LocationScatter {
public:
    LocationScatter(Eigen::VectorXd center, Eigen::MatrixXd scatter,
                    EstimationMethod method = EstimationMethod::classical)
        : center_(std::move(center)), scatter_(std::move(scatter)), method_(method) {
        const auto p = center_.size();
        if (p == 0) throw ShapeError("LocationScatter: empty center");
        if (scatter_.rows() != p || scatter_.cols() != p)
            throw ShapeError("LocationScatter: scatter is " + std::to_string(scatter_.rows()) + "x" +
                             std::to_string(scatter_.cols()) + ", center has length " + std::to_string(p));
        if (!center_.allFinite() || !scatter_.allFinite())
            throw DegenerateError("LocationScatter: non-finite center or scatter");
        const double scale = scatter_.cwiseAbs().maxCoeff();
        if ((scatter_ - scatter_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw DegenerateError("LocationScatter: scatter is not symmetric");
        scatter_ = 0.5 * (scatter_ + scatter_.transpose()).eval();
        llt_.compute(scatter_);
        if (llt_.info() != Eigen::Success || !(llt_.rcond() >= kMinReciprocalCondition))
            throw DegenerateError("LocationScatter: scatter is not positive definite");
        log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    }

    const Eigen::VectorXd& center() const noexcept { return center_; }
    const Eigen::MatrixXd& scatter() const noexcept { return scatter_; }
    EstimationMethod method() const noexcept { return method_; }
    double log_det() const noexcept { return log_det_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(center_.size()); }
    const Eigen::LLT<Eigen::MatrixXd>& cholesky() const noexcept { return llt_; }

    const std::optional<std::vector<std::size_t>>& h_subset() const noexcept { return h_subset_; }
    const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }
    const std::optional<double>& alpha() const noexcept { return alpha_; }

    LocationScatter& set_h_subset(std::vector<std::size_t> idx) {
        h_subset_ = std::move(idx);
        return *this;
    }
    LocationScatter& set_weights(std::vector<double> w) {
        weights_ = std::move(w);
        return *this;
    }
    LocationScatter& set_alpha(double a) {
        alpha_ = a;
        return *this;
    }

    /// (x - center)' scatter^{-1} (x - center) via the triangular factor.
    template <class Derived>
    double squared_distance(const Eigen::MatrixBase<Derived>& x) const {
        if (x.size() != center_.size())
            throw ShapeError("distance: point has dimension " + std::to_string(x.size()) + ", expected " +
                             std::to_string(center_.size()));
        Eigen::VectorXd d = x.derived().reshaped() - center_;
        llt_.matrixL().solveInPlace(d);
        return d.squaredNorm();
    }

    template <class Derived>
    double distance(const Eigen::MatrixBase<Derived>& x) const {
        return std::sqrt(squared_distance(x));
    }

private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd scatter_;
    EstimationMethod method_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_det_ = 0.0;
    std::optional<std::vector<std::size_t>> h_subset_;
    std::optional<std::vector<double>> weights_;
    std::optional<double> alpha_;
};

/// Mahalanobis (or robust, when `est` is an MCD fit) distance of x.
template <class Derived>
double mahalanobis(const Eigen::MatrixBase<Derived>& x, const LocationScatter& est) {
    return est.distance(x);
}

} // namespace robda

#endif // ROBDA_LOCATION_SCATTER_HPP
