#ifndef ROBDA_CHI2_HPP
#define ROBDA_CHI2_HPP

#include "robda/error.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace robda {

/// P(X <= x) for X ~ chi-squared with `dof` degrees of freedom.
inline double chi2_cdf(double dof, double x) {
    if (!(dof > 0.0)) throw DomainError("chi2_cdf: degrees of freedom must be positive");
    if (std::isnan(x)) throw DomainError("chi2_cdf: x is NaN");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

/// Upper tail P(X > x), accurate where chi2_cdf rounds to 1.
inline double chi2_sf(double dof, double x) {
    if (!(dof > 0.0)) throw DomainError("chi2_sf: degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

inline double chi2_quantile(double dof, double prob) {
    if (!(dof > 0.0)) throw DomainError("chi2_quantile: degrees of freedom must be positive");
    if (!(prob > 0.0 && prob < 1.0))
        throw DomainError("chi2_quantile: probability must lie in (0, 1), got " + std::to_string(prob));
    return 2.0 * boost::math::gamma_p_inv(0.5 * dof, prob);
}

/// sqrt of the chi-squared quantile: the usual cutoff on (robust) distances.
inline double distance_cutoff(std::size_t p, double prob) {
    return std::sqrt(chi2_quantile(static_cast<double>(p), prob));
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw DomainError("normal_quantile: probability must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

} // namespace robda

#endif // ROBDA_CHI2_HPP
