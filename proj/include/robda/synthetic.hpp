#ifndef ROBDA_SYNTHETIC_HPP
#define ROBDA_SYNTHETIC_HPP

// Two Gaussian classes plus configurable label noise and measurement noise.

#include "robda/dataset.hpp"
#include "robda/error.hpp"
#include "robda/format.hpp"
#include "robda/key_value.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace robda {

/// Parameters of the contamination experiment. Index 0 is class "1", index 1 class "2".
struct SyntheticConfig {
    std::array<std::size_t, 2> sizes{80, 100};
    std::array<Eigen::VectorXd, 2> means{Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(3.5, 2.0)};
    std::array<Eigen::MatrixXd, 2> covariances{(Eigen::Matrix2d() << 1.0, 0.4, 0.4, 1.0).finished(),
                                               (Eigen::Matrix2d() << 1.5, -0.6, -0.6, 1.2).finished()};
    /// cases of class g relabeled as the other class
    std::array<std::size_t, 2> swaps{4, 4};
    /// cases of class g whose features are replaced by outlier-cluster draws
    std::array<std::size_t, 2> replacements{5, 8};
    std::array<Eigen::VectorXd, 2> outlier_centers{Eigen::Vector2d(-3.0, 6.0), Eigen::Vector2d(-1.0, -5.0)};
    /// outlier clusters have covariance spread * I
    std::array<double, 2> outlier_spreads{0.3, 0.3};
    std::uint64_t seed = 1;

    std::size_t dim() const { return static_cast<std::size_t>(means[0].size()); }

    void validate() const {
        const auto p = means[0].size();
        if (p == 0) throw ConfigError("synthetic: empty mean vector");
        for (int g = 0; g < 2; ++g) {
            const std::string tag = " of class " + std::to_string(g + 1);
            if (sizes[g] == 0) throw ConfigError("synthetic: size" + tag + " must be positive");
            if (means[g].size() != p || outlier_centers[g].size() != p)
                throw ConfigError("synthetic: mean or outlier center" + tag + " has wrong dimension");
            if (covariances[g].rows() != p || covariances[g].cols() != p)
                throw ConfigError("synthetic: covariance" + tag + " has wrong shape");
            if ((covariances[g] - covariances[g].transpose()).cwiseAbs().maxCoeff() > 1e-12)
                throw ConfigError("synthetic: covariance" + tag + " is not symmetric");
            Eigen::LLT<Eigen::MatrixXd> llt(covariances[g]);
            if (llt.info() != Eigen::Success)
                throw ConfigError("synthetic: covariance" + tag + " is not positive definite");
            if (!(outlier_spreads[g] > 0.0)) throw ConfigError("synthetic: outlier spread" + tag + " must be positive");
            if (swaps[g] + replacements[g] > sizes[g])
                throw ConfigError("synthetic: noise counts" + tag + " exceed the class size");
        }
    }
};

enum class Provenance { clean, mislabeled, replaced };

inline std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::clean: return "clean";
    case Provenance::mislabeled: return "mislabeled";
    case Provenance::replaced: return "replaced";
    }
    return "clean";
}

struct ContaminatedPair {
    LabeledDataset clean;
    LabeledDataset contaminated;
    std::vector<Provenance> provenance;
};

/// Pure function of the config (including its seed). Label noise goes to the
/// cases of each class nearest (Euclidean) the other class's mean among those
/// the generating model still assigns to their own class (falling back to the
/// remaining cases when too few qualify); measurement noise replaces randomly
/// chosen, not relabeled cases of the class.
inline ContaminatedPair generate_contaminated_pair(const SyntheticConfig& cfg) {
    cfg.validate();
    const auto p = static_cast<Eigen::Index>(cfg.dim());
    const std::size_t n = cfg.sizes[0] + cfg.sizes[1];
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> z01(0.0, 1.0);
    auto draw = [&](const Eigen::VectorXd& mean, const Eigen::MatrixXd& lower) {
        Eigen::VectorXd z(p);
        for (Eigen::Index j = 0; j < p; ++j) z(j) = z01(rng);
        return Eigen::VectorXd(mean + lower * z);
    };

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
    std::vector<std::size_t> labels(n);
    std::size_t row = 0;
    for (std::size_t g = 0; g < 2; ++g) {
        const Eigen::MatrixXd lower = Eigen::LLT<Eigen::MatrixXd>(cfg.covariances[g]).matrixL();
        for (std::size_t k = 0; k < cfg.sizes[g]; ++k, ++row) {
            x.row(static_cast<Eigen::Index>(row)) = draw(cfg.means[g], lower).transpose();
            labels[row] = g;
        }
    }
    const std::vector<std::string> names{"1", "2"};
    std::vector<std::string> features;
    for (Eigen::Index j = 0; j < p; ++j) features.push_back("x" + std::to_string(j + 1));
    LabeledDataset clean(x, labels, names, features);

    std::array<Eigen::LLT<Eigen::MatrixXd>, 2> chol{Eigen::LLT<Eigen::MatrixXd>(cfg.covariances[0]),
                                                    Eigen::LLT<Eigen::MatrixXd>(cfg.covariances[1])};
    auto bayes_log_numerator = [&](const Eigen::VectorXd& xi, std::size_t g) {
        const Eigen::MatrixXd lower = chol[g].matrixL();
        const Eigen::VectorXd z = lower.triangularView<Eigen::Lower>().solve(xi - cfg.means[g]);
        return std::log(static_cast<double>(cfg.sizes[g])) - lower.diagonal().array().log().sum() - 0.5 * z.squaredNorm();
    };

    std::vector<Provenance> prov(n, Provenance::clean);
    Eigen::MatrixXd xc = x;
    std::vector<std::size_t> lc = labels;
    std::size_t first = 0;
    for (std::size_t g = 0; g < 2; ++g) {
        std::vector<std::size_t> members(cfg.sizes[g]);
        std::iota(members.begin(), members.end(), first);
        first += cfg.sizes[g];

        const auto& target = cfg.means[1 - g];
        std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return (x.row(static_cast<Eigen::Index>(a)).transpose() - target).squaredNorm() <
                   (x.row(static_cast<Eigen::Index>(b)).transpose() - target).squaredNorm();
        });
        // candidates on the own side of the true Bayes boundary come first
        std::stable_partition(members.begin(), members.end(), [&](std::size_t i) {
            const Eigen::VectorXd xi = x.row(static_cast<Eigen::Index>(i)).transpose();
            return bayes_log_numerator(xi, g) >= bayes_log_numerator(xi, 1 - g);
        });
        for (std::size_t k = 0; k < cfg.swaps[g]; ++k) {
            lc[members[k]] = 1 - g;
            prov[members[k]] = Provenance::mislabeled;
        }

        std::vector<std::size_t> rest(members.begin() + static_cast<std::ptrdiff_t>(cfg.swaps[g]), members.end());
        std::sort(rest.begin(), rest.end());
        const Eigen::MatrixXd lower =
            std::sqrt(cfg.outlier_spreads[g]) * Eigen::MatrixXd::Identity(p, p);
        for (std::size_t k = 0; k < cfg.replacements[g]; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, rest.size() - 1);
            std::swap(rest[k], rest[pick(rng)]);
            xc.row(static_cast<Eigen::Index>(rest[k])) = draw(cfg.outlier_centers[g], lower).transpose();
            prov[rest[k]] = Provenance::replaced;
        }
    }
    LabeledDataset contaminated(std::move(xc), std::move(lc), names, features);
    return ContaminatedPair{std::move(clean), std::move(contaminated), std::move(prov)};
}

namespace detail {

inline std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(value);
    while (std::getline(in, token, ',')) {
        double v = 0.0;
        if (!parse_double(token, v)) throw ConfigError("config key '" + key + "': cannot parse '" + token + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty value");
    return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& value) {
    const auto v = parse_number_list(key, value);
    if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0]))
        throw ConfigError("config key '" + key + "': expected a nonnegative integer");
    return static_cast<std::size_t>(v[0]);
}

inline Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace detail

/// Keys understood by apply_synthetic_setting / load_synthetic_config.
inline const std::vector<std::string>& synthetic_config_keys() {
    static const std::vector<std::string> keys{
        "n1", "n2", "mean1", "mean2", "cov1", "cov2", "swap1", "swap2", "out1", "out2",
        "outlier_center1", "outlier_center2", "outlier_spread1", "outlier_spread2", "seed"};
    return keys;
}

/// Sets one key. Vectors are comma-separated; covariances are row-major.
inline void apply_synthetic_setting(SyntheticConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_count;
    using detail::parse_number_list;
    auto cls = [&](char c) { return static_cast<std::size_t>(c - '1'); };
    const char last = key.empty() ? '\0' : key.back();
    const bool indexed = last == '1' || last == '2';
    const std::string stem = indexed ? key.substr(0, key.size() - 1) : key;
    if (key == "seed") {
        const auto v = parse_number_list(key, value);
        if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0])) throw ConfigError("seed must be a nonnegative integer");
        cfg.seed = static_cast<std::uint64_t>(v[0]);
    } else if (indexed && stem == "n") {
        cfg.sizes[cls(last)] = parse_count(key, value);
    } else if (indexed && stem == "swap") {
        cfg.swaps[cls(last)] = parse_count(key, value);
    } else if (indexed && stem == "out") {
        cfg.replacements[cls(last)] = parse_count(key, value);
    } else if (indexed && stem == "mean") {
        cfg.means[cls(last)] = detail::to_vector(parse_number_list(key, value));
    } else if (indexed && stem == "outlier_center") {
        cfg.outlier_centers[cls(last)] = detail::to_vector(parse_number_list(key, value));
    } else if (indexed && stem == "outlier_spread") {
        const auto v = parse_number_list(key, value);
        if (v.size() != 1) throw ConfigError("config key '" + key + "': expected one number");
        cfg.outlier_spreads[cls(last)] = v[0];
    } else if (indexed && stem == "cov") {
        const auto v = parse_number_list(key, value);
        const auto p = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
        if (static_cast<std::size_t>(p * p) != v.size())
            throw ConfigError("config key '" + key + "': expected p*p numbers");
        Eigen::MatrixXd c(p, p);
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = 0; j < p; ++j) c(i, j) = v[static_cast<std::size_t>(i * p + j)];
        cfg.covariances[cls(last)] = c;
    } else {
        throw ConfigError("unknown synthetic config key '" + key + "'");
    }
}

/// Flat `key = value` lines; '#' starts a comment.
inline SyntheticConfig parse_synthetic_config(std::istream& in, SyntheticConfig cfg = {}) {
    for (const auto& [key, value] : read_key_values(in)) apply_synthetic_setting(cfg, key, value);
    return cfg;
}

inline SyntheticConfig load_synthetic_config(const std::filesystem::path& path, SyntheticConfig cfg = {}) {
    for (const auto& [key, value] : load_key_values(path)) apply_synthetic_setting(cfg, key, value);
    return cfg;
}

} // namespace robda

#endif // ROBDA_SYNTHETIC_HPP
