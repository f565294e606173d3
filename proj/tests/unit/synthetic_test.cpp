#include "robda/synthetic.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <sstream>

using namespace robda;

namespace {

std::size_t count(const std::vector<Provenance>& prov, Provenance which) {
    std::size_t n = 0;
    for (auto p : prov) n += p == which;
    return n;
}

} // namespace

TEST(Synthetic, DefaultConfigCounts) {
    const auto pair = generate_contaminated_pair(SyntheticConfig{});
    EXPECT_EQ(pair.clean.n(), 180u);
    EXPECT_EQ(pair.contaminated.n(), 180u);
    EXPECT_EQ(pair.clean.class_sizes(), (std::vector<std::size_t>{80, 100}));
    EXPECT_EQ(count(pair.provenance, Provenance::mislabeled), 8u);
    EXPECT_EQ(count(pair.provenance, Provenance::replaced), 13u);
    EXPECT_EQ(pair.clean.class_names(), (std::vector<std::string>{"1", "2"}));
}

TEST(Synthetic, ProvenanceMatchesTheDifferences) {
    const auto pair = generate_contaminated_pair(SyntheticConfig{});
    std::array<std::size_t, 2> swapped{0, 0}, replaced{0, 0};
    for (std::size_t i = 0; i < 180; ++i) {
        const bool label_changed = pair.clean.label(i) != pair.contaminated.label(i);
        const bool moved = pair.clean.row(i) != pair.contaminated.row(i);
        EXPECT_EQ(label_changed, pair.provenance[i] == Provenance::mislabeled) << i;
        EXPECT_EQ(moved, pair.provenance[i] == Provenance::replaced) << i;
        if (label_changed) ++swapped[pair.clean.label(i)];
        if (moved) {
            ++replaced[pair.clean.label(i)];
            const Eigen::VectorXd c = SyntheticConfig{}.outlier_centers[pair.clean.label(i)];
            EXPECT_LT((pair.contaminated.row(i).transpose() - c).norm(), 3.0);
        }
    }
    EXPECT_EQ(swapped, (std::array<std::size_t, 2>{4, 4}));
    EXPECT_EQ(replaced, (std::array<std::size_t, 2>{5, 8}));
}

TEST(Synthetic, ZeroNoiseIsBitwiseIdentity) {
    SyntheticConfig cfg;
    cfg.swaps = {0, 0};
    cfg.replacements = {0, 0};
    const auto pair = generate_contaminated_pair(cfg);
    EXPECT_TRUE(pair.clean == pair.contaminated);
    EXPECT_EQ(std::memcmp(pair.clean.features().data(), pair.contaminated.features().data(),
                          sizeof(double) * static_cast<std::size_t>(pair.clean.features().size())),
              0);
    EXPECT_EQ(count(pair.provenance, Provenance::clean), 180u);
}

TEST(Synthetic, SameSeedSameData) {
    SyntheticConfig cfg;
    cfg.seed = 77;
    const auto a = generate_contaminated_pair(cfg);
    const auto b = generate_contaminated_pair(cfg);
    EXPECT_TRUE(a.clean == b.clean);
    EXPECT_TRUE(a.contaminated == b.contaminated);
    EXPECT_EQ(a.provenance, b.provenance);
    cfg.seed = 78;
    EXPECT_FALSE(generate_contaminated_pair(cfg).clean == a.clean);
}

TEST(Synthetic, CleanMomentsFollowTheConfig) {
    SyntheticConfig cfg;
    cfg.sizes = {4000, 4000};
    const auto pair = generate_contaminated_pair(cfg);
    for (std::size_t g = 0; g < 2; ++g) {
        const Eigen::MatrixXd xg = pair.clean.rows_of_class(g);
        const Eigen::VectorXd mean = xg.colwise().mean().transpose();
        const Eigen::MatrixXd c = xg.rowwise() - mean.transpose();
        const Eigen::MatrixXd cov = c.transpose() * c / 3999.0;
        EXPECT_LT((mean - cfg.means[g]).norm(), 0.1);
        EXPECT_LT((cov - cfg.covariances[g]).cwiseAbs().maxCoeff(), 0.15);
    }
}

TEST(Synthetic, MislabeledCasesSitOnTheirOwnSide) {
    // Bayes rule of the generating model, with explicit inverses
    const SyntheticConfig cfg;
    auto log_num = [&](const Eigen::VectorXd& x, std::size_t g) {
        const Eigen::VectorXd d = x - cfg.means[g];
        return std::log(static_cast<double>(cfg.sizes[g])) - 0.5 * std::log(cfg.covariances[g].determinant()) -
               0.5 * d.dot(cfg.covariances[g].inverse() * d);
    };
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SyntheticConfig c = cfg;
        c.seed = seed;
        const auto pair = generate_contaminated_pair(c);
        for (std::size_t i = 0; i < 180; ++i) {
            if (pair.provenance[i] != Provenance::mislabeled) continue;
            const auto g = pair.clean.label(i);
            const Eigen::VectorXd x = pair.clean.row(i).transpose();
            EXPECT_EQ(pair.contaminated.label(i), 1 - g);
            EXPECT_GE(log_num(x, g), log_num(x, 1 - g)) << "seed " << seed << " case " << i;
        }
    }
}

TEST(Synthetic, ConfigValidation) {
    SyntheticConfig cfg;
    cfg.swaps = {80, 40};
    EXPECT_THROW(generate_contaminated_pair(cfg), ConfigError);
    cfg = SyntheticConfig{};
    cfg.covariances[0] = Eigen::Matrix2d::Zero();
    EXPECT_THROW(generate_contaminated_pair(cfg), ConfigError);
    cfg = SyntheticConfig{};
    cfg.means[1] = Eigen::Vector3d::Zero();
    EXPECT_THROW(generate_contaminated_pair(cfg), ConfigError);
}

TEST(SyntheticConfigFile, ParsesKeys) {
    std::istringstream in("# comment\nn1 = 30\nn2=40\nmean2 = 1, 2\ncov1 = 2,0.5,0.5,1\nswap1 = 2\nout2=3\n"
                          "outlier_spread1 = 0.5\nseed = 9\n");
    const auto cfg = parse_synthetic_config(in);
    EXPECT_EQ(cfg.sizes[0], 30u);
    EXPECT_EQ(cfg.sizes[1], 40u);
    EXPECT_EQ(cfg.means[1], Eigen::Vector2d(1, 2));
    EXPECT_EQ(cfg.covariances[0](0, 1), 0.5);
    EXPECT_EQ(cfg.swaps[0], 2u);
    EXPECT_EQ(cfg.replacements[1], 3u);
    EXPECT_EQ(cfg.outlier_spreads[0], 0.5);
    EXPECT_EQ(cfg.seed, 9u);
}

TEST(SyntheticConfigFile, Errors) {
    std::istringstream unknown("colour = red\n");
    EXPECT_THROW(parse_synthetic_config(unknown), ConfigError);
    std::istringstream no_eq("n1 30\n");
    EXPECT_THROW(parse_synthetic_config(no_eq), ConfigError);
    std::istringstream bad_cov("cov1 = 1,2,3\n");
    EXPECT_THROW(parse_synthetic_config(bad_cov), ConfigError);
    std::istringstream bad_seed("seed = -1\n");
    EXPECT_THROW(parse_synthetic_config(bad_seed), ConfigError);
}
