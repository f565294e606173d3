#include "robda/diagnostics.hpp"
#include "robda/farness.hpp"
#include "robda/synthetic.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace robda;
using robda::testing::Gen;

namespace {

DASpec make_spec(Rule rule, Estimation est) {
    DASpec s;
    s.rule = rule;
    s.estimation = est;
    return s;
}

DAModel symmetric_model(std::size_t G, Rule rule = Rule::quadratic) {
    std::vector<LocationScatter> comps;
    std::vector<std::string> names;
    for (std::size_t g = 0; g < G; ++g) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(G);
        comps.emplace_back(Eigen::Vector2d(std::cos(angle), std::sin(angle)), Eigen::Matrix2d::Identity());
        names.push_back("c" + std::to_string(g));
    }
    return DAModel(make_spec(rule, Estimation::classical), names, comps, std::vector<double>(G, 1.0 / static_cast<double>(G)),
                   std::vector<std::size_t>(G, 10), std::vector<std::size_t>(G, 10));
}

// prior * N(x; mu, S) evaluated directly
double density(const Eigen::VectorXd& x, const LocationScatter& c, double prior) {
    const Eigen::VectorXd d = x - c.center();
    const double p = static_cast<double>(x.size());
    return prior * std::exp(-0.5 * d.dot(c.scatter().inverse() * d)) /
           std::sqrt(std::pow(2.0 * std::numbers::pi, p) * c.scatter().determinant());
}

CaseDiagnostics fake(std::size_t given, std::size_t predicted, double pac_value, bool out_d = false, bool out_f = false) {
    CaseDiagnostics d;
    d.given = given;
    d.predicted = predicted;
    d.pac = pac_value;
    d.silhouette = silhouette(pac_value);
    d.outlier_distance = out_d;
    d.outlier_farness = out_f;
    return d;
}

} // namespace

TEST(Posteriors, EquidistantPointIsUniform) {
    for (std::size_t G : {2, 3, 5}) {
        const auto model = symmetric_model(G);
        const auto post = posteriors(model, Eigen::Vector2d::Zero());
        for (Eigen::Index g = 0; g < post.size(); ++g) EXPECT_NEAR(post(g), 1.0 / static_cast<double>(G), 1e-14);
    }
}

TEST(Posteriors, FarPointDoesNotOverflow) {
    const auto model = symmetric_model(3);
    const Eigen::Vector2d x = 50.0 * Eigen::Vector2d(1.0, 0.0);
    const auto post = posteriors(model, x);
    EXPECT_TRUE(post.allFinite());
    EXPECT_NEAR(post(0), 1.0, 1e-12);
    const auto far = posteriors(model, Eigen::Vector2d(1e5, 0.0));
    EXPECT_TRUE(far.allFinite());
    EXPECT_EQ(far(0), 1.0);
}

TEST(Posteriors, MatchDirectDensities) {
    Gen gen(41);
    const auto pair = generate_contaminated_pair(SyntheticConfig{});
    for (auto rule : {Rule::quadratic, Rule::linear}) {
        const auto model = fit(pair.contaminated, make_spec(rule, Estimation::robust));
        for (int k = 0; k < 200; ++k) {
            const Eigen::Vector2d x(gen.uniform(-4, 7), gen.uniform(-4, 6));
            const auto post = posteriors(model, x);
            Eigen::Vector2d dens;
            for (std::size_t g = 0; g < 2; ++g) dens(static_cast<Eigen::Index>(g)) = density(x, model.component(g), model.priors()[g]);
            ASSERT_GT(dens.sum(), 1e-250);
            EXPECT_NEAR(post(0), dens(0) / dens.sum(), 1e-10);
            EXPECT_NEAR(post.sum(), 1.0, 1e-12);
            EXPECT_EQ(argmax(post), predict(model, x).predicted);
            const auto logs = log_numerators(model, x);
            EXPECT_NEAR(logs(1), std::log(dens(1)), 1e-9 * std::max(1.0, std::abs(logs(1))));
        }
    }
}

TEST(Pac, HandValues) {
    EXPECT_EQ(pac(Eigen::Vector2d(0.5, 0.5), 0), 0.5);
    EXPECT_NEAR(pac(Eigen::Vector2d(0.8, 0.2), 0), 0.2, 1e-15);
    EXPECT_NEAR(pac(Eigen::Vector3d(0.5, 0.3, 0.2), 0), 0.375, 1e-15);
    EXPECT_NEAR(pac(Eigen::Vector3d(0.5, 0.3, 0.2), 2), 0.5 / 0.7, 1e-15);
    EXPECT_EQ(pac(Eigen::Vector2d(0.0, 0.0), 1), 0.5);
    EXPECT_THROW(pac(Eigen::VectorXd::Ones(1), 0), DomainError);
    EXPECT_THROW(pac_from_log(Eigen::VectorXd::Ones(1), 0), DomainError);
}

TEST(Pac, TwoClassIdentityIsExact) {
    Gen gen(42);
    for (int k = 0; k < 1000; ++k) {
        const auto post = gen.simplex(2, k % 2 == 0);
        EXPECT_EQ(pac(post, 0), post(1) / (post(0) + post(1)));
        EXPECT_NEAR(pac(post, 0), post(1), 1e-15);
    }
}

TEST(Pac, FromLogsAgreesWithPosteriors) {
    Gen gen(43);
    for (int k = 0; k < 1000; ++k) {
        const auto G = static_cast<Eigen::Index>(gen.index(2, 6));
        Eigen::VectorXd logs(G);
        for (Eigen::Index g = 0; g < G; ++g) logs(g) = gen.normal() * 20.0;
        const auto given = gen.index(0, static_cast<std::size_t>(G) - 1);
        EXPECT_NEAR(pac_from_log(logs, given), pac(softmax(logs), given), 1e-12);
    }
}

TEST(Pac, SurvivesTotalUnderflow) {
    // both numerators below the smallest double
    const Eigen::Vector2d logs(-2000.0, -2001.0);
    EXPECT_NEAR(pac_from_log(logs, 0), 1.0 / (1.0 + std::exp(1.0)), 1e-15);
    EXPECT_NEAR(pac_from_log(logs, 1), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(Silhouette, Endpoints) {
    EXPECT_EQ(silhouette(0.0), 1.0);
    EXPECT_EQ(silhouette(0.5), 0.0);
    EXPECT_EQ(silhouette(1.0), -1.0);
}

TEST(Diagnose, PerCaseInvariants) {
    const auto pair = generate_contaminated_pair(SyntheticConfig{});
    const auto model = fit(pair.contaminated, make_spec(Rule::quadratic, Estimation::robust));
    const auto fm = fit_farness(model, pair.contaminated);
    const auto diags = diagnose(model, pair.contaminated, &fm);
    ASSERT_EQ(diags.size(), 180u);
    for (std::size_t i = 0; i < diags.size(); ++i) {
        const auto& d = diags[i];
        EXPECT_EQ(d.silhouette, 1.0 - 2.0 * d.pac);
        EXPECT_GE(d.pac, 0.0);
        EXPECT_LE(d.pac, 1.0);
        EXPECT_NEAR(d.posteriors.sum(), 1.0, 1e-12);
        EXPECT_EQ(d.predicted != d.given, d.pac > 0.5) << i;
        EXPECT_EQ(d.given, pair.contaminated.label(i));
        EXPECT_EQ(d.rd_given, d.distances(static_cast<Eigen::Index>(d.given)));
        EXPECT_EQ(d.rd_predicted, d.distances(static_cast<Eigen::Index>(d.predicted)));
        EXPECT_NEAR(d.pac, pac(d.posteriors, d.given), 1e-12);
        for (Eigen::Index g = 0; g < 2; ++g) {
            EXPECT_GE(d.farness(g), 0.0);
            EXPECT_LE(d.farness(g), 1.0);
        }
        EXPECT_EQ(d.outlier_farness, d.farness.minCoeff() > 0.99);
    }
}

TEST(Diagnose, WithoutFarnessModel) {
    const auto model = symmetric_model(2);
    const auto d = diagnose_case(model, Eigen::Vector2d(0.3, 0.1), 1);
    EXPECT_TRUE(d.farness.array().isNaN().all());
    EXPECT_FALSE(d.outlier_farness);
    EXPECT_THROW(diagnose_case(model, Eigen::Vector2d::Zero(), 2), DomainError);
}

TEST(FarnessOutlier, EveryClassMustExceedCutoff) {
    EXPECT_TRUE(farness_outlier(Eigen::Vector2d(0.995, 0.999), 0.99));
    EXPECT_FALSE(farness_outlier(Eigen::Vector2d(0.995, 0.5), 0.99));
    EXPECT_FALSE(farness_outlier(Eigen::Vector2d(0.995, std::nan("")), 0.99));
    EXPECT_FALSE(farness_outlier(Eigen::Vector2d(0.99, 0.999), 0.99));
}

TEST(Confusion, PerfectClassifier) {
    std::vector<CaseDiagnostics> diags;
    for (std::size_t g = 0; g < 3; ++g)
        for (int k = 0; k < 4; ++k) diags.push_back(fake(g, g, 0.1));
    const auto cm = confusion(diags, {"a", "b", "c"});
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(cm.at(r, c), r == c ? 4u : 0u);
    EXPECT_EQ(accuracy(cm), 1.0);
}

TEST(Confusion, OutlierColumnArithmetic) {
    // 70 + 88 correct of 180, 11 outliers: 158/180 and 156/169 style arithmetic
    std::vector<CaseDiagnostics> diags;
    for (int k = 0; k < 68; ++k) diags.push_back(fake(0, 0, 0.1));
    for (int k = 0; k < 2; ++k) diags.push_back(fake(0, 0, 0.1, true));
    for (int k = 0; k < 4; ++k) diags.push_back(fake(0, 1, 0.9));
    for (int k = 0; k < 6; ++k) diags.push_back(fake(0, 1, 0.9, true));
    for (int k = 0; k < 88; ++k) diags.push_back(fake(1, 1, 0.1));
    for (int k = 0; k < 9; ++k) diags.push_back(fake(1, 0, 0.9));
    for (int k = 0; k < 3; ++k) diags.push_back(fake(1, 0, 0.9, true));
    const std::vector<std::string> names{"1", "2"};
    const auto plain = confusion(diags, names);
    const auto with = confusion(diags, names, OutlierRule::distance);
    EXPECT_EQ(plain.cols(), 2u);
    EXPECT_EQ(with.cols(), 3u);
    EXPECT_EQ(with.column_label(2), "outliers");
    EXPECT_NEAR(accuracy(plain), 158.0 / 180.0, 1e-15);
    EXPECT_EQ(with.outliers(), 11u);
    EXPECT_NEAR(accuracy(with, true), 156.0 / 169.0, 1e-15);
    EXPECT_NEAR(accuracy(with, false), 156.0 / 180.0, 1e-15);
    for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(with.row_sum(r), plain.row_sum(r));
    EXPECT_EQ(with.row_sum(0), 80u);
    EXPECT_EQ(with.row_sum(1), 100u);
}

TEST(Confusion, FromModelRowSumsUnchanged) {
    const auto pair = generate_contaminated_pair(SyntheticConfig{});
    const auto model = fit(pair.contaminated, make_spec(Rule::quadratic, Estimation::robust));
    const auto a = confusion(model, pair.contaminated, false);
    const auto b = confusion(model, pair.contaminated, true);
    const auto sizes = pair.contaminated.class_sizes();
    for (std::size_t r = 0; r < 2; ++r) {
        EXPECT_EQ(a.row_sum(r), sizes[r]);
        EXPECT_EQ(b.row_sum(r), sizes[r]);
    }
    std::size_t outliers = 0;
    for (std::size_t i = 0; i < pair.contaminated.n(); ++i) outliers += predict(model, pair.contaminated.row(i)).overall_outlier;
    EXPECT_EQ(b.outliers(), outliers);
    const auto diags = diagnose(model, pair.contaminated);
    const auto c = confusion(diags, model.class_names(), OutlierRule::distance);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(c.at(r, k), b.at(r, k));
}

TEST(Confusion, TextAndCsv) {
    std::vector<CaseDiagnostics> diags{fake(0, 0, 0.1), fake(1, 0, 0.8), fake(1, 1, 0.2, true)};
    const auto cm = confusion(diags, {"alpha", "beta"}, OutlierRule::distance);
    const auto csv = cm.to_csv();
    EXPECT_NE(csv.find("outliers"), std::string::npos);
    EXPECT_NE(csv.find("beta,1,0,1"), std::string::npos) << csv;
    EXPECT_NE(cm.to_text().find("alpha"), std::string::npos);
}

TEST(SilhouetteSummary, AllPerfect) {
    std::vector<CaseDiagnostics> diags{fake(0, 0, 0.0), fake(1, 1, 0.0), fake(1, 1, 0.0)};
    const auto s = silhouette_summary(diags, 2);
    EXPECT_EQ(s.overall, 1.0);
    EXPECT_EQ(s.per_class[0], 1.0);
    EXPECT_EQ(s.per_class[1], 1.0);
}

TEST(SilhouetteSummary, MatchesRecomputation) {
    Gen gen(44);
    std::vector<CaseDiagnostics> diags;
    std::vector<double> sums(3, 0.0);
    std::vector<int> counts(3, 0);
    double total = 0.0;
    for (int k = 0; k < 300; ++k) {
        const auto g = gen.index(0, 2);
        const double p = gen.uniform(0.0, 1.0);
        diags.push_back(fake(g, g, p));
        sums[g] += 1.0 - 2.0 * p;
        ++counts[g];
        total += 1.0 - 2.0 * p;
    }
    const auto s = silhouette_summary(diags, 3);
    for (std::size_t g = 0; g < 3; ++g) {
        EXPECT_NEAR(s.per_class[g], sums[g] / counts[g], 1e-12);
        EXPECT_EQ(s.class_counts[g], static_cast<std::size_t>(counts[g]));
    }
    EXPECT_NEAR(s.overall, total / 300.0, 1e-12);
    EXPECT_TRUE(std::isnan(silhouette_summary(diags, 4).per_class[3]));
}

TEST(QQ, ChiSquaredSampleHasUnitSlope) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Gen gen(500 + seed);
        std::vector<double> sq;
        for (int k = 0; k < 500; ++k) {
            sq.push_back(gen.chi_sq(4));
        }
        const auto q = qq_data(sq, 4);
        ASSERT_EQ(q.theoretical.size(), 500u);
        double sxy = 0, sxx = 0, mx = 0, my = 0;
        for (std::size_t i = 0; i < 500; ++i) {
            mx += q.theoretical[i];
            my += q.observed[i];
        }
        mx /= 500;
        my /= 500;
        for (std::size_t i = 0; i < 500; ++i) {
            sxy += (q.theoretical[i] - mx) * (q.observed[i] - my);
            sxx += (q.theoretical[i] - mx) * (q.theoretical[i] - mx);
        }
        EXPECT_GE(sxy / sxx, 0.85) << seed;
        EXPECT_LE(sxy / sxx, 1.15) << seed;
        EXPECT_TRUE(std::is_sorted(q.observed.begin(), q.observed.end()));
        EXPECT_NEAR(q.cutoff, chi2_quantile(4, 0.99), 1e-12);
    }
}

TEST(QQ, SinglePointSitsAtTheMedian) {
    const auto q = qq_data({7.0}, 3);
    ASSERT_EQ(q.theoretical.size(), 1u);
    EXPECT_NEAR(q.theoretical[0], chi2_quantile(3, 0.5), 1e-12);
    EXPECT_EQ(q.observed[0], 7.0);
    EXPECT_LE(q.identity_lo, q.theoretical[0]);
    EXPECT_GE(q.identity_hi, 7.0);
}

TEST(QQ, HeavyTailEndsAboveIdentity) {
    Gen gen(45);
    std::vector<double> sq;
    for (int k = 0; k < 400; ++k) sq.push_back(std::exp(0.5 + 1.5 * gen.normal()));
    const auto q = qq_data(sq, 2);
    for (std::size_t i = 390; i < 400; ++i) EXPECT_GT(q.observed[i], q.theoretical[i]) << i;
}

TEST(QQ, Errors) {
    EXPECT_THROW(qq_data({}, 2), DomainError);
    EXPECT_THROW(qq_data({1.0}, 0), DomainError);
}

TEST(Export, CsvHasOneRowPerCase) {
    const auto model = symmetric_model(2);
    Eigen::MatrixXd x(3, 2);
    x << 0.9, 0.1, -1.0, 0.2, 0.0, 0.0;
    const LabeledDataset data(x, {0, 1, 1}, {"c0", "c1"});
    const auto csv = diagnostics_to_csv(diagnose(model, data), model.class_names());
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "case,given,predicted,posterior_c0,posterior_c1,pac,silhouette,rd_c0,rd_c1,farness_c0,farness_c1,"
              "outlier_distance,outlier_farness");
    EXPECT_NE(csv.find(",NA,NA,"), std::string::npos);
}
