#include "robda/model_io.hpp"
#include "robda/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace robda;

namespace {

DASpec make_spec(Rule rule, Estimation est) {
    DASpec s;
    s.rule = rule;
    s.estimation = est;
    s.estimator.seed = 5;
    return s;
}

std::filesystem::path temp_file(const std::string& name) {
    std::string test = ::testing::UnitTest::GetInstance()->current_test_info()->name();
    std::replace(test.begin(), test.end(), '/', '_');
    return std::filesystem::temp_directory_path() / ("robda_model_" + test + "_" + name);
}

} // namespace

class ModelRoundTrip : public ::testing::TestWithParam<std::tuple<Rule, Estimation>> {};

TEST_P(ModelRoundTrip, ByteIdenticalAndSamePredictions) {
    const auto [rule, est] = GetParam();
    const auto pair = generate_contaminated_pair(SyntheticConfig{});
    const auto model = fit(pair.contaminated, make_spec(rule, est));
    const auto path = temp_file(std::string(to_string(rule)) + std::string(to_string(est)) + ".json");
    save_model(model, path);
    const auto back = load_model(path);
    EXPECT_EQ(serialize_model(back), serialize_model(model));
    std::filesystem::remove(path);

    EXPECT_EQ(back.priors(), model.priors());
    EXPECT_EQ(back.counts(), model.counts());
    EXPECT_EQ(back.unflagged_counts(), model.unflagged_counts());
    EXPECT_EQ(back.class_names(), model.class_names());
    EXPECT_EQ(back.spec().estimator.seed, 5u);
    for (std::size_t g = 0; g < 2; ++g) {
        EXPECT_EQ(back.component(g).center(), model.component(g).center());
        EXPECT_EQ(back.component(g).scatter(), model.component(g).scatter());
    }
    for (std::size_t i = 0; i < pair.contaminated.n(); ++i) {
        const auto a = predict(model, pair.contaminated.row(i));
        const auto b = predict(back, pair.contaminated.row(i));
        EXPECT_EQ(a.scores, b.scores);
        EXPECT_EQ(a.distances, b.distances);
    }
}

INSTANTIATE_TEST_SUITE_P(AllRules, ModelRoundTrip,
                         ::testing::Combine(::testing::Values(Rule::linear, Rule::quadratic),
                                            ::testing::Values(Estimation::classical, Estimation::robust)));

TEST(LocationScatterJson, Fields) {
    LocationScatter est(Eigen::Vector2d(0.1, 1.0 / 3.0), (Eigen::Matrix2d() << 2.0, 0.5, 0.5, 1.0).finished(),
                        EstimationMethod::mcd_reweighted);
    est.set_alpha(0.75);
    const auto j = to_json(est);
    EXPECT_EQ(j.at("method").get<std::string>(), "mcd_reweighted");
    EXPECT_EQ(j.at("center").size(), 2u);
    EXPECT_EQ(j.at("scatter").size(), 4u);
    EXPECT_EQ(j.at("scatter")[1].get<double>(), 0.5);
    EXPECT_NEAR(j.at("log_det").get<double>(), std::log(1.75), 1e-14);
    const auto back = location_scatter_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.center(), est.center());
    EXPECT_EQ(back.scatter(), est.scatter());
    EXPECT_EQ(*back.alpha(), 0.75);
}

TEST(ModelFile, RejectsBadInput) {
    const auto path = temp_file("bad.json");
    std::ofstream(path) << "{ not json";
    EXPECT_THROW(load_model(path), DataError);
    std::ofstream(path) << R"({"format": "something-else", "version": 1})";
    EXPECT_THROW(load_model(path), DataError);
    std::ofstream(path) << R"({"format": "robda-model", "version": 99})";
    EXPECT_THROW(load_model(path), DataError);
    std::filesystem::remove(path);
    EXPECT_THROW(load_model(path), DataError);
}
