#include "robda/csv.hpp"
#include "robda/model_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("robda_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    // Exit status of `robda <args>`, output captured in dir/out.txt.
    int run(const std::string& args) {
        const std::string cmd = std::string("\"") + ROBDA_CLI_PATH + "\" " + args + " > \"" + (dir_ / "out.txt").string() +
                                "\" 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string output() const { return slurp(dir_ / "out.txt"); }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    std::string path(const std::string& name) const { return "\"" + (dir_ / name).string() + "\""; }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, SimulateIsDeterministic) {
    ASSERT_EQ(run("simulate --seed 3 --out-dir " + path("a")), 0) << output();
    ASSERT_EQ(run("simulate --seed 3 --out-dir " + path("b")), 0) << output();
    for (const char* f : {"clean.csv", "contaminated.csv", "provenance.csv"}) {
        const auto a = slurp(dir_ / "a" / f);
        EXPECT_FALSE(a.empty()) << f;
        EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
    }
    ASSERT_EQ(run("simulate --seed 4 --out-dir " + path("c")), 0);
    EXPECT_NE(slurp(dir_ / "a" / "clean.csv"), slurp(dir_ / "c" / "clean.csv"));
    const auto data = robda::load_csv(dir_ / "a" / "contaminated.csv", "class");
    EXPECT_EQ(data.n(), 180u);
    EXPECT_EQ(data.p(), 2u);
}

TEST_F(Cli, NoContaminationGivesIdenticalFiles) {
    ASSERT_EQ(run("simulate --swap1 0 --swap2 0 --out1 0 --out2 0 --out-dir " + path("z")), 0) << output();
    EXPECT_EQ(slurp(dir_ / "z" / "clean.csv"), slurp(dir_ / "z" / "contaminated.csv"));
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
    std::ofstream(dir_ / "sim.conf") << "# small run\nn1 = 30\nn2 = 40\nseed = 9\n";
    ASSERT_EQ(run("simulate --config " + path("sim.conf") + " --n2 50 --out-dir " + path("s")), 0) << output();
    const auto data = robda::load_csv(dir_ / "s" / "clean.csv", "class");
    const auto sizes = data.class_sizes();
    ASSERT_EQ(sizes.size(), 2u);
    EXPECT_EQ(sizes[0] + sizes[1], 80u);
    std::ofstream(dir_ / "bad.conf") << "no_such_key = 1\n";
    EXPECT_EQ(run("simulate --config " + path("bad.conf") + " --out-dir " + path("t")), 1);
}

TEST_F(Cli, FitPredictRoundTrip) {
    ASSERT_EQ(run("simulate --out-dir " + path("d")), 0) << output();
    const std::string data = path("d/contaminated.csv");
    ASSERT_EQ(run("fit --data " + data + " --model " + path("m.json") + " --seed 2"), 0) << output();
    ASSERT_EQ(run("predict --model " + path("m.json") + " --data " + data + " --out " + path("p.csv")), 0) << output();

    const auto model = robda::load_model(dir_ / "m.json");
    const auto ds = robda::load_csv(dir_ / "d" / "contaminated.csv", "class").with_class_order(model.class_names());
    std::ifstream in(dir_ / "p.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("case,given,predicted,score_", 0), 0u) << line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto f = robda::detail::split_csv_line(line);
        const auto pred = robda::predict(model, ds.row(rows));
        EXPECT_EQ(f[2], model.class_names()[pred.predicted]);
        double s0 = 0;
        ASSERT_TRUE(robda::parse_double(f[3], s0));
        EXPECT_EQ(s0, pred.scores(0));
        EXPECT_EQ(f.back(), pred.overall_outlier ? "1" : "0");
        ++rows;
    }
    EXPECT_EQ(rows, 180u);

    // refitting with the same settings writes the same bytes
    ASSERT_EQ(run("fit --data " + data + " --model " + path("m2.json") + " --seed 2"), 0);
    EXPECT_EQ(slurp(dir_ / "m.json"), slurp(dir_ / "m2.json"));
}

TEST_F(Cli, DiagnoseReportsConfusion) {
    ASSERT_EQ(run("simulate --out-dir " + path("d")), 0);
    ASSERT_EQ(run("fit --data " + path("d/contaminated.csv") + " --model " + path("m.json")), 0);
    ASSERT_EQ(run("diagnose --model " + path("m.json") + " --data " + path("d/contaminated.csv") + " --out " +
                  path("diag.csv") + " --confusion " + path("cm.txt")),
              0)
        << output();
    EXPECT_NE(output().find("accuracy"), std::string::npos);
    const auto csv = slurp(dir_ / "diag.csv");
    EXPECT_EQ(csv.rfind("case,given,predicted,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 181);
    EXPECT_FALSE(slurp(dir_ / "cm.txt").empty());
}

TEST_F(Cli, ClassMapForOneClassWritesOneFile) {
    ASSERT_EQ(run("simulate --out-dir " + path("d")), 0);
    ASSERT_EQ(run("fit --data " + path("d/contaminated.csv") + " --model " + path("m.json")), 0);
    const auto model = robda::load_model(dir_ / "m.json");
    const auto& name = model.class_names()[0];
    ASSERT_EQ(run("plot --kind classmap --class " + name + " --model " + path("m.json") + " --data " +
                  path("d/contaminated.csv") + " --out-dir " + path("plots")),
              0)
        << output();
    std::size_t svgs = 0;
    for (const auto& e : fs::directory_iterator(dir_ / "plots")) svgs += e.path().extension() == ".svg";
    EXPECT_EQ(svgs, 1u);
}

TEST_F(Cli, EveryPlotKindRenders) {
    ASSERT_EQ(run("simulate --out-dir " + path("d")), 0);
    ASSERT_EQ(run("fit --data " + path("d/contaminated.csv") + " --model " + path("m.json")), 0);
    for (const char* kind : {"scorescore", "mosaic", "silhouette", "qrp", "classmap", "qq", "scatter"}) {
        EXPECT_EQ(run(std::string("plot --kind ") + kind + " --csv true --model " + path("m.json") + " --data " +
                      path("d/contaminated.csv") + " --out-dir " + path(kind)),
                  0)
            << kind << ": " << output();
        std::size_t svgs = 0, csvs = 0;
        for (const auto& e : fs::directory_iterator(dir_ / kind)) {
            svgs += e.path().extension() == ".svg";
            csvs += e.path().extension() == ".csv";
        }
        EXPECT_GE(svgs, 1u) << kind;
        EXPECT_EQ(svgs, csvs) << kind;
    }
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("fit --help"), 0);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("fit --no-such-flag 1"), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("fit --data " + path("missing.csv") + " --model " + path("m.json")), 2);
    EXPECT_NE(output().find("missing.csv"), std::string::npos);
    EXPECT_EQ(run("predict --model " + path("missing.json") + " --data " + path("missing.csv")), 2);
    std::ofstream(dir_ / "x.csv") << "a,b,class\n1,2,u\n";
    EXPECT_EQ(run("fit --data " + path("x.csv") + " --model " + path("m.json") + " --rule cubic"), 1);
    EXPECT_FALSE(fs::exists(dir_ / "m.json"));
}
