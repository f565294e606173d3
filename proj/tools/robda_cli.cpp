// robda command-line tool: simulate, fit, predict, diagnose, plot.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data or I/O
// error, 3 numerical error (degenerate class, exact fit).

#include "robda/robda.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace robda;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// String-valued settings: built-in defaults < --config file < command line.
class Settings {
public:
    void add(CLI::App* cmd, const std::string& name, const std::string& help, std::string fallback = {}) {
        auto* opt = cmd->add_option("--" + name, cli_[name], help);
        if (!fallback.empty()) opt->default_str(fallback);
        options_[name] = opt;
        defaults_[name] = std::move(fallback);
    }

    void resolve() {
        values_ = defaults_;
        if (!config_.empty()) {
            for (const auto& [raw, value] : load_key_values(config_)) {
                std::string key = raw;
                std::replace(key.begin(), key.end(), '_', '-');
                if (!options_.count(key)) throw ConfigError("unknown config key '" + raw + "'");
                values_[key] = value;
            }
        }
        for (const auto& [name, opt] : options_)
            if (opt->count() > 0) values_[name] = cli_[name];
    }

    bool configured(const std::string& name) const { return !values_.at(name).empty(); }
    const std::string& get(const std::string& name) const { return values_.at(name); }
    std::string& config_path() { return config_; }

    const std::string& require(const std::string& name) const {
        const auto& v = get(name);
        if (v.empty()) throw ConfigError("--" + name + " is required");
        return v;
    }

    double number(const std::string& name) const {
        double v = 0.0;
        if (!parse_double(get(name), v)) throw ConfigError("--" + name + ": cannot parse '" + get(name) + "'");
        return v;
    }

    std::size_t count(const std::string& name) const {
        const double v = number(name);
        if (v < 0 || v != std::floor(v)) throw ConfigError("--" + name + " must be a nonnegative integer");
        return static_cast<std::size_t>(v);
    }

private:
    std::map<std::string, std::string> cli_;
    std::map<std::string, std::string> defaults_;
    std::map<std::string, std::string> values_;
    std::map<std::string, CLI::Option*> options_;
    std::string config_;
};

void add_config_option(CLI::App* cmd, Settings& s) {
    cmd->add_option("--config", s.config_path(), "key = value settings file; command-line flags take precedence");
}

void add_data_options(CLI::App* cmd, Settings& s) {
    s.add(cmd, "data", "input CSV file");
    s.add(cmd, "label-column", "name of the class label column", "class");
}

void add_model_input(CLI::App* cmd, Settings& s) { s.add(cmd, "model", "model file written by `robda fit`"); }

// ---------------------------------------------------------------------------

const std::vector<std::string> kSyntheticKeys = {
    "n1", "n2", "mean1", "mean2", "cov1", "cov2", "swap1", "swap2", "out1", "out2",
    "outlier-center1", "outlier-center2", "outlier-spread1", "outlier-spread2", "seed"};

std::string synthetic_key(std::string name) {
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

int cmd_simulate(const Settings& s) {
    SyntheticConfig cfg;
    for (const auto& name : kSyntheticKeys)
        if (s.configured(name)) apply_synthetic_setting(cfg, synthetic_key(name), s.get(name));
    const fs::path dir = s.get("out-dir");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());

    const auto pair = generate_contaminated_pair(cfg);
    std::vector<std::string> prov;
    for (auto p : pair.provenance) prov.emplace_back(to_string(p));
    save_csv(pair.clean, dir / "clean.csv");
    save_csv(pair.contaminated, dir / "contaminated.csv");
    std::ostringstream pv;
    pv << "case,provenance\n";
    for (std::size_t i = 0; i < prov.size(); ++i) pv << (i + 1) << ',' << prov[i] << '\n';
    write_file_atomic(dir / "provenance.csv", pv.str());
    std::cout << "wrote " << pair.contaminated.n() << " cases to " << dir.string() << '\n';
    return kOk;
}

DASpec spec_from(const Settings& s) {
    DASpec spec;
    spec.rule = rule_from_string(s.get("rule"));
    spec.estimation = estimation_from_string(s.get("estimation"));
    spec.engine = engine_from_string(s.get("engine"));
    spec.outlier_cutoff_prob = s.number("cutoff");
    spec.estimator.alpha = s.number("alpha");
    spec.estimator.seed = s.count("seed");
    spec.estimator.n_starts = s.count("n-starts");
    spec.estimator.n_keep = s.count("n-keep");
    spec.estimator.max_csteps = s.count("max-csteps");
    spec.estimator.convergence_tol = s.number("convergence-tol");
    spec.estimator.reweight_quantile = s.number("reweight-quantile");
    spec.validate();
    return spec;
}

int cmd_fit(const Settings& s) {
    const auto spec = spec_from(s);
    const auto data = load_csv(s.require("data"), s.get("label-column"));
    const auto model = fit(data, spec);
    save_model(model, s.require("model"));
    std::cout << spec.name() << " fitted on " << data.n() << " cases, " << data.p() << " features, "
              << data.num_classes() << " classes\n";
    return kOk;
}

// Features of `path` in the model's column order; labels when the label column exists.
struct PredictInput {
    Eigen::MatrixXd x;
    std::vector<std::string> labels;
};

PredictInput read_predict_input(const std::string& path, const std::string& label_column) {
    const auto table = read_csv_table(fs::path(path));
    std::optional<std::size_t> skip;
    if (std::find(table.header.begin(), table.header.end(), label_column) != table.header.end())
        skip = column_index(table, label_column);
    PredictInput in;
    std::vector<std::string> names;
    in.x = numeric_columns(table, names, skip);
    if (skip)
        for (const auto& row : table.rows) in.labels.push_back(row[*skip]);
    return in;
}

int cmd_predict(const Settings& s) {
    const auto model = load_model(s.require("model"));
    const auto in = read_predict_input(s.require("data"), s.get("label-column"));
    const auto preds = predict_batch(model, in.x);
    const auto& names = model.class_names();
    std::ostringstream out;
    out << "case";
    if (!in.labels.empty()) out << ",given";
    out << ",predicted";
    for (const auto& c : names) out << ",score_" << c;
    for (const auto& c : names) out << ",rd_" << c;
    out << ",overall_outlier\n";
    for (std::size_t i = 0; i < preds.size(); ++i) {
        out << (i + 1);
        if (!in.labels.empty()) out << ',' << in.labels[i];
        out << ',' << names[preds[i].predicted];
        for (Eigen::Index g = 0; g < preds[i].scores.size(); ++g) out << ',' << format_double(preds[i].scores(g));
        for (Eigen::Index g = 0; g < preds[i].distances.size(); ++g) out << ',' << format_double(preds[i].distances(g));
        out << ',' << (preds[i].overall_outlier ? 1 : 0) << '\n';
    }
    write_file_atomic(s.require("out"), out.str());
    std::size_t outliers = 0;
    for (const auto& p : preds) outliers += p.overall_outlier;
    std::cout << "predicted " << preds.size() << " cases, " << outliers << " overall outliers\n";
    return kOk;
}

// Labeled data in the model's class order.
LabeledDataset load_for_model(const DAModel& model, const Settings& s) {
    auto data = load_csv(s.require("data"), s.get("label-column"));
    for (const auto& c : data.class_names())
        if (std::find(model.class_names().begin(), model.class_names().end(), c) == model.class_names().end())
            throw DataError("class '" + c + "' is not known to the model");
    if (data.num_classes() != model.num_classes())
        throw DataError("data has " + std::to_string(data.num_classes()) + " classes, the model " +
                        std::to_string(model.num_classes()));
    data = data.with_class_order(model.class_names());
    if (data.p() != model.p())
        throw DataError("data has " + std::to_string(data.p()) + " features, the model " + std::to_string(model.p()));
    return data;
}

OutlierRule outlier_rule_from(const std::string& v) {
    if (v == "none") return OutlierRule::none;
    if (v == "distance") return OutlierRule::distance;
    if (v == "farness") return OutlierRule::farness;
    throw ConfigError("unknown outlier rule '" + v + "' (expected none, distance or farness)");
}

int cmd_diagnose(const Settings& s) {
    const auto model = load_model(s.require("model"));
    const auto data = load_for_model(model, s);
    const auto fm = fit_farness(model, data);
    const auto diags = diagnose(model, data, &fm);
    const auto rule = outlier_rule_from(s.get("outlier-rule"));
    const auto cm = confusion(diags, model.class_names(), rule);
    if (s.configured("out")) write_file_atomic(s.get("out"), diagnostics_to_csv(diags, model.class_names()));
    if (s.configured("confusion")) write_file_atomic(s.get("confusion"), cm.to_text());

    std::cout << cm.to_text();
    std::cout << "accuracy: " << format_fixed(100.0 * accuracy(cm), 1) << "%\n";
    if (cm.has_outlier_column())
        std::cout << "accuracy excluding outliers: " << format_fixed(100.0 * accuracy(cm, true), 1) << "%\n";
    const auto sil = silhouette_summary(diags, model.num_classes());
    for (std::size_t g = 0; g < model.num_classes(); ++g)
        std::cout << "average silhouette width, class " << model.class_names()[g] << ": "
                  << format_fixed(sil.per_class[g], 3) << '\n';
    std::cout << "average silhouette width, overall: " << format_fixed(sil.overall, 3) << '\n';
    return kOk;
}

std::size_t class_index(const std::vector<std::string>& names, const std::string& c) {
    const auto it = std::find(names.begin(), names.end(), c);
    if (it == names.end()) throw ConfigError("unknown class '" + c + "'");
    return static_cast<std::size_t>(it - names.begin());
}

// rd_predicted, rd_given, a feature column, or the difference of two columns "a-b".
std::vector<double> feature_values(const std::string& spec, const LabeledDataset& data,
                                   const std::vector<CaseDiagnostics>& diags) {
    std::vector<double> out;
    if (spec == "rd_predicted" || spec == "rd_given") {
        for (const auto& d : diags) out.push_back(spec == "rd_predicted" ? d.rd_predicted : d.rd_given);
        return out;
    }
    const auto& names = data.feature_names();
    auto column = [&](const std::string& c) -> std::optional<Eigen::Index> {
        const auto it = std::find(names.begin(), names.end(), c);
        if (it == names.end()) return std::nullopt;
        return static_cast<Eigen::Index>(it - names.begin());
    };
    if (const auto j = column(spec)) {
        for (Eigen::Index i = 0; i < data.features().rows(); ++i) out.push_back(data.features()(i, *j));
        return out;
    }
    const auto dash = spec.find('-');
    if (dash != std::string::npos) {
        const auto a = column(spec.substr(0, dash)), b = column(spec.substr(dash + 1));
        if (a && b) {
            for (Eigen::Index i = 0; i < data.features().rows(); ++i)
                out.push_back(data.features()(i, *a) - data.features()(i, *b));
            return out;
        }
    }
    throw ConfigError("unknown feature '" + spec + "'");
}

std::string file_stem(std::string s) {
    for (auto& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
    return s;
}

int cmd_plot(const Settings& s, const std::vector<std::string>& requested) {
    const auto model = load_model(s.require("model"));
    const auto data = load_for_model(model, s);
    const auto& names = model.class_names();
    const auto kind = s.require("kind");
    const fs::path dir = s.get("out-dir");
    const bool with_csv = s.get("csv") == "true" || s.get("csv") == "1";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());

    std::vector<std::size_t> classes;
    for (const auto& c : requested) classes.push_back(class_index(names, c));
    const bool all_classes = classes.empty();
    if (all_classes)
        for (std::size_t g = 0; g < names.size(); ++g) classes.push_back(g);

    const auto fm = fit_farness(model, data);
    const auto diags = diagnose(model, data, &fm);
    std::vector<std::pair<std::string, PlotData>> plots;
    if (kind == "scorescore") {
        plots.emplace_back("scorescore", score_score_plot(model, data));
    } else if (kind == "mosaic") {
        plots.emplace_back("mosaic", mosaic_plot(confusion(diags, names, outlier_rule_from(s.get("outlier-rule")))));
    } else if (kind == "silhouette") {
        const auto o = s.get("orientation");
        if (o != "horizontal" && o != "vertical") throw ConfigError("orientation must be horizontal or vertical");
        plots.emplace_back("silhouette",
                           silhouette_plot(diags, names, o == "vertical" ? Orientation::vertical : Orientation::horizontal));
    } else if (kind == "qrp") {
        const auto mode_text = s.get("mode");
        if (mode_text != "per_class" && mode_text != "combined") throw ConfigError("mode must be per_class or combined");
        const auto mode = mode_text == "combined" ? QrpMode::combined : QrpMode::per_class;
        const auto feature = feature_values(s.get("feature"), data, diags);
        if (all_classes) {
            plots.emplace_back("qrp", quasi_residual_plot(diags, feature, names, mode, std::nullopt, s.get("feature")));
        } else {
            for (auto g : classes)
                plots.emplace_back("qrp_class_" + file_stem(names[g]),
                                   quasi_residual_plot(diags, feature, names, mode, g, s.get("feature")));
        }
    } else if (kind == "classmap") {
        for (auto g : classes) {
            if (all_classes && !fm.available(g)) continue;
            plots.emplace_back("classmap_class_" + file_stem(names[g]), class_map(diags, fm, g, names));
        }
    } else if (kind == "qq") {
        for (auto g : classes) {
            std::vector<double> sq;
            for (const auto& d : diags)
                if (d.given == g) sq.push_back(d.rd_given * d.rd_given);
            plots.emplace_back("qq_class_" + file_stem(names[g]),
                               qq_plot(qq_data(sq, model.p(), model.spec().outlier_cutoff_prob)));
        }
    } else if (kind == "scatter") {
        plots.emplace_back("scatter", scatter_plot(model, data));
    } else {
        throw ConfigError("unknown plot kind '" + kind + "'");
    }
    for (const auto& [stem, pd] : plots) {
        save_svg(pd, dir / (stem + ".svg"));
        if (with_csv) save_plot_csv(pd, dir / (stem + ".csv"));
        for (const auto& w : pd.warnings) std::cerr << "warning: " << stem << ": " << w << '\n';
        std::cout << "wrote " << (dir / (stem + ".svg")).string() << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust discriminant analysis: classical and MCD-based LDA/QDA with diagnostics and plots", "robda"};
    app.require_subcommand(1);

    Settings sim, fitting, pred, diag, plot;
    std::vector<std::string> plot_classes;

    auto* c_sim = app.add_subcommand("simulate", "generate the two-class contamination experiment data");
    add_config_option(c_sim, sim);
    sim.add(c_sim, "out-dir", "output directory for clean.csv, contaminated.csv, provenance.csv", ".");
    sim.add(c_sim, "n1", "size of class 1");
    sim.add(c_sim, "n2", "size of class 2");
    sim.add(c_sim, "mean1", "mean of class 1, comma separated");
    sim.add(c_sim, "mean2", "mean of class 2, comma separated");
    sim.add(c_sim, "cov1", "covariance of class 1, row-major, comma separated");
    sim.add(c_sim, "cov2", "covariance of class 2, row-major, comma separated");
    sim.add(c_sim, "swap1", "class-1 cases relabeled as class 2");
    sim.add(c_sim, "swap2", "class-2 cases relabeled as class 1");
    sim.add(c_sim, "out1", "class-1 cases replaced by outliers");
    sim.add(c_sim, "out2", "class-2 cases replaced by outliers");
    sim.add(c_sim, "outlier-center1", "center of the class-1 outlier cluster");
    sim.add(c_sim, "outlier-center2", "center of the class-2 outlier cluster");
    sim.add(c_sim, "outlier-spread1", "variance of the class-1 outlier cluster (times identity)");
    sim.add(c_sim, "outlier-spread2", "variance of the class-2 outlier cluster (times identity)");
    sim.add(c_sim, "seed", "random seed");

    auto* c_fit = app.add_subcommand("fit", "fit a discriminant model and save it as JSON");
    add_config_option(c_fit, fitting);
    add_data_options(c_fit, fitting);
    fitting.add(c_fit, "model", "output model file");
    fitting.add(c_fit, "rule", "linear or quadratic", "quadratic");
    fitting.add(c_fit, "estimation", "classical or robust", "robust");
    fitting.add(c_fit, "alpha", "MCD subset fraction in [0.5, 1)", "0.75");
    fitting.add(c_fit, "engine", "fastmcd or exact (small classes only)", "fastmcd");
    fitting.add(c_fit, "seed", "FastMCD random seed", "0");
    fitting.add(c_fit, "n-starts", "FastMCD random starts", "500");
    fitting.add(c_fit, "n-keep", "FastMCD candidates iterated to convergence", "10");
    fitting.add(c_fit, "max-csteps", "maximum C-steps per candidate", "100");
    fitting.add(c_fit, "convergence-tol", "log-determinant convergence tolerance", "1e-12");
    fitting.add(c_fit, "reweight-quantile", "chi-squared quantile of the reweighting step", "0.975");
    fitting.add(c_fit, "cutoff", "chi-squared probability of the outlier cutoff", "0.99");

    auto* c_pred = app.add_subcommand("predict", "classify the cases of a CSV file");
    add_config_option(c_pred, pred);
    add_model_input(c_pred, pred);
    add_data_options(c_pred, pred);
    pred.add(c_pred, "out", "output predictions CSV");

    auto* c_diag = app.add_subcommand("diagnose", "per-case diagnostics and confusion matrix of labeled data");
    add_config_option(c_diag, diag);
    add_model_input(c_diag, diag);
    add_data_options(c_diag, diag);
    diag.add(c_diag, "out", "output diagnostics CSV");
    diag.add(c_diag, "confusion", "output confusion matrix text file");
    diag.add(c_diag, "outlier-rule", "none, distance or farness", "distance");

    auto* c_plot = app.add_subcommand("plot", "write SVG plots");
    add_config_option(c_plot, plot);
    add_model_input(c_plot, plot);
    add_data_options(c_plot, plot);
    plot.add(c_plot, "kind", "scorescore, mosaic, silhouette, qrp, classmap, qq or scatter");
    plot.add(c_plot, "out-dir", "output directory", ".");
    c_plot->add_option("--class", plot_classes, "class to plot (repeatable); default all classes");
    plot.add(c_plot, "feature", "QRP feature: rd_predicted, rd_given, a column name or colA-colB", "rd_predicted");
    plot.add(c_plot, "mode", "QRP mode: per_class or combined", "per_class");
    plot.add(c_plot, "orientation", "silhouette bars: horizontal or vertical", "horizontal");
    plot.add(c_plot, "outlier-rule", "mosaic outlier column: none, distance or farness", "distance");
    plot.add(c_plot, "csv", "also write plot-data CSV (true or false)", "false");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*c_sim) {
            sim.resolve();
            return cmd_simulate(sim);
        }
        if (*c_fit) {
            fitting.resolve();
            return cmd_fit(fitting);
        }
        if (*c_pred) {
            pred.resolve();
            return cmd_predict(pred);
        }
        if (*c_diag) {
            diag.resolve();
            return cmd_diagnose(diag);
        }
        if (*c_plot) {
            plot.resolve();
            return cmd_plot(plot, plot_classes);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PlotError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DegenerateError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
