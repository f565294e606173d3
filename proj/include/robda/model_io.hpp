#ifndef ROBDA_MODEL_IO_HPP
#define ROBDA_MODEL_IO_HPP

// JSON persistence of LocationScatter and DAModel. Doubles are written in
// shortest round-trip form, so save -> load -> save is byte-identical.

#include "robda/discriminant.hpp"
#include "robda/error.hpp"
#include "robda/format.hpp"
#include "robda/location_scatter.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace robda {

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
    return arr;
}

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index p) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(p * p))
        throw DataError("model file: scatter must hold " + std::to_string(p * p) + " numbers");
    Eigen::MatrixXd m(p, p);
    for (Eigen::Index r = 0; r < p; ++r)
        for (Eigen::Index c = 0; c < p; ++c) m(r, c) = j.at(static_cast<std::size_t>(r * p + c)).get<double>();
    return m;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

} // namespace detail

inline nlohmann::json to_json(const LocationScatter& est) {
    nlohmann::json j;
    j["center"] = detail::to_std(est.center());
    j["scatter"] = detail::matrix_to_json(est.scatter());
    j["method"] = std::string(to_string(est.method()));
    j["alpha"] = est.alpha() ? nlohmann::json(*est.alpha()) : nlohmann::json(nullptr);
    j["log_det"] = est.log_det();
    if (est.h_subset()) j["h_subset"] = *est.h_subset();
    if (est.weights()) j["weights"] = *est.weights();
    return j;
}

inline LocationScatter location_scatter_from_json(const nlohmann::json& j) {
    try {
        auto center = detail::vector_from_json(j.at("center"));
        auto scatter = detail::matrix_from_json(j.at("scatter"), center.size());
        LocationScatter est(std::move(center), std::move(scatter),
                            estimation_method_from_string(j.at("method").get<std::string>()));
        if (j.contains("alpha") && !j["alpha"].is_null()) est.set_alpha(j["alpha"].get<double>());
        if (j.contains("h_subset")) est.set_h_subset(j["h_subset"].get<std::vector<std::size_t>>());
        if (j.contains("weights")) est.set_weights(j["weights"].get<std::vector<double>>());
        if (j.contains("log_det")) {
            const double stored = j["log_det"].get<double>();
            if (std::abs(stored - est.log_det()) > 1e-10 * std::max(1.0, std::abs(stored)))
                throw DataError("model file: stored log_det does not match the scatter");
        }
        return est;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
}

inline nlohmann::json to_json(const DAModel& model) {
    const auto& spec = model.spec();
    nlohmann::json j;
    j["format"] = "robda-model";
    j["version"] = kModelFormatVersion;
    j["spec"] = {
        {"rule", std::string(to_string(spec.rule))},
        {"estimation", std::string(to_string(spec.estimation))},
        {"engine", std::string(to_string(spec.engine))},
        {"outlier_cutoff_prob", spec.outlier_cutoff_prob},
        {"estimator",
         {{"alpha", spec.estimator.alpha},
          {"n_starts", spec.estimator.n_starts},
          {"n_keep", spec.estimator.n_keep},
          {"max_csteps", spec.estimator.max_csteps},
          {"convergence_tol", spec.estimator.convergence_tol},
          {"seed", spec.estimator.seed},
          {"reweight_quantile", spec.estimator.reweight_quantile}}}};
    j["p"] = model.p();
    j["class_names"] = model.class_names();
    j["priors"] = model.priors();
    j["counts"] = model.counts();
    j["unflagged_counts"] = model.unflagged_counts();
    auto classes = nlohmann::json::array();
    if (spec.rule == Rule::quadratic) {
        for (const auto& c : model.components()) classes.push_back(to_json(c));
    } else {
        for (const auto& c : model.components()) {
            nlohmann::json e;
            e["center"] = detail::to_std(c.center());
            e["method"] = std::string(to_string(c.method()));
            e["alpha"] = c.alpha() ? nlohmann::json(*c.alpha()) : nlohmann::json(nullptr);
            classes.push_back(e);
        }
        j["common_scatter"] = detail::matrix_to_json(model.component(0).scatter());
        j["common_log_det"] = model.component(0).log_det();
    }
    j["classes"] = classes;
    return j;
}

inline DAModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "robda-model") throw DataError("not a robda model file");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw DataError("unsupported model format version " + std::to_string(version));
        const auto& s = j.at("spec");
        DASpec spec;
        spec.rule = rule_from_string(s.at("rule").get<std::string>());
        spec.estimation = estimation_from_string(s.at("estimation").get<std::string>());
        spec.engine = engine_from_string(s.at("engine").get<std::string>());
        spec.outlier_cutoff_prob = s.at("outlier_cutoff_prob").get<double>();
        const auto& e = s.at("estimator");
        spec.estimator.alpha = e.at("alpha").get<double>();
        spec.estimator.n_starts = e.at("n_starts").get<std::size_t>();
        spec.estimator.n_keep = e.at("n_keep").get<std::size_t>();
        spec.estimator.max_csteps = e.at("max_csteps").get<std::size_t>();
        spec.estimator.convergence_tol = e.at("convergence_tol").get<double>();
        spec.estimator.seed = e.at("seed").get<std::uint64_t>();
        spec.estimator.reweight_quantile = e.at("reweight_quantile").get<double>();

        const auto p = static_cast<Eigen::Index>(j.at("p").get<std::size_t>());
        std::vector<LocationScatter> comps;
        if (spec.rule == Rule::quadratic) {
            for (const auto& c : j.at("classes")) comps.push_back(location_scatter_from_json(c));
        } else {
            const auto common = detail::matrix_from_json(j.at("common_scatter"), p);
            for (const auto& c : j.at("classes")) {
                LocationScatter est(detail::vector_from_json(c.at("center")), common,
                                    estimation_method_from_string(c.at("method").get<std::string>()));
                if (c.contains("alpha") && !c["alpha"].is_null()) est.set_alpha(c["alpha"].get<double>());
                comps.push_back(std::move(est));
            }
        }
        for (const auto& c : comps)
            if (static_cast<Eigen::Index>(c.dim()) != p) throw DataError("model file: class dimension disagrees with p");
        return DAModel(spec, j.at("class_names").get<std::vector<std::string>>(), std::move(comps),
                       j.at("priors").get<std::vector<double>>(), j.at("counts").get<std::vector<std::size_t>>(),
                       j.at("unflagged_counts").get<std::vector<std::size_t>>());
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model file: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("model file: ") + e.what());
    }
}

inline std::string serialize_model(const DAModel& model) { return to_json(model).dump(2) + "\n"; }

inline void save_model(const DAModel& model, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_model(model));
}

inline DAModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file '" + path.string() + "': " + e.what());
    }
    return model_from_json(j);
}

} // namespace robda

#endif // ROBDA_MODEL_IO_HPP
