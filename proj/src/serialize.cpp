#include <cstdio>
#include <fstream>
#include <sstream>

#include "fairshift/serialize.hpp"

namespace fairshift {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

const Json& require(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(std::string("missing required field '") + key + "'");
    }
    return *it;
}

}  // namespace

Json to_json(const Schema& schema) {
    Json cols = Json::array();
    for (const auto& c : schema.columns) {
        cols.push_back({{"name", c.name}, {"kind", c.kind == ColumnKind::numeric ? "numeric" : "categorical"}});
    }
    return {{"columns", cols},
            {"protected_column", schema.protected_column},
            {"label_column", schema.label_column},
            {"favorable_label_value", schema.favorable_label_value},
            {"majority_group_value", schema.majority_group_value}};
}

Schema schema_from_json(const Json& j) {
    Schema s;
    for (const auto& c : require(j, "columns")) {
        const std::string kind = get_or<std::string>(c, "kind", "categorical");
        if (kind != "numeric" && kind != "categorical") {
            throw ValidationError("column kind must be 'numeric' or 'categorical', got '" + kind + "'");
        }
        s.columns.push_back({require(c, "name").get<std::string>(),
                             kind == "numeric" ? ColumnKind::numeric : ColumnKind::categorical});
    }
    s.protected_column = require(j, "protected_column").get<std::string>();
    s.label_column = require(j, "label_column").get<std::string>();
    s.favorable_label_value = require(j, "favorable_label_value").get<std::string>();
    s.majority_group_value = require(j, "majority_group_value").get<std::string>();
    return s;
}

Json to_json(const BiasSpec& spec) {
    return {{"selection", spec.selection},
            {"high_rate", spec.high_rate},
            {"low_rate", spec.low_rate},
            {"head_count", spec.head_count},
            {"seed", spec.seed}};
}

BiasSpec bias_spec_from_json(const Json& j) {
    BiasSpec b;
    b.selection = require(j, "selection").get<std::string>();
    b.high_rate = require(j, "high_rate").get<double>();
    b.low_rate = require(j, "low_rate").get<double>();
    b.head_count = require(j, "head_count").get<std::size_t>();
    b.seed = get_or<std::uint64_t>(j, "seed", 0);
    return b;
}

Json to_json(const FeatureBlock& block) {
    Json j = {{"column", block.column},
              {"kind", block.kind == ColumnKind::numeric ? "numeric" : "categorical"},
              {"offset", block.offset},
              {"width", block.width}};
    if (block.kind == ColumnKind::numeric) {
        j["min"] = block.min;
        j["max"] = block.max;
    } else {
        j["categories"] = block.categories;
    }
    return j;
}

FeatureBlock feature_block_from_json(const Json& j) {
    FeatureBlock b;
    b.column = require(j, "column").get<std::string>();
    b.kind = require(j, "kind").get<std::string>() == "numeric" ? ColumnKind::numeric : ColumnKind::categorical;
    b.offset = require(j, "offset").get<std::size_t>();
    b.width = require(j, "width").get<std::size_t>();
    b.min = get_or<double>(j, "min", 0.0);
    b.max = get_or<double>(j, "max", 0.0);
    b.categories = get_or<std::vector<std::string>>(j, "categories", {});
    return b;
}

Json to_json(const SelectionEstimate& est) {
    return {{"epsilon", est.epsilon}, {"m_prime", est.m_prime},   {"p0", est.p0},
            {"pool_size", est.pool_size}, {"target_size", est.target_size}, {"p_floor", est.p_floor}, {"delta", est.delta},
            {"unseen_in_pool", est.unseen_in_pool}, {"p_hat", est.p_hat}};
}

SelectionEstimate selection_estimate_from_json(const Json& j) {
    SelectionEstimate e;
    e.epsilon = require(j, "epsilon").get<double>();
    e.m_prime = require(j, "m_prime").get<std::size_t>();
    e.p0 = require(j, "p0").get<double>();
    e.pool_size = require(j, "pool_size").get<std::size_t>();
    e.target_size = get_or<std::size_t>(j, "target_size", 0);
    e.p_floor = require(j, "p_floor").get<double>();
    e.delta = get_or<double>(j, "delta", 0.0);
    e.unseen_in_pool = get_or<std::size_t>(j, "unseen_in_pool", 0);
    e.p_hat = require(j, "p_hat").get<std::vector<double>>();
    return e;
}

Json to_json(const ClusterModel& model) {
    Json centroids = Json::array();
    for (std::size_t c = 0; c < model.centroids.rows(); ++c) {
        const auto row = model.centroids.row(c);
        centroids.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"k", model.k},
            {"seed", model.seed},
            {"iterations", model.iterations},
            {"sse_history", model.sse_history},
            {"centroids", centroids},
            {"assignment", model.assignment}};
}

ClusterModel cluster_model_from_json(const Json& j) {
    ClusterModel m;
    m.k = require(j, "k").get<std::size_t>();
    m.seed = require(j, "seed").get<std::uint64_t>();
    m.iterations = get_or<std::size_t>(j, "iterations", 0);
    m.sse_history = get_or<std::vector<double>>(j, "sse_history", {});
    m.assignment = require(j, "assignment").get<std::vector<std::size_t>>();
    const auto& rows = require(j, "centroids");
    for (const auto& r : rows) {
        m.centroids.append_row(r.get<std::vector<double>>());
    }
    return m;
}

Json to_json(const ModelParams& params) {
    return {{"w", params.w}, {"feature_names", params.feature_names}};
}

ModelParams model_params_from_json(const Json& j) {
    ModelParams p;
    p.w = require(j, "w").get<std::vector<double>>();
    p.feature_names = get_or<std::vector<std::string>>(j, "feature_names", {});
    p.validate();
    return p;
}

Json to_json(const TrainConfig& cfg) {
    return {{"learning_rate", cfg.learning_rate},
            {"inner_gd_steps", cfg.inner_gd_steps},
            {"outer_rounds", cfg.outer_rounds},
            {"tolerance", cfg.tolerance},
            {"seed", cfg.seed},
            {"penalty",
             {{"beta", cfg.penalty.beta},
              {"sigma", cfg.penalty.sigma},
              {"penalty_form", std::string(penalty_form_name(cfg.penalty.form))}}}};
}

TrainConfig train_config_from_json(const Json& j, const TrainConfig& defaults) {
    TrainConfig c = defaults;
    c.learning_rate = get_or<double>(j, "learning_rate", c.learning_rate);
    c.inner_gd_steps = get_or<std::size_t>(j, "inner_gd_steps", c.inner_gd_steps);
    c.outer_rounds = get_or<std::size_t>(j, "outer_rounds", c.outer_rounds);
    c.tolerance = get_or<double>(j, "tolerance", c.tolerance);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    if (const auto it = j.find("penalty"); it != j.end()) {
        c.penalty.beta = get_or<double>(*it, "beta", c.penalty.beta);
        c.penalty.sigma = get_or<double>(*it, "sigma", c.penalty.sigma);
        if (it->contains("penalty_form")) {
            c.penalty.form = parse_penalty_form((*it)["penalty_form"].get<std::string>());
        }
    }
    c.validate();
    return c;
}

Json to_json(const TrainResult& result) {
    Json history = Json::array();
    for (const auto& r : result.history) {
        history.push_back({{"round", r.round},
                           {"objective_after_model_step", r.objective_after_model_step},
                           {"objective", r.objective},
                           {"covariance", r.covariance},
                           {"lp_value", r.lp_value},
                           {"lp_status", std::string(lp_status_name(r.lp_status))},
                           {"step_halvings", r.step_halvings}});
    }
    std::vector<double> weights(result.weights.values().begin(), result.weights.values().end());
    return {{"method", result.method},
            {"converged", result.converged},
            {"initial_objective", result.initial_objective},
            {"params", to_json(result.params)},
            {"weights", weights},
            {"history", history}};
}

TrainResult train_result_from_json(const Json& j) {
    TrainResult r;
    r.method = get_or<std::string>(j, "method", "");
    r.converged = get_or<bool>(j, "converged", false);
    r.initial_objective = get_or<double>(j, "initial_objective", 0.0);
    r.params = model_params_from_json(require(j, "params"));
    r.weights = WeightVector(require(j, "weights").get<std::vector<double>>());
    for (const auto& h : require(j, "history")) {
        RoundRecord rec;
        rec.round = h.at("round").get<std::size_t>();
        rec.objective_after_model_step = h.at("objective_after_model_step").get<double>();
        rec.objective = h.at("objective").get<double>();
        rec.covariance = h.at("covariance").get<double>();
        rec.lp_value = h.at("lp_value").get<double>();
        rec.lp_status = h.at("lp_status").get<std::string>() == "optimal" ? LpStatus::optimal
                                                                           : LpStatus::infeasible_relaxed;
        rec.step_halvings = h.at("step_halvings").get<std::size_t>();
        r.history.push_back(rec);
    }
    return r;
}

Json to_json(const MetricsReport& report) {
    Json j = {{"method", report.method},
              {"train_accuracy", report.train_accuracy},
              {"test_accuracy", report.test_accuracy},
              {"train_rd", report.train_rd},
              {"test_rd", report.test_rd}};
    j["weighted_train_rd"] = report.weighted_train_rd ? Json(*report.weighted_train_rd) : Json(nullptr);
    j["fairness_threshold"] = report.fairness_threshold;
    j["train_fair"] = report.train_fair;
    j["test_fair"] = report.test_fair;
    j["hyperparameters"] = report.hyperparameters;
    j["repetitions"] = report.repetitions;
    j["aggregation"] = report.aggregation;
    return j;
}

MetricsReport metrics_report_from_json(const Json& j) {
    MetricsReport r;
    r.method = require(j, "method").get<std::string>();
    r.train_accuracy = require(j, "train_accuracy").get<double>();
    r.test_accuracy = require(j, "test_accuracy").get<double>();
    r.train_rd = require(j, "train_rd").get<double>();
    r.test_rd = require(j, "test_rd").get<double>();
    if (const auto it = j.find("weighted_train_rd"); it != j.end() && !it->is_null()) {
        r.weighted_train_rd = it->get<double>();
    }
    r.fairness_threshold = get_or<double>(j, "fairness_threshold", kDefaultFairnessThreshold);
    r.train_fair = get_or<bool>(j, "train_fair", r.train_rd <= r.fairness_threshold);
    r.test_fair = get_or<bool>(j, "test_fair", r.test_rd <= r.fairness_threshold);
    r.hyperparameters = get_or<std::map<std::string, std::string>>(j, "hyperparameters", {});
    r.repetitions = get_or<std::size_t>(j, "repetitions", 1);
    r.aggregation = get_or<std::string>(j, "aggregation", "mean");
    return r;
}

std::string history_csv(const TrainResult& result) {
    std::ostringstream out;
    out << "round,objective_after_model_step,objective,covariance,lp_value,lp_status,step_halvings\n";
    char buf[256];
    for (const auto& r : result.history) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%s,%zu\n", r.round, r.objective_after_model_step,
                      r.objective, r.covariance, r.lp_value, std::string(lp_status_name(r.lp_status)).c_str(),
                      r.step_halvings);
        out << buf;
    }
    return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": JSON parse error at byte " + std::to_string(e.byte) + ": " +
                              e.what());
    }
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace fairshift
