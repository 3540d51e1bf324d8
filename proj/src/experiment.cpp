#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "fairshift/experiment.hpp"
#include "fairshift/selection.hpp"

namespace fairshift {

namespace fs = std::filesystem;

namespace {

struct MethodInfo {
    Method method;
    const char* name;
    const char* label;
};

constexpr MethodInfo kMethods[] = {
    {Method::lr, "lr", "LR"},
    {Method::fair_lr, "fair_lr", "FairLR"},
    {Method::rflearn1_minus, "rflearn1_minus", "RFLearn1-"},
    {Method::rflearn1, "rflearn1", "RFLearn1"},
    {Method::rflearn2_minus, "rflearn2_minus", "RFLearn2-"},
    {Method::rflearn2, "rflearn2", "RFLearn2"},
};

bool uses_delta(Method m) { return m == Method::rflearn1 || m == Method::rflearn1_minus; }
bool uses_clusters(Method m) { return m == Method::rflearn2 || m == Method::rflearn2_minus; }

std::string number_text(double v) { return Json(v).dump(); }

void reject_unknown_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw ValidationError(where + " must be a JSON object");
    }
    for (const auto& item : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) {
            throw ValidationError("unknown config key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
        }
    }
}

std::string file_digest(const fs::path& path) {
    if (!fs::exists(path)) {
        throw ValidationError("dataset file '" + path.string() + "' does not exist");
    }
    return hex64(fnv1a64(read_file(path)));
}

std::string join_digest(const std::string& a, const Json& b) { return hex64(fnv1a64(a + "\n" + b.dump())); }

Json metrics_row(const MetricsReport& r) {
    Json j = to_json(r);
    j.erase("hyperparameters");
    return j;
}

std::string metrics_reps_csv(const std::vector<RepetitionOutcome>& outcomes) {
    std::ostringstream out;
    out << "rep,status,train_accuracy,test_accuracy,train_rd,test_rd,weighted_train_rd\n";
    char buf[256];
    for (const auto& o : outcomes) {
        if (!o.metrics) {
            out << o.rep << ",failed,,,,,\n";
            continue;
        }
        const auto& m = *o.metrics;
        std::snprintf(buf, sizeof buf, "%zu,ok,%.17g,%.17g,%.17g,%.17g,", o.rep, m.train_accuracy, m.test_accuracy,
                      m.train_rd, m.test_rd);
        out << buf;
        if (m.weighted_train_rd) {
            std::snprintf(buf, sizeof buf, "%.17g", *m.weighted_train_rd);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

void save_encoded_atomic(const EncodedDataset& data, const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    save_encoded_csv(data, tmp);
    fs::rename(tmp, path);
}

std::map<std::string, std::string> hyperparameter_strings(const ExperimentConfig& cfg) {
    const auto& hp = cfg.hyperparameters;
    std::map<std::string, std::string> out;
    if (cfg.method != Method::lr) {
        out["beta"] = number_text(hp.beta);
        out["sigma"] = number_text(hp.sigma);
        out["penalty_form"] = std::string(penalty_form_name(hp.penalty_form));
    }
    if (uses_delta(cfg.method)) {
        out["delta"] = number_text(*hp.delta);
        out["numeric_bins"] = std::to_string(hp.numeric_bins);
    }
    if (uses_clusters(cfg.method)) {
        out["rho"] = number_text(*hp.rho);
        out["k_clusters"] = std::to_string(*hp.k_clusters);
    }
    return out;
}

Json bounds_summary(const RatioBounds& b) {
    const auto [lo_min, lo_max] = std::minmax_element(b.lo.begin(), b.lo.end());
    const auto [hi_min, hi_max] = std::minmax_element(b.hi.begin(), b.hi.end());
    return {{"lo_min", *lo_min}, {"lo_max", *lo_max}, {"hi_min", *hi_min}, {"hi_max", *hi_max},
            {"variables", b.variable_count()}};
}

}  // namespace

std::string_view method_name(Method method) {
    for (const auto& m : kMethods) {
        if (m.method == method) return m.name;
    }
    return "unknown";
}

std::string_view method_label(Method method) {
    for (const auto& m : kMethods) {
        if (m.method == method) return m.label;
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (const auto& m : kMethods) {
        if (name == m.name) return m.method;
    }
    throw ValidationError("unknown method '" + std::string(name) +
                          "' (expected lr, fair_lr, rflearn1_minus, rflearn1, rflearn2_minus or rflearn2)");
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> order = [] {
        std::vector<Method> v;
        for (const auto& m : kMethods) v.push_back(m.method);
        return v;
    }();
    return order;
}

void ExperimentConfig::validate() const {
    if (dataset_path.empty()) {
        throw ValidationError("dataset.path is required");
    }
    schema.validate();
    bias.validate();
    training.validate();
    if (repetitions == 0) {
        throw ValidationError("repetitions must be at least 1");
    }
    const auto& hp = hyperparameters;
    PenaltyConfig{hp.beta, hp.sigma, hp.penalty_form}.validate();
    if (hp.numeric_bins == 0) {
        throw ValidationError("hyperparameters.numeric_bins must be at least 1");
    }
    if (!(hp.fairness_threshold >= 0.0 && hp.fairness_threshold <= 1.0)) {
        throw ValidationError("hyperparameters.fairness_threshold must lie in [0, 1]");
    }
    if (uses_delta(method)) {
        if (!hp.delta) {
            throw ValidationError(std::string(method_name(method)) + " requires hyperparameters.delta");
        }
        if (!(*hp.delta > 0.0 && *hp.delta < 1.0)) {
            throw ValidationError("hyperparameters.delta must lie in (0, 1)");
        }
    }
    if (uses_clusters(method)) {
        if (!hp.rho) {
            throw ValidationError(std::string(method_name(method)) + " requires hyperparameters.rho");
        }
        if (!hp.k_clusters) {
            throw ValidationError(std::string(method_name(method)) + " requires hyperparameters.k_clusters");
        }
        if (!(*hp.rho >= 0.0 && *hp.rho < 1.0)) {
            throw ValidationError("hyperparameters.rho must lie in [0, 1)");
        }
        if (*hp.k_clusters == 0) {
            throw ValidationError("hyperparameters.k_clusters must be at least 1");
        }
        if (hp.kmeans_max_iter == 0) {
            throw ValidationError("hyperparameters.kmeans_max_iter must be at least 1");
        }
    }
}

Json load_config_json(const fs::path& path) { return read_json_file(path); }

void apply_override(Json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error&) {
        value = text;
    }

    Json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) {
            throw ValidationError("override key '" + key + "' has an empty component");
        }
        if (!node->is_object()) {
            throw ValidationError("override key '" + key + "' descends into a non-object");
        }
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) {
            *node = Json::object();
        }
        start = dot + 1;
    }
}

ExperimentConfig config_from_json(const Json& j, const fs::path& base_dir) {
    try {
        reject_unknown_keys(j, "", {"dataset", "bias", "method", "hyperparameters", "training", "repetitions",
                                    "output_dir"});
        ExperimentConfig c;
        const Json& ds = j.at("dataset");
        reject_unknown_keys(ds, "dataset", {"path", "schema"});
        c.dataset_path = ds.at("path").get<std::string>();
        if (c.dataset_path.is_relative() && !base_dir.empty()) {
            c.dataset_path = base_dir / c.dataset_path;
        }
        c.schema = schema_from_json(ds.at("schema"));
        c.bias = bias_spec_from_json(j.at("bias"));
        c.method = parse_method(j.at("method").get<std::string>());

        if (const auto it = j.find("hyperparameters"); it != j.end()) {
            const Json& h = *it;
            reject_unknown_keys(h, "hyperparameters",
                                {"beta", "sigma", "delta", "rho", "k_clusters", "numeric_bins", "penalty_form",
                                 "kmeans_max_iter", "fairness_threshold"});
            auto& hp = c.hyperparameters;
            hp.beta = h.value("beta", hp.beta);
            hp.sigma = h.value("sigma", hp.sigma);
            if (h.contains("delta") && !h["delta"].is_null()) hp.delta = h["delta"].get<double>();
            if (h.contains("rho") && !h["rho"].is_null()) hp.rho = h["rho"].get<double>();
            if (h.contains("k_clusters") && !h["k_clusters"].is_null()) {
                hp.k_clusters = h["k_clusters"].get<std::size_t>();
            }
            hp.numeric_bins = h.value("numeric_bins", hp.numeric_bins);
            if (h.contains("penalty_form")) hp.penalty_form = parse_penalty_form(h["penalty_form"].get<std::string>());
            hp.kmeans_max_iter = h.value("kmeans_max_iter", hp.kmeans_max_iter);
            hp.fairness_threshold = h.value("fairness_threshold", hp.fairness_threshold);
        }
        if (const auto it = j.find("training"); it != j.end()) {
            reject_unknown_keys(*it, "training",
                                {"learning_rate", "inner_gd_steps", "outer_rounds", "tolerance", "seed"});
            c.training = train_config_from_json(*it);
        }
        c.training.penalty = {c.hyperparameters.beta, c.hyperparameters.sigma, c.hyperparameters.penalty_form};
        c.repetitions = j.value("repetitions", c.repetitions);
        if (const auto it = j.find("output_dir"); it != j.end()) {
            c.output_dir = it->get<std::string>();
        }
        c.validate();
        return c;
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
    }
}

Json config_to_json(const ExperimentConfig& cfg) {
    const auto& hp = cfg.hyperparameters;
    Json h = {{"beta", hp.beta},
              {"sigma", hp.sigma},
              {"delta", hp.delta ? Json(*hp.delta) : Json(nullptr)},
              {"rho", hp.rho ? Json(*hp.rho) : Json(nullptr)},
              {"k_clusters", hp.k_clusters ? Json(*hp.k_clusters) : Json(nullptr)},
              {"numeric_bins", hp.numeric_bins},
              {"penalty_form", std::string(penalty_form_name(hp.penalty_form))},
              {"kmeans_max_iter", hp.kmeans_max_iter},
              {"fairness_threshold", hp.fairness_threshold}};
    Json t = to_json(cfg.training);
    t.erase("penalty");
    return {{"dataset", {{"path", cfg.dataset_path.generic_string()}, {"schema", to_json(cfg.schema)}}},
            {"bias", to_json(cfg.bias)},
            {"method", std::string(method_name(cfg.method))},
            {"hyperparameters", h},
            {"training", t},
            {"repetitions", cfg.repetitions}};
}

SplitResult PreparedData::split(std::size_t rep) const {
    if (rep >= train_rows.size()) {
        throw ValidationError("prepared data has " + std::to_string(train_rows.size()) +
                              " repetitions, requested index " + std::to_string(rep));
    }
    SplitResult s;
    s.train_rows = train_rows[rep];
    s.test_rows = test_rows;
    s.train = data.subset(s.train_rows);
    s.test = data.subset(s.test_rows);
    return s;
}

std::string prepare_key(const ExperimentConfig& cfg) {
    const Json key = {{"dataset_digest", file_digest(cfg.dataset_path)},
                      {"schema", to_json(cfg.schema)},
                      {"bias", to_json(cfg.bias)},
                      {"repetitions", cfg.repetitions}};
    return hex64(fnv1a64(key.dump()));
}

PreparedData load_prepared(const ExperimentConfig& cfg) {
    const fs::path dir = cfg.output_dir / ("prepared-" + prepare_key(cfg));
    for (const char* name : {"manifest.json", "splits.json", "encoded.csv"}) {
        if (!fs::exists(dir / name)) {
            throw ValidationError("prepared artifact '" + (dir / name).string() + "' is missing; run prepare first");
        }
    }
    PreparedData p;
    p.dir = dir;
    p.manifest = read_json_file(dir / "manifest.json");
    std::vector<FeatureBlock> blocks;
    try {
        for (const auto& b : p.manifest.at("blocks")) blocks.push_back(feature_block_from_json(b));
        const Json splits = read_json_file(dir / "splits.json");
        p.test_rows = splits.at("test_rows").get<std::vector<std::size_t>>();
        for (const auto& r : splits.at("train_rows")) p.train_rows.push_back(r.get<std::vector<std::size_t>>());
    } catch (const Json::exception& e) {
        throw ValidationError("corrupt prepared artifacts in '" + dir.string() + "': " + e.what());
    }
    p.data = load_encoded_csv(dir / "encoded.csv", std::move(blocks));
    p.data.validate();
    if (p.train_rows.size() != cfg.repetitions) {
        throw ValidationError("'" + (dir / "splits.json").string() + "' holds " + std::to_string(p.train_rows.size()) +
                              " repetitions, config asks for " + std::to_string(cfg.repetitions));
    }
    return p;
}

PreparedData prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::string key = prepare_key(cfg);
    const fs::path dir = cfg.output_dir / ("prepared-" + key);
    if (fs::exists(dir / "manifest.json")) {
        return load_prepared(cfg);
    }

    const RawTable raw = load_csv(cfg.dataset_path, cfg.schema);
    PreparedData p;
    p.dir = dir;
    p.data = encode(raw, cfg.schema);

    Json train_sizes = Json::array();
    Json train_rows = Json::array();
    Json seeds = Json::array();
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        BiasSpec b = cfg.bias;
        b.seed = cfg.bias.seed + rep;
        SplitResult s = biased_split(p.data, b);
        if (rep == 0) {
            p.test_rows = s.test_rows;
        }
        train_sizes.push_back(s.train_rows.size());
        train_rows.push_back(s.train_rows);
        seeds.push_back(b.seed);
        p.train_rows.push_back(std::move(s.train_rows));
    }

    Json blocks = Json::array();
    for (const auto& b : p.data.blocks) blocks.push_back(to_json(b));
    p.manifest = {{"key", key},
                  {"dataset_digest", file_digest(cfg.dataset_path)},
                  {"schema", to_json(cfg.schema)},
                  {"bias", to_json(cfg.bias)},
                  {"repetitions", cfg.repetitions},
                  {"split_seeds", seeds},
                  {"total_size", p.data.size()},
                  {"test_size", p.test_rows.size()},
                  {"train_sizes", train_sizes},
                  {"dimension", p.data.dim()},
                  {"feature_names", p.data.feature_names},
                  {"blocks", blocks}};

    fs::create_directories(dir);
    save_encoded_atomic(p.data, dir / "encoded.csv");
    write_file_atomic(dir / "splits.json", Json{{"test_rows", p.test_rows}, {"train_rows", train_rows}}.dump() + "\n");
    // The manifest goes last; its presence marks a complete cache.
    write_file_atomic(dir / "manifest.json", p.manifest.dump(2) + "\n");
    return p;
}

TrainConfig repetition_train_config(const ExperimentConfig& cfg, std::size_t rep) {
    TrainConfig t = cfg.training;
    t.seed = cfg.training.seed + rep;
    t.penalty = {cfg.hyperparameters.beta, cfg.hyperparameters.sigma, cfg.hyperparameters.penalty_form};
    return t;
}

RepetitionOutcome run_repetition(const ExperimentConfig& cfg, const SplitResult& split, std::size_t rep) {
    RepetitionOutcome out;
    out.rep = rep;
    const TrainConfig tc = repetition_train_config(cfg, rep);
    const auto& hp = cfg.hyperparameters;
    out.diagnostics = Json::object();
    out.diagnostics["split_seed"] = cfg.bias.seed + rep;
    out.diagnostics["train_seed"] = tc.seed;
    out.diagnostics["train_size"] = split.train.size();
    out.diagnostics["test_size"] = split.test.size();
    try {
        TrainResult r;
        switch (cfg.method) {
            case Method::lr:
                r = fit_baseline(split.train, BaselineMethod::lr, nullptr, tc);
                break;
            case Method::fair_lr:
                r = fit_baseline(split.train, BaselineMethod::fair_lr, nullptr, tc);
                break;
            case Method::rflearn1_minus:
            case Method::rflearn1: {
                const EncodedDataset pool = concatenate(split.test, split.train);
                const auto disc = DiscretizationConfig::for_dataset(split.train, hp.numeric_bins);
                const SelectionEstimate est = estimate_density_ratio(split.train, pool, split.test.size(), disc, *hp.delta);
                const RatioBounds bounds = ratio_bounds_rflearn1(est);
                Json e = to_json(est);
                e.erase("p_hat");
                out.diagnostics["selection"] = e;
                out.diagnostics["bounds"] = bounds_summary(bounds);
                r = cfg.method == Method::rflearn1
                        ? fit(split.train, bounds, tc)
                        : fit_baseline(split.train, BaselineMethod::minus_variant, &bounds, tc);
                break;
            }
            case Method::rflearn2_minus:
            case Method::rflearn2: {
                const ClusterModel clusters = kmeans(split.train, *hp.k_clusters, tc.seed, hp.kmeans_max_iter);
                const RatioBounds bounds = ratio_bounds_rflearn2(clusters, *hp.rho);
                out.diagnostics["clusters"] = {{"k", clusters.k},
                                               {"seed", clusters.seed},
                                               {"iterations", clusters.iterations},
                                               {"final_sse", clusters.sse_history.empty()
                                                                 ? Json(nullptr)
                                                                 : Json(clusters.sse_history.back())}};
                out.diagnostics["bounds"] = bounds_summary(bounds);
                r = cfg.method == Method::rflearn2
                        ? fit(split.train, bounds, tc)
                        : fit_baseline(split.train, BaselineMethod::minus_variant, &bounds, tc);
                break;
            }
        }
        r.method = std::string(method_name(cfg.method));
        MetricsReport m = evaluate(r, split.train, split.test, hp.fairness_threshold);
        m.hyperparameters = hyperparameter_strings(cfg);
        out.result = std::move(r);
        out.metrics = std::move(m);
    } catch (const NumericError& e) {
        out.error = e.what();
    }
    return out;
}

fs::path results_dir(const ExperimentConfig& cfg) {
    Json run = config_to_json(cfg);
    run.erase("dataset");
    run.erase("bias");
    const std::string key = join_digest(prepare_key(cfg), run);
    return cfg.output_dir / "results" / (std::string(method_name(cfg.method)) + "-" + key);
}

TrainSummary train(const ExperimentConfig& cfg) {
    const PreparedData prepared = prepare(cfg);
    TrainSummary summary;
    summary.dir = results_dir(cfg);
    fs::create_directories(summary.dir);

    std::vector<RepetitionOutcome> outcomes;
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        RepetitionOutcome o = run_repetition(cfg, prepared.split(rep), rep);
        Json doc = {{"rep", rep}, {"method", std::string(method_name(cfg.method))}, {"diagnostics", o.diagnostics}};
        if (o.result) {
            doc["status"] = "ok";
            doc["metrics"] = metrics_row(*o.metrics);
            doc["train_result"] = to_json(*o.result);
            write_file_atomic(summary.dir / ("history_rep" + std::to_string(rep) + ".csv"), history_csv(*o.result));
            summary.per_rep.push_back(*o.metrics);
        } else {
            doc["status"] = "failed";
            doc["error"] = o.error;
            summary.failures.emplace_back(rep, o.error);
            warn("repetition " + std::to_string(rep) + " failed: " + o.error);
        }
        write_file_atomic(summary.dir / ("result_rep" + std::to_string(rep) + ".json"), doc.dump(2) + "\n");
        o.result.reset();
        outcomes.push_back(std::move(o));
    }

    Json failed = Json::array();
    for (const auto& [rep, error] : summary.failures) failed.push_back({{"rep", rep}, {"error", error}});
    Json reps = Json::array();
    for (const auto& o : outcomes) reps.push_back(o.metrics ? metrics_row(*o.metrics) : Json(nullptr));
    if (!summary.per_rep.empty()) {
        summary.mean = average(summary.per_rep);
    }
    const Json metrics = {{"method", std::string(method_name(cfg.method))},
                          {"config", config_to_json(cfg)},
                          {"prepared", prepared.dir.filename().string()},
                          {"mean", summary.mean ? to_json(*summary.mean) : Json(nullptr)},
                          {"repetitions", reps},
                          {"failed_repetitions", failed}};
    write_file_atomic(summary.dir / "metrics_reps.csv", metrics_reps_csv(outcomes));
    write_file_atomic(summary.dir / "metrics.json", metrics.dump(2) + "\n");
    if (!summary.mean) {
        throw NumericError("all " + std::to_string(cfg.repetitions) + " repetitions failed; see " +
                           (summary.dir / "metrics.json").string());
    }
    return summary;
}

TrainSummary evaluate(const ExperimentConfig& cfg) {
    const PreparedData prepared = load_prepared(cfg);
    TrainSummary summary;
    summary.dir = results_dir(cfg);
    Json reps = Json::array();
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const fs::path path = summary.dir / ("result_rep" + std::to_string(rep) + ".json");
        if (!fs::exists(path)) {
            throw ValidationError("result artifact '" + path.string() + "' is missing; run train first");
        }
        const Json doc = read_json_file(path);
        if (doc.value("status", "") != "ok") {
            summary.failures.emplace_back(rep, doc.value("error", "failed"));
            reps.push_back(nullptr);
            continue;
        }
        TrainResult r;
        try {
            r = train_result_from_json(doc.at("train_result"));
        } catch (const Json::exception& e) {
            throw ValidationError("corrupt result artifact '" + path.string() + "': " + e.what());
        }
        const SplitResult split = prepared.split(rep);
        MetricsReport m = fairshift::evaluate(r, split.train, split.test, cfg.hyperparameters.fairness_threshold);
        m.hyperparameters = hyperparameter_strings(cfg);
        reps.push_back(metrics_row(m));
        summary.per_rep.push_back(std::move(m));
    }
    if (summary.per_rep.empty()) {
        throw NumericError("no successful repetitions to evaluate in '" + summary.dir.string() + "'");
    }
    summary.mean = average(summary.per_rep);
    const Json doc = {{"method", std::string(method_name(cfg.method))},
                      {"mean", to_json(*summary.mean)},
                      {"repetitions", reps}};
    write_file_atomic(summary.dir / "evaluation.json", doc.dump(2) + "\n");
    return summary;
}

SweepSummary sweep(const ExperimentConfig& cfg, const std::string& parameter, const std::vector<double>& values) {
    if (values.empty()) {
        throw ValidationError("sweep needs at least one value");
    }
    if (parameter == "delta") {
        if (!uses_delta(cfg.method)) {
            throw ValidationError("delta sweeps apply to rflearn1 and rflearn1_minus, not " +
                                  std::string(method_name(cfg.method)));
        }
    } else if (parameter == "rho") {
        if (!uses_clusters(cfg.method)) {
            throw ValidationError("rho sweeps apply to rflearn2 and rflearn2_minus, not " +
                                  std::string(method_name(cfg.method)));
        }
    } else {
        throw ValidationError("sweep parameter must be 'delta' or 'rho', got '" + parameter + "'");
    }

    std::vector<ExperimentConfig> points;
    for (double v : values) {
        ExperimentConfig c = cfg;
        (parameter == "delta" ? c.hyperparameters.delta : c.hyperparameters.rho) = v;
        c.validate();
        points.push_back(std::move(c));
    }

    SweepSummary s;
    s.parameter = parameter;
    s.values = values;
    Json rows = Json::array();
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const TrainSummary t = train(points[i]);
        s.rows.push_back(*t.mean);
        labels.push_back(number_text(values[i]));
        rows.push_back({{parameter, values[i]},
                        {"result_dir", t.dir.filename().string()},
                        {"metrics", to_json(*t.mean)}});
    }
    s.table = format_table(s.rows, parameter, labels);

    const Json key = {{"config", config_to_json(cfg)}, {"parameter", parameter}, {"values", values}};
    const std::string stem = parameter + "-" + join_digest(prepare_key(cfg), key);
    s.json_path = cfg.output_dir / "sweeps" / (stem + ".json");
    s.text_path = cfg.output_dir / "sweeps" / (stem + ".txt");
    const Json doc = {{"parameter", parameter},
                      {"method", std::string(method_name(cfg.method))},
                      {"values", values},
                      {"rows", rows}};
    write_file_atomic(s.json_path, doc.dump(2) + "\n");
    write_file_atomic(s.text_path, s.table);
    return s;
}

ReportSummary report(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw ValidationError("report directory '" + dir.string() + "' does not exist");
    }
    std::vector<fs::path> result_dirs;
    if (fs::exists(dir / "metrics.json")) {
        result_dirs.push_back(dir);
    } else {
        const fs::path root = fs::is_directory(dir / "results") ? dir / "results" : dir;
        for (const auto& entry : fs::directory_iterator(root)) {
            if (!entry.is_directory()) continue;
            if (!fs::exists(entry.path() / "metrics.json")) {
                if (fs::exists(entry.path() / "result_rep0.json")) {
                    throw ValidationError("result directory '" + entry.path().string() + "' lacks metrics.json");
                }
                continue;
            }
            result_dirs.push_back(entry.path());
        }
    }
    if (result_dirs.empty()) {
        throw ValidationError("no results found under '" + dir.string() + "'");
    }

    struct Entry {
        std::size_t order;
        std::string name;
        Method method;
        Json mean;
        MetricsReport report;
    };
    std::vector<Entry> entries;
    for (const auto& rd : result_dirs) {
        const fs::path path = rd / "metrics.json";
        const Json doc = read_json_file(path);
        try {
            const Method m = parse_method(doc.at("method").get<std::string>());
            const Json& mean = doc.at("mean");
            if (mean.is_null()) {
                throw ValidationError("'" + path.string() + "' has no successful repetitions");
            }
            const auto pos = std::find(all_methods().begin(), all_methods().end(), m) - all_methods().begin();
            entries.push_back({static_cast<std::size_t>(pos), rd.filename().string(), m, mean,
                               metrics_report_from_json(mean)});
        } catch (const Json::exception& e) {
            throw ValidationError("corrupt result artifact '" + path.string() + "': " + e.what());
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.order != b.order ? a.order < b.order : a.name < b.name;
    });

    std::map<Method, std::size_t> counts;
    for (const auto& e : entries) ++counts[e.method];
    std::vector<MetricsReport> rows;
    std::vector<std::string> labels;
    Json json_rows = Json::array();
    for (const auto& e : entries) {
        const std::string label = counts[e.method] > 1 ? e.name : std::string(method_label(e.method));
        rows.push_back(e.report);
        labels.push_back(label);
        json_rows.push_back({{"label", label}, {"result_dir", e.name}, {"metrics", e.mean}});
    }
    ReportSummary out;
    out.table = format_table(rows, "Method", labels);
    out.json = {{"columns", {"train_accuracy", "test_accuracy", "train_rd", "test_rd"}}, {"rows", json_rows}};
    write_file_atomic(dir / "report.txt", out.table);
    write_file_atomic(dir / "report.json", out.json.dump(2) + "\n");
    return out;
}

}  // namespace fairshift
