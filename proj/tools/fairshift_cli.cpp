// fairshift: prepare data, train, evaluate, sweep and report.
//
// Exit codes: 0 success, 1 validation error, 2 runtime or numeric failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairshift/experiment.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::string> method;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::string> output;
    std::vector<std::string> overrides;
    std::string parameter;
    std::vector<double> values;
    std::string report_dir;
};

void add_common(CLI::App* cmd, Options& o, bool config_required = true) {
    auto* c = cmd->add_option("--config", o.config, "Experiment config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--method", o.method, "lr, fair_lr, rflearn1_minus, rflearn1, rflearn2_minus, rflearn2");
    cmd->add_option("--seed", o.seed, "Base training seed; repetition i uses seed + i");
    cmd->add_option("--reps", o.reps, "Number of repetitions");
    cmd->add_option("--output", o.output, "Output directory");
    cmd->add_option("--set", o.overrides, "Override a config field, key=value (dotted keys)");
}

fairshift::ExperimentConfig load(const Options& o) {
    using fairshift::Json;
    Json j = fairshift::load_config_json(o.config);
    for (const auto& s : o.overrides) fairshift::apply_override(j, s);
    if (o.method) j["method"] = *o.method;
    if (o.seed) j["training"]["seed"] = *o.seed;
    if (o.reps) j["repetitions"] = *o.reps;
    if (o.output) j["output_dir"] = *o.output;
    return fairshift::config_from_json(j, std::filesystem::path(o.config).parent_path());
}

void print_summary(const fairshift::TrainSummary& s, std::string_view method) {
    for (const auto& [rep, error] : s.failures) {
        std::cerr << "repetition " << rep << " failed: " << error << "\n";
    }
    if (s.mean) {
        std::vector<fairshift::MetricsReport> rows{*s.mean};
        std::cout << fairshift::format_table(rows, "Method", {std::string(method)});
    }
    std::cout << "results: " << s.dir.string() << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Fair classification robust to sample selection bias"};
    app.require_subcommand(1);
    Options o;

    auto* prepare = app.add_subcommand("prepare", "Encode the dataset and draw the biased splits");
    add_common(prepare, o);
    auto* train = app.add_subcommand("train", "Train one method over all repetitions");
    add_common(train, o);
    auto* evaluate = app.add_subcommand("evaluate", "Re-evaluate persisted models on their splits");
    add_common(evaluate, o);
    auto* sweep = app.add_subcommand("sweep", "Train once per value of delta or rho");
    add_common(sweep, o);
    sweep->add_option("--param", o.parameter, "delta or rho")->required();
    sweep->add_option("--values", o.values, "Comma-separated values")->delimiter(',')->required();
    auto* report = app.add_subcommand("report", "Cross-method comparison table");
    add_common(report, o, false);
    report->add_option("dir", o.report_dir, "Output or results directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*prepare) {
        const auto cfg = load(o);
        const auto p = fairshift::prepare(cfg);
        std::cout << "prepared: " << p.dir.string() << "\n"
                  << "samples: " << p.data.size() << ", features: " << p.data.dim() << "\n"
                  << "test size: " << p.test_rows.size() << "\n"
                  << "train sizes:";
        for (const auto& rows : p.train_rows) std::cout << ' ' << rows.size();
        std::cout << "\n";
    } else if (*train) {
        const auto cfg = load(o);
        print_summary(fairshift::train(cfg), fairshift::method_label(cfg.method));
    } else if (*evaluate) {
        const auto cfg = load(o);
        print_summary(fairshift::evaluate(cfg), fairshift::method_label(cfg.method));
    } else if (*sweep) {
        const auto cfg = load(o);
        const auto s = fairshift::sweep(cfg, o.parameter, o.values);
        std::cout << s.table << "table: " << s.text_path.string() << "\n";
    } else if (*report) {
        std::filesystem::path dir = o.report_dir;
        if (dir.empty()) {
            if (o.output) {
                dir = *o.output;
            } else if (!o.config.empty()) {
                dir = load(o).output_dir;
            } else {
                throw fairshift::ValidationError("report needs a directory, --output or --config");
            }
        }
        std::cout << fairshift::report(dir).table;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    fairshift::set_warning_sink([](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; });
    try {
        return run(argc, argv);
    } catch (const fairshift::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
