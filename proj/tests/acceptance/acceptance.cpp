// End-to-end acceptance checks. Usage: acceptance <criterion>...
// where each criterion is one of: gradient lp bias degenerate adult sweep
// metrics determinism. Prints one [PASS]/[FAIL] line per check and exits
// nonzero if any check failed.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairshift/experiment.hpp"
#include "fairshift/fair_model.hpp"
#include "fairshift/metrics.hpp"
#include "fairshift/robust_optimizer.hpp"
#include "fairshift/selection.hpp"
#include "../support/lp_oracle.hpp"
#include "../support/synthetic.hpp"

using namespace fairshift;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Analytic gradient vs central differences.
void check_gradient() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uv(0.5, 2.0), us(0.0, 0.3);
    std::normal_distribution<double> nw(0.0, 0.5);
    double worst = 0.0;
    int instances = 0;
    for (PenaltyForm form : {PenaltyForm::paper_literal, PenaltyForm::hinge_squared}) {
        for (int t = 0; t < 50; ++t, ++instances) {
            const auto data = testing::random_dataset(64, 19, rng());  // 19 features + bias = 20
            std::vector<double> v(64);
            for (double& x : v) x = uv(rng);
            const WeightVector weights(v);
            ModelParams p = ModelParams::zeros(data);
            for (double& w : p.w) w = nw(rng);
            const PenaltyConfig cfg{1.0 + us(rng) * 5.0, us(rng), form};

            const auto g = gradient(p, data, weights, cfg);
            std::vector<double> fd(g.size());
            for (std::size_t j = 0; j < g.size(); ++j) {
                ModelParams up = p, down = p;
                up.w[j] += 1e-5;
                down.w[j] -= 1e-5;
                fd[j] = (penalty_objective(up, data, weights, cfg) - penalty_objective(down, data, weights, cfg)) /
                        2e-5;
            }
            double diff = 0.0, norm = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                diff += (g[j] - fd[j]) * (g[j] - fd[j]);
                norm += fd[j] * fd[j];
            }
            worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12));
        }
    }
    const double elapsed = seconds_since(start);
    report(worst <= 1e-5, "criterion 1 gradient",
           fmt("%d instances (N=64, d=20, both penalty forms), max relative error %.3g (<= 1e-5)", instances, worst));
    report(elapsed < 5.0, "criterion 1 runtime", fmt("%.2f s (< 5 s)", elapsed));
}

// 2. Inner LP vs brute-force enumeration.
void check_lp() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_obj = 0.0, worst_violation = 0.0;
    int feasible = 0, status_mismatch = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t m = 1 + rng() % 6;
        InnerLPProblem p;
        p.scale = 1.0 / static_cast<double>(m + rng() % 5);
        for (std::size_t j = 0; j < m; ++j) {
            p.loss_coeffs.push_back(u(rng) * 3.0);
            p.fairness_coeffs.push_back((u(rng) - 0.4) * 4.0);
            const double lo = 0.05 + u(rng) * 2.0;
            p.lo.push_back(lo);
            p.hi.push_back(u(rng) < 0.1 ? lo : lo + u(rng) * 5.0);
        }
        p.sigma = u(rng) * 1.5;
        const auto s = solve_inner_lp(p);
        const auto o = testing::lp_oracle(p);
        if (!o.feasible) {
            status_mismatch += s.status == LpStatus::infeasible_relaxed ? 0 : 1;
            continue;
        }
        ++feasible;
        status_mismatch += s.status == LpStatus::optimal ? 0 : 1;
        worst_obj = std::max(worst_obj, std::abs(s.objective - o.objective));
        double g = 0.0, box = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            g += p.fairness_coeffs[j] * s.values[j];
            box = std::max({box, p.lo[j] - s.values[j], s.values[j] - p.hi[j]});
        }
        worst_violation = std::max({worst_violation, box, std::abs(p.scale * g) - p.sigma});
    }
    const double elapsed = seconds_since(start);
    report(worst_obj <= 1e-8 && status_mismatch == 0, "criterion 2 LP objective",
           fmt("1000 problems (%d feasible), max |obj - oracle| %.3g (<= 1e-8), status mismatches %d", feasible,
               worst_obj, status_mismatch));
    report(worst_violation <= 1e-10, "criterion 2 LP feasibility",
           fmt("max constraint violation %.3g (<= 1e-10)", worst_violation));
    report(elapsed < 30.0, "criterion 2 runtime", fmt("%.2f s (< 30 s)", elapsed));
}

// 3. Reweighing with exact selection probabilities recovers population quantities.
void check_bias_identity() {
    const auto start = std::chrono::steady_clock::now();
    DiscreteDistributionSpec spec;
    // Group positive rates 0.95 and 0.10 under the model below, so RD(Q) = 0.85
    // and the 1% band is several standard errors wide at 100000 samples.
    spec.support = {{"u", 1, 1, 0.30}, {"u", 1, 0, 0.05}, {"w", 1, 1, 0.125}, {"v", 1, 0, 0.025},
                    {"v", 0, 0, 0.30}, {"v", 0, 1, 0.15}, {"w", 0, 0, 0.05}};
    spec.selection_prob = {{{"u", 1}, 0.9}, {{"u", 0}, 0.5}, {{"v", 1}, 0.3},
                           {{"v", 0}, 0.7}, {{"w", 1}, 0.2}, {{"w", 0}, 0.6}};
    spec.validate();
    const auto keys = spec.keys();  // one-hot column order

    const std::map<std::string, double> key_weight = {{"u", 1.0}, {"v", -0.5}, {"w", 0.3}};
    ModelParams p;
    for (const auto& k : keys) {
        p.w.push_back(key_weight.at(k));
        p.feature_names.push_back("x=" + k);
    }
    p.w.push_back(-0.2);
    p.feature_names.push_back("bias");
    auto margin = [&](const std::string& key) {
        const auto j = std::find(keys.begin(), keys.end(), key) - keys.begin();
        return p.w[j] + p.w.back();
    };

    // Closed form under the population.
    double true_loss = 0.0, p_s = 0.0;
    double pos[2] = {0, 0}, mass[2] = {0, 0};
    for (const auto& s : spec.support) {
        const double z = margin(s.x_key);
        true_loss += s.prob * logistic_nll(z, s.y);
        p_s += s.prob * spec.selection(s.x_key, s.a);
        mass[s.a] += s.prob;
        pos[s.a] += z >= 0.0 ? s.prob : 0.0;
    }
    const double true_rd = std::abs(pos[1] / mass[1] - pos[0] / mass[0]);

    const auto sample = sample_discrete(spec, 100000, true, 7);
    std::vector<double> v(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        std::size_t j = 0;
        while (sample.features(i, j) != 1.0) ++j;
        v[i] = p_s / spec.selection(keys[j], sample.protected_attr[i]);
    }
    const WeightVector weights(v);
    const double reweighed = weighted_loss(p, sample, weights);
    const double naive = weighted_loss(p, sample, WeightVector::ones(sample.size()));
    const auto pred = predict_labels(p, sample);
    const double wrd = weighted_risk_difference(pred, sample.protected_attr, v);
    const double rd = risk_difference(pred, sample.protected_attr);
    const double loss_err = std::abs(reweighed - true_loss) / true_loss;
    const double rd_err = std::abs(wrd - true_rd) / true_rd;
    // Delta-method standard error of each weighted group rate.
    double se2 = 0.0;
    for (int g = 0; g < 2; ++g) {
        double sv = 0.0, spv = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (sample.protected_attr[i] == g) {
                sv += v[i];
                spv += v[i] * pred[i];
            }
        }
        const double rate = spv / sv;
        double var = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (sample.protected_attr[i] == g) var += v[i] * v[i] * (pred[i] - rate) * (pred[i] - rate);
        }
        se2 += var / (sv * sv);
    }
    report(loss_err <= 0.01, "criterion 3 reweighed loss",
           fmt("%.5f vs population %.5f, relative error %.4f (<= 0.01); unweighted %.5f", reweighed, true_loss,
               loss_err, naive));
    report(rd_err <= 0.01, "criterion 3 weighted RD",
           fmt("%.5f vs population %.5f, relative error %.4f (<= 0.01, standard error %.4f); unweighted %.5f", wrd,
               true_rd, rd_err, std::sqrt(se2) / true_rd, rd));
    const double elapsed = seconds_since(start);
    report(elapsed < 30.0, "criterion 3 runtime", fmt("%.2f s (< 30 s)", elapsed));
}

// Independent unweighted logistic regression: Newton's method with a line search.
std::vector<double> newton_logistic(const EncodedDataset& data) {
    const Eigen::Index n = static_cast<Eigen::Index>(data.size());
    const Eigen::Index d = static_cast<Eigen::Index>(data.dim());
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) x(i, j) = data.features(i, j);
        y(i) = data.labels[i];
    }
    auto nll = [&](const Eigen::VectorXd& w) {
        const Eigen::VectorXd z = x * w;
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            s += (z(i) > 0 ? z(i) + std::log1p(std::exp(-z(i))) : std::log1p(std::exp(z(i)))) - y(i) * z(i);
        }
        return s / n;
    };
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    for (int it = 0; it < 100; ++it) {
        const Eigen::VectorXd z = x * w;
        Eigen::VectorXd pr(n), s(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            pr(i) = 1.0 / (1.0 + std::exp(-z(i)));
            s(i) = pr(i) * (1.0 - pr(i));
        }
        const Eigen::VectorXd g = x.transpose() * (pr - y) / n;
        Eigen::MatrixXd h = x.transpose() * s.asDiagonal() * x / n;
        h.diagonal().array() += 1e-10;  // one-hot blocks plus bias are collinear
        const Eigen::VectorXd step = h.ldlt().solve(g);
        double t = 1.0;
        const double f0 = nll(w);
        while (nll(w - t * step) > f0 && t > 1e-12) t *= 0.5;
        w -= t * step;
        if (g.norm() < 1e-10) break;
    }
    return std::vector<double>(w.data(), w.data() + d);
}

double accuracy_of(const std::vector<double>& w, const EncodedDataset& data) {
    ModelParams p;
    p.w = w;
    return accuracy(predict_labels(p, data), data.labels);
}

// 4. Degenerate reductions.
void check_degenerate() {
    const auto start = std::chrono::steady_clock::now();
    const auto data = testing::synthetic_dataset(8000, 31);
    const auto split = biased_split(data, BiasSpec{"x3 >= 20", 0.8, 0.3, 6000, 2});

    TrainConfig cfg;
    cfg.learning_rate = 4.0;
    cfg.inner_gd_steps = 2000;
    cfg.outer_rounds = 3;
    cfg.penalty.beta = 0.0;
    const auto fitted = fit(split.train, RatioBounds::fixed(split.train.size()), cfg);
    const auto oracle = newton_logistic(split.train);
    const double acc_fit = accuracy_of(fitted.params.w, split.test);
    const double acc_oracle = accuracy_of(oracle, split.test);
    report(std::abs(acc_fit - acc_oracle) <= 0.005, "criterion 4 bounds [1,1], beta 0 == LR",
           fmt("test accuracy %.4f vs Newton LR %.4f, |diff| %.4f (<= 0.005)", acc_fit, acc_oracle,
               std::abs(acc_fit - acc_oracle)));

    const fs::path adult_config = fs::path(FAIRSHIFT_SOURCE_DIR) / "configs" / "adult.json";
    auto adult = config_from_json(load_config_json(adult_config), adult_config.parent_path());
    if (fs::exists(adult.dataset_path)) {
        adult.output_dir = fs::path(FAIRSHIFT_BINARY_DIR) / "acceptance_degenerate";
        adult.repetitions = 1;
        const auto adult_split = prepare(adult).split(0);
        const auto adult_fit = fit(adult_split.train, RatioBounds::fixed(adult_split.train.size()), cfg);
        const double a_fit = accuracy_of(adult_fit.params.w, adult_split.test);
        const double a_oracle = accuracy_of(newton_logistic(adult_split.train), adult_split.test);
        report(std::abs(a_fit - a_oracle) <= 0.005, "criterion 4 bounds [1,1], beta 0 == LR on Adult",
               fmt("test accuracy %.4f vs Newton LR %.4f, |diff| %.4f (<= 0.005)", a_fit, a_oracle,
                   std::abs(a_fit - a_oracle)));
    } else {
        std::printf("  Adult data not found, skipping the Adult split\n");
    }

    TrainConfig fair_cfg;
    fair_cfg.inner_gd_steps = 300;
    fair_cfg.outer_rounds = 5;
    const auto fair = fit_baseline(split.train, BaselineMethod::fair_lr, nullptr, fair_cfg);
    const auto clusters = kmeans(split.train, 50, 3, 100);
    const auto rho0 = fit(split.train, ratio_bounds_rflearn2(clusters, 0.0), fair_cfg);
    double max_dw = 0.0;
    for (std::size_t j = 0; j < fair.params.w.size(); ++j) {
        max_dw = std::max(max_dw, std::abs(fair.params.w[j] - rho0.params.w[j]));
    }
    const auto m_fair = evaluate(fair, split.train, split.test);
    const auto m_rho0 = evaluate(rho0, split.train, split.test);
    report(max_dw == 0.0 && m_fair.test_accuracy == m_rho0.test_accuracy && m_fair.test_rd == m_rho0.test_rd,
           "criterion 4 rho = 0 == FairLR",
           fmt("max |w diff| %.3g, test acc %.4f vs %.4f, test RD %.4f vs %.4f", max_dw, m_rho0.test_accuracy,
               m_fair.test_accuracy, m_rho0.test_rd, m_fair.test_rd));
    const double elapsed = seconds_since(start);
    report(elapsed < 120.0, "criterion 4 runtime", fmt("%.2f s (< 120 s)", elapsed));
}

// 6. Inner-LP optimum at the round-1 model is monotone in the box radius.
void check_sweep_monotonicity() {
    const auto data = testing::synthetic_dataset(6000, 41);
    const auto split = biased_split(data, BiasSpec{"x3 >= 20", 0.8, 0.3, 4500, 5});
    const auto pool = concatenate(split.test, split.train);
    TrainConfig cfg;
    cfg.outer_rounds = 1;

    const auto clusters = kmeans(split.train, 60, 1, 100);
    std::vector<double> values;
    std::vector<std::vector<double>> ws;
    std::string statuses;
    for (double rho : {0.2, 0.4, 0.6}) {
        const auto r = fit(split.train, ratio_bounds_rflearn2(clusters, rho), cfg);
        values.push_back(r.history[0].lp_value);
        ws.push_back(r.params.w);
        statuses += std::string(lp_status_name(r.history[0].lp_status)) + " ";
    }
    bool ok = ws[0] == ws[1] && ws[1] == ws[2];
    for (std::size_t i = 1; i < values.size(); ++i) ok = ok && values[i] >= values[i - 1];
    report(ok, "criterion 6 rho sweep",
           fmt("LP optimum at rho 0.2/0.4/0.6: %.6f %.6f %.6f (%s), same round-1 w: %s", values[0], values[1],
               values[2], statuses.c_str(), ws[0] == ws[2] ? "yes" : "no"));

    // One bin per numeric column leaves dense keys (color x group), so epsilon
    // stays below 1 and every delta gives a different box.
    const auto disc = DiscretizationConfig::for_dataset(split.train, 1);
    values.clear();
    ws.clear();
    statuses.clear();
    std::string eps;
    for (double delta : {0.15, 0.1, 0.05, 0.025}) {
        const auto est = estimate_density_ratio(split.train, pool, split.test.size(), disc, delta);
        const auto r = fit(split.train, ratio_bounds_rflearn1(est), cfg);
        values.push_back(r.history[0].lp_value);
        ws.push_back(r.params.w);
        statuses += std::string(lp_status_name(r.history[0].lp_status)) + " ";
        eps += fmt("%.3f ", est.epsilon);
    }
    ok = true;
    for (std::size_t i = 1; i < values.size(); ++i) ok = ok && ws[i] == ws[0] && values[i] >= values[i - 1];
    report(ok, "criterion 6 delta sweep",
           fmt("LP optimum at delta 0.15/0.1/0.05/0.025: %.6f %.6f %.6f %.6f (epsilon %s; %s)", values[0], values[1],
               values[2], values[3], eps.c_str(), statuses.c_str()));
}

// 7. Weighted RD identities.
void check_metric_identities() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uv(0.01, 50.0), uc(0.001, 1000.0);
    int ones_mismatch = 0, pow2_mismatch = 0;
    double worst_general = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t n = 2 + rng() % 200;
        std::vector<int> pred(n), a(n);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(rng() & 1);
            a[i] = static_cast<int>(rng() & 1);
            v[i] = uv(rng);
        }
        a[0] = 1;
        a[1] = 0;
        const std::vector<double> ones(n, 1.0);
        ones_mismatch += weighted_risk_difference(pred, a, ones) == risk_difference(pred, a) ? 0 : 1;

        const double base = weighted_risk_difference(pred, a, v);
        const double c2 = std::ldexp(1.0, static_cast<int>(rng() % 41) - 20);
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = c2 * v[i];
        pow2_mismatch += weighted_risk_difference(pred, a, scaled) == base ? 0 : 1;

        const double c = uc(rng);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = c * v[i];
        worst_general = std::max(worst_general, std::abs(weighted_risk_difference(pred, a, scaled) - base));
    }
    const double elapsed = seconds_since(start);
    report(ones_mismatch == 0, "criterion 7 weighted RD with v = 1", fmt("10000 instances, %d inexact", ones_mismatch));
    report(pow2_mismatch == 0, "criterion 7 rescaling invariance",
           fmt("exact under power-of-two factors: %d mismatches; arbitrary factors in [1e-3, 1e3]: max |diff| %.3g",
               pow2_mismatch, worst_general));
    report(elapsed < 10.0, "criterion 7 runtime", fmt("%.2f s (< 10 s)", elapsed));
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
    }
    return files;
}

// 8. Two `train` runs with the same config give byte-identical artifacts.
void check_determinism() {
    const fs::path root = fs::temp_directory_path() / "fairshift_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto t = testing::synthetic_table(2000, 13);
    std::ofstream(root / "data.csv") << testing::to_csv(t.raw);
    const Json cfg = {{"dataset", {{"path", "data.csv"}, {"schema", to_json(t.schema)}}},
                      {"bias", {{"selection", "x3 >= 20"}, {"high_rate", 0.8}, {"low_rate", 0.3},
                                {"head_count", 1500}, {"seed", 1}}},
                      {"method", "lr"},
                      {"hyperparameters", {{"delta", 0.1}, {"rho", 0.4}, {"k_clusters", 30}, {"numeric_bins", 4}}},
                      {"training", {{"inner_gd_steps", 50}, {"outer_rounds", 4}, {"seed", 3}}},
                      {"repetitions", 2}};
    std::ofstream(root / "config.json") << cfg.dump(2);

    bool ok = true;
    std::string detail;
    for (const char* method : {"lr", "fair_lr", "rflearn1_minus", "rflearn1", "rflearn2_minus", "rflearn2"}) {
        for (const char* run : {"a", "b"}) {
            const std::string cmd = std::string(FAIRSHIFT_CLI_PATH) + " train --config " +
                                    (root / "config.json").string() + " --method " + method + " --output " +
                                    (root / run).string() + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                detail += std::string(method) + " run " + run + " failed; ";
            }
        }
    }
    const auto a = read_tree(root / "a");
    const auto b = read_tree(root / "b");
    std::size_t differing = 0;
    for (const auto& [name, bytes] : a) {
        const auto it = b.find(name);
        if (it == b.end() || it->second != bytes) {
            ++differing;
            detail += name + " differs; ";
        }
    }
    ok = ok && a.size() == b.size() && differing == 0 && !a.empty();
    report(ok, "criterion 8 determinism",
           fmt("6 methods x 2 repetitions, %zu artifacts per run, %zu differ. ", a.size(), differing) + detail);
    fs::remove_all(root);
}

// 5. Method comparison trends on Adult.
void check_adult() {
    const fs::path config_path = fs::path(FAIRSHIFT_SOURCE_DIR) / "configs" / "adult.json";
    Json j = load_config_json(config_path);
    auto base = config_from_json(j, config_path.parent_path());
    if (!fs::exists(base.dataset_path)) {
        report(false, "criterion 5 Adult", "dataset " + base.dataset_path.string() + " not found");
        return;
    }
    base.output_dir = fs::path(FAIRSHIFT_BINARY_DIR) / "acceptance_runs";
    if (const char* reps = std::getenv("FAIRSHIFT_ADULT_REPS")) base.repetitions = std::stoul(reps);

    std::map<Method, MetricsReport> rows;
    for (Method m : all_methods()) {
        auto cfg = base;
        cfg.method = m;
        const auto start = std::chrono::steady_clock::now();
        const auto s = train(cfg);
        rows[m] = *s.mean;
        std::printf("  %-10s %zu reps in %.0f s\n", std::string(method_label(m)).c_str(), base.repetitions,
                    seconds_since(start));
        std::fflush(stdout);
    }
    const auto r = fairshift::report(base.output_dir);
    std::printf("%s", r.table.c_str());

    const auto& lr = rows[Method::lr];
    const auto& fair = rows[Method::fair_lr];
    report(std::abs(lr.test_accuracy - 0.7882) <= 0.02, "criterion 5a LR test accuracy",
           fmt("%.4f, target 0.7882 +- 0.02", lr.test_accuracy));
    report(fair.train_rd <= 0.05 && fair.test_rd > 0.05, "criterion 5b FairLR",
           fmt("train RD %.4f (<= 0.05), test RD %.4f (> 0.05)", fair.train_rd, fair.test_rd));
    report(rows[Method::rflearn1].test_rd <= 0.05 && rows[Method::rflearn2].test_rd <= 0.05,
           "criterion 5c RFLearn1/RFLearn2",
           fmt("test RD %.4f and %.4f (<= 0.05)", rows[Method::rflearn1].test_rd, rows[Method::rflearn2].test_rd));
    report(rows[Method::rflearn1_minus].test_rd > 0.05 && rows[Method::rflearn2_minus].test_rd > 0.05,
           "criterion 5d RFLearn1-/RFLearn2-",
           fmt("test RD %.4f and %.4f (> 0.05)", rows[Method::rflearn1_minus].test_rd,
               rows[Method::rflearn2_minus].test_rd));
}

}  // namespace

int main(int argc, char** argv) {
    set_warning_sink([](const std::string&) {});
    const std::map<std::string, std::function<void()>> checks = {
        {"gradient", check_gradient},   {"lp", check_lp},
        {"bias", check_bias_identity},  {"degenerate", check_degenerate},
        {"adult", check_adult},         {"sweep", check_sweep_monotonicity},
        {"metrics", check_metric_identities}, {"determinism", check_determinism}};
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <criterion>...\n", argv[0]);
        return 2;
    }
    for (int i = 1; i < argc; ++i) {
        const auto it = checks.find(argv[i]);
        if (it == checks.end()) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        try {
            it->second();
        } catch (const std::exception& e) {
            report(false, argv[i], std::string("threw: ") + e.what());
        }
    }
    return g_failures == 0 ? 0 : 1;
}
