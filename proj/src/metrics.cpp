#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fairshift/metrics.hpp"

namespace fairshift {

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.empty() || predictions.size() != labels.size()) {
        throw ValidationError("accuracy needs equal-length, nonempty inputs");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        hits += predictions[i] == labels[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double risk_difference(std::span<const int> predictions, std::span<const int> protected_attr) {
    if (predictions.size() != protected_attr.size()) {
        throw ValidationError("risk_difference: length mismatch");
    }
    std::size_t count[2] = {0, 0};
    std::size_t positive[2] = {0, 0};
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int g = protected_attr[i];
        if (g != 0 && g != 1) {
            throw ValidationError("risk_difference: protected attribute must be 0 or 1");
        }
        ++count[g];
        positive[g] += predictions[i] == 1 ? 1 : 0;
    }
    if (count[1] == 0) {
        throw ValidationError("risk_difference: majority group (a = 1) is empty");
    }
    if (count[0] == 0) {
        throw ValidationError("risk_difference: minority group (a = 0) is empty");
    }
    const double r1 = static_cast<double>(positive[1]) / static_cast<double>(count[1]);
    const double r0 = static_cast<double>(positive[0]) / static_cast<double>(count[0]);
    return std::abs(r1 - r0);
}

double weighted_risk_difference(std::span<const int> predictions, std::span<const int> protected_attr,
                                std::span<const double> v) {
    if (predictions.size() != protected_attr.size() || v.size() != predictions.size()) {
        throw ValidationError("weighted_risk_difference: length mismatch");
    }
    double total[2] = {0.0, 0.0};
    double positive[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int g = protected_attr[i];
        if (g != 0 && g != 1) {
            throw ValidationError("weighted_risk_difference: protected attribute must be 0 or 1");
        }
        total[g] += v[i];
        if (predictions[i] == 1) {
            positive[g] += v[i];
        }
    }
    if (!(total[1] > 0.0)) {
        throw ValidationError("weighted_risk_difference: majority group (a = 1) has zero weight");
    }
    if (!(total[0] > 0.0)) {
        throw ValidationError("weighted_risk_difference: minority group (a = 0) has zero weight");
    }
    return std::abs(positive[1] / total[1] - positive[0] / total[0]);
}

MetricsReport evaluate(const TrainResult& result, const EncodedDataset& train, const EncodedDataset& test,
                       double fairness_threshold) {
    const auto train_pred = predict_labels(result.params, train);
    const auto test_pred = predict_labels(result.params, test);
    MetricsReport r;
    r.method = result.method;
    r.train_accuracy = accuracy(train_pred, train.labels);
    r.test_accuracy = accuracy(test_pred, test.labels);
    r.train_rd = risk_difference(train_pred, train.protected_attr);
    r.test_rd = risk_difference(test_pred, test.protected_attr);
    if (result.weights.size() == train.size()) {
        r.weighted_train_rd = weighted_risk_difference(train_pred, train.protected_attr, result.weights.values());
    }
    r.fairness_threshold = fairness_threshold;
    r.train_fair = r.train_rd <= fairness_threshold;
    r.test_fair = r.test_rd <= fairness_threshold;
    return r;
}

MetricsReport average(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) {
        throw ValidationError("cannot average zero reports");
    }
    MetricsReport out = reports.front();
    const double n = static_cast<double>(reports.size());
    double acc_tr = 0.0, acc_te = 0.0, rd_tr = 0.0, rd_te = 0.0, wrd = 0.0;
    bool have_wrd = true;
    for (const auto& r : reports) {
        acc_tr += r.train_accuracy;
        acc_te += r.test_accuracy;
        rd_tr += r.train_rd;
        rd_te += r.test_rd;
        have_wrd = have_wrd && r.weighted_train_rd.has_value();
        wrd += r.weighted_train_rd.value_or(0.0);
    }
    out.train_accuracy = acc_tr / n;
    out.test_accuracy = acc_te / n;
    out.train_rd = rd_tr / n;
    out.test_rd = rd_te / n;
    out.weighted_train_rd = have_wrd ? std::optional<double>(wrd / n) : std::nullopt;
    out.repetitions = reports.size();
    out.aggregation = "mean";
    out.train_fair = out.train_rd <= out.fairness_threshold;
    out.test_fair = out.test_rd <= out.fairness_threshold;
    return out;
}

std::string format_table(const std::vector<MetricsReport>& rows, const std::string& label_column,
                         const std::vector<std::string>& labels) {
    static const char* kHeaders[] = {"Training Acc", "Test Acc", "Training RD", "Test RD"};
    std::vector<std::string> names;
    std::size_t width = label_column.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        names.push_back(i < labels.size() ? labels[i] : rows[i].method);
        width = std::max(width, names.back().size());
    }
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), label_column.c_str());
    out << buf;
    for (const char* h : kHeaders) {
        std::snprintf(buf, sizeof buf, " | %12s", h);
        out << buf;
    }
    out << '\n' << std::string(width, '-');
    for (std::size_t i = 0; i < 4; ++i) {
        out << "-+-" << std::string(12, '-');
    }
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), names[i].c_str());
        out << buf;
        for (double v : {r.train_accuracy, r.test_accuracy, r.train_rd, r.test_rd}) {
            std::snprintf(buf, sizeof buf, " | %12.4f", v);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace fairshift
