#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fairshift/dataset.hpp"
#include "fairshift/predicate.hpp"

namespace fairshift {

namespace {

double parse_number(const std::string& text, std::size_t row, const std::string& column) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw ValidationError("row " + std::to_string(row) + ": column '" + column +
                              "' value '" + text + "' is not a finite number");
    }
    return v;
}

std::vector<int> encode_binary(const RawTable& raw, const std::string& column, const std::string& positive,
                               const char* role) {
    const std::size_t idx = raw.column_index(column);
    std::set<std::string> seen;
    std::vector<int> out;
    out.reserve(raw.rows.size());
    for (const auto& row : raw.rows) {
        seen.insert(row[idx]);
        out.push_back(row[idx] == positive ? 1 : 0);
    }
    if (seen.size() != 2) {
        throw ValidationError(std::string(role) + " column '" + column + "' must have exactly 2 distinct values, found " +
                              std::to_string(seen.size()));
    }
    if (seen.count(positive) == 0) {
        throw ValidationError(std::string(role) + " value '" + positive + "' does not occur in column '" + column + "'");
    }
    return out;
}

}  // namespace

double unit_uniform(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

const ColumnSpec* Schema::find(const std::string& name) const {
    for (const auto& c : columns) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

void Schema::validate() const {
    std::set<std::string> names;
    for (const auto& c : columns) {
        if (!names.insert(c.name).second) {
            throw ValidationError("schema lists column '" + c.name + "' twice");
        }
    }
    for (const auto* role : {&protected_column, &label_column}) {
        const ColumnSpec* c = find(*role);
        if (c == nullptr) {
            throw ValidationError("schema does not contain column '" + *role + "'");
        }
        if (c->kind != ColumnKind::categorical) {
            throw ValidationError("column '" + *role + "' must be categorical");
        }
    }
    if (protected_column == label_column) {
        throw ValidationError("protected and label column must differ");
    }
    if (columns.size() < 3) {
        throw ValidationError("schema needs at least one feature column besides protected and label");
    }
}

EncodedDataset encode(const RawTable& raw, const Schema& schema) {
    schema.validate();
    if (raw.rows.empty()) {
        throw ValidationError("cannot encode an empty table");
    }
    const std::size_t n = raw.rows.size();

    EncodedDataset out;
    out.protected_attr = encode_binary(raw, schema.protected_column, schema.majority_group_value, "protected");
    out.labels = encode_binary(raw, schema.label_column, schema.favorable_label_value, "label");

    // Column-major staging, transposed at the end.
    std::vector<std::vector<double>> cols;
    for (const auto& spec : schema.columns) {
        if (spec.name == schema.protected_column || spec.name == schema.label_column) {
            continue;
        }
        const std::size_t idx = raw.column_index(spec.name);
        FeatureBlock block;
        block.column = spec.name;
        block.kind = spec.kind;
        block.offset = cols.size();
        if (spec.kind == ColumnKind::numeric) {
            std::vector<double> values(n);
            for (std::size_t r = 0; r < n; ++r) {
                values[r] = parse_number(raw.rows[r][idx], r, spec.name);
            }
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            block.min = *lo;
            block.max = *hi;
            const double range = block.max - block.min;
            if (range == 0.0) {
                warn("numeric column '" + spec.name + "' is constant; encoded as 0");
            }
            for (double& v : values) {
                v = range == 0.0 ? 0.0 : (v - block.min) / range;
            }
            cols.push_back(std::move(values));
            out.feature_names.push_back(spec.name);
            block.width = 1;
        } else {
            std::set<std::string> cats;
            for (const auto& row : raw.rows) {
                cats.insert(row[idx]);
            }
            block.categories.assign(cats.begin(), cats.end());
            for (const auto& cat : block.categories) {
                std::vector<double> ind(n);
                for (std::size_t r = 0; r < n; ++r) {
                    ind[r] = raw.rows[r][idx] == cat ? 1.0 : 0.0;
                }
                cols.push_back(std::move(ind));
                out.feature_names.push_back(spec.name + "=" + cat);
            }
            block.width = block.categories.size();
        }
        out.blocks.push_back(std::move(block));
    }
    out.feature_names.push_back("bias");

    const std::size_t d = cols.size() + 1;
    out.features = Matrix(n, d);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            out.features(r, j) = cols[j][r];
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        out.features(r, d - 1) = 1.0;
    }
    out.validate();
    return out;
}

void EncodedDataset::validate() const {
    const std::size_t n = labels.size();
    if (n == 0) {
        throw ValidationError("dataset is empty");
    }
    if (features.rows() != n || protected_attr.size() != n) {
        throw ValidationError("dataset has inconsistent row counts");
    }
    if (features.cols() < 2) {
        throw ValidationError("dataset needs a bias column and at least one feature");
    }
    if (feature_names.size() != features.cols()) {
        throw ValidationError("feature name count does not match feature width");
    }
    const std::size_t bias = bias_index();
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = features.row(r);
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double v = row[j];
            const bool ok = j == bias ? v == 1.0 : (v >= 0.0 && v <= 1.0);
            if (!ok) {
                throw ValidationError("feature (" + std::to_string(r) + ", " + std::to_string(j) +
                                      ") = " + std::to_string(v) + " is out of range");
            }
        }
        if ((protected_attr[r] != 0 && protected_attr[r] != 1) || (labels[r] != 0 && labels[r] != 1)) {
            throw ValidationError("row " + std::to_string(r) + ": protected/label must be 0 or 1");
        }
    }
}

EncodedDataset EncodedDataset::subset(const std::vector<std::size_t>& indices) const {
    EncodedDataset out;
    out.feature_names = feature_names;
    out.blocks = blocks;
    out.features = Matrix(0, dim());
    out.protected_attr.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) {
            throw std::out_of_range("EncodedDataset::subset: index out of range");
        }
        out.features.append_row(features.row(i));
        out.protected_attr.push_back(protected_attr[i]);
        out.labels.push_back(labels[i]);
    }
    return out;
}

EncodedDataset concatenate(const EncodedDataset& first, const EncodedDataset& second) {
    if (first.feature_names != second.feature_names) {
        throw ValidationError("cannot concatenate datasets with different feature layouts");
    }
    EncodedDataset out = first;
    for (std::size_t i = 0; i < second.size(); ++i) {
        out.features.append_row(second.features.row(i));
    }
    out.protected_attr.insert(out.protected_attr.end(), second.protected_attr.begin(), second.protected_attr.end());
    out.labels.insert(out.labels.end(), second.labels.begin(), second.labels.end());
    return out;
}

void BiasSpec::validate() const {
    if (!(low_rate >= 0.0 && low_rate <= high_rate && high_rate <= 1.0)) {
        throw ValidationError("bias rates must satisfy 0 <= low_rate <= high_rate <= 1");
    }
    if (selection.empty()) {
        throw ValidationError("bias selection predicate is empty");
    }
}

SplitResult biased_split(const EncodedDataset& data, const BiasSpec& spec) {
    spec.validate();
    if (spec.head_count > data.size()) {
        throw ValidationError("head_count " + std::to_string(spec.head_count) + " exceeds dataset size " +
                              std::to_string(data.size()));
    }
    const auto mask = evaluate_predicate(SelectionPredicate::parse(spec.selection), data);

    SplitResult out;
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = 0; i < spec.head_count; ++i) {
        const double u = unit_uniform(rng());
        if (u < (mask[i] ? spec.high_rate : spec.low_rate)) {
            out.train_rows.push_back(i);
        }
    }
    for (std::size_t i = spec.head_count; i < data.size(); ++i) {
        out.test_rows.push_back(i);
    }
    if (out.train_rows.empty()) {
        throw ValidationError("biased split selected no training rows");
    }
    if (out.test_rows.empty()) {
        throw ValidationError("biased split left no test rows (head_count == N)");
    }
    out.train = data.subset(out.train_rows);
    out.test = data.subset(out.test_rows);
    return out;
}

void DiscreteDistributionSpec::validate() const {
    if (support.empty()) {
        throw ValidationError("discrete distribution has empty support");
    }
    double total = 0.0;
    for (const auto& p : support) {
        if (!(p.prob >= 0.0) || (p.a != 0 && p.a != 1) || (p.y != 0 && p.y != 1)) {
            throw ValidationError("invalid support point '" + p.x_key + "'");
        }
        total += p.prob;
        const auto it = selection_prob.find({p.x_key, p.a});
        if (it == selection_prob.end()) {
            throw ValidationError("no selection probability for ('" + p.x_key + "', " + std::to_string(p.a) + ")");
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("support probabilities sum to " + std::to_string(total) + ", expected 1");
    }
    for (const auto& [key, s] : selection_prob) {
        if (!(s > 0.0 && s <= 1.0)) {
            throw ValidationError("selection probability for '" + key.first + "' must lie in (0, 1]");
        }
    }
}

double DiscreteDistributionSpec::selection(const std::string& x_key, int a) const {
    return selection_prob.at({x_key, a});
}

std::vector<std::string> DiscreteDistributionSpec::keys() const {
    std::vector<std::string> out;
    for (const auto& p : support) {
        if (std::find(out.begin(), out.end(), p.x_key) == out.end()) {
            out.push_back(p.x_key);
        }
    }
    return out;
}

EncodedDataset sample_discrete(const DiscreteDistributionSpec& spec, std::size_t n, bool biased, std::uint64_t seed) {
    spec.validate();
    if (n == 0) {
        throw ValidationError("sample_discrete needs n >= 1");
    }
    const auto keys = spec.keys();
    std::vector<double> cumulative;
    std::vector<std::size_t> key_of;
    std::vector<double> accept;
    double acc = 0.0;
    for (const auto& p : spec.support) {
        acc += p.prob;
        cumulative.push_back(acc);
        key_of.push_back(static_cast<std::size_t>(std::find(keys.begin(), keys.end(), p.x_key) - keys.begin()));
        accept.push_back(spec.selection(p.x_key, p.a));
    }

    EncodedDataset out;
    FeatureBlock block;
    block.column = "x";
    block.kind = ColumnKind::categorical;
    block.offset = 0;
    block.width = keys.size();
    block.categories = keys;
    out.blocks.push_back(block);
    for (const auto& k : keys) {
        out.feature_names.push_back("x=" + k);
    }
    out.feature_names.push_back("bias");
    const std::size_t d = keys.size() + 1;
    out.features = Matrix(0, d);
    out.labels.reserve(n);
    out.protected_attr.reserve(n);

    std::mt19937_64 rng(seed);
    std::vector<double> row(d);
    while (out.size() < n) {
        const double u = unit_uniform(rng());
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t t = it == cumulative.end() ? cumulative.size() - 1 : static_cast<std::size_t>(it - cumulative.begin());
        while (spec.support[t].prob == 0.0 && t > 0) {
            --t;
        }
        if (biased && unit_uniform(rng()) >= accept[t]) {
            continue;
        }
        std::fill(row.begin(), row.end(), 0.0);
        row[key_of[t]] = 1.0;
        row[d - 1] = 1.0;
        out.features.append_row(row);
        out.protected_attr.push_back(spec.support[t].a);
        out.labels.push_back(spec.support[t].y);
    }
    return out;
}

}  // namespace fairshift
