#pragma once

// Tabular ingestion, one-hot / min-max encoding, the biased train/test split
// protocol, and synthetic discrete distributions with a known selection
// mechanism.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairshift/common.hpp"

namespace fairshift {

enum class ColumnKind { categorical, numeric };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
};

struct Schema {
    std::vector<ColumnSpec> columns;
    std::string protected_column;
    std::string label_column;
    std::string favorable_label_value;
    std::string majority_group_value;

    // Throws ValidationError if protected/label are missing or not categorical.
    void validate() const;
    const ColumnSpec* find(const std::string& name) const;
};

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const;
};

// How one source column maps onto a contiguous range of feature coordinates.
struct FeatureBlock {
    std::string column;
    ColumnKind kind = ColumnKind::categorical;
    std::size_t offset = 0;
    std::size_t width = 0;
    std::vector<std::string> categories;  // categorical only, sorted
    double min = 0.0;                     // numeric only
    double max = 0.0;

    bool operator==(const FeatureBlock&) const = default;
};

struct EncodedDataset {
    Matrix features;              // N x d, last column is the constant-1 bias
    std::vector<int> protected_attr;  // 1 = majority group
    std::vector<int> labels;          // 1 = favorable outcome
    std::vector<std::string> feature_names;
    std::vector<FeatureBlock> blocks;

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.cols(); }
    std::size_t bias_index() const { return features.cols() - 1; }

    EncodedDataset subset(const std::vector<std::size_t>& indices) const;
    // Throws ValidationError on any broken invariant.
    void validate() const;

    bool operator==(const EncodedDataset&) const = default;
};

EncodedDataset concatenate(const EncodedDataset& first, const EncodedDataset& second);

struct BiasSpec {
    std::string selection;  // "column op value", see predicate.hpp
    double high_rate = 1.0;
    double low_rate = 1.0;
    std::size_t head_count = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SplitResult {
    EncodedDataset train;
    EncodedDataset test;
    std::vector<std::size_t> train_rows;  // indices into the input dataset
    std::vector<std::size_t> test_rows;
};

struct SupportPoint {
    std::string x_key;
    int a = 0;
    int y = 0;
    double prob = 0.0;
};

struct DiscreteDistributionSpec {
    std::vector<SupportPoint> support;
    std::map<std::pair<std::string, int>, double> selection_prob;

    void validate() const;
    double selection(const std::string& x_key, int a) const;
    // Distinct x keys in first-seen order; one-hot column i encodes keys()[i].
    std::vector<std::string> keys() const;
};

RawTable load_csv(const std::filesystem::path& path, const Schema& schema);
RawTable parse_csv(const std::string& text, const Schema& schema, const std::string& source = "<memory>");

EncodedDataset encode(const RawTable& raw, const Schema& schema);

SplitResult biased_split(const EncodedDataset& data, const BiasSpec& spec);

EncodedDataset sample_discrete(const DiscreteDistributionSpec& spec, std::size_t n, bool biased,
                               std::uint64_t seed);

// Cache format: header of feature names followed by "protected,label", then
// one numeric row per sample. Doubles are written with 17 significant digits
// so a load returns the exact values. Feature blocks are not part of the CSV.
void save_encoded_csv(const EncodedDataset& data, const std::filesystem::path& path);
EncodedDataset load_encoded_csv(const std::filesystem::path& path, std::vector<FeatureBlock> blocks = {});

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::uint64_t bits);

}  // namespace fairshift
