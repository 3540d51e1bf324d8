#include <algorithm>
#include <cmath>

#include "fairshift/predicate.hpp"

namespace fairshift {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool compare(double lhs, CompareOp op, double rhs) {
    // Values are reconstructed from min-max scaling, so allow a rounding slack.
    const double tol = 1e-9 * std::max(1.0, std::abs(rhs));
    switch (op) {
        case CompareOp::eq: return std::abs(lhs - rhs) <= tol;
        case CompareOp::ne: return std::abs(lhs - rhs) > tol;
        case CompareOp::lt: return lhs < rhs - tol;
        case CompareOp::le: return lhs <= rhs + tol;
        case CompareOp::gt: return lhs > rhs + tol;
        case CompareOp::ge: return lhs >= rhs - tol;
    }
    return false;
}

}  // namespace

SelectionPredicate SelectionPredicate::parse(const std::string& text) {
    // The first operator character splits column from value, so category
    // values may themselves contain operator characters ("income = <=50K").
    const auto pos = text.find_first_of("<>=!");
    if (pos == std::string::npos) {
        throw ValidationError("selection predicate '" + text + "' has no comparison operator");
    }
    const char c = text[pos];
    const bool has_eq = pos + 1 < text.size() && text[pos + 1] == '=';
    SelectionPredicate p;
    std::size_t width = 1;
    switch (c) {
        case '<': p.op = has_eq ? CompareOp::le : CompareOp::lt; width = has_eq ? 2 : 1; break;
        case '>': p.op = has_eq ? CompareOp::ge : CompareOp::gt; width = has_eq ? 2 : 1; break;
        case '!':
            if (!has_eq) {
                throw ValidationError("malformed selection predicate '" + text + "'");
            }
            p.op = CompareOp::ne;
            width = 2;
            break;
        default: p.op = CompareOp::eq; width = has_eq ? 2 : 1; break;
    }
    p.column = trim(text.substr(0, pos));
    const std::string rhs = trim(text.substr(pos + width));
    std::size_t start = 0;
    while (true) {
        const auto bar = rhs.find('|', start);
        p.values.push_back(trim(rhs.substr(start, bar - start)));
        if (bar == std::string::npos) {
            break;
        }
        start = bar + 1;
    }
    const bool empty_value = std::any_of(p.values.begin(), p.values.end(), [](const auto& v) { return v.empty(); });
    if (p.column.empty() || empty_value) {
        throw ValidationError("malformed selection predicate '" + text + "'");
    }
    return p;
}

std::vector<bool> evaluate_predicate(const SelectionPredicate& predicate, const EncodedDataset& data) {
    const auto block = std::find_if(data.blocks.begin(), data.blocks.end(),
                                    [&](const FeatureBlock& b) { return b.column == predicate.column; });
    if (block == data.blocks.end()) {
        throw ValidationError("selection column '" + predicate.column + "' is not an encoded feature");
    }
    std::vector<bool> mask(data.size());
    if (block->kind == ColumnKind::numeric) {
        if (predicate.values.size() != 1) {
            throw ValidationError("numeric selection on '" + predicate.column + "' takes a single value");
        }
        double threshold = 0.0;
        try {
            std::size_t used = 0;
            threshold = std::stod(predicate.values[0], &used);
            if (used != predicate.values[0].size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw ValidationError("selection value '" + predicate.values[0] + "' is not a number");
        }
        const double range = block->max - block->min;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double raw = block->min + data.features(i, block->offset) * range;
            mask[i] = compare(raw, predicate.op, threshold);
        }
        return mask;
    }

    if (predicate.op != CompareOp::eq && predicate.op != CompareOp::ne) {
        throw ValidationError("categorical selection on '" + predicate.column + "' supports only = and !=");
    }
    std::vector<std::size_t> coords;
    for (const auto& value : predicate.values) {
        const auto it = std::find(block->categories.begin(), block->categories.end(), value);
        if (it == block->categories.end()) {
            throw ValidationError("category '" + value + "' does not occur in column '" + predicate.column + "'");
        }
        coords.push_back(block->offset + static_cast<std::size_t>(it - block->categories.begin()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        bool hit = false;
        for (std::size_t c : coords) {
            hit = hit || data.features(i, c) == 1.0;
        }
        mask[i] = predicate.op == CompareOp::eq ? hit : !hit;
    }
    return mask;
}

}  // namespace fairshift
