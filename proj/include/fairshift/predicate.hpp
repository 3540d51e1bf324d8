#pragma once

// Row predicates of the form "column op value" used to pick the
// over-sampled group in a biased split.
//
//   education_num >= 10
//   marital_status = Married-civ-spouse|Married-AF-spouse
//   race != White
//
// Numeric columns accept = != < <= > >= against a number, evaluated on the
// original (pre-scaling) value recovered from the encoding. Categorical
// columns accept = and != against one or more '|'-separated categories.

#include <span>
#include <string>
#include <vector>

#include "fairshift/dataset.hpp"

namespace fairshift {

enum class CompareOp { eq, ne, lt, le, gt, ge };

struct SelectionPredicate {
    std::string column;
    CompareOp op = CompareOp::eq;
    std::vector<std::string> values;  // one entry for numeric comparisons

    static SelectionPredicate parse(const std::string& text);
};

// Evaluates the predicate on every row; throws ValidationError if the column
// is not an encoded feature block or the operator does not fit its kind.
std::vector<bool> evaluate_predicate(const SelectionPredicate& predicate, const EncodedDataset& data);

}  // namespace fairshift
