#include <filesystem>
#include <fstream>
#include <map>

#include <doctest.h>

#include "fairshift/dataset.hpp"
#include "fairshift/predicate.hpp"
#include "../support/synthetic.hpp"

using namespace fairshift;

namespace {

Schema small_schema() {
    Schema s;
    s.columns = {{"age", ColumnKind::numeric}, {"job", ColumnKind::categorical},
                 {"sex", ColumnKind::categorical}, {"income", ColumnKind::categorical}};
    s.protected_column = "sex";
    s.label_column = "income";
    s.favorable_label_value = ">50K";
    s.majority_group_value = "Male";
    return s;
}

const char* kSmallCsv =
    "age,job,sex,income,unused\n"
    "20, clerk ,Male,<=50K,x\n"
    "40,farmer,Female,>50K,y\n"
    "\n"
    "30,clerk,Female,<=50K,z\n";

struct CaptureWarnings {
    std::vector<std::string> messages;
    CaptureWarnings() {
        set_warning_sink([this](const std::string& m) { messages.push_back(m); });
    }
    ~CaptureWarnings() { set_warning_sink(nullptr); }
};

}  // namespace

TEST_CASE("parse_csv trims fields, skips blank lines and ignores extra columns") {
    const RawTable raw = parse_csv(kSmallCsv, small_schema());
    REQUIRE(raw.rows.size() == 3);
    CHECK(raw.rows[0][raw.column_index("job")] == "clerk");
}

TEST_CASE("parse_csv reports arity mismatches with the row index") {
    const std::string bad = "age,job,sex,income\n20,clerk,Male,<=50K\n30,clerk,Male\n";
    try {
        parse_csv(bad, small_schema(), "bad.csv");
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.csv:3") != std::string::npos);
        CHECK(msg.find("data row 2") != std::string::npos);
    }
}

TEST_CASE("parse_csv rejects schema columns missing from the header") {
    CHECK_THROWS_AS(parse_csv("age,job,sex\n1,a,Male\n", small_schema()), ValidationError);
}

TEST_CASE("load_csv on a missing file is a validation error") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", small_schema()), ValidationError);
}

TEST_CASE("encode: min-max numerics, sorted one-hot, bias last") {
    const auto data = encode(parse_csv(kSmallCsv, small_schema()), small_schema());
    CHECK(data.feature_names == std::vector<std::string>{"age", "job=clerk", "job=farmer", "bias"});
    CHECK(data.features(0, 0) == 0.0);
    CHECK(data.features(1, 0) == 1.0);
    CHECK(data.features(2, 0) == 0.5);
    CHECK(data.features(1, 2) == 1.0);
    CHECK(data.features(1, 1) == 0.0);
    for (std::size_t r = 0; r < data.size(); ++r) CHECK(data.features(r, 3) == 1.0);
    CHECK(data.protected_attr == std::vector<int>{1, 0, 0});
    CHECK(data.labels == std::vector<int>{0, 1, 0});
    REQUIRE(data.blocks.size() == 2);
    CHECK(data.blocks[0].min == 20.0);
    CHECK(data.blocks[0].max == 40.0);
    CHECK(data.blocks[1].categories == std::vector<std::string>{"clerk", "farmer"});
}

TEST_CASE("encode: constant numeric column encodes as zero with a warning") {
    CaptureWarnings w;
    const std::string csv = "age,job,sex,income\n5,a,Male,>50K\n5,b,Female,<=50K\n";
    const auto data = encode(parse_csv(csv, small_schema()), small_schema());
    CHECK(data.features(0, 0) == 0.0);
    CHECK(data.features(1, 0) == 0.0);
    CHECK(w.messages.size() == 1);
}

TEST_CASE("encode: protected and label columns must be binary and contain the positive value") {
    const std::string three = "age,job,sex,income\n1,a,Male,>50K\n2,b,Female,<=50K\n3,c,Other,<=50K\n";
    CHECK_THROWS_AS(encode(parse_csv(three, small_schema()), small_schema()), ValidationError);
    Schema s = small_schema();
    s.favorable_label_value = "high";
    CHECK_THROWS_AS(encode(parse_csv(kSmallCsv, s), s), ValidationError);
}

TEST_CASE("biased_split with rates 1/1 keeps the whole head") {
    const auto data = testing::synthetic_dataset(500, 3);
    BiasSpec spec{"x1 >= 0", 1.0, 1.0, 400, 9};
    const auto split = biased_split(data, spec);
    CHECK(split.train.size() == 400);
    CHECK(split.test.size() == 100);
    CHECK(split.test_rows.front() == 400);
    CHECK(split.test_rows.back() == 499);
}

TEST_CASE("biased_split favors rows matching the predicate and is seeded") {
    const auto data = testing::synthetic_dataset(4000, 5);
    BiasSpec spec{"x3 >= 20", 0.9, 0.1, 3000, 11};
    const auto a = biased_split(data, spec);
    const auto b = biased_split(data, spec);
    CHECK(a.train_rows == b.train_rows);
    spec.seed = 12;
    CHECK(biased_split(data, spec).train_rows != a.train_rows);

    const auto match = evaluate_predicate(SelectionPredicate::parse("x3 >= 20"), data);
    std::size_t head_match = 0, kept_match = 0;
    for (std::size_t i = 0; i < 3000; ++i) head_match += match[i] ? 1 : 0;
    for (std::size_t i : a.train_rows) kept_match += match[i] ? 1 : 0;
    const double rate_match = static_cast<double>(kept_match) / head_match;
    const double rate_other = static_cast<double>(a.train_rows.size() - kept_match) / (3000 - head_match);
    CHECK(rate_match == doctest::Approx(0.9).epsilon(0.05));
    CHECK(rate_other == doctest::Approx(0.1).epsilon(0.3));
}

TEST_CASE("BiasSpec validation") {
    CHECK_THROWS_AS((BiasSpec{"x1 >= 0", 0.2, 0.5, 10, 0}.validate()), ValidationError);
    CHECK_THROWS_AS((BiasSpec{"", 1.0, 1.0, 10, 0}.validate()), ValidationError);
    const auto data = testing::synthetic_dataset(50, 1);
    CHECK_THROWS_AS(biased_split(data, BiasSpec{"x1 >= 0", 1.0, 1.0, 50, 0}), ValidationError);
}

TEST_CASE("encoded cache round-trips exactly") {
    const auto data = testing::synthetic_dataset(300, 2);
    const auto path = std::filesystem::temp_directory_path() / "fairshift_cache_test.csv";
    save_encoded_csv(data, path);
    const auto loaded = load_encoded_csv(path, data.blocks);
    CHECK(loaded == data);
    std::filesystem::remove(path);
}

TEST_CASE("subset and concatenate") {
    const auto data = testing::synthetic_dataset(20, 4);
    const auto first = data.subset({0, 1, 2});
    const auto rest = data.subset({3, 4});
    const auto both = concatenate(first, rest);
    CHECK(both == data.subset({0, 1, 2, 3, 4}));
}

TEST_CASE("predicates parse operators and multi-valued categories") {
    const auto p = SelectionPredicate::parse("income = <=50K");
    CHECK(p.column == "income");
    CHECK(p.op == CompareOp::eq);
    CHECK(p.values == std::vector<std::string>{"<=50K"});
    const auto q = SelectionPredicate::parse("color!=red|blue");
    CHECK(q.op == CompareOp::ne);
    CHECK(q.values.size() == 2);
    CHECK(SelectionPredicate::parse("x >= 10").op == CompareOp::ge);
    CHECK_THROWS_AS(SelectionPredicate::parse("no operator"), ValidationError);
}

TEST_CASE("numeric predicates compare original values") {
    const auto data = encode(parse_csv(kSmallCsv, small_schema()), small_schema());
    CHECK(evaluate_predicate(SelectionPredicate::parse("age >= 30"), data) == std::vector<bool>{false, true, true});
    CHECK(evaluate_predicate(SelectionPredicate::parse("age < 30"), data) == std::vector<bool>{true, false, false});
    CHECK(evaluate_predicate(SelectionPredicate::parse("job = farmer"), data) == std::vector<bool>{false, true, false});
    CHECK(evaluate_predicate(SelectionPredicate::parse("job != farmer|clerk"), data) ==
          std::vector<bool>{false, false, false});
    CHECK_THROWS_AS(evaluate_predicate(SelectionPredicate::parse("job < farmer"), data), ValidationError);
    CHECK_THROWS_AS(evaluate_predicate(SelectionPredicate::parse("height > 3"), data), ValidationError);
}

TEST_CASE("sample_discrete matches support probabilities and selection") {
    DiscreteDistributionSpec spec;
    spec.support = {{"u", 1, 1, 0.4}, {"u", 0, 0, 0.1}, {"v", 1, 0, 0.2}, {"v", 0, 1, 0.3}};
    spec.selection_prob = {{{"u", 1}, 0.9}, {{"u", 0}, 0.9}, {{"v", 1}, 0.2}, {{"v", 0}, 0.2}};
    spec.validate();
    const auto unbiased = sample_discrete(spec, 20000, false, 3);
    const auto biased = sample_discrete(spec, 20000, true, 3);
    REQUIRE(unbiased.size() == 20000);
    REQUIRE(biased.size() == 20000);
    CHECK(unbiased.feature_names == std::vector<std::string>{"x=u", "x=v", "bias"});

    auto share_u = [](const EncodedDataset& d) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) s += d.features(i, 0);
        return s / d.size();
    };
    CHECK(share_u(unbiased) == doctest::Approx(0.5).epsilon(0.03));
    // Under selection: 0.5 * 0.9 / (0.5 * 0.9 + 0.5 * 0.2)
    CHECK(share_u(biased) == doctest::Approx(0.45 / 0.55).epsilon(0.03));
    CHECK_THROWS_AS(sample_discrete(spec, 0, false, 1), ValidationError);
}

TEST_CASE("unit_uniform uses the top 53 bits") {
    CHECK(unit_uniform(0) == 0.0);
    CHECK(unit_uniform(~std::uint64_t{0}) < 1.0);
    CHECK(unit_uniform(std::uint64_t{1} << 63) == 0.5);
}
