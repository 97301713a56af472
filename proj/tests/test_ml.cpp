#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <unistd.h>

#include "citescan/ml/folds.hpp"
#include "citescan/ml/forest.hpp"
#include "citescan/ml/svm.hpp"
#include "citescan/ml/sweep.hpp"
#include "citescan/synth.hpp"

using namespace citescan;
using namespace citescan::ml;
namespace fs = std::filesystem;

namespace {

// Single feature, perfectly separable around zero.
FeatureMatrix separable_matrix(int n) {
    FeatureMatrix m;
    m.metric_names = {"f0"};
    Rng rng(5);
    for (int i = 0; i < n; ++i) {
        int label = i % 2;
        double v = (label ? 1.0 : -1.0) * (1.0 + rng.uniform() * 3.0);
        m.rows.push_back({"r" + std::to_string(i), {v}, label});
    }
    return m;
}

EvalResult make_result(SubsetMask mask, Algorithm alg, double wf1) {
    EvalResult r;
    r.subset = mask;
    r.algorithm = alg;
    r.weighted_f1 = wf1;
    r.fold_f1 = {wf1, wf1};
    return r;
}

}  // namespace

TEST_CASE("enumerate_subsets") {
    auto s3 = enumerate_subsets(3);
    CHECK(s3 == std::vector<SubsetMask>{1, 2, 3, 4, 5, 6, 7});
    CHECK(enumerate_subsets(1) == std::vector<SubsetMask>{1});
    CHECK(enumerate_subsets(11).size() == 2047);
    CHECK_THROWS_AS(enumerate_subsets(0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_subsets(25), std::invalid_argument);

    // each metric participates in exactly half of the non-empty subsets + ...
    for (int bit = 0; bit < 3; ++bit) {
        int count = 0;
        for (SubsetMask m : s3) {
            if (m & (1u << bit)) ++count;
        }
        CHECK(count == 4);  // 2^(m-1)
    }
}

TEST_CASE("mask_to_string renders metric 0 leftmost") {
    CHECK(mask_to_string(0b001, 3) == "100");
    CHECK(mask_to_string(0b101, 3) == "101");
    CHECK(mask_to_string(0b111, 3) == "111");
    CHECK(mask_to_string(0b10000000000, 11) == "00000000001");
}

TEST_CASE("stratified folds balance classes and are deterministic") {
    std::vector<int> labels = {1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
    auto folds = stratified_folds(labels, 2, 7);
    REQUIRE(folds.size() == labels.size());
    std::map<int, std::map<int, int>> per_fold;  // fold -> class -> count
    for (std::size_t i = 0; i < labels.size(); ++i) ++per_fold[folds[i]][labels[i]];
    REQUIRE(per_fold.size() == 2);
    for (auto& [fold, counts] : per_fold) {
        CHECK(counts[1] == 2);
        CHECK(counts[0] == 3);
    }

    CHECK(stratified_folds(labels, 2, 7) == folds);

    CHECK_THROWS_AS(stratified_folds(labels, 1, 7), std::invalid_argument);
    CHECK_THROWS_AS(stratified_folds(labels, 5, 7), std::invalid_argument);  // class 1 has 4
}

TEST_CASE("fold sizes stay within one of n/k on random labelings") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 20 + static_cast<int>(rng.below(60));
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) labels.push_back(i < 5 || rng.chance(0.4) ? 1 : 0);
        int ones = static_cast<int>(std::count(labels.begin(), labels.end(), 1));
        int k = 2 + static_cast<int>(rng.below(3));
        if (ones < k || n - ones < k) continue;
        auto folds = stratified_folds(labels, k, trial);
        std::vector<int> sizes(k, 0);
        for (int f : folds) ++sizes[f];
        auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        CHECK(*hi - *lo <= 1);
    }
}

TEST_CASE("oversample balances classes without dropping rows") {
    std::vector<std::size_t> rows;
    std::vector<int> labels(40, 0);
    for (int i = 0; i < 40; ++i) rows.push_back(i);
    for (int i = 0; i < 10; ++i) labels[i] = 1;

    auto out = oversample(rows, labels, 99);
    CHECK(out.size() == 60);
    int ones = 0;
    for (auto idx : out) {
        if (labels[idx] == 1) ++ones;
    }
    CHECK(ones == 30);
    for (auto idx : rows) {
        CHECK(std::find(out.begin(), out.end(), idx) != out.end());
    }

    std::vector<int> single(4, 1);
    CHECK_THROWS_AS(oversample({0, 1, 2, 3}, single, 0), std::invalid_argument);
}

TEST_CASE("weighted F1 spot values") {
    CHECK(weighted_f1({0, 1, 0, 1}, {0, 1, 0, 1}) == doctest::Approx(1.0));
    CHECK(weighted_f1({0, 1}, {1, 0}) == doctest::Approx(0.0));
    // class 1: P=2/3 R=1 F1=0.8; class 0: P=1 R=0.5 F1=2/3; equal support
    CHECK(weighted_f1({0, 0, 1, 1}, {0, 1, 1, 1}) == doctest::Approx((0.8 + 2.0 / 3.0) / 2.0));
    // class never predicted scores 0
    CHECK(weighted_f1({0, 0, 1}, {0, 0, 0}) == doctest::Approx((2.0 * 0.8) / 3.0));
}

TEST_CASE("linear SVM separates a 2-d problem") {
    std::vector<std::vector<double>> x = {{-2, -1}, {-1.5, -2}, {-1, -1}, {2, 1}, {1.5, 2}, {1, 1}};
    std::vector<int> y = {0, 0, 0, 1, 1, 1};
    LinearSvm svm;
    svm.fit(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(svm.predict(x[i]) == y[i]);
    CHECK(svm.predict({3, 3}) == 1);
    CHECK(svm.predict({-3, -3}) == 0);
}

TEST_CASE("random forest fits a separable problem deterministically") {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        int label = i % 2;
        x.push_back({(label ? 1.0 : -1.0) * (0.5 + rng.uniform()), rng.uniform()});
        y.push_back(label);
    }
    RandomForest a, b;
    a.fit(x, y, {.n_trees = 25, .seed = 9});
    b.fit(x, y, {.n_trees = 25, .seed = 9});
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(a.predict(x[i]) == y[i]);
        CHECK(a.predict(x[i]) == b.predict(x[i]));
    }
}

TEST_CASE("train_eval reaches F1 1.0 on a separable fixture with both algorithms") {
    FeatureMatrix matrix = separable_matrix(40);
    SweepPlan plan;
    plan.m = 1;
    plan.k_folds = 4;
    plan.seed = 17;
    plan.n_trees = 25;

    for (Algorithm alg : {Algorithm::SVM, Algorithm::RANDOM_FOREST}) {
        EvalResult r = train_eval(1, alg, matrix, plan);
        CHECK(r.weighted_f1 == doctest::Approx(1.0));
        CHECK(r.fold_f1.size() == 4);
        CHECK(r.degenerate_folds == 0);
    }
}

TEST_CASE("train_eval tolerates constant features") {
    FeatureMatrix matrix;
    matrix.metric_names = {"c"};
    for (int i = 0; i < 20; ++i) matrix.rows.push_back({"r" + std::to_string(i), {5.0}, i % 2});
    SweepPlan plan;
    plan.m = 1;
    plan.k_folds = 4;
    plan.n_trees = 10;
    EvalResult r = train_eval(1, Algorithm::SVM, matrix, plan);
    CHECK(r.weighted_f1 >= 0.0);
    CHECK(r.weighted_f1 <= 1.0);
}

TEST_CASE("train_eval is deterministic") {
    FeatureMatrix matrix = planted_signal_matrix(80, 4);
    SweepPlan plan;
    plan.m = static_cast<int>(matrix.n_features());
    plan.k_folds = 5;
    plan.seed = 21;
    plan.n_trees = 15;
    EvalResult a = train_eval(0b110000000, Algorithm::RANDOM_FOREST, matrix, plan);
    EvalResult b = train_eval(0b110000000, Algorithm::RANDOM_FOREST, matrix, plan);
    CHECK(a.fold_f1 == b.fold_f1);
    CHECK(a.weighted_f1 == b.weighted_f1);
}

TEST_CASE("sweep covers every pair in canonical order, independent of threads") {
    FeatureMatrix matrix = separable_matrix(40);
    matrix.metric_names = {"f0", "f1", "f2"};
    Rng rng(8);
    for (auto& row : matrix.rows) {
        row.x.push_back(rng.uniform());
        row.x.push_back(rng.uniform());
    }
    SweepPlan plan;
    plan.m = 3;
    plan.k_folds = 4;
    plan.seed = 33;
    plan.n_trees = 10;

    auto serial = sweep(matrix, plan);
    REQUIRE(serial.size() == 14);  // 7 subsets x 2 algorithms
    for (std::size_t i = 0; i + 2 < serial.size(); i += 2) {
        CHECK(serial[i].subset == serial[i + 1].subset);
        CHECK(serial[i].subset < serial[i + 2].subset);
        CHECK(serial[i].algorithm == Algorithm::SVM);
        CHECK(serial[i + 1].algorithm == Algorithm::RANDOM_FOREST);
    }

    plan.threads = 4;
    auto parallel = sweep(matrix, plan);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(parallel[i].subset == serial[i].subset);
        CHECK(parallel[i].fold_f1 == serial[i].fold_f1);
    }
}

TEST_CASE("significance verdicts from usage fractions") {
    SweepPlan plan;
    plan.m = 3;
    std::vector<std::string> names = {"a", "b", "c"};
    std::vector<EvalResult> results = {
        make_result(0b001, Algorithm::SVM, 0.9),            // good, uses a
        make_result(0b011, Algorithm::SVM, 0.8),            // good, uses a b
        make_result(0b101, Algorithm::RANDOM_FOREST, 0.75), // good, uses a c
        make_result(0b100, Algorithm::RANDOM_FOREST, 0.7),  // good, uses c
        make_result(0b010, Algorithm::SVM, 0.2),            // below the gate
    };
    SignificanceReport report = significance(results, names, plan);
    CHECK(report.good_classifier_count == 4);
    CHECK_FALSE(report.none_passed);
    REQUIRE(report.pooled.size() == 3);
    CHECK(report.pooled[0].usage_fraction == doctest::Approx(0.75));
    CHECK(report.pooled[0].verdict == Verdict::SIGNIFICANT);
    CHECK(report.pooled[1].usage_fraction == doctest::Approx(0.25));
    CHECK(report.pooled[1].verdict == Verdict::IRRELEVANT);
    CHECK(report.pooled[2].usage_fraction == doctest::Approx(0.5));
    CHECK(report.pooled[2].verdict == Verdict::NEUTRAL);

    CHECK(report.per_algorithm.at("svm").first == 2);
    CHECK(report.per_algorithm.at("random_forest").first == 2);
}

TEST_CASE("significance with no passing classifier is all neutral") {
    SweepPlan plan;
    plan.m = 2;
    std::vector<EvalResult> results = {
        make_result(0b01, Algorithm::SVM, 0.1),
        make_result(0b10, Algorithm::SVM, 0.2),
    };
    SignificanceReport report = significance(results, {"a", "b"}, plan);
    CHECK(report.good_classifier_count == 0);
    CHECK(report.none_passed);
    for (const auto& usage : report.pooled) {
        CHECK(usage.usage_fraction == 0.0);
        CHECK(usage.verdict == Verdict::NEUTRAL);
    }
}

TEST_CASE("raising the gate never grows the good set") {
    std::vector<EvalResult> results;
    Rng rng(41);
    for (SubsetMask m = 1; m <= 15; ++m) {
        results.push_back(make_result(m, Algorithm::SVM, rng.uniform()));
    }
    SweepPlan plan;
    plan.m = 4;
    std::vector<std::string> names = {"a", "b", "c", "d"};
    int prev = static_cast<int>(results.size()) + 1;
    for (double gate : {0.0, 0.3, 0.6, 0.9, 1.01}) {
        plan.f1_gate = gate;
        int good = significance(results, names, plan).good_classifier_count;
        CHECK(good <= prev);
        prev = good;
    }
}

TEST_CASE("sweep results CSV round-trips") {
    FeatureMatrix matrix = separable_matrix(24);
    SweepPlan plan;
    plan.m = 1;
    plan.k_folds = 3;
    plan.n_trees = 10;
    auto results = sweep(matrix, plan);

    fs::path path = fs::temp_directory_path() /
                    ("citescan_ml_" + std::to_string(::getpid()) + ".csv");
    save_results_csv(results, plan, path);
    int k = 0;
    auto loaded = load_results_csv(path, &k);
    fs::remove(path);

    CHECK(k == 3);
    REQUIRE(loaded.size() == results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(loaded[i].subset == results[i].subset);
        CHECK(loaded[i].algorithm == results[i].algorithm);
        CHECK(loaded[i].fold_f1 == results[i].fold_f1);
        CHECK(loaded[i].weighted_f1 == results[i].weighted_f1);
        CHECK(loaded[i].degenerate_folds == results[i].degenerate_folds);
    }
}

TEST_CASE("planted signal matrix obeys its labeling rule") {
    FeatureMatrix m = planted_signal_matrix(100, 12);
    REQUIRE(m.metric_names.size() == 11);
    CHECK(m.metric_names[7] == "bc");
    CHECK(m.metric_names[8] == "cc");
    int pass = 0;
    for (const auto& row : m.rows) {
        REQUIRE(row.x.size() == 11);
        CHECK(row.label == (row.x[7] + row.x[8] > 30.0 ? 1 : 0));
        pass += row.label;
    }
    // both classes well represented
    CHECK(pass > 20);
    CHECK(pass < 80);
    m.validate_for_training();
}

TEST_CASE("metrics CSV loader rejects unknown labels") {
    fs::path path = fs::temp_directory_path() /
                    ("citescan_mlcsv_" + std::to_string(::getpid()) + ".csv");
    {
        std::ofstream out(path);
        out << "candidate_id,section,m1,m2,label\nC1,A,1,2,pass\nC2,B,3,4,fail\n";
    }
    FeatureMatrix m = load_metrics_csv(path);
    REQUIRE(m.rows.size() == 2);
    CHECK(m.metric_names == std::vector<std::string>{"m1", "m2"});
    CHECK(m.rows[0].label == 1);
    CHECK(m.rows[1].label == 0);
    CHECK(m.rows[1].x == std::vector<double>{3.0, 4.0});

    {
        std::ofstream out(path);
        out << "candidate_id,section,m1,label\nC1,A,1,maybe\n";
    }
    CHECK_THROWS(load_metrics_csv(path));
    fs::remove(path);
}
