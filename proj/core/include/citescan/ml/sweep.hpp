#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citescan/ml/dataset.hpp"

namespace citescan::ml {

enum class Algorithm { SVM, RANDOM_FOREST };
const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

using SubsetMask = std::uint32_t;

/// All non-empty subsets of m metrics, ascending mask order, 2^m - 1 of
/// them. Bit i corresponds to metric i. m is capped at 24.
std::vector<SubsetMask> enumerate_subsets(int m);

std::string mask_to_string(SubsetMask mask, int m);  // metric 0 leftmost

struct SweepPlan {
    int m = 0;
    std::vector<Algorithm> algorithms = {Algorithm::SVM, Algorithm::RANDOM_FOREST};
    int k_folds = 10;
    std::uint64_t seed = 0;
    double f1_gate = 0.7;
    double hi_threshold = 0.50;
    double lo_threshold = 0.35;
    int n_trees = 100;
    double svm_c = 1.0;
    int svm_max_iter = 1000;
    double svm_tol = 1e-4;
    int threads = 1;

    std::uint64_t combinations_total() const { return (std::uint64_t{1} << m) - 1; }
    void validate() const;
};

struct EvalResult {
    SubsetMask subset = 0;
    Algorithm algorithm = Algorithm::SVM;
    std::vector<double> fold_f1;
    double weighted_f1 = 0.0;  // mean of fold scores
    int degenerate_folds = 0;  // folds whose training split had one class
};

/// Cross-validated evaluation of one (subset, algorithm) pair. Inside each
/// fold: project features, oversample the training split only, standardize
/// on the oversampled training split, fit, score weighted F1 on the
/// untouched test fold.
EvalResult train_eval(SubsetMask subset, Algorithm algorithm, const FeatureMatrix& matrix,
                      const SweepPlan& plan);

/// One EvalResult per (subset, algorithm), mask ascending then algorithm
/// order as listed in the plan. Parallelizes over pairs when plan.threads
/// > 1; output order and content are independent of thread count.
std::vector<EvalResult> sweep(const FeatureMatrix& matrix, const SweepPlan& plan);

enum class Verdict { SIGNIFICANT, NEUTRAL, IRRELEVANT };
const char* to_string(Verdict v);

struct MetricUsage {
    std::string metric;
    double usage_fraction = 0.0;
    Verdict verdict = Verdict::NEUTRAL;
};

struct SignificanceReport {
    int good_classifier_count = 0;
    bool none_passed = false;
    std::vector<MetricUsage> pooled;
    std::map<std::string, std::pair<int, std::vector<MetricUsage>>> per_algorithm;
};

/// Usage fractions over the classifiers whose weighted F1 meets the gate,
/// with the >hi / <lo verdict rule. The pooled report (all algorithms
/// together) is the primary output; per-algorithm sub-reports included.
SignificanceReport significance(const std::vector<EvalResult>& results,
                                const std::vector<std::string>& metric_names,
                                const SweepPlan& plan);

void save_results_csv(const std::vector<EvalResult>& results, const SweepPlan& plan,
                      const std::filesystem::path& path);
std::vector<EvalResult> load_results_csv(const std::filesystem::path& path, int* k_folds_out);

void save_significance_json(const SignificanceReport& report, const SweepPlan& plan,
                            const std::filesystem::path& path);

}  // namespace citescan::ml
