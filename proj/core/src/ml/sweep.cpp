#include "citescan/ml/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "citescan/ml/folds.hpp"
#include "citescan/ml/forest.hpp"
#include "citescan/ml/svm.hpp"
#include "citescan/rng.hpp"

namespace citescan::ml {

using nlohmann::json;

const char* to_string(Algorithm a) {
    return a == Algorithm::SVM ? "svm" : "random_forest";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "svm") return Algorithm::SVM;
    if (s == "random_forest" || s == "rf") return Algorithm::RANDOM_FOREST;
    throw std::invalid_argument("unknown algorithm: " + s);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::SIGNIFICANT: return "significant";
        case Verdict::NEUTRAL: return "neutral";
        case Verdict::IRRELEVANT: return "irrelevant";
    }
    return "neutral";
}

std::vector<SubsetMask> enumerate_subsets(int m) {
    if (m < 1 || m > 24) throw std::invalid_argument("enumerate_subsets: m must be in [1, 24]");
    std::vector<SubsetMask> masks;
    masks.reserve((std::size_t{1} << m) - 1);
    for (SubsetMask mask = 1; mask < (SubsetMask{1} << m); ++mask) masks.push_back(mask);
    return masks;
}

std::string mask_to_string(SubsetMask mask, int m) {
    std::string s(static_cast<std::size_t>(m), '0');
    for (int i = 0; i < m; ++i) {
        if (mask & (SubsetMask{1} << i)) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

void SweepPlan::validate() const {
    if (m < 1 || m > 24) throw std::invalid_argument("sweep plan: m must be in [1, 24]");
    if (algorithms.empty()) throw std::invalid_argument("sweep plan: no algorithms");
    if (k_folds < 2) throw std::invalid_argument("sweep plan: k_folds must be >= 2");
    if (!(0.0 <= lo_threshold && lo_threshold < hi_threshold && hi_threshold <= 1.0)) {
        throw std::invalid_argument("sweep plan: thresholds must satisfy 0 <= lo < hi <= 1");
    }
    if (n_trees < 1) throw std::invalid_argument("sweep plan: n_trees must be >= 1");
    if (threads < 1) throw std::invalid_argument("sweep plan: threads must be >= 1");
}

namespace {

std::vector<int> subset_features(SubsetMask mask, int m) {
    std::vector<int> out;
    for (int i = 0; i < m; ++i) {
        if (mask & (SubsetMask{1} << i)) out.push_back(i);
    }
    return out;
}

std::vector<double> project(const FeatureRow& row, const std::vector<int>& features) {
    std::vector<double> x;
    x.reserve(features.size());
    for (int f : features) x.push_back(row.x[static_cast<std::size_t>(f)]);
    return x;
}

}  // namespace

EvalResult train_eval(SubsetMask subset, Algorithm algorithm, const FeatureMatrix& matrix,
                      const SweepPlan& plan) {
    plan.validate();
    matrix.validate_for_training();
    if (subset == 0 || subset >= (SubsetMask{1} << plan.m)) {
        throw std::invalid_argument("train_eval: subset mask out of range");
    }

    const std::vector<int> labels = matrix.labels();
    const std::vector<int> features = subset_features(subset, plan.m);
    // fold assignment is shared across all subsets and algorithms
    const std::vector<int> folds = stratified_folds(labels, plan.k_folds, plan.seed);

    EvalResult result;
    result.subset = subset;
    result.algorithm = algorithm;

    for (int f = 0; f < plan.k_folds; ++f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            (folds[i] == f ? test_idx : train_idx).push_back(i);
        }

        std::vector<int> y_test;
        for (std::size_t i : test_idx) y_test.push_back(labels[i]);

        bool has_pass = false, has_fail = false;
        for (std::size_t i : train_idx) (labels[i] == 1 ? has_pass : has_fail) = true;
        if (!has_pass || !has_fail) {
            // degenerate fold: score a majority-vote baseline and flag it
            ++result.degenerate_folds;
            int majority = has_pass ? 1 : 0;
            std::vector<int> y_pred(y_test.size(), majority);
            result.fold_f1.push_back(weighted_f1(y_test, y_pred));
            continue;
        }

        std::uint64_t fold_seed = mix_seed(plan.seed, subset,
                                           static_cast<std::uint64_t>(algorithm),
                                           static_cast<std::uint64_t>(f));
        std::vector<std::size_t> train_os = oversample(train_idx, labels, fold_seed);

        std::vector<std::vector<double>> x_train;
        std::vector<int> y_train;
        x_train.reserve(train_os.size());
        for (std::size_t i : train_os) {
            x_train.push_back(project(matrix.rows[i], features));
            y_train.push_back(labels[i]);
        }

        // per-fold standardization fitted on the oversampled training split
        const std::size_t d = features.size();
        std::vector<double> mean(d, 0.0), sd(d, 0.0);
        for (const auto& x : x_train) {
            for (std::size_t j = 0; j < d; ++j) mean[j] += x[j];
        }
        for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(x_train.size());
        for (const auto& x : x_train) {
            for (std::size_t j = 0; j < d; ++j) sd[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
        }
        for (std::size_t j = 0; j < d; ++j) {
            sd[j] = std::sqrt(sd[j] / static_cast<double>(x_train.size()));
            if (sd[j] == 0.0) sd[j] = 1.0;
        }
        auto standardize = [&](std::vector<double>& x) {
            for (std::size_t j = 0; j < d; ++j) x[j] = (x[j] - mean[j]) / sd[j];
        };
        for (auto& x : x_train) standardize(x);

        std::vector<int> y_pred;
        y_pred.reserve(test_idx.size());
        if (algorithm == Algorithm::SVM) {
            LinearSvm svm;
            svm.fit(x_train, y_train, {plan.svm_c, plan.svm_max_iter, plan.svm_tol});
            for (std::size_t i : test_idx) {
                auto x = project(matrix.rows[i], features);
                standardize(x);
                y_pred.push_back(svm.predict(x));
            }
        } else {
            RandomForest forest;
            forest.fit(x_train, y_train, {plan.n_trees, mix_seed(fold_seed, 0xf02e57u)});
            for (std::size_t i : test_idx) {
                auto x = project(matrix.rows[i], features);
                standardize(x);
                y_pred.push_back(forest.predict(x));
            }
        }
        result.fold_f1.push_back(weighted_f1(y_test, y_pred));
    }

    result.weighted_f1 = std::accumulate(result.fold_f1.begin(), result.fold_f1.end(), 0.0) /
                         static_cast<double>(result.fold_f1.size());
    return result;
}

std::vector<EvalResult> sweep(const FeatureMatrix& matrix, const SweepPlan& plan) {
    plan.validate();
    const auto masks = enumerate_subsets(plan.m);

    struct Task {
        SubsetMask mask;
        Algorithm algorithm;
    };
    std::vector<Task> tasks;
    tasks.reserve(masks.size() * plan.algorithms.size());
    for (SubsetMask mask : masks) {
        for (Algorithm a : plan.algorithms) tasks.push_back({mask, a});
    }

    std::vector<EvalResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            std::size_t t = next.fetch_add(1);
            if (t >= tasks.size() || failed.load()) break;
            try {
                results[t] = train_eval(tasks[t].mask, tasks[t].algorithm, matrix, plan);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_message = e.what();
                failed.store(true);
                break;
            }
        }
    };

    int n_threads = std::min<int>(plan.threads, static_cast<int>(tasks.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error("sweep failed: " + error_message);
    return results;
}

SignificanceReport significance(const std::vector<EvalResult>& results,
                                const std::vector<std::string>& metric_names,
                                const SweepPlan& plan) {
    auto usage_over = [&](const std::vector<const EvalResult*>& good) {
        std::vector<MetricUsage> usages;
        for (std::size_t i = 0; i < metric_names.size(); ++i) {
            MetricUsage u;
            u.metric = metric_names[i];
            if (!good.empty()) {
                std::size_t used = 0;
                for (const EvalResult* r : good) {
                    if (r->subset & (SubsetMask{1} << i)) ++used;
                }
                u.usage_fraction = static_cast<double>(used) / static_cast<double>(good.size());
                if (u.usage_fraction > plan.hi_threshold) u.verdict = Verdict::SIGNIFICANT;
                else if (u.usage_fraction < plan.lo_threshold) u.verdict = Verdict::IRRELEVANT;
                else u.verdict = Verdict::NEUTRAL;
            }
            usages.push_back(std::move(u));
        }
        return usages;
    };

    SignificanceReport report;
    std::vector<const EvalResult*> good;
    for (const auto& r : results) {
        if (r.weighted_f1 >= plan.f1_gate) good.push_back(&r);
    }
    report.good_classifier_count = static_cast<int>(good.size());
    report.none_passed = good.empty();
    report.pooled = usage_over(good);

    for (Algorithm a : plan.algorithms) {
        std::vector<const EvalResult*> sub;
        for (const EvalResult* r : good) {
            if (r->algorithm == a) sub.push_back(r);
        }
        report.per_algorithm[to_string(a)] = {static_cast<int>(sub.size()), usage_over(sub)};
    }
    return report;
}

// ---- serialization ---------------------------------------------------------

namespace {
std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void save_results_csv(const std::vector<EvalResult>& results, const SweepPlan& plan,
                      const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "mask,algorithm";
    for (int f = 0; f < plan.k_folds; ++f) out << ",fold_" << f;
    out << ",weighted_f1,degenerate_folds\n";
    for (const auto& r : results) {
        out << mask_to_string(r.subset, plan.m) << "," << to_string(r.algorithm);
        for (double f1 : r.fold_f1) out << "," << fmt_double(f1);
        out << "," << fmt_double(r.weighted_f1) << "," << r.degenerate_folds << "\n";
    }
}

std::vector<EvalResult> load_results_csv(const std::filesystem::path& path, int* k_folds_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty results file: " + path.string());
    std::size_t n_cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    int k = static_cast<int>(n_cols) - 4;
    if (k < 1) throw std::runtime_error("unexpected results header in " + path.string());
    if (k_folds_out) *k_folds_out = k;

    std::vector<EvalResult> results;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        EvalResult r;
        std::getline(ss, field, ',');
        for (std::size_t i = 0; i < field.size(); ++i) {
            if (field[i] == '1') r.subset |= SubsetMask{1} << i;
        }
        std::getline(ss, field, ',');
        r.algorithm = algorithm_from_string(field);
        for (int f = 0; f < k; ++f) {
            std::getline(ss, field, ',');
            r.fold_f1.push_back(std::stod(field));
        }
        std::getline(ss, field, ',');
        r.weighted_f1 = std::stod(field);
        std::getline(ss, field, ',');
        r.degenerate_folds = std::stoi(field);
        results.push_back(std::move(r));
    }
    return results;
}

void save_significance_json(const SignificanceReport& report, const SweepPlan& plan,
                            const std::filesystem::path& path) {
    auto usages_to_json = [](const std::vector<MetricUsage>& usages) {
        json arr = json::array();
        for (const auto& u : usages) {
            arr.push_back({{"metric", u.metric},
                           {"usage_fraction", u.usage_fraction},
                           {"verdict", to_string(u.verdict)}});
        }
        return arr;
    };

    json j;
    j["f1_gate"] = plan.f1_gate;
    j["hi_threshold"] = plan.hi_threshold;
    j["lo_threshold"] = plan.lo_threshold;
    j["good_classifier_count"] = report.good_classifier_count;
    j["no_classifier_passed_gate"] = report.none_passed;
    j["pooled"] = usages_to_json(report.pooled);
    json per = json::object();
    for (const auto& [algo, sub] : report.per_algorithm) {
        per[algo] = {{"good_classifier_count", sub.first}, {"usage", usages_to_json(sub.second)}};
    }
    j["per_algorithm"] = per;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace citescan::ml
