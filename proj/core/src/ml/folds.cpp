#include "citescan/ml/folds.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

#include "citescan/rng.hpp"

namespace citescan::ml {

std::vector<int> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (const auto& [cls, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k)) {
            throw std::invalid_argument("stratified_folds: class " + std::to_string(cls) +
                                        " has fewer members than folds");
        }
    }

    Rng rng(mix_seed(seed, 0x5f01d5u));
    std::vector<int> assignment(labels.size(), -1);
    // Deal each class round-robin; the fold cursor continues across classes
    // so total fold sizes stay within 1 of each other.
    int cursor = 0;
    for (auto& [cls, members] : by_class) {
        rng.shuffle(members);
        for (std::size_t row : members) {
            assignment[row] = cursor;
            cursor = (cursor + 1) % k;
        }
    }
    return assignment;
}

std::vector<std::size_t> oversample(const std::vector<std::size_t>& rows,
                                    const std::vector<int>& labels, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t r : rows) (labels.at(r) == 1 ? pos : neg).push_back(r);
    if (pos.empty() || neg.empty()) {
        throw std::invalid_argument("oversample: both classes required");
    }

    std::vector<std::size_t> out = rows;
    const auto& minority = pos.size() < neg.size() ? pos : neg;
    std::size_t deficit = std::max(pos.size(), neg.size()) - minority.size();
    Rng rng(mix_seed(seed, 0x05e7u));
    for (std::size_t i = 0; i < deficit; ++i) {
        out.push_back(minority[rng.below(minority.size())]);
    }
    return out;
}

double weighted_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("weighted_f1: length mismatch");
    }
    if (y_true.empty()) throw std::invalid_argument("weighted_f1: empty input");

    std::map<int, std::array<std::size_t, 3>> stats;  // class -> {tp, fp, fn}
    std::map<int, std::size_t> support;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        ++support[y_true[i]];
        stats.try_emplace(y_true[i]);
        stats.try_emplace(y_pred[i]);
        if (y_true[i] == y_pred[i]) {
            ++stats[y_true[i]][0];
        } else {
            ++stats[y_pred[i]][1];
            ++stats[y_true[i]][2];
        }
    }
    double sum = 0.0;
    for (const auto& [cls, n] : support) {
        auto [tp, fp, fn] = stats[cls];
        double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        double r = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        double f1 = (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
        sum += f1 * static_cast<double>(n);
    }
    return sum / static_cast<double>(y_true.size());
}

}  // namespace citescan::ml
