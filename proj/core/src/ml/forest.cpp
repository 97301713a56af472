#include "citescan/ml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace citescan::ml {

namespace {

int majority_label(const std::vector<int>& y, const std::vector<std::size_t>& samples,
                   std::size_t begin, std::size_t end) {
    std::size_t ones = 0;
    for (std::size_t i = begin; i < end; ++i) ones += static_cast<std::size_t>(y[samples[i]]);
    std::size_t zeros = (end - begin) - ones;
    return ones > zeros ? 1 : 0;  // ties to label 0
}

double gini(std::size_t ones, std::size_t total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(ones) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

}  // namespace

int RandomForest::build_node(Tree& tree, const std::vector<std::vector<double>>& x,
                             const std::vector<int>& y, std::vector<std::size_t>& samples,
                             std::size_t begin, std::size_t end, int mtry, Rng& rng) {
    const std::size_t n = end - begin;
    std::size_t ones = 0;
    for (std::size_t i = begin; i < end; ++i) ones += static_cast<std::size_t>(y[samples[i]]);

    auto make_leaf = [&](int label) {
        Node leaf;
        leaf.label = label;
        tree.nodes.push_back(leaf);
        return static_cast<int>(tree.nodes.size() - 1);
    };
    if (ones == 0) return make_leaf(0);
    if (ones == n) return make_leaf(1);

    // draw mtry distinct candidate features, searched in draw order
    const int d = static_cast<int>(x[0].size());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    for (int i = 0; i < mtry && i < d; ++i) {
        std::size_t j = static_cast<std::size_t>(i) +
                        rng.below(static_cast<std::uint64_t>(d - i));
        std::swap(features[static_cast<std::size_t>(i)], features[j]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = gini(ones, n);
    std::vector<std::pair<double, int>> vals(n);

    for (int fi = 0; fi < mtry && fi < d; ++fi) {
        int f = features[static_cast<std::size_t>(fi)];
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t row = samples[begin + i];
            vals[i] = {x[row][static_cast<std::size_t>(f)], y[row]};
        }
        std::sort(vals.begin(), vals.end());
        std::size_t left_n = 0, left_ones = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            ++left_n;
            left_ones += static_cast<std::size_t>(vals[i].second);
            if (vals[i].first == vals[i + 1].first) continue;
            double impurity =
                (static_cast<double>(left_n) * gini(left_ones, left_n) +
                 static_cast<double>(n - left_n) * gini(ones - left_ones, n - left_n)) /
                static_cast<double>(n);
            if (impurity < best_impurity - 1e-12) {
                best_impurity = impurity;
                best_feature = f;
                best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
            }
        }
    }

    if (best_feature < 0) return make_leaf(majority_label(y, samples, begin, end));

    auto mid_it = std::partition(samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                 samples.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](std::size_t row) {
                                     return x[row][static_cast<std::size_t>(best_feature)] <=
                                            best_threshold;
                                 });
    std::size_t mid = static_cast<std::size_t>(mid_it - samples.begin());
    if (mid == begin || mid == end) return make_leaf(majority_label(y, samples, begin, end));

    Node node;
    node.feature = best_feature;
    node.threshold = best_threshold;
    tree.nodes.push_back(node);
    int index = static_cast<int>(tree.nodes.size() - 1);
    int left = build_node(tree, x, y, samples, begin, mid, mtry, rng);
    int right = build_node(tree, x, y, samples, mid, end, mtry, rng);
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    tree.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

void RandomForest::fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                       const Params& params) {
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) throw std::invalid_argument("RandomForest::fit: bad input");
    const int d = static_cast<int>(x[0].size());
    const int mtry = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)))));

    trees_.clear();
    trees_.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(t), 0x7265e5u));
        std::vector<std::size_t> samples(n);
        for (auto& s : samples) s = rng.below(n);  // bootstrap resample
        Tree tree;
        build_node(tree, x, y, samples, 0, n, mtry, rng);
        trees_.push_back(std::move(tree));
    }
}

int RandomForest::predict(const std::vector<double>& x) const {
    std::size_t votes = 0;
    for (const Tree& tree : trees_) {
        int i = 0;
        while (tree.nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const Node& node = tree.nodes[static_cast<std::size_t>(i)];
            i = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                            : node.right;
        }
        votes += static_cast<std::size_t>(tree.nodes[static_cast<std::size_t>(i)].label);
    }
    return 2 * votes > trees_.size() ? 1 : 0;
}

}  // namespace citescan::ml
