#pragma once

#include <cstdint>
#include <vector>

#include "citescan/rng.hpp"

namespace citescan::ml {

/// Random forest of CART-style trees: Gini impurity, bootstrap resamples,
/// ceil(sqrt(d)) candidate features per split, no depth limit, leaf
/// minimum 1, majority vote (ties to label 0). Deterministic given seed.
class RandomForest {
public:
    struct Params {
        int n_trees = 100;
        std::uint64_t seed = 0;
    };

    void fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
             const Params& params);
    int predict(const std::vector<double>& x) const;

private:
    struct Node {
        int feature = -1;      // -1 for leaves
        double threshold = 0.0;
        int left = -1, right = -1;
        int label = 0;
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    int build_node(Tree& tree, const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, std::vector<std::size_t>& samples,
                   std::size_t begin, std::size_t end, int mtry, Rng& rng);

    std::vector<Tree> trees_;
};

}  // namespace citescan::ml
