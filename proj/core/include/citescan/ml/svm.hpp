#pragma once

#include <cstddef>
#include <vector>

namespace citescan::ml {

/// Maximum-margin linear binary classifier: hinge loss with quadratic
/// regularization, trained by dual coordinate descent. The bias term is
/// an augmented (regularized) feature. Deterministic.
class LinearSvm {
public:
    struct Params {
        double c = 1.0;
        int max_iter = 1000;  // passes over the data
        double tol = 1e-4;
    };

    void fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
             const Params& params);
    void fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
        fit(x, y, Params());
    }
    int predict(const std::vector<double>& x) const;
    double decision(const std::vector<double>& x) const;

    const std::vector<double>& weights() const { return w_; }
    double bias() const { return b_; }

private:
    std::vector<double> w_;
    double b_ = 0.0;
};

}  // namespace citescan::ml
