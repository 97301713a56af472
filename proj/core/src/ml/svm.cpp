#include "citescan/ml/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace citescan::ml {

// Dual coordinate descent for L1-hinge SVM (alpha_i in [0, C]); fixed
// visiting order so the fit is fully deterministic.
void LinearSvm::fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    const Params& params) {
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) throw std::invalid_argument("LinearSvm::fit: bad input");
    const std::size_t d = x[0].size();

    w_.assign(d, 0.0);
    b_ = 0.0;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> sign(n);
    std::vector<double> qii(n);
    for (std::size_t i = 0; i < n; ++i) {
        sign[i] = y[i] == 1 ? 1.0 : -1.0;
        // +1.0 accounts for the augmented bias feature
        qii[i] = std::inner_product(x[i].begin(), x[i].end(), x[i].begin(), 1.0);
    }

    for (int pass = 0; pass < params.max_iter; ++pass) {
        double max_violation = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double margin = sign[i] * (std::inner_product(x[i].begin(), x[i].end(),
                                                          w_.begin(), 0.0) +
                                       b_);
            double grad = margin - 1.0;
            double violation = 0.0;
            if (alpha[i] == 0.0) violation = std::max(0.0, -grad);
            else if (alpha[i] >= params.c) violation = std::max(0.0, grad);
            else violation = std::fabs(grad);
            max_violation = std::max(max_violation, violation);

            double next = std::clamp(alpha[i] - grad / qii[i], 0.0, params.c);
            double delta = next - alpha[i];
            if (delta == 0.0) continue;
            alpha[i] = next;
            for (std::size_t j = 0; j < d; ++j) w_[j] += delta * sign[i] * x[i][j];
            b_ += delta * sign[i];
        }
        if (max_violation < params.tol) break;
    }
}

double LinearSvm::decision(const std::vector<double>& x) const {
    return std::inner_product(x.begin(), x.end(), w_.begin(), 0.0) + b_;
}

int LinearSvm::predict(const std::vector<double>& x) const {
    return decision(x) > 0.0 ? 1 : 0;
}

}  // namespace citescan::ml
