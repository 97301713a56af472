#pragma once

#include <cstdint>
#include <vector>

namespace citescan::ml {

/// Stratified k-fold assignment: per-fold class counts are within 1 of
/// exact proportionality, total fold sizes within 1 of n/k. Deterministic
/// given seed. Throws std::invalid_argument when k < 2 or a class has
/// fewer than k members.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed);

/// Random minority oversampling over row indices: output contains every
/// input index plus uniformly drawn copies of minority indices until the
/// class counts are equal. Throws when only one class is present.
std::vector<std::size_t> oversample(const std::vector<std::size_t>& rows,
                                    const std::vector<int>& labels, std::uint64_t seed);

/// Mean of per-class F1 scores weighted by class support in y_true;
/// a class with P + R = 0 scores 0.
double weighted_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred);

}  // namespace citescan::ml
