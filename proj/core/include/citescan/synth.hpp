#pragma once

#include <cstdint>
#include <filesystem>

#include "citescan/ml/dataset.hpp"

namespace citescan {

/// Parameters for the bundled synthetic corpus. The generator plants a
/// label signal: candidates with a high coupling level cite (and are
/// co-cited with) the commission heavily and pass, low-coupling candidates
/// fail.
struct SynthSpec {
    int n_background = 400;      // shared reference pool
    int n_candidates = 20;
    int n_commission = 5;
    int pubs_per_commission = 30;
    int pubs_per_candidate = 22;
    std::uint64_t seed = 42;
    std::filesystem::path out_dir;
};

/// Writes mag.jsonl, oa.jsonl, cr.jsonl, coci.csv and roster.json into
/// spec.out_dir. Deterministic given seed.
void generate_corpus(const SynthSpec& spec);

/// Feature matrix with a noise-free planted signal: 11 metrics in the
/// standard column order, label = PASS iff bc + cc exceeds a fixed
/// threshold, every other metric independent noise.
ml::FeatureMatrix planted_signal_matrix(int rows, std::uint64_t seed);

}  // namespace citescan
