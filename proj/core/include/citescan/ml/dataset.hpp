#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace citescan::ml {

/// Binary labels: 1 = PASS, 0 = FAIL.
struct FeatureRow {
    std::string id;
    std::vector<double> x;
    int label = 0;
};

struct FeatureMatrix {
    std::vector<std::string> metric_names;
    std::vector<FeatureRow> rows;

    std::size_t n_features() const { return metric_names.size(); }
    std::vector<int> labels() const;
    void validate_for_training() const;  // both classes present, consistent widths
};

/// Reads the metrics CSV produced by the pipeline (candidate_id, section,
/// 11 metrics, label). The section column is carried through ingestion
/// filtering upstream and is not a feature.
FeatureMatrix load_metrics_csv(const std::filesystem::path& path);

}  // namespace citescan::ml
