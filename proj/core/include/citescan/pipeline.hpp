#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "citescan/ml/sweep.hpp"
#include "citescan/resolver.hpp"
#include "citescan/synth.hpp"
#include "citescan/types.hpp"

namespace citescan {

/// Raised when a stage's upstream artifact is missing (exit code 1).
struct MissingInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    std::filesystem::path store_path;
    std::vector<std::pair<std::filesystem::path, SourceKind>> dump_specs;
    std::filesystem::path roster_path;
    std::filesystem::path output_dir;
    ml::SweepPlan sweep;  // m is filled from the metrics file
    std::set<SectionLabel> include_sections = {SectionLabel::A, SectionLabel::B};
    SynthSpec synth;

    /// Parses the flat key = value configuration format. Unknown keys are
    /// a usage error; referenced input paths are checked per stage.
    static PipelineConfig load(const std::filesystem::path& path);
};

/// Fixed output filenames under output_dir.
inline const char* kMetricsCsv = "metrics.csv";
inline const char* kSweepResultsCsv = "sweep_results.csv";
inline const char* kSignificanceJson = "significance.json";
inline const char* kSummaryJson = "summary.json";

void stage_ingest(const PipelineConfig& config);
void stage_resolve(const PipelineConfig& config);
void stage_metrics(const PipelineConfig& config);
void stage_sweep(const PipelineConfig& config);
void stage_report(const PipelineConfig& config);
void stage_synth(const PipelineConfig& config);

/// Dispatches one pipeline command. Throws UsageError for an unknown
/// command, MissingInputError when a required upstream artifact is absent.
void run_stage(const std::string& command, const PipelineConfig& config);

}  // namespace citescan
