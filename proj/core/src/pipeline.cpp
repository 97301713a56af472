#include "citescan/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "citescan/citegraph.hpp"
#include "citescan/normalize.hpp"

namespace citescan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

SectionLabel section_from_string(const std::string& s) {
    if (s == "A" || s == "a") return SectionLabel::A;
    if (s == "B" || s == "b") return SectionLabel::B;
    if (s == "C" || s == "c") return SectionLabel::C;
    throw UsageError("include_sections entries must be A, B or C, got: " + s);
}

}  // namespace

PipelineConfig PipelineConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path.string());
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    auto rel = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    PipelineConfig cfg;
    cfg.synth.out_dir = base / "synth";
    bool sections_set = false;
    bool synth_seed_set = false;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(lineno) + " is not key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "store_path") cfg.store_path = rel(value);
            else if (key == "roster_path") cfg.roster_path = rel(value);
            else if (key == "output_dir") cfg.output_dir = rel(value);
            else if (key == "dump") {
                std::stringstream ss(value);
                std::string p, kind;
                if (!(ss >> p >> kind)) {
                    throw UsageError("dump entries look like: dump = <path> <kind>");
                }
                cfg.dump_specs.emplace_back(rel(p), source_kind_from_string(kind));
            } else if (key == "include_sections") {
                cfg.include_sections.clear();
                for (const auto& s : split_list(value)) cfg.include_sections.insert(section_from_string(s));
                sections_set = true;
            } else if (key == "seed") cfg.sweep.seed = std::stoull(value);
            else if (key == "k_folds") cfg.sweep.k_folds = std::stoi(value);
            else if (key == "algorithms") {
                cfg.sweep.algorithms.clear();
                for (const auto& a : split_list(value)) {
                    cfg.sweep.algorithms.push_back(ml::algorithm_from_string(a));
                }
            } else if (key == "f1_gate") cfg.sweep.f1_gate = std::stod(value);
            else if (key == "hi_threshold") cfg.sweep.hi_threshold = std::stod(value);
            else if (key == "lo_threshold") cfg.sweep.lo_threshold = std::stod(value);
            else if (key == "trees") cfg.sweep.n_trees = std::stoi(value);
            else if (key == "svm_c") cfg.sweep.svm_c = std::stod(value);
            else if (key == "svm_max_iter") cfg.sweep.svm_max_iter = std::stoi(value);
            else if (key == "svm_tol") cfg.sweep.svm_tol = std::stod(value);
            else if (key == "threads") cfg.sweep.threads = std::stoi(value);
            else if (key == "synth_dir") cfg.synth.out_dir = rel(value);
            else if (key == "synth_seed") { cfg.synth.seed = std::stoull(value); synth_seed_set = true; }
            else if (key == "synth_candidates") cfg.synth.n_candidates = std::stoi(value);
            else if (key == "synth_commission") cfg.synth.n_commission = std::stoi(value);
            else if (key == "synth_background") cfg.synth.n_background = std::stoi(value);
            else if (key == "synth_pubs_per_candidate") cfg.synth.pubs_per_candidate = std::stoi(value);
            else if (key == "synth_pubs_per_commission") cfg.synth.pubs_per_commission = std::stoi(value);
            else throw UsageError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw UsageError("bad value for config key " + key + ": " + value);
        }
    }
    if (!synth_seed_set) cfg.synth.seed = cfg.sweep.seed;
    if (sections_set && cfg.include_sections.empty()) {
        throw UsageError("include_sections must not be empty");
    }
    if (cfg.store_path.empty()) cfg.store_path = base / "store";
    if (cfg.output_dir.empty()) cfg.output_dir = base / "out";
    return cfg;
}

namespace {

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) {
        throw MissingInputError("missing " + what + ": " + p.string());
    }
}

std::vector<fs::path> sorted_dossier_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

void stage_ingest(const PipelineConfig& config) {
    if (config.dump_specs.empty()) throw UsageError("no dump entries in config");
    for (const auto& [path, kind] : config.dump_specs) require_file(path, "dump file");

    CorpusStore store = CorpusStore::load(config.store_path);
    for (const auto& [path, kind] : config.dump_specs) {
        IngestStats stats = store.ingest_dump(path, kind);
        std::cout << "ingest " << path.string() << " [" << to_string(kind) << "]"
                  << " read=" << stats.records_read << " stored=" << stats.records_stored
                  << " duplicates=" << stats.duplicates_skipped
                  << " malformed=" << stats.malformed_skipped
                  << " links=" << stats.links_stored << "\n";
    }
    store.save(config.store_path);
    std::cout << "store: " << store.size() << " publications, " << store.link_count()
              << " links -> " << config.store_path.string() << "\n";
}

void stage_resolve(const PipelineConfig& config) {
    require_file(config.store_path / "manifest.json", "store (run ingest first)");
    require_file(config.roster_path, "roster file");

    CorpusStore store = CorpusStore::load(config.store_path);
    Roster roster = load_roster(config.roster_path);
    if (roster.commission.empty()) throw UsageError("roster has no commission members");
    Resolver resolver(store);

    fs::create_directories(config.output_dir / "dossiers");
    for (const auto& candidate : roster.candidates) {
        Dossier d = resolver.build_dossier(candidate, roster.commission);
        save_dossier(d, config.output_dir / "dossiers" / (candidate.person_id + ".json"));
        std::cout << "resolve " << candidate.person_id << ": listed=" << d.listed_count
                  << " matched=" << d.matched_count << " retrieved=" << d.total_retrieved_count
                  << " section=" << to_string(d.section) << "\n";
    }
}

void stage_metrics(const PipelineConfig& config) {
    const fs::path dossier_dir = config.output_dir / "dossiers";
    require_file(dossier_dir, "dossiers directory (run resolve first)");

    fs::create_directories(config.output_dir / "networks");
    std::ofstream csv(config.output_dir / kMetricsCsv);
    if (!csv) throw std::runtime_error("cannot write metrics.csv");
    csv << "candidate_id,section";
    for (const auto& name : metric_names()) csv << "," << name;
    csv << ",label\n";

    int rows = 0;
    for (const auto& file : sorted_dossier_files(dossier_dir)) {
        Dossier d = load_dossier(file);
        CitationNetwork net = build_network(d);
        export_network(net, config.output_dir / "networks" / (d.candidate_id + ".edges"),
                       config.output_dir / "networks" / (d.candidate_id + ".nodes"));
        if (!config.include_sections.count(d.section)) continue;
        MetricVector m = compute_metrics(d, net);
        csv << d.candidate_id << "," << to_string(m.section) << "," << m.cand << "," << m.books
            << "," << m.articles << "," << m.other_pubbs << "," << m.co_au << "," << m.cand_comm
            << "," << m.comm_cand << "," << m.bc << "," << m.cc << "," << m.cand_other << ","
            << m.other_cand << ","
            << (m.label ? (*m.label == Outcome::PASS ? "pass" : "fail") : "") << "\n";
        ++rows;
    }
    std::cout << "metrics: " << rows << " rows -> "
              << (config.output_dir / kMetricsCsv).string() << "\n";
}

void stage_sweep(const PipelineConfig& config) {
    const fs::path metrics_path = config.output_dir / kMetricsCsv;
    require_file(metrics_path, "metrics.csv (run metrics first)");

    ml::FeatureMatrix matrix = ml::load_metrics_csv(metrics_path);
    ml::SweepPlan plan = config.sweep;
    plan.m = static_cast<int>(matrix.n_features());
    std::vector<ml::EvalResult> results = ml::sweep(matrix, plan);
    ml::save_results_csv(results, plan, config.output_dir / kSweepResultsCsv);
    std::cout << "sweep: " << results.size() << " classifiers -> "
              << (config.output_dir / kSweepResultsCsv).string() << "\n";
}

void stage_report(const PipelineConfig& config) {
    const fs::path results_path = config.output_dir / kSweepResultsCsv;
    const fs::path metrics_path = config.output_dir / kMetricsCsv;
    require_file(results_path, "sweep_results.csv (run sweep first)");
    require_file(metrics_path, "metrics.csv (run metrics first)");

    ml::FeatureMatrix matrix = ml::load_metrics_csv(metrics_path);
    int k_folds = 0;
    std::vector<ml::EvalResult> results = ml::load_results_csv(results_path, &k_folds);
    ml::SweepPlan plan = config.sweep;
    plan.m = static_cast<int>(matrix.n_features());
    plan.k_folds = k_folds;
    ml::SignificanceReport report = ml::significance(results, matrix.metric_names, plan);
    ml::save_significance_json(report, plan, config.output_dir / kSignificanceJson);

    std::map<std::string, int> sections{{"A", 0}, {"B", 0}, {"C", 0}};
    int dossiers = 0;
    const fs::path dossier_dir = config.output_dir / "dossiers";
    if (fs::exists(dossier_dir)) {
        for (const auto& file : sorted_dossier_files(dossier_dir)) {
            Dossier d = load_dossier(file);
            ++sections[to_string(d.section)];
            ++dossiers;
        }
    }
    json summary;
    summary["candidates"] = dossiers;
    summary["sections"] = sections;
    summary["metrics_rows"] = matrix.rows.size();
    summary["classifiers_evaluated"] = results.size();
    summary["good_classifier_count"] = report.good_classifier_count;
    summary["no_classifier_passed_gate"] = report.none_passed;
    std::ofstream out(config.output_dir / kSummaryJson);
    out << summary.dump(2) << "\n";
    std::cout << "report: good classifiers=" << report.good_classifier_count << " -> "
              << (config.output_dir / kSignificanceJson).string() << "\n";
}

void stage_synth(const PipelineConfig& config) {
    generate_corpus(config.synth);
    std::cout << "synth: corpus written to " << config.synth.out_dir.string()
              << " (mag.jsonl, oa.jsonl, cr.jsonl, coci.csv, roster.json)\n";
}

void run_stage(const std::string& command, const PipelineConfig& config) {
    if (command == "ingest") stage_ingest(config);
    else if (command == "resolve") stage_resolve(config);
    else if (command == "metrics") stage_metrics(config);
    else if (command == "sweep") stage_sweep(config);
    else if (command == "report") stage_report(config);
    else if (command == "synth") stage_synth(config);
    else throw UsageError("unknown command: " + command);
}

}  // namespace citescan
