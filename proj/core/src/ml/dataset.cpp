#include "citescan/ml/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace citescan::ml {

std::vector<int> FeatureMatrix::labels() const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.label);
    return out;
}

void FeatureMatrix::validate_for_training() const {
    if (metric_names.empty()) throw std::invalid_argument("feature matrix has no metrics");
    bool has_pass = false, has_fail = false;
    for (const auto& r : rows) {
        if (r.x.size() != metric_names.size()) {
            throw std::invalid_argument("feature row width mismatch for id " + r.id);
        }
        (r.label == 1 ? has_pass : has_fail) = true;
    }
    if (!has_pass || !has_fail) {
        throw std::invalid_argument("training requires both PASS and FAIL rows");
    }
}

FeatureMatrix load_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metrics file: " + path.string());

    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(field);
        return out;
    };

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty metrics file: " + path.string());
    auto header = split(line);
    if (header.size() < 4 || header.front() != "candidate_id" || header.back() != "label") {
        throw std::runtime_error("unexpected metrics header in " + path.string());
    }

    FeatureMatrix m;
    // columns: candidate_id, section, <metrics...>, label
    m.metric_names.assign(header.begin() + 2, header.end() - 1);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("bad metrics row in " + path.string() + ": " + line);
        }
        FeatureRow row;
        row.id = fields[0];
        for (std::size_t i = 2; i + 1 < fields.size(); ++i) row.x.push_back(std::stod(fields[i]));
        const std::string& label = fields.back();
        if (label == "pass") row.label = 1;
        else if (label == "fail") row.label = 0;
        else throw std::runtime_error("metrics label must be pass or fail, got: " + label);
        m.rows.push_back(std::move(row));
    }
    return m;
}

}  // namespace citescan::ml
