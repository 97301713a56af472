#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "citescan/resolver.hpp"

namespace citescan {

enum class PublicationKind { BOOK, ARTICLE, OTHER };
enum class NodeClass { CANDIDATE, COMMISSION, COAUTHORED, OTHER };

const char* to_string(PublicationKind k);
const char* to_string(NodeClass c);

/// Fixed mapping from a source-native type string (case-insensitive):
/// book/monograph -> BOOK; journal article flavors -> ARTICLE; everything
/// else (proceedings, chapters, workshops, unknown) -> OTHER.
PublicationKind kind_of(const std::string& kind_hint);

struct NetworkNode {
    std::string key;
    NodeClass cls = NodeClass::OTHER;
    PublicationKind kind = PublicationKind::OTHER;
};

struct CitationNetwork {
    std::string dossier_ref;
    std::vector<NetworkNode> nodes;  // sorted by key, unique
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // citing -> cited, sorted, unique

    std::optional<std::uint32_t> node_index(const std::string& key) const;
};

/// The 11 metric values for one application.
struct MetricVector {
    std::uint64_t cand = 0;
    std::uint64_t books = 0;
    std::uint64_t articles = 0;
    std::uint64_t other_pubbs = 0;
    std::uint64_t co_au = 0;
    std::uint64_t cand_comm = 0;
    std::uint64_t comm_cand = 0;
    std::uint64_t bc = 0;
    std::uint64_t cc = 0;
    std::uint64_t cand_other = 0;
    std::uint64_t other_cand = 0;
    SectionLabel section = SectionLabel::C;
    std::optional<Outcome> label;

    bool operator==(const MetricVector&) const = default;
};

/// Metric column names in the fixed CSV order.
const std::vector<std::string>& metric_names();

/// Assembles the candidate-versus-commission network of one dossier:
/// candidate, commission and co-authored publications plus every other
/// publication that cites or is cited by one of them.
CitationNetwork build_network(const Dossier& dossier);

/// Counts the 11 metrics over a built network. cand_comm/comm_cand count
/// citation links; bc, cc, cand_other, other_cand count distinct
/// publications. The common third publication in bc (cited by both sets)
/// and cc (citing both sets) must be a gray OTHER node: coupling measures
/// proximity through the publications of third-party authors.
MetricVector compute_metrics(const CitationNetwork& network);

/// Dossier-aware wrapper: checks the network belongs to the dossier and
/// attaches section and outcome label.
MetricVector compute_metrics(const Dossier& dossier, const CitationNetwork& network);

/// Edge-list ("citing cited" per line) and node-table ("key class kind")
/// exports for external graph tooling.
void export_network(const CitationNetwork& network,
                    const std::filesystem::path& edges_path,
                    const std::filesystem::path& nodes_path);

}  // namespace citescan
