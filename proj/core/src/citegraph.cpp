#include "citescan/citegraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace citescan {

const char* to_string(PublicationKind k) {
    switch (k) {
        case PublicationKind::BOOK: return "book";
        case PublicationKind::ARTICLE: return "article";
        case PublicationKind::OTHER: return "other";
    }
    return "other";
}

const char* to_string(NodeClass c) {
    switch (c) {
        case NodeClass::CANDIDATE: return "candidate";
        case NodeClass::COMMISSION: return "commission";
        case NodeClass::COAUTHORED: return "coauthored";
        case NodeClass::OTHER: return "other";
    }
    return "other";
}

PublicationKind kind_of(const std::string& kind_hint) {
    std::string t;
    for (char c : kind_hint) {
        t.push_back(c == '_' || c == ' ' ? '-' : static_cast<char>(std::tolower(
                        static_cast<unsigned char>(c))));
    }
    if (t == "book" || t == "monograph") return PublicationKind::BOOK;
    if (t == "journal-article" || t == "journal") return PublicationKind::ARTICLE;
    return PublicationKind::OTHER;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "cand", "books", "articles", "other_pubbs", "co_au",
        "cand_comm", "comm_cand", "bc", "cc", "cand_other", "other_cand"};
    return names;
}

std::optional<std::uint32_t> CitationNetwork::node_index(const std::string& key) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), key,
                               [](const NetworkNode& n, const std::string& k) { return n.key < k; });
    if (it == nodes.end() || it->key != key) return std::nullopt;
    return static_cast<std::uint32_t>(it - nodes.begin());
}

CitationNetwork build_network(const Dossier& dossier) {
    CitationNetwork net;
    net.dossier_ref = dossier.candidate_id;

    std::set<std::string> coauthored(dossier.coauthored_keys.begin(),
                                     dossier.coauthored_keys.end());
    std::map<std::string, NetworkNode> nodes;
    auto add_core = [&](const DossierPub& p, NodeClass cls) {
        std::string key = p.node_key();
        NodeClass effective = coauthored.count(key) ? NodeClass::COAUTHORED : cls;
        auto [it, inserted] = nodes.emplace(key, NetworkNode{key, effective, kind_of(p.kind_hint)});
        if (!inserted && it->second.cls != effective) {
            // present in both candidate and commission sets without a
            // co-authorship flag cannot happen by construction
            it->second.cls = NodeClass::COAUTHORED;
        }
    };
    for (const auto& p : dossier.candidate_pubs) add_core(p, NodeClass::CANDIDATE);
    for (const auto& p : dossier.commission_pubs) add_core(p, NodeClass::COMMISSION);

    // Every harvested neighbor of a core publication joins the graph; keys
    // not in the core sets are stub/other nodes of kind OTHER.
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& [key, n] : dossier.neighborhoods) {
        if (!nodes.count(key)) continue;
        for (const auto& cited : n.cited) {
            nodes.emplace(cited, NetworkNode{cited, NodeClass::OTHER, PublicationKind::OTHER});
            edges.emplace(key, cited);
        }
        for (const auto& citing : n.citing) {
            nodes.emplace(citing, NetworkNode{citing, NodeClass::OTHER, PublicationKind::OTHER});
            edges.emplace(citing, key);
        }
    }

    for (auto& [_, node] : nodes) net.nodes.push_back(std::move(node));
    for (const auto& [citing, cited] : edges) {
        net.edges.emplace_back(*net.node_index(citing), *net.node_index(cited));
    }
    std::sort(net.edges.begin(), net.edges.end());
    return net;
}

MetricVector compute_metrics(const CitationNetwork& network) {
    const std::size_t n = network.nodes.size();
    std::vector<bool> in_cand(n), in_comm(n), is_other(n);
    MetricVector m;

    for (std::size_t i = 0; i < n; ++i) {
        NodeClass c = network.nodes[i].cls;
        in_cand[i] = (c == NodeClass::CANDIDATE || c == NodeClass::COAUTHORED);
        in_comm[i] = (c == NodeClass::COMMISSION || c == NodeClass::COAUTHORED);
        is_other[i] = (c == NodeClass::OTHER);
        if (in_cand[i]) {
            ++m.cand;
            switch (network.nodes[i].kind) {
                case PublicationKind::BOOK: ++m.books; break;
                case PublicationKind::ARTICLE: ++m.articles; break;
                case PublicationKind::OTHER: ++m.other_pubbs; break;
            }
        }
        if (c == NodeClass::COAUTHORED) ++m.co_au;
    }

    // bc/cc count third-party (gray) publications only: coupling and
    // co-citation measure proximity through the publications of other
    // authors, so candidate/commission nodes are never the common third
    // publication.
    std::vector<bool> cited_by_cand(n), cited_by_comm(n), cites_cand(n), cites_comm(n);
    for (const auto& [citing, cited] : network.edges) {
        if (in_cand[citing] && in_comm[cited]) ++m.cand_comm;
        if (in_comm[citing] && in_cand[cited]) ++m.comm_cand;
        if (in_cand[citing]) cited_by_cand[cited] = true;
        if (in_comm[citing]) cited_by_comm[cited] = true;
        if (in_cand[cited]) cites_cand[citing] = true;
        if (in_comm[cited]) cites_comm[citing] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (is_other[i] && cited_by_cand[i] && cited_by_comm[i]) ++m.bc;
        if (is_other[i] && cites_cand[i] && cites_comm[i]) ++m.cc;
        if (is_other[i] && cited_by_cand[i]) ++m.cand_other;
        if (is_other[i] && cites_cand[i]) ++m.other_cand;
    }
    return m;
}

MetricVector compute_metrics(const Dossier& dossier, const CitationNetwork& network) {
    if (network.dossier_ref != dossier.candidate_id) {
        throw std::invalid_argument("compute_metrics: network was built from dossier '" +
                                    network.dossier_ref + "', not '" + dossier.candidate_id + "'");
    }
    MetricVector m = compute_metrics(network);
    m.section = dossier.section;
    m.label = dossier.outcome_label;
    return m;
}

void export_network(const CitationNetwork& network,
                    const std::filesystem::path& edges_path,
                    const std::filesystem::path& nodes_path) {
    std::ofstream edges(edges_path);
    if (!edges) throw std::runtime_error("cannot write " + edges_path.string());
    for (const auto& [citing, cited] : network.edges) {
        edges << network.nodes[citing].key << " " << network.nodes[cited].key << "\n";
    }
    std::ofstream nodes(nodes_path);
    if (!nodes) throw std::runtime_error("cannot write " + nodes_path.string());
    for (const auto& node : network.nodes) {
        nodes << node.key << " " << to_string(node.cls) << " " << to_string(node.kind) << "\n";
    }
}

}  // namespace citescan
