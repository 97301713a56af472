#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "citescan/types.hpp"

namespace citescan {

/// Embedded indexed store over normalized publication records and citation
/// links. All data lives in memory; load()/save() persist to a directory
/// (publications.jsonl + links.tsv + manifest.json).
///
/// Single writer: ingest_dump must not run concurrently with anything else.
/// Once ingestion is done, all query methods are const and thread-safe.
class CorpusStore {
public:
    CorpusStore() = default;

    /// Loads a persisted store. Missing directory -> empty store.
    static CorpusStore load(const std::filesystem::path& dir);
    void save(const std::filesystem::path& dir) const;

    /// Parses one dump file. kind = COCI expects the CSV link format,
    /// anything else the JSONL record format. Malformed lines are counted
    /// and skipped, duplicates are counted and skipped (first record wins
    /// per DOI and per (kind, source id); first link wins per pair).
    IngestStats ingest_dump(const std::filesystem::path& path, SourceKind kind);

    std::size_t size() const { return pubs_.size(); }
    std::uint64_t link_count() const { return n_links_; }

    const Publication& get(PubId id) const;

    // Lookups. Keys are normalized internally (DOI canonicalization, title
    // normalization), results ordered by pub_id ascending.
    std::vector<const Publication*> query_doi(const std::string& doi) const;
    std::vector<const Publication*> query_title_year(const std::string& title,
                                                     std::optional<int> year) const;
    std::vector<const Publication*> query_author(const std::string& author_id) const;
    std::vector<const Publication*> query_source_id(SourceKind kind,
                                                    const std::string& id) const;

    /// Merged outgoing/incoming citation links of one stored publication,
    /// de-duplicated by DOI when DOIs are known (else by link key), sorted.
    Neighborhood citation_neighbors(PubId id) const;

    /// Same, addressed by DOI. Throws NotFoundError when the DOI is unknown.
    Neighborhood citation_neighbors_by_doi(const std::string& doi) const;

    /// Canonical link key of a stored publication: its DOI when present,
    /// else its first source id key.
    std::string key_of(const Publication& pub) const;

    /// Resolves a canonical link key to a stored record, if any.
    const Publication* resolve_key(const std::string& key) const;

private:
    bool store_record(Publication&& pub, IngestStats& stats);
    void add_link(const std::string& citing_key, const std::string& cited_key,
                  IngestStats& stats);
    void index_record(const Publication& pub);
    Neighborhood neighbors_of_keys(const std::vector<std::string>& own_keys) const;

    std::vector<Publication> pubs_;  // pub_id = index + 1

    std::unordered_map<std::string, PubId> by_doi_;
    std::unordered_map<std::string, std::vector<PubId>> by_title_year_;
    std::unordered_map<std::string, std::vector<PubId>> by_author_;
    std::unordered_map<std::string, PubId> by_source_;  // "kind|id" -> pub

    std::unordered_map<std::string, std::vector<std::string>> fwd_links_;
    std::unordered_map<std::string, std::vector<std::string>> rev_links_;
    std::unordered_set<std::string> link_pairs_;
    std::uint64_t n_links_ = 0;
};

/// Canonical link key helpers shared with the resolver.
std::string source_key(SourceKind kind, const std::string& id);
std::string reference_to_key(const std::string& raw, SourceKind origin);

}  // namespace citescan
