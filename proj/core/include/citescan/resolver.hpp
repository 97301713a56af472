#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "citescan/store.hpp"
#include "citescan/types.hpp"

namespace citescan {

struct CvEntry {
    std::string entry_id;
    std::string title;  // non-empty
    std::optional<int> year;
    std::string doi;            // raw, may be empty
    std::string declared_kind;  // may be empty
};

enum class MatchMethod { BY_DOI, BY_TITLE_YEAR, AUTHOR_EXPANSION, FALLBACK_OA, FALLBACK_CR };
const char* to_string(MatchMethod m);

struct Resolution {
    std::string entry_id;
    bool matched = false;
    PubId pub = 0;
    std::optional<MatchMethod> method;
};

enum class Role { CANDIDATE, COMMISSION };
enum class Outcome { PASS, FAIL };
enum class SectionLabel { A, B, C };
const char* to_string(SectionLabel s);

struct AuthorProfile {
    std::string person_id;
    Role role = Role::CANDIDATE;
    std::set<std::string> author_ids;
    std::vector<PubId> publications;  // resolved, sorted, unique
};

/// A publication as carried by a dossier: enough metadata to build the
/// citation network without going back to the store.
struct DossierPub {
    PubId pub_id = 0;  // 0 for stub nodes
    std::string doi;
    std::string kind_hint;
    std::vector<std::string> author_ids;

    /// Network node key: DOI when known, else the store id.
    std::string node_key() const {
        return doi.empty() ? "pub|" + std::to_string(pub_id) : doi;
    }
};

struct DossierNeighborhood {
    std::vector<std::string> cited;   // node keys
    std::vector<std::string> citing;  // node keys
};

struct Dossier {
    std::string candidate_id;
    AuthorProfile candidate;
    std::vector<AuthorProfile> commission;
    std::vector<DossierPub> candidate_pubs;
    std::vector<DossierPub> commission_pubs;
    std::vector<std::string> coauthored_keys;  // node keys, subset of both sets
    SectionLabel section = SectionLabel::C;
    int listed_count = 0;
    int matched_count = 0;
    int total_retrieved_count = 0;
    std::optional<Outcome> outcome_label;
    std::vector<std::string> unresolved_entries;
    /// Harvested one-hop citation neighborhoods of every candidate and
    /// commission publication, keyed by node key. Neighbor keys that are
    /// bare DOIs with no stored metadata are stub nodes.
    std::map<std::string, DossierNeighborhood> neighborhoods;
};

/// One person as read from the roster file.
struct RosterPerson {
    std::string person_id;
    Role role = Role::CANDIDATE;
    std::string name;  // optional; used to pick the person's author ids
    std::optional<Outcome> outcome;
    std::vector<CvEntry> cv;
};

struct Roster {
    std::vector<RosterPerson> candidates;
    std::vector<RosterPerson> commission;
};

Roster load_roster(const std::filesystem::path& path);

/// Coverage categorization of an application: A when enough of the listed
/// publications were matched, B when author expansion recovered a set of
/// comparable size, C otherwise. listed = 0 is always C.
SectionLabel classify_section(int listed, int matched, int total_retrieved);

class Resolver {
public:
    explicit Resolver(const CorpusStore& store) : store_(store) {}

    /// Matching order: DOI lookup when the entry has one; else title+year
    /// against MAG records (most references wins, ties to lowest pub_id);
    /// else the OA then CR fallbacks by title+year.
    Resolution match_entry(const CvEntry& entry) const;

    /// Publications reachable through the profile's author ids that are not
    /// already matched, de-duplicated by DOI else pub_id, sorted by pub_id.
    std::vector<PubId> expand_by_author(const AuthorProfile& profile,
                                        const std::set<PubId>& already_matched) const;

    /// Merged citation neighborhood of one stored publication (store links
    /// plus COCI links share the store's link table; de-dup is by DOI).
    Neighborhood harvest_citations(PubId pub) const;

    Dossier build_dossier(const RosterPerson& candidate,
                          const std::vector<RosterPerson>& commission) const;

private:
    struct ResolvedPerson {
        AuthorProfile profile;
        int listed = 0;
        int matched = 0;
        std::vector<std::string> unresolved;
    };
    ResolvedPerson resolve_person(const RosterPerson& person) const;

    const CorpusStore& store_;
};

void save_dossier(const Dossier& d, const std::filesystem::path& path);
Dossier load_dossier(const std::filesystem::path& path);

}  // namespace citescan
