#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace citescan {

using PubId = std::uint64_t;  // store-local id, 1-based; 0 means "no record"

enum class SourceKind { MAG, OA, CR, COCI, NATIVE };

const char* to_string(SourceKind k);
SourceKind source_kind_from_string(const std::string& s);

struct AuthorRef {
    std::string author_id;  // source-native id, may be empty
    std::string name;       // may be empty, but not both

    bool operator==(const AuthorRef&) const = default;
};

/// One normalized bibliographic record, unified across source flavors.
struct Publication {
    PubId pub_id = 0;
    std::string doi;  // canonical lowercase form, empty when unknown
    std::map<SourceKind, std::string> source_ids;
    std::string title;
    std::string norm_title;
    std::optional<int> year;
    std::string kind_hint;  // source-native type string, may be empty
    std::vector<AuthorRef> authors;
    std::vector<std::string> references;  // canonical link keys, de-duplicated
    SourceKind origin = SourceKind::NATIVE;
};

/// Reference to a publication inside a citation neighborhood. pub_id is 0
/// for stub nodes known only by DOI.
struct PubKeyRef {
    PubId pub_id = 0;
    std::string doi;  // canonical, may be empty when only a source id is known
    std::string key;  // canonical link key this reference was reached through

    bool resolved() const { return pub_id != 0; }
};

struct Neighborhood {
    std::vector<PubKeyRef> cited;
    std::vector<PubKeyRef> citing;
};

struct IngestStats {
    std::uint64_t records_read = 0;
    std::uint64_t records_stored = 0;
    std::uint64_t duplicates_skipped = 0;
    std::uint64_t malformed_skipped = 0;
    std::uint64_t links_stored = 0;

    bool operator==(const IngestStats&) const = default;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace citescan
