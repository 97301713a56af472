#pragma once

#include <string>

namespace citescan {

/// Title normalization used by every title index and lookup: lowercase,
/// diacritics folded to base letters, punctuation replaced by spaces,
/// whitespace runs collapsed, trimmed. Idempotent.
std::string normalize_title(const std::string& title);

/// Canonical DOI form: trimmed, lowercase, resolver prefixes stripped
/// ("https://doi.org/", "doi:", ...). Returns empty for empty input.
std::string canonical_doi(const std::string& raw);

/// True when s is a plausible canonical DOI ("10.<registrant>/<suffix>").
bool looks_like_doi(const std::string& s);

std::string to_lower(const std::string& s);

}  // namespace citescan
