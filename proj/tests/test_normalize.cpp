#include <doctest.h>

#include "citescan/normalize.hpp"
#include "citescan/rng.hpp"

using namespace citescan;

TEST_CASE("normalize_title lowercases plain titles") {
    CHECK(normalize_title("The Role of Connections in Academic Promotions") ==
          "the role of connections in academic promotions");
}

TEST_CASE("normalize_title strips punctuation and collapses whitespace") {
    CHECK(normalize_title("  Gender,\xE2\x80\x94 Science, and Academic Rank!  ") ==
          "gender science and academic rank");
    CHECK(normalize_title("a  \t b") == "a b");
    CHECK(normalize_title("") == "");
    CHECK(normalize_title("!!!") == "");
}

TEST_CASE("normalize_title folds diacritics") {
    CHECK(normalize_title("\xC3\x89tude de cas") == "etude de cas");
    CHECK(normalize_title("M\xC3\xBCller\xE2\x80\x93Schr\xC3\xB6" "der") == "muller schroder");
}

TEST_CASE("normalize_title is idempotent on random ascii-ish strings") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        std::string s;
        int len = static_cast<int>(rng.below(40));
        for (int j = 0; j < len; ++j) s.push_back(static_cast<char>(rng.range(32, 126)));
        std::string once = normalize_title(s);
        CHECK(normalize_title(once) == once);
    }
}

TEST_CASE("canonical_doi strips resolver prefixes and lowercases") {
    CHECK(canonical_doi("https://doi.org/10.1000/ABC.1") == "10.1000/abc.1");
    CHECK(canonical_doi("DOI:10.1000/abc.1") == "10.1000/abc.1");
    CHECK(canonical_doi("  10.1000/Abc.1  ") == "10.1000/abc.1");
    CHECK(canonical_doi("") == "");
}

TEST_CASE("looks_like_doi") {
    CHECK(looks_like_doi("10.1000/x"));
    CHECK_FALSE(looks_like_doi("mag|123"));
    CHECK_FALSE(looks_like_doi("10.1000"));
}
