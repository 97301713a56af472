#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "citescan/store.hpp"

using namespace citescan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("citescan_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p;
}

const char* kSmallDump = R"({"id":"P1","doi":"10.1/p1","title":"First Paper","year":2015,"type":"journal-article","authors":[{"id":"A1","name":"Ann Author"}],"references":["10.1/a","B1"]}
{"id":"A1r","doi":"10.1/a","title":"Cited A","year":2010,"type":"book","authors":[{"id":"A2","name":"Bob"}],"references":[]}
{"id":"B1","doi":"","title":"Cited B","year":2011,"type":"proceedings-article","authors":[{"name":"Carol"}],"references":[]}
{"id":"C1","doi":"10.1/c1","title":"Citing C","year":2018,"type":"journal-article","authors":[{"id":"A3","name":"Dan"}],"references":["10.1/p1"]}
)";

}  // namespace

TEST_CASE("empty file ingests to all-zero stats") {
    TempDir dir;
    auto path = write_file(dir.path, "empty.jsonl", "");
    CorpusStore store;
    CHECK(store.ingest_dump(path, SourceKind::MAG) == IngestStats{0, 0, 0, 0, 0});
}

TEST_CASE("duplicate DOIs: first record wins") {
    TempDir dir;
    auto path = write_file(dir.path, "dup.jsonl",
                           R"({"id":"X1","doi":"10.1/same","title":"One","year":2000}
{"id":"X2","doi":"10.1/same","title":"Two","year":2001}
{"id":"X3","doi":"10.1/other","title":"Three","year":2002}
)");
    CorpusStore store;
    IngestStats stats = store.ingest_dump(path, SourceKind::MAG);
    CHECK(stats.records_read == 3);
    CHECK(stats.records_stored == 2);
    CHECK(stats.duplicates_skipped == 1);
    auto hits = store.query_doi("10.1/same");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0]->title == "One");
}

TEST_CASE("malformed lines are skipped and counted") {
    TempDir dir;
    auto path = write_file(dir.path, "bad.jsonl",
                           R"({"id":"X1","doi":"10.1/x1","title":"One"}
this is not json
{"id":"X2","doi":"10.1/x2","title":"Two"}
{"id":"X3","doi":"10.1/x3","title":"Three"}
)");
    CorpusStore store;
    IngestStats stats = store.ingest_dump(path, SourceKind::MAG);
    CHECK(stats.records_read == 4);
    CHECK(stats.malformed_skipped == 1);
    CHECK(stats.records_stored == 3);
    CHECK(stats.records_read ==
          stats.records_stored + stats.duplicates_skipped + stats.malformed_skipped);
}

TEST_CASE("query by doi, title+year, author and source id") {
    TempDir dir;
    auto path = write_file(dir.path, "q.jsonl",
                           R"({"id":"Q1","doi":"10.1/x","title":"Shared Title","year":2015,"authors":[{"id":"AU1","name":"Ann"}]}
{"id":"Q2","title":"Shared Title!","year":2015,"authors":[{"id":"AU1","name":"Ann"}]}
{"id":"Q3","title":"Unrelated","year":1999}
)");
    CorpusStore store;
    store.ingest_dump(path, SourceKind::MAG);

    auto by_doi = store.query_doi("https://doi.org/10.1/X");
    REQUIRE(by_doi.size() == 1);
    CHECK(by_doi[0]->source_ids.at(SourceKind::MAG) == "Q1");

    CHECK(store.query_doi("10.1/absent").empty());

    // both records share the normalized (title, year) pair, ordered by pub_id
    auto by_ty = store.query_title_year("shared title", 2015);
    REQUIRE(by_ty.size() == 2);
    CHECK(by_ty[0]->pub_id < by_ty[1]->pub_id);

    CHECK(store.query_author("AU1").size() == 2);
    CHECK(store.query_author("nobody").empty());
    REQUIRE(store.query_source_id(SourceKind::MAG, "Q3").size() == 1);
}

TEST_CASE("citation neighborhoods, forward and reverse") {
    TempDir dir;
    auto path = write_file(dir.path, "links.jsonl", kSmallDump);
    CorpusStore store;
    store.ingest_dump(path, SourceKind::MAG);

    PubId p1 = store.query_doi("10.1/p1")[0]->pub_id;
    Neighborhood n = store.citation_neighbors(p1);
    REQUIRE(n.cited.size() == 2);
    REQUIRE(n.citing.size() == 1);
    CHECK(store.get(n.citing[0].pub_id).doi == "10.1/c1");

    PubId isolated = store.query_doi("10.1/c1")[0]->pub_id;
    Neighborhood iso = store.citation_neighbors(isolated);
    CHECK(iso.cited.size() == 1);
    CHECK(iso.citing.empty());

    CHECK_THROWS_AS(store.citation_neighbors(999), NotFoundError);
}

TEST_CASE("MAG link and COCI link with the same DOIs de-duplicate") {
    TempDir dir;
    auto dump = write_file(dir.path, "d.jsonl", kSmallDump);
    auto coci = write_file(dir.path, "c.csv",
                           "oci,citing,cited,creation\n"
                           "oci:1,10.1/p1,10.1/a,2020\n"
                           "oci:2,10.1/p1,10.1/zz,2020\n");
    CorpusStore store;
    store.ingest_dump(dump, SourceKind::MAG);
    IngestStats stats = store.ingest_dump(coci, SourceKind::COCI);
    CHECK(stats.records_read == 2);
    CHECK(stats.records_stored == 1);  // p1 -> a already known from the MAG record
    CHECK(stats.duplicates_skipped == 1);

    PubId p1 = store.query_doi("10.1/p1")[0]->pub_id;
    Neighborhood n = store.citation_neighbors(p1);
    int a_count = 0;
    bool saw_stub = false;
    for (const auto& ref : n.cited) {
        if (ref.doi == "10.1/a") ++a_count;
        if (!ref.resolved() && ref.doi == "10.1/zz") saw_stub = true;
    }
    CHECK(a_count == 1);
    CHECK(saw_stub);
}

TEST_CASE("reverse-index consistency over the whole fixture") {
    TempDir dir;
    auto path = write_file(dir.path, "links.jsonl", kSmallDump);
    CorpusStore store;
    store.ingest_dump(path, SourceKind::MAG);

    for (PubId id = 1; id <= store.size(); ++id) {
        for (const auto& cited : store.citation_neighbors(id).cited) {
            if (!cited.resolved()) continue;
            bool found = false;
            for (const auto& citing : store.citation_neighbors(cited.pub_id).citing) {
                if (citing.pub_id == id) found = true;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("ingest is idempotent; save/load round-trips") {
    TempDir dir;
    auto path = write_file(dir.path, "links.jsonl", kSmallDump);
    CorpusStore store;
    IngestStats first = store.ingest_dump(path, SourceKind::MAG);
    IngestStats second = store.ingest_dump(path, SourceKind::MAG);
    CHECK(second.records_read == first.records_read);
    CHECK(second.records_stored == 0);
    CHECK(second.duplicates_skipped == first.records_stored);

    fs::path store_dir = dir.path / "store";
    store.save(store_dir);
    CorpusStore loaded = CorpusStore::load(store_dir);
    CHECK(loaded.size() == store.size());
    CHECK(loaded.link_count() == store.link_count());
    for (PubId id = 1; id <= store.size(); ++id) {
        const Publication& a = store.get(id);
        const Publication& b = loaded.get(id);
        CHECK(a.doi == b.doi);
        CHECK(a.title == b.title);
        CHECK(a.norm_title == b.norm_title);
        CHECK(a.references == b.references);
        CHECK(a.authors == b.authors);
    }
}
