#include "citescan/synth.hpp"

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "citescan/citegraph.hpp"
#include "citescan/rng.hpp"

namespace citescan {

using nlohmann::json;

namespace {

struct SynthPub {
    std::string id;
    std::string doi;
    std::string title;
    int year = 2000;
    std::string type;
    json authors = json::array();
    std::vector<std::string> references;
    std::string dump;  // mag / oa / cr
};

json to_record(const SynthPub& p) {
    json j;
    j["id"] = p.id;
    j["doi"] = p.doi;
    j["title"] = p.title;
    j["year"] = p.year;
    j["type"] = p.type;
    j["authors"] = p.authors;
    j["references"] = p.references;
    j["source"] = p.dump;
    return j;
}

const char* kinds[] = {"journal-article", "journal-article", "proceedings-article", "book",
                       "book-chapter"};

}  // namespace

void generate_corpus(const SynthSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    Rng rng(mix_seed(spec.seed, 0x5e17c0u));

    std::vector<SynthPub> pubs;
    std::vector<std::pair<std::string, std::string>> coci;  // citing doi, cited doi

    // shared reference pool
    std::vector<std::string> ref_dois;
    for (int j = 0; j < spec.n_background; ++j) {
        SynthPub p;
        p.id = "R" + std::to_string(j);
        p.doi = "10.5000/r" + std::to_string(j);
        p.title = "Background study number " + std::to_string(j);
        p.year = 1995 + j % 25;
        p.type = kinds[rng.below(5)];
        p.authors.push_back({{"id", "BG" + std::to_string(j % 120)},
                             {"name", "Background Author " + std::to_string(j % 120)}});
        p.dump = "mag";
        ref_dois.push_back(p.doi);
        pubs.push_back(std::move(p));
    }

    // commission members and their publications
    std::vector<std::vector<std::string>> member_pub_dois(
        static_cast<std::size_t>(spec.n_commission));
    std::vector<std::string> commission_cited;  // references shared with candidates (drives bc)
    for (int m = 0; m < spec.n_commission; ++m) {
        for (int k = 0; k < spec.pubs_per_commission; ++k) {
            SynthPub p;
            p.id = "M" + std::to_string(m) + "P" + std::to_string(k);
            p.doi = "10.6000/m" + std::to_string(m) + ".p" + std::to_string(k);
            p.title = "Commission member " + std::to_string(m) + " work " + std::to_string(k);
            p.year = 2000 + k % 20;
            p.type = kinds[rng.below(5)];
            p.authors.push_back({{"id", "CM" + std::to_string(m)},
                                 {"name", "Commission Member " + std::to_string(m)}});
            for (int r = 0; r < 6; ++r) {
                std::string ref = ref_dois[rng.below(ref_dois.size())];
                p.references.push_back(ref);
                commission_cited.push_back(ref);
            }
            p.dump = "mag";
            member_pub_dois[static_cast<std::size_t>(m)].push_back(p.doi);
            pubs.push_back(std::move(p));
        }
    }

    // candidates: even index = high coupling (planted PASS), odd = low (FAIL)
    std::ofstream roster_out(spec.out_dir / "roster.json");
    json people = json::array();
    for (int m = 0; m < spec.n_commission; ++m) {
        json cv = json::array();
        int e = 0;
        for (const auto& doi : member_pub_dois[static_cast<std::size_t>(m)]) {
            cv.push_back({{"entry_id", "m" + std::to_string(m) + "e" + std::to_string(e++)},
                          {"title", "Commission member " + std::to_string(m) + " work"},
                          {"doi", doi}});
        }
        people.push_back({{"person_id", "M" + std::to_string(m)},
                          {"role", "commission"},
                          {"name", "Commission Member " + std::to_string(m)},
                          {"cv", cv}});
    }

    for (int c = 0; c < spec.n_candidates; ++c) {
        const bool high = (c % 2 == 0);
        const double coupling = high ? 0.7 : 0.04;
        const std::string author_id = "CA" + std::to_string(c);
        const std::string author_name = "Candidate " + std::to_string(c);
        const bool section_b = (c == spec.n_candidates - 3);
        const bool section_c = (c >= spec.n_candidates - 2);

        std::vector<SynthPub> own;
        for (int k = 0; k < spec.pubs_per_candidate; ++k) {
            SynthPub p;
            p.id = "C" + std::to_string(c) + "P" + std::to_string(k);
            p.doi = "10.7000/c" + std::to_string(c) + ".p" + std::to_string(k);
            p.title = "Candidate " + std::to_string(c) + " study " + std::to_string(k);
            p.year = 2005 + k % 15;
            p.type = kinds[rng.below(5)];
            p.authors.push_back({{"id", author_id}, {"name", author_name}});
            // one co-authored publication for every third high-coupling candidate
            if (high && k == 0 && c % 6 == 0) {
                p.authors.push_back({{"id", "CM0"}, {"name", "Commission Member 0"}});
            }
            for (int r = 0; r < 5; ++r) {
                if (rng.chance(coupling)) {
                    if (rng.chance(0.5)) {
                        // direct citation of a commission publication (cand_comm)
                        int m = static_cast<int>(rng.below(
                            static_cast<std::uint64_t>(spec.n_commission)));
                        const auto& dois = member_pub_dois[static_cast<std::size_t>(m)];
                        p.references.push_back(dois[rng.below(dois.size())]);
                    } else {
                        // shared reference with the commission (bc)
                        p.references.push_back(commission_cited[rng.below(commission_cited.size())]);
                    }
                } else {
                    p.references.push_back(ref_dois[rng.below(ref_dois.size())]);
                }
            }
            // oa/cr-only records exercise the fallback matching paths
            if (k == spec.pubs_per_candidate - 1) p.dump = "oa";
            else if (k == spec.pubs_per_candidate - 2) p.dump = "cr";
            else p.dump = "mag";
            own.push_back(std::move(p));
        }

        // citing publications: other authors citing the candidate, and under
        // coupling the same citer also cites a commission publication (cc)
        for (int x = 0; x < 4; ++x) {
            SynthPub p;
            p.id = "X" + std::to_string(c) + "N" + std::to_string(x);
            p.doi = "10.8000/x" + std::to_string(c) + ".n" + std::to_string(x);
            p.title = "Citing survey " + std::to_string(c) + " " + std::to_string(x);
            p.year = 2015 + x;
            p.type = "journal-article";
            p.authors.push_back({{"id", "XT" + std::to_string(c)},
                                 {"name", "External Author " + std::to_string(c)}});
            p.references.push_back(own[rng.below(own.size())].doi);
            if (rng.chance(coupling)) {
                int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n_commission)));
                const auto& dois = member_pub_dois[static_cast<std::size_t>(m)];
                p.references.push_back(dois[rng.below(dois.size())]);
            }
            p.dump = "mag";
            pubs.push_back(std::move(p));
        }

        // occasional commission citation of the candidate (comm_cand)
        if (high) {
            for (int r = 0; r < 3; ++r) {
                int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n_commission)));
                const auto& dois = member_pub_dois[static_cast<std::size_t>(m)];
                coci.emplace_back(dois[rng.below(dois.size())], own[rng.below(own.size())].doi);
            }
        }

        // COCI rows: duplicates of some record links plus COCI-only links,
        // including dangling citing DOIs that have no metadata anywhere
        for (const auto& p : own) {
            if (!p.references.empty() && rng.chance(0.4)) {
                coci.emplace_back(p.doi, p.references.front());
            }
        }
        coci.emplace_back("10.9000/dangling" + std::to_string(c), own.front().doi);

        // CV: most publications listed, section-C candidates list almost
        // nothing resolvable, the section-B candidate pads the list with
        // unresolvable entries so expansion has to carry the coverage
        json cv = json::array();
        int listed = 0;
        // every publication is listed except one MAG record that only author
        // expansion can recover; section-C candidates list almost nothing
        std::vector<std::size_t> cv_indices;
        if (section_c) {
            // nothing resolvable at all: no matches, no author ids, no expansion
        } else if (section_b) {
            // few listed matches, padded with unresolvable entries; author
            // expansion still recovers the full set, which lands in B
            for (std::size_t k = 0; k < 10; ++k) cv_indices.push_back(k);
        } else {
            for (std::size_t k = 0; k < own.size(); ++k) {
                if (k != own.size() - 3) cv_indices.push_back(k);
            }
        }
        for (std::size_t k : cv_indices) {
            const SynthPub& p = own[k];
            json entry = {{"entry_id", "c" + std::to_string(c) + "e" + std::to_string(listed++)},
                          {"title", p.title},
                          {"year", p.year},
                          {"declared_kind", p.type}};
            // oa/cr-only publications are listed without a DOI so matching
            // has to fall back to title+year in those sources
            bool with_doi = p.dump == "mag" && rng.chance(0.6);
            if (with_doi) entry["doi"] = p.doi;
            cv.push_back(std::move(entry));
        }
        int bogus = section_b ? 21 : (section_c ? 6 : 2);
        for (int k = 0; k < bogus; ++k) {
            cv.push_back({{"entry_id", "c" + std::to_string(c) + "e" + std::to_string(listed++)},
                          {"title", "Unpublished manuscript " + std::to_string(c) + " " +
                                        std::to_string(k)},
                          {"year", 1990}});
        }
        people.push_back({{"person_id", "C" + std::to_string(c)},
                          {"role", "candidate"},
                          {"name", author_name},
                          {"outcome", high ? "pass" : "fail"},
                          {"cv", cv}});

        for (auto& p : own) pubs.push_back(std::move(p));
    }

    roster_out << json{{"people", people}}.dump(2) << "\n";

    std::ofstream mag(spec.out_dir / "mag.jsonl");
    std::ofstream oa(spec.out_dir / "oa.jsonl");
    std::ofstream cr(spec.out_dir / "cr.jsonl");
    for (const auto& p : pubs) {
        std::ofstream& out = p.dump == "oa" ? oa : (p.dump == "cr" ? cr : mag);
        out << to_record(p).dump() << "\n";
    }

    std::ofstream coci_out(spec.out_dir / "coci.csv");
    coci_out << "oci,citing,cited,creation\n";
    int oci = 0;
    for (const auto& [citing, cited] : coci) {
        coci_out << "oci:" << oci++ << "," << citing << "," << cited << ",2020-01-01\n";
    }
}

ml::FeatureMatrix planted_signal_matrix(int rows, std::uint64_t seed) {
    ml::FeatureMatrix m;
    m.metric_names = metric_names();
    Rng rng(mix_seed(seed, 0x9147edu));
    const std::size_t bc = 7, cc = 8;  // positions in the standard column order
    for (int i = 0; i < rows; ++i) {
        ml::FeatureRow row;
        row.id = "app" + std::to_string(i);
        row.x.resize(m.metric_names.size());
        for (auto& v : row.x) v = static_cast<double>(rng.below(41));
        // bimodal coupling levels with a margin around the bc + cc > 30
        // threshold, so either coupling column alone already separates the
        // classes while the other columns carry no signal at all
        if (rng.chance(0.5)) {
            row.x[bc] = static_cast<double>(rng.range(16, 30));
            row.x[cc] = static_cast<double>(rng.range(16, 30));
        } else {
            row.x[bc] = static_cast<double>(rng.below(15));
            row.x[cc] = static_cast<double>(rng.below(15));
        }
        row.label = (row.x[bc] + row.x[cc] > 30.0) ? 1 : 0;
        m.rows.push_back(std::move(row));
    }
    return m;
}

}  // namespace citescan
