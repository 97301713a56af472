#include "citescan/store.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "citescan/normalize.hpp"

namespace citescan {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(SourceKind k) {
    switch (k) {
        case SourceKind::MAG: return "mag";
        case SourceKind::OA: return "oa";
        case SourceKind::CR: return "cr";
        case SourceKind::COCI: return "coci";
        case SourceKind::NATIVE: return "native";
    }
    return "native";
}

SourceKind source_kind_from_string(const std::string& s) {
    std::string t = to_lower(s);
    if (t == "mag") return SourceKind::MAG;
    if (t == "oa" || t == "openaire") return SourceKind::OA;
    if (t == "cr" || t == "crossref") return SourceKind::CR;
    if (t == "coci" || t == "oc") return SourceKind::COCI;
    if (t == "native") return SourceKind::NATIVE;
    throw UsageError("unknown source kind: " + s);
}

std::string source_key(SourceKind kind, const std::string& id) {
    return std::string(to_string(kind)) + "|" + id;
}

std::string reference_to_key(const std::string& raw, SourceKind origin) {
    std::string doi = canonical_doi(raw);
    if (looks_like_doi(doi)) return doi;
    return source_key(origin, raw);
}

namespace {

std::string title_year_key(const std::string& norm_title, std::optional<int> year) {
    return norm_title + "\x1f" + (year ? std::to_string(*year) : "-");
}

std::vector<std::string> own_link_keys(const Publication& pub) {
    std::vector<std::string> keys;
    if (!pub.doi.empty()) keys.push_back(pub.doi);
    for (const auto& [kind, id] : pub.source_ids) keys.push_back(source_key(kind, id));
    return keys;
}

// Minimal CSV field split; strips one layer of surrounding quotes.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') { quoted = !quoted; continue; }
        if (c == ',' && !quoted) {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    for (auto& f : out) {
        std::size_t b = f.find_first_not_of(" \t\r");
        std::size_t e = f.find_last_not_of(" \t\r");
        f = (b == std::string::npos) ? "" : f.substr(b, e - b + 1);
    }
    return out;
}

std::optional<Publication> parse_record(const std::string& line, SourceKind kind) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;

    Publication pub;
    pub.origin = kind;
    if (j.contains("doi") && j["doi"].is_string()) pub.doi = canonical_doi(j["doi"].get<std::string>());
    if (!pub.doi.empty() && !looks_like_doi(pub.doi)) pub.doi.clear();
    std::string native_id;
    if (j.contains("id") && j["id"].is_string()) native_id = j["id"].get<std::string>();
    if (native_id.empty() && pub.doi.empty()) return std::nullopt;
    if (!native_id.empty()) pub.source_ids[kind] = native_id;

    if (j.contains("title") && j["title"].is_string()) pub.title = j["title"].get<std::string>();
    pub.norm_title = normalize_title(pub.title);
    if (j.contains("year") && j["year"].is_number_integer()) pub.year = j["year"].get<int>();
    if (j.contains("type") && j["type"].is_string()) pub.kind_hint = j["type"].get<std::string>();

    if (j.contains("authors") && j["authors"].is_array()) {
        for (const auto& a : j["authors"]) {
            if (!a.is_object()) continue;
            AuthorRef ref;
            if (a.contains("id") && a["id"].is_string()) ref.author_id = a["id"].get<std::string>();
            if (a.contains("name") && a["name"].is_string()) ref.name = a["name"].get<std::string>();
            if (ref.author_id.empty() && ref.name.empty()) continue;
            pub.authors.push_back(std::move(ref));
        }
    }
    if (j.contains("references") && j["references"].is_array()) {
        for (const auto& r : j["references"]) {
            if (!r.is_string()) continue;
            std::string key = reference_to_key(r.get<std::string>(), kind);
            if (std::find(pub.references.begin(), pub.references.end(), key) ==
                pub.references.end()) {
                pub.references.push_back(key);
            }
        }
    }
    return pub;
}

}  // namespace

const Publication& CorpusStore::get(PubId id) const {
    if (id == 0 || id > pubs_.size()) throw NotFoundError("unknown pub_id " + std::to_string(id));
    return pubs_[id - 1];
}

std::string CorpusStore::key_of(const Publication& pub) const {
    if (!pub.doi.empty()) return pub.doi;
    if (!pub.source_ids.empty()) {
        const auto& [kind, id] = *pub.source_ids.begin();
        return source_key(kind, id);
    }
    return "pub|" + std::to_string(pub.pub_id);
}

const Publication* CorpusStore::resolve_key(const std::string& key) const {
    auto bar = key.find('|');
    if (bar == std::string::npos) {
        auto it = by_doi_.find(key);
        return it == by_doi_.end() ? nullptr : &pubs_[it->second - 1];
    }
    auto it = by_source_.find(key);
    return it == by_source_.end() ? nullptr : &pubs_[it->second - 1];
}

void CorpusStore::index_record(const Publication& pub) {
    if (!pub.doi.empty()) by_doi_.emplace(pub.doi, pub.pub_id);
    by_title_year_[title_year_key(pub.norm_title, pub.year)].push_back(pub.pub_id);
    for (const auto& a : pub.authors) {
        if (!a.author_id.empty()) by_author_[a.author_id].push_back(pub.pub_id);
    }
    for (const auto& [kind, id] : pub.source_ids) {
        by_source_.emplace(source_key(kind, id), pub.pub_id);
    }
}

void CorpusStore::add_link(const std::string& citing_key, const std::string& cited_key,
                           IngestStats& stats) {
    if (citing_key == cited_key) return;
    std::string pair = citing_key + "\x1f" + cited_key;
    if (!link_pairs_.insert(std::move(pair)).second) return;
    fwd_links_[citing_key].push_back(cited_key);
    rev_links_[cited_key].push_back(citing_key);
    ++n_links_;
    ++stats.links_stored;
}

bool CorpusStore::store_record(Publication&& pub, IngestStats& stats) {
    if (!pub.doi.empty() && by_doi_.count(pub.doi)) {
        ++stats.duplicates_skipped;
        return false;
    }
    for (const auto& [kind, id] : pub.source_ids) {
        if (by_source_.count(source_key(kind, id))) {
            ++stats.duplicates_skipped;
            return false;
        }
    }
    pub.pub_id = pubs_.size() + 1;
    const std::string citing_key = key_of(pub);
    for (const auto& ref : pub.references) add_link(citing_key, ref, stats);
    index_record(pub);
    pubs_.push_back(std::move(pub));
    ++stats.records_stored;
    return true;
}

IngestStats CorpusStore::ingest_dump(const fs::path& path, SourceKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dump file: " + path.string());

    IngestStats stats;
    std::string line;

    if (kind == SourceKind::COCI) {
        if (!std::getline(in, line)) return stats;
        auto header = split_csv(line);
        int citing_col = -1, cited_col = -1;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (to_lower(header[i]) == "citing") citing_col = static_cast<int>(i);
            if (to_lower(header[i]) == "cited") cited_col = static_cast<int>(i);
        }
        if (citing_col < 0 || cited_col < 0) {
            throw std::runtime_error("COCI file lacks citing/cited columns: " + path.string());
        }
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ++stats.records_read;
            auto fields = split_csv(line);
            std::size_t need = static_cast<std::size_t>(std::max(citing_col, cited_col));
            if (fields.size() <= need) { ++stats.malformed_skipped; continue; }
            std::string citing = canonical_doi(fields[static_cast<std::size_t>(citing_col)]);
            std::string cited = canonical_doi(fields[static_cast<std::size_t>(cited_col)]);
            if (!looks_like_doi(citing) || !looks_like_doi(cited) || citing == cited) {
                ++stats.malformed_skipped;
                continue;
            }
            std::uint64_t before = stats.links_stored;
            add_link(citing, cited, stats);
            if (stats.links_stored > before) ++stats.records_stored;
            else ++stats.duplicates_skipped;
        }
        return stats;
    }

    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++stats.records_read;
        auto pub = parse_record(line, kind);
        if (!pub) { ++stats.malformed_skipped; continue; }
        store_record(std::move(*pub), stats);
    }
    return stats;
}

namespace {
template <typename Map>
std::vector<const Publication*> ids_to_pubs(const std::vector<Publication>& pubs,
                                            const Map& ids) {
    std::vector<const Publication*> out;
    for (PubId id : ids) out.push_back(&pubs[id - 1]);
    std::sort(out.begin(), out.end(),
              [](const Publication* a, const Publication* b) { return a->pub_id < b->pub_id; });
    return out;
}
}  // namespace

std::vector<const Publication*> CorpusStore::query_doi(const std::string& doi) const {
    auto it = by_doi_.find(canonical_doi(doi));
    if (it == by_doi_.end()) return {};
    return {&pubs_[it->second - 1]};
}

std::vector<const Publication*> CorpusStore::query_title_year(const std::string& title,
                                                              std::optional<int> year) const {
    auto it = by_title_year_.find(title_year_key(normalize_title(title), year));
    if (it == by_title_year_.end()) return {};
    return ids_to_pubs(pubs_, it->second);
}

std::vector<const Publication*> CorpusStore::query_author(const std::string& author_id) const {
    auto it = by_author_.find(author_id);
    if (it == by_author_.end()) return {};
    return ids_to_pubs(pubs_, it->second);
}

std::vector<const Publication*> CorpusStore::query_source_id(SourceKind kind,
                                                             const std::string& id) const {
    auto it = by_source_.find(source_key(kind, id));
    if (it == by_source_.end()) return {};
    return {&pubs_[it->second - 1]};
}

Neighborhood CorpusStore::neighbors_of_keys(const std::vector<std::string>& own_keys) const {
    // Identity for de-duplication: stored pub_id when the key resolves,
    // else the DOI, else the raw key.
    std::unordered_set<std::string> self_ids;
    for (const auto& k : own_keys) self_ids.insert(k);
    PubId self_pub = 0;
    for (const auto& k : own_keys) {
        if (const Publication* p = resolve_key(k)) self_pub = p->pub_id;
    }

    auto collect = [&](const std::unordered_map<std::string, std::vector<std::string>>& adj) {
        std::map<std::string, PubKeyRef> by_identity;
        for (const auto& own : own_keys) {
            auto it = adj.find(own);
            if (it == adj.end()) continue;
            for (const auto& key : it->second) {
                if (self_ids.count(key)) continue;
                PubKeyRef ref;
                ref.key = key;
                std::string identity;
                if (const Publication* p = resolve_key(key)) {
                    if (p->pub_id == self_pub) continue;
                    ref.pub_id = p->pub_id;
                    ref.doi = p->doi;
                    char buf[24];
                    std::snprintf(buf, sizeof buf, "P%012llu",
                                  static_cast<unsigned long long>(p->pub_id));
                    identity = buf;
                } else {
                    if (looks_like_doi(key)) ref.doi = key;
                    identity = "U" + key;
                }
                by_identity.emplace(std::move(identity), std::move(ref));
            }
        }
        std::vector<PubKeyRef> out;
        out.reserve(by_identity.size());
        for (auto& [_, ref] : by_identity) out.push_back(std::move(ref));
        return out;
    };

    Neighborhood n;
    n.cited = collect(fwd_links_);
    n.citing = collect(rev_links_);
    return n;
}

Neighborhood CorpusStore::citation_neighbors(PubId id) const {
    return neighbors_of_keys(own_link_keys(get(id)));
}

Neighborhood CorpusStore::citation_neighbors_by_doi(const std::string& doi) const {
    std::string canon = canonical_doi(doi);
    auto it = by_doi_.find(canon);
    if (it != by_doi_.end()) return citation_neighbors(it->second);
    if (!fwd_links_.count(canon) && !rev_links_.count(canon)) {
        throw NotFoundError("unknown publication: " + doi);
    }
    return neighbors_of_keys({canon});
}

void CorpusStore::save(const fs::path& dir) const {
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "publications.jsonl");
        for (const auto& pub : pubs_) {
            json j;
            j["pub_id"] = pub.pub_id;
            j["doi"] = pub.doi;
            json sids = json::object();
            for (const auto& [kind, id] : pub.source_ids) sids[to_string(kind)] = id;
            j["source_ids"] = sids;
            j["title"] = pub.title;
            j["norm_title"] = pub.norm_title;
            if (pub.year) j["year"] = *pub.year;
            j["type"] = pub.kind_hint;
            json authors = json::array();
            for (const auto& a : pub.authors) authors.push_back({{"id", a.author_id}, {"name", a.name}});
            j["authors"] = authors;
            j["references"] = pub.references;
            j["source"] = to_string(pub.origin);
            out << j.dump() << "\n";
        }
    }
    {
        std::ofstream out(dir / "links.tsv");
        std::vector<std::string> keys;
        keys.reserve(fwd_links_.size());
        for (const auto& [k, _] : fwd_links_) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        for (const auto& k : keys) {
            auto targets = fwd_links_.at(k);
            std::sort(targets.begin(), targets.end());
            for (const auto& t : targets) out << k << "\t" << t << "\n";
        }
    }
    {
        std::ofstream out(dir / "manifest.json");
        json j{{"format_version", 1}, {"publications", pubs_.size()}, {"links", n_links_}};
        out << j.dump(2) << "\n";
    }
}

CorpusStore CorpusStore::load(const fs::path& dir) {
    CorpusStore store;
    std::ifstream pubs(dir / "publications.jsonl");
    if (pubs) {
        std::string line;
        while (std::getline(pubs, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            Publication pub;
            pub.pub_id = j.at("pub_id").get<PubId>();
            pub.doi = j.value("doi", "");
            const json sids = j.value("source_ids", json::object());
            for (const auto& [k, v] : sids.items()) {
                pub.source_ids[source_kind_from_string(k)] = v.get<std::string>();
            }
            pub.title = j.value("title", "");
            pub.norm_title = j.value("norm_title", "");
            if (j.contains("year")) pub.year = j["year"].get<int>();
            pub.kind_hint = j.value("type", "");
            for (const auto& a : j.value("authors", json::array())) {
                pub.authors.push_back({a.value("id", ""), a.value("name", "")});
            }
            pub.references = j.value("references", std::vector<std::string>{});
            pub.origin = source_kind_from_string(j.value("source", "native"));
            if (pub.pub_id != store.pubs_.size() + 1) {
                throw std::runtime_error("corrupt store: non-sequential pub_id in " +
                                         (dir / "publications.jsonl").string());
            }
            store.index_record(pub);
            store.pubs_.push_back(std::move(pub));
        }
    }
    std::ifstream links(dir / "links.tsv");
    if (links) {
        std::string line;
        IngestStats ignored;
        while (std::getline(links, line)) {
            auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            store.add_link(line.substr(0, tab), line.substr(tab + 1), ignored);
        }
    }
    return store;
}

}  // namespace citescan
