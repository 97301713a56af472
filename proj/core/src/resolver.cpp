#include "citescan/resolver.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "citescan/normalize.hpp"

namespace citescan {

using nlohmann::json;

const char* to_string(MatchMethod m) {
    switch (m) {
        case MatchMethod::BY_DOI: return "by_doi";
        case MatchMethod::BY_TITLE_YEAR: return "by_title_year";
        case MatchMethod::AUTHOR_EXPANSION: return "author_expansion";
        case MatchMethod::FALLBACK_OA: return "fallback_oa";
        case MatchMethod::FALLBACK_CR: return "fallback_cr";
    }
    return "?";
}

const char* to_string(SectionLabel s) {
    switch (s) {
        case SectionLabel::A: return "A";
        case SectionLabel::B: return "B";
        case SectionLabel::C: return "C";
    }
    return "?";
}

SectionLabel classify_section(int listed, int matched, int total_retrieved) {
    if (listed < 0 || matched < 0 || matched > listed || total_retrieved < matched) {
        throw std::invalid_argument("classify_section: inconsistent counts");
    }
    if (listed == 0) return SectionLabel::C;
    // integer arithmetic keeps the 70% boundary exact and inclusive
    if (matched > 15 || 10 * matched >= 7 * listed) return SectionLabel::A;
    if (10 * total_retrieved >= 7 * listed) return SectionLabel::B;
    return SectionLabel::C;
}

namespace {

const Publication* pick_best(std::vector<const Publication*> hits, SourceKind origin) {
    const Publication* best = nullptr;
    for (const Publication* p : hits) {
        if (p->origin != origin) continue;
        if (!best || p->references.size() > best->references.size() ||
            (p->references.size() == best->references.size() && p->pub_id < best->pub_id)) {
            best = p;
        }
    }
    return best;
}

}  // namespace

Resolution Resolver::match_entry(const CvEntry& entry) const {
    Resolution r;
    r.entry_id = entry.entry_id;
    if (!entry.doi.empty()) {
        auto hits = store_.query_doi(entry.doi);
        if (!hits.empty()) {
            r.matched = true;
            r.pub = hits.front()->pub_id;
            r.method = MatchMethod::BY_DOI;
            return r;
        }
    }
    auto hits = store_.query_title_year(entry.title, entry.year);
    for (auto [origin, method] : {std::pair{SourceKind::MAG, MatchMethod::BY_TITLE_YEAR},
                                  std::pair{SourceKind::OA, MatchMethod::FALLBACK_OA},
                                  std::pair{SourceKind::CR, MatchMethod::FALLBACK_CR}}) {
        if (const Publication* best = pick_best(hits, origin)) {
            r.matched = true;
            r.pub = best->pub_id;
            r.method = method;
            return r;
        }
    }
    return r;
}

std::vector<PubId> Resolver::expand_by_author(const AuthorProfile& profile,
                                              const std::set<PubId>& already_matched) const {
    std::set<std::string> known_dois;
    for (PubId id : already_matched) {
        const auto& doi = store_.get(id).doi;
        if (!doi.empty()) known_dois.insert(doi);
    }
    std::set<PubId> seen;
    std::vector<PubId> extra;
    for (const auto& author_id : profile.author_ids) {
        for (const Publication* p : store_.query_author(author_id)) {
            if (already_matched.count(p->pub_id) || seen.count(p->pub_id)) continue;
            if (!p->doi.empty() && known_dois.count(p->doi)) continue;
            seen.insert(p->pub_id);
            if (!p->doi.empty()) known_dois.insert(p->doi);
            extra.push_back(p->pub_id);
        }
    }
    std::sort(extra.begin(), extra.end());
    return extra;
}

Neighborhood Resolver::harvest_citations(PubId pub) const {
    return store_.citation_neighbors(pub);
}

Resolver::ResolvedPerson Resolver::resolve_person(const RosterPerson& person) const {
    ResolvedPerson out;
    out.profile.person_id = person.person_id;
    out.profile.role = person.role;
    out.listed = static_cast<int>(person.cv.size());

    std::set<PubId> matched;
    for (const auto& entry : person.cv) {
        Resolution r = match_entry(entry);
        if (r.matched) matched.insert(r.pub);
        else out.unresolved.push_back(entry.entry_id);
    }
    out.matched = static_cast<int>(matched.size());

    // Author ids come from the matched publications. When the roster names
    // the person, only identically-named author entries contribute; there is
    // no fuzzy matching.
    std::string norm_name = normalize_title(person.name);
    for (PubId id : matched) {
        for (const auto& a : store_.get(id).authors) {
            if (a.author_id.empty()) continue;
            if (!norm_name.empty() && normalize_title(a.name) != norm_name) continue;
            out.profile.author_ids.insert(a.author_id);
        }
    }

    out.profile.publications.assign(matched.begin(), matched.end());
    for (PubId id : expand_by_author(out.profile, matched)) {
        out.profile.publications.push_back(id);
    }
    std::sort(out.profile.publications.begin(), out.profile.publications.end());
    out.profile.publications.erase(
        std::unique(out.profile.publications.begin(), out.profile.publications.end()),
        out.profile.publications.end());
    return out;
}

namespace {

DossierPub to_dossier_pub(const Publication& p) {
    DossierPub d;
    d.pub_id = p.pub_id;
    d.doi = p.doi;
    d.kind_hint = p.kind_hint;
    for (const auto& a : p.authors) {
        if (!a.author_id.empty()) d.author_ids.push_back(a.author_id);
    }
    return d;
}

std::string neighbor_node_key(const PubKeyRef& ref, const CorpusStore& store) {
    if (ref.resolved()) {
        const Publication& p = store.get(ref.pub_id);
        return p.doi.empty() ? "pub|" + std::to_string(p.pub_id) : p.doi;
    }
    return ref.doi.empty() ? ref.key : ref.doi;
}

}  // namespace

Dossier Resolver::build_dossier(const RosterPerson& candidate,
                                const std::vector<RosterPerson>& commission) const {
    if (commission.empty()) throw std::invalid_argument("build_dossier: empty commission");

    Dossier d;
    d.candidate_id = candidate.person_id;
    d.outcome_label = candidate.outcome;

    ResolvedPerson cand = resolve_person(candidate);
    d.candidate = cand.profile;
    d.listed_count = cand.listed;
    d.matched_count = cand.matched;
    d.unresolved_entries = cand.unresolved;

    std::set<PubId> cand_set(cand.profile.publications.begin(), cand.profile.publications.end());
    std::set<PubId> comm_set;
    for (const auto& member : commission) {
        ResolvedPerson m = resolve_person(member);
        comm_set.insert(m.profile.publications.begin(), m.profile.publications.end());
        d.commission.push_back(std::move(m.profile));
    }

    // Co-authored: author set intersects the candidate profile and at least
    // one commission profile. Such publications belong to both sets.
    auto intersects = [](const std::vector<AuthorRef>& authors,
                         const std::set<std::string>& ids) {
        return std::any_of(authors.begin(), authors.end(), [&](const AuthorRef& a) {
            return !a.author_id.empty() && ids.count(a.author_id) > 0;
        });
    };
    std::set<PubId> all(cand_set);
    all.insert(comm_set.begin(), comm_set.end());
    std::set<PubId> coauthored;
    for (PubId id : all) {
        const Publication& p = store_.get(id);
        if (!intersects(p.authors, d.candidate.author_ids)) continue;
        bool with_member = std::any_of(d.commission.begin(), d.commission.end(),
                                       [&](const AuthorProfile& m) {
                                           return intersects(p.authors, m.author_ids);
                                       });
        if (with_member) coauthored.insert(id);
    }
    cand_set.insert(coauthored.begin(), coauthored.end());
    comm_set.insert(coauthored.begin(), coauthored.end());

    d.total_retrieved_count = static_cast<int>(cand_set.size());
    d.section = classify_section(d.listed_count, d.matched_count, d.total_retrieved_count);

    for (PubId id : cand_set) d.candidate_pubs.push_back(to_dossier_pub(store_.get(id)));
    for (PubId id : comm_set) d.commission_pubs.push_back(to_dossier_pub(store_.get(id)));
    for (PubId id : coauthored) {
        d.coauthored_keys.push_back(to_dossier_pub(store_.get(id)).node_key());
    }
    std::sort(d.coauthored_keys.begin(), d.coauthored_keys.end());

    for (PubId id : all) {
        const Publication& p = store_.get(id);
        DossierNeighborhood n;
        Neighborhood raw = harvest_citations(id);
        for (const auto& ref : raw.cited) n.cited.push_back(neighbor_node_key(ref, store_));
        for (const auto& ref : raw.citing) n.citing.push_back(neighbor_node_key(ref, store_));
        std::sort(n.cited.begin(), n.cited.end());
        n.cited.erase(std::unique(n.cited.begin(), n.cited.end()), n.cited.end());
        std::sort(n.citing.begin(), n.citing.end());
        n.citing.erase(std::unique(n.citing.begin(), n.citing.end()), n.citing.end());
        d.neighborhoods.emplace(to_dossier_pub(p).node_key(), std::move(n));
    }
    return d;
}

// ---- roster / dossier serialization ----------------------------------------

namespace {

CvEntry parse_cv_entry(const json& j, std::size_t index) {
    CvEntry e;
    e.entry_id = j.value("entry_id", "e" + std::to_string(index));
    e.title = j.value("title", "");
    if (e.title.empty()) throw std::runtime_error("roster cv entry with empty title");
    if (j.contains("year") && j["year"].is_number_integer()) e.year = j["year"].get<int>();
    e.doi = canonical_doi(j.value("doi", ""));
    if (!looks_like_doi(e.doi)) e.doi.clear();
    e.declared_kind = j.value("declared_kind", "");
    return e;
}

std::optional<Outcome> parse_outcome(const json& j) {
    if (!j.contains("outcome") || !j["outcome"].is_string()) return std::nullopt;
    std::string s = to_lower(j["outcome"].get<std::string>());
    if (s == "pass") return Outcome::PASS;
    if (s == "fail") return Outcome::FAIL;
    throw std::runtime_error("roster outcome must be pass or fail, got: " + s);
}

}  // namespace

Roster load_roster(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open roster file: " + path.string());
    json doc = json::parse(in);
    const json& people = doc.is_array() ? doc : doc.at("people");

    Roster roster;
    for (const auto& pj : people) {
        RosterPerson p;
        p.person_id = pj.at("person_id").get<std::string>();
        std::string role = to_lower(pj.at("role").get<std::string>());
        if (role == "candidate") p.role = Role::CANDIDATE;
        else if (role == "commission") p.role = Role::COMMISSION;
        else throw std::runtime_error("roster role must be candidate or commission: " + role);
        p.name = pj.value("name", "");
        p.outcome = parse_outcome(pj);
        std::size_t i = 0;
        for (const auto& ej : pj.value("cv", json::array())) p.cv.push_back(parse_cv_entry(ej, i++));
        (p.role == Role::CANDIDATE ? roster.candidates : roster.commission).push_back(std::move(p));
    }
    return roster;
}

namespace {

json profile_to_json(const AuthorProfile& p) {
    return json{{"person_id", p.person_id},
                {"role", p.role == Role::CANDIDATE ? "candidate" : "commission"},
                {"author_ids", p.author_ids},
                {"publications", p.publications}};
}

AuthorProfile profile_from_json(const json& j) {
    AuthorProfile p;
    p.person_id = j.at("person_id").get<std::string>();
    p.role = j.at("role").get<std::string>() == "candidate" ? Role::CANDIDATE : Role::COMMISSION;
    for (const auto& a : j.at("author_ids")) p.author_ids.insert(a.get<std::string>());
    p.publications = j.at("publications").get<std::vector<PubId>>();
    return p;
}

json pub_to_json(const DossierPub& p) {
    return json{{"pub_id", p.pub_id}, {"doi", p.doi}, {"type", p.kind_hint},
                {"author_ids", p.author_ids}};
}

DossierPub pub_from_json(const json& j) {
    DossierPub p;
    p.pub_id = j.at("pub_id").get<PubId>();
    p.doi = j.value("doi", "");
    p.kind_hint = j.value("type", "");
    p.author_ids = j.value("author_ids", std::vector<std::string>{});
    return p;
}

}  // namespace

void save_dossier(const Dossier& d, const std::filesystem::path& path) {
    json j;
    j["candidate_id"] = d.candidate_id;
    j["candidate"] = profile_to_json(d.candidate);
    json comm = json::array();
    for (const auto& m : d.commission) comm.push_back(profile_to_json(m));
    j["commission"] = comm;
    json cp = json::array(), mp = json::array();
    for (const auto& p : d.candidate_pubs) cp.push_back(pub_to_json(p));
    for (const auto& p : d.commission_pubs) mp.push_back(pub_to_json(p));
    j["candidate_pubs"] = cp;
    j["commission_pubs"] = mp;
    j["coauthored"] = d.coauthored_keys;
    j["section"] = to_string(d.section);
    j["listed_count"] = d.listed_count;
    j["matched_count"] = d.matched_count;
    j["total_retrieved_count"] = d.total_retrieved_count;
    if (d.outcome_label) j["outcome"] = (*d.outcome_label == Outcome::PASS ? "pass" : "fail");
    j["unresolved_entries"] = d.unresolved_entries;
    json nb = json::object();
    for (const auto& [key, n] : d.neighborhoods) {
        nb[key] = json{{"cited", n.cited}, {"citing", n.citing}};
    }
    j["neighborhoods"] = nb;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dossier file: " + path.string());
    out << j.dump(2) << "\n";
}

Dossier load_dossier(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dossier file: " + path.string());
    json j = json::parse(in);
    Dossier d;
    d.candidate_id = j.at("candidate_id").get<std::string>();
    d.candidate = profile_from_json(j.at("candidate"));
    for (const auto& m : j.at("commission")) d.commission.push_back(profile_from_json(m));
    for (const auto& p : j.at("candidate_pubs")) d.candidate_pubs.push_back(pub_from_json(p));
    for (const auto& p : j.at("commission_pubs")) d.commission_pubs.push_back(pub_from_json(p));
    d.coauthored_keys = j.value("coauthored", std::vector<std::string>{});
    std::string s = j.at("section").get<std::string>();
    d.section = s == "A" ? SectionLabel::A : (s == "B" ? SectionLabel::B : SectionLabel::C);
    d.listed_count = j.at("listed_count").get<int>();
    d.matched_count = j.at("matched_count").get<int>();
    d.total_retrieved_count = j.at("total_retrieved_count").get<int>();
    if (j.contains("outcome")) {
        d.outcome_label = j["outcome"].get<std::string>() == "pass" ? Outcome::PASS : Outcome::FAIL;
    }
    d.unresolved_entries = j.value("unresolved_entries", std::vector<std::string>{});
    for (const auto& [key, n] : j.at("neighborhoods").items()) {
        DossierNeighborhood nb;
        nb.cited = n.value("cited", std::vector<std::string>{});
        nb.citing = n.value("citing", std::vector<std::string>{});
        d.neighborhoods.emplace(key, std::move(nb));
    }
    return d;
}

}  // namespace citescan
