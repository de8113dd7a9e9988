#include "bugnet/events.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bugnet/error.hpp"

namespace bugnet {

using nlohmann::json;

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Create: return "CREATE";
        case EventKind::CcAdd: return "CC_ADD";
        case EventKind::Assign: return "ASSIGN";
        case EventKind::Status: return "STATUS";
        case EventKind::Resolution: return "RESOLUTION";
    }
    return "?";
}

const char* category_name(Category c) {
    switch (c) {
        case Category::Fix: return "FIX";
        case Category::Dup: return "DUP";
        case Category::Inv: return "INV";
        case Category::Wof: return "WOF";
        case Category::Inc: return "INC";
        case Category::Unresolved: return "UNRESOLVED";
    }
    return "?";
}

const char* label_name(Label l) {
    switch (l) {
        case Label::Valid: return "Valid";
        case Label::Faulty: return "Faulty";
        case Label::Unlabeled: return "Unlabeled";
    }
    return "?";
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::OrphanEvent: return "OrphanEvent";
        case Errc::DuplicateCreate: return "DuplicateCreate";
        case Errc::CalledOnUnresolved: return "CalledOnUnresolved";
        case Errc::UnlabeledCategory: return "UnlabeledCategory";
        case Errc::UnsortedInput: return "UnsortedInput";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::EmptySample: return "EmptySample";
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::NoLccMembers: return "NoLccMembers";
        case Errc::SingleClassTraining: return "SingleClassTraining";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::Io: return "Io";
    }
    return "?";
}

namespace {

bool kind_from_string(const std::string& s, EventKind& out) {
    if (s == "CREATE") out = EventKind::Create;
    else if (s == "CC_ADD") out = EventKind::CcAdd;
    else if (s == "ASSIGN") out = EventKind::Assign;
    else if (s == "STATUS") out = EventKind::Status;
    else if (s == "RESOLUTION") out = EventKind::Resolution;
    else return false;
    return true;
}

// Parses one event line; returns the failure reason or empty on success.
std::string parse_line(const std::string& line, ChangeEvent& ev) {
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) return "invalid JSON";
    if (!j.is_object()) return "not a JSON object";
    if (j.size() != 5 || !j.contains("bug") || !j.contains("ts") || !j.contains("actor") ||
        !j.contains("type") || !j.contains("value")) {
        return "expected exactly the keys bug, ts, actor, type, value";
    }
    for (const auto& [key, val] : j.items()) {
        if (!val.is_string()) return "key '" + key + "' is not a string";
    }
    ev.bug_id = j["bug"].get<std::string>();
    ev.actor_id = j["actor"].get<std::string>();
    ev.value = j["value"].get<std::string>();
    const std::string type = j["type"].get<std::string>();
    if (!kind_from_string(type, ev.kind)) return "unknown type '" + type + "'";
    const auto ts = parse_instant(j["ts"].get<std::string>());
    if (!ts) return "unparseable timestamp '" + j["ts"].get<std::string>() + "'";
    ev.ts = *ts;
    if (ev.bug_id.empty()) return "empty bug id";
    if (ev.actor_id.empty()) return "empty actor id";
    if (ev.kind == EventKind::Create && !ev.value.empty()) return "CREATE with non-empty value";
    if (ev.kind != EventKind::Create && ev.value.empty()) {
        return std::string(event_kind_name(ev.kind)) + " with empty value";
    }
    return {};
}

}  // namespace

ParseResult parse_event_stream(std::istream& in, const ParseOptions& opts) {
    ParseResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        ChangeEvent ev;
        const std::string why = parse_line(line, ev);
        if (!why.empty()) {
            if (opts.strict) {
                throw Error(Errc::MalformedLine, "line " + std::to_string(lineno) + ": " + why,
                            lineno);
            }
            ++result.skipped;
            result.warnings.push_back("line " + std::to_string(lineno) + ": " + why);
            continue;
        }
        result.events.push_back(std::move(ev));
    }
    return result;
}

ParseResult parse_event_file(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    return parse_event_stream(in, opts);
}

void serialize_events(std::ostream& out, const std::vector<ChangeEvent>& events) {
    for (const auto& ev : events) {
        out << "{\"bug\":" << json(ev.bug_id).dump()
            << ",\"ts\":\"" << format_instant(ev.ts)
            << "\",\"actor\":" << json(ev.actor_id).dump()
            << ",\"type\":\"" << event_kind_name(ev.kind)
            << "\",\"value\":" << json(ev.value).dump() << "}\n";
    }
}

Corpus assemble_bug_records(const std::vector<ChangeEvent>& events,
                            const TrackerVocabulary& vocab,
                            std::vector<std::string>* warnings) {
    Corpus corpus;
    for (const auto& ev : events) {
        if (ev.kind != EventKind::Create) continue;
        auto [it, inserted] = corpus.try_emplace(ev.bug_id);
        if (!inserted) {
            throw Error(Errc::DuplicateCreate, "two CREATE events for bug " + ev.bug_id);
        }
        it->second.bug_id = ev.bug_id;
    }
    for (const auto& ev : events) {
        auto it = corpus.find(ev.bug_id);
        if (it == corpus.end()) {
            throw Error(Errc::OrphanEvent, std::string(event_kind_name(ev.kind)) +
                                               " event for unknown bug " + ev.bug_id);
        }
        it->second.events.push_back(ev);
    }
    for (auto& [bug_id, record] : corpus) {
        std::stable_sort(record.events.begin(), record.events.end(),
                         [](const ChangeEvent& a, const ChangeEvent& b) { return a.ts < b.ts; });
        if (record.events.front().kind != EventKind::Create) {
            throw Error(Errc::OrphanEvent,
                        "bug " + bug_id + " has an event earlier than its CREATE");
        }
        record.reporter_id = record.events.front().actor_id;
        record.created_at = record.events.front().ts;

        const ChangeEvent* last_status = nullptr;
        for (const auto& ev : record.events) {
            if (ev.kind == EventKind::Status) last_status = &ev;
        }
        record.resolved = last_status != nullptr && vocab.resolved_statuses.count(last_status->value) > 0;
        if (record.resolved) {
            record.category = resolve_category(record, vocab, warnings);
            record.label = record.category == Category::Unresolved ? Label::Unlabeled
                                                                   : label_validity(record.category);
        } else {
            record.category = Category::Unresolved;
            record.label = Label::Unlabeled;
        }
    }
    return corpus;
}

Category resolve_category(const BugRecord& record, const TrackerVocabulary& vocab,
                          std::vector<std::string>* warnings) {
    if (!record.resolved) {
        throw Error(Errc::CalledOnUnresolved, "bug " + record.bug_id + " is not resolved");
    }
    // The incomplete-status rule overrides the final resolution, so
    // categories stay disjoint.
    for (const auto& ev : record.events) {
        if (ev.kind == EventKind::Status && vocab.incomplete_statuses.count(ev.value) > 0) {
            return Category::Inc;
        }
    }
    const ChangeEvent* last_resolution = nullptr;
    for (const auto& ev : record.events) {
        if (ev.kind == EventKind::Resolution) last_resolution = &ev;
    }
    if (last_resolution == nullptr) {
        if (warnings) {
            warnings->push_back("bug " + record.bug_id + ": resolved without a RESOLUTION event");
        }
        return Category::Unresolved;
    }
    auto it = vocab.resolution_map.find(last_resolution->value);
    if (it == vocab.resolution_map.end()) {
        if (warnings) {
            warnings->push_back("bug " + record.bug_id + ": unknown resolution '" +
                                last_resolution->value + "'");
        }
        return Category::Unresolved;
    }
    return it->second;
}

Label label_validity(Category category) {
    switch (category) {
        case Category::Fix:
        case Category::Wof:
            return Label::Valid;
        case Category::Dup:
        case Category::Inv:
        case Category::Inc:
            return Label::Faulty;
        case Category::Unresolved:
            break;
    }
    throw Error(Errc::UnlabeledCategory, "UNRESOLVED has no validity label");
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    stats.total_bugs = corpus.size();
    for (const auto& [bug_id, record] : corpus) {
        stats.total_events += record.events.size();
        if (record.resolved) {
            ++stats.resolved_count;
            ++stats.category_counts[record.category];
        }
    }
    if (stats.total_bugs > 0) {
        stats.changes_per_report =
            static_cast<double>(stats.total_events) / static_cast<double>(stats.total_bugs);
    }
    for (Category c : {Category::Fix, Category::Dup, Category::Inv, Category::Wof, Category::Inc,
                       Category::Unresolved}) {
        stats.category_counts.try_emplace(c, 0);
        stats.category_fractions[c] =
            stats.resolved_count == 0
                ? 0.0
                : static_cast<double>(stats.category_counts[c]) /
                      static_cast<double>(stats.resolved_count);
    }
    return stats;
}

std::vector<ChangeEvent> flatten_corpus(const Corpus& corpus) {
    std::vector<ChangeEvent> all;
    for (const auto& [bug_id, record] : corpus) {
        all.insert(all.end(), record.events.begin(), record.events.end());
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const ChangeEvent& a, const ChangeEvent& b) { return a.ts < b.ts; });
    return all;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

TrackerVocabulary TrackerVocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path);
    TrackerVocabulary vocab;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::InvalidConfig,
                        path + " line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "resolved_statuses") {
            vocab.resolved_statuses.clear();
            for (const auto& s : split_list(value)) vocab.resolved_statuses.insert(s);
        } else if (key == "incomplete_statuses") {
            vocab.incomplete_statuses.clear();
            for (const auto& s : split_list(value)) vocab.incomplete_statuses.insert(s);
        } else if (key == "resolution_map") {
            vocab.resolution_map.clear();
            for (const auto& pair : split_list(value)) {
                const std::size_t colon = pair.find(':');
                if (colon == std::string::npos) {
                    throw Error(Errc::InvalidConfig, path + " line " + std::to_string(lineno) +
                                                         ": resolution_map entries are FROM:TO");
                }
                const std::string from = trim(pair.substr(0, colon));
                const std::string to = trim(pair.substr(colon + 1));
                Category cat;
                if (to == "FIX") cat = Category::Fix;
                else if (to == "DUP") cat = Category::Dup;
                else if (to == "INV") cat = Category::Inv;
                else if (to == "WOF") cat = Category::Wof;
                else if (to == "INC") cat = Category::Inc;
                else {
                    throw Error(Errc::InvalidConfig, path + " line " + std::to_string(lineno) +
                                                         ": unknown category '" + to + "'");
                }
                vocab.resolution_map[from] = cat;
            }
        } else {
            throw Error(Errc::InvalidConfig,
                        path + " line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return vocab;
}

}  // namespace bugnet
