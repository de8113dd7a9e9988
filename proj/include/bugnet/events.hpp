#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bugnet/time.hpp"

namespace bugnet {

enum class EventKind { Create, CcAdd, Assign, Status, Resolution };

const char* event_kind_name(EventKind k);

/// One time-stamped field update on a bug. `value` holds the target user id
/// for CcAdd/Assign, the status or resolution string for Status/Resolution,
/// and is empty for Create.
struct ChangeEvent {
    std::string bug_id;
    Instant ts = 0;
    std::string actor_id;
    EventKind kind = EventKind::Create;
    std::string value;

    bool operator==(const ChangeEvent&) const = default;
};

enum class Category { Fix, Dup, Inv, Wof, Inc, Unresolved };
enum class Label { Valid, Faulty, Unlabeled };

const char* category_name(Category c);
const char* label_name(Label l);

/// Status/resolution vocabulary of a tracker community. Communities without
/// an incomplete status (so the INC category stays unpopulated) configure an
/// empty `incomplete_statuses` set.
struct TrackerVocabulary {
    std::set<std::string> resolved_statuses = {"RESOLVED", "VERIFIED", "CLOSED"};
    std::set<std::string> incomplete_statuses = {"INCOMPLETE"};
    std::map<std::string, Category> resolution_map = {
        {"FIXED", Category::Fix},
        {"DUPLICATE", Category::Dup},
        {"INVALID", Category::Inv},
        {"WONTFIX", Category::Wof},
    };

    /// Loads from a key/value text file; see README for the format.
    static TrackerVocabulary load(const std::string& path);
};

struct BugRecord {
    std::string bug_id;
    std::string reporter_id;
    Instant created_at = 0;
    std::vector<ChangeEvent> events;  // time-ordered, first is Create
    bool resolved = false;
    Category category = Category::Unresolved;
    Label label = Label::Unlabeled;
};

using Corpus = std::map<std::string, BugRecord>;

struct ParseOptions {
    bool strict = true;  // lenient mode skips and counts malformed lines
};

struct ParseResult {
    std::vector<ChangeEvent> events;
    std::size_t skipped = 0;                 // malformed lines in lenient mode
    std::vector<std::string> warnings;       // one entry per skipped line
};

/// Parses the JSON Lines event format. Lines beginning with '#' are comments;
/// blank lines are ignored. In strict mode the first malformed line raises
/// Error(MalformedLine) carrying its 1-based line number.
ParseResult parse_event_stream(std::istream& in, const ParseOptions& opts = {});
ParseResult parse_event_file(const std::string& path, const ParseOptions& opts = {});

/// Writes events in the canonical line format (fixed key order, ISO
/// timestamps). parse(serialize(events)) round-trips exactly, and
/// serialize(parse(bytes)) is byte-stable for canonical input.
void serialize_events(std::ostream& out, const std::vector<ChangeEvent>& events);

/// Groups events per bug, sorts each history by timestamp (stable on ties by
/// input order) and derives reporter, resolved flag, category and label.
/// `resolved` is decided by the final Status event in the history.
Corpus assemble_bug_records(const std::vector<ChangeEvent>& events,
                            const TrackerVocabulary& vocab = {},
                            std::vector<std::string>* warnings = nullptr);

/// Category of a resolved record: Inc if any Status event matches an
/// incomplete token (this overrides the final resolution), otherwise the
/// mapped final Resolution value. Unknown resolution strings yield
/// Unresolved plus a warning. Throws Error(CalledOnUnresolved) otherwise.
Category resolve_category(const BugRecord& record, const TrackerVocabulary& vocab = {},
                          std::vector<std::string>* warnings = nullptr);

/// Fix/Wof -> Valid, Dup/Inv/Inc -> Faulty. Throws Error(UnlabeledCategory)
/// for Unresolved.
Label label_validity(Category category);

struct CorpusStats {
    std::size_t total_bugs = 0;
    std::size_t total_events = 0;
    double changes_per_report = 0.0;  // 0 for an empty corpus
    std::size_t resolved_count = 0;
    std::map<Category, std::size_t> category_counts;     // Fix..Inc + Unresolved
    std::map<Category, double> category_fractions;       // count / resolved_count
};

CorpusStats corpus_stats(const Corpus& corpus);

/// Flattens a corpus back to a single time-sorted event stream (per-bug order
/// preserved on timestamp ties), suitable for serialize_events.
std::vector<ChangeEvent> flatten_corpus(const Corpus& corpus);

}  // namespace bugnet
