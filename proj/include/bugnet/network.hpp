#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bugnet/events.hpp"
#include "bugnet/time.hpp"

namespace bugnet {

struct EdgeTally {
    std::int32_t cc = 0;
    std::int32_t assign = 0;
};

/// Directed multigraph of CC/ASSIGN interactions inside one time window.
/// Edge direction is actor -> affected user; self-loops are dropped.
/// Multiplicities are kept as per-kind tallies; the simple directed and
/// undirected adjacency views collapse them.
struct CollaborationNetwork {
    TimeInterval window;

    std::vector<std::string> node_ids;  // index -> user id, first-appearance order
    std::unordered_map<std::string, int> node_index;

    struct Edge {
        int src = 0;
        int dst = 0;
        EdgeTally tally;
    };
    std::vector<Edge> edges;  // sorted by (src, dst)

    std::vector<std::vector<int>> undirected_adj;  // simple projection, sorted lists
    std::vector<std::vector<int>> out_adj;         // directed simple, sorted
    std::vector<std::vector<int>> in_adj;

    std::vector<int> component_id;     // per node, under the undirected projection
    std::vector<int> component_sizes;  // per component index
    int lcc_id = -1;                   // -1 for the empty network

    int node_count() const { return static_cast<int>(node_ids.size()); }

    /// -1 when the user does not appear in the window.
    int find_node(const std::string& user_id) const {
        auto it = node_index.find(user_id);
        return it == node_index.end() ? -1 : it->second;
    }

    bool in_lcc(int node) const { return node >= 0 && component_id[node] == lcc_id; }
};

/// Aggregates the CC_ADD/ASSIGN events of `events` that fall inside `window`
/// into a collaboration network. `events` must be sorted by timestamp.
CollaborationNetwork build_window_network(std::span<const ChangeEvent> events,
                                          const TimeInterval& window);

/// Node ids of the largest connected component (ties broken by the smallest
/// component index, i.e. earliest discovery order). Empty for an empty network.
std::set<std::string> largest_connected_component(const CollaborationNetwork& net);

/// Binary-searchable view over a time-sorted event stream; slice() returns
/// the events with window.start <= ts < window.end in O(log n + k). Holds
/// the vector's buffer (which survives moves of the vector object), so it
/// stays valid until the events are destroyed or reallocated.
class WindowIndex {
public:
    WindowIndex() = default;
    explicit WindowIndex(const std::vector<ChangeEvent>& events);  // throws UnsortedInput

    std::span<const ChangeEvent> slice(const TimeInterval& window) const;
    std::span<const ChangeEvent> all() const { return {data_, size_}; }

private:
    const ChangeEvent* data_ = nullptr;
    std::size_t size_ = 0;
};

/// Edge-list dump: "# window <start_iso> <end_iso>" header, then one
/// "source<TAB>target<TAB>cc_count<TAB>assign_count" line per directed edge,
/// sorted by (source id, target id).
void dump_network(std::ostream& out, const CollaborationNetwork& net);

}  // namespace bugnet
