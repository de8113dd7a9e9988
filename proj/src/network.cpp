#include "bugnet/network.hpp"

#include <algorithm>
#include <ostream>
#include <queue>

#include "bugnet/error.hpp"

namespace bugnet {

namespace {

int intern(CollaborationNetwork& net, const std::string& user_id) {
    auto [it, inserted] = net.node_index.try_emplace(user_id, net.node_count());
    if (inserted) net.node_ids.push_back(user_id);
    return it->second;
}

void sort_unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void compute_components(CollaborationNetwork& net) {
    const int n = net.node_count();
    net.component_id.assign(n, -1);
    net.component_sizes.clear();
    for (int start = 0; start < n; ++start) {
        if (net.component_id[start] != -1) continue;
        const int comp = static_cast<int>(net.component_sizes.size());
        int size = 0;
        std::queue<int> q;
        q.push(start);
        net.component_id[start] = comp;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            ++size;
            for (int v : net.undirected_adj[u]) {
                if (net.component_id[v] == -1) {
                    net.component_id[v] = comp;
                    q.push(v);
                }
            }
        }
        net.component_sizes.push_back(size);
    }
    net.lcc_id = -1;
    int best = 0;
    for (int c = 0; c < static_cast<int>(net.component_sizes.size()); ++c) {
        if (net.component_sizes[c] > best) {  // strict: ties keep the smaller index
            best = net.component_sizes[c];
            net.lcc_id = c;
        }
    }
}

}  // namespace

CollaborationNetwork build_window_network(std::span<const ChangeEvent> events,
                                          const TimeInterval& window) {
    CollaborationNetwork net;
    net.window = window;

    std::unordered_map<std::int64_t, EdgeTally> tallies;
    std::vector<std::int64_t> keys;  // first-appearance order of edges
    for (const auto& ev : events) {
        if (!window.contains(ev.ts)) continue;
        if (ev.kind != EventKind::CcAdd && ev.kind != EventKind::Assign) continue;
        if (ev.actor_id == ev.value) continue;  // self-loops dropped
        const int src = intern(net, ev.actor_id);
        const int dst = intern(net, ev.value);
        const std::int64_t key = static_cast<std::int64_t>(src) << 32 | static_cast<std::uint32_t>(dst);
        auto [it, inserted] = tallies.try_emplace(key);
        if (inserted) keys.push_back(key);
        if (ev.kind == EventKind::CcAdd) ++it->second.cc;
        else ++it->second.assign;
    }

    std::sort(keys.begin(), keys.end());
    net.edges.reserve(keys.size());
    const int n = net.node_count();
    net.undirected_adj.assign(n, {});
    net.out_adj.assign(n, {});
    net.in_adj.assign(n, {});
    for (std::int64_t key : keys) {
        const int src = static_cast<int>(key >> 32);
        const int dst = static_cast<int>(key & 0xffffffff);
        net.edges.push_back({src, dst, tallies[key]});
        net.out_adj[src].push_back(dst);
        net.in_adj[dst].push_back(src);
        net.undirected_adj[src].push_back(dst);
        net.undirected_adj[dst].push_back(src);
    }
    for (auto& adj : net.undirected_adj) sort_unique(adj);
    for (auto& adj : net.out_adj) sort_unique(adj);
    for (auto& adj : net.in_adj) sort_unique(adj);

    compute_components(net);
    return net;
}

std::set<std::string> largest_connected_component(const CollaborationNetwork& net) {
    std::set<std::string> out;
    if (net.lcc_id < 0) return out;
    for (int i = 0; i < net.node_count(); ++i) {
        if (net.component_id[i] == net.lcc_id) out.insert(net.node_ids[i]);
    }
    return out;
}

WindowIndex::WindowIndex(const std::vector<ChangeEvent>& events)
    : data_(events.data()), size_(events.size()) {
    for (std::size_t i = 1; i < size_; ++i) {
        if (data_[i].ts < data_[i - 1].ts) {
            throw Error(Errc::UnsortedInput,
                        "event " + std::to_string(i) + " is out of timestamp order");
        }
    }
}

std::span<const ChangeEvent> WindowIndex::slice(const TimeInterval& window) const {
    const ChangeEvent* lo =
        std::lower_bound(data_, data_ + size_, window.start,
                         [](const ChangeEvent& e, Instant t) { return e.ts < t; });
    const ChangeEvent* hi =
        std::lower_bound(lo, data_ + size_, window.end,
                         [](const ChangeEvent& e, Instant t) { return e.ts < t; });
    return {lo, static_cast<std::size_t>(hi - lo)};
}

void dump_network(std::ostream& out, const CollaborationNetwork& net) {
    out << "# window " << format_instant(net.window.start) << ' '
        << format_instant(net.window.end) << '\n';
    std::vector<const CollaborationNetwork::Edge*> order;
    order.reserve(net.edges.size());
    for (const auto& e : net.edges) order.push_back(&e);
    std::sort(order.begin(), order.end(),
              [&](const CollaborationNetwork::Edge* a, const CollaborationNetwork::Edge* b) {
                  const auto& sa = net.node_ids[a->src];
                  const auto& sb = net.node_ids[b->src];
                  if (sa != sb) return sa < sb;
                  return net.node_ids[a->dst] < net.node_ids[b->dst];
              });
    for (const auto* e : order) {
        out << net.node_ids[e->src] << '\t' << net.node_ids[e->dst] << '\t' << e->tally.cc << '\t'
            << e->tally.assign << '\n';
    }
}

}  // namespace bugnet
