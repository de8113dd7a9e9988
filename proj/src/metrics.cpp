#include "bugnet/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stack>

#include "bugnet/error.hpp"
#include "bugnet/kernels.hpp"

namespace bugnet {

CentralitySolve eigenvector_centrality(const SimpleGraph& g, double tolerance, int max_iter) {
    const int n = g.node_count();
    assert(n >= 1);
    CentralitySolve solve;
    if (n == 1) {
        solve.values = {1.0};
        return solve;
    }

    const auto& ops = kernels::active();
    std::vector<double> v(n, 1.0), y(n);
    for (int it = 1; it <= max_iter; ++it) {
        // y = (A + I) v
        for (int i = 0; i < n; ++i) {
            double acc = v[i];
            for (int j : g.adj[i]) acc += v[j];
            y[i] = acc;
        }
        const double mu = ops.max_value(y.data(), y.size());
        // Residual of (v, mu - 1) on A: |A v - (mu-1) v| = |y - mu v|.
        const double residual = ops.max_abs_residual(y.data(), v.data(), mu, y.size());
        if (residual <= tolerance) {
            solve.values = std::move(v);
            solve.lambda = mu - 1.0;
            solve.iterations = it;
            solve.residual = residual;
            return solve;
        }
        ops.divide_inplace(y.data(), mu, y.size());
        std::swap(v, y);
    }
    throw Error(Errc::NoConvergence,
                "power iteration did not reach " + std::to_string(tolerance) + " within " +
                    std::to_string(max_iter) + " iterations");
}

std::vector<double> betweenness(const SimpleGraph& g) {
    const int n = g.node_count();
    std::vector<double> score(n, 0.0);
    std::vector<int> dist(n), sigma(n), order;
    std::vector<double> delta(n);
    std::vector<std::vector<int>> preds(n);
    order.reserve(n);

    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        order.clear();

        dist[s] = 0;
        sigma[s] = 1;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            order.push_back(u);
            for (int w : g.adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
                if (dist[w] == dist[u] + 1) {
                    sigma[w] += sigma[u];
                    preds[w].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int u : preds[w]) {
                delta[u] += static_cast<double>(sigma[u]) / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) score[w] += delta[w];
        }
    }
    // Each unordered pair was accumulated from both endpoints.
    for (double& x : score) x /= 2.0;
    return score;
}

std::vector<double> closeness(const SimpleGraph& g) {
    const int n = g.node_count();
    std::vector<double> score(n, 0.0);
    if (n < 2) return score;
    std::vector<int> dist(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<int> q;
        q.push(s);
        long long total = 0;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            total += dist[u];
            for (int w : g.adj[u]) {
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        score[s] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
    }
    return score;
}

std::vector<double> clustering_coefficient(const SimpleGraph& g) {
    const int n = g.node_count();
    std::vector<double> score(n, 0.0);
    std::vector<char> mark(n, 0);
    for (int v = 0; v < n; ++v) {
        const int k = g.degree(v);
        if (k < 2) continue;
        for (int u : g.adj[v]) mark[u] = 1;
        long long links = 0;
        for (int u : g.adj[v]) {
            for (int w : g.adj[u]) {
                if (w > u && mark[w]) ++links;
            }
        }
        for (int u : g.adj[v]) mark[u] = 0;
        score[v] = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
    }
    return score;
}

std::vector<int> coreness(const SimpleGraph& g) {
    // Batagelj-Zaversnik bucket peeling.
    const int n = g.node_count();
    std::vector<int> core(n), pos(n), order(n);
    if (n == 0) return core;
    int max_deg = 0;
    for (int v = 0; v < n; ++v) {
        core[v] = g.degree(v);
        max_deg = std::max(max_deg, core[v]);
    }
    std::vector<int> bin(max_deg + 2, 0);
    for (int v = 0; v < n; ++v) ++bin[core[v]];
    int start = 0;
    for (int d = 0; d <= max_deg; ++d) {
        const int count = bin[d];
        bin[d] = start;
        start += count;
    }
    for (int v = 0; v < n; ++v) {
        pos[v] = bin[core[v]];
        order[pos[v]] = v;
        ++bin[core[v]];
    }
    for (int d = max_deg; d >= 1; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    for (int i = 0; i < n; ++i) {
        const int v = order[i];
        for (int u : g.adj[v]) {
            if (core[u] > core[v]) {
                const int du = core[u];
                const int pu = pos[u];
                const int pw = bin[du];
                const int w = order[pw];
                if (u != w) {
                    std::swap(order[pu], order[pw]);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                ++bin[du];
                --core[u];
            }
        }
    }
    return core;
}

DegreeTriple degree_metrics(const CollaborationNetwork& net, const std::string& user_id) {
    DegreeTriple d;
    const int v = net.find_node(user_id);
    if (v < 0) return d;
    d.in = static_cast<int>(net.in_adj[v].size());
    d.out = static_cast<int>(net.out_adj[v].size());
    d.total = static_cast<int>(net.undirected_adj[v].size());
    return d;
}

SimpleGraph lcc_subgraph(const CollaborationNetwork& net, std::vector<int>& lcc_nodes) {
    lcc_nodes.clear();
    SimpleGraph g;
    if (net.lcc_id < 0) return g;
    std::vector<int> to_sub(net.node_count(), -1);
    for (int v = 0; v < net.node_count(); ++v) {
        if (net.component_id[v] == net.lcc_id) {
            to_sub[v] = static_cast<int>(lcc_nodes.size());
            lcc_nodes.push_back(v);
        }
    }
    g.adj.resize(lcc_nodes.size());
    for (std::size_t i = 0; i < lcc_nodes.size(); ++i) {
        for (int w : net.undirected_adj[lcc_nodes[i]]) {
            g.adj[i].push_back(to_sub[w]);  // same component, always mapped
        }
    }
    return g;
}

LccMetricsTable compute_lcc_metrics(const CollaborationNetwork& net, bool evcent_only,
                                    double tolerance, int max_iter) {
    LccMetricsTable table;
    SimpleGraph g = lcc_subgraph(net, table.lcc_nodes);
    for (std::size_t i = 0; i < table.lcc_nodes.size(); ++i) {
        table.to_subgraph[table.lcc_nodes[i]] = static_cast<int>(i);
    }
    if (g.node_count() == 0) return table;
    table.evcent = eigenvector_centrality(g, tolerance, max_iter);
    if (!evcent_only) {
        table.betweenness = ::bugnet::betweenness(g);
        table.closeness = ::bugnet::closeness(g);
        table.clustering = clustering_coefficient(g);
        table.coreness = ::bugnet::coreness(g);
    }
    return table;
}

NodeMetrics feature_vector(const CollaborationNetwork& net, const LccMetricsTable& table,
                           const std::string& user_id) {
    NodeMetrics m;
    const int v = net.find_node(user_id);
    if (v < 0) return m;  // absent: all zero
    const DegreeTriple d = degree_metrics(net, user_id);
    m.degree_in = d.in;
    m.degree_out = d.out;
    m.degree_total = d.total;
    const auto it = table.to_subgraph.find(v);
    if (it == table.to_subgraph.end()) return m;  // outside the LCC
    const int s = it->second;
    m.in_lcc = true;
    m.eigenvector = table.evcent.values[s];
    if (!table.betweenness.empty()) {
        m.betweenness = table.betweenness[s];
        m.closeness = table.closeness[s];
        m.clustering = table.clustering[s];
        m.coreness = table.coreness[s];
    }
    return m;
}

NodeMetrics feature_vector(const CollaborationNetwork& net, const std::string& user_id) {
    return feature_vector(net, compute_lcc_metrics(net), user_id);
}

}  // namespace bugnet
