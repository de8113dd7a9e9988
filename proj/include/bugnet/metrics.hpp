#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "bugnet/network.hpp"

namespace bugnet {

/// Undirected simple graph as sorted adjacency lists; the working
/// representation for all LCC-restricted measures.
struct SimpleGraph {
    std::vector<std::vector<int>> adj;

    int node_count() const { return static_cast<int>(adj.size()); }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

/// Result of the dominant-eigenpair solve. values is max-normalized (largest
/// entry exactly 1) and strictly positive on a connected graph; residual is
/// the max-norm of A*v - lambda*v for the reported pair.
struct CentralitySolve {
    std::vector<double> values;
    double lambda = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// Power iteration on A + I (same eigenvectors as A, shifted spectrum; the
/// shift rules out bipartite oscillation on connected graphs). The reported
/// lambda is the A-eigenvalue, i.e. the (A+I)-eigenvalue minus one. Requires
/// a connected graph with >= 1 node. A single isolated node yields value 1.0
/// and lambda 0 by convention. Throws Error(NoConvergence) after max_iter.
CentralitySolve eigenvector_centrality(const SimpleGraph& g, double tolerance = 1e-10,
                                       int max_iter = 10000);

/// Brandes betweenness on a connected graph: unordered pairs counted once,
/// endpoints excluded, fractional credit across equal-length paths.
std::vector<double> betweenness(const SimpleGraph& g);

/// 1 / sum of BFS distances to all other nodes; 0 for a single node.
/// Requires a connected graph.
std::vector<double> closeness(const SimpleGraph& g);

/// Links among neighbors / (k choose 2); 0 for degree < 2.
std::vector<double> clustering_coefficient(const SimpleGraph& g);

/// k-core decomposition by iterative minimum-degree peeling.
std::vector<int> coreness(const SimpleGraph& g);

/// The nine-feature vector of one user in one window network. Field order is
/// the canonical feature order used throughout classification.
struct NodeMetrics {
    bool in_lcc = false;
    double eigenvector = 0.0;
    double betweenness = 0.0;
    double closeness = 0.0;
    double clustering = 0.0;
    int coreness = 0;
    int degree_in = 0;
    int degree_out = 0;
    int degree_total = 0;
};

struct DegreeTriple {
    int in = 0;
    int out = 0;
    int total = 0;
};

/// in/out on the directed simple graph, total on the undirected simple
/// projection (reciprocal pairs collapse). Absent node -> (0,0,0).
DegreeTriple degree_metrics(const CollaborationNetwork& net, const std::string& user_id);

/// Extracts the undirected simple subgraph of the LCC. `lcc_nodes` receives
/// the network node index of each subgraph node.
SimpleGraph lcc_subgraph(const CollaborationNetwork& net, std::vector<int>& lcc_nodes);

/// All per-node measures of one window network, restricted to the LCC,
/// computed once so that many reporters can be looked up cheaply.
struct LccMetricsTable {
    std::vector<int> lcc_nodes;               // subgraph index -> network node
    std::unordered_map<int, int> to_subgraph; // network node -> subgraph index
    CentralitySolve evcent;
    std::vector<double> betweenness;
    std::vector<double> closeness;
    std::vector<double> clustering;
    std::vector<int> coreness;
};

/// `evcent_only` skips the path-based measures when only eigenvector scores
/// are needed (the hypothesis-testing sweep).
LccMetricsTable compute_lcc_metrics(const CollaborationNetwork& net, bool evcent_only = false,
                                    double tolerance = 1e-10, int max_iter = 10000);

NodeMetrics feature_vector(const CollaborationNetwork& net, const LccMetricsTable& table,
                           const std::string& user_id);

/// One-shot variant computing the table internally.
NodeMetrics feature_vector(const CollaborationNetwork& net, const std::string& user_id);

}  // namespace bugnet
