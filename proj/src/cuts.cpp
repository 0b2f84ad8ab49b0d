#include "netdof/cuts.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>

#include <Eigen/SVD>

#include "netdof/errors.hpp"

namespace netdof {

namespace {

void check_flow_endpoints(const Network& net, int s, int t) {
    int n = static_cast<int>(net.nodes.size());
    if (s < 0 || s >= n || t < 0 || t >= n) throw UsageError("flow endpoint out of range");
    if (s == t) throw UsageError("source and sink must differ");
}

} // namespace

void for_each_cut(const Network& net, int s, int t, const std::function<void(const Cut&)>& fn) {
    check_flow_endpoints(net, s, t);
    std::vector<int> nonterminal;
    for (int i = 0; i < static_cast<int>(net.nodes.size()); ++i)
        if (i != s && i != t) nonterminal.push_back(i);
    int k = static_cast<int>(nonterminal.size());
    if (k > kCutEnumerationCeiling)
        throw CeilingError("cut enumeration ceiling exceeded: " + std::to_string(k) +
                           " non-terminal super-nodes (limit " +
                           std::to_string(kCutEnumerationCeiling) + ")");

    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Cut cut;
        cut.bitmask = std::uint64_t{1} << s;
        for (int i = 0; i < k; ++i)
            if (mask & (std::uint64_t{1} << i)) cut.bitmask |= std::uint64_t{1} << nonterminal[i];
        for (int i = 0; i < static_cast<int>(net.nodes.size()); ++i)
            if (cut.bitmask & (std::uint64_t{1} << i)) cut.source_side.push_back(i);
        for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
            const Edge& edge = net.edges[e];
            bool tail_in = cut.bitmask & (std::uint64_t{1} << edge.from.node);
            bool head_in = cut.bitmask & (std::uint64_t{1} << edge.to.node);
            if (tail_in && !head_in) cut.crossing.push_back(e);
        }
        fn(cut);
    }
}

std::vector<Cut> enumerate_cuts(const Network& net, int s, int t) {
    std::vector<Cut> cuts;
    for_each_cut(net, s, t, [&](const Cut& c) { cuts.push_back(c); });
    return cuts;
}

int cut_value(const Cut& cut) { return static_cast<int>(cut.crossing.size()); }

ComplexCutMatrix cut_matrix(const Network& net, const Cut& cut) {
    ComplexCutMatrix out;
    std::map<AntennaRef, int> tx_index, rx_index;
    for (int e : cut.crossing) {
        tx_index.emplace(net.edges[e].from, 0);
        rx_index.emplace(net.edges[e].to, 0);
    }
    int c = 0;
    for (auto& [ant, idx] : tx_index) {
        idx = c++;
        out.tx.push_back(ant);
    }
    int r = 0;
    for (auto& [ant, idx] : rx_index) {
        idx = r++;
        out.rx.push_back(ant);
    }
    out.m = Eigen::MatrixXcd::Zero(r, c);
    for (int e : cut.crossing) {
        const Edge& edge = net.edges[e];
        if (!edge.coeff)
            throw AbsentCoefficientError("absent coefficient on crossing edge " +
                                         net.nodes[edge.from.node].id + ":" +
                                         std::to_string(edge.from.antenna));
        out.m(rx_index[edge.to], tx_index[edge.from]) = *edge.coeff;
    }
    return out;
}

int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol) {
    if (rel_tol <= 0.0 || rel_tol >= 1.0) throw UsageError("rank tolerance must lie in (0, 1)");
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    double top = sv(0);
    if (top == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * top) ++rank;
    return rank;
}

namespace {

// Unit-capacity arcs at the super-node level, one per antenna-level edge,
// plus residual reverses. Arc 2e is edge e forward, 2e+1 its reverse.
struct FlowGraph {
    int n = 0;
    std::vector<std::vector<int>> adj;  // node -> arc ids, edge order
    std::vector<int> head;              // arc -> target node
    std::vector<int> cap;

    explicit FlowGraph(const Network& net) {
        n = static_cast<int>(net.nodes.size());
        adj.resize(n);
        head.resize(2 * net.edges.size());
        cap.resize(2 * net.edges.size());
        for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
            const Edge& edge = net.edges[e];
            head[2 * e] = edge.to.node;
            cap[2 * e] = 1;
            adj[edge.from.node].push_back(2 * e);
            head[2 * e + 1] = edge.from.node;
            cap[2 * e + 1] = 0;
            adj[edge.to.node].push_back(2 * e + 1);
        }
    }

    // Shortest augmenting path by BFS, scanning arcs in declaration order so
    // the chosen path (and thus the final flow) is deterministic.
    bool augment(int s, int t) {
        std::vector<int> via(n, -1);
        std::vector<bool> seen(n, false);
        std::queue<int> q;
        seen[s] = true;
        q.push(s);
        while (!q.empty() && !seen[t]) {
            int u = q.front();
            q.pop();
            for (int a : adj[u]) {
                if (cap[a] <= 0 || seen[head[a]]) continue;
                seen[head[a]] = true;
                via[head[a]] = a;
                q.push(head[a]);
            }
        }
        if (!seen[t]) return false;
        for (int v = t; v != s;) {
            int a = via[v];
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = head[a ^ 1];
        }
        return true;
    }

    int max_flow(int s, int t) {
        int flow = 0;
        while (augment(s, t)) ++flow;
        return flow;
    }
};

} // namespace

int min_cut_value(const Network& net, int s, int t) {
    check_flow_endpoints(net, s, t);
    FlowGraph g(net);
    return g.max_flow(s, t);
}

int max_diversity(const Network& net, int s, int t) { return min_cut_value(net, s, t); }

std::vector<EdgePath> edge_disjoint_paths(const Network& net, int s, int t) {
    check_flow_endpoints(net, s, t);
    FlowGraph g(net);
    int flow = g.max_flow(s, t);

    // Integral flow decomposition: walk used edges from the source, always
    // taking the lowest remaining edge index; conservation plus acyclicity
    // guarantee each walk ends at the sink.
    std::vector<bool> consumed(net.edges.size(), false);
    std::vector<EdgePath> paths;
    for (int p = 0; p < flow; ++p) {
        EdgePath path;
        int cur = s;
        while (cur != t) {
            int chosen = -1;
            for (int e = 0; e < static_cast<int>(net.edges.size()); ++e) {
                if (consumed[e] || net.edges[e].from.node != cur) continue;
                if (g.cap[2 * e] == 0) {  // unit of flow on edge e
                    chosen = e;
                    break;
                }
            }
            if (chosen < 0) throw std::logic_error("flow decomposition stalled");
            consumed[chosen] = true;
            path.push_back(chosen);
            cur = net.edges[chosen].to.node;
            if (static_cast<int>(path.size()) > static_cast<int>(net.edges.size()))
                throw std::logic_error("flow decomposition cycled");
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

FlowAnalysis analyze_flow(const Network& net, int s, int t, double rel_tol) {
    FlowAnalysis fa;
    fa.source = s;
    fa.sink = t;
    int best_value = std::numeric_limits<int>::max();
    int best_rank = std::numeric_limits<int>::max();
    for_each_cut(net, s, t, [&](const Cut& cut) {
        int value = cut_value(cut);
        if (value < best_value) {
            best_value = value;
            fa.argmin_cut_diversity = cut;
        }
        int rank = numerical_rank(cut_matrix(net, cut).m, rel_tol);
        if (rank < best_rank) {
            best_rank = rank;
            fa.argmin_cut_dof = cut;
        }
    });
    fa.min_cut = best_value;
    fa.dof = best_rank;
    return fa;
}

int dof(const Network& net, int s, int t, double rel_tol) {
    int best = std::numeric_limits<int>::max();
    for_each_cut(net, s, t, [&](const Cut& cut) {
        best = std::min(best, numerical_rank(cut_matrix(net, cut).m, rel_tol));
    });
    return best;
}

int multicast_dof(const Network& net, int s, const std::vector<int>& sinks, double rel_tol) {
    if (sinks.empty()) throw UsageError("multicast needs at least one sink");
    int best = std::numeric_limits<int>::max();
    for (int t : sinks) best = std::min(best, dof(net, s, t, rel_tol));
    return best;
}

} // namespace netdof
