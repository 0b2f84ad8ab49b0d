#include "netdof/network.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "netdof/errors.hpp"
#include "netdof/rng.hpp"

namespace netdof {

using ordered_json = nlohmann::ordered_json;

int Network::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

int Network::total_antennas() const {
    int n = 0;
    for (const auto& node : nodes) n += node.antennas;
    return n;
}

int Network::max_antennas() const {
    int q = 0;
    for (const auto& node : nodes) q = std::max(q, node.antennas);
    return q;
}

bool Network::all_coefficients_present() const {
    return std::all_of(edges.begin(), edges.end(),
                       [](const Edge& e) { return e.coeff.has_value(); });
}

namespace {

const ordered_json& require_key(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw SyntaxError(std::string("missing key '") + key + "'");
    return *it;
}

int require_int(const ordered_json& j, const char* what) {
    if (!j.is_number_integer()) throw SyntaxError(std::string(what) + " must be an integer");
    return j.get<int>();
}

std::string require_string(const ordered_json& j, const char* what) {
    if (!j.is_string()) throw SyntaxError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

AntennaRef resolve_antenna(const Network& net, const std::string& id, int antenna,
                           const std::string& context) {
    int node = net.node_index(id);
    if (node < 0)
        throw ReferenceError("unknown node '" + id + "' in " + context);
    if (antenna < 0 || antenna >= net.nodes[node].antennas)
        throw ReferenceError("antenna index " + std::to_string(antenna) + " out of range for node '" +
                             id + "' (" + std::to_string(net.nodes[node].antennas) + " antennas) in " +
                             context);
    return {node, antenna};
}

std::vector<int> parse_terminals(const Network& net, const ordered_json& arr, const char* what) {
    if (!arr.is_array()) throw SyntaxError(std::string(what) + " must be an array");
    std::vector<int> out;
    for (const auto& v : arr) {
        std::string id = require_string(v, what);
        int node = net.node_index(id);
        if (node < 0) throw ReferenceError("unknown node '" + id + "' in " + std::string(what));
        out.push_back(node);
    }
    return out;
}

} // namespace

Network parse_network(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw SyntaxError("top level must be an object");

    Network net;
    const auto& nodes = require_key(doc, "nodes");
    if (!nodes.is_array()) throw SyntaxError("'nodes' must be an array");
    for (const auto& n : nodes) {
        SuperNode sn;
        sn.id = require_string(require_key(n, "id"), "node id");
        sn.antennas = require_int(require_key(n, "antennas"), "antennas");
        if (sn.antennas < 1) throw SyntaxError("node '" + sn.id + "' must have >= 1 antennas");
        if (net.node_index(sn.id) >= 0) throw ReferenceError("duplicate node id '" + sn.id + "'");
        net.nodes.push_back(std::move(sn));
    }

    const auto& edges = require_key(doc, "edges");
    if (!edges.is_array()) throw SyntaxError("'edges' must be an array");
    for (const auto& e : edges) {
        Edge edge;
        std::string from_id = require_string(require_key(e, "from"), "edge 'from'");
        std::string to_id = require_string(require_key(e, "to"), "edge 'to'");
        int from_ant = require_int(require_key(e, "from_ant"), "from_ant");
        int to_ant = require_int(require_key(e, "to_ant"), "to_ant");
        std::string context = "edge " + from_id + ":" + std::to_string(from_ant) + "->" + to_id +
                              ":" + std::to_string(to_ant);
        edge.from = resolve_antenna(net, from_id, from_ant, context);
        edge.to = resolve_antenna(net, to_id, to_ant, context);
        if (auto it = e.find("coeff"); it != e.end()) {
            if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
                throw SyntaxError("coeff must be [re, im] in " + context);
            std::complex<double> c((*it)[0].get<double>(), (*it)[1].get<double>());
            if (std::abs(c) == 0.0)
                throw ZeroCoefficientError("zero fading coefficient on " + context);
            edge.coeff = c;
        }
        net.edges.push_back(edge);
    }

    net.sources = parse_terminals(net, require_key(doc, "sources"), "sources");
    net.sinks = parse_terminals(net, require_key(doc, "sinks"), "sinks");

    if (auto it = doc.find("orthogonal_links"); it != doc.end()) {
        if (!it->is_boolean()) throw SyntaxError("'orthogonal_links' must be a boolean");
        net.orthogonal_links = it->get<bool>();
    }
    return net;
}

std::string serialize_network(const Network& net) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (const auto& n : net.nodes)
        doc["nodes"].push_back({{"id", n.id}, {"antennas", n.antennas}});
    doc["edges"] = ordered_json::array();
    for (const auto& e : net.edges) {
        ordered_json je = {{"from", net.nodes[e.from.node].id},
                           {"from_ant", e.from.antenna},
                           {"to", net.nodes[e.to.node].id},
                           {"to_ant", e.to.antenna}};
        if (e.coeff) je["coeff"] = {e.coeff->real(), e.coeff->imag()};
        doc["edges"].push_back(std::move(je));
    }
    doc["sources"] = ordered_json::array();
    for (int s : net.sources) doc["sources"].push_back(net.nodes[s].id);
    doc["sinks"] = ordered_json::array();
    for (int t : net.sinks) doc["sinks"].push_back(net.nodes[t].id);
    if (net.orthogonal_links) doc["orthogonal_links"] = true;
    return doc.dump(1) + "\n";
}

Network read_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << content;
}

namespace {

std::string edge_label(const Network& net, const Edge& e) {
    return net.nodes[e.from.node].id + ":" + std::to_string(e.from.antenna) + "->" +
           net.nodes[e.to.node].id + ":" + std::to_string(e.to.antenna);
}

std::vector<bool> reachable_from(const Network& net, int start, bool forward) {
    std::vector<bool> seen(net.nodes.size(), false);
    if (start < 0 || start >= static_cast<int>(net.nodes.size())) return seen;
    std::queue<int> q;
    seen[start] = true;
    q.push(start);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (const auto& e : net.edges) {
            int tail = forward ? e.from.node : e.to.node;
            int head = forward ? e.to.node : e.from.node;
            if (tail == u && !seen[head]) {
                seen[head] = true;
                q.push(head);
            }
        }
    }
    return seen;
}

// Nodes lying on some source->sink path of a declared flow.
std::vector<bool> flow_relevant_nodes(const Network& net) {
    std::vector<bool> relevant(net.nodes.size(), false);
    for (int s : net.sources) {
        auto fwd = reachable_from(net, s, true);
        for (int t : net.sinks) {
            auto bwd = reachable_from(net, t, false);
            for (std::size_t i = 0; i < relevant.size(); ++i)
                if (fwd[i] && bwd[i]) relevant[i] = true;
        }
    }
    return relevant;
}

bool has_cycle_within(const Network& net, const std::vector<bool>& keep) {
    int n = static_cast<int>(net.nodes.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : net.edges)
        if (keep[e.from.node] && keep[e.to.node]) adj[e.from.node].push_back(e.to.node);
    std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
    std::vector<std::pair<int, std::size_t>> stack;
    for (int start = 0; start < n; ++start) {
        if (!keep[start] || state[start] != 0) continue;
        stack.push_back({start, 0});
        state[start] = 1;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < adj[u].size()) {
                int v = adj[u][next++];
                if (state[v] == 1) return true;
                if (state[v] == 0) {
                    state[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                state[u] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

} // namespace

ValidationReport validate(const Network& net) {
    ValidationReport report;
    auto flag = [&](const std::string& code, const std::string& msg, const std::string& element) {
        report.violations.push_back({code, msg, element});
    };

    std::unordered_set<std::string> ids;
    for (const auto& n : net.nodes) {
        if (!ids.insert(n.id).second) flag("duplicate-id", "duplicate node id", n.id);
        if (n.antennas < 1) flag("antennas", "node must have >= 1 antennas", n.id);
    }

    int n = static_cast<int>(net.nodes.size());
    std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> seen_pairs;
    for (const auto& e : net.edges) {
        bool endpoints_ok = e.from.node >= 0 && e.from.node < n && e.to.node >= 0 && e.to.node < n;
        if (!endpoints_ok) {
            flag("reference", "edge endpoint references unknown node", "edge");
            continue;
        }
        std::string label = edge_label(net, e);
        if (e.from.antenna < 0 || e.from.antenna >= net.nodes[e.from.node].antennas ||
            e.to.antenna < 0 || e.to.antenna >= net.nodes[e.to.node].antennas)
            flag("reference", "antenna index out of range", label);
        if (e.from.node == e.to.node) flag("self-loop", "edge endpoints share a super-node", label);
        if (e.coeff && std::abs(*e.coeff) == 0.0)
            flag("zero-coeff", "present coefficient must be nonzero", label);
        auto key = std::make_pair(std::make_pair(e.from.node, e.from.antenna),
                                  std::make_pair(e.to.node, e.to.antenna));
        if (!seen_pairs.insert(key).second)
            flag("duplicate-edge", "parallel edge between the same antenna pair", label);
    }

    auto check_terminals = [&](const std::vector<int>& terms, const char* what) {
        if (terms.empty()) flag("no-flows", std::string("no ") + what + " declared", what);
        for (int idx : terms)
            if (idx < 0 || idx >= n) flag("reference", std::string(what) + " references unknown node", what);
    };
    check_terminals(net.sources, "sources");
    check_terminals(net.sinks, "sinks");
    for (int s : net.sources)
        for (int t : net.sinks)
            if (s == t && s >= 0 && s < n)
                flag("flow-endpoints", "node is both a source and a sink", net.nodes[s].id);

    if (!report.ok()) return report;  // structural problems first

    for (int s : net.sources) {
        auto fwd = reachable_from(net, s, true);
        for (int t : net.sinks) {
            if (!fwd[t])
                flag("unreachable", "sink unreachable from source",
                     net.nodes[s].id + "->" + net.nodes[t].id);
        }
    }

    if (has_cycle_within(net, flow_relevant_nodes(net)))
        flag("acyclic", "super-node graph restricted to declared flows has a cycle", "graph");

    return report;
}

Network sample_coefficients(const Network& net, std::uint64_t seed, CoeffDist dist) {
    Network out = net;
    std::mt19937_64 gen(derive_seed(seed, kStreamCoefficients));
    ComplexGaussian cg;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& e : out.edges) {
        if (e.coeff) continue;
        std::complex<double> c;
        do {
            if (dist == CoeffDist::RayleighUnit) {
                c = cg(gen);
            } else {
                double r = std::sqrt(unit(gen));
                double theta = 2.0 * M_PI * unit(gen);
                c = std::polar(r, theta);
            }
        } while (std::abs(c) == 0.0);
        e.coeff = c;
    }
    return out;
}

Network embed_wireline(const Network& wireline) {
    Network out;
    out.nodes.reserve(wireline.nodes.size());
    for (const auto& n : wireline.nodes) out.nodes.push_back({n.id, 0});

    // Each incident link gets its own antenna, in edge declaration order.
    for (const auto& e : wireline.edges) {
        Edge ne;
        ne.from = {e.from.node, out.nodes[e.from.node].antennas++};
        ne.to = {e.to.node, out.nodes[e.to.node].antennas++};
        ne.coeff = e.coeff;
        out.edges.push_back(ne);
    }
    for (auto& n : out.nodes)
        if (n.antennas == 0) n.antennas = 1;

    out.sources = wireline.sources;
    out.sinks = wireline.sinks;
    return out;
}

} // namespace netdof
