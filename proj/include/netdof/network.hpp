#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace netdof {

// One antenna of a super-node: (node index, antenna index within the node).
struct AntennaRef {
    int node = -1;
    int antenna = 0;

    friend bool operator==(const AntennaRef& a, const AntennaRef& b) {
        return a.node == b.node && a.antenna == b.antenna;
    }
    friend bool operator<(const AntennaRef& a, const AntennaRef& b) {
        return a.node != b.node ? a.node < b.node : a.antenna < b.antenna;
    }
};

struct SuperNode {
    std::string id;
    int antennas = 1;

    friend bool operator==(const SuperNode&, const SuperNode&) = default;
};

// Directed antenna-level link. A present coefficient must be nonzero; an
// absent one is a fading coefficient that has not been sampled yet.
struct Edge {
    AntennaRef from;
    AntennaRef to;
    std::optional<std::complex<double>> coeff;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Violation {
    std::string code;
    std::string message;
    std::string element;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Edge-labelled directed graph of super-nodes with antenna sub-nodes.
// Immutable by convention once built; operations return transformed copies.
struct Network {
    std::vector<SuperNode> nodes;
    std::vector<Edge> edges;
    std::vector<int> sources;  // node indices
    std::vector<int> sinks;
    bool orthogonal_links = false;  // wire-line input awaiting embedding

    int node_index(const std::string& id) const;
    int total_antennas() const;
    int max_antennas() const;
    bool all_coefficients_present() const;

    friend bool operator==(const Network&, const Network&) = default;
};

// Structured-text document <-> Network. Parse throws SyntaxError (with byte
// position), ReferenceError, or ZeroCoefficientError.
Network parse_network(const std::string& text);
std::string serialize_network(const Network& net);

Network read_network_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

ValidationReport validate(const Network& net);

enum class CoeffDist {
    RayleighUnit,  // CN(0,1): Rayleigh magnitude, unit mean square
    UniformDisc,   // uniform over the complex unit disc
};

// Replaces every absent coefficient by an independent draw; present ones are
// untouched. Deterministic given seed.
Network sample_coefficients(const Network& net, std::uint64_t seed,
                            CoeffDist dist = CoeffDist::RayleighUnit);

// Natural embedding of a wire-line network: one dedicated antenna per
// incident link at each super-node, so broadcast and interference vanish.
Network embed_wireline(const Network& wireline);

} // namespace netdof
