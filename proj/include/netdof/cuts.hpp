#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "netdof/network.hpp"

namespace netdof {

// Enumerating all cuts is exponential in the super-node count; refuse beyond
// this many non-terminal nodes rather than approximate.
inline constexpr int kCutEnumerationCeiling = 20;

inline constexpr double kDefaultRankTol = 1e-9;

// Bipartition (U, U^c) of super-nodes with the source in U and the sink in
// U^c, together with the edges crossing U -> U^c.
struct Cut {
    std::vector<int> source_side;  // node indices in U, ascending
    std::vector<int> crossing;     // edge indices, tail in U and head in U^c
    std::uint64_t bitmask = 0;     // bit i set <=> node i in U
};

// Transfer matrix of a cut: rows are receive antennas in U^c, columns are
// transmit antennas in U, restricted to antennas touching a crossing edge.
struct ComplexCutMatrix {
    Eigen::MatrixXcd m;
    std::vector<AntennaRef> rx;
    std::vector<AntennaRef> tx;
};

struct FlowAnalysis {
    int source = -1;
    int sink = -1;
    int min_cut = 0;
    int dof = 0;
    Cut argmin_cut_diversity;
    Cut argmin_cut_dof;
};

// Yields all 2^(|V|-2) cuts in binary-counting order over the non-terminal
// nodes (deterministic). Throws CeilingError above the enumeration ceiling.
void for_each_cut(const Network& net, int s, int t, const std::function<void(const Cut&)>& fn);
std::vector<Cut> enumerate_cuts(const Network& net, int s, int t);

int cut_value(const Cut& cut);

ComplexCutMatrix cut_matrix(const Network& net, const Cut& cut);

// Count of singular values above rel_tol times the largest one.
int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol = kDefaultRankTol);

// Integral max-flow over the super-node multigraph with one unit-capacity
// arc per antenna-level edge; equals the min over all cuts of cut_value.
int min_cut_value(const Network& net, int s, int t);
int max_diversity(const Network& net, int s, int t);

int dof(const Network& net, int s, int t, double rel_tol = kDefaultRankTol);
int multicast_dof(const Network& net, int s, const std::vector<int>& sinks,
                  double rel_tol = kDefaultRankTol);

// min-cut, dof and the first cut attaining each, in one enumeration pass.
FlowAnalysis analyze_flow(const Network& net, int s, int t, double rel_tol = kDefaultRankTol);

// Antenna-level edge path, source antenna to sink antenna.
using EdgePath = std::vector<int>;

// Exactly min_cut_value pairwise edge-disjoint paths, by integral max-flow
// decomposition with lowest-edge-index tie-breaking.
std::vector<EdgePath> edge_disjoint_paths(const Network& net, int s, int t);

} // namespace netdof
