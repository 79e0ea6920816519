#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tbcodes/circuit.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/dem.hpp"

namespace tb {

// One matching edge: u, v are node indices within the graph, v = -1 for a
// boundary edge. weight = ln((1-p)/p).
struct GraphEdge {
    int32_t u = -1;
    int32_t v = -1;
    double p = 0.0;
    double weight = 0.0;
    uint64_t observables = 0;
};

// Matching graph over the detectors of one basis, with all-pairs shortest
// paths (and the observable flips accumulated along each path) precomputed
// for decoding.
struct MatchingGraph {
    Basis basis = Basis::z;
    std::vector<uint32_t> detectors;        // node -> global detector index
    std::vector<int32_t> node_of_detector;  // global index -> node or -1
    std::vector<GraphEdge> edges;

    size_t num_nodes() const { return detectors.size(); }

    // Filled by prepare(): row-major num_nodes x num_nodes path weights and
    // path observable masks, plus the cheapest route to the boundary.
    std::vector<double> dist;
    std::vector<uint64_t> path_obs;
    std::vector<double> boundary_dist;
    std::vector<uint64_t> boundary_obs;
};

// Splits the model's mechanisms into one graph per detector basis. A
// mechanism may touch at most two detectors of either basis (hypergraph
// error otherwise). Observable flips ride the memory-basis edge; a
// mechanism that flips an observable without touching any memory-basis
// detector is a contract error. Parallel edges merge when their masks
// agree (XOR of independent flips); otherwise the more probable one wins.
// Mechanism probabilities above 1/2 are contract errors. Both graphs come
// back fully prepared.
std::pair<MatchingGraph, MatchingGraph> build_graphs(
    const DetectorErrorModel& dem, const std::vector<Basis>& detector_basis,
    Basis memory_basis);

// Overload deriving detector bases and memory basis from circuit layout.
std::pair<MatchingGraph, MatchingGraph> build_graphs(const DetectorErrorModel& dem,
                                                     const Circuit& circuit);

struct DecodeResult {
    uint64_t observables = 0;
    double weight = 0.0;
};

// Exact minimum-weight perfect matching over the fired nodes (plus one
// boundary copy per fired node). syndrome holds one bit per graph node.
// Throws an infeasible error when no fault set explains the syndrome.
DecodeResult mwpm_decode(const MatchingGraph& g, const std::vector<uint8_t>& syndrome);

// Full-shot decoder: routes each basis' fired detectors to its graph and
// XORs the two predicted observable masks.
class Decoder {
  public:
    Decoder(const DetectorErrorModel& dem, const Circuit& circuit);
    Decoder(const DetectorErrorModel& dem, const std::vector<Basis>& detector_basis,
            Basis memory_basis);

    const MatchingGraph& graph(Basis basis) const;

    // fired = sorted global detector indices of one shot.
    DecodeResult decode(const std::vector<uint32_t>& fired) const;

  private:
    MatchingGraph x_, z_;
};

// Code-capacity error model: every data qubit suffers an independent X (for
// basis z) or Z (for basis x) fault with probability p; detectors are the
// rows of the corresponding check matrix and observable flips come from the
// logical representatives of that basis.
DetectorErrorModel code_capacity_dem(const StabilizerCode& code, Basis basis, double p);

struct CosetLeader {
    uint64_t pattern = 0;  // data-qubit error support
    size_t weight = 0;
};

// Exhaustive minimum-weight error pattern reproducing the syndrome (basis z:
// X patterns against h_z; basis x: Z patterns against h_x). Ties resolve to
// the lexicographically smallest pattern. Capacity error for n > 16;
// infeasible error when no pattern matches.
CosetLeader brute_force_decode(const StabilizerCode& code,
                               const std::vector<uint8_t>& syndrome, Basis basis);

}  // namespace tb
