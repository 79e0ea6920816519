#include "tbcodes/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "tbcodes/blossom.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/pauli.hpp"

namespace tb {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();
constexpr int64_t kFixedScale = int64_t{1} << 20;  // weight quantization
constexpr int64_t kBig = int64_t{1} << 46;         // unusable-edge sentinel

void prepare(MatchingGraph& g) {
    size_t n = g.num_nodes();
    g.dist.assign(n * n, kInfD);
    g.path_obs.assign(n * n, 0);
    g.boundary_dist.assign(n, kInfD);
    g.boundary_obs.assign(n, 0);

    std::vector<std::vector<std::pair<int32_t, size_t>>> adj(n);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const GraphEdge& edge = g.edges[e];
        if (edge.v < 0) continue;
        adj[edge.u].push_back({edge.v, e});
        adj[edge.v].push_back({edge.u, e});
    }

    std::vector<double> dist(n);
    std::vector<uint64_t> mask(n);
    using Item = std::pair<double, int32_t>;
    for (size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kInfD);
        std::fill(mask.begin(), mask.end(), 0);
        dist[s] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.push({0.0, static_cast<int32_t>(s)});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) continue;
            for (auto [v, e] : adj[u]) {
                double nd = d + g.edges[e].weight;
                if (nd < dist[v]) {
                    dist[v] = nd;
                    mask[v] = mask[u] ^ g.edges[e].observables;
                    heap.push({nd, v});
                }
            }
        }
        std::copy(dist.begin(), dist.end(), g.dist.begin() + s * n);
        std::copy(mask.begin(), mask.end(), g.path_obs.begin() + s * n);
        for (const GraphEdge& edge : g.edges) {
            if (edge.v >= 0) continue;
            double nd = dist[edge.u] + edge.weight;
            if (nd < g.boundary_dist[s]) {
                g.boundary_dist[s] = nd;
                g.boundary_obs[s] = mask[edge.u] ^ edge.observables;
            }
        }
    }
}

}  // namespace

std::pair<MatchingGraph, MatchingGraph> build_graphs(
    const DetectorErrorModel& dem, const std::vector<Basis>& detector_basis,
    Basis memory_basis) {
    require(detector_basis.size() == dem.num_detectors, ErrorKind::shape,
            "detector basis list does not match model detector count");

    MatchingGraph gx, gz;
    gx.basis = Basis::x;
    gz.basis = Basis::z;
    gx.node_of_detector.assign(dem.num_detectors, -1);
    gz.node_of_detector.assign(dem.num_detectors, -1);
    for (uint32_t d = 0; d < dem.num_detectors; ++d) {
        MatchingGraph& g = detector_basis[d] == Basis::x ? gx : gz;
        g.node_of_detector[d] = static_cast<int32_t>(g.detectors.size());
        g.detectors.push_back(d);
    }

    // endpoint pair -> (mask -> combined probability); XOR of independent
    // same-signature mechanisms, then the heaviest mask survives.
    std::map<std::pair<int32_t, int32_t>, std::map<uint64_t, double>> groups[2];
    for (const FaultMechanism& mech : dem.mechanisms) {
        std::vector<uint32_t> part[2];
        for (uint32_t d : mech.detectors) {
            require(d < dem.num_detectors, ErrorKind::shape,
                    "mechanism detector index out of range");
            part[detector_basis[d] == Basis::x ? 0 : 1].push_back(d);
        }
        require(part[0].size() <= 2 && part[1].size() <= 2, ErrorKind::hypergraph,
                "mechanism touches more than two detectors of one basis");
        size_t mem_side = memory_basis == Basis::x ? 0 : 1;
        require(mech.observables == 0 || !part[mem_side].empty(), ErrorKind::contract,
                "mechanism flips an observable without a memory-basis detector");
        for (size_t side = 0; side < 2; ++side) {
            if (part[side].empty()) continue;
            MatchingGraph& g = side == 0 ? gx : gz;
            int32_t u = g.node_of_detector[part[side][0]];
            int32_t v = part[side].size() == 2 ? g.node_of_detector[part[side][1]] : -1;
            uint64_t obs = side == mem_side ? mech.observables : 0;
            double& p = groups[side][{u, v}][obs];
            p = p * (1.0 - mech.p) + mech.p * (1.0 - p);
        }
    }

    for (size_t side = 0; side < 2; ++side) {
        MatchingGraph& g = side == 0 ? gx : gz;
        for (const auto& [pair_key, masks] : groups[side]) {
            uint64_t best_obs = 0;
            double best_p = -1.0;
            for (const auto& [obs, p] : masks) {
                if (p > best_p) {
                    best_p = p;
                    best_obs = obs;
                }
            }
            require(best_p <= 0.5, ErrorKind::contract,
                    "edge probability exceeds 1/2");
            GraphEdge edge;
            edge.u = pair_key.first;
            edge.v = pair_key.second;
            edge.p = best_p;
            edge.weight = std::log((1.0 - best_p) / best_p);
            edge.observables = best_obs;
            g.edges.push_back(edge);
        }
        prepare(g);
    }
    return {std::move(gx), std::move(gz)};
}

std::pair<MatchingGraph, MatchingGraph> build_graphs(const DetectorErrorModel& dem,
                                                     const Circuit& circuit) {
    require(circuit.memory_basis.has_value(), ErrorKind::validation,
            "circuit lacks memory layout metadata");
    return build_graphs(dem, classify_detectors(circuit), *circuit.memory_basis);
}

DecodeResult mwpm_decode(const MatchingGraph& g, const std::vector<uint8_t>& syndrome) {
    require(syndrome.size() == g.num_nodes(), ErrorKind::shape,
            "syndrome length does not match graph node count");
    std::vector<int32_t> fired;
    for (size_t i = 0; i < syndrome.size(); ++i)
        if (syndrome[i]) fired.push_back(static_cast<int32_t>(i));
    DecodeResult res;
    if (fired.empty()) return res;

    size_t m = fired.size();
    size_t nn = 2 * m;  // fired nodes plus one boundary copy each
    size_t n_graph = g.num_nodes();
    std::vector<int64_t> w(nn * nn, 0);
    auto fixed = [](double d) {
        if (d == kInfD) return kBig;
        auto v = static_cast<int64_t>(std::llround(d * kFixedScale));
        require(v < kBig, ErrorKind::capacity, "path weight overflows matching scale");
        return v;
    };
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            int64_t v = fixed(g.dist[fired[i] * n_graph + fired[j]]);
            w[i * nn + j] = w[j * nn + i] = v;
        }
        int64_t b = fixed(g.boundary_dist[fired[i]]);
        w[i * nn + (m + i)] = w[(m + i) * nn + i] = b;
        for (size_t j = 0; j < m; ++j)
            if (j != i) w[i * nn + (m + j)] = w[(m + j) * nn + i] = kBig;
    }

    MatchingResult matching = min_weight_perfect_matching(nn, w);
    for (size_t a = 0; a < nn; ++a) {
        size_t b = static_cast<size_t>(matching.mate[a]);
        if (b < a) continue;
        if (a >= m) continue;  // copy-copy pair, no correction
        require(w[a * nn + b] < kBig, ErrorKind::infeasible,
                "syndrome cannot be matched in this graph");
        if (b < m) {
            res.observables ^= g.path_obs[fired[a] * n_graph + fired[b]];
            res.weight += g.dist[fired[a] * n_graph + fired[b]];
        } else {
            res.observables ^= g.boundary_obs[fired[a]];
            res.weight += g.boundary_dist[fired[a]];
        }
    }
    return res;
}

Decoder::Decoder(const DetectorErrorModel& dem, const Circuit& circuit) {
    auto graphs = build_graphs(dem, circuit);
    x_ = std::move(graphs.first);
    z_ = std::move(graphs.second);
}

Decoder::Decoder(const DetectorErrorModel& dem, const std::vector<Basis>& detector_basis,
                 Basis memory_basis) {
    auto graphs = build_graphs(dem, detector_basis, memory_basis);
    x_ = std::move(graphs.first);
    z_ = std::move(graphs.second);
}

const MatchingGraph& Decoder::graph(Basis basis) const {
    return basis == Basis::x ? x_ : z_;
}

DecodeResult Decoder::decode(const std::vector<uint32_t>& fired) const {
    std::vector<uint8_t> sx(x_.num_nodes(), 0), sz(z_.num_nodes(), 0);
    for (uint32_t d : fired) {
        require(d < x_.node_of_detector.size(), ErrorKind::shape,
                "fired detector index out of range");
        int32_t nx = x_.node_of_detector[d];
        if (nx >= 0) {
            sx[nx] = 1;
        } else {
            sz[z_.node_of_detector[d]] = 1;
        }
    }
    DecodeResult rx = mwpm_decode(x_, sx);
    DecodeResult rz = mwpm_decode(z_, sz);
    return {rx.observables ^ rz.observables, rx.weight + rz.weight};
}

DetectorErrorModel code_capacity_dem(const StabilizerCode& code, Basis basis, double p) {
    require(p >= 0.0 && p <= 1.0, ErrorKind::validation, "probability out of range");
    const BitMatrix& h = basis == Basis::z ? code.h_z : code.h_x;
    LogicalBasis lb = logical_basis(code);
    require(lb.size() <= 64, ErrorKind::capacity,
            "code capacity model supports at most 64 logical qubits");

    DetectorErrorModel dem;
    dem.num_detectors = h.rows();
    dem.num_observables = lb.size();
    for (size_t q = 0; q < code.n; ++q) {
        FaultMechanism mech;
        mech.p = p;
        for (size_t r = 0; r < h.rows(); ++r)
            if (h.get(r, q)) mech.detectors.push_back(static_cast<uint32_t>(r));
        for (size_t i = 0; i < lb.size(); ++i) {
            bool flips = basis == Basis::z ? lb.pairs[i].second.z_bit(q)
                                           : lb.pairs[i].first.x_bit(q);
            if (flips) mech.observables |= uint64_t{1} << i;
        }
        if (mech.detectors.empty() && mech.observables == 0) continue;
        dem.mechanisms.push_back(std::move(mech));
    }
    return dem;
}

CosetLeader brute_force_decode(const StabilizerCode& code,
                               const std::vector<uint8_t>& syndrome, Basis basis) {
    const BitMatrix& h = basis == Basis::z ? code.h_z : code.h_x;
    require(code.n <= 16, ErrorKind::capacity,
            "exhaustive decoding supports at most 16 data qubits");
    require(h.rows() <= 64, ErrorKind::capacity,
            "exhaustive decoding supports at most 64 checks");
    require(syndrome.size() == h.rows(), ErrorKind::shape,
            "syndrome length does not match check count");

    uint64_t target = 0;
    for (size_t r = 0; r < syndrome.size(); ++r)
        if (syndrome[r]) target |= uint64_t{1} << r;
    std::vector<uint64_t> col(code.n, 0);
    for (size_t q = 0; q < code.n; ++q)
        for (size_t r = 0; r < h.rows(); ++r)
            if (h.get(r, q)) col[q] |= uint64_t{1} << r;

    bool found = false;
    CosetLeader best;
    for (uint64_t pattern = 0; pattern < (uint64_t{1} << code.n); ++pattern) {
        uint64_t s = 0;
        uint64_t rest = pattern;
        while (rest) {
            s ^= col[static_cast<size_t>(std::countr_zero(rest))];
            rest &= rest - 1;
        }
        if (s != target) continue;
        auto weight = static_cast<size_t>(std::popcount(pattern));
        if (!found || weight < best.weight) {
            found = true;
            best.pattern = pattern;
            best.weight = weight;
        }
    }
    require(found, ErrorKind::infeasible, "syndrome is not produced by any error pattern");
    return best;
}

}  // namespace tb
