#include "tbcodes/code.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tbcodes/error.hpp"
#include "tbcodes/rng.hpp"

namespace tb {

const char* to_string(Basis basis) {
    return basis == Basis::x ? "X" : "Z";
}

const char* to_string(Axis axis) {
    switch (axis) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

ExponentPair TBCodeSpec::canonical(const Monomial& t) const {
    switch (t.axis) {
        case Axis::x: return {t.power % l, 0};
        case Axis::y: return {0, t.power % m};
        case Axis::z: return {t.power % l, t.power % m};
    }
    return {0, 0};
}

void TBCodeSpec::validate() const {
    require(l >= 1 && m >= 1, ErrorKind::validation, "torus dimensions must be positive");
    for (const auto* terms : {&a_terms, &b_terms}) {
        const char* label = terms == &a_terms ? "A" : "B";
        require(!terms->empty(), ErrorKind::validation,
                std::string("polynomial ") + label + " has no terms");
        std::vector<ExponentPair> seen;
        for (const auto& t : *terms) {
            ExponentPair p = canonical(t);
            if (std::find(seen.begin(), seen.end(), p) != seen.end())
                fail(ErrorKind::validation,
                     std::string("polynomial ") + label +
                         " has two terms reducing to the same translation (" +
                         std::to_string(p.i) + "," + std::to_string(p.j) + ")");
            seen.push_back(p);
        }
    }
}

std::string TBCodeSpec::to_json() const {
    nlohmann::json j;
    j["l"] = l;
    j["m"] = m;
    auto terms_json = [](const std::vector<Monomial>& terms) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : terms) arr.push_back({to_string(t.axis), t.power});
        return arr;
    };
    j["a"] = terms_json(a_terms);
    j["b"] = terms_json(b_terms);
    return j.dump();
}

namespace {

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    fail(ErrorKind::parse, "unknown axis '" + s + "' (expected x, y, or z)");
}

std::vector<Monomial> parse_terms(const nlohmann::json& arr, const char* label) {
    require(arr.is_array(), ErrorKind::parse, std::string(label) + " must be an array of terms");
    std::vector<Monomial> terms;
    for (const auto& item : arr) {
        require(item.is_array() && item.size() == 2 && item[0].is_string() &&
                    item[1].is_number_unsigned(),
                ErrorKind::parse,
                std::string(label) + " terms must look like [\"x\", power]");
        terms.push_back({parse_axis(item[0].get<std::string>()), item[1].get<unsigned>()});
    }
    return terms;
}

}  // namespace

TBCodeSpec TBCodeSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("invalid JSON: ") + e.what());
    }
    require(j.is_object() && j.contains("l") && j.contains("m") && j.contains("a") &&
                j.contains("b"),
            ErrorKind::parse, "code spec needs fields l, m, a, b");
    require(j["l"].is_number_unsigned() && j["m"].is_number_unsigned(), ErrorKind::parse,
            "l and m must be unsigned integers");
    TBCodeSpec spec;
    spec.l = j["l"].get<unsigned>();
    spec.m = j["m"].get<unsigned>();
    spec.a_terms = parse_terms(j["a"], "a");
    spec.b_terms = parse_terms(j["b"], "b");
    spec.validate();
    return spec;
}

TBCodeSpec TBCodeSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::io, "cannot open code spec file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

BitMatrix build_matrix(const TBCodeSpec& spec, char which) {
    require(which == 'a' || which == 'b', ErrorKind::shape, "build_matrix expects 'a' or 'b'");
    spec.validate();
    const auto& terms = which == 'a' ? spec.a_terms : spec.b_terms;
    size_t l = spec.l, m = spec.m;
    BitMatrix out(l * m, l * m);
    // Sum of S_l^i (x) S_m^j over the reduced terms; basis element (r, s) of
    // the torus maps to ((r+i) mod l, (s+j) mod m).
    for (const auto& t : terms) {
        ExponentPair p = spec.canonical(t);
        for (size_t r = 0; r < l; ++r)
            for (size_t s = 0; s < m; ++s) {
                size_t row = r * m + s;
                size_t col = ((r + p.i) % l) * m + (s + p.j) % m;
                out.set(row, col, !out.get(row, col));
            }
    }
    return out;
}

StabilizerCode build_code(const TBCodeSpec& spec) {
    spec.validate();
    StabilizerCode code;
    code.spec = spec;
    code.a_block = build_matrix(spec, 'a');
    code.b_block = build_matrix(spec, 'b');
    code.n = 2 * static_cast<size_t>(spec.l) * spec.m;
    code.h_x = hstack(*code.a_block, *code.b_block);
    code.h_z = hstack(code.b_block->transposed(), code.a_block->transposed());
    require(matmul(code.h_x, code.h_z.transposed()).weight() == 0, ErrorKind::contract,
            "check matrices do not commute");
    code.k = compute_k(code);
    code.name = "tb" + std::to_string(code.n);
    return code;
}

size_t compute_k(const StabilizerCode& code) {
    size_t rank_sum = rank(code.h_x) + rank(code.h_z);
    size_t k_rank = code.n >= rank_sum ? code.n - rank_sum : 0;
    if (code.a_block && code.b_block) {
        BitMatrix shared = intersect_rowspaces(nullspace(*code.a_block), nullspace(*code.b_block));
        size_t k_kernels = 2 * shared.rows();
        require(k_kernels == k_rank, ErrorKind::contract,
                "kernel-intersection k disagrees with rank formula");
        return k_kernels;
    }
    return k_rank;
}

namespace {

struct DistanceSide {
    BitMatrix logical_candidates;  // nullspace of one check matrix
    EchelonBasis stabilizers;      // rowspace of the other
    DistanceSide(const BitMatrix& null_of, const BitMatrix& mod_out)
        : logical_candidates(nullspace(null_of)), stabilizers(mod_out) {}
};

size_t exact_min_logical_weight(const DistanceSide& side, uint64_t cap) {
    const BitMatrix& basis = side.logical_candidates;
    size_t dim = basis.rows();
    require(dim <= 63 && (uint64_t{1} << dim) <= cap, ErrorKind::capacity,
            "nullspace enumeration of 2^" + std::to_string(dim) +
                " combinations exceeds cap; use estimate_distance");
    size_t words = basis.words_per_row();
    std::vector<uint64_t> v(words, 0);
    size_t best = SIZE_MAX;
    uint64_t total = uint64_t{1} << dim;
    // Gray-code walk: one basis-row xor per visited combination.
    for (uint64_t g = 1; g < total; ++g) {
        size_t flip = std::countr_zero(g);
        const uint64_t* row = basis.row(flip);
        size_t weight = 0;
        for (size_t w = 0; w < words; ++w) {
            v[w] ^= row[w];
            weight += std::popcount(v[w]);
        }
        if (weight >= best) continue;
        if (!side.stabilizers.contains(v.data())) best = weight;
    }
    require(best != SIZE_MAX, ErrorKind::validation, "code has no logical operators");
    return best;
}

DistanceSide make_side(const StabilizerCode& code, Basis basis) {
    // Basis names the Pauli type of the logical operator: Z-type vectors must
    // commute with every X check, and count as trivial inside rowspace(h_z).
    if (basis == Basis::z) return DistanceSide(code.h_x, code.h_z);
    return DistanceSide(code.h_z, code.h_x);
}

}  // namespace

size_t compute_distance_exact(const StabilizerCode& code, Basis basis, uint64_t cap) {
    return exact_min_logical_weight(make_side(code, basis), cap);
}

size_t compute_code_distance_exact(const StabilizerCode& code, uint64_t cap) {
    return std::min(compute_distance_exact(code, Basis::z, cap),
                    compute_distance_exact(code, Basis::x, cap));
}

namespace {

// One randomized information-set trial: permute columns, re-echelonize, and
// scan single rows and row pairs of the resulting generator for low-weight
// members. Weights are permutation-invariant, so candidates are only mapped
// back to original coordinates when they might improve the bound.
void isd_trial(const DistanceSide& side, RngStream& rng, size_t n, size_t& best) {
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), size_t{0});
    for (size_t i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.next_below(i + 1)]);

    const BitMatrix& gen = side.logical_candidates;
    BitMatrix permuted(gen.rows(), n);
    for (size_t r = 0; r < gen.rows(); ++r)
        for (size_t col : gen.row_support(r)) permuted.set(r, perm[col], true);
    BitMatrix rref = row_echelon(permuted);

    std::vector<size_t> inverse(n);
    for (size_t i = 0; i < n; ++i) inverse[perm[i]] = i;

    auto consider = [&](const uint64_t* v_permuted, size_t weight) {
        if (weight == 0 || weight >= best) return;
        BitMatrix original(1, n);
        for (size_t w = 0; w < rref.words_per_row(); ++w) {
            uint64_t bits = v_permuted[w];
            while (bits) {
                original.set(0, inverse[w * 64 + std::countr_zero(bits)], true);
                bits &= bits - 1;
            }
        }
        if (!side.stabilizers.contains(original.row(0))) best = weight;
    };

    size_t words = rref.words_per_row();
    std::vector<uint64_t> buf(words);
    for (size_t i = 0; i < rref.rows(); ++i) {
        consider(rref.row(i), rref.row_weight(i));
        for (size_t j = i + 1; j < rref.rows(); ++j) {
            size_t weight = 0;
            const uint64_t* a = rref.row(i);
            const uint64_t* b = rref.row(j);
            for (size_t w = 0; w < words; ++w) {
                buf[w] = a[w] ^ b[w];
                weight += std::popcount(buf[w]);
            }
            consider(buf.data(), weight);
        }
    }
}

}  // namespace

DistanceEstimate estimate_distance(const StabilizerCode& code, size_t trials, uint64_t seed,
                                   uint64_t cap) {
    DistanceSide z_side = make_side(code, Basis::z);
    DistanceSide x_side = make_side(code, Basis::x);

    auto enumerable = [&](const DistanceSide& side) {
        size_t dim = side.logical_candidates.rows();
        return dim <= 63 && (uint64_t{1} << dim) <= cap;
    };
    if (enumerable(z_side) && enumerable(x_side)) {
        size_t d = std::min(exact_min_logical_weight(z_side, cap),
                            exact_min_logical_weight(x_side, cap));
        return {d, true};
    }

    size_t best = SIZE_MAX;
    for (size_t t = 0; t < trials; ++t) {
        RngStream z_rng(seed, 2 * t);
        RngStream x_rng(seed, 2 * t + 1);
        isd_trial(z_side, z_rng, code.n, best);
        isd_trial(x_side, x_rng, code.n, best);
    }
    require(best != SIZE_MAX, ErrorKind::validation,
            "no logical operator found; code may have k = 0 or trials = 0");
    return {best, false};
}

namespace {

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), size_t{0}); }
    size_t find(size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

// Components of the bipartite incidence between checks (rows) and a block of
// qubit columns; returns per-component sorted qubit lists.
std::vector<std::vector<size_t>> block_components(const BitMatrix& h, size_t col_begin,
                                                  size_t col_end) {
    size_t checks = h.rows();
    size_t qubits = col_end - col_begin;
    UnionFind uf(checks + qubits);
    for (size_t r = 0; r < checks; ++r)
        for (size_t c : h.row_support(r))
            if (c >= col_begin && c < col_end) uf.unite(r, checks + (c - col_begin));

    std::map<size_t, std::vector<size_t>> groups;
    for (size_t q = 0; q < qubits; ++q) groups[uf.find(checks + q)].push_back(q);
    std::vector<std::vector<size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace

PartitionReport check_left_right_partition(const StabilizerCode& code) {
    require(code.spec.has_value(), ErrorKind::validation,
            "left/right partition is defined for TB codes");
    size_t lm = code.n / 2;
    PartitionReport report;
    report.l = code.spec->l;
    report.left_qubit_components = block_components(code.h_z, 0, lm);
    report.right_qubit_components = block_components(code.h_x, lm, code.n);
    report.left_components = report.left_qubit_components.size();
    report.right_components = report.right_qubit_components.size();
    report.splits_into_l_blocks =
        report.left_components == report.l && report.right_components == report.l;
    return report;
}

StabilizerCode build_rotated_surface_code(unsigned d) {
    require(d >= 3 && d % 2 == 1, ErrorKind::validation,
            "rotated surface code requires odd distance >= 3");
    int dd = static_cast<int>(d);
    StabilizerCode code;
    code.n = static_cast<size_t>(d) * d;
    code.surface_distance = d;
    code.name = "surface" + std::to_string(d);

    auto in_grid = [dd](int r, int c) { return r >= 0 && r < dd && c >= 0 && c < dd; };
    auto data_at = [dd](int r, int c) { return r * dd + c; };

    std::vector<std::vector<size_t>> x_rows, z_rows;
    // Plaquette (r, c) covers the up-to-four data qubits at its corners.
    // X plaquettes tile the even checkerboard and terminate on the top and
    // bottom boundaries; Z plaquettes take the odd cells and the sides.
    for (int r = 0; r <= dd; ++r) {
        for (int c = 0; c <= dd; ++c) {
            bool x_type = (r + c) % 2 == 0;
            bool row_edge = r == 0 || r == dd;
            bool col_edge = c == 0 || c == dd;
            if (row_edge && col_edge) continue;
            if (row_edge && !x_type) continue;
            if (col_edge && x_type) continue;

            // Layer orders: X sweeps its corners in reading order, Z in
            // column-major order, so interleaved checks stay compatible.
            std::array<std::pair<int, int>, 4> corners =
                x_type ? std::array<std::pair<int, int>, 4>{{{r - 1, c - 1}, {r - 1, c}, {r, c - 1}, {r, c}}}
                       : std::array<std::pair<int, int>, 4>{{{r - 1, c - 1}, {r, c - 1}, {r - 1, c}, {r, c}}};
            std::array<int, 4> order{};
            std::vector<size_t> support;
            for (int slot = 0; slot < 4; ++slot) {
                auto [rr, cc] = corners[slot];
                order[slot] = in_grid(rr, cc) ? data_at(rr, cc) : -1;
                if (order[slot] >= 0) support.push_back(static_cast<size_t>(order[slot]));
            }
            std::sort(support.begin(), support.end());
            if (x_type) {
                code.surface_x_order.push_back(order);
                x_rows.push_back(support);
            } else {
                code.surface_z_order.push_back(order);
                z_rows.push_back(support);
            }
        }
    }

    code.h_x = BitMatrix(x_rows.size(), code.n);
    for (size_t i = 0; i < x_rows.size(); ++i)
        for (size_t q : x_rows[i]) code.h_x.set(i, q, true);
    code.h_z = BitMatrix(z_rows.size(), code.n);
    for (size_t i = 0; i < z_rows.size(); ++i)
        for (size_t q : z_rows[i]) code.h_z.set(i, q, true);

    require(matmul(code.h_x, code.h_z.transposed()).weight() == 0, ErrorKind::contract,
            "surface code check matrices do not commute");
    code.k = compute_k(code);
    require(code.k == 1, ErrorKind::contract, "surface code construction must have k = 1");
    return code;
}

Overhead qubit_overhead(const StabilizerCode& code) {
    return {code.n, code.n + code.num_checks()};
}

StabilizerCode build_named_code(const std::string& name) {
    auto tb_spec = [](unsigned l, unsigned m, std::vector<Monomial> a,
                      std::vector<Monomial> b) {
        TBCodeSpec spec;
        spec.l = l;
        spec.m = m;
        spec.a_terms = std::move(a);
        spec.b_terms = std::move(b);
        return spec;
    };
    if (name == "tb12")
        return build_code(tb_spec(2, 3, {{Axis::x, 1}, {Axis::y, 2}}, {{Axis::x, 2}, {Axis::z, 4}}));
    if (name == "tb24")
        return build_code(tb_spec(4, 3, {{Axis::x, 1}, {Axis::z, 7}}, {{Axis::x, 0}, {Axis::y, 1}}));
    if (name == "tb56")
        return build_code(tb_spec(4, 7, {{Axis::y, 6}, {Axis::z, 22}}, {{Axis::y, 1}, {Axis::y, 2}}));
    if (name == "tb88")
        return build_code(tb_spec(4, 11, {{Axis::x, 0}, {Axis::z, 42}}, {{Axis::x, 1}, {Axis::z, 1}}));
    if (name.rfind("surface", 0) == 0) {
        const std::string digits = name.substr(7);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
            return build_rotated_surface_code(static_cast<unsigned>(std::stoul(digits)));
    }
    fail(ErrorKind::validation, "unknown code name: " + name);
}

std::vector<std::string> builtin_code_names() {
    return {"tb12", "tb24", "tb56", "tb88", "surface3", "surface5", "surface7"};
}

}  // namespace tb
