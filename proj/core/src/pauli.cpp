#include "tbcodes/pauli.hpp"

#include <bit>

#include "tbcodes/error.hpp"

namespace tb {

PauliOp::PauliOp(size_t n_, BitMatrix row, int sign_) : n(n_), xz(std::move(row)), sign(sign_) {
    require(xz.rows() == 1 && xz.cols() == 2 * n, ErrorKind::shape, "pauli row must be 1 x 2n");
    require(sign == 1 || sign == -1, ErrorKind::shape, "pauli sign must be +1 or -1");
}

PauliOp PauliOp::from_supports(size_t n, const std::vector<size_t>& x_support,
                               const std::vector<size_t>& z_support, int sign) {
    PauliOp p(n);
    p.sign = sign;
    for (size_t q : x_support) {
        require(q < n, ErrorKind::shape, "pauli support out of range");
        p.set_x(q, true);
    }
    for (size_t q : z_support) {
        require(q < n, ErrorKind::shape, "pauli support out of range");
        p.set_z(q, true);
    }
    return p;
}

size_t PauliOp::weight() const {
    size_t w = 0;
    for (size_t q = 0; q < n; ++q) {
        if (x_bit(q) || z_bit(q)) ++w;
    }
    return w;
}

bool PauliOp::commutes_with(const PauliOp& other) const {
    return symplectic_product(*this, other) == 0;
}

std::string PauliOp::to_string() const {
    std::string out = sign > 0 ? "+" : "-";
    bool any = false;
    for (size_t q = 0; q < n; ++q) {
        bool x = x_bit(q), z = z_bit(q);
        if (!x && !z) continue;
        if (any) out += ' ';
        out += (x && z) ? 'Y' : (x ? 'X' : 'Z');
        out += std::to_string(q + 1);
        any = true;
    }
    if (!any) out += 'I';
    return out;
}

int symplectic_product_rows(const uint64_t* a, const uint64_t* b, size_t n) {
    // Rows are 2n bits: [x | z]. The product is x_a.z_b + z_a.x_b, which
    // needs bit-level access because the x/z halves are not word-aligned in
    // general; delegate to a temporary matrix view instead.
    size_t words = (2 * n + 63) / 64;
    int parity = 0;
    auto bit = [&](const uint64_t* row, size_t i) -> int {
        return (row[i >> 6] >> (i & 63)) & 1u;
    };
    (void)words;
    for (size_t q = 0; q < n; ++q) {
        parity ^= bit(a, q) & bit(b, n + q);
        parity ^= bit(a, n + q) & bit(b, q);
    }
    return parity;
}

int symplectic_product(const PauliOp& a, const PauliOp& b) {
    require(a.n == b.n, ErrorKind::shape, "symplectic product needs equal qubit counts");
    return symplectic_product_rows(a.xz.row(0), b.xz.row(0), a.n);
}

PauliProduct::PauliProduct(size_t n) : n_(n), x_(1, n), z_(1, n) {}

void PauliProduct::multiply(const PauliOp& p) {
    require(p.n == n_, ErrorKind::shape, "pauli product needs equal qubit counts");
    // Bring p into i^e X^x Z^z form: Hermitian P = sign * i^{|x&z|} X^x Z^z.
    unsigned e = 0;
    BitMatrix px(1, n_), pz(1, n_);
    for (size_t q = 0; q < n_; ++q) {
        bool x = p.x_bit(q), z = p.z_bit(q);
        if (x) px.set(0, q, true);
        if (z) pz.set(0, q, true);
        if (x && z) e += 1;
    }
    if (p.sign < 0) e += 2;
    // (i^a X^u Z^v)(i^e X^px Z^pz) = i^{a+e} (-1)^{|v & px|} X^{u^px} Z^{v^pz}
    unsigned anti = 0;
    for (size_t w = 0; w < x_.words_per_row(); ++w) {
        anti += std::popcount(z_.row(0)[w] & px.row(0)[w]);
    }
    phase_ = (phase_ + e + 2 * (anti & 1u)) % 4;
    x_.xor_row_from(0, px, 0);
    z_.xor_row_from(0, pz, 0);
}

PauliOp PauliProduct::finish() const {
    unsigned y_count = 0;
    for (size_t w = 0; w < x_.words_per_row(); ++w) {
        y_count += std::popcount(x_.row(0)[w] & z_.row(0)[w]);
    }
    unsigned rel = (phase_ + 4 - (y_count % 4)) % 4;
    require(rel == 0 || rel == 2, ErrorKind::contract, "pauli product is not Hermitian");
    PauliOp out(n_);
    for (size_t q = 0; q < n_; ++q) {
        out.set_x(q, x_.get(0, q));
        out.set_z(q, z_.get(0, q));
    }
    out.sign = rel == 0 ? +1 : -1;
    return out;
}

BitMatrix stabilizer_symplectic_rows(const StabilizerCode& code) {
    size_t n = code.n;
    size_t cx = code.h_x.rows(), cz = code.h_z.rows();
    BitMatrix rows(cx + cz, 2 * n);
    for (size_t r = 0; r < cx; ++r) {
        for (size_t q : code.h_x.row_support(r)) rows.set(r, q, true);
    }
    for (size_t r = 0; r < cz; ++r) {
        for (size_t q : code.h_z.row_support(r)) rows.set(cx + r, n + q, true);
    }
    return rows;
}

std::vector<PauliOp> centralizer_basis(const StabilizerCode& code) {
    size_t n = code.n;
    // v = [x | z] commutes with every generator iff M v^T = 0 where M holds
    // the symplectically flipped generators [z_s | x_s].
    BitMatrix gens = stabilizer_symplectic_rows(code);
    BitMatrix flipped(gens.rows(), 2 * n);
    for (size_t r = 0; r < gens.rows(); ++r) {
        for (size_t c = 0; c < 2 * n; ++c) {
            if (gens.get(r, c)) flipped.set(r, c < n ? c + n : c - n, true);
        }
    }
    BitMatrix null = nullspace(flipped);
    require(null.rows() == n + code.k, ErrorKind::contract,
            "centralizer dimension disagrees with n + k");
    std::vector<PauliOp> out;
    out.reserve(null.rows());
    for (size_t r = 0; r < null.rows(); ++r) {
        out.emplace_back(n, null.submatrix_rows({r}));
    }
    return out;
}

LogicalBasis logical_basis(const StabilizerCode& code) {
    size_t n = code.n;
    BitMatrix stab = stabilizer_symplectic_rows(code);
    EchelonBasis span(2 * n);
    span.add_rows(stab);

    // Coset representatives: centralizer elements independent modulo the
    // stabilizer span. nullspace() emits pure-X rows before pure-Z rows for
    // CSS codes, so representatives arrive X-type first.
    std::vector<PauliOp> reps;
    EchelonBasis acc = span;
    for (const PauliOp& p : centralizer_basis(code)) {
        if (acc.add_row(p.xz.row(0))) reps.push_back(p);
    }
    require(reps.size() == 2 * code.k, ErrorKind::contract,
            "logical representative count disagrees with 2k");
    std::sort(reps.begin(), reps.end(), [](const PauliOp& a, const PauliOp& b) {
        return a.xz.lex_less(b.xz);
    });

    LogicalBasis basis;
    std::vector<PauliOp> pool = std::move(reps);
    while (!pool.empty()) {
        PauliOp u = pool.front();
        pool.erase(pool.begin());
        size_t partner = pool.size();
        for (size_t i = 0; i < pool.size(); ++i) {
            if (symplectic_product(u, pool[i]) == 1) {
                partner = i;
                break;
            }
        }
        require(partner < pool.size(), ErrorKind::contract,
                "symplectic pairing failed: no anticommuting partner");
        PauliOp v = pool[partner];
        pool.erase(pool.begin() + partner);
        for (PauliOp& w : pool) {
            if (symplectic_product(w, v) == 1) w.xz.xor_row_from(0, u.xz, 0);
            if (symplectic_product(w, u) == 1) w.xz.xor_row_from(0, v.xz, 0);
        }
        auto pure_x = [n](const PauliOp& p) {
            for (size_t q = 0; q < n; ++q) {
                if (p.z_bit(q)) return false;
            }
            return true;
        };
        if (!pure_x(u) && pure_x(v)) std::swap(u, v);
        basis.pairs.emplace_back(std::move(u), std::move(v));
    }
    return basis;
}

bool verify_logical_basis(const StabilizerCode& code, const LogicalBasis& basis) {
    size_t n = code.n;
    for (const auto& [x_op, z_op] : basis.pairs) {
        require(x_op.n == n && z_op.n == n, ErrorKind::shape,
                "logical operator qubit count disagrees with the code");
    }
    if (basis.size() != code.k) return false;

    BitMatrix stab = stabilizer_symplectic_rows(code);
    EchelonBasis span(stab);
    std::vector<PauliOp> gens;
    for (size_t r = 0; r < stab.rows(); ++r) {
        gens.emplace_back(n, stab.submatrix_rows({r}));
    }

    auto flat = [&](size_t i) -> const PauliOp& {
        const auto& pr = basis.pairs[i / 2];
        return (i % 2 == 0) ? pr.first : pr.second;
    };
    for (size_t i = 0; i < 2 * basis.size(); ++i) {
        const PauliOp& p = flat(i);
        for (const PauliOp& g : gens) {
            if (symplectic_product(p, g) != 0) return false;
        }
        if (span.contains(p.xz.row(0))) return false;
        for (size_t j = 0; j < 2 * basis.size(); ++j) {
            int expected = (i / 2 == j / 2 && i != j) ? 1 : 0;
            if (symplectic_product(p, flat(j)) != expected) return false;
        }
    }
    return true;
}

}  // namespace tb
