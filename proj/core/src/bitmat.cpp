#include "tbcodes/bitmat.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "tbcodes/error.hpp"

namespace tb {

namespace {
constexpr size_t kWordBits = 64;

size_t words_for(size_t cols) { return (cols + kWordBits - 1) / kWordBits; }
}  // namespace

BitMatrix::BitMatrix(size_t rows, size_t cols)
    : rows_(rows), cols_(cols), words_per_row_(words_for(cols)), data_(rows * words_per_row_, 0) {}

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::shift(size_t n, size_t power) {
    require(n > 0, ErrorKind::shape, "shift matrix requires n > 0");
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, (i + power) % n, true);
    return m;
}

BitMatrix BitMatrix::from_string(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char ch : text) {
        if (ch == ';' || ch == '\n') {
            if (!current.empty()) lines.push_back(current);
            current.clear();
        } else if (ch == '0' || ch == '1') {
            current.push_back(ch);
        } else if (ch != ' ' && ch != '\t' && ch != '|') {
            fail(ErrorKind::parse, std::string("unexpected character in matrix literal: ") + ch);
        }
    }
    if (!current.empty()) lines.push_back(current);
    if (lines.empty()) return BitMatrix();
    size_t cols = lines[0].size();
    for (const auto& line : lines)
        require(line.size() == cols, ErrorKind::shape, "ragged rows in matrix literal");
    BitMatrix m(lines.size(), cols);
    for (size_t r = 0; r < lines.size(); ++r)
        for (size_t c = 0; c < cols; ++c)
            if (lines[r][c] == '1') m.set(r, c, true);
    return m;
}

BitMatrix BitMatrix::row_vector(size_t cols, const std::vector<size_t>& support) {
    BitMatrix v(1, cols);
    for (size_t c : support) {
        require(c < cols, ErrorKind::shape, "support index out of range");
        v.set(0, c, true);
    }
    return v;
}

bool BitMatrix::get(size_t r, size_t c) const {
    return (row(r)[c / kWordBits] >> (c % kWordBits)) & 1u;
}

void BitMatrix::set(size_t r, size_t c, bool value) {
    uint64_t mask = uint64_t{1} << (c % kWordBits);
    if (value) {
        row(r)[c / kWordBits] |= mask;
    } else {
        row(r)[c / kWordBits] &= ~mask;
    }
}

void BitMatrix::xor_row(size_t dst, size_t src) {
    uint64_t* d = row(dst);
    const uint64_t* s = row(src);
    for (size_t w = 0; w < words_per_row_; ++w) d[w] ^= s[w];
}

void BitMatrix::xor_row_from(size_t dst, const BitMatrix& other, size_t src) {
    require(other.cols_ == cols_, ErrorKind::shape, "xor_row_from column mismatch");
    uint64_t* d = row(dst);
    const uint64_t* s = other.row(src);
    for (size_t w = 0; w < words_per_row_; ++w) d[w] ^= s[w];
}

void BitMatrix::swap_rows(size_t a, size_t b) {
    if (a == b) return;
    uint64_t* ra = row(a);
    uint64_t* rb = row(b);
    for (size_t w = 0; w < words_per_row_; ++w) std::swap(ra[w], rb[w]);
}

bool BitMatrix::row_is_zero(size_t r) const {
    const uint64_t* p = row(r);
    for (size_t w = 0; w < words_per_row_; ++w)
        if (p[w]) return false;
    return true;
}

size_t BitMatrix::row_weight(size_t r) const {
    const uint64_t* p = row(r);
    size_t total = 0;
    for (size_t w = 0; w < words_per_row_; ++w) total += std::popcount(p[w]);
    return total;
}

size_t BitMatrix::row_pivot(size_t r) const {
    const uint64_t* p = row(r);
    for (size_t w = 0; w < words_per_row_; ++w)
        if (p[w]) return w * kWordBits + std::countr_zero(p[w]);
    return cols_;
}

size_t BitMatrix::weight() const {
    size_t total = 0;
    for (uint64_t w : data_) total += std::popcount(w);
    return total;
}

std::vector<size_t> BitMatrix::row_support(size_t r) const {
    std::vector<size_t> support;
    const uint64_t* p = row(r);
    for (size_t w = 0; w < words_per_row_; ++w) {
        uint64_t bits = p[w];
        while (bits) {
            support.push_back(w * kWordBits + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return support;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r) {
        const uint64_t* p = row(r);
        for (size_t w = 0; w < words_per_row_; ++w) {
            uint64_t bits = p[w];
            while (bits) {
                size_t c = w * kWordBits + std::countr_zero(bits);
                t.set(c, r, true);
                bits &= bits - 1;
            }
        }
    }
    return t;
}

BitMatrix BitMatrix::submatrix_rows(const std::vector<size_t>& row_ids) const {
    BitMatrix m(row_ids.size(), cols_);
    for (size_t i = 0; i < row_ids.size(); ++i) {
        require(row_ids[i] < rows_, ErrorKind::shape, "row index out of range");
        std::memcpy(m.row(i), row(row_ids[i]), words_per_row_ * sizeof(uint64_t));
    }
    return m;
}

BitMatrix BitMatrix::slice_cols(size_t begin, size_t end) const {
    require(begin <= end && end <= cols_, ErrorKind::shape, "column slice out of range");
    BitMatrix m(rows_, end - begin);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = begin; c < end; ++c)
            if (get(r, c)) m.set(r, c - begin, true);
    return m;
}

bool BitMatrix::operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool BitMatrix::lex_less(const BitMatrix& other) const {
    if (rows_ != other.rows_) return rows_ < other.rows_;
    if (cols_ != other.cols_) return cols_ < other.cols_;
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) {
            bool a = get(r, c);
            bool b = other.get(r, c);
            if (a != b) return b;  // a=0, b=1 means this row sorts first
        }
    }
    return false;
}

std::string BitMatrix::to_string() const {
    std::string out;
    out.reserve(rows_ * (cols_ + 1));
    for (size_t r = 0; r < rows_; ++r) {
        for (size_t c = 0; c < cols_; ++c) out.push_back(get(r, c) ? '1' : '0');
        if (r + 1 < rows_) out.push_back('\n');
    }
    return out;
}

BitMatrix add(const BitMatrix& a, const BitMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::shape,
            "add requires equal shapes");
    BitMatrix c = a;
    for (size_t r = 0; r < c.rows(); ++r) c.xor_row_from(r, b, r);
    return c;
}

BitMatrix matmul(const BitMatrix& a, const BitMatrix& b) {
    require(a.cols() == b.rows(), ErrorKind::shape, "matmul inner dimension mismatch");
    BitMatrix c(a.rows(), b.cols());
    for (size_t r = 0; r < a.rows(); ++r) {
        const uint64_t* arow = a.row(r);
        for (size_t w = 0; w < a.words_per_row(); ++w) {
            uint64_t bits = arow[w];
            while (bits) {
                size_t k = w * 64 + std::countr_zero(bits);
                c.xor_row_from(r, b, k);
                bits &= bits - 1;
            }
        }
    }
    return c;
}

BitMatrix kron(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t ar = 0; ar < a.rows(); ++ar) {
        for (size_t ac = 0; ac < a.cols(); ++ac) {
            if (!a.get(ar, ac)) continue;
            for (size_t br = 0; br < b.rows(); ++br) {
                const uint64_t* brow = b.row(br);
                for (size_t w = 0; w < b.words_per_row(); ++w) {
                    uint64_t bits = brow[w];
                    while (bits) {
                        size_t bc = w * 64 + std::countr_zero(bits);
                        c.set(ar * b.rows() + br, ac * b.cols() + bc, true);
                        bits &= bits - 1;
                    }
                }
            }
        }
    }
    return c;
}

BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
    require(a.rows() == b.rows(), ErrorKind::shape, "hstack row mismatch");
    BitMatrix c(a.rows(), a.cols() + b.cols());
    for (size_t r = 0; r < a.rows(); ++r) {
        for (size_t col : a.row_support(r)) c.set(r, col, true);
        for (size_t col : b.row_support(r)) c.set(r, a.cols() + col, true);
    }
    return c;
}

BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
    require(a.cols() == b.cols() || a.rows() == 0 || b.rows() == 0, ErrorKind::shape,
            "vstack column mismatch");
    size_t cols = a.rows() == 0 ? b.cols() : a.cols();
    BitMatrix c(a.rows() + b.rows(), cols);
    for (size_t r = 0; r < a.rows(); ++r)
        std::memcpy(c.row(r), a.row(r), a.words_per_row() * sizeof(uint64_t));
    for (size_t r = 0; r < b.rows(); ++r)
        std::memcpy(c.row(a.rows() + r), b.row(r), b.words_per_row() * sizeof(uint64_t));
    return c;
}

EchelonBasis::EchelonBasis(size_t cols) : cols_(cols), words_(words_for(cols)) {}

EchelonBasis::EchelonBasis(const BitMatrix& m) : EchelonBasis(m.cols()) {
    add_rows(m);
}

bool EchelonBasis::add_row(const uint64_t* v) {
    std::vector<uint64_t> work(v, v + words_);
    // Eliminate against existing rows.
    for (size_t i = 0; i < pivots_.size(); ++i) {
        size_t p = pivots_[i];
        if ((work[p / kWordBits] >> (p % kWordBits)) & 1u) {
            const uint64_t* basis_row = rows_.data() + i * words_;
            for (size_t w = 0; w < words_; ++w) work[w] ^= basis_row[w];
        }
    }
    size_t pivot = cols_;
    for (size_t w = 0; w < words_ && pivot == cols_; ++w)
        if (work[w]) pivot = w * kWordBits + std::countr_zero(work[w]);
    if (pivot == cols_) return false;

    // Back-substitute the new pivot out of existing rows to stay fully reduced.
    for (size_t i = 0; i < pivots_.size(); ++i) {
        uint64_t* basis_row = rows_.data() + i * words_;
        if ((basis_row[pivot / kWordBits] >> (pivot % kWordBits)) & 1u)
            for (size_t w = 0; w < words_; ++w) basis_row[w] ^= work[w];
    }

    // Insert keeping pivot order ascending.
    size_t at = 0;
    while (at < pivots_.size() && pivots_[at] < pivot) ++at;
    rows_.insert(rows_.begin() + at * words_, work.begin(), work.end());
    pivots_.insert(pivots_.begin() + at, pivot);
    return true;
}

bool EchelonBasis::add_rows(const BitMatrix& m) {
    require(m.cols() == cols_, ErrorKind::shape, "basis column mismatch");
    bool grew = false;
    for (size_t r = 0; r < m.rows(); ++r) grew |= add_row(m.row(r));
    return grew;
}

void EchelonBasis::reduce(uint64_t* v) const {
    for (size_t i = 0; i < pivots_.size(); ++i) {
        size_t p = pivots_[i];
        if ((v[p / kWordBits] >> (p % kWordBits)) & 1u) {
            const uint64_t* basis_row = rows_.data() + i * words_;
            for (size_t w = 0; w < words_; ++w) v[w] ^= basis_row[w];
        }
    }
}

bool EchelonBasis::contains(const uint64_t* v) const {
    std::vector<uint64_t> work(v, v + words_);
    reduce(work.data());
    for (uint64_t w : work)
        if (w) return false;
    return true;
}

BitMatrix EchelonBasis::matrix() const {
    BitMatrix m(dim(), cols_);
    for (size_t i = 0; i < dim(); ++i)
        std::memcpy(m.row(i), rows_.data() + i * words_, words_ * sizeof(uint64_t));
    return m;
}

size_t rank(const BitMatrix& m) {
    return EchelonBasis(m).dim();
}

BitMatrix row_echelon(const BitMatrix& m) {
    return EchelonBasis(m).matrix();
}

BitMatrix nullspace(const BitMatrix& m) {
    EchelonBasis basis(m);
    BitMatrix rref = basis.matrix();
    size_t n = m.cols();

    std::vector<bool> is_pivot(n, false);
    std::vector<size_t> pivot_row(n, 0);
    for (size_t r = 0; r < rref.rows(); ++r) {
        size_t p = rref.row_pivot(r);
        is_pivot[p] = true;
        pivot_row[p] = r;
    }

    BitMatrix result(n - rref.rows(), n);
    size_t out = 0;
    for (size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        result.set(out, free_col, true);
        for (size_t p = 0; p < n; ++p)
            if (is_pivot[p] && rref.get(pivot_row[p], free_col)) result.set(out, p, true);
        ++out;
    }
    return row_echelon(result);
}

BitMatrix intersect_rowspaces(const BitMatrix& a, const BitMatrix& b) {
    require(a.cols() == b.cols(), ErrorKind::shape, "intersect_rowspaces column mismatch");
    size_t n = a.cols();
    // Zassenhaus: eliminate rows (v|v) for v in a and (w|0) for w in b; rows of
    // the echelon form with zero left half carry an intersection vector on the
    // right half.
    BitMatrix stacked(a.rows() + b.rows(), 2 * n);
    for (size_t r = 0; r < a.rows(); ++r)
        for (size_t col : a.row_support(r)) {
            stacked.set(r, col, true);
            stacked.set(r, n + col, true);
        }
    for (size_t r = 0; r < b.rows(); ++r)
        for (size_t col : b.row_support(r)) stacked.set(a.rows() + r, col, true);

    BitMatrix reduced = row_echelon(stacked);
    EchelonBasis intersection(n);
    for (size_t r = 0; r < reduced.rows(); ++r) {
        if (reduced.row_pivot(r) < n) continue;
        BitMatrix right(1, n);
        for (size_t col : reduced.row_support(r)) right.set(0, col - n, true);
        intersection.add_rows(right);
    }
    return intersection.matrix();
}

bool in_rowspace(const BitMatrix& v, const BitMatrix& m) {
    require(v.rows() == 1 && v.cols() == m.cols(), ErrorKind::shape,
            "in_rowspace expects a 1 x cols row vector");
    return EchelonBasis(m).contains(v.row(0));
}

}  // namespace tb
