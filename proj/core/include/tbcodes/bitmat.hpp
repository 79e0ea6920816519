#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace tb {

// Dense matrix over F2, bit-packed row-major into 64-bit words.
// Invariant: unused bits past the last column of each row are always zero,
// so whole-word operations (xor, popcount, comparison) need no masking.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols);

    static BitMatrix identity(size_t n);
    // Cyclic shift: row i has its single 1 at column (i + power) mod n.
    static BitMatrix shift(size_t n, size_t power = 1);
    // Rows from 0/1 characters; rows separated by ';' or newline, e.g. "010;001;100".
    static BitMatrix from_string(const std::string& text);
    static BitMatrix row_vector(size_t cols, const std::vector<size_t>& support);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t words_per_row() const { return words_per_row_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    bool get(size_t r, size_t c) const;
    void set(size_t r, size_t c, bool value);

    uint64_t* row(size_t r) { return data_.data() + r * words_per_row_; }
    const uint64_t* row(size_t r) const { return data_.data() + r * words_per_row_; }

    void xor_row(size_t dst, size_t src);
    void xor_row_from(size_t dst, const BitMatrix& other, size_t src);
    void swap_rows(size_t a, size_t b);
    bool row_is_zero(size_t r) const;
    size_t row_weight(size_t r) const;
    // Column of the first set bit in row r, or cols() if the row is zero.
    size_t row_pivot(size_t r) const;

    size_t weight() const;
    std::vector<size_t> row_support(size_t r) const;

    BitMatrix transposed() const;
    BitMatrix submatrix_rows(const std::vector<size_t>& row_ids) const;
    BitMatrix slice_cols(size_t begin, size_t end) const;

    bool operator==(const BitMatrix& other) const;
    bool operator!=(const BitMatrix& other) const { return !(*this == other); }

    // Total ordering used for deterministic tie-breaking: by shape, then
    // lexicographic over rows with column 0 treated as most significant.
    bool lex_less(const BitMatrix& other) const;

    std::string to_string() const;

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t words_per_row_ = 0;
    std::vector<uint64_t> data_;
};

BitMatrix add(const BitMatrix& a, const BitMatrix& b);
BitMatrix matmul(const BitMatrix& a, const BitMatrix& b);
BitMatrix kron(const BitMatrix& a, const BitMatrix& b);
BitMatrix hstack(const BitMatrix& a, const BitMatrix& b);
BitMatrix vstack(const BitMatrix& a, const BitMatrix& b);

// Incrementally maintained basis of a row space, kept fully reduced
// (reduced row echelon form, rows ordered by pivot column).
class EchelonBasis {
  public:
    explicit EchelonBasis(size_t cols);
    explicit EchelonBasis(const BitMatrix& m);

    size_t cols() const { return cols_; }
    size_t dim() const { return pivots_.size(); }

    // Reduces v against the basis in place; returns true and absorbs the
    // remainder if it was independent.
    bool add_row(const uint64_t* v);
    bool add_rows(const BitMatrix& m);

    // Remainder of v after elimination; zero iff v is in the row space.
    void reduce(uint64_t* v) const;
    bool contains(const uint64_t* v) const;

    // Basis as a matrix in reduced row echelon form.
    BitMatrix matrix() const;

  private:
    size_t cols_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> rows_;     // dim() packed rows
    std::vector<size_t> pivots_;     // ascending pivot column per row
};

size_t rank(const BitMatrix& m);
// Reduced row echelon form with zero rows dropped.
BitMatrix row_echelon(const BitMatrix& m);
// Basis of {v : m v^T = 0}, returned in reduced row echelon form.
BitMatrix nullspace(const BitMatrix& m);
// Basis of rowspace(a) <intersect> rowspace(b) via the Zassenhaus construction.
BitMatrix intersect_rowspaces(const BitMatrix& a, const BitMatrix& b);
// v must be a 1 x cols row vector.
bool in_rowspace(const BitMatrix& v, const BitMatrix& m);

}  // namespace tb
