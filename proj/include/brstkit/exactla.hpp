#pragma once

// Exact rational scalars and sparse linear algebra over Q.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace brstkit {

/// Arbitrary-precision rational, always canonical (lowest terms, q > 0).
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
/// Dense row-major matrix; used for the small finite-dimensional tables.
using RatMatrix = std::vector<RatVec>;

/// Parses "p/q", "p", "-p/q". Throws std::invalid_argument on malformed input
/// or a zero denominator.
Rat parse_rat(std::string_view text);
/// "p/q", or "p" when q = 1.
std::string format_rat(const Rat& value);

bool is_zero_vec(const RatVec& v);
RatVec zero_vec(std::size_t n);
RatVec unit_vec(std::size_t n, std::size_t i);
RatVec add_scaled(const RatVec& a, const RatVec& b, const Rat& s);  // a + s*b
RatMatrix identity_matrix(std::size_t n);
RatMatrix transpose(const RatMatrix& m);
RatMatrix matmul(const RatMatrix& a, const RatMatrix& b);
RatVec matvec(const RatMatrix& m, const RatVec& v);

struct Triplet {
    std::size_t row;
    std::size_t col;
    Rat value;
};

class SparseMat {
public:
    SparseMat() = default;
    SparseMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    static SparseMat from_dense(const RatMatrix& dense);
    /// Columns of the result are the given vectors.
    static SparseMat from_columns(const std::vector<RatVec>& columns, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }

    /// Accumulates into (r, c); an entry that becomes zero is erased.
    void add(std::size_t r, std::size_t c, const Rat& v);
    void set(std::size_t r, std::size_t c, const Rat& v);
    Rat get(std::size_t r, std::size_t c) const;

    /// Row-major sorted triplets.
    std::vector<Triplet> entries() const;
    /// Row-major sparse rows, each sorted by column.
    std::vector<std::vector<std::pair<std::size_t, Rat>>> row_lists() const;

    SparseMat transposed() const;
    RatVec multiply(const RatVec& x) const;
    SparseMat multiply(const SparseMat& other) const;
    bool is_zero() const { return entries_.empty(); }
    RatMatrix to_dense() const;

private:
    void check_index(std::size_t r, std::size_t c) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::map<std::pair<std::size_t, std::size_t>, Rat> entries_;
};

/// Exact rank over Q.
std::size_t rank(const SparseMat& m);
/// Basis of the right kernel; size = cols - rank.
std::vector<RatVec> kernel_basis(const SparseMat& m);
/// Some x with m x = b, or nullopt when the system is inconsistent.
/// Throws std::invalid_argument when b has the wrong length.
std::optional<RatVec> solve_linear(const SparseMat& m, const RatVec& b);

// Subspace helpers: a subspace is given by a (possibly dependent) spanning list.
std::size_t span_rank(const std::vector<RatVec>& vectors, std::size_t ambient);
bool span_contains(const std::vector<RatVec>& span, const RatVec& v, std::size_t ambient);
bool span_includes(const std::vector<RatVec>& big, const std::vector<RatVec>& small, std::size_t ambient);
bool span_equal(const std::vector<RatVec>& a, const std::vector<RatVec>& b, std::size_t ambient);
/// Basis of span(a) ∩ span(b).
std::vector<RatVec> span_intersection(const std::vector<RatVec>& a, const std::vector<RatVec>& b,
                                      std::size_t ambient);
/// Linearly independent sublist chosen greedily in order.
std::vector<RatVec> independent_subset(const std::vector<RatVec>& vectors, std::size_t ambient);

}  // namespace brstkit
