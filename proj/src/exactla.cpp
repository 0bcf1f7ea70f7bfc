#include "brstkit/exactla.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace brstkit {

Rat parse_rat(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    auto valid_int = [](std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    std::string num(text.substr(0, slash));
    std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
    if (!num.empty() && num[0] == '+') num.erase(0, 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    mpz_class p(num, 10), q(den, 10);
    if (q == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

std::string format_rat(const Rat& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool is_zero_vec(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

RatVec zero_vec(std::size_t n) { return RatVec(n, Rat(0)); }

RatVec unit_vec(std::size_t n, std::size_t i) {
    RatVec v(n, Rat(0));
    v.at(i) = 1;
    return v;
}

RatVec add_scaled(const RatVec& a, const RatVec& b, const Rat& s) {
    if (a.size() != b.size()) throw std::invalid_argument("add_scaled: size mismatch");
    RatVec out(a);
    if (s == 0) return out;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0) out[i] += s * b[i];
    return out;
}

RatMatrix identity_matrix(std::size_t n) {
    RatMatrix m(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

RatMatrix transpose(const RatMatrix& m) {
    if (m.empty()) return {};
    RatMatrix t(m[0].size(), RatVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

RatMatrix matmul(const RatMatrix& a, const RatMatrix& b) {
    if (a.empty()) return {};
    const std::size_t inner = a[0].size();
    if (inner != b.size()) throw std::invalid_argument("matmul: size mismatch");
    const std::size_t cols = b.empty() ? 0 : b[0].size();
    RatMatrix c(a.size(), RatVec(cols, Rat(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j)
                if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

RatVec matvec(const RatMatrix& m, const RatVec& v) {
    RatVec out(m.size(), Rat(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != v.size()) throw std::invalid_argument("matvec: size mismatch");
        for (std::size_t j = 0; j < v.size(); ++j)
            if (m[i][j] != 0 && v[j] != 0) out[i] += m[i][j] * v[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// SparseMat

SparseMat SparseMat::from_dense(const RatMatrix& dense) {
    SparseMat m(dense.size(), dense.empty() ? 0 : dense[0].size());
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i].size() != m.cols_) throw std::invalid_argument("from_dense: ragged rows");
        for (std::size_t j = 0; j < dense[i].size(); ++j)
            if (dense[i][j] != 0) m.entries_.emplace(std::make_pair(i, j), dense[i][j]);
    }
    return m;
}

SparseMat SparseMat::from_columns(const std::vector<RatVec>& columns, std::size_t rows) {
    SparseMat m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != rows) throw std::invalid_argument("from_columns: wrong length");
        for (std::size_t i = 0; i < rows; ++i)
            if (columns[j][i] != 0) m.entries_.emplace(std::make_pair(i, j), columns[j][i]);
    }
    return m;
}

void SparseMat::check_index(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMat index out of range");
}

void SparseMat::add(std::size_t r, std::size_t c, const Rat& v) {
    check_index(r, c);
    if (v == 0) return;
    auto [it, inserted] = entries_.try_emplace({r, c}, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0) entries_.erase(it);
    }
}

void SparseMat::set(std::size_t r, std::size_t c, const Rat& v) {
    check_index(r, c);
    if (v == 0)
        entries_.erase({r, c});
    else
        entries_[{r, c}] = v;
}

Rat SparseMat::get(std::size_t r, std::size_t c) const {
    check_index(r, c);
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rat(0) : it->second;
}

std::vector<Triplet> SparseMat::entries() const {
    std::vector<Triplet> out;
    out.reserve(entries_.size());
    for (const auto& [key, v] : entries_) out.push_back({key.first, key.second, v});
    return out;
}

std::vector<std::vector<std::pair<std::size_t, Rat>>> SparseMat::row_lists() const {
    std::vector<std::vector<std::pair<std::size_t, Rat>>> rows(rows_);
    for (const auto& [key, v] : entries_) rows[key.first].emplace_back(key.second, v);
    return rows;
}

SparseMat SparseMat::transposed() const {
    SparseMat t(cols_, rows_);
    for (const auto& [key, v] : entries_) t.entries_.emplace(std::make_pair(key.second, key.first), v);
    return t;
}

RatVec SparseMat::multiply(const RatVec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseMat::multiply: dimension mismatch");
    RatVec y(rows_, Rat(0));
    for (const auto& [key, v] : entries_)
        if (x[key.second] != 0) y[key.first] += v * x[key.second];
    return y;
}

SparseMat SparseMat::multiply(const SparseMat& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("SparseMat::multiply: dimension mismatch");
    auto right_rows = other.row_lists();
    SparseMat out(rows_, other.cols_);
    for (const auto& [key, v] : entries_)
        for (const auto& [c, w] : right_rows[key.second]) out.add(key.first, c, v * w);
    return out;
}

RatMatrix SparseMat::to_dense() const {
    RatMatrix d(rows_, RatVec(cols_, Rat(0)));
    for (const auto& [key, v] : entries_) d[key.first][key.second] = v;
    return d;
}

// ---------------------------------------------------------------------------
// Elimination

namespace {

using SparseRow = std::vector<std::pair<std::size_t, Rat>>;

// r - f * p, both sorted by column.
SparseRow subtract_scaled(const SparseRow& r, const Rat& f, const SparseRow& p) {
    SparseRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.emplace_back(p[j].first, -f * p[j].second);
            ++j;
        } else {
            Rat v = r[i].second - f * p[j].second;
            if (v != 0) out.emplace_back(r[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

std::size_t bit_size(const Rat& v) { return mpz_sizeinbase(v.get_num_mpz_t(), 2); }

struct Echelon {
    // Pivot rows normalized to leading coefficient 1, ascending pivot column.
    std::vector<SparseRow> rows;
    std::vector<std::size_t> pivot_cols;
};

// Column-by-column forward elimination. For each column, the pivot is chosen
// among rows whose leading entry sits in that column, preferring the smallest
// numerator bit size (first such row on ties).
Echelon echelonize(std::vector<SparseRow> input) {
    std::map<std::size_t, std::vector<SparseRow>> buckets;
    for (auto& r : input)
        if (!r.empty()) buckets[r.front().first].push_back(std::move(r));

    Echelon e;
    while (!buckets.empty()) {
        auto node = buckets.extract(buckets.begin());
        const std::size_t col = node.key();
        auto& rows = node.mapped();
        std::size_t best = 0;
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (bit_size(rows[k].front().second) < bit_size(rows[best].front().second)) best = k;
        SparseRow pivot = std::move(rows[best]);
        const Rat lead = pivot.front().second;
        if (lead != 1)
            for (auto& [c, v] : pivot) v /= lead;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k == best) continue;
            const Rat f = rows[k].front().second;
            SparseRow reduced = subtract_scaled(rows[k], f, pivot);
            if (!reduced.empty()) buckets[reduced.front().first].push_back(std::move(reduced));
        }
        e.pivot_cols.push_back(col);
        e.rows.push_back(std::move(pivot));
    }
    return e;
}

// Clears every pivot column above its pivot.
void reduce_to_rref(Echelon& e) {
    for (std::size_t j = e.rows.size(); j-- > 0;) {
        const std::size_t col = e.pivot_cols[j];
        for (std::size_t i = 0; i < j; ++i) {
            auto& row = e.rows[i];
            auto it = std::lower_bound(row.begin(), row.end(), col,
                                       [](const auto& entry, std::size_t c) { return entry.first < c; });
            if (it == row.end() || it->first != col) continue;
            const Rat f = it->second;
            row = subtract_scaled(row, f, e.rows[j]);
        }
    }
}

std::vector<SparseRow> rows_of(const SparseMat& m) {
    auto lists = m.row_lists();
    return {lists.begin(), lists.end()};
}

}  // namespace

std::size_t rank(const SparseMat& m) { return echelonize(rows_of(m)).rows.size(); }

std::vector<RatVec> kernel_basis(const SparseMat& m) {
    Echelon e = echelonize(rows_of(m));
    reduce_to_rref(e);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_cols) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        RatVec v(m.cols(), Rat(0));
        v[free] = 1;
        for (std::size_t j = 0; j < e.rows.size(); ++j) {
            const auto& row = e.rows[j];
            auto it = std::lower_bound(row.begin(), row.end(), free,
                                       [](const auto& entry, std::size_t c) { return entry.first < c; });
            if (it != row.end() && it->first == free) v[e.pivot_cols[j]] = -it->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RatVec> solve_linear(const SparseMat& m, const RatVec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length does not match rows");
    auto rows = rows_of(m);
    const std::size_t aug = m.cols();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (b[i] != 0) rows[i].emplace_back(aug, b[i]);
    Echelon e = echelonize(std::move(rows));
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == aug) return std::nullopt;
    reduce_to_rref(e);
    RatVec x(m.cols(), Rat(0));
    for (std::size_t j = 0; j < e.rows.size(); ++j) {
        const auto& row = e.rows[j];
        if (!row.empty() && row.back().first == aug) x[e.pivot_cols[j]] = row.back().second;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Subspaces

namespace {
SparseMat rows_matrix(const std::vector<RatVec>& vectors, std::size_t ambient) {
    SparseMat m(vectors.size(), ambient);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != ambient) throw std::invalid_argument("subspace vector has wrong length");
        for (std::size_t j = 0; j < ambient; ++j)
            if (vectors[i][j] != 0) m.set(i, j, vectors[i][j]);
    }
    return m;
}
}  // namespace

std::size_t span_rank(const std::vector<RatVec>& vectors, std::size_t ambient) {
    return rank(rows_matrix(vectors, ambient));
}

bool span_contains(const std::vector<RatVec>& span, const RatVec& v, std::size_t ambient) {
    auto with = span;
    with.push_back(v);
    return span_rank(with, ambient) == span_rank(span, ambient);
}

bool span_includes(const std::vector<RatVec>& big, const std::vector<RatVec>& small, std::size_t ambient) {
    auto joined = big;
    joined.insert(joined.end(), small.begin(), small.end());
    return span_rank(joined, ambient) == span_rank(big, ambient);
}

bool span_equal(const std::vector<RatVec>& a, const std::vector<RatVec>& b, std::size_t ambient) {
    const auto ra = span_rank(a, ambient);
    const auto rb = span_rank(b, ambient);
    auto joined = a;
    joined.insert(joined.end(), b.begin(), b.end());
    return ra == rb && span_rank(joined, ambient) == ra;
}

std::vector<RatVec> span_intersection(const std::vector<RatVec>& a, const std::vector<RatVec>& b,
                                      std::size_t ambient) {
    std::vector<RatVec> columns;
    for (const auto& v : a) columns.push_back(v);
    for (const auto& v : b) {
        RatVec neg(v);
        for (auto& x : neg) x = -x;
        columns.push_back(std::move(neg));
    }
    auto kernel = kernel_basis(SparseMat::from_columns(columns, ambient));
    std::vector<RatVec> out;
    for (const auto& k : kernel) {
        RatVec v(ambient, Rat(0));
        for (std::size_t i = 0; i < a.size(); ++i)
            if (k[i] != 0) v = add_scaled(v, a[i], k[i]);
        out.push_back(std::move(v));
    }
    return independent_subset(out, ambient);
}

std::vector<RatVec> independent_subset(const std::vector<RatVec>& vectors, std::size_t ambient) {
    std::vector<RatVec> chosen;
    std::size_t current = 0;
    for (const auto& v : vectors) {
        chosen.push_back(v);
        const auto r = span_rank(chosen, ambient);
        if (r == current)
            chosen.pop_back();
        else
            current = r;
    }
    return chosen;
}

}  // namespace brstkit
