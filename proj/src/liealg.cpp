#include "brstkit/liealg.hpp"

#include <sstream>
#include <stdexcept>

namespace brstkit {

LieAlgebra::LieAlgebra(std::string name, std::vector<std::string> labels, BracketTable brackets,
                       std::optional<RatMatrix> form)
    : name_(std::move(name)), labels_(std::move(labels)), upper_(std::move(brackets)), form_(std::move(form)) {
    const std::size_t n = labels_.size();
    table_.assign(n, std::vector<RatVec>(n, zero_vec(n)));
    for (const auto& [key, v] : upper_) {
        const auto [i, j] = key;
        if (i >= n || j >= n || i >= j)
            throw std::invalid_argument("bracket table entry must have i < j < dim");
        if (v.size() != n) throw std::invalid_argument("bracket vector has wrong length");
        table_[i][j] = v;
        RatVec neg(v);
        for (auto& x : neg) x = -x;
        table_[j][i] = std::move(neg);
    }
    if (form_) {
        if (form_->size() != n) throw std::invalid_argument("form has wrong size");
        for (const auto& row : *form_)
            if (row.size() != n) throw std::invalid_argument("form has wrong size");
    }
}

std::optional<std::size_t> LieAlgebra::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return i;
    return std::nullopt;
}

Element LieAlgebra::basis_element(const std::string& label) const {
    auto i = index_of(label);
    if (!i) throw std::out_of_range("unknown basis label '" + label + "' in " + name_);
    return unit_vec(dim(), *i);
}

Element LieAlgebra::bracket(const Element& x, const Element& y) const {
    const std::size_t n = dim();
    Element out = zero_vec(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (y[j] == 0 || i == j) continue;
            const Rat c = x[i] * y[j];
            const auto& b = table_[i][j];
            for (std::size_t k = 0; k < n; ++k)
                if (b[k] != 0) out[k] += c * b[k];
        }
    }
    return out;
}

RatMatrix LieAlgebra::ad(const Element& x) const {
    const std::size_t n = dim();
    RatMatrix m(n, RatVec(n, Rat(0)));
    for (std::size_t j = 0; j < n; ++j) {
        auto col = bracket(x, unit_vec(n, j));
        for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
    }
    return m;
}

const RatMatrix& LieAlgebra::form() const {
    if (!form_) throw std::logic_error("algebra " + name_ + " carries no invariant form");
    return *form_;
}

Rat LieAlgebra::form_value(const Element& x, const Element& y) const {
    const auto& f = form();
    Rat s = 0;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j)
            if (y[j] != 0 && f[i][j] != 0) s += x[i] * f[i][j] * y[j];
    }
    return s;
}

// ---------------------------------------------------------------------------

LieAlgebra construct_sl(std::size_t n) {
    if (n < 2) throw std::invalid_argument("construct_sl: n must be at least 2");
    // Basis as n×n matrices: upper E_ij, then H_i, then lower E_ij.
    using Mat = std::vector<std::vector<Rat>>;
    std::vector<std::string> labels;
    std::vector<Mat> mats;
    auto elementary = [n](std::size_t i, std::size_t j) {
        Mat m(n, std::vector<Rat>(n, Rat(0)));
        m[i][j] = 1;
        return m;
    };
    auto ij_label = [](std::size_t i, std::size_t j) {
        return "E" + std::to_string(i + 1) + std::to_string(j + 1);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            labels.push_back(ij_label(i, j));
            mats.push_back(elementary(i, j));
        }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Mat m(n, std::vector<Rat>(n, Rat(0)));
        m[i][i] = 1;
        m[i + 1][i + 1] = -1;
        labels.push_back("H" + std::to_string(i + 1));
        mats.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            labels.push_back(ij_label(i, j));
            mats.push_back(elementary(i, j));
        }
    if (n == 2) labels = {"e", "h", "f"};

    const std::size_t dim = mats.size();
    auto mul = [n](const Mat& a, const Mat& b) {
        Mat c(n, std::vector<Rat>(n, Rat(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (a[i][k] != 0)
                    for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        return c;
    };
    // Coordinates of a traceless matrix: off-diagonal entries read directly;
    // diagonal d = sum_i c_i (E_ii - E_{i+1,i+1}) gives c_i = d_1 + ... + d_i.
    auto coords = [&](const Mat& m) {
        RatVec v(dim, Rat(0));
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) v[idx++] = m[i][j];
        Rat partial = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            partial += m[i][i];
            v[idx++] = partial;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) v[idx++] = m[i][j];
        return v;
    };
    LieAlgebra::BracketTable table;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a + 1; b < dim; ++b) {
            Mat ab = mul(mats[a], mats[b]);
            Mat ba = mul(mats[b], mats[a]);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) ab[i][j] -= ba[i][j];
            RatVec v = coords(ab);
            if (!is_zero_vec(v)) table[{a, b}] = std::move(v);
        }
    LieAlgebra alg("sl" + std::to_string(n), std::move(labels), std::move(table));
    alg.set_form(killing_form(alg));
    return alg;
}

TripleReport verify_jacobi(const LieAlgebra& alg) {
    const std::size_t n = alg.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto x = unit_vec(n, i), y = unit_vec(n, j), z = unit_vec(n, k);
                auto s = alg.bracket(alg.bracket(x, y), z);
                s = add_scaled(s, alg.bracket(alg.bracket(y, z), x), 1);
                s = add_scaled(s, alg.bracket(alg.bracket(z, x), y), 1);
                if (!is_zero_vec(s)) {
                    std::ostringstream os;
                    os << "Jacobi fails on (" << alg.label(i) << ", " << alg.label(j) << ", " << alg.label(k) << ")";
                    return {false, i, j, k, os.str()};
                }
            }
    return {};
}

RatMatrix killing_form(const LieAlgebra& alg) {
    const std::size_t n = alg.dim();
    std::vector<RatMatrix> ads;
    for (std::size_t i = 0; i < n; ++i) ads.push_back(alg.ad(unit_vec(n, i)));
    RatMatrix k(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rat tr = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (ads[i][a][b] != 0 && ads[j][b][a] != 0) tr += ads[i][a][b] * ads[j][b][a];
            k[i][j] = tr;
            k[j][i] = tr;
        }
    return k;
}

TripleReport verify_form(const LieAlgebra& alg, const RatMatrix& form) {
    const std::size_t n = alg.dim();
    if (form.size() != n) return {false, 0, 0, 0, "form has wrong size"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (form[i][j] != form[j][i])
                return {false, i, j, j, "form not symmetric at (" + alg.label(i) + ", " + alg.label(j) + ")"};
    auto value = [&](const Element& x, const Element& y) {
        Rat s = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (x[a] != 0 && y[b] != 0) s += x[a] * form[a][b] * y[b];
        return s;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const auto x = unit_vec(n, i), y = unit_vec(n, j), z = unit_vec(n, k);
                if (value(x, alg.bracket(y, z)) != value(alg.bracket(x, y), z))
                    return {false, i, j, k,
                            "form not invariant on (" + alg.label(i) + ", " + alg.label(j) + ", " + alg.label(k) + ")"};
            }
    return {};
}

TripleReport verify_grading(const LieAlgebra& alg, const Grading& grading) {
    const std::size_t n = alg.dim();
    if (grading.degrees.size() != n) return {false, 0, 0, 0, "grading has wrong length"};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& b = alg.bracket_basis(i, j);
            for (std::size_t k = 0; k < n; ++k)
                if (b[k] != 0 && grading.degrees[k] != grading.degrees[i] + grading.degrees[j])
                    return {false, i, j, k,
                            "[" + alg.label(i) + ", " + alg.label(j) + "] has a component " + alg.label(k) +
                                " of the wrong degree"};
        }
    return {};
}

Grading grading_from_element(const LieAlgebra& alg, const Element& h) {
    const std::size_t n = alg.dim();
    Grading g;
    g.degrees.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto col = alg.bracket(h, unit_vec(n, j));
        for (std::size_t i = 0; i < n; ++i)
            if (i != j && col[i] != 0)
                throw std::invalid_argument("ad h is not diagonal on basis vector " + alg.label(j));
        const Rat& ev = col[j];
        if (ev.get_den() != 1)
            throw std::invalid_argument("ad h has non-integer eigenvalue " + format_rat(ev) + " on " + alg.label(j));
        g.degrees[j] = static_cast<int>(ev.get_num().get_si());
    }
    return g;
}

std::vector<std::size_t> graded_component(const LieAlgebra& alg, const Grading& grading, int i) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < alg.dim(); ++k)
        if (grading.degrees.at(k) == i) out.push_back(k);
    return out;
}

std::optional<int> homogeneous_degree(const Grading& grading, const Element& x) {
    std::optional<int> deg;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0) continue;
        if (deg && *deg != grading.degrees.at(k)) return std::nullopt;
        deg = grading.degrees.at(k);
    }
    return deg;
}

}  // namespace brstkit
