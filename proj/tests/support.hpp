#pragma once

// Shared fixtures and independent reference computations for the unit tests.

#include "brstkit/brst.hpp"
#include "brstkit/cohomod.hpp"
#include "brstkit/nilreduce.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace tk {

using namespace brstkit;

inline std::shared_ptr<const LieAlgebra> sl(std::size_t n) { return std::make_shared<LieAlgebra>(construct_sl(n)); }

inline Element el(const LieAlgebra& g, const std::string& label, const Rat& c = 1) {
    Element x(g.dim(), Rat(0));
    x[*g.index_of(label)] = c;
    return x;
}

inline Element diag_element(const LieAlgebra& g, const std::vector<int>& h_coeffs) {
    Element x(g.dim(), Rat(0));
    for (std::size_t i = 0; i < h_coeffs.size(); ++i) x[*g.index_of("H" + std::to_string(i + 1))] = h_coeffs[i];
    return x;
}

/// sl3 with h = diag(1, 0, -1) and e = E13.
inline ReductionDatum sl3_minimal() {
    auto g = sl(3);
    return make_datum(g, grading_from_element(*g, diag_element(*g, {1, 1})), el(*g, "E13"), 2);
}

/// sl2 with h and e.
inline ReductionDatum sl2_principal() {
    auto g = sl(2);
    return make_datum(g, grading_from_element(*g, el(*g, "h")), el(*g, "e"), 2);
}

/// sl4 with the principal e = E12 + E23 + E34 and h = diag(3, 1, -1, -3).
inline ReductionDatum sl4_principal() {
    auto g = sl(4);
    Element e = el(*g, "E12");
    e = add_scaled(e, el(*g, "E23"), 1);
    e = add_scaled(e, el(*g, "E34"), 1);
    return make_datum(g, grading_from_element(*g, diag_element(*g, {3, 4, 3})), e, 2);
}

/// sl4 with the minimal e = E14 and h = diag(1, 0, 0, -1); g_{-1} is four-dimensional.
inline ReductionDatum sl4_minimal() {
    auto g = sl(4);
    return make_datum(g, grading_from_element(*g, diag_element(*g, {1, 1, 1})), el(*g, "E14"), 2);
}

inline AdmissiblePair default_pair(const ReductionDatum& d) {
    return construct_admissible_pair(d, {window_complement(d), {}}).pair;
}

/// Loop algebra over the given labels in order.
inline std::shared_ptr<const LoopAlgebra> loop_over(std::shared_ptr<const LieAlgebra> g,
                                                    const std::vector<std::string>& labels) {
    std::vector<Element> basis;
    for (const auto& l : labels) basis.push_back(el(*g, l));
    return LoopAlgebra::create(g, basis);
}

inline Polarization sec1() { return Polarization::preset("sec1"); }
inline Polarization kw() { return Polarization::preset("kw"); }

inline TensorMono vacuum() { return {}; }

inline TensorMono fermions(std::vector<FermionSym> f) {
    std::sort(f.begin(), f.end());
    TensorMono m;
    m.fer = std::move(f);
    return m;
}

inline FermionSym iota_sym(std::uint32_t i, int n) { return {n, Family::Iota, i}; }
inline FermionSym eps_sym(std::uint32_t i, int m) { return {m, Family::Eps, i}; }

inline TensorState apply_seq(const std::vector<LazyOperator>& ops, TensorState s) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) s = it->apply(s);
    return s;
}

inline bool same(const TensorState& a, const TensorState& b) { return difference(a, b).empty(); }

/// Deterministic subsample in input order.
template <class T>
std::vector<T> pick(const std::vector<T>& pool, std::size_t n, std::uint64_t seed) {
    if (n >= pool.size()) return pool;
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<T> out;
    for (auto i : idx) out.push_back(pool[i]);
    return out;
}

inline Rat random_rat(std::mt19937_64& rng, int bound = 5) {
    std::uniform_int_distribution<int> num(-bound, bound), den(1, 3);
    Rat r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline Element random_element(std::mt19937_64& rng, std::size_t dim) {
    Element x(dim);
    for (auto& c : x) c = random_rat(rng);
    return x;
}

// ---------------------------------------------------------------------------
// Independent references.

/// n×n matrix of a construct_sl basis element, read off the label.
inline RatMatrix sl_matrix_of_label(std::size_t n, const std::string& label) {
    RatMatrix m(n, RatVec(n, Rat(0)));
    if (n == 2 && label.size() == 1) {
        if (label == "e") m[0][1] = 1;
        if (label == "f") m[1][0] = 1;
        if (label == "h") m[0][0] = 1, m[1][1] = -1;
        return m;
    }
    if (label[0] == 'E') {
        m[label[1] - '1'][label[2] - '1'] = 1;
    } else {
        const std::size_t i = static_cast<std::size_t>(std::stoi(label.substr(1))) - 1;
        m[i][i] = 1;
        m[i + 1][i + 1] = -1;
    }
    return m;
}

inline RatMatrix sl_matrix(const LieAlgebra& g, std::size_t n, const Element& x) {
    RatMatrix out(n, RatVec(n, Rat(0)));
    for (std::size_t k = 0; k < g.dim(); ++k) {
        if (x[k] == 0) continue;
        auto b = sl_matrix_of_label(n, g.label(k));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) out[r][c] += x[k] * b[r][c];
    }
    return out;
}

inline Rat trace_product(const RatMatrix& a, const RatMatrix& b) {
    Rat t = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) t += a[i][j] * b[j][i];
    return t;
}

/// tr(ad x ad y) from the structure constants, without going through killing_form.
inline Rat adjoint_trace(const LieAlgebra& g, const Element& x, const Element& y) {
    Rat t = 0;
    for (std::size_t j = 0; j < g.dim(); ++j) {
        const Element yj = g.bracket(y, unit_vec(g.dim(), j));
        t += g.bracket(x, yj)[j];
    }
    return t;
}

/// A plain finite-wedge model: a fermion word is kept unsorted and reduced by bubble sort
/// with explicit sign tracking. Used to cross-check the library's Clifford action.
struct Wedge {
    Polarization pol;

    /// Applies gen to a sorted list; returns false on zero.
    bool apply(const FermionSym& gen, std::vector<FermionSym>& fer, int& sign) const {
        const bool annihilator = gen.family == Family::Iota ? gen.mode >= pol.iota_from : gen.mode >= pol.eps_from;
        if (!annihilator) {
            std::vector<FermionSym> w{gen};
            w.insert(w.end(), fer.begin(), fer.end());
            for (std::size_t pass = 0; pass < w.size(); ++pass)
                for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                    if (w[k] == w[k + 1]) return false;
                    if (w[k + 1] < w[k]) {
                        std::swap(w[k], w[k + 1]);
                        sign = -sign;
                    }
                }
            fer = w;
            return true;
        }
        // ι(u_{i,n}) contracts ε(u*_{i,-n-1}) and vice versa.
        const FermionSym target{-gen.mode - 1, gen.family == Family::Iota ? Family::Eps : Family::Iota, gen.idx};
        for (std::size_t k = 0; k < fer.size(); ++k) {
            if (fer[k] == target) {
                if (k % 2) sign = -sign;
                fer.erase(fer.begin() + static_cast<long>(k));
                return true;
            }
        }
        return false;
    }

    bool annihilates(const FermionSym& g) const {
        return g.family == Family::Iota ? g.mode >= pol.iota_from : g.mode >= pol.eps_from;
    }

    /// coeff · :a b: applied to fer, added to out (fermion part only).
    void normal_pair(const FermionSym& a, const FermionSym& b, const Rat& coeff, const TensorMono& m,
                     TensorState& out) const {
        FermionSym first = a, second = b;
        Rat c = coeff;
        if (annihilates(a) && !annihilates(b)) {
            std::swap(first, second);
            c = -c;
        }
        auto fer = m.fer;
        int sign = 1;
        if (!apply(second, fer, sign) || !apply(first, fer, sign)) return;
        TensorMono t = m;
        t.fer = fer;
        add_term(out, t, sign > 0 ? c : Rat(-c));
    }
};

/// ρ(x) s by the coadjoint form -Σ_j :ι(u_{j,n}) ε(ad*x (u*_{j,-n-1})): + β(x), summed over
/// |n| ≤ reach. ad*x(u*_{j,m}) = -Σ_i (coefficient of u_j in [x, u_i]) u*_{i,m+p}.
inline TensorState rho_coadjoint(const LoopAlgebra& loop, const Polarization& pol, const OneForm& beta,
                                 const LoopElement& x, const TensorMono& s, int reach) {
    Wedge w{pol};
    TensorState out;
    const std::size_t r = loop.rank();
    for (int n = -reach; n <= reach; ++n)
        for (std::uint32_t j = 0; j < r; ++j) {
            const int m = -n - 1;
            for (std::uint32_t i = 0; i < r; ++i) {
                const RatVec br = loop.bracket_coords(x.coeffs, unit_vec(r, i));
                if (br[j] == 0) continue;
                // -Σ_j ι(u_j) ε(-c u*_{i,m+p}) = +c ι(u_{j,n}) ε(u*_{i,m+p}).
                w.normal_pair(iota_sym(j, n), eps_sym(i, m + x.mode), br[j], s, out);
            }
        }
    const Rat b = beta(x);
    if (b != 0) add_term(out, s, b);
    return out;
}

/// Σ_j (coefficients of ad*x(z*)) for z* = Σ coeffs_j u*_{j,m}: returns (coefficients, mode).
inline std::pair<RatVec, int> coadjoint(const LoopAlgebra& loop, const LoopElement& x, const RatVec& z, int m) {
    const std::size_t r = loop.rank();
    RatVec out(r, Rat(0));
    for (std::size_t i = 0; i < r; ++i) {
        const RatVec br = loop.bracket_coords(x.coeffs, unit_vec(r, i));
        for (std::size_t j = 0; j < r; ++j) out[i] -= z[j] * br[j];
    }
    return {out, m + x.mode};
}

/// Number of partitions of n.
inline long partitions(int n) {
    if (n < 0) return 0;
    std::vector<long> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int t = k; t <= n; ++t) p[static_cast<std::size_t>(t)] += p[static_cast<std::size_t>(t - k)];
    return p[static_cast<std::size_t>(n)];
}

}  // namespace tk
