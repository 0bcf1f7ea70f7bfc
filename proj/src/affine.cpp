#include "brstkit/affine.hpp"

#include "brstkit/errors.hpp"

#include <algorithm>

namespace brstkit {

std::shared_ptr<const LoopAlgebra> LoopAlgebra::create(std::shared_ptr<const LieAlgebra> g,
                                                       std::vector<Element> basis) {
    if (!g) throw InputError("loop algebra needs a base algebra");
    const std::size_t dim = g->dim();
    for (const auto& v : basis)
        if (v.size() != dim) throw InputError("loop basis vector has wrong length");
    if (span_rank(basis, dim) != basis.size()) throw InputError("loop basis vectors are linearly dependent");

    std::shared_ptr<LoopAlgebra> out(new LoopAlgebra());
    out->g_ = std::move(g);
    out->basis_ = std::move(basis);
    const std::size_t r = out->basis_.size();
    out->structure_.assign(r, std::vector<RatVec>(r, zero_vec(r)));
    SparseMat cols = SparseMat::from_columns(out->basis_, dim);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            auto b = out->g_->bracket(out->basis_[i], out->basis_[j]);
            if (is_zero_vec(b)) continue;
            auto x = solve_linear(cols, b);
            if (!x) throw InputError("subalgebra not closed: [" + std::to_string(i) + ", " + std::to_string(j) + "] leaves the span");
            out->structure_[i][j] = *x;
            RatVec neg(*x);
            for (auto& c : neg) c = -c;
            out->structure_[j][i] = std::move(neg);
        }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k)
                if (out->structure_[i][j][k] != 0) out->constants_.push_back({i, j, k, out->structure_[i][j][k]});

    // Lower central series in loop coordinates.
    std::vector<RatVec> current;
    for (std::size_t i = 0; i < r; ++i) current.push_back(unit_vec(r, i));
    std::size_t d = r;
    while (d > 0) {
        out->series_.push_back(d);
        std::vector<RatVec> next;
        for (std::size_t i = 0; i < r; ++i)
            for (const auto& c : current) {
                auto b = out->bracket_coords(unit_vec(r, i), c);
                if (!is_zero_vec(b)) next.push_back(std::move(b));
            }
        next = independent_subset(next, r);
        if (next.size() == d) throw InputError("subalgebra is not nilpotent: lower central series stalls at dimension " + std::to_string(d));
        current = std::move(next);
        d = current.size();
    }
    return out;
}

std::string LoopAlgebra::label(std::size_t i) const {
    const auto& v = basis_.at(i);
    std::size_t nz = 0, where = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0) {
            ++nz;
            where = k;
        }
    if (nz == 1 && v[where] == 1) return g_->label(where);
    return "u" + std::to_string(i + 1);
}

RatVec LoopAlgebra::bracket_coords(const RatVec& x, const RatVec& y) const {
    const std::size_t r = rank();
    RatVec out = zero_vec(r);
    for (const auto& c : constants_)
        if (x[c.i] != 0 && y[c.j] != 0) out[c.k] += x[c.i] * y[c.j] * c.c;
    return out;
}

LoopElement LoopAlgebra::bracket(const LoopElement& x, const LoopElement& y) const {
    return {x.mode + y.mode, bracket_coords(x.coeffs, y.coeffs)};
}

RatVec LoopAlgebra::coords(const Element& x) const {
    auto c = solve_linear(SparseMat::from_columns(basis_, g_->dim()), x);
    if (!c) throw InputError("element does not lie in the loop subalgebra");
    return *c;
}

Element LoopAlgebra::to_g(const RatVec& c) const {
    Element out = zero_vec(g_->dim());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) out = add_scaled(out, basis_[i], c[i]);
    return out;
}

std::optional<std::vector<int>> LoopAlgebra::basis_degrees(const Grading& grading) const {
    std::vector<int> out;
    for (const auto& v : basis_) {
        auto d = homogeneous_degree(grading, v);
        if (!d) return std::nullopt;
        out.push_back(*d);
    }
    return out;
}

LoopElement LoopAlgebra::mode_element(std::size_t i, int mode) const { return {mode, unit_vec(rank(), i)}; }

// ---------------------------------------------------------------------------

Rat OneForm::operator()(std::size_t i, int mode) const {
    auto it = values.find({i, mode});
    return it == values.end() ? Rat(0) : it->second;
}

Rat OneForm::operator()(const LoopElement& x) const {
    Rat s = 0;
    for (std::size_t i = 0; i < x.coeffs.size(); ++i)
        if (x.coeffs[i] != 0) s += x.coeffs[i] * (*this)(i, x.mode);
    return s;
}

std::vector<int> OneForm::support_modes() const {
    std::vector<int> out;
    for (const auto& [key, v] : values) out.push_back(key.second);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void OneForm::set(std::size_t i, int mode, const Rat& v) {
    if (v == 0)
        values.erase({i, mode});
    else
        values[{i, mode}] = v;
}

OneForm beta_e(const ReductionDatum& datum, const LoopAlgebra& loop) {
    OneForm b;
    for (std::size_t i = 0; i < loop.rank(); ++i)
        b.set(i, -1, datum.alg->form_value(datum.e, loop.basis(i)));
    return b;
}

// ---------------------------------------------------------------------------

void add_term(CurrentState& s, const CurrentMono& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = s.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) s.erase(it);
    }
}

int current_energy(const CurrentMono& m) {
    int e = 0;
    for (const auto& c : m) e -= c.mode;
    return e;
}

VacuumModule::VacuumModule(std::shared_ptr<const LieAlgebra> g, Rat level) : g_(std::move(g)), k_(std::move(level)) {
    if (!g_) throw InputError("vacuum module needs an algebra");
    if (!g_->has_form()) throw InputError("vacuum module needs an invariant form");
}

void VacuumModule::clear_cache() const {
    std::lock_guard lock(mu_);
    cache_.clear();
}

CurrentState VacuumModule::act_basis(std::uint32_t idx, int mode, const CurrentMono& mono) const {
    if (mode > current_energy(mono)) return {};
    if (mode <= -1 && (mono.empty() || CurrentSym{mode, idx} <= mono.front())) {
        CurrentMono out;
        out.reserve(mono.size() + 1);
        out.push_back({mode, idx});
        out.insert(out.end(), mono.begin(), mono.end());
        return {{std::move(out), Rat(1)}};
    }
    auto key = std::make_tuple(idx, mode, mono);
    {
        std::lock_guard lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    CurrentState result = compute(idx, mode, mono);
    std::lock_guard lock(mu_);
    cache_.emplace(std::move(key), result);
    return result;
}

CurrentState VacuumModule::compute(std::uint32_t idx, int mode, const CurrentMono& mono) const {
    if (mono.empty()) return {};
    // x c R = c (x R) + [x, c] R
    const CurrentSym c = mono.front();
    const CurrentMono rest(mono.begin() + 1, mono.end());
    CurrentState out;
    for (const auto& [m, coeff] : act_basis(idx, mode, rest))
        for (const auto& [m2, coeff2] : act_basis(c.idx, c.mode, m)) add_term(out, m2, coeff * coeff2);
    for (const auto& [m, coeff] : bracket_then_act(idx, mode, c, rest)) add_term(out, m, coeff);
    return out;
}

CurrentState VacuumModule::bracket_then_act(std::uint32_t a, int m, const CurrentSym& c,
                                            const CurrentMono& rest) const {
    CurrentState out;
    const auto& b = g_->bracket_basis(a, c.idx);
    if (a != c.idx)
        for (std::uint32_t k = 0; k < b.size(); ++k)
            if (b[k] != 0)
                for (const auto& [mono, coeff] : act_basis(k, m + c.mode, rest)) add_term(out, mono, coeff * b[k]);
    if (m + c.mode == 0) {
        Rat central = Rat(m) * g_->form()[a][c.idx] * k_;
        add_term(out, rest, central);
    }
    return out;
}

CurrentState VacuumModule::act_mono(const Element& x, int mode, const CurrentMono& mono) const {
    CurrentState out;
    for (std::uint32_t a = 0; a < x.size(); ++a)
        if (x[a] != 0)
            for (const auto& [m, c] : act_basis(a, mode, mono)) add_term(out, m, c * x[a]);
    return out;
}

CurrentState VacuumModule::act(const Element& x, int mode, const CurrentState& s) const {
    CurrentState out;
    for (const auto& [mono, c] : s)
        for (const auto& [m, c2] : act_mono(x, mode, mono)) add_term(out, m, c * c2);
    return out;
}

}  // namespace brstkit
