#include "brstkit/ghostspace.hpp"

#include "brstkit/errors.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace brstkit {

Polarization Polarization::preset(const std::string& name) {
    if (name == "sec1") return {"sec1", 1, -1, 1};
    if (name == "kw") return {"kw", 0, 0, 1};
    throw InputError("unknown polarization preset '" + name + "' (expected sec1 or kw)");
}

Polarization Polarization::custom(int iota_from, int eps_from, int boson_from) {
    if (eps_from != -iota_from)
        throw InputError("polarization thresholds are not complementary: need eps_from = -iota_from");
    return {"custom", iota_from, eps_from, boson_from};
}

bool clifford_apply(const Polarization& pol, const FermionSym& gen, std::vector<FermionSym>& fer, int& sign) {
    if (pol.annihilates(gen)) {
        const FermionSym target = partner(gen);
        auto it = std::lower_bound(fer.begin(), fer.end(), target);
        if (it == fer.end() || *it != target) return false;
        if ((it - fer.begin()) % 2) sign = -sign;
        fer.erase(it);
        return true;
    }
    auto it = std::lower_bound(fer.begin(), fer.end(), gen);
    if (it != fer.end() && *it == gen) return false;
    if ((it - fer.begin()) % 2) sign = -sign;
    fer.insert(it, gen);
    return true;
}

TensorState clifford_act(const Polarization& pol, const FermionSym& gen, const TensorState& s) {
    TensorState out;
    for (const auto& [m, c] : s) {
        TensorMono t = m;
        int sign = 1;
        if (clifford_apply(pol, gen, t.fer, sign)) add_term(out, t, sign > 0 ? c : Rat(-c));
    }
    return out;
}

OrderedWord normal_order(const Polarization& pol, std::vector<FermionSym> letters) {
    OrderedWord w;
    std::size_t swaps = 0, annihilators_seen = 0;
    for (const auto& l : letters) {
        if (pol.annihilates(l))
            ++annihilators_seen;
        else
            swaps += annihilators_seen;
    }
    std::stable_partition(letters.begin(), letters.end(), [&](const FermionSym& l) { return !pol.annihilates(l); });
    w.sign = swaps % 2 ? -1 : 1;
    w.letters = std::move(letters);
    return w;
}

bool apply_word(const Polarization& pol, const std::vector<FermionSym>& letters, std::vector<FermionSym>& fer,
                int& sign) {
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        if (!clifford_apply(pol, *it, fer, sign)) return false;
    return true;
}

bool apply_normal_ordered(const Polarization& pol, const std::vector<FermionSym>& letters,
                          std::vector<FermionSym>& fer, int& sign) {
    auto w = normal_order(pol, letters);
    sign *= w.sign;
    return apply_word(pol, w.letters, fer, sign);
}

LazyOperator iota_op(const Polarization& pol, const LoopElement& x) {
    return LazyOperator(
        [pol, x](const TensorMono& m, const Rat& c, TensorState& out) {
            for (std::uint32_t i = 0; i < x.coeffs.size(); ++i) {
                if (x.coeffs[i] == 0) continue;
                TensorMono t = m;
                int sign = 1;
                if (clifford_apply(pol, {x.mode, Family::Iota, i}, t.fer, sign))
                    add_term(out, t, sign > 0 ? Rat(c * x.coeffs[i]) : Rat(-c * x.coeffs[i]));
            }
        },
        -1, "ι");
}

LazyOperator eps_op(const Polarization& pol, const RatVec& coeffs, int mode) {
    return LazyOperator(
        [pol, coeffs, mode](const TensorMono& m, const Rat& c, TensorState& out) {
            for (std::uint32_t i = 0; i < coeffs.size(); ++i) {
                if (coeffs[i] == 0) continue;
                TensorMono t = m;
                int sign = 1;
                if (clifford_apply(pol, {mode, Family::Eps, i}, t.fer, sign))
                    add_term(out, t, sign > 0 ? Rat(c * coeffs[i]) : Rat(-c * coeffs[i]));
            }
        },
        1, "ε");
}

FermionSupport fermion_support(const std::vector<FermionSym>& fer) {
    FermionSupport s;
    for (const auto& f : fer) {
        if (f.family == Family::Iota)
            s.iota_modes.push_back(f.mode);
        else
            s.eps_dual_modes.push_back(-f.mode - 1);
    }
    for (auto* v : {&s.iota_modes, &s.eps_dual_modes}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    return s;
}

namespace {
std::vector<int> merge_range(std::vector<int> modes, int lo, int hi) {
    for (int n = lo; n <= hi; ++n) modes.push_back(n);
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    return modes;
}
}  // namespace

// ε(u*_{i,-n-1}) is an annihilator exactly when n < T_ι, and then needs ι(u_{i,n}) present.
// Otherwise ι(u_{k,n+p}) is either a creation (n + p < T_ι) or must meet its partner in fer.
std::vector<int> rho_window(const Polarization& pol, int p, const std::vector<FermionSym>& fer, int widen) {
    const auto sup = fermion_support(fer);
    const int t = pol.iota_from;
    int hi = t - p - 1;
    if (!sup.eps_dual_modes.empty()) hi = std::max(hi, sup.eps_dual_modes.back() - p);
    return merge_range(sup.iota_modes, t, hi + widen);
}

LazyOperator rho(std::shared_ptr<const LoopAlgebra> loop, const Polarization& pol, const OneForm& beta,
                 const LoopElement& x, int widen) {
    struct Term {
        std::uint32_t i, k;
        Rat c;
    };
    std::vector<Term> terms;
    for (const auto& sc : loop->constants())
        if (x.coeffs.at(sc.i) != 0) terms.push_back({static_cast<std::uint32_t>(sc.j), static_cast<std::uint32_t>(sc.k), x.coeffs[sc.i] * sc.c});
    const Rat shift = beta(x);
    const int p = x.mode;
    return LazyOperator(
        [terms = std::move(terms), shift, pol, p, widen](const TensorMono& m, const Rat& c, TensorState& out) {
            if (!terms.empty()) {
                for (int n : rho_window(pol, p, m.fer, widen))
                    for (const auto& t : terms) {
                        TensorMono r = m;
                        int sign = 1;
                        if (apply_normal_ordered(pol, {{n + p, Family::Iota, t.k}, {-n - 1, Family::Eps, t.i}}, r.fer,
                                                 sign))
                            add_term(out, r, sign > 0 ? Rat(c * t.c) : Rat(-c * t.c));
                    }
            }
            if (shift != 0) add_term(out, m, c * shift);
        },
        0, "ρ");
}

TensorState gamma_defect(std::shared_ptr<const LoopAlgebra> loop, const Polarization& pol, const OneForm& beta,
                         const LoopElement& x, const LoopElement& y, const Rat& value, const TensorMono& s) {
    auto rx = rho(loop, pol, beta, x), ry = rho(loop, pol, beta, y);
    auto rxy = rho(loop, pol, beta, loop->bracket(x, y));
    TensorState out = rx.apply(ry.apply(s));
    add_scaled(out, ry.apply(rx.apply(s)), Rat(-1));
    add_scaled(out, rxy.apply(s), Rat(-1));
    add_term(out, s, -value);
    return out;
}

Rat gamma(std::shared_ptr<const LoopAlgebra> loop, const Polarization& pol, const OneForm& beta,
          const LoopElement& x, const LoopElement& y, int widen) {
    auto rx = rho(loop, pol, beta, x, widen), ry = rho(loop, pol, beta, y, widen);
    auto rxy = rho(loop, pol, beta, loop->bracket(x, y), widen);
    const TensorMono vac;
    TensorState out = rx.apply(ry.apply(vac));
    add_scaled(out, ry.apply(rx.apply(vac)), Rat(-1));
    add_scaled(out, rxy.apply(vac), Rat(-1));
    Rat value = 0;
    if (auto it = out.find(vac); it != out.end()) {
        value = it->second;
        out.erase(it);
    }
    if (!out.empty())
        throw InvariantViolation("anomaly is not a scalar at the vacuum: " + render(out, {}));
    return value;
}

std::vector<RatVec> gamma_radical(const LoopAlgebra& loop, const OneForm& beta) {
    const std::size_t r = loop.rank();
    auto modes = beta.support_modes();
    if (modes.empty()) {
        std::vector<RatVec> all;
        for (std::size_t i = 0; i < r; ++i) all.push_back(unit_vec(r, i));
        return all;
    }
    if (modes.size() > 1) throw InputError("radical computation needs a one-form supported at a single mode");
    SparseMat form(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Rat v = beta(LoopElement{modes.front(), loop.structure(i, j)});
            if (v != 0) form.set(i, j, v);
        }
    return kernel_basis(form);
}

std::vector<RatVec> complement_choice(const LoopAlgebra& loop, const std::vector<RatVec>& radical) {
    const std::size_t r = loop.rank();
    std::vector<RatVec> span = radical, chosen;
    std::size_t current = span_rank(span, r);
    for (std::size_t i = 0; i < r; ++i) {
        span.push_back(unit_vec(r, i));
        auto k = span_rank(span, r);
        if (k > current) {
            chosen.push_back(unit_vec(r, i));
            current = k;
        } else {
            span.pop_back();
        }
    }
    return chosen;
}

// ---------------------------------------------------------------------------

BosonSector::BosonSector(std::shared_ptr<const LoopAlgebra> loop, OneForm beta, std::vector<RatVec> complement,
                         std::vector<RatVec> radical)
    : loop_(std::move(loop)), beta_(std::move(beta)), basis_(std::move(complement)), radical_(std::move(radical)) {
    const std::size_t r = loop_->rank();
    std::vector<RatVec> cols = basis_;
    cols.insert(cols.end(), radical_.begin(), radical_.end());
    if (cols.size() != r || span_rank(cols, r) != r)
        throw InputError("complement and radical do not form a basis of the loop subalgebra");
    SparseMat m = SparseMat::from_columns(cols, r);
    proj_.assign(basis_.size(), RatVec(r, Rat(0)));
    for (std::size_t i = 0; i < r; ++i) {
        auto x = solve_linear(m, unit_vec(r, i));
        for (std::size_t c = 0; c < basis_.size(); ++c) proj_[c][i] = (*x)[c];
    }
    support_ = beta_.support_modes();
}

RatVec BosonSector::project(const RatVec& x) const {
    RatVec out(basis_.size(), Rat(0));
    for (std::size_t c = 0; c < basis_.size(); ++c)
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0 && proj_[c][i] != 0) out[c] += proj_[c][i] * x[i];
    return out;
}

Rat BosonSector::bracket(std::uint32_t c, int n, std::uint32_t d, int m) const {
    return beta_(LoopElement{n + m, loop_->bracket_coords(basis_[c], basis_[d])});
}

int BosonSector::annihilator_bound(const std::vector<BosonSym>& bos) const {
    if (bos.empty() || support_.empty()) return std::numeric_limits<int>::min() / 4;
    return support_.back() - bos.front().mode;
}

void BosonSector::act_basis(const Polarization& pol, std::uint32_t c, int mode, const TensorMono& mono,
                            const Rat& coeff, TensorState& out) const {
    const BosonSym b{mode, c};
    const auto& bos = mono.bos;
    std::size_t contract_upto = bos.size();
    if (!pol.boson_annihilates(mode)) {
        auto pos = std::lower_bound(bos.begin(), bos.end(), b) - bos.begin();
        TensorMono t = mono;
        t.bos.insert(t.bos.begin() + pos, b);
        add_term(out, t, coeff);
        contract_upto = static_cast<std::size_t>(pos);
    }
    for (std::size_t j = 0; j < contract_upto; ++j) {
        if (j > 0 && bos[j] == bos[j - 1]) {
            // Identical factors give identical terms; handled by the multiplicity below.
            continue;
        }
        std::size_t mult = 1;
        while (j + mult < contract_upto && bos[j + mult] == bos[j]) ++mult;
        Rat br = bracket(c, mode, bos[j].idx, bos[j].mode);
        if (br == 0) continue;
        TensorMono t = mono;
        t.bos.erase(t.bos.begin() + static_cast<std::ptrdiff_t>(j));
        add_term(out, t, coeff * br * Rat(static_cast<long>(mult)));
    }
}

void BosonSector::act(const Polarization& pol, const LoopElement& x, const TensorMono& mono, const Rat& coeff,
                      TensorState& out) const {
    auto f = project(x.coeffs);
    for (std::uint32_t c = 0; c < f.size(); ++c)
        if (f[c] != 0) act_basis(pol, c, x.mode, mono, coeff * f[c], out);
}

TensorState heisenberg_act(const Polarization& pol, const BosonSector& sector, const LoopElement& x,
                           const TensorState& s) {
    TensorState out;
    for (const auto& [m, c] : s) sector.act(pol, x, m, c, out);
    return out;
}

LazyOperator boson_op(const Polarization& pol, std::shared_ptr<const BosonSector> sector, const LoopElement& x) {
    return LazyOperator([pol, sector, x](const TensorMono& m, const Rat& c, TensorState& out) { sector->act(pol, x, m, c, out); },
                        0, "ϵ");
}

int energy(const TensorMono& m) {
    int e = current_energy(m.cur);
    for (const auto& f : m.fer) e += f.family == Family::Iota ? -f.mode : -f.mode - 1;
    for (const auto& b : m.bos) e -= b.mode;
    return e;
}

int scaled_weight(const TensorMono& m, const WeightData& w) {
    int s = 0;
    for (const auto& c : m.cur) s += -w.a * c.mode + w.current_degrees.at(c.idx);
    for (const auto& f : m.fer) {
        const int d = w.loop_degrees.at(f.idx);
        if (f.family == Family::Iota)
            s += -w.a * f.mode + d;
        else
            s += w.a * (-f.mode - 1) - d;
    }
    for (const auto& b : m.bos) s += -w.a * b.mode + w.boson_degrees.at(b.idx);
    return s;
}

}  // namespace brstkit
