#include "brstkit/brst.hpp"

#include "brstkit/errors.hpp"
#include "brstkit/parallel.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace brstkit {

namespace {

std::vector<int> merge_range(std::vector<int> modes, int lo, int hi) {
    for (int n = lo; n <= hi; ++n) modes.push_back(n);
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    return modes;
}

// Applies ε(sum_i dual[i] u*_{i,mode}) to m, calling emit(monomial, signed coefficient).
template <class Emit>
void eps_expand(const Polarization& pol, const RatVec& dual, int mode, const TensorMono& m, const Rat& c, Emit&& emit) {
    for (std::uint32_t i = 0; i < dual.size(); ++i) {
        if (dual[i] == 0) continue;
        TensorMono t = m;
        int sign = 1;
        if (clifford_apply(pol, {mode, Family::Eps, i}, t.fer, sign)) emit(t, sign > 0 ? Rat(c * dual[i]) : Rat(-c * dual[i]));
    }
}

struct PairTerm {
    std::uint32_t k, i, j;
    Rat c;
};
struct PairGroup {
    std::size_t a, b;
    std::vector<PairTerm> terms;
};

std::vector<PairGroup> pair_groups(const LoopAlgebra& loop, const Frame& f) {
    std::vector<PairGroup> out;
    const std::size_t r = loop.rank();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            if (a == b) continue;
            auto br = loop.bracket_coords(f.e[a], f.e[b]);
            if (is_zero_vec(br)) continue;
            PairGroup g{a, b, {}};
            for (std::uint32_t k = 0; k < r; ++k) {
                if (br[k] == 0) continue;
                for (std::uint32_t i = 0; i < r; ++i) {
                    if (f.dual[a][i] == 0) continue;
                    for (std::uint32_t j = 0; j < r; ++j)
                        if (f.dual[b][j] != 0) g.terms.push_back({k, i, j, br[k] * f.dual[a][i] * f.dual[b][j]});
                }
            }
            out.push_back(std::move(g));
        }
    return out;
}

Witness make_witness(const std::string& probe, const TensorMono& s, const TensorState& residual,
                     const StateLabels& labels) {
    return {probe, render(s, labels), render(residual, labels)};
}

void record(SweepReport& r, std::mutex& mu, Witness w) {
    std::lock_guard lock(mu);
    if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back(std::move(w));
}

std::string mode_label(const LoopElement& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        if (i) s += ",";
        s += format_rat(x.coeffs[i]);
    }
    return s + ")⊗t^" + std::to_string(x.mode);
}

// Sweep over (probe p, state s) pairs; check returns the residual that must vanish.
template <class Probe, class Check>
SweepReport sweep(std::string suite, const std::vector<Probe>& probes, const std::vector<TensorMono>& states,
                  const StateLabels& labels, Check&& check, std::function<std::string(const Probe&)> name) {
    SweepReport r;
    r.suite = std::move(suite);
    std::mutex mu;
    const std::size_t ns = states.size();
    std::vector<std::vector<Witness>> found(probes.size() * ns);
    for_each_index(probes.size() * ns, [&](std::size_t idx) {
        const auto& p = probes[idx / ns];
        const auto& s = states[idx % ns];
        TensorState res = check(p, s);
        if (!res.empty()) found[idx].push_back(make_witness(name(p), s, res, labels));
    });
    r.checked = probes.size() * ns;
    for (auto& f : found)
        for (auto& w : f) record(r, mu, std::move(w));
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------

VacuumAction::VacuumAction(std::shared_ptr<const VacuumModule> vac, std::shared_ptr<const LoopAlgebra> loop)
    : vac_(std::move(vac)), loop_(std::move(loop)) {
    if (&vac_->algebra() != &loop_->base_algebra() && vac_->algebra().dim() != loop_->base_algebra().dim())
        throw InputError("vacuum module and loop algebra live in different algebras");
}

void VacuumAction::act(const LoopElement& x, const TensorMono& m, const Rat& coeff, TensorState& out) const {
    if (x.mode > current_energy(m.cur)) return;
    for (const auto& [cur, c] : vac_->act_mono(loop_->to_g(x.coeffs), x.mode, m.cur)) {
        TensorMono t{cur, m.fer, m.bos};
        add_term(out, t, coeff * c);
    }
}

TwistedAction::TwistedAction(std::shared_ptr<const VacuumAction> base, OneForm beta_prime,
                             std::shared_ptr<const BosonSector> sector, Polarization pol)
    : base_(std::move(base)), beta_prime_(std::move(beta_prime)), sector_(std::move(sector)), pol_(std::move(pol)) {
    support_ = beta_prime_.support_modes();
}

void TwistedAction::act(const LoopElement& x, const TensorMono& m, const Rat& coeff, TensorState& out) const {
    base_->act(x, m, coeff, out);
    Rat b = beta_prime_(x);
    if (b != 0) add_term(out, m, coeff * b);
    sector_->act(pol_, x, m, coeff, out);
}

int TwistedAction::smooth_bound(const TensorMono& m) const {
    int b = std::max(base_->smooth_bound(m), pol_.boson_from - 1);
    if (!support_.empty()) b = std::max(b, support_.back());
    return std::max(b, sector_->annihilator_bound(m.bos));
}

LazyOperator coefficient_op(std::shared_ptr<const CoefficientAction> a, const LoopElement& x) {
    return LazyOperator([a, x](const TensorMono& m, const Rat& c, TensorState& out) { a->act(x, m, c, out); }, 0,
                        a->name());
}

// ---------------------------------------------------------------------------

Frame standard_frame(std::size_t rank) {
    Frame f;
    for (std::size_t i = 0; i < rank; ++i) {
        f.e.push_back(unit_vec(rank, i));
        f.dual.push_back(unit_vec(rank, i));
    }
    return f;
}

Frame frame_from_transform(const RatMatrix& t, const std::optional<std::vector<int>>& degrees) {
    const std::size_t r = t.size();
    for (const auto& row : t)
        if (row.size() != r) throw InputError("transform must be square");
    SparseMat m = SparseMat::from_dense(t);
    if (rank(m) != r) throw InputError("transform is singular");
    if (degrees) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t a = 0; a < r; ++a)
                if (t[i][a] != 0 && (*degrees)[i] != (*degrees)[a])
                    throw InputError("transform mixes basis vectors of different degree");
    }
    Frame f;
    RatMatrix inv(r, RatVec(r, Rat(0)));
    for (std::size_t i = 0; i < r; ++i) {
        auto col = solve_linear(m, unit_vec(r, i));
        for (std::size_t a = 0; a < r; ++a) inv[a][i] = (*col)[a];
    }
    for (std::size_t a = 0; a < r; ++a) {
        RatVec e(r);
        for (std::size_t i = 0; i < r; ++i) e[i] = t[i][a];
        f.e.push_back(std::move(e));
        f.dual.push_back(inv[a]);
    }
    return f;
}

LazyOperator theta(const BrstSetup& s, const LoopElement& x, int widen) {
    return sum(coefficient_op(s.coeff, x), rho(s.loop, s.pol, s.beta, x, widen));
}

LazyOperator theta_bar(const BrstSetup& s, const LoopElement& x, int widen) {
    if (!s.bosons) throw InputError("θ̄ needs a boson sector");
    return sum(theta(s, x, widen), boson_op(s.pol, s.bosons, x));
}

LazyOperator d_ordinary(const BrstSetup& s, const DiffOptions& opt) {
    const auto& loop = *s.loop;
    const std::size_t r = loop.rank();
    Frame f = opt.frame ? *opt.frame : standard_frame(r);
    auto groups = pair_groups(loop, f);

    struct BetaTerm {
        std::size_t a;
        int mode;
        Rat value;
    };
    std::vector<BetaTerm> beta_terms;
    for (int n : s.beta.support_modes())
        for (std::size_t a = 0; a < r; ++a) {
            Rat v = s.beta(LoopElement{n, f.e[a]});
            if (v != 0) beta_terms.push_back({a, n, v});
        }

    const Polarization pol = s.pol;
    const auto coeff = s.coeff;
    const int widen = opt.widen;
    const bool ordered = opt.ordered_pairs;
    const Rat pair_scale = ordered ? Rat(-1) : Rat(-1, 2);

    auto rule = [=](const TensorMono& m, const Rat& c, TensorState& out) {
        const auto sup = fermion_support(m.fer);
        const int t = pol.iota_from;

        // sum_i e_i ε(e_i*): ε annihilates unless n ≥ T_ι, where x_n must act nonzero on M.
        for (int n : merge_range(sup.iota_modes, t, coeff->smooth_bound(m) + widen))
            for (std::size_t a = 0; a < r; ++a) {
                const LoopElement x{n, f.e[a]};
                eps_expand(pol, f.dual[a], -n - 1, m, c, [&](const TensorMono& t2, const Rat& c2) { coeff->act(x, t2, c2, out); });
            }

        // Pair sum. A mode n with ε(u*_{-n-1}) a creation contributes only through ι(u_{n+m}),
        // which is a creation (n + m < T_ι) or meets its partner (n + m ∈ N_ε); with m ≥ mlo
        // this bounds n.
        if (!groups.empty()) {
            int mlo = t;
            if (!sup.iota_modes.empty()) mlo = std::min(mlo, sup.iota_modes.front());
            int hi = t - 1 - mlo;
            if (!sup.eps_dual_modes.empty()) hi = std::max(hi, sup.eps_dual_modes.back() - mlo);
            const auto modes = merge_range(sup.iota_modes, t, hi + widen);
            for (int n : modes)
                for (int mm : modes)
                    for (const auto& g : groups) {
                        if (ordered && std::make_pair(n, g.a) >= std::make_pair(mm, g.b)) continue;
                        for (const auto& term : g.terms) {
                            TensorMono t2 = m;
                            int sign = 1;
                            if (apply_normal_ordered(pol,
                                                     {{n + mm, Family::Iota, term.k},
                                                      {-n - 1, Family::Eps, term.i},
                                                      {-mm - 1, Family::Eps, term.j}},
                                                     t2.fer, sign)) {
                                Rat v = c * pair_scale * term.c;
                                add_term(out, t2, sign > 0 ? v : Rat(-v));
                            }
                        }
                    }
        }

        // ε(β)
        for (const auto& bt : beta_terms)
            eps_expand(pol, f.dual[bt.a], -bt.mode - 1, m, c * bt.value,
                       [&](const TensorMono& t2, const Rat& c2) { add_term(out, t2, c2); });
    };
    return LazyOperator(rule, 1, "d");
}

LazyOperator adjustment_term(const BrstSetup& s, const DiffOptions& opt) {
    if (!s.bosons) throw InputError("the adjusted differential needs a boson sector");
    const std::size_t r = s.loop->rank();
    Frame f = opt.frame ? *opt.frame : standard_frame(r);
    std::vector<RatVec> projected;
    for (const auto& e : f.e) projected.push_back(s.bosons->project(e));
    const Polarization pol = s.pol;
    const auto sector = s.bosons;
    const int widen = opt.widen;
    auto rule = [=](const TensorMono& m, const Rat& c, TensorState& out) {
        const auto sup = fermion_support(m.fer);
        // ε creation needs ϵ(x_n) nonzero: a creation (n < T_b) or an annihilator meeting a boson.
        const int hi = std::max(pol.boson_from - 1, sector->annihilator_bound(m.bos));
        for (int n : merge_range(sup.iota_modes, pol.iota_from, hi + widen))
            for (std::size_t a = 0; a < r; ++a) {
                if (is_zero_vec(projected[a])) continue;
                eps_expand(pol, f.dual[a], -n - 1, m, c, [&](const TensorMono& t2, const Rat& c2) {
                    for (std::uint32_t k = 0; k < projected[a].size(); ++k)
                        if (projected[a][k] != 0) sector->act_basis(pol, k, n, t2, c2 * projected[a][k], out);
                });
            }
    };
    return LazyOperator(rule, 1, "Σε(e*)ϵ(e)");
}

std::optional<std::string> bracket_outside_radical(const LoopAlgebra& loop, const std::vector<RatVec>& radical) {
    const std::size_t r = loop.rank();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            const auto& b = loop.structure(i, j);
            if (!is_zero_vec(b) && !span_contains(radical, b, r))
                return "[" + loop.label(i) + ", " + loop.label(j) + "] is not in the radical of γ";
        }
    return std::nullopt;
}

LazyOperator d_adjusted(const BrstSetup& s, const DiffOptions& opt) {
    if (!s.bosons) throw InputError("the adjusted differential needs a boson sector");
    if (auto bad = bracket_outside_radical(*s.loop, s.bosons->radical()))
        throw PreconditionFailure("[L, L] ⊄ ker γ: " + *bad);
    auto d = sum(d_ordinary(s, opt), adjustment_term(s, opt));
    return LazyOperator([d](const TensorMono& m, const Rat& c, TensorState& out) { d.apply_into(m, c, out); }, 1,
                        "d̄");
}

LazyOperator memoize(const LazyOperator& op) {
    struct Cache {
        std::mutex mu;
        std::map<TensorMono, TensorState> images;
    };
    auto cache = std::make_shared<Cache>();
    return LazyOperator(
        [op, cache](const TensorMono& m, const Rat& c, TensorState& out) {
            const TensorState* img = nullptr;
            {
                std::lock_guard lock(cache->mu);
                auto it = cache->images.find(m);
                if (it != cache->images.end()) img = &it->second;
            }
            if (!img) {
                TensorState computed = op.apply(m);
                std::lock_guard lock(cache->mu);
                img = &cache->images.emplace(m, std::move(computed)).first->second;
            }
            add_scaled(out, *img, c);
        },
        op.charge_shift(), op.description());
}

// ---------------------------------------------------------------------------

SweepReport verify_square_zero(const LazyOperator& d, const std::vector<TensorMono>& states,
                               const StateLabels& labels) {
    std::vector<int> one{0};
    return sweep<int>(
        "square-zero", one, states, labels, [&](int, const TensorMono& s) { return d.apply(d.apply(s)); },
        [&](const int&) { return d.description() + "²"; });
}

SweepReport verify_charge(const LazyOperator& op, const std::vector<TensorMono>& states, const StateLabels& labels) {
    std::vector<int> one{0};
    return sweep<int>(
        "charge", one, states, labels,
        [&](int, const TensorMono& s) {
            TensorState bad;
            for (const auto& [m, c] : op.apply(s))
                if (charge_degree(m) != charge_degree(s) + op.charge_shift()) add_term(bad, m, c);
            return bad;
        },
        [&](const int&) { return op.description(); });
}

SweepReport verify_commutator(const LazyOperator& d, const BrstSetup& setup, bool adjusted,
                              const std::vector<LoopElement>& xs, const std::vector<TensorMono>& states,
                              const StateLabels& labels) {
    std::vector<std::pair<LazyOperator, LazyOperator>> ops;
    for (const auto& x : xs)
        ops.emplace_back(supercommutator(d, iota_op(setup.pol, x)), adjusted ? theta_bar(setup, x) : theta(setup, x));
    std::vector<std::size_t> idx(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return sweep<std::size_t>(
        "commutator", idx, states, labels,
        [&](std::size_t i, const TensorMono& s) { return difference(ops[i].first.apply(s), ops[i].second.apply(s)); },
        [&](const std::size_t& i) { return "[d, ι(" + mode_label(xs[i]) + ")]"; });
}

SweepReport verify_homomorphism(const BrstSetup& setup, bool adjusted,
                                const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                                const std::vector<TensorMono>& states, const StateLabels& labels) {
    auto th = [&](const LoopElement& x) { return adjusted ? theta_bar(setup, x) : theta(setup, x); };
    std::vector<std::pair<LazyOperator, LazyOperator>> ops;
    for (const auto& [x, y] : pairs) ops.emplace_back(supercommutator(th(x), th(y)), th(setup.loop->bracket(x, y)));
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return sweep<std::size_t>(
        "homomorphism", idx, states, labels,
        [&](std::size_t i, const TensorMono& s) { return difference(ops[i].first.apply(s), ops[i].second.apply(s)); },
        [&](const std::size_t& i) { return "[θ(" + mode_label(pairs[i].first) + "), θ(" + mode_label(pairs[i].second) + ")]"; });
}

SweepReport verify_rhobar(const BrstSetup& setup, const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                          const std::vector<TensorMono>& states, const StateLabels& labels) {
    AnomalyForm gamma_form{setup.loop, setup.beta};
    std::vector<std::pair<LazyOperator, Rat>> ops;
    for (const auto& [x, y] : pairs)
        ops.emplace_back(supercommutator(theta_bar(setup, x), boson_op(setup.pol, setup.bosons, y)), -gamma_form(x, y));
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return sweep<std::size_t>(
        "rhobar", idx, states, labels,
        [&](std::size_t i, const TensorMono& s) {
            TensorState res = ops[i].first.apply(s);
            add_term(res, s, -ops[i].second);
            return res;
        },
        [&](const std::size_t& i) { return "[θ̄(" + mode_label(pairs[i].first) + "), ϵ(" + mode_label(pairs[i].second) + ")]"; });
}

namespace {
LazyOperator build_d(const BrstSetup& setup, bool adjusted, const DiffOptions& opt) {
    return adjusted ? d_adjusted(setup, opt) : d_ordinary(setup, opt);
}

SweepReport compare(std::string suite, const LazyOperator& a, const LazyOperator& b,
                    const std::vector<TensorMono>& states, const StateLabels& labels, const std::string& probe) {
    std::vector<int> one{0};
    return sweep<int>(
        std::move(suite), one, states, labels,
        [&](int, const TensorMono& s) { return difference(a.apply(s), b.apply(s)); },
        [&](const int&) { return probe; });
}
}  // namespace

SweepReport verify_basis_independence(const BrstSetup& setup, bool adjusted, const RatMatrix& transform,
                                      const std::vector<TensorMono>& states, const StateLabels& labels) {
    DiffOptions other;
    other.frame = frame_from_transform(transform, std::nullopt);
    return compare("basis-independence", build_d(setup, adjusted, {}), build_d(setup, adjusted, other), states, labels,
                   "frame change");
}

SweepReport verify_pair_forms(const BrstSetup& setup, bool adjusted, const std::vector<TensorMono>& states,
                              const StateLabels& labels) {
    DiffOptions ordered;
    ordered.ordered_pairs = true;
    return compare("pair-forms", build_d(setup, adjusted, {}), build_d(setup, adjusted, ordered), states, labels,
                   "symmetrized vs i<j");
}

SweepReport verify_window_stability(const BrstSetup& setup, bool adjusted, int max_widen,
                                    const std::vector<TensorMono>& states, const StateLabels& labels) {
    SweepReport total;
    total.suite = "window-stability";
    auto base = build_d(setup, adjusted, {});
    for (int w = 1; w <= max_widen; ++w) {
        DiffOptions wide;
        wide.widen = w;
        auto r = compare("window-stability", base, build_d(setup, adjusted, wide), states, labels,
                         "widen +" + std::to_string(w));
        total.checked += r.checked;
        for (auto& x : r.witnesses)
            if (total.witnesses.size() < kMaxWitnesses) total.witnesses.push_back(std::move(x));
    }
    return total;
}

SweepReport verify_whynotzero(const LazyOperator& d, const BrstSetup& setup,
                              const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                              const std::vector<TensorMono>& states, const StateLabels& labels) {
    AnomalyForm gamma_form{setup.loop, setup.beta};
    auto d2 = compose(d, d);
    std::vector<std::pair<LazyOperator, Rat>> ops;
    for (const auto& [x, y] : pairs)
        ops.emplace_back(supercommutator(supercommutator(d2, iota_op(setup.pol, x)), iota_op(setup.pol, y)),
                         -gamma_form(x, y));
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return sweep<std::size_t>(
        "whynotzero", idx, states, labels,
        [&](std::size_t i, const TensorMono& s) {
            TensorState res = ops[i].first.apply(s);
            add_term(res, s, -ops[i].second);
            return res;
        },
        [&](const std::size_t& i) { return "[[d², ι(" + mode_label(pairs[i].first) + ")], ι(" + mode_label(pairs[i].second) + ")]"; });
}

UniquenessReport verify_uniqueness(const LazyOperator& dbar, const LazyOperator& perturbation, const BrstSetup& setup,
                                   const std::vector<LoopElement>& xs, const std::vector<TensorMono>& states) {
    if (perturbation.charge_shift() < 1) throw InputError("perturbation must have charge shift at least 1");
    UniquenessReport r;
    r.hypothesis_holds = true;
    for (const auto& x : xs) {
        auto io = iota_op(setup.pol, x);
        auto lhs_d = supercommutator(dbar, io);
        auto lhs_p = supercommutator(perturbation, io);
        auto target = theta_bar(setup, x);
        for (const auto& s : states) {
            ++r.checked;
            TensorState res = lhs_d.apply(s);
            add_scaled(res, lhs_p.apply(s), Rat(1));
            add_scaled(res, target.apply(s), Rat(-1));
            if (!res.empty() && r.hypothesis_holds) {
                r.hypothesis_holds = false;
                r.detail = "hypothesis fails at ι(" + mode_label(x) + ")";
            }
        }
    }
    r.perturbation_vanishes = true;
    for (const auto& s : states)
        if (!perturbation.apply(s).empty()) {
            r.perturbation_vanishes = false;
            if (r.detail.empty()) r.detail = "perturbation acts nonzero";
            break;
        }
    return r;
}

std::optional<std::string> twisted_precondition(const LoopAlgebra& loop, const OneForm& beta_prime) {
    const std::size_t r = loop.rank();
    const auto modes = beta_prime.support_modes();
    bool nonzero = false;
    for (int s : modes)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                if (beta_prime(LoopElement{s, loop.structure(i, j)}) != 0) nonzero = true;
                for (std::size_t k = 0; k < r; ++k) {
                    auto inner = loop.bracket_coords(loop.structure(i, j), unit_vec(r, k));
                    if (beta_prime(LoopElement{s, inner}) != 0)
                        return "β'([[" + loop.label(i) + ", " + loop.label(j) + "], " + loop.label(k) + "]) ≠ 0";
                }
            }
    if (!nonzero) return std::string("∂β' vanishes identically");
    return std::nullopt;
}

SweepReport verify_twisted_action(const TwistedAction& twisted, const VacuumAction& plain, const LoopAlgebra& loop,
                                  const OneForm& beta_prime,
                                  const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                                  const std::vector<TensorMono>& states, const StateLabels& labels) {
    if (auto bad = twisted_precondition(loop, beta_prime)) throw PreconditionFailure(*bad);
    auto tw = std::shared_ptr<const CoefficientAction>(&twisted, [](const CoefficientAction*) {});
    auto pl = std::shared_ptr<const CoefficientAction>(&plain, [](const CoefficientAction*) {});
    std::vector<std::pair<LazyOperator, LazyOperator>> ops;
    for (const auto& [x, y] : pairs) {
        auto xy = loop.bracket(x, y);
        const Rat shift = beta_prime(xy);
        auto rhs = LazyOperator(
            [pl, xy, shift](const TensorMono& m, const Rat& c, TensorState& out) {
                pl->act(xy, m, c, out);
                if (shift != 0) add_term(out, m, c * shift);
            },
            0, "[x,y] + β'([x,y])");
        ops.emplace_back(supercommutator(coefficient_op(tw, x), coefficient_op(tw, y)), rhs);
    }
    std::vector<std::size_t> idx(pairs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return sweep<std::size_t>(
        "twisted-action", idx, states, labels,
        [&](std::size_t i, const TensorMono& s) { return difference(ops[i].first.apply(s), ops[i].second.apply(s)); },
        [&](const std::size_t& i) { return "[T(" + mode_label(pairs[i].first) + "), T(" + mode_label(pairs[i].second) + ")]"; });
}

}  // namespace brstkit
