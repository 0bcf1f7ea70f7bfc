#include "brstkit/cohomod.hpp"

#include "brstkit/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace brstkit {

namespace {

enum class SymKind { Current, Iota, Eps, Boson };
struct Sym {
    SymKind kind;
    int mode;
    std::uint32_t idx;
    int energy;
};

void enumerate_rec(const std::vector<Sym>& syms, std::size_t k, int energy_left, int bosons_left, TensorMono& cur,
                   std::vector<TensorMono>& out) {
    if (k == syms.size()) {
        out.push_back(cur);
        return;
    }
    const Sym& s = syms[k];
    enumerate_rec(syms, k + 1, energy_left, bosons_left, cur, out);
    const bool repeat = s.kind == SymKind::Current || s.kind == SymKind::Boson;
    int used = 0;
    int e = energy_left;
    int b = bosons_left;
    while (true) {
        if (s.energy > e) break;
        if (s.kind == SymKind::Boson && b == 0) break;
        e -= s.energy;
        if (s.kind == SymKind::Boson) --b;
        ++used;
        switch (s.kind) {
            case SymKind::Current: cur.cur.push_back({s.mode, s.idx}); break;
            case SymKind::Iota: cur.fer.push_back({s.mode, Family::Iota, s.idx}); break;
            case SymKind::Eps: cur.fer.push_back({s.mode, Family::Eps, s.idx}); break;
            case SymKind::Boson: cur.bos.push_back({s.mode, s.idx}); break;
        }
        enumerate_rec(syms, k + 1, e, b, cur, out);
        if (!repeat) break;
        if (s.energy == 0 && s.kind != SymKind::Boson) break;
    }
    for (int i = 0; i < used; ++i) {
        switch (s.kind) {
            case SymKind::Current: cur.cur.pop_back(); break;
            case SymKind::Iota:
            case SymKind::Eps: cur.fer.pop_back(); break;
            case SymKind::Boson: cur.bos.pop_back(); break;
        }
    }
}

}  // namespace

std::vector<TensorMono> enumerate_monomials(const MonomialSpace& space, int max_energy, int max_bosons) {
    const auto& pol = space.pol;
    if (pol.iota_from < 0 || pol.iota_from > 1 || pol.boson_from > 1)
        throw InputError("energy enumeration needs 0 <= iota_from <= 1 and boson_from <= 1");
    std::vector<Sym> syms;
    // Ascending (mode, idx) within each kind keeps every list sorted as it is built.
    for (int m = -max_energy; m <= -1; ++m)
        for (std::uint32_t i = 0; i < space.current_dim; ++i) syms.push_back({SymKind::Current, m, i, -m});
    // Fermions in the canonical (mode, family, idx) order.
    std::vector<FermionSym> fer;
    for (int n = -max_energy; n < pol.iota_from; ++n)
        for (std::uint32_t i = 0; i < space.loop_rank; ++i) fer.push_back({n, Family::Iota, i});
    for (int m = -max_energy - 1; m < pol.eps_from; ++m)
        for (std::uint32_t i = 0; i < space.loop_rank; ++i) fer.push_back({m, Family::Eps, i});
    std::sort(fer.begin(), fer.end());
    for (const auto& f : fer) {
        const int e = f.family == Family::Iota ? -f.mode : -f.mode - 1;
        if (e <= max_energy) syms.push_back({f.family == Family::Iota ? SymKind::Iota : SymKind::Eps, f.mode, f.idx, e});
    }
    for (int n = -max_energy; n < pol.boson_from; ++n)
        for (std::uint32_t i = 0; i < space.boson_dim; ++i) syms.push_back({SymKind::Boson, n, i, -n});
    std::vector<TensorMono> out;
    TensorMono cur;
    enumerate_rec(syms, 0, max_energy, max_bosons, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

Window grow_window(const LazyOperator& d, const std::vector<TensorMono>& seed, std::size_t budget, Exec exec) {
    Window w;
    w.budget = budget;
    std::set<TensorMono> known;
    for (const auto& m : seed)
        if (known.insert(m).second) w.seed.push_back(m);
    if (budget < w.seed.size()) throw InputError("window budget is smaller than the seed");
    w.basis = w.seed;
    std::vector<TensorState> images;
    std::size_t done = 0;
    while (done < w.basis.size()) {
        std::vector<TensorMono> frontier(w.basis.begin() + static_cast<std::ptrdiff_t>(done), w.basis.end());
        auto imgs = apply_all(d, frontier, exec);
        done = w.basis.size();
        for (auto& img : imgs) {
            for (const auto& [m, c] : img)
                if (known.insert(m).second) {
                    if (w.basis.size() >= budget) {
                        w.closed = false;
                        return w;
                    }
                    w.basis.push_back(m);
                }
            images.push_back(std::move(img));
        }
    }
    w.closed = true;
    w.images = std::move(images);
    return w;
}

namespace {

struct Slices {
    // (charge, sector) -> basis indices
    std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
    std::vector<std::size_t> position;  // index within its slice
};

Slices slice(const std::vector<TensorMono>& basis, const SectorFn& sector) {
    Slices s;
    s.position.resize(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto& g = s.groups[{charge_degree(basis[i]), sector ? sector(basis[i]) : 0}];
        s.position[i] = g.size();
        g.push_back(i);
    }
    return s;
}

std::map<TensorMono, std::size_t> index_of(const std::vector<TensorMono>& basis) {
    std::map<TensorMono, std::size_t> idx;
    for (std::size_t i = 0; i < basis.size(); ++i) idx.emplace(basis[i], i);
    return idx;
}

SparseMat block(const std::vector<TensorState>& images, const Slices& s, const std::map<TensorMono, std::size_t>& idx,
                int charge, int sec) {
    auto src = s.groups.find({charge, sec});
    auto dst = s.groups.find({charge + 1, sec});
    const std::size_t cols = src == s.groups.end() ? 0 : src->second.size();
    const std::size_t rows = dst == s.groups.end() ? 0 : dst->second.size();
    SparseMat m(rows, cols);
    if (cols == 0) return m;
    for (std::size_t c = 0; c < cols; ++c)
        for (const auto& [mono, v] : images[src->second[c]]) {
            auto it = idx.find(mono);
            if (it == idx.end()) throw InputError("image leaves the window; window is not closed");
            m.add(s.position[it->second], c, v);
        }
    return m;
}

}  // namespace

SparseMat assemble_differential(const Window& w, const LazyOperator& d, int charge, const SectorFn& sector,
                                int sector_value) {
    if (!w.closed) throw InputError("cannot assemble a differential on a non-closed window");
    auto s = slice(w.basis, sector);
    auto idx = index_of(w.basis);
    std::vector<TensorState> images(w.basis.size());
    auto src = s.groups.find({charge, sector_value});
    if (src != s.groups.end())
        for (auto i : src->second) images[i] = d.apply(w.basis[i]);
    return block(images, s, idx, charge, sector_value);
}

CohomologyReport cohomology_dims(const Window& w, const SectorFn& sector, Exec exec, const StateLabels& labels) {
    if (!w.closed) throw InputError("cohomology needs a closed window");
    const auto idx = index_of(w.basis);
    const auto sl = slice(w.basis, sector);

    // d² = 0 on the window, from the stored images.
    std::vector<TensorState> squares(w.basis.size());
    for_each_index(
        w.basis.size(),
        [&](std::size_t i) {
            TensorState out;
            for (const auto& [m, c] : w.images[i]) add_scaled(out, w.images[idx.at(m)], c);
            squares[i] = std::move(out);
        },
        exec);
    for (std::size_t i = 0; i < squares.size(); ++i)
        if (!squares[i].empty())
            throw PreconditionFailure("d² ≠ 0 on the window: d²(" + render(w.basis[i], labels) + ") = " +
                                      render(squares[i], labels));
    if (sector)
        for (std::size_t i = 0; i < w.basis.size(); ++i)
            for (const auto& [m, c] : w.images[i])
                if (sector(m) != sector(w.basis[i]))
                    throw InputError("the sector grading is not preserved by d");

    // Blocks d: (c, s) -> (c+1, s) for every slice.
    std::vector<std::pair<int, int>> keys;
    for (const auto& [k, v] : sl.groups) keys.push_back(k);
    std::vector<SparseMat> mats(keys.size());
    std::vector<std::size_t> ranks(keys.size());
    for_each_index(
        keys.size(),
        [&](std::size_t i) {
            mats[i] = block(w.images, sl, idx, keys[i].first, keys[i].second);
            ranks[i] = rank(mats[i]);
        },
        exec);
    std::map<std::pair<int, int>, std::size_t> rank_out;
    std::map<std::pair<int, int>, const SparseMat*> mat_of;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        rank_out[keys[i]] = ranks[i];
        mat_of[keys[i]] = &mats[i];
    }

    CohomologyReport r;
    r.window_size = w.basis.size();
    r.composition_zero = true;
    std::map<int, ChargeEntry> totals;
    for (const auto& key : keys) {
        const auto [c, s] = key;
        ChargeEntry e;
        e.charge = c;
        e.sector = s;
        e.dim_c = sl.groups.at(key).size();
        e.rank_out = rank_out[key];
        auto prev = rank_out.find({c - 1, s});
        e.rank_in = prev == rank_out.end() ? 0 : prev->second;
        e.dim_h = e.dim_c - e.rank_out - e.rank_in;
        if (sector) r.per_sector.push_back(e);
        auto& t = totals[c];
        t.charge = c;
        t.dim_c += e.dim_c;
        t.rank_in += e.rank_in;
        t.rank_out += e.rank_out;
        t.dim_h += e.dim_h;
        auto next = mat_of.find({c + 1, s});
        if (next != mat_of.end() && mat_of[key]->rows() == next->second->cols() &&
            !next->second->multiply(*mat_of[key]).is_zero())
            r.composition_zero = false;
    }
    for (auto& [c, t] : totals) {
        r.per_charge.push_back(t);
        const long sign = (c % 2 == 0) ? 1 : -1;
        r.euler_c += sign * static_cast<long>(t.dim_c);
        r.euler_h += sign * static_cast<long>(t.dim_h);
    }
    return r;
}

bool StabilizationScan::conclusive() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.closed; });
}

StabilizationScan stabilization_scan(const std::function<Window(int)>& builder, const std::vector<int>& cutoffs,
                                     const SectorFn& sector, Exec exec) {
    if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) throw InputError("cutoffs must be ascending");
    StabilizationScan scan;
    for (int cutoff : cutoffs) {
        StabilizationRow row;
        row.cutoff = cutoff;
        Window w = builder(cutoff);
        row.closed = w.closed;
        row.window_size = w.basis.size();
        if (w.closed) row.report = cohomology_dims(w, sector, exec);
        scan.rows.push_back(std::move(row));
    }
    if (scan.rows.size() >= 2 && scan.conclusive()) {
        const auto& last = scan.rows.back().report;
        const auto& prev = scan.rows[scan.rows.size() - 2].report;
        auto flag = [](const std::vector<ChargeEntry>& a, const std::vector<ChargeEntry>& b) {
            std::vector<std::pair<ChargeEntry, bool>> out;
            for (const auto& e : a) {
                bool same = false;
                for (const auto& p : b)
                    if (p.charge == e.charge && p.sector == e.sector) same = p.dim_h == e.dim_h;
                out.emplace_back(e, same);
            }
            return out;
        };
        scan.charge_flags = flag(last.per_charge, prev.per_charge);
        scan.sector_flags = flag(last.per_sector, prev.per_sector);
    }
    return scan;
}

std::string stabilization_csv(const StabilizationScan& scan) {
    std::ostringstream os;
    os << "cutoff,charge,sector,dim_c,rank_in,rank_out,dim_h,closed,stabilized\n";
    auto flag_of = [](const std::vector<std::pair<ChargeEntry, bool>>& flags, const ChargeEntry& e) -> std::string {
        for (const auto& [f, ok] : flags)
            if (f.charge == e.charge && f.sector == e.sector) return ok ? "yes" : "no";
        return "-";
    };
    for (std::size_t r = 0; r < scan.rows.size(); ++r) {
        const auto& row = scan.rows[r];
        const bool last = r + 1 == scan.rows.size();
        if (!row.closed) {
            os << row.cutoff << ",*,*,-,-,-,-,no,inconclusive\n";
            continue;
        }
        auto emit = [&](const ChargeEntry& e, const std::vector<std::pair<ChargeEntry, bool>>& flags) {
            os << row.cutoff << ',' << e.charge << ',' << (e.sector ? std::to_string(*e.sector) : "*") << ','
               << e.dim_c << ',' << e.rank_in << ',' << e.rank_out << ',' << e.dim_h << ",yes,"
               << (last ? flag_of(flags, e) : "-") << '\n';
        };
        for (const auto& e : row.report.per_charge) emit(e, scan.charge_flags);
        for (const auto& e : row.report.per_sector) emit(e, scan.sector_flags);
    }
    return os.str();
}

// ---------------------------------------------------------------------------

std::string kind_name(ComplexKind k) {
    switch (k) {
        case ComplexKind::Ordinary: return "ordinary";
        case ComplexKind::Adjusted: return "adjusted";
        case ComplexKind::OrdinaryTwisted: return "ordinary-twisted";
    }
    return "?";
}

WComplex build_w_complex(const ReductionDatum& datum, const AdmissiblePair& pair, const Rat& level,
                         const Polarization& pol, ComplexKind kind, const std::optional<OneForm>& beta_override) {
    const std::size_t dim = datum.dim();
    auto nbasis = independent_subset(pair.n, dim);
    if (kind != ComplexKind::Ordinary && !beta_override && !strong_admissibility(*datum.alg, pair))
        throw PreconditionFailure("[n, n] ⊄ m: the adjusted complex needs strong admissibility");
    WComplex c;
    c.kind = kind;
    auto loop = LoopAlgebra::create(datum.alg, nbasis);
    c.beta = beta_e(datum, *loop);
    const bool graded_beta = !beta_override || beta_override->is_zero() || beta_override->values == c.beta.values;
    if (beta_override) c.beta = *beta_override;
    auto radical = gamma_radical(*loop, c.beta);
    auto complement = complement_choice(*loop, radical);
    c.sector = std::make_shared<BosonSector>(loop, c.beta, complement, radical);
    auto vac = std::make_shared<VacuumModule>(datum.alg, level);
    c.vacuum = std::make_shared<VacuumAction>(vac, loop);

    c.setup.loop = loop;
    c.setup.pol = pol;
    c.space = {dim, loop->rank(), 0, pol};
    switch (kind) {
        case ComplexKind::Ordinary:
            c.setup.beta = c.beta;
            c.setup.coeff = c.vacuum;
            c.setup.bosons = c.sector;
            c.d = d_ordinary(c.setup);
            break;
        case ComplexKind::Adjusted:
            c.setup.beta = c.beta;
            c.setup.coeff = c.vacuum;
            c.setup.bosons = c.sector;
            c.space.boson_dim = c.sector->dim();
            c.d = d_adjusted(c.setup);
            break;
        case ComplexKind::OrdinaryTwisted:
            c.twisted = std::make_shared<TwistedAction>(c.vacuum, c.beta, c.sector, pol);
            c.setup.coeff = c.twisted;
            c.space.boson_dim = c.sector->dim();
            c.d = d_ordinary(c.setup);
            break;
    }

    c.labels.current = datum.alg->labels();
    for (std::size_t i = 0; i < loop->rank(); ++i) c.labels.loop.push_back(loop->label(i));
    for (const auto& f : complement) {
        std::string name = "f";
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] != 0) name = loop->label(i);
        c.labels.boson.push_back(name);
    }

    auto degrees = loop->basis_degrees(datum.grading);
    if (degrees && graded_beta) {
        WeightData w;
        w.a = datum.a;
        w.current_degrees = datum.grading.degrees;
        w.loop_degrees = *degrees;
        bool homogeneous = true;
        for (const auto& f : complement) {
            std::optional<int> d;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (f[i] != 0) {
                    if (d && *d != (*degrees)[i]) homogeneous = false;
                    d = (*degrees)[i];
                }
            w.boson_degrees.push_back(d.value_or(0));
        }
        if (homogeneous) c.weight = std::move(w);
    }
    return c;
}

Window w_window(const WComplex& c, int cutoff, int max_bosons, std::size_t budget, Exec exec) {
    return grow_window(c.d, enumerate_monomials(c.space, cutoff, max_bosons), budget, exec);
}

SectorFn weight_sector(const WComplex& c) {
    if (!c.weight) return nullptr;
    WeightData w = *c.weight;
    return [w](const TensorMono& m) { return scaled_weight(m, w); };
}

}  // namespace brstkit
