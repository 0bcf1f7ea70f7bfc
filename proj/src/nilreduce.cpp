#include "brstkit/nilreduce.hpp"

#include "brstkit/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace brstkit {

namespace {

std::vector<Element> basis_of_degree(const ReductionDatum& d, auto pred) {
    std::vector<Element> out;
    for (std::size_t k = 0; k < d.dim(); ++k)
        if (pred(d.grading.degrees[k])) out.push_back(unit_vec(d.dim(), k));
    return out;
}

std::vector<Element> brackets_with_e(const ReductionDatum& d, const std::vector<Element>& xs) {
    std::vector<Element> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(d.alg->bracket(d.e, x));
    return out;
}

std::vector<Element> homogeneous_parts(const Grading& grading, const std::vector<Element>& span) {
    std::vector<Element> parts;
    for (const auto& v : span) {
        std::map<int, Element> by_degree;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k] == 0) continue;
            auto& part = by_degree.try_emplace(grading.degrees[k], zero_vec(v.size())).first->second;
            part[k] = v[k];
        }
        for (auto& [deg, part] : by_degree) parts.push_back(std::move(part));
    }
    return parts;
}

std::vector<Element> homogeneous_basis(const Grading& grading, const std::vector<Element>& span,
                                       std::size_t ambient) {
    return independent_subset(homogeneous_parts(grading, span), ambient);
}

bool closed_under(const LieAlgebra& alg, const std::vector<Element>& left, const std::vector<Element>& right,
                  const std::vector<Element>& target, std::string* witness) {
    for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = 0; j < right.size(); ++j) {
            auto b = alg.bracket(left[i], right[j]);
            if (!is_zero_vec(b) && !span_contains(target, b, alg.dim())) {
                if (witness) {
                    std::ostringstream os;
                    os << "bracket of vectors " << i << " and " << j << " leaves the target span";
                    *witness = os.str();
                }
                return false;
            }
        }
    return true;
}

}  // namespace

bool is_ad_nilpotent(const LieAlgebra& alg, const Element& e) {
    const RatMatrix ad = alg.ad(e);
    RatMatrix power = ad;
    for (std::size_t k = 1; k <= alg.dim(); ++k) {
        bool zero = std::all_of(power.begin(), power.end(), [](const RatVec& r) { return is_zero_vec(r); });
        if (zero) return true;
        power = matmul(power, ad);
    }
    return false;
}

ReductionDatum make_datum(std::shared_ptr<const LieAlgebra> alg, Grading grading, Element e, int a) {
    if (!alg) throw InputError("reduction datum needs an algebra");
    if (!alg->has_form()) throw InputError("reduction datum needs an invariant form on " + alg->name());
    if (grading.degrees.size() != alg->dim()) throw InputError("grading length does not match the algebra");
    if (e.size() != alg->dim()) throw InputError("e has wrong length");
    if (is_zero_vec(e)) throw InputError("e must be nonzero");
    auto deg = homogeneous_degree(grading, e);
    if (!deg) throw InputError("e is not homogeneous for the grading");
    if (*deg != a)
        throw InputError("e has degree " + std::to_string(*deg) + " but a = " + std::to_string(a));
    if (!is_ad_nilpotent(*alg, e)) throw InputError("e is not ad-nilpotent");
    return {std::move(alg), std::move(grading), std::move(e), a};
}

GoodGradingReport is_good_grading(const ReductionDatum& datum) {
    GoodGradingReport r;
    auto deg = homogeneous_degree(datum.grading, datum.e);
    if (!deg) throw InputError("e is not homogeneous");
    r.e_in_g2 = *deg == 2;
    if (!r.e_in_g2) {
        r.detail = "e has degree " + std::to_string(*deg) + ", not 2";
        return r;
    }
    const auto [lo_it, hi_it] = std::minmax_element(datum.grading.degrees.begin(), datum.grading.degrees.end());
    const int lo = *lo_it - 2, hi = *hi_it;
    r.ok = true;
    for (int i = lo; i <= hi; ++i) {
        auto source = graded_component(*datum.alg, datum.grading, i);
        auto target = graded_component(*datum.alg, datum.grading, i + 2);
        GoodGradingEntry entry{i, source.size(), target.size(), 0, i <= -1, i >= -1, true};
        SparseMat m(target.size(), source.size());
        for (std::size_t c = 0; c < source.size(); ++c) {
            auto img = datum.alg->bracket(datum.e, unit_vec(datum.dim(), source[c]));
            for (std::size_t t = 0; t < target.size(); ++t)
                if (img[target[t]] != 0) m.set(t, c, img[target[t]]);
        }
        entry.rank = rank(m);
        if (entry.needs_injective && entry.rank != entry.dim_source) entry.ok = false;
        if (entry.needs_surjective && entry.rank != entry.dim_target) entry.ok = false;
        if (!entry.ok && r.ok) {
            r.ok = false;
            r.detail = "ad e fails at degree " + std::to_string(i) + " (rank " + std::to_string(entry.rank) + ", dims " +
                       std::to_string(entry.dim_source) + " -> " + std::to_string(entry.dim_target) + ")";
        }
        r.entries.push_back(entry);
    }
    return r;
}

SparseMat window_form(const ReductionDatum& datum, const std::vector<Element>& subspace) {
    for (const auto& x : subspace) {
        auto deg = homogeneous_degree(datum.grading, x);
        if (!deg) throw InputError("window_form: non-homogeneous vector");
        if (*deg <= -datum.a || *deg >= 0) throw InputError("window_form: degree outside (-a, 0)");
    }
    const std::size_t k = subspace.size();
    SparseMat m(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            if (r == c) continue;
            Rat v = datum.alg->form_value(datum.e, datum.alg->bracket(subspace[c], subspace[r]));
            if (v != 0) m.set(r, c, v);
        }
    return m;
}

std::vector<Element> low_part(const ReductionDatum& datum) {
    return basis_of_degree(datum, [&](int d) { return d <= -datum.a; });
}

std::vector<Element> negative_centralizer(const ReductionDatum& datum) {
    std::vector<Element> out;
    std::vector<int> degrees(datum.grading.degrees);
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    for (int d : degrees) {
        if (d >= 0) continue;
        auto comp = graded_component(*datum.alg, datum.grading, d);
        std::vector<Element> images;
        for (auto k : comp) images.push_back(datum.alg->bracket(datum.e, unit_vec(datum.dim(), k)));
        for (const auto& kv : kernel_basis(SparseMat::from_columns(images, datum.dim()))) {
            Element x = zero_vec(datum.dim());
            for (std::size_t c = 0; c < comp.size(); ++c) x[comp[c]] = kv[c];
            out.push_back(std::move(x));
        }
    }
    return out;
}

bool criterion_star(const ReductionDatum& datum) {
    if (datum.a <= 1) return false;
    auto low = low_part(datum);
    return span_rank(brackets_with_e(datum, low), datum.dim()) == low.size();
}

std::vector<Element> window_complement(const ReductionDatum& datum) {
    if (!criterion_star(datum))
        throw PreconditionFailure("criterion (*) fails: need a > 1 and ad e injective on g_{<=-a}");
    std::vector<Element> span = negative_centralizer(datum);
    std::vector<Element> chosen;
    std::size_t current = span_rank(span, datum.dim());
    for (std::size_t k = 0; k < datum.dim(); ++k) {
        const int d = datum.grading.degrees[k];
        if (d <= -datum.a || d >= 0) continue;
        span.push_back(unit_vec(datum.dim(), k));
        const auto r = span_rank(span, datum.dim());
        if (r > current) {
            chosen.push_back(unit_vec(datum.dim(), k));
            current = r;
        } else {
            span.pop_back();
        }
    }
    return chosen;
}

FormLemmaReport check_form_lemma(const ReductionDatum& datum, const std::vector<Element>& complement) {
    FormLemmaReport r;
    r.dim = complement.size();
    r.rank = rank(window_form(datum, complement));
    r.nondegenerate = r.rank == r.dim;
    std::map<int, std::vector<std::size_t>> by_degree;
    for (std::size_t i = 0; i < complement.size(); ++i)
        by_degree[*homogeneous_degree(datum.grading, complement[i])].push_back(i);
    r.symmetric_pairing = true;
    for (int d = -datum.a + 1; d < 0; ++d) {
        const int partner = -datum.a - d;
        if (d > partner) continue;
        const auto& rows = by_degree[d];
        const auto& cols = by_degree[partner];
        if (rows.empty() && cols.empty()) continue;
        std::vector<Element> all;
        for (auto i : rows) all.push_back(complement[i]);
        for (auto i : cols) all.push_back(complement[i]);
        SparseMat m(rows.size(), cols.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) {
                Rat v = datum.alg->form_value(datum.e, datum.alg->bracket(complement[cols[b]], complement[rows[a]]));
                if (v != 0) m.set(a, b, v);
            }
        PairingEntry e{d, partner, rows.size(), cols.size(), rank(m), false};
        e.ok = e.dim == e.partner_dim && e.rank == e.dim;
        if (!e.ok) r.symmetric_pairing = false;
        r.pairings.push_back(e);
    }
    return r;
}

DimEqualityReport dim_equality_check(const ReductionDatum& datum, const std::vector<Element>& complement) {
    if (!criterion_star(datum)) throw PreconditionFailure("criterion (*) fails; dimension identity not applicable");
    DimEqualityReport r;
    r.dim_complement = span_rank(complement, datum.dim());
    r.dim_low = low_part(datum).size();
    r.rank_ad_e = rank(SparseMat::from_dense(datum.alg->ad(datum.e)));
    r.ok = r.dim_complement + 2 * r.dim_low == r.rank_ad_e;
    return r;
}

PairConstruction construct_admissible_pair(const ReductionDatum& datum, const SubspaceChoice& choice) {
    const std::size_t n = datum.dim();
    if (!is_graded_subspace(datum.grading, choice.isotropic)) throw InputError("l must be a graded subspace");
    auto l = homogeneous_basis(datum.grading, choice.isotropic, n);
    if (!span_includes(choice.complement, l, n)) throw PreconditionFailure("l is not contained in the complement");
    if (!window_form(datum, l).is_zero()) throw PreconditionFailure("l is not isotropic for <x,y> = (e|[y,x])");

    PairConstruction out;
    // l^⊥ inside the complement, degree by degree so the result stays homogeneous.
    std::map<int, std::vector<std::size_t>> by_degree;
    for (std::size_t i = 0; i < choice.complement.size(); ++i) {
        auto deg = homogeneous_degree(datum.grading, choice.complement[i]);
        if (!deg) throw InputError("complement vectors must be homogeneous");
        by_degree[*deg].push_back(i);
    }
    for (const auto& [deg, idx] : by_degree) {
        SparseMat m(l.size(), idx.size());
        for (std::size_t j = 0; j < l.size(); ++j)
            for (std::size_t c = 0; c < idx.size(); ++c) {
                Rat v = datum.alg->form_value(datum.e, datum.alg->bracket(l[j], choice.complement[idx[c]]));
                if (v != 0) m.set(j, c, v);
            }
        for (const auto& kv : kernel_basis(m)) {
            Element x = zero_vec(n);
            for (std::size_t c = 0; c < idx.size(); ++c)
                if (kv[c] != 0) x = add_scaled(x, choice.complement[idx[c]], kv[c]);
            out.l_perp.push_back(std::move(x));
        }
    }
    auto low = low_part(datum);
    out.pair.m = low;
    out.pair.m.insert(out.pair.m.end(), l.begin(), l.end());
    out.pair.n = low;
    out.pair.n.insert(out.pair.n.end(), out.l_perp.begin(), out.l_perp.end());

    std::string witness;
    out.n_subalgebra = closed_under(*datum.alg, out.pair.n, out.pair.n, out.pair.n, &witness);
    if (!out.n_subalgebra) out.detail = "n is not a subalgebra: " + witness;
    out.m_ideal = closed_under(*datum.alg, out.pair.m, out.pair.n, out.pair.m, &witness);
    if (!out.m_ideal) out.detail += (out.detail.empty() ? "" : "; ") + std::string("m is not an ideal of n: ") + witness;
    return out;
}

bool ConditionReport::ok() const {
    return std::all_of(conditions.begin(), conditions.end(), [](bool b) { return b; });
}

ConditionReport verify_admissible_pair(const ReductionDatum& datum, const AdmissiblePair& pair) {
    const std::size_t n = datum.dim();
    if (!is_graded_subspace(datum.grading, pair.m)) throw InputError("m is not a graded subspace");
    if (!is_graded_subspace(datum.grading, pair.n)) throw InputError("n is not a graded subspace");
    const auto& alg = *datum.alg;
    ConditionReport r;
    r.dim_m = span_rank(pair.m, n);
    r.dim_n = span_rank(pair.n, n);
    r.rank_ad_e = rank(SparseMat::from_dense(alg.ad(datum.e)));

    auto deg = homogeneous_degree(datum.grading, datum.e);
    r.conditions[0] = deg && *deg == datum.a && datum.a > 1;
    if (!r.conditions[0]) r.notes[0] = "e not in g_a with a > 1";

    auto low = low_part(datum);
    auto negative = basis_of_degree(datum, [](int d) { return d < 0; });
    bool c2 = span_includes(pair.m, low, n) && span_includes(pair.n, pair.m, n) && span_includes(negative, pair.n, n);
    r.conditions[1] = c2;
    if (!c2) r.notes[1] = "inclusion chain g_{<=-a} ⊆ m ⊆ n ⊆ g_{<0} fails";

    // m^⊥ for the invariant form.
    SparseMat mf(pair.m.size(), n);
    for (std::size_t i = 0; i < pair.m.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) {
            Rat v = alg.form_value(pair.m[i], unit_vec(n, k));
            if (v != 0) mf.set(i, k, v);
        }
    auto m_perp = kernel_basis(mf);
    std::vector<Element> ge;
    for (std::size_t k = 0; k < n; ++k) ge.push_back(alg.bracket(unit_vec(n, k), datum.e));
    auto lhs = span_intersection(m_perp, ge, n);
    std::vector<Element> ne;
    for (const auto& x : pair.n) ne.push_back(alg.bracket(x, datum.e));
    r.conditions[2] = span_equal(lhs, ne, n);
    if (!r.conditions[2]) r.notes[2] = "m^perp ∩ [g,e] differs from [n,e]";

    r.conditions[3] = span_rank(ne, n) == r.dim_n;
    if (!r.conditions[3]) r.notes[3] = "ad e not injective on n";

    std::string witness;
    r.conditions[4] = closed_under(alg, pair.m, pair.n, pair.m, &witness);
    if (!r.conditions[4]) r.notes[4] = "[m,n] ⊄ m: " + witness;

    r.conditions[5] = r.dim_m + r.dim_n == r.rank_ad_e;
    if (!r.conditions[5])
        r.notes[5] = std::to_string(r.dim_m) + " + " + std::to_string(r.dim_n) + " != " + std::to_string(r.rank_ad_e);
    return r;
}

bool strong_admissibility(const LieAlgebra& alg, const AdmissiblePair& pair) {
    return closed_under(alg, pair.n, pair.n, pair.m, nullptr);
}

bool is_graded_subspace(const Grading& grading, const std::vector<Element>& span) {
    if (span.empty()) return true;
    const std::size_t ambient = span.front().size();
    return span_includes(span, homogeneous_parts(grading, span), ambient);
}

std::vector<IsotropicCandidate> search_isotropic(const ReductionDatum& datum,
                                                 const std::vector<Element>& complement, int bound) {
    std::vector<IsotropicCandidate> out;
    std::map<int, std::vector<std::size_t>> by_degree;
    for (std::size_t i = 0; i < complement.size(); ++i)
        by_degree[*homogeneous_degree(datum.grading, complement[i])].push_back(i);
    for (const auto& [deg, idx] : by_degree) {
        const std::size_t k = idx.size();
        std::vector<int> coeffs(k, -bound);
        while (true) {
            int g = 0;
            for (int c : coeffs) g = std::gcd(g, std::abs(c));
            auto first = std::find_if(coeffs.begin(), coeffs.end(), [](int c) { return c != 0; });
            if (g == 1 && first != coeffs.end() && *first > 0) {
                Element x = zero_vec(datum.dim());
                for (std::size_t c = 0; c < k; ++c)
                    if (coeffs[c] != 0) x = add_scaled(x, complement[idx[c]], Rat(coeffs[c]));
                IsotropicCandidate cand;
                cand.l = {x};
                cand.construction = construct_admissible_pair(datum, {complement, cand.l});
                cand.conditions = verify_admissible_pair(datum, cand.construction.pair);
                cand.strong = strong_admissibility(*datum.alg, cand.construction.pair);
                out.push_back(std::move(cand));
            }
            std::size_t pos = 0;
            while (pos < k && coeffs[pos] == bound) coeffs[pos++] = -bound;
            if (pos == k) break;
            ++coeffs[pos];
        }
    }
    return out;
}

}  // namespace brstkit
