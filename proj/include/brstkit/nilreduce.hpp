#pragma once

// Good gradings, the window form on g^{>-a}, and admissible pairs.

#include "brstkit/liealg.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace brstkit {

struct ReductionDatum {
    std::shared_ptr<const LieAlgebra> alg;
    Grading grading;
    Element e;
    int a = 2;

    std::size_t dim() const { return alg->dim(); }
};

/// Validates that e is homogeneous of degree a, nonzero and ad-nilpotent, and that
/// the algebra carries an invariant form. Throws InputError otherwise.
ReductionDatum make_datum(std::shared_ptr<const LieAlgebra> alg, Grading grading, Element e, int a);

bool is_ad_nilpotent(const LieAlgebra& alg, const Element& e);

struct GoodGradingEntry {
    int degree;
    std::size_t dim_source, dim_target, rank;
    bool needs_injective, needs_surjective, ok;
};

struct GoodGradingReport {
    bool e_in_g2 = false;
    bool ok = false;
    std::vector<GoodGradingEntry> entries;
    std::string detail;
};

/// e ∈ g_2 and ad e : g_i → g_{i+2} injective for i ≤ -1, surjective for i ≥ -1.
GoodGradingReport is_good_grading(const ReductionDatum& datum);

/// Matrix of <x, y> = (e | [y, x]) on the given homogeneous vectors with degrees in (-a, 0).
/// Throws InputError for non-homogeneous input or degrees outside the window.
SparseMat window_form(const ReductionDatum& datum, const std::vector<Element>& subspace);

/// Basis vectors of degree ≤ -a.
std::vector<Element> low_part(const ReductionDatum& datum);
/// Homogeneous basis of g^e_{<0}.
std::vector<Element> negative_centralizer(const ReductionDatum& datum);
/// ad e injective on g_{≤ -a}.
bool criterion_star(const ReductionDatum& datum);

/// Graded complement g^{>-a} of g^e_{<0} in g_{(-a,0)}, chosen greedily in basis order.
/// Throws PreconditionFailure when criterion (*) fails.
std::vector<Element> window_complement(const ReductionDatum& datum);

struct PairingEntry {
    int degree, partner_degree;
    std::size_t dim, partner_dim, rank;
    bool ok;
};

struct FormLemmaReport {
    std::size_t dim = 0, rank = 0;
    bool nondegenerate = false;
    bool symmetric_pairing = false;
    std::vector<PairingEntry> pairings;
    bool ok() const { return nondegenerate && symmetric_pairing; }
};

/// Nondegeneracy of the window form on the complement, and nondegenerate pairing of
/// the degree d and -a-d components.
FormLemmaReport check_form_lemma(const ReductionDatum& datum, const std::vector<Element>& complement);

struct DimEqualityReport {
    std::size_t dim_complement = 0, dim_low = 0, rank_ad_e = 0;
    bool ok = false;
};

/// dim g^{>-a} + 2 dim g_{≤-a} = dim [g, e]. Throws PreconditionFailure when (*) fails.
DimEqualityReport dim_equality_check(const ReductionDatum& datum, const std::vector<Element>& complement);

struct SubspaceChoice {
    std::vector<Element> complement;
    std::vector<Element> isotropic;
};

struct AdmissiblePair {
    std::vector<Element> m;
    std::vector<Element> n;
};

struct PairConstruction {
    AdmissiblePair pair;
    std::vector<Element> l_perp;
    bool n_subalgebra = false;
    bool m_ideal = false;
    std::string detail;
    bool ok() const { return n_subalgebra && m_ideal; }
};

/// m = g_{≤-a} ⊕ l, n = g_{≤-a} ⊕ l^⊥ with l^⊥ taken inside the complement.
/// Throws PreconditionFailure when l is not isotropic or not inside the complement.
PairConstruction construct_admissible_pair(const ReductionDatum& datum, const SubspaceChoice& choice);

struct ConditionReport {
    std::array<bool, 6> conditions{};
    std::size_t dim_m = 0, dim_n = 0, rank_ad_e = 0;
    std::array<std::string, 6> notes;
    bool ok() const;
};

/// Conditions (i)-(vi) of an admissible pair, checked exactly.
ConditionReport verify_admissible_pair(const ReductionDatum& datum, const AdmissiblePair& pair);

/// [n, n] ⊆ m.
bool strong_admissibility(const LieAlgebra& alg, const AdmissiblePair& pair);

/// True when every homogeneous component of every spanning vector lies in the span.
bool is_graded_subspace(const Grading& grading, const std::vector<Element>& span);

struct IsotropicCandidate {
    std::vector<Element> l;
    PairConstruction construction;
    ConditionReport conditions;
    bool strong = false;
};

/// One-dimensional l spanned by grid combinations (entries in [-bound, bound]) of the
/// complement basis, one representative per line. No completeness claim.
std::vector<IsotropicCandidate> search_isotropic(const ReductionDatum& datum,
                                                 const std::vector<Element>& complement, int bound);

}  // namespace brstkit
