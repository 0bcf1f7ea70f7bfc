#pragma once

// Finite-dimensional Lie algebras over Q given by structure constants.

#include "brstkit/exactla.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace brstkit {

/// Coefficient vector over an algebra basis.
using Element = RatVec;

class LieAlgebra {
public:
    /// Brackets are given only for i < j; antisymmetry is synthesized.
    using BracketTable = std::map<std::pair<std::size_t, std::size_t>, RatVec>;

    LieAlgebra(std::string name, std::vector<std::string> labels, BracketTable brackets,
               std::optional<RatMatrix> form = std::nullopt);

    const std::string& name() const { return name_; }
    std::size_t dim() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::optional<std::size_t> index_of(const std::string& label) const;
    /// Basis element by label; throws std::out_of_range for an unknown label.
    Element basis_element(const std::string& label) const;

    /// [b_i, b_j] as a coefficient vector.
    const RatVec& bracket_basis(std::size_t i, std::size_t j) const { return table_[i][j]; }
    Element bracket(const Element& x, const Element& y) const;
    /// Matrix of ad x: column j holds [x, b_j].
    RatMatrix ad(const Element& x) const;

    bool has_form() const { return form_.has_value(); }
    const RatMatrix& form() const;
    Rat form_value(const Element& x, const Element& y) const;
    /// Replaces the invariant form (unchecked; see verify_form).
    void set_form(RatMatrix form) { form_ = std::move(form); }

    const BracketTable& upper_brackets() const { return upper_; }

private:
    std::string name_;
    std::vector<std::string> labels_;
    BracketTable upper_;
    std::vector<std::vector<RatVec>> table_;
    std::optional<RatMatrix> form_;
};

struct Grading {
    std::vector<int> degrees;
};

struct TripleReport {
    bool ok = true;
    std::size_t i = 0, j = 0, k = 0;
    std::string detail;
};

/// sl_n with E_ij (i != j) and H_i = E_ii - E_{i+1,i+1}; the form is the Killing form.
/// For n = 2 the basis is labelled e, h, f.
LieAlgebra construct_sl(std::size_t n);

/// First basis triple violating [[x,y],z] + [[y,z],x] + [[z,x],y] = 0.
TripleReport verify_jacobi(const LieAlgebra& alg);
/// (x | y) = tr(ad x ad y) on the basis.
RatMatrix killing_form(const LieAlgebra& alg);
/// Symmetry and (x|[y,z]) = ([x,y]|z) on all basis triples.
TripleReport verify_form(const LieAlgebra& alg, const RatMatrix& form);
/// [g_i, g_j] ⊆ g_{i+j} on all basis pairs.
TripleReport verify_grading(const LieAlgebra& alg, const Grading& grading);

/// Degrees are the ad h eigenvalues. Throws std::invalid_argument when ad h is
/// not diagonal on the basis or has a non-integer eigenvalue.
Grading grading_from_element(const LieAlgebra& alg, const Element& h);
/// Indices of the basis vectors of degree i.
std::vector<std::size_t> graded_component(const LieAlgebra& alg, const Grading& grading, int i);

/// Degree of x if homogeneous, nullopt otherwise (zero vector counts as non-homogeneous).
std::optional<int> homogeneous_degree(const Grading& grading, const Element& x);

}  // namespace brstkit
