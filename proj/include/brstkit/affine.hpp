#pragma once

// Loop algebras of nilpotent subalgebras, one-forms on them, and the level-k
// vacuum module of the affinization of g.

#include "brstkit/liealg.hpp"
#include "brstkit/nilreduce.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace brstkit {

/// A homogeneous loop element (sum_i coeffs[i] u_i) ⊗ t^mode, coordinates over the loop basis.
struct LoopElement {
    int mode = 0;
    RatVec coeffs;
};

/// n ⊗ C[t, t^-1] for a nilpotent subalgebra n ⊆ g with a chosen basis u_1..u_r.
class LoopAlgebra {
public:
    /// Throws InputError when the vectors are dependent, not closed under the bracket, or
    /// span a non-nilpotent subalgebra.
    static std::shared_ptr<const LoopAlgebra> create(std::shared_ptr<const LieAlgebra> g,
                                                     std::vector<Element> basis);

    const LieAlgebra& base_algebra() const { return *g_; }
    std::shared_ptr<const LieAlgebra> base_algebra_ptr() const { return g_; }
    std::size_t rank() const { return basis_.size(); }
    const Element& basis(std::size_t i) const { return basis_.at(i); }
    const std::vector<Element>& basis() const { return basis_; }
    std::string label(std::size_t i) const;

    /// Coordinates of [u_i, u_j] over the loop basis.
    const RatVec& structure(std::size_t i, std::size_t j) const { return structure_[i][j]; }
    /// Nonzero structure constants as (i, j, k, c) with [u_i, u_j] ∋ c u_k.
    struct Constant {
        std::size_t i, j, k;
        Rat c;
    };
    const std::vector<Constant>& constants() const { return constants_; }

    RatVec bracket_coords(const RatVec& x, const RatVec& y) const;
    LoopElement bracket(const LoopElement& x, const LoopElement& y) const;
    /// Coordinates of an element of g lying in n; throws InputError otherwise.
    RatVec coords(const Element& x) const;
    Element to_g(const RatVec& coords) const;
    bool is_abelian() const { return constants_.empty(); }
    /// Lengths of the lower central series n ⊋ [n,n] ⊋ ... ⊋ 0.
    const std::vector<std::size_t>& central_series_dims() const { return series_; }

    /// Degrees of the basis vectors in a grading of g, when each is homogeneous.
    std::optional<std::vector<int>> basis_degrees(const Grading& grading) const;

    LoopElement mode_element(std::size_t i, int mode) const;

private:
    LoopAlgebra() = default;
    std::shared_ptr<const LieAlgebra> g_;
    std::vector<Element> basis_;
    std::vector<std::vector<RatVec>> structure_;
    std::vector<Constant> constants_;
    std::vector<std::size_t> series_;
};

/// Finitely supported one-form: values on basis modes u_{i,n}.
struct OneForm {
    std::map<std::pair<std::size_t, int>, Rat> values;

    Rat operator()(std::size_t i, int mode) const;
    Rat operator()(const LoopElement& x) const;
    bool is_zero() const { return values.empty(); }
    /// Distinct modes in the support, ascending.
    std::vector<int> support_modes() const;
    void set(std::size_t i, int mode, const Rat& v);
};

/// β_e(u ⊗ t^n) = δ_{n,-1} (e | u).
OneForm beta_e(const ReductionDatum& datum, const LoopAlgebra& loop);

/// <u_{i,n}, u*_{j,m}> = δ_{m,-n-1} δ_{ij}.
inline Rat dual_pairing(std::size_t j, int m, std::size_t i, int n) {
    return (i == j && m == -n - 1) ? Rat(1) : Rat(0);
}

/// A PBW factor x_m of V_k(g): basis index of g and mode.
struct CurrentSym {
    int mode;
    std::uint32_t idx;
    auto operator<=>(const CurrentSym&) const = default;
};
/// Sorted (mode ascending, then index) list of creation modes, all with mode ≤ -1.
using CurrentMono = std::vector<CurrentSym>;
using CurrentState = std::map<CurrentMono, Rat>;

void add_term(CurrentState& s, const CurrentMono& m, const Rat& c);

/// Energy of a vacuum monomial: sum of -mode.
int current_energy(const CurrentMono& m);

/// The vacuum module V_k(g) = Ind(C_k) with [a_m, b_n] = [a,b]_{m+n} + m δ_{m,-n} (a|b) k.
class VacuumModule {
public:
    VacuumModule(std::shared_ptr<const LieAlgebra> g, Rat level);

    const LieAlgebra& algebra() const { return *g_; }
    const Rat& level() const { return k_; }

    /// (b_idx ⊗ t^mode) · mono in PBW normal form.
    CurrentState act_basis(std::uint32_t idx, int mode, const CurrentMono& mono) const;
    /// (x ⊗ t^mode) · state for x ∈ g.
    CurrentState act(const Element& x, int mode, const CurrentState& s) const;
    CurrentState act_mono(const Element& x, int mode, const CurrentMono& mono) const;

    /// x_n · mono = 0 whenever n exceeds this.
    static int smooth_bound(const CurrentMono& mono) { return current_energy(mono); }

    void clear_cache() const;

private:
    CurrentState compute(std::uint32_t idx, int mode, const CurrentMono& mono) const;
    CurrentState bracket_then_act(std::uint32_t a, int m, const CurrentSym& c, const CurrentMono& rest) const;

    std::shared_ptr<const LieAlgebra> g_;
    Rat k_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<std::uint32_t, int, CurrentMono>, CurrentState> cache_;
};

}  // namespace brstkit
