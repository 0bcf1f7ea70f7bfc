#pragma once

// Clifford/Fock module of semi-infinite forms, normal ordering, ρ^β, the anomaly γ^β,
// its radical, and the neutral-boson Fock module F_β.

#include "brstkit/affine.hpp"
#include "brstkit/operator.hpp"
#include "brstkit/state.hpp"

#include <memory>
#include <string>
#include <vector>

namespace brstkit {

/// Which modes annihilate the vacuum: ι(u_{i,n}) for n ≥ iota_from, ε(u*_{i,m}) for
/// m ≥ eps_from, ϵ(u_{i,n}) for n ≥ boson_from. Complementarity forces eps_from = -iota_from.
struct Polarization {
    std::string name = "sec1";
    int iota_from = 1;
    int eps_from = -1;
    int boson_from = 1;

    /// "sec1" or "kw"; throws InputError otherwise.
    static Polarization preset(const std::string& name);
    /// Throws InputError unless eps_from = -iota_from.
    static Polarization custom(int iota_from, int eps_from, int boson_from);

    bool annihilates(const FermionSym& g) const {
        return g.family == Family::Iota ? g.mode >= iota_from : g.mode >= eps_from;
    }
    bool boson_annihilates(int mode) const { return mode >= boson_from; }
};

/// The generator with nonzero pairing against g: ι(u_{i,n}) <-> ε(u*_{i,-n-1}).
inline FermionSym partner(const FermionSym& g) {
    return {-g.mode - 1, g.family == Family::Iota ? Family::Eps : Family::Iota, g.idx};
}

/// One Clifford generator on an ordered fermion list, in place. Returns false for a zero result;
/// otherwise multiplies sign by the Koszul sign.
bool clifford_apply(const Polarization& pol, const FermionSym& gen, std::vector<FermionSym>& fer, int& sign);
TensorState clifford_act(const Polarization& pol, const FermionSym& gen, const TensorState& s);

struct OrderedWord {
    int sign = 1;
    std::vector<FermionSym> letters;
};
/// Annihilators moved to the right of creations (stable), with the sign of the permutation.
OrderedWord normal_order(const Polarization& pol, std::vector<FermionSym> letters);
/// Applies the product letters[0] letters[1] ... (rightmost acts first).
bool apply_word(const Polarization& pol, const std::vector<FermionSym>& letters, std::vector<FermionSym>& fer,
                int& sign);
/// Applies the normal-ordered product of letters.
bool apply_normal_ordered(const Polarization& pol, const std::vector<FermionSym>& letters,
                          std::vector<FermionSym>& fer, int& sign);

/// Single-generator operators; ι(x) for a loop element, ε(sum_i c_i u*_{i,mode}).
LazyOperator iota_op(const Polarization& pol, const LoopElement& x);
LazyOperator eps_op(const Polarization& pol, const RatVec& coeffs, int mode);

/// Modes of the ι symbols in a fermion list, and the modes paired with its ε symbols
/// (ε(u*_{i,q}) contributes -q-1). Both ascending, without repeats.
struct FermionSupport {
    std::vector<int> iota_modes;
    std::vector<int> eps_dual_modes;
};
FermionSupport fermion_support(const std::vector<FermionSym>& fer);

/// Modes n for which a summand :ι([x_p, u_{i,n}]) ε(u*_{i,-n-1}): of ρ(x_p) can be
/// nonzero on fer: N_ι ∪ [T_ι, max(T_ι - p - 1, max N_ε - p) + widen].
std::vector<int> rho_window(const Polarization& pol, int p, const std::vector<FermionSym>& fer, int widen);

/// ρ^β(x) = sum :ι(ad x(e_i)) ε(e_i*): + β(x), acting on the fermion part.
LazyOperator rho(std::shared_ptr<const LoopAlgebra> loop, const Polarization& pol, const OneForm& beta,
                 const LoopElement& x, int widen = 0);

/// γ^β(x, y) = -β([x, y]) in closed form; valid for loop algebras of nilpotent algebras.
struct AnomalyForm {
    std::shared_ptr<const LoopAlgebra> loop;
    OneForm beta;
    Rat operator()(const LoopElement& x, const LoopElement& y) const { return -beta(loop->bracket(x, y)); }
};

/// Evaluates ([ρ(x), ρ(y)] - ρ([x, y])) ω_0 and returns the ω_0 coefficient.
/// Throws InvariantViolation if anything else remains.
Rat gamma(std::shared_ptr<const LoopAlgebra> loop, const Polarization& pol, const OneForm& beta,
          const LoopElement& x, const LoopElement& y, int widen = 0);
/// ([ρ(x), ρ(y)] - ρ([x, y])) s - value·s; empty when the anomaly acts as the scalar value on s.
TensorState gamma_defect(std::shared_ptr<const LoopAlgebra> loop, const Polarization& pol, const OneForm& beta,
                         const LoopElement& x, const LoopElement& y, const Rat& value, const TensorMono& s);

/// Radical of (x, y) -> β([x, y] ⊗ t^s) on n for β supported at the single mode s.
/// β = 0 gives all of n. Throws InputError for multi-mode support.
std::vector<RatVec> gamma_radical(const LoopAlgebra& loop, const OneForm& beta);
/// Basis vectors u_i of n, in order, completing the radical to a basis.
std::vector<RatVec> complement_choice(const LoopAlgebra& loop, const std::vector<RatVec>& radical);

/// The Fock module F_β of ϵ(F) ⊕ CK with [ϵ(x), ϵ(y)] = -γ^β(x, y).
class BosonSector {
public:
    BosonSector() = default;
    /// Throws InputError when complement ⊕ radical is not all of n.
    BosonSector(std::shared_ptr<const LoopAlgebra> loop, OneForm beta, std::vector<RatVec> complement,
                std::vector<RatVec> radical);

    std::size_t dim() const { return basis_.size(); }
    const std::vector<RatVec>& basis() const { return basis_; }
    const std::vector<RatVec>& radical() const { return radical_; }
    const OneForm& beta() const { return beta_; }
    /// F-coordinates of the projection of x (n-coordinates) along the radical.
    RatVec project(const RatVec& x) const;
    /// [ϵ(f_c ⊗ t^n), ϵ(f_d ⊗ t^m)].
    Rat bracket(std::uint32_t c, int n, std::uint32_t d, int m) const;
    /// Largest mode of an annihilator ϵ(·⊗t^n) that can act nonzero on the given bosons.
    int annihilator_bound(const std::vector<BosonSym>& bos) const;

    /// coeff · ϵ(f_c ⊗ t^mode) · mono added to out.
    void act_basis(const Polarization& pol, std::uint32_t c, int mode, const TensorMono& mono, const Rat& coeff,
                   TensorState& out) const;
    /// coeff · ϵ(x) · mono for x a loop element (projected to F first).
    void act(const Polarization& pol, const LoopElement& x, const TensorMono& mono, const Rat& coeff,
             TensorState& out) const;

private:
    std::shared_ptr<const LoopAlgebra> loop_;
    OneForm beta_;
    std::vector<RatVec> basis_;
    std::vector<RatVec> radical_;
    RatMatrix proj_;  // dim() × rank
    std::vector<int> support_;
};

TensorState heisenberg_act(const Polarization& pol, const BosonSector& sector, const LoopElement& x,
                           const TensorState& s);
LazyOperator boson_op(const Polarization& pol, std::shared_ptr<const BosonSector> sector, const LoopElement& x);

/// E(x_n) = -n, E(ι(u_n)) = -n, E(ε(u*_m)) = -m-1, E(ϵ(u_n)) = -n.
int energy(const TensorMono& m);

/// Degrees used for the weight a·Δ with Δ(x ⊗ t^n) = -n + deg(x)/a, and Δ(ε) = -Δ(paired ι).
/// Every term of d and d̄ for β_e has weight zero.
struct WeightData {
    int a = 2;
    std::vector<int> current_degrees;
    std::vector<int> loop_degrees;
    std::vector<int> boson_degrees;
};
int scaled_weight(const TensorMono& m, const WeightData& w);

}  // namespace brstkit
