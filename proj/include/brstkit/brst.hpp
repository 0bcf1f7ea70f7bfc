#pragma once

// θ, θ̄, d^β and d̄^β as lazy operators on M ⊗ Λ^{∞/2+•}L* ⊗ F_β, and the exact
// pointwise verifiers built on them.

#include "brstkit/ghostspace.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace brstkit {

/// How a loop mode acts on the coefficient part (cur and bos) of a tensor monomial.
class CoefficientAction {
public:
    virtual ~CoefficientAction() = default;
    virtual void act(const LoopElement& x, const TensorMono& m, const Rat& coeff, TensorState& out) const = 0;
    /// x ⊗ t^n acts as zero on m for every n above this bound.
    virtual int smooth_bound(const TensorMono& m) const = 0;
    virtual std::string name() const = 0;
};

/// The trivial module C (every mode acts as zero).
class TrivialAction final : public CoefficientAction {
public:
    void act(const LoopElement&, const TensorMono&, const Rat&, TensorState&) const override {}
    int smooth_bound(const TensorMono&) const override { return std::numeric_limits<int>::min() / 4; }
    std::string name() const override { return "trivial"; }
};

/// V_k(g) restricted to n̂ ⊆ ĝ.
class VacuumAction final : public CoefficientAction {
public:
    VacuumAction(std::shared_ptr<const VacuumModule> vac, std::shared_ptr<const LoopAlgebra> loop);
    void act(const LoopElement& x, const TensorMono& m, const Rat& coeff, TensorState& out) const override;
    int smooth_bound(const TensorMono& m) const override { return current_energy(m.cur); }
    std::string name() const override { return "vacuum"; }
    const VacuumModule& module() const { return *vac_; }

private:
    std::shared_ptr<const VacuumModule> vac_;
    std::shared_ptr<const LoopAlgebra> loop_;
};

/// V_k(g) ⊗ F_{β'} with x acting as x + β'(x) + ϵ(x).
class TwistedAction final : public CoefficientAction {
public:
    TwistedAction(std::shared_ptr<const VacuumAction> base, OneForm beta_prime, std::shared_ptr<const BosonSector> sector,
                  Polarization pol);
    void act(const LoopElement& x, const TensorMono& m, const Rat& coeff, TensorState& out) const override;
    int smooth_bound(const TensorMono& m) const override;
    std::string name() const override { return "twisted"; }

private:
    std::shared_ptr<const VacuumAction> base_;
    OneForm beta_prime_;
    std::vector<int> support_;
    std::shared_ptr<const BosonSector> sector_;
    Polarization pol_;
};

/// Everything needed to build the operators of one complex.
struct BrstSetup {
    std::shared_ptr<const LoopAlgebra> loop;
    Polarization pol;
    OneForm beta;
    std::shared_ptr<const CoefficientAction> coeff = std::make_shared<TrivialAction>();
    std::shared_ptr<const BosonSector> bosons;  // required for the adjusted operators
};

/// Loop basis e_a = sum_i e[a][i] u_i with dual basis e*_a = sum_i dual[a][i] u*_i.
struct Frame {
    std::vector<RatVec> e;
    std::vector<RatVec> dual;
};
Frame standard_frame(std::size_t rank);
/// Columns of transform are the new basis vectors. Throws InputError when the matrix is
/// singular or, if degrees are given, mixes basis vectors of different degree.
Frame frame_from_transform(const RatMatrix& transform, const std::optional<std::vector<int>>& degrees);

struct DiffOptions {
    int widen = 0;
    std::optional<Frame> frame;
    /// Use the sum over i < j instead of the symmetrized 1/2-sum.
    bool ordered_pairs = false;
};

/// θ(x) = x + ρ^β(x).
LazyOperator theta(const BrstSetup& s, const LoopElement& x, int widen = 0);
/// θ̄(x) = x + ρ^β(x) + ϵ(x). Throws InputError without a boson sector.
LazyOperator theta_bar(const BrstSetup& s, const LoopElement& x, int widen = 0);

/// d^β = sum e_i ε(e_i*) - 1/2 sum :ι([e_i, e_j]) ε(e_i*) ε(e_j*): + ε(β).
LazyOperator d_ordinary(const BrstSetup& s, const DiffOptions& opt = {});
/// The extra sum of d̄: sum_i ε(e_i*) ϵ(e_i).
LazyOperator adjustment_term(const BrstSetup& s, const DiffOptions& opt = {});
/// d̄^β = d^β + sum ε(e_i*) ϵ(e_i). Throws PreconditionFailure naming the offending
/// bracket when [n, n] is not inside the radical, InputError without a boson sector.
LazyOperator d_adjusted(const BrstSetup& s, const DiffOptions& opt = {});

/// First basis bracket [u_i, u_j] outside span(radical), as a message; nullopt if none.
std::optional<std::string> bracket_outside_radical(const LoopAlgebra& loop, const std::vector<RatVec>& radical);

/// Caches images of monomials; thread-safe.
LazyOperator memoize(const LazyOperator& op);

// ---------------------------------------------------------------------------
// Verifiers. Each returns the list of witnesses; an empty list is a pass.

struct Witness {
    std::string probe;
    std::string state;
    std::string residual;
};

struct SweepReport {
    std::string suite;
    std::size_t checked = 0;
    std::vector<Witness> witnesses;
    bool ok() const { return witnesses.empty(); }
};

/// Witness lists are capped at this many entries; checked counts everything.
inline constexpr std::size_t kMaxWitnesses = 20;

SweepReport verify_square_zero(const LazyOperator& d, const std::vector<TensorMono>& states,
                               const StateLabels& labels = {});
/// Every output monomial has charge(input) + shift.
SweepReport verify_charge(const LazyOperator& op, const std::vector<TensorMono>& states,
                          const StateLabels& labels = {});
/// [d, ι(x)] s = target(x) s.
SweepReport verify_commutator(const LazyOperator& d, const BrstSetup& setup, bool adjusted,
                              const std::vector<LoopElement>& xs, const std::vector<TensorMono>& states,
                              const StateLabels& labels = {});
/// [θ̄(x), θ̄(y)] s = θ̄([x, y]) s (or θ when adjusted is false and γ vanishes).
SweepReport verify_homomorphism(const BrstSetup& setup, bool adjusted,
                                const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                                const std::vector<TensorMono>& states, const StateLabels& labels = {});
/// [θ̄(x), ϵ(y)] s = -γ(x, y) s.
SweepReport verify_rhobar(const BrstSetup& setup, const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                          const std::vector<TensorMono>& states, const StateLabels& labels = {});
/// Same action of d (or d̄) built in the standard frame and in the transformed frame.
SweepReport verify_basis_independence(const BrstSetup& setup, bool adjusted, const RatMatrix& transform,
                                      const std::vector<TensorMono>& states, const StateLabels& labels = {});
/// Symmetrized and i < j forms agree.
SweepReport verify_pair_forms(const BrstSetup& setup, bool adjusted, const std::vector<TensorMono>& states,
                              const StateLabels& labels = {});
/// Widening every contributing window by 1..max_widen leaves outputs unchanged.
SweepReport verify_window_stability(const BrstSetup& setup, bool adjusted, int max_widen,
                                    const std::vector<TensorMono>& states, const StateLabels& labels = {});

/// [[d², ι(x)], ι(y)] s = -γ(x, y) s.
SweepReport verify_whynotzero(const LazyOperator& d, const BrstSetup& setup,
                              const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                              const std::vector<TensorMono>& states, const StateLabels& labels = {});

struct UniquenessReport {
    bool hypothesis_holds = false;     // [d̄ + P, ι(x)] = θ̄(x) on the window
    bool perturbation_vanishes = false;
    bool implication_ok() const { return !hypothesis_holds || perturbation_vanishes; }
    std::size_t checked = 0;
    std::string detail;
};
UniquenessReport verify_uniqueness(const LazyOperator& dbar, const LazyOperator& perturbation,
                                   const BrstSetup& setup, const std::vector<LoopElement>& xs,
                                   const std::vector<TensorMono>& states);

/// ∂β' ≠ 0 and β'([[x, y], z]) = 0; returns a description of the failure, or nullopt.
std::optional<std::string> twisted_precondition(const LoopAlgebra& loop, const OneForm& beta_prime);
/// [T(x), T(y)] s = ([x, y] + β'([x, y])) s for T(x) = x + β'(x) + ϵ(x).
/// Throws PreconditionFailure when twisted_precondition fails.
SweepReport verify_twisted_action(const TwistedAction& twisted, const VacuumAction& plain, const LoopAlgebra& loop,
                                  const OneForm& beta_prime,
                                  const std::vector<std::pair<LoopElement, LoopElement>>& pairs,
                                  const std::vector<TensorMono>& states, const StateLabels& labels = {});

/// Operator of a coefficient action, x acting on the cur/bos part.
LazyOperator coefficient_op(std::shared_ptr<const CoefficientAction> a, const LoopElement& x);

}  // namespace brstkit
