#pragma once

// Closure-verified finite windows of the complexes, exact per-charge cohomology
// dimensions, and stabilization scans over energy cutoffs.

#include "brstkit/brst.hpp"
#include "brstkit/nilreduce.hpp"
#include "brstkit/parallel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace brstkit {

/// The symbol alphabet of a complex.
struct MonomialSpace {
    std::size_t current_dim = 0;  // dim g of the vacuum module, 0 for the trivial module
    std::size_t loop_rank = 0;
    std::size_t boson_dim = 0;
    Polarization pol;
};

/// All creation monomials with energy ≤ max_energy and at most max_bosons boson factors,
/// in canonical order. Throws InputError for polarizations with negative-energy creations.
std::vector<TensorMono> enumerate_monomials(const MonomialSpace& space, int max_energy, int max_bosons = 0);

struct Window {
    std::vector<TensorMono> seed;
    std::vector<TensorMono> basis;
    std::vector<TensorState> images;  // d applied to basis[i]; filled only when closed
    bool closed = false;
    std::size_t budget = 0;
};

/// Breadth-first closure of the seed under d; closed = false once the basis would exceed budget.
/// Throws InputError when budget < seed size.
Window grow_window(const LazyOperator& d, const std::vector<TensorMono>& seed, std::size_t budget,
                   Exec exec = default_exec());

/// Extra grading preserved by d (e.g. the weight a·Δ); tabulated alongside the charge.
using SectorFn = std::function<int(const TensorMono&)>;

/// Matrix of d from the (charge, sector) slice to the (charge + 1, sector) slice.
/// Throws InputError for non-closed windows.
SparseMat assemble_differential(const Window& w, const LazyOperator& d, int charge,
                                const SectorFn& sector = nullptr, int sector_value = 0);

struct ChargeEntry {
    int charge = 0;
    std::optional<int> sector;  // nullopt: all sectors together
    std::size_t dim_c = 0, rank_in = 0, rank_out = 0, dim_h = 0;
};

struct CohomologyReport {
    std::vector<ChargeEntry> per_charge;  // sector totals, ascending charge
    std::vector<ChargeEntry> per_sector;  // filled when a sector function is given
    long euler_c = 0, euler_h = 0;
    bool composition_zero = false;
    std::size_t window_size = 0;
    bool euler_ok() const { return euler_c == euler_h; }
};

/// Exact dims from the images stored in a closed window. Verifies d² = 0 on the window first and
/// throws PreconditionFailure with a witness otherwise; throws InputError for non-closed windows.
CohomologyReport cohomology_dims(const Window& w, const SectorFn& sector = nullptr, Exec exec = default_exec(),
                                 const StateLabels& labels = {});

struct StabilizationRow {
    int cutoff = 0;
    bool closed = false;
    std::size_t window_size = 0;
    CohomologyReport report;
};

struct StabilizationScan {
    std::vector<StabilizationRow> rows;
    /// Flags per charge (and per (charge, sector)) whose H dims agree at the last two cutoffs.
    std::vector<std::pair<ChargeEntry, bool>> charge_flags;
    std::vector<std::pair<ChargeEntry, bool>> sector_flags;
    bool conclusive() const;
};

/// builder(cutoff) returns a window; non-closed windows are recorded as inconclusive.
StabilizationScan stabilization_scan(const std::function<Window(int)>& builder, const std::vector<int>& cutoffs,
                                     const SectorFn& sector = nullptr, Exec exec = default_exec());

/// One row per (cutoff, charge) plus one per (cutoff, charge, sector).
std::string stabilization_csv(const StabilizationScan& scan);

// ---------------------------------------------------------------------------

enum class ComplexKind { Ordinary, Adjusted, OrdinaryTwisted };

/// The complex of n̂ (n from an admissible pair) with coefficients in V_k(g) and β_e:
/// Ordinary uses d^{β_e}, Adjusted uses d̄^{β_e}, OrdinaryTwisted uses d^0 on V_k(g) ⊗ F_{β_e}.
struct WComplex {
    ComplexKind kind = ComplexKind::Adjusted;
    BrstSetup setup;
    LazyOperator d;
    MonomialSpace space;
    std::optional<WeightData> weight;
    StateLabels labels;
    std::shared_ptr<const VacuumAction> vacuum;
    std::shared_ptr<const TwistedAction> twisted;
    std::shared_ptr<const BosonSector> sector;  // F_{β_e}, built for every kind
    OneForm beta;  // β_e unless overridden
};

/// Throws PreconditionFailure when [n, n] ⊄ m for the adjusted kinds. A beta override replaces
/// β_e (for OrdinaryTwisted it is the twist β'); the weight grading is kept only for β_e and 0.
WComplex build_w_complex(const ReductionDatum& datum, const AdmissiblePair& pair, const Rat& level,
                         const Polarization& pol, ComplexKind kind,
                         const std::optional<OneForm>& beta_override = std::nullopt);

/// Seeds of energy ≤ cutoff (bosons ≤ max_bosons) grown to closure under the complex's d.
Window w_window(const WComplex& c, int cutoff, int max_bosons, std::size_t budget, Exec exec = default_exec());

SectorFn weight_sector(const WComplex& c);

std::string kind_name(ComplexKind k);

}  // namespace brstkit
