#pragma once

// Canonical monomials of M ⊗ Λ^{∞/2+•}L* ⊗ F and finite linear combinations of them.

#include "brstkit/affine.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace brstkit {

enum class Family : std::uint8_t { Iota = 0, Eps = 1 };

/// ι(u_{idx,mode}) or ε(u*_{idx,mode}). Ordered by (mode, family, idx).
struct FermionSym {
    int mode;
    Family family;
    std::uint32_t idx;
    auto operator<=>(const FermionSym&) const = default;
};

/// ϵ(f_idx ⊗ t^mode), f_idx a basis vector of the complement F.
struct BosonSym {
    int mode;
    std::uint32_t idx;
    auto operator<=>(const BosonSym&) const = default;
};

struct TensorMono {
    CurrentMono cur;               // vacuum-module part, sorted
    std::vector<FermionSym> fer;   // strictly increasing
    std::vector<BosonSym> bos;     // sorted, repeats allowed
    auto operator<=>(const TensorMono&) const = default;
};

using TensorState = std::map<TensorMono, Rat>;

void add_term(TensorState& s, const TensorMono& m, const Rat& c);
void add_scaled(TensorState& s, const TensorState& t, const Rat& c);
TensorState scaled(const TensorState& s, const Rat& c);
TensorState difference(const TensorState& a, const TensorState& b);
inline TensorState from_mono(const TensorMono& m) { return {{m, Rat(1)}}; }

/// (#ε) - (#ι).
int charge_degree(const TensorMono& m);

/// Symbol labels used when rendering states.
struct StateLabels {
    std::vector<std::string> current;  // basis of g
    std::vector<std::string> loop;     // basis of n
    std::vector<std::string> boson;    // basis of F
};

/// E.g. "3/2 e_{-1} h_{-1} ι(f,0) ε(f*,-2) ϵ(F1,0)"; "|0>" for the vacuum monomial.
std::string render(const TensorMono& m, const StateLabels& labels);
std::string render(const TensorState& s, const StateLabels& labels);

}  // namespace brstkit
