#pragma once

// Operators on tensor states given as rules on monomials.

#include "brstkit/state.hpp"

#include <functional>
#include <string>

namespace brstkit {

/// Adds coeff · (operator applied to mono) into out.
using MonoRule = std::function<void(const TensorMono& mono, const Rat& coeff, TensorState& out)>;

class LazyOperator {
public:
    LazyOperator() = default;
    LazyOperator(MonoRule rule, int charge_shift, std::string description)
        : rule_(std::move(rule)), shift_(charge_shift), desc_(std::move(description)) {}

    void apply_into(const TensorMono& m, const Rat& c, TensorState& out) const {
        if (rule_) rule_(m, c, out);
    }
    TensorState apply(const TensorMono& m) const;
    TensorState apply(const TensorState& s) const;

    int charge_shift() const { return shift_; }
    bool odd() const { return (shift_ % 2) != 0; }
    const std::string& description() const { return desc_; }

private:
    MonoRule rule_;
    int shift_ = 0;
    std::string desc_;
};

LazyOperator zero_operator(int charge_shift);
LazyOperator identity_operator();
/// Throws InvariantViolation when the charge shifts differ.
LazyOperator sum(const LazyOperator& a, const LazyOperator& b);
LazyOperator scale(const LazyOperator& a, const Rat& c);
/// a ∘ b.
LazyOperator compose(const LazyOperator& a, const LazyOperator& b);
/// ab - (-1)^{|a||b|} ba.
LazyOperator supercommutator(const LazyOperator& a, const LazyOperator& b);

}  // namespace brstkit
