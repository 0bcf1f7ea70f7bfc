#include "brstkit/operator.hpp"

#include "brstkit/errors.hpp"

#include <memory>

namespace brstkit {

TensorState LazyOperator::apply(const TensorMono& m) const {
    TensorState out;
    apply_into(m, Rat(1), out);
    return out;
}

TensorState LazyOperator::apply(const TensorState& s) const {
    TensorState out;
    for (const auto& [m, c] : s) apply_into(m, c, out);
    return out;
}

LazyOperator zero_operator(int charge_shift) {
    return LazyOperator([](const TensorMono&, const Rat&, TensorState&) {}, charge_shift, "0");
}

LazyOperator identity_operator() {
    return LazyOperator([](const TensorMono& m, const Rat& c, TensorState& out) { add_term(out, m, c); }, 0, "1");
}

LazyOperator sum(const LazyOperator& a, const LazyOperator& b) {
    if (a.charge_shift() != b.charge_shift())
        throw InvariantViolation("sum of operators with different charge shifts: " + a.description() + ", " +
                                 b.description());
    return LazyOperator(
        [a, b](const TensorMono& m, const Rat& c, TensorState& out) {
            a.apply_into(m, c, out);
            b.apply_into(m, c, out);
        },
        a.charge_shift(), "(" + a.description() + " + " + b.description() + ")");
}

LazyOperator scale(const LazyOperator& a, const Rat& s) {
    return LazyOperator([a, s](const TensorMono& m, const Rat& c, TensorState& out) { a.apply_into(m, c * s, out); },
                        a.charge_shift(), format_rat(s) + "·" + a.description());
}

LazyOperator compose(const LazyOperator& a, const LazyOperator& b) {
    return LazyOperator(
        [a, b](const TensorMono& m, const Rat& c, TensorState& out) {
            for (const auto& [m2, c2] : b.apply(m)) a.apply_into(m2, c * c2, out);
        },
        a.charge_shift() + b.charge_shift(), a.description() + "∘" + b.description());
}

LazyOperator supercommutator(const LazyOperator& a, const LazyOperator& b) {
    const Rat sign = (a.odd() && b.odd()) ? Rat(1) : Rat(-1);
    return LazyOperator(
        [a, b, sign](const TensorMono& m, const Rat& c, TensorState& out) {
            for (const auto& [m2, c2] : b.apply(m)) a.apply_into(m2, c * c2, out);
            for (const auto& [m2, c2] : a.apply(m)) b.apply_into(m2, c * c2 * sign, out);
        },
        a.charge_shift() + b.charge_shift(), "[" + a.description() + ", " + b.description() + "]");
}

}  // namespace brstkit
