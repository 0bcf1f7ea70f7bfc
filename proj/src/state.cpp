#include "brstkit/state.hpp"

#include <sstream>

namespace brstkit {

void add_term(TensorState& s, const TensorMono& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = s.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) s.erase(it);
    }
}

void add_scaled(TensorState& s, const TensorState& t, const Rat& c) {
    if (c == 0) return;
    for (const auto& [m, v] : t) add_term(s, m, v * c);
}

TensorState scaled(const TensorState& s, const Rat& c) {
    TensorState out;
    add_scaled(out, s, c);
    return out;
}

TensorState difference(const TensorState& a, const TensorState& b) {
    TensorState out = a;
    add_scaled(out, b, Rat(-1));
    return out;
}

int charge_degree(const TensorMono& m) {
    int c = 0;
    for (const auto& f : m.fer) c += f.family == Family::Eps ? 1 : -1;
    return c;
}

namespace {
std::string pick(const std::vector<std::string>& labels, std::uint32_t i, const char* fallback) {
    if (i < labels.size()) return labels[i];
    return fallback + std::to_string(i);
}
}  // namespace

std::string render(const TensorMono& m, const StateLabels& labels) {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << ' ';
        first = false;
    };
    for (const auto& c : m.cur) {
        sep();
        os << pick(labels.current, c.idx, "x") << "_{" << c.mode << "}";
    }
    for (const auto& f : m.fer) {
        sep();
        if (f.family == Family::Iota)
            os << "ι(" << pick(labels.loop, f.idx, "u") << "," << f.mode << ")";
        else
            os << "ε(" << pick(labels.loop, f.idx, "u") << "*," << f.mode << ")";
    }
    for (const auto& b : m.bos) {
        sep();
        os << "ϵ(" << pick(labels.boson, b.idx, "F") << "," << b.mode << ")";
    }
    if (first) os << "|0>";
    return os.str();
}

std::string render(const TensorState& s, const StateLabels& labels) {
    if (s.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : s) {
        if (!first) os << " + ";
        first = false;
        os << "(" << format_rat(c) << ") " << render(m, labels);
    }
    return os.str();
}

}  // namespace brstkit
