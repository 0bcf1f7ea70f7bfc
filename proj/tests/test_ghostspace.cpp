#include "support.hpp"

#include "brstkit/errors.hpp"

#include <doctest.h>

using namespace tk;

namespace {

struct Sl3Ghosts {
    ReductionDatum d = sl3_minimal();
    std::shared_ptr<const LoopAlgebra> loop = loop_over(d.alg, {"E21", "E32", "E31"});
    OneForm beta = beta_e(d, *loop);
    LoopElement x(std::size_t i, int n) const { return loop->mode_element(i, n); }
};

std::vector<TensorMono> ghost_pool(std::size_t rank, const Polarization& pol, int energy, std::size_t boson_dim = 0,
                                   int bosons = 0) {
    return enumerate_monomials(MonomialSpace{0, rank, boson_dim, pol}, energy, bosons);
}

std::vector<FermionSym> generators(std::size_t rank, int lo, int hi) {
    std::vector<FermionSym> g;
    for (int n = lo; n <= hi; ++n)
        for (std::uint32_t i = 0; i < rank; ++i) {
            g.push_back(iota_sym(i, n));
            g.push_back(eps_sym(i, n));
        }
    return g;
}

LazyOperator gen_op(const Polarization& pol, std::size_t rank, const FermionSym& g) {
    if (g.family == Family::Iota) return iota_op(pol, LoopElement{g.mode, unit_vec(rank, g.idx)});
    return eps_op(pol, unit_vec(rank, g.idx), g.mode);
}

}  // namespace

TEST_CASE("polarizations") {
    auto s = sec1();
    CHECK(s.iota_from == 1);
    CHECK(s.eps_from == -1);
    CHECK(s.boson_from == 1);
    auto k = kw();
    CHECK(k.iota_from == 0);
    CHECK(k.eps_from == 0);
    CHECK_THROWS_AS(Polarization::preset("other"), InputError);
    CHECK_THROWS_AS(Polarization::custom(1, 1, 1), InputError);
    CHECK(Polarization::custom(2, -2, 1).iota_from == 2);
    // A creation's partner is an annihilator and conversely.
    for (auto pol : {s, k})
        for (const auto& g : generators(2, -4, 4)) CHECK(pol.annihilates(g) != pol.annihilates(partner(g)));
}

TEST_CASE("Clifford action examples") {
    const auto pol = sec1();
    auto vac = from_mono(vacuum());
    CHECK(clifford_act(pol, iota_sym(0, 1), vac).empty());

    auto e1 = clifford_act(pol, eps_sym(0, -2), vac);
    CHECK(clifford_act(pol, eps_sym(0, -2), e1).empty());

    auto r = clifford_act(pol, iota_sym(0, 1), e1);
    REQUIRE(r.size() == 1);
    CHECK(r.begin()->first == vacuum());
    CHECK(r.begin()->second == 1);

    // Koszul sign: ε(b) ι(a) ω_0 = -ι(a) ε(b) ω_0 in canonical form.
    auto ab = clifford_act(pol, eps_sym(1, -3), clifford_act(pol, iota_sym(0, -1), vac));
    auto ba = clifford_act(pol, iota_sym(0, -1), clifford_act(pol, eps_sym(1, -3), vac));
    CHECK(same(ab, scaled(ba, -1)));
}

TEST_CASE("Clifford action agrees with a bubble-sort wedge model") {
    const std::size_t rank = 2;
    for (auto pol : {sec1(), kw()}) {
        Wedge w{pol};
        auto states = pick(ghost_pool(rank, pol, 4), 100, 3);
        for (const auto& g : generators(rank, -4, 3))
            for (const auto& s : states) {
                auto got = clifford_act(pol, g, from_mono(s));
                auto fer = s.fer;
                int sign = 1;
                TensorState want;
                if (w.apply(g, fer, sign)) {
                    TensorMono t = s;
                    t.fer = fer;
                    add_term(want, t, Rat(sign));
                }
                CHECK(same(got, want));
            }
    }
}

TEST_CASE("Clifford relations on 100 states") {
    const std::size_t rank = 3;
    for (auto pol : {sec1(), kw()}) {
        auto states = pick(ghost_pool(rank, pol, 4), 100, 5);
        REQUIRE(states.size() == 100);
        const auto gens = generators(rank, -3, 2);
        std::size_t checked = 0;
        for (const auto& a : gens)
            for (const auto& b : gens) {
                auto anti = supercommutator(gen_op(pol, rank, a), gen_op(pol, rank, b));
                const Rat expect = a.family != b.family && a.idx == b.idx && b.mode == -a.mode - 1 ? 1 : 0;
                for (const auto& s : states) {
                    auto r = anti.apply(s);
                    add_term(r, s, -expect);
                    CHECK(r.empty());
                    ++checked;
                }
            }
        CHECK(checked == gens.size() * gens.size() * 100);
    }
}

TEST_CASE("normal ordering examples") {
    const auto pol = sec1();
    auto w1 = normal_order(pol, {iota_sym(0, -1), eps_sym(0, 0)});
    CHECK(w1.sign == 1);
    CHECK(w1.letters == std::vector<FermionSym>{iota_sym(0, -1), eps_sym(0, 0)});

    auto w2 = normal_order(pol, {iota_sym(0, 2), eps_sym(0, -3)});
    CHECK(w2.sign == -1);
    CHECK(w2.letters == std::vector<FermionSym>{eps_sym(0, -3), iota_sym(0, 2)});

    auto w3 = normal_order(pol, {eps_sym(0, -5), eps_sym(1, 4)});
    CHECK(w3.sign == 1);
    CHECK(w3.letters == std::vector<FermionSym>{eps_sym(0, -5), eps_sym(1, 4)});

    // A normal-ordered annihilator-creation pair acts as zero on the vacuum only through the annihilator.
    std::vector<FermionSym> fer;
    int sign = 1;
    CHECK_FALSE(apply_normal_ordered(pol, {iota_sym(0, 2), eps_sym(0, -3)}, fer, sign));
    fer.clear();
    sign = 1;
    CHECK(apply_word(pol, {iota_sym(0, 2), eps_sym(0, -3)}, fer, sign));
    CHECK(fer.empty());
}

TEST_CASE("rho on the vacuum") {
    Sl3Ghosts s;
    // Abelian n with β = 0.
    auto ab = loop_over(s.d.alg, {"E31", "E21"});
    for (int n = -3; n <= 3; ++n)
        for (std::size_t i = 0; i < 2; ++i) CHECK(rho(ab, sec1(), {}, ab->mode_element(i, n)).apply(vacuum()).empty());

    // Nonzero modes against the coadjoint form, summed by brute force.
    for (auto pol : {sec1(), kw()})
        for (int p = -3; p <= 3; ++p)
            for (std::size_t i = 0; i < 3; ++i) {
                auto x = s.x(i, p);
                auto got = rho(s.loop, pol, s.beta, x).apply(vacuum());
                CHECK(same(got, rho_coadjoint(*s.loop, pol, s.beta, x, vacuum(), 10)));
            }
    // E21⊗t^{-3} creates three terms under sec1.
    CHECK(rho(s.loop, sec1(), s.beta, s.x(0, -3)).apply(vacuum()).size() == 3);

    // Degree zero under sec1: ρ(x_0) ω_0 = β(x_0) ω_0 for a β supported at mode 0.
    OneForm b0;
    b0.set(0, 0, 5);
    b0.set(2, 0, -2);
    for (std::size_t i = 0; i < 3; ++i) {
        auto r = rho(s.loop, sec1(), b0, s.x(i, 0)).apply(vacuum());
        TensorState want;
        add_term(want, vacuum(), b0(s.x(i, 0)));
        CHECK(same(r, want));
    }
}

TEST_CASE("rho agrees with the coadjoint form on states") {
    Sl3Ghosts s;
    for (auto pol : {sec1(), kw()}) {
        auto states = pick(ghost_pool(3, pol, 3), 30, 8);
        for (int p = -2; p <= 2; ++p)
            for (std::size_t i = 0; i < 3; ++i)
                for (const auto& st : states) {
                    auto x = s.x(i, p);
                    CHECK(same(rho(s.loop, pol, s.beta, x).apply(st), rho_coadjoint(*s.loop, pol, s.beta, x, st, 10)));
                }
    }
}

TEST_CASE("rho realizes the coadjoint action on generators") {
    Sl3Ghosts s;
    std::mt19937_64 rng(4);
    for (auto pol : {sec1(), kw()}) {
        auto states = pick(ghost_pool(3, pol, 3), 10, 12);
        for (int t = 0; t < 20; ++t) {
            const auto xi = rng() % 3, yi = rng() % 3;
            const int xp = static_cast<int>(rng() % 5) - 2, yp = static_cast<int>(rng() % 5) - 2;
            auto x = s.x(xi, xp), y = s.x(yi, yp);
            auto r = rho(s.loop, pol, s.beta, x);
            auto c_iota = supercommutator(r, iota_op(pol, y));
            auto want_iota = iota_op(pol, s.loop->bracket(x, y));
            auto [zc, zm] = coadjoint(*s.loop, x, unit_vec(3, yi), yp);
            auto c_eps = supercommutator(r, eps_op(pol, unit_vec(3, yi), yp));
            auto want_eps = eps_op(pol, zc, zm);
            for (const auto& st : states) {
                CHECK(same(c_iota.apply(st), want_iota.apply(st)));
                CHECK(same(c_eps.apply(st), want_eps.apply(st)));
            }
        }
    }
}

TEST_CASE("rho window is stable under widening") {
    Sl3Ghosts s;
    for (auto pol : {sec1(), kw()})
        for (const auto& st : pick(ghost_pool(3, pol, 3), 30, 2))
            for (int p = -2; p <= 2; ++p)
                for (std::size_t i = 0; i < 3; ++i) {
                    auto base = rho(s.loop, pol, s.beta, s.x(i, p)).apply(st);
                    for (int w = 1; w <= 2; ++w) CHECK(same(base, rho(s.loop, pol, s.beta, s.x(i, p), w).apply(st)));
                }
}

TEST_CASE("gamma fixtures") {
    Sl3Ghosts s;
    for (auto pol : {sec1(), kw()}) {
        CHECK(gamma(s.loop, pol, s.beta, s.x(0, 0), s.x(1, -1)) == 6);
        CHECK(gamma(s.loop, pol, s.beta, s.x(0, 0), s.x(1, 0)) == 0);
        CHECK(gamma(s.loop, pol, s.beta, s.x(1, -1), s.x(0, 0)) == -6);
    }
    // Oracle: -β_e([E21, E32] ⊗ t^{-1}) = β_e(E31 ⊗ t^{-1}) = (E13 | E31).
    CHECK(adjoint_trace(*s.d.alg, s.d.e, el(*s.d.alg, "E31")) == 6);
}

TEST_CASE("gamma closed form, skew symmetry and mode support") {
    Sl3Ghosts s;
    AnomalyForm closed{s.loop, s.beta};
    for (auto pol : {sec1(), kw()})
        for (int p = -3; p <= 3; ++p)
            for (int q = -3; q <= 3; ++q)
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = 0; j < 3; ++j) {
                        const Rat g = gamma(s.loop, pol, s.beta, s.x(i, p), s.x(j, q));
                        CHECK(g == closed(s.x(i, p), s.x(j, q)));
                        CHECK(g == -gamma(s.loop, pol, s.beta, s.x(j, q), s.x(i, p)));
                        if (p + q != -1) CHECK(g == 0);
                    }
}

TEST_CASE("gamma is a 2-cocycle and central") {
    Sl3Ghosts s;
    std::mt19937_64 rng(19);
    auto rand_mode = [&] {
        LoopElement x{static_cast<int>(rng() % 5) - 2, RatVec(3)};
        for (auto& c : x.coeffs) c = random_rat(rng, 2);
        return x;
    };
    auto g = [&](const LoopElement& a, const LoopElement& b) {
        if (is_zero_vec(a.coeffs) || is_zero_vec(b.coeffs)) return Rat(0);
        return gamma(s.loop, sec1(), s.beta, a, b);
    };
    for (int t = 0; t < 20; ++t) {
        auto x = rand_mode(), y = rand_mode(), z = rand_mode();
        CHECK(g(s.loop->bracket(x, y), z) + g(s.loop->bracket(y, z), x) + g(s.loop->bracket(z, x), y) == 0);
    }
    AnomalyForm closed{s.loop, s.beta};
    auto states = pick(ghost_pool(3, sec1(), 3), 5, 6);
    for (int t = 0; t < 20; ++t) {
        auto x = rand_mode(), y = rand_mode();
        for (const auto& st : states) CHECK(gamma_defect(s.loop, sec1(), s.beta, x, y, closed(x, y), st).empty());
    }
}

TEST_CASE("gamma vanishes for beta = 0 on nilpotent loops") {
    Sl3Ghosts s;
    auto d4 = sl4_principal();
    auto loop4 = LoopAlgebra::create(d4.alg, default_pair(d4).n);
    std::mt19937_64 rng(23);
    for (const auto& loop : {s.loop, loop4})
        for (auto pol : {sec1(), kw()})
            for (int t = 0; t < 20; ++t) {
                auto x = loop->mode_element(rng() % loop->rank(), static_cast<int>(rng() % 7) - 3);
                auto y = loop->mode_element(rng() % loop->rank(), static_cast<int>(rng() % 7) - 3);
                CHECK(gamma(loop, pol, {}, x, y) == 0);
            }
}

TEST_CASE("radical and complement") {
    Sl3Ghosts s;
    auto rad = gamma_radical(*s.loop, s.beta);
    CHECK(span_equal(rad, {unit_vec(3, 2)}, 3));
    auto f = complement_choice(*s.loop, rad);
    CHECK(f == std::vector<RatVec>{unit_vec(3, 0), unit_vec(3, 1)});

    auto all = gamma_radical(*s.loop, {});
    CHECK(all.size() == 3);
    CHECK(complement_choice(*s.loop, all).empty());

    auto d2 = sl2_principal();
    auto loop2 = loop_over(d2.alg, {"f"});
    auto rad2 = gamma_radical(*loop2, beta_e(d2, *loop2));
    CHECK(rad2.size() == 1);
    CHECK(complement_choice(*loop2, rad2).empty());

    OneForm two;
    two.set(0, -1, 1);
    two.set(0, 0, 1);
    CHECK_THROWS_AS(gamma_radical(*s.loop, two), InputError);
    CHECK_THROWS_AS(BosonSector(s.loop, s.beta, {unit_vec(3, 0)}, rad), InputError);
}

TEST_CASE("Heisenberg action examples") {
    Sl3Ghosts s;
    auto rad = gamma_radical(*s.loop, s.beta);
    BosonSector sec(s.loop, s.beta, complement_choice(*s.loop, rad), rad);
    const auto pol = sec1();
    auto vac = from_mono(vacuum());
    CHECK(heisenberg_act(pol, sec, s.x(0, 2), vac).empty());

    auto y = heisenberg_act(pol, sec, s.x(1, -2), vac);
    auto r = heisenberg_act(pol, sec, s.x(0, 1), y);
    TensorState want;
    add_term(want, vacuum(), -6);
    CHECK(same(r, want));

    // ϵ(x_0) ϵ(y_{-1}) vac: the canonical monomial plus the scalar -γ(x_0, y_{-1}) = -6.
    auto xy = heisenberg_act(pol, sec, s.x(0, 0), heisenberg_act(pol, sec, s.x(1, -1), vac));
    TensorMono both;
    both.bos = {{-1, 1}, {0, 0}};
    TensorState want2;
    add_term(want2, both, 1);
    add_term(want2, vacuum(), -6);
    CHECK(same(xy, want2));

    // The radical acts as zero.
    for (int n = -3; n <= 3; ++n) CHECK(heisenberg_act(pol, sec, s.x(2, n), y).empty());
}

TEST_CASE("Heisenberg law on sampled states") {
    Sl3Ghosts s;
    auto rad = gamma_radical(*s.loop, s.beta);
    auto sec = std::make_shared<BosonSector>(s.loop, s.beta, complement_choice(*s.loop, rad), rad);
    AnomalyForm g{s.loop, s.beta};
    std::mt19937_64 rng(29);
    for (auto pol : {sec1(), kw()}) {
        auto states = pick(ghost_pool(3, pol, 3, 2, 2), 30, 31);
        for (int t = 0; t < 20; ++t) {
            LoopElement x{static_cast<int>(rng() % 7) - 3, random_element(rng, 3)};
            LoopElement y{static_cast<int>(rng() % 7) - 3, random_element(rng, 3)};
            auto comm = supercommutator(boson_op(pol, sec, x), boson_op(pol, sec, y));
            for (const auto& st : states) {
                auto r = comm.apply(st);
                add_term(r, st, g(x, y));
                CHECK(r.empty());
            }
        }
    }
}

TEST_CASE("charge degree") {
    CHECK(charge_degree(vacuum()) == 0);
    CHECK(charge_degree(fermions({iota_sym(0, 0), eps_sym(0, -2), eps_sym(1, -2)})) == 1);
    TensorMono b;
    b.bos = {{-1, 0}, {0, 1}};
    CHECK(charge_degree(b) == 0);
}

TEST_CASE("energy and rendering") {
    TensorMono m = fermions({iota_sym(0, -1), eps_sym(1, -3)});
    m.cur = {{-2, 0}};
    m.bos = {{0, 0}};
    CHECK(energy(m) == 2 + 1 + 2 + 0);
    StateLabels labels{{"a", "b"}, {"u", "v"}, {"F"}};
    CHECK(render(vacuum(), labels) == "|0>");
    CHECK(render(m, labels).find("ε(v*,-3)") != std::string::npos);
}
