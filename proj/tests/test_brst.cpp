#include "support.hpp"

#include "brstkit/errors.hpp"

#include <doctest.h>

using namespace tk;

namespace {

/// Stable partition of a word into creations then annihilators, with the permutation sign.
std::pair<int, std::vector<FermionSym>> order_word(const Wedge& w, const std::vector<FermionSym>& word) {
    std::vector<FermionSym> cre, ann;
    int sign = 1;
    for (const auto& l : word) {
        if (w.annihilates(l)) {
            ann.push_back(l);
        } else {
            if (ann.size() % 2) sign = -sign;
            cre.push_back(l);
        }
    }
    cre.insert(cre.end(), ann.begin(), ann.end());
    return {sign, cre};
}

/// coeff · :word: applied to the fermions of m (rightmost letter first).
void apply_normal(const Wedge& w, const std::vector<FermionSym>& word, const Rat& coeff, const TensorMono& m,
                  TensorState& out) {
    auto [sign, letters] = order_word(w, word);
    auto fer = m.fer;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        if (!w.apply(*it, fer, sign)) return;
    TensorMono t = m;
    t.fer = fer;
    add_term(out, t, sign > 0 ? coeff : Rat(-coeff));
}

/// d^β by brute force over modes |n| ≤ reach:
/// Σ u_{a,n} ε(u*_{a,-n-1}) - 1/2 Σ :ι([u_{a,n}, u_{b,m}]) ε(u*_{a,-n-1}) ε(u*_{b,-m-1}): + Σ β(u_{a,n}) ε(u*_{a,-n-1}).
TensorState brute_d(const LoopAlgebra& loop, const VacuumModule* vac, const Polarization& pol, const OneForm& beta,
                    const TensorMono& s, int reach) {
    Wedge w{pol};
    TensorState out;
    const auto r = static_cast<std::uint32_t>(loop.rank());
    for (int n = -reach; n <= reach; ++n)
        for (std::uint32_t a = 0; a < r; ++a) {
            TensorState ghost;
            apply_normal(w, {eps_sym(a, -n - 1)}, 1, s, ghost);
            for (const auto& [t, c] : ghost) {
                if (vac)
                    for (const auto& [cur, c2] : vac->act_mono(loop.basis(a), n, t.cur)) {
                        TensorMono u = t;
                        u.cur = cur;
                        add_term(out, u, c * c2);
                    }
                const Rat b = beta(a, n);
                if (b != 0) add_term(out, t, c * b);
            }
        }
    for (int n = -reach; n <= reach; ++n)
        for (int m = -reach; m <= reach; ++m)
            for (std::uint32_t a = 0; a < r; ++a)
                for (std::uint32_t b = 0; b < r; ++b) {
                    const RatVec br = loop.structure(a, b);
                    for (std::uint32_t c = 0; c < r; ++c)
                        if (br[c] != 0)
                            apply_normal(w, {iota_sym(c, n + m), eps_sym(a, -n - 1), eps_sym(b, -m - 1)},
                                         Rat(-1, 2) * br[c], s, out);
                }
    return out;
}

struct Instance {
    ReductionDatum d;
    WComplex c;
    Window w;
};

Instance sl3_instance(ComplexKind kind, const Polarization& pol, int cutoff = 1, int bosons = 1) {
    auto d = sl3_minimal();
    auto c = build_w_complex(d, default_pair(d), 1, pol, kind);
    auto w = w_window(c, cutoff, bosons, 50000);
    return {d, c, w};
}

std::vector<LoopElement> modes(const LoopAlgebra& loop, int max_mode) {
    std::vector<LoopElement> xs;
    for (int n = -max_mode; n <= max_mode; ++n)
        for (std::size_t i = 0; i < loop.rank(); ++i) xs.push_back(loop.mode_element(i, n));
    return xs;
}

std::vector<std::pair<LoopElement, LoopElement>> random_pairs(const LoopAlgebra& loop, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<LoopElement, LoopElement>> out;
    for (int k = 0; k < count; ++k) {
        auto x = loop.mode_element(rng() % loop.rank(), static_cast<int>(rng() % 5) - 2);
        auto y = loop.mode_element(rng() % loop.rank(), static_cast<int>(rng() % 5) - 2);
        out.emplace_back(x, y);
    }
    return out;
}

}  // namespace

TEST_CASE("theta examples") {
    auto d = sl3_minimal();
    auto ab = loop_over(d.alg, {"E31", "E21"});
    auto vac = std::make_shared<VacuumModule>(d.alg, 1);
    BrstSetup s{ab, sec1(), {}, std::make_shared<VacuumAction>(vac, ab), nullptr};
    for (int n = -2; n <= 2; ++n)
        for (std::size_t i = 0; i < 2; ++i) {
            auto got = theta(s, ab->mode_element(i, n)).apply(vacuum());
            TensorState want;
            for (const auto& [cur, c] : vac->act_mono(ab->basis(i), n, {})) {
                TensorMono t;
                t.cur = cur;
                add_term(want, t, c);
            }
            CHECK(same(got, want));
        }

    // sl2: θ(f_{-1}) on the vacuum tensor is f_{-1}|0> + β_e(f_{-1}) |0>.
    auto d2 = sl2_principal();
    auto lf = loop_over(d2.alg, {"f"});
    auto v2 = std::make_shared<VacuumModule>(d2.alg, 1);
    BrstSetup s2{lf, sec1(), beta_e(d2, *lf), std::make_shared<VacuumAction>(v2, lf), nullptr};
    auto got = theta(s2, lf->mode_element(0, -1)).apply(vacuum());
    TensorMono f1;
    f1.cur = {{-1, static_cast<std::uint32_t>(*d2.alg->index_of("f"))}};
    TensorState want;
    add_term(want, f1, 1);
    add_term(want, vacuum(), 4);
    CHECK(same(got, want));
}

TEST_CASE("theta commutes with iota into iota of the bracket") {
    auto in = sl3_instance(ComplexKind::Ordinary, kw());
    const auto& s = in.c.setup;
    auto states = pick(in.w.basis, 20, 3);
    for (const auto& [x, y] : random_pairs(*s.loop, 20, 5)) {
        auto lhs = supercommutator(theta(s, x), iota_op(s.pol, y));
        auto rhs = iota_op(s.pol, s.loop->bracket(x, y));
        for (const auto& st : states) CHECK(same(lhs.apply(st), rhs.apply(st)));
    }
}

TEST_CASE("d on the sl2 vacuum agrees with the brute-force sum") {
    auto d2 = sl2_principal();
    auto lf = loop_over(d2.alg, {"f"});
    auto vac = std::make_shared<VacuumModule>(d2.alg, 1);
    for (auto pol : {sec1(), kw()}) {
        BrstSetup s{lf, pol, {}, std::make_shared<VacuumAction>(vac, lf), nullptr};
        auto d = d_ordinary(s);
        auto r = d.apply(vacuum());
        CHECK(same(r, brute_d(*lf, vac.get(), pol, {}, vacuum(), 10)));
        for (const auto& [m, c] : r) CHECK(charge_degree(m) == 1);
    }
}

TEST_CASE("d agrees with the brute-force sum on window states") {
    for (auto pol : {sec1(), kw()}) {
        auto in = sl3_instance(ComplexKind::Ordinary, pol);
        const auto& s = in.c.setup;
        const auto& vac = in.c.vacuum->module();
        for (const auto& st : pick(in.w.basis, 25, 7))
            CHECK(same(in.c.d.apply(st), brute_d(*s.loop, &vac, pol, in.c.beta, st, 8)));
    }
}

TEST_CASE("[d, iota(x)] = theta(x)") {
    auto d2 = sl2_principal();
    auto lf = loop_over(d2.alg, {"f"});
    auto vac = std::make_shared<VacuumModule>(d2.alg, 1);
    BrstSetup s{lf, sec1(), {}, std::make_shared<VacuumAction>(vac, lf), nullptr};
    auto d = d_ordinary(s);
    auto w = grow_window(d, enumerate_monomials({d2.dim(), 1, 0, s.pol}, 3), 10000);
    auto states = pick(w.basis, 10, 1);
    REQUIRE(states.size() == 10);
    auto f0 = lf->mode_element(0, 0);
    auto lhs = supercommutator(d, iota_op(s.pol, f0));
    auto rhs = theta(s, f0);
    for (const auto& st : states) CHECK(same(lhs.apply(st), rhs.apply(st)));
    CHECK(verify_commutator(d, s, false, modes(*lf, 2), states).ok());

    // Also for the non-abelian ordinary complex.
    auto in = sl3_instance(ComplexKind::Ordinary, sec1());
    CHECK(verify_commutator(in.c.d, in.c.setup, false, modes(*in.c.setup.loop, 2), pick(in.w.basis, 20, 2)).ok());
}

TEST_CASE("abelian loop with beta = 0 squares to zero") {
    auto d = sl3_minimal();
    auto ab = loop_over(d.alg, {"E31", "E21"});
    auto vac = std::make_shared<VacuumModule>(d.alg, 1);
    BrstSetup s{ab, kw(), {}, std::make_shared<VacuumAction>(vac, ab), nullptr};
    auto dd = d_ordinary(s);
    auto states = enumerate_monomials({d.dim(), ab->rank(), 0, s.pol}, 2);
    CHECK(verify_square_zero(dd, states).ok());
}

TEST_CASE("square-zero sweeps") {
    // sl2 principal, ordinary d on 200 window states.
    auto d2 = sl2_principal();
    auto c2 = build_w_complex(d2, default_pair(d2), 1, sec1(), ComplexKind::Ordinary);
    auto w2 = w_window(c2, 4, 0, 100000);
    REQUIRE(w2.closed);
    auto s200 = pick(w2.basis, 200, 1);
    CHECK(s200.size() == 200);
    CHECK(verify_square_zero(c2.d, s200).ok());

    // sl3 minimal ordinary d fails somewhere; the adjusted one does not.
    auto ord = sl3_instance(ComplexKind::Ordinary, sec1());
    auto r = verify_square_zero(ord.c.d, ord.w.basis, ord.c.labels);
    CHECK_FALSE(r.ok());
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK_FALSE(r.witnesses.front().residual.empty());

    auto adj = sl3_instance(ComplexKind::Adjusted, sec1());
    CHECK(verify_square_zero(adj.c.d, adj.w.basis).ok());
    // Depth-3 window under kw.
    auto adj3 = sl3_instance(ComplexKind::Adjusted, kw(), 3, 0);
    REQUIRE(adj3.w.closed);
    CHECK(verify_square_zero(memoize(adj3.c.d), adj3.w.basis).ok());
}

TEST_CASE("d-bar requires [n, n] inside the radical") {
    auto in = sl3_instance(ComplexKind::Adjusted, sec1());
    CHECK_FALSE(bracket_outside_radical(*in.c.setup.loop, in.c.sector->radical()));

    auto d4 = sl4_principal();
    auto loop = LoopAlgebra::create(d4.alg, default_pair(d4).n);
    OneForm beta;
    for (std::size_t i = 0; i < loop->rank(); ++i)
        if (loop->label(i) == "E41") beta.set(i, -1, 1);
    REQUIRE_FALSE(beta.is_zero());
    auto rad = gamma_radical(*loop, beta);
    auto sector = std::make_shared<BosonSector>(loop, beta, complement_choice(*loop, rad), rad);
    auto vac = std::make_shared<VacuumModule>(d4.alg, 1);
    BrstSetup s{loop, sec1(), beta, std::make_shared<VacuumAction>(vac, loop), sector};
    auto why = bracket_outside_radical(*loop, rad);
    REQUIRE(why);
    CHECK(why->find("[") != std::string::npos);
    CHECK_THROWS_AS(d_adjusted(s), PreconditionFailure);
    BrstSetup no_bosons{loop, sec1(), {}, std::make_shared<VacuumAction>(vac, loop), nullptr};
    CHECK_THROWS_AS(d_adjusted(no_bosons), InputError);
    CHECK_THROWS_AS(theta_bar(no_bosons, loop->mode_element(0, 0)), InputError);
}

TEST_CASE("d-bar commutator, homomorphism and rho-bar laws") {
    for (auto pol : {sec1(), kw()}) {
        auto in = sl3_instance(ComplexKind::Adjusted, pol);
        const auto& s = in.c.setup;
        auto states = pick(in.w.basis, 20, 11);
        CHECK(verify_commutator(in.c.d, s, true, modes(*s.loop, 2), states).ok());
        auto pairs = random_pairs(*s.loop, 20, 13);
        CHECK(verify_homomorphism(s, true, pairs, states).ok());
        CHECK(verify_rhobar(s, pairs, states).ok());
        // The radical: θ̄(x) = θ(x).
        for (int n = -2; n <= 2; ++n) {
            LoopElement x{n, s.loop->coords(el(*in.d.alg, "E31"))};
            auto a = theta_bar(s, x), b = theta(s, x);
            for (const auto& st : states) CHECK(same(a.apply(st), b.apply(st)));
        }
    }
}

TEST_CASE("ordinary theta fails the homomorphism law when gamma is nonzero") {
    auto in = sl3_instance(ComplexKind::Ordinary, sec1());
    const auto& s = in.c.setup;
    auto e21 = s.loop->coords(el(*in.d.alg, "E21")), e32 = s.loop->coords(el(*in.d.alg, "E32"));
    std::vector<std::pair<LoopElement, LoopElement>> pairs{{{0, e21}, {-1, e32}}};
    CHECK_FALSE(verify_homomorphism(s, false, pairs, pick(in.w.basis, 5, 1)).ok());
}

TEST_CASE("basis independence") {
    auto in = sl3_instance(ComplexKind::Adjusted, sec1());
    const auto& s = in.c.setup;
    auto states = pick(in.w.basis, 20, 17);
    const auto degrees = s.loop->basis_degrees(in.d.grading);
    REQUIRE(degrees);
    // The loop basis is (E31, E21, E32).
    CHECK(s.loop->label(1) == "E21");
    auto perm = identity_matrix(3);
    perm[1][1] = perm[2][2] = 0;
    perm[1][2] = perm[2][1] = 1;
    auto sc = identity_matrix(3);
    sc[1][1] = 3;
    sc[2][2] = Rat(1, 3);
    for (const auto& t : {identity_matrix(3), perm, sc}) {
        CHECK_NOTHROW(frame_from_transform(t, degrees));
        CHECK(verify_basis_independence(s, true, t, states).ok());
        CHECK(verify_basis_independence(s, false, t, states).ok());
    }
    auto mixed = identity_matrix(3);
    mixed[0][1] = 1;
    CHECK_THROWS_AS(frame_from_transform(mixed, degrees), InputError);
    RatMatrix singular(3, RatVec(3, Rat(0)));
    CHECK_THROWS_AS(frame_from_transform(singular, std::nullopt), InputError);

    // A dual frame really is dual.
    auto f = frame_from_transform(sc, degrees);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            Rat p = 0;
            for (std::size_t i = 0; i < 3; ++i) p += f.e[a][i] * f.dual[b][i];
            CHECK(p == (a == b ? 1 : 0));
        }
    CHECK(verify_pair_forms(s, true, states).ok());
    CHECK(verify_pair_forms(s, false, states).ok());
}

TEST_CASE("uniqueness") {
    auto in = sl3_instance(ComplexKind::Adjusted, sec1());
    const auto& s = in.c.setup;
    auto states = pick(in.w.basis, 15, 19);
    auto xs = modes(*s.loop, 2);

    auto r0 = verify_uniqueness(in.c.d, zero_operator(1), s, xs, states);
    CHECK(r0.hypothesis_holds);
    CHECK(r0.perturbation_vanishes);
    CHECK(r0.implication_ok());

    auto eps = scale(eps_op(s.pol, unit_vec(3, 0), -2), 2);
    auto r1 = verify_uniqueness(in.c.d, eps, s, xs, states);
    CHECK_FALSE(r1.hypothesis_holds);
    CHECK(r1.implication_ok());

    auto sc = identity_matrix(3);
    sc[1][1] = 3;
    sc[2][2] = Rat(1, 3);
    DiffOptions o;
    o.frame = frame_from_transform(sc, std::nullopt);
    auto diff = sum(d_adjusted(s, o), scale(in.c.d, -1));
    auto r2 = verify_uniqueness(in.c.d, diff, s, xs, states);
    CHECK(r2.hypothesis_holds);
    CHECK(r2.perturbation_vanishes);
}

TEST_CASE("twisted action") {
    auto in = sl3_instance(ComplexKind::OrdinaryTwisted, sec1());
    const auto& loop = in.c.setup.loop;
    auto be = beta_e(in.d, *loop);
    CHECK_FALSE(twisted_precondition(*loop, be));
    auto pool = enumerate_monomials({in.d.dim(), 0, in.c.sector->dim(), sec1()}, 2, 2);
    auto states = pick(pool, 20, 23);
    auto pairs = random_pairs(*loop, 20, 29);
    CHECK(verify_twisted_action(*in.c.twisted, *in.c.vacuum, *loop, be, pairs, states).ok());

    // x, y in the radical: the ordinary law.
    std::vector<std::pair<LoopElement, LoopElement>> rad_pairs;
    const auto e31 = loop->coords(el(*in.d.alg, "E31"));
    for (int n = -2; n <= 2; ++n) rad_pairs.push_back({{n, e31}, {-n - 1, e31}});
    CHECK(verify_twisted_action(*in.c.twisted, *in.c.vacuum, *loop, be, rad_pairs, states).ok());

    // An abelian loop has ∂β' = 0: refused.
    auto ab = loop_over(in.d.alg, {"E31", "E21"});
    OneForm bp;
    bp.set(0, -1, 6);
    CHECK(twisted_precondition(*ab, bp));
    auto vac = std::make_shared<VacuumModule>(in.d.alg, 1);
    auto va = std::make_shared<VacuumAction>(vac, ab);
    auto rad = gamma_radical(*ab, bp);
    auto sector = std::make_shared<BosonSector>(ab, bp, complement_choice(*ab, rad), rad);
    TwistedAction tw(va, bp, sector, sec1());
    CHECK_THROWS_AS(verify_twisted_action(tw, *va, *ab, bp, random_pairs(*ab, 3, 1), states), PreconditionFailure);
}

TEST_CASE("charge bookkeeping") {
    auto in = sl3_instance(ComplexKind::Adjusted, kw());
    const auto& s = in.c.setup;
    auto states = pick(in.w.basis, 30, 31);
    CHECK(verify_charge(in.c.d, states).ok());
    for (const auto& x : modes(*s.loop, 1)) {
        CHECK(verify_charge(theta_bar(s, x), states).ok());
        CHECK(verify_charge(iota_op(s.pol, x), states).ok());
        CHECK(verify_charge(eps_op(s.pol, x.coeffs, x.mode), states).ok());
    }
    CHECK(in.c.d.charge_shift() == 1);
    CHECK(adjustment_term(s).charge_shift() == 1);
}

TEST_CASE("window stability") {
    for (auto kind : {ComplexKind::Adjusted, ComplexKind::Ordinary})
        for (auto pol : {sec1(), kw()}) {
            auto in = sl3_instance(kind, pol);
            CHECK(verify_window_stability(in.c.setup, kind == ComplexKind::Adjusted, 2, pick(in.w.basis, 30, 37)).ok());
        }
}

TEST_CASE("the failure of d^2 is the anomaly") {
    auto in = sl3_instance(ComplexKind::Ordinary, sec1());
    const auto& s = in.c.setup;
    auto pairs = random_pairs(*s.loop, 20, 41);
    auto e21 = s.loop->coords(el(*in.d.alg, "E21")), e32 = s.loop->coords(el(*in.d.alg, "E32"));
    pairs.push_back({{0, e21}, {-1, e32}});
    auto states = pick(in.w.basis, 5, 43);
    CHECK(verify_whynotzero(memoize(in.c.d), s, pairs, states).ok());

    // Directly for the fixture pair: [[d², ι(x)], ι(y)] = -γ(x, y) = -6.
    auto d2 = compose(in.c.d, in.c.d);
    auto probe = supercommutator(supercommutator(d2, iota_op(s.pol, {0, e21})), iota_op(s.pol, {-1, e32}));
    for (const auto& st : states) {
        TensorState want;
        add_term(want, st, -6);
        CHECK(same(probe.apply(st), want));
    }
}

TEST_CASE("even gradings: d-bar coincides with d") {
    for (auto d : {sl2_principal(), sl4_principal()}) {
        auto adj = build_w_complex(d, default_pair(d), 1, kw(), ComplexKind::Adjusted);
        auto ord = build_w_complex(d, default_pair(d), 1, kw(), ComplexKind::Ordinary);
        CHECK(adj.sector->dim() == 0);
        auto w = w_window(adj, d.dim() == 3 ? 4 : 2, 0, 100000);
        REQUIRE(w.closed);
        for (const auto& st : w.basis) CHECK(same(adj.d.apply(st), ord.d.apply(st)));
    }
}
