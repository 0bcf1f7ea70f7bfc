#include "support.hpp"

#include "brstkit/errors.hpp"

#include <doctest.h>

using namespace tk;

namespace {

std::vector<Element> span_of(const LieAlgebra& g, const std::vector<std::string>& labels) {
    std::vector<Element> out;
    for (const auto& l : labels) out.push_back(el(g, l));
    return out;
}

bool same_span(const LieAlgebra& g, const std::vector<Element>& a, const std::vector<std::string>& labels) {
    return span_equal(a, span_of(g, labels), g.dim());
}

}  // namespace

TEST_CASE("good gradings") {
    CHECK(is_good_grading(sl2_principal()).ok);
    auto r3 = is_good_grading(sl3_minimal());
    CHECK(r3.ok);
    CHECK(r3.e_in_g2);
    CHECK(is_good_grading(sl4_principal()).ok);
    auto g = sl(2);
    ReductionDatum trivial{g, Grading{{0, 0, 0}}, el(*g, "e"), 2};
    auto rt = is_good_grading(trivial);
    CHECK_FALSE(rt.e_in_g2);
    CHECK_FALSE(rt.ok);
}

TEST_CASE("reduction datum validation") {
    auto g = sl(3);
    auto gr = grading_from_element(*g, diag_element(*g, {1, 1}));
    CHECK_THROWS_AS(make_datum(g, gr, el(*g, "E13"), 3), InputError);
    CHECK_THROWS_AS(make_datum(g, gr, add_scaled(el(*g, "E13"), el(*g, "E12"), 1), 2), InputError);
    CHECK_THROWS_AS(make_datum(g, gr, Element(g->dim(), Rat(0)), 2), InputError);
    auto h = diag_element(*g, {1, 0});
    CHECK_FALSE(is_ad_nilpotent(*g, h));
    CHECK(is_ad_nilpotent(*g, el(*g, "E13")));
}

TEST_CASE("window form") {
    auto d = sl3_minimal();
    const auto& g = *d.alg;
    auto w = window_form(d, span_of(g, {"E21", "E32"})).to_dense();
    CHECK(w[0][1] == 6);
    CHECK(w[1][0] == -6);
    CHECK(w[0][0] == 0);
    CHECK(w[1][1] == 0);
    // Oracle: <x, y> = (e | [y, x]) through the matrix model.
    auto br = g.bracket(el(g, "E32"), el(g, "E21"));
    CHECK(Rat(6) * trace_product(sl_matrix(g, 3, d.e), sl_matrix(g, 3, br)) == 6);

    auto s = sl2_principal();
    auto empty = window_form(s, {});
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 0);

    CHECK_THROWS_AS(window_form(d, {add_scaled(el(g, "E21"), el(g, "E31"), 1)}), InputError);
    CHECK_THROWS_AS(window_form(d, {el(g, "E31")}), InputError);
}

TEST_CASE("window form is skew on random homogeneous bases") {
    auto d = sl4_minimal();
    const auto& g = *d.alg;
    std::mt19937_64 rng(5);
    auto low = graded_component(g, d.grading, -1);
    REQUIRE(low.size() == 4);
    for (int t = 0; t < 10; ++t) {
        std::vector<Element> vs;
        for (int k = 0; k < 3; ++k) {
            Element x(g.dim(), Rat(0));
            for (auto i : low) x[i] = random_rat(rng);
            if (!is_zero_vec(x)) vs.push_back(x);
        }
        auto m = window_form(d, vs).to_dense();
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j) CHECK(m[i][j] == -m[j][i]);
    }
}

TEST_CASE("window complement") {
    auto d = sl3_minimal();
    auto c = window_complement(d);
    CHECK(c.size() == 2);
    CHECK(same_span(*d.alg, c, {"E21", "E32"}));
    CHECK(negative_centralizer(d).empty());
    CHECK(criterion_star(d));

    CHECK(window_complement(sl2_principal()).empty());
    auto p4 = sl4_principal();
    CHECK(window_complement(p4).empty());
    for (int deg : p4.grading.degrees) CHECK(deg % 2 == 0);
}

TEST_CASE("form lemma") {
    auto d = sl3_minimal();
    auto c = window_complement(d);
    auto r = check_form_lemma(d, c);
    CHECK(r.nondegenerate);
    CHECK(r.symmetric_pairing);
    CHECK(r.rank == 2);
    CHECK(r.ok());

    CHECK(check_form_lemma(sl2_principal(), {}).ok());

    auto dropped = check_form_lemma(d, {c[0]});
    CHECK_FALSE(dropped.nondegenerate);
    CHECK_FALSE(dropped.ok());
}

TEST_CASE("dimension equality") {
    auto d = sl3_minimal();
    auto r = dim_equality_check(d, window_complement(d));
    CHECK(r.dim_complement == 2);
    CHECK(r.dim_low == 1);
    CHECK(r.rank_ad_e == 4);
    CHECK(r.ok);
    // Oracle: rank of the 8×8 matrix of ad E13.
    CHECK(rank(SparseMat::from_dense(d.alg->ad(d.e))) == 4);

    auto s = sl2_principal();
    auto rs = dim_equality_check(s, {});
    CHECK(rs.dim_low == 1);
    CHECK(rs.rank_ad_e == 2);
    CHECK(rs.ok);

    // e = E12 under h = diag(2, 0, -2): [E12, E32] = 0 with E32 in degree -2.
    auto g = sl(3);
    auto gr = grading_from_element(*g, diag_element(*g, {2, 2}));
    auto bad = make_datum(g, gr, el(*g, "E12"), 2);
    CHECK_FALSE(criterion_star(bad));
    CHECK_THROWS_AS(window_complement(bad), PreconditionFailure);
    CHECK_THROWS_AS(dim_equality_check(bad, {}), PreconditionFailure);
}

TEST_CASE("constructing admissible pairs") {
    auto d = sl3_minimal();
    const auto& g = *d.alg;
    auto c = window_complement(d);

    auto p0 = construct_admissible_pair(d, {c, {}});
    CHECK(p0.ok());
    CHECK(same_span(g, p0.pair.m, {"E31"}));
    CHECK(same_span(g, p0.pair.n, {"E31", "E21", "E32"}));
    CHECK(same_span(g, p0.l_perp, {"E21", "E32"}));
    auto loop = LoopAlgebra::create(d.alg, p0.pair.n);
    CHECK_FALSE(loop->is_abelian());

    auto p1 = construct_admissible_pair(d, {c, {el(g, "E21")}});
    CHECK(p1.ok());
    CHECK(same_span(g, p1.l_perp, {"E21"}));
    CHECK(same_span(g, p1.pair.m, {"E31", "E21"}));
    CHECK(same_span(g, p1.pair.n, {"E31", "E21"}));

    auto s = sl2_principal();
    auto ps = construct_admissible_pair(s, {{}, {}});
    CHECK(ps.ok());
    CHECK(same_span(*s.alg, ps.pair.m, {"f"}));
    CHECK(same_span(*s.alg, ps.pair.n, {"f"}));

    // l = g_{-1} is not isotropic; l outside the complement is refused.
    CHECK_THROWS_AS(construct_admissible_pair(d, {c, c}), PreconditionFailure);
    CHECK_THROWS_AS(construct_admissible_pair(d, {c, {el(g, "E31")}}), PreconditionFailure);
}

TEST_CASE("the six conditions") {
    auto d = sl3_minimal();
    const auto& g = *d.alg;
    auto r = verify_admissible_pair(d, default_pair(d));
    CHECK(r.ok());
    CHECK(r.dim_m == 1);
    CHECK(r.dim_n == 3);
    CHECK(r.rank_ad_e == 4);

    AdmissiblePair big{span_of(g, {"E31", "E21", "E32"}), span_of(g, {"E31", "E21", "E32"})};
    auto rb = verify_admissible_pair(d, big);
    CHECK_FALSE(rb.conditions[5]);
    CHECK(rb.dim_m + rb.dim_n == 6);
    CHECK(rb.conditions[0]);
    CHECK(rb.conditions[1]);
    CHECK(rb.conditions[3]);
    CHECK(rb.conditions[4]);
    // m^⊥ ∩ [g, e] is one-dimensional here while [n, e] is three-dimensional, so (iii) fails as well.
    CHECK_FALSE(rb.conditions[2]);

    CHECK_FALSE(is_graded_subspace(d.grading, {add_scaled(el(g, "E31"), el(g, "E21"), 1)}));
    CHECK(is_graded_subspace(d.grading, span_of(g, {"E31", "E21"})));
}

TEST_CASE("strong admissibility") {
    auto d = sl3_minimal();
    const auto& g = *d.alg;
    CHECK(strong_admissibility(g, default_pair(d)));
    AdmissiblePair abelian{span_of(g, {"E31"}), span_of(g, {"E31", "E21"})};
    CHECK(strong_admissibility(g, abelian));
    AdmissiblePair weak{span_of(g, {"E21"}), span_of(g, {"E31", "E21", "E32"})};
    CHECK_FALSE(strong_admissibility(g, weak));
}

TEST_CASE("every isotropic line in sl4 minimal gives an admissible pair") {
    auto d = sl4_minimal();
    const auto& g = *d.alg;
    auto c = window_complement(d);
    REQUIRE(c.size() == 4);
    std::mt19937_64 rng(17);
    auto check = [&](const std::vector<Element>& l) {
        auto pc = construct_admissible_pair(d, {c, l});
        REQUIRE(pc.ok());
        CHECK(span_rank(l, g.dim()) + span_rank(pc.l_perp, g.dim()) == c.size());
        auto r = verify_admissible_pair(d, pc.pair);
        CHECK(r.ok());
        CHECK(strong_admissibility(g, pc.pair));
        for (std::size_t k = 0; k < 6; ++k) CHECK(r.conditions[k]);
    };
    check({});
    for (int t = 0; t < 12; ++t) {
        Element x(g.dim(), Rat(0));
        for (const auto& v : c) x = add_scaled(x, v, random_rat(rng));
        if (!is_zero_vec(x)) check({x});
    }
    // A Lagrangian plane.
    check(span_of(g, {"E21", "E31"}));
}

TEST_CASE("isotropic search") {
    auto d = sl3_minimal();
    auto cands = search_isotropic(d, window_complement(d), 1);
    CHECK(cands.size() == 4);  // lines through (1,0), (0,1), (1,1), (1,-1)
    for (const auto& c : cands) {
        CHECK(c.conditions.ok());
        CHECK(c.strong);
    }
}
