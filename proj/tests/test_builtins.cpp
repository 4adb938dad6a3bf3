#include "helpers.hpp"

#include <doctest.h>

using namespace opcoh;
using namespace testing;

namespace {

using Q = Rational;

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const DomainError& e) {
        return e.kind;
    }
    return "";
}

template <class S>
bool same_structure(const Operad<S>& P, const Operad<S>& Q) {
    if (P.labels != Q.labels || P.N != Q.N) return false;
    for (int n = 1; n <= P.N; ++n)
        for (int k = 1; k < n; ++k)
            for (int a = 0; a < P.dim(n); ++a)
                if (!vec_equal(P.act_basis(n, k, a), Q.act_basis(n, k, a))) return false;
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; m + n - 1 <= P.N; ++n)
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < P.dim(m); ++a)
                    for (int b = 0; b < P.dim(n); ++b)
                        if (!vec_equal(P.comp_basis(m, n, i, a, b), Q.comp_basis(m, n, i, a, b))) return false;
    return true;
}

}  // namespace

TEST_SUITE("builtins") {

TEST_CASE("dimensions of the catalog operads") {
    CHECK(build_as<Q>(QQ(), 6).dims() == std::vector<int>{1, 1, 2, 6, 24, 120, 720});
    CHECK(build_com<Q>(QQ(), 6).dims() == std::vector<int>(7, 1));
    CHECK(build_lie<Q>(QQ(), 5).dims() == std::vector<int>{0, 1, 1, 2, 6, 24});
    CHECK(build_pois<Q>(QQ(), 5).dims() == std::vector<int>{1, 1, 2, 6, 24, 120});

    for (int d : {0, 1, 2, 3}) {
        auto P = build_da<Q>(QQ(), 5, AlgebraData::zero(d));
        for (int n = 1; n <= 5; ++n) CHECK(P.dim(n) == 1 + d * n);
        CHECK(P.dim(0) == 1);
    }
    auto E = build_example44<Q>(QQ(), 6);
    CHECK(E.dims() == std::vector<int>{1, 2, 4, 7, 11, 16, 22});
    for (int n = 0; n <= 6; ++n) CHECK(E.dim(n) == 1 + n + binom(n, 2));

    auto E28 = build_example28<Zp>(F(2), 3);
    CHECK(E28.dims() == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("every catalog operad passes the axiom check on its default window") {
    for (auto& entry : catalog()) {
        CAPTURE(entry.name);
        if (entry.name == "ll") {
            Ring r = Ring::parse("Q-eps:2");
            auto P = build<QEps>("ll", r, entry.default_window);
            CHECK(validate_axioms(P).ok);
        } else if (entry.name == "example28") {
            auto P = build<Zp>("example28", F(2), entry.default_window);
            CHECK(validate_axioms(P).ok);
        } else {
            auto P = build<Q>(entry.name, QQ(), entry.default_window);
            CHECK(validate_axioms(P).ok);
        }
    }
    for (auto alg : {AlgebraData::idempotent(), AlgebraData::square_zero(), AlgebraData::truncated(3)}) {
        auto P = build_da<Q>(QQ(), 5, alg);
        CHECK(validate_axioms(P).ok);
    }
}

TEST_CASE("Example28: products of 1_2 vanish") {
    Ring f2 = F(2);
    auto P = build_example28<Zp>(f2, 3);
    CHECK(P.two_unit.has_value() == false);
    for (int i = 1; i <= 2; ++i) CHECK(P.comp_basis(2, 2, i, 0, 0).empty());
    auto flipped = P.act(2, unit_vec<Zp>(f2, 0), Perm::parse("(12)_2"));
    CHECK(vec_equal(flipped, unit_vec<Zp>(f2, 0)));
}

TEST_CASE("LL reduces mod t to Pois") {
    Ring r = Ring::parse("Q-eps:2");
    auto LL = build_ll<QEps>(r, 4);
    auto reduced = reduce_mod_t(LL, QQ());
    auto P = build_pois<Q>(QQ(), 4);
    CHECK(reduced.dims() == P.dims());
    CHECK(same_structure(reduced, P));
    // the deformation term is visible at order t
    auto lvl = level_part(P, LL, 1);
    CHECK_FALSE(lvl.is_zero());
}

TEST_CASE("D_A with zero augmentation ideal is Com") {
    auto D = build_da<Q>(QQ(), 5, AlgebraData::zero(0));
    auto C = build_com<Q>(QQ(), 5);
    CHECK(D.dims() == C.dims());
    std::vector<Element<Q>> gens = {D.basis(0, 0), D.element(2, {{"1_2", Q(1)}})};
    auto rep = check_morphism(D, C, gens, {unit_vec<Q>(QQ(), 0), unit_vec<Q>(QQ(), 0)});
    CHECK(rep.is_iso());
}

TEST_CASE("Pois: the bracket lies in the first truncation ideal") {
    auto P = build_pois<Q>(QQ(), 4);
    auto br = P.element(2, {{"br(x1,x2)", Q(1)}}).v;
    auto I1 = truncation_ideal(P, 1);
    CHECK(I1[2].contains(br));
    for (int i = 1; i <= 2; ++i) CHECK(P.compose(2, br, i, 0, unit_vec<Q>(QQ(), 0)).empty());
    auto mu = P.element(2, {{"mu(x1,x2)", Q(1)}}).v;
    CHECK(P.two_unit.has_value());
    CHECK(vec_equal(*P.two_unit, mu));
}

TEST_CASE("algebra data") {
    for (auto alg : {AlgebraData::idempotent(), AlgebraData::square_zero(), AlgebraData::zero(3), AlgebraData::truncated(4)})
        CHECK_NOTHROW(alg.check_associative());
    CHECK(AlgebraData::idempotent().at(0, 0, 0) == Q(2));
    CHECK(AlgebraData::square_zero().at(0, 0, 0).is_zero());

    // d1 d1 = d2, d2 d1 = d2, d1 d2 = 0: (d1 d1) d1 = d2 but d1 (d1 d1) = 0
    auto bad = AlgebraData::from_json(R"({"d":2,"omega":[[[0,1],[0,0]],[[0,1],[0,0]]]})");
    CHECK(kind_of([&] { bad.check_associative(); }) == "NonAssociativeAlgebraData");
    BuildOptions opts;
    opts.algebra = bad;
    CHECK(kind_of([&] { build<Q>("da", QQ(), 3, opts); }) == "NonAssociativeAlgebraData");

    auto parsed = AlgebraData::from_json(R"({"d":1,"omega":[[[2]]]})");
    CHECK(parsed.at(0, 0, 0) == Q(2));
    CHECK(kind_of([] { AlgebraData::from_json("{"); }) == "ParseError");
}

TEST_CASE("catalog errors") {
    CHECK(kind_of([] { build<Q>("prelie", QQ(), 3); }) == "UnknownOperad");
    CHECK(kind_of([] { build<Q>("as", QQ(), 7); }) == "WindowTooLarge");
    CHECK(kind_of([] { build<Q>("pois", QQ(), 6); }) == "WindowTooLarge");
    BuildOptions over;
    over.override_window_guard = true;
    CHECK(build<Q>("com", QQ(), 8, over).dim(8) == 1);
    CHECK(kind_of([] { build<Q>("ll", QQ(), 3); }) == "InvalidRing");
    CHECK(kind_of([] { build<FpEps>("ll", Ring::parse("Fp-eps:5:2"), 3); }) == "UnsupportedCharacteristic");
    CHECK(catalog_entry("POIS").name == "pois");
    CHECK(catalog().size() == 8);
}

}  // TEST_SUITE
