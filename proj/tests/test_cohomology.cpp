#include "helpers.hpp"

#include <doctest.h>

using namespace opcoh;
using namespace testing;

namespace {

using Q = Rational;

Operad<Q> da(const AlgebraData& alg, int N) { return build_da<Q>(QQ(), N, alg); }

// All degree-preserving equivariant maps obeying the Leibniz rule on every
// in-window basis composition, solved as one linear system.
template <class S>
int brute_force_der_dim(const Operad<S>& P) {
    std::vector<int> offset(P.N + 2, 0);
    for (int n = 0; n <= P.N; ++n) offset[n + 1] = offset[n] + P.dim(n) * P.dim(n);
    auto var = [&](int n, int a, int b) { return offset[n] + a * P.dim(n) + b; };
    std::vector<SVec<S>> rows;
    auto push = [&](std::map<int, S>& row) {
        SVec<S> r;
        for (auto& [k, v] : row)
            if (!v.is_zero()) r.emplace_back(k, v);
        if (!r.empty()) rows.push_back(r);
    };
    // d(e_a * s_k) = d(e_a) * s_k, coordinate c
    for (int n = 2; n <= P.N; ++n)
        for (int k = 1; k < n; ++k)
            for (int a = 0; a < P.dim(n); ++a)
                for (int c = 0; c < P.dim(n); ++c) {
                    std::map<int, S> row;
                    for (auto& [x, coef] : P.act_basis(n, k, a)) row[var(n, x, c)] += coef;
                    for (int y = 0; y < P.dim(n); ++y)
                        for (auto& [z, coef] : P.act_basis(n, k, y))
                            if (z == c) row[var(n, a, y)] -= coef;
                    push(row);
                }
    for (int m = 1; m <= P.N; ++m)
        for (int n = 0; m + n - 1 <= P.N; ++n) {
            int out = m + n - 1;
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < P.dim(m); ++a)
                    for (int b = 0; b < P.dim(n); ++b)
                        for (int c = 0; c < P.dim(out); ++c) {
                            std::map<int, S> row;
                            for (auto& [x, coef] : P.comp_basis(m, n, i, a, b)) row[var(out, x, c)] += coef;
                            for (int y = 0; y < P.dim(m); ++y)
                                for (auto& [z, coef] : P.comp_basis(m, n, i, y, b))
                                    if (z == c) row[var(m, a, y)] -= coef;
                            for (int y = 0; y < P.dim(n); ++y)
                                for (auto& [z, coef] : P.comp_basis(m, n, i, a, y))
                                    if (z == c) row[var(n, b, y)] -= coef;
                            push(row);
                        }
        }
    Matrix<S> M(P.ring, static_cast<int>(rows.size()), offset[P.N + 1]);
    for (size_t r = 0; r < rows.size(); ++r)
        for (auto& [k, v] : rows[r]) M.set(static_cast<int>(r), k, v);
    return static_cast<int>(rref(M).kernel.size());
}

template <class S>
int ider_oracle(const Operad<S>& P) {
    int total = 0;
    for (int n = 0; n <= P.N; ++n) total += P.dim(n) * P.dim(n);
    Subspace<S> span(total);
    span.add(flatten(sf_map(P, one<S>(P.ring))));
    for (int a = 0; a < P.dim(1); ++a) span.add(flatten(ad_map(P, unit_vec<S>(P.ring, a))));
    return span.dim();
}

template <class S>
int h0_oracle(const Operad<S>& P) {
    int total = 0;
    for (int n = 0; n <= P.N; ++n) total += P.dim(n) * P.dim(n);
    Matrix<S> M(P.ring, total, P.dim(1));
    for (int a = 0; a < P.dim(1); ++a)
        for (auto& [k, v] : flatten(ad_map(P, unit_vec<S>(P.ring, a)))) M.set(k, a, v);
    return static_cast<int>(rref(M).kernel.size());
}

ArityMaps<Q> random_map(const Operad<Q>& P, int density = 3) {
    std::uniform_int_distribution<int> coin(0, density), val(-3, 3);
    ArityMaps<Q> d(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        d[n].resize(P.dim(n));
        for (int a = 0; a < P.dim(n); ++a)
            for (int b = 0; b < P.dim(n); ++b)
                if (coin(rng()) == 0) {
                    int v = val(rng());
                    if (v != 0) d[n][a].emplace_back(b, Q(v));
                }
    }
    return d;
}

// Phi = id + t d as a map over k[t]/(t^2)
ArityMaps<QEps> shift_map(const Operad<Q>& P, const ArityMaps<Q>& d) {
    ArityMaps<QEps> phi(P.N + 1);
    for (int n = 0; n <= P.N; ++n) {
        phi[n].resize(P.dim(n));
        for (int a = 0; a < P.dim(n); ++a) {
            std::map<int, QEps> coeffs;
            coeffs[a] = QEps({Q(1), Q(0)});
            for (auto& [b, c] : d[n][a]) {
                auto it = coeffs.find(b);
                QEps add({Q(0), c});
                if (it == coeffs.end()) coeffs[b] = add;
                else it->second = it->second + add;
            }
            for (auto& [b, c] : coeffs)
                if (!c.is_zero()) phi[n][a].emplace_back(b, c);
        }
    }
    return phi;
}

}  // namespace

TEST_SUITE("cohomology") {

TEST_CASE("H0 values agree with the kernel of lambda -> ad_lambda") {
    CHECK(h0(build_as<Q>(QQ(), 4)).empty());
    CHECK(h0(da(AlgebraData::idempotent(), 4)).size() == 1);
    CHECK(h0(da(AlgebraData::square_zero(), 4)).size() == 1);
    CHECK(h0(build_example44<Q>(QQ(), 4)).empty());
    for (auto P : {build_as<Q>(QQ(), 4), build_pois<Q>(QQ(), 4), da(AlgebraData::square_zero(), 4),
                   da(AlgebraData::truncated(2), 4), build_example44<Q>(QQ(), 4)})
        CHECK(static_cast<int>(h0(P).size()) == h0_oracle(P));
}

TEST_CASE("derivations, inner derivations and H1") {
    struct Row {
        std::string name;
        Operad<Q> P;
        int der, ider, h1;
    };
    std::vector<Row> rows = {
        {"As", build_as<Q>(QQ(), 5), 1, 1, 0},
        {"Com", build_com<Q>(QQ(), 5), 1, 1, 0},
        {"Lie", build_lie<Q>(QQ(), 5), 1, 1, 0},
        {"Pois", build_pois<Q>(QQ(), 5), 2, 1, 1},
        {"Example44", build_example44<Q>(QQ(), 4), 2, 2, 0},
        {"DA idempotent", da(AlgebraData::idempotent(), 4), 1, 1, 0},
        {"DA square zero", da(AlgebraData::square_zero(), 4), 2, 1, 1},
    };
    for (auto& r : rows) {
        CAPTURE(r.name);
        auto rep = derivations(r.P);
        CHECK(rep.dim == r.der);
        CHECK(rep.ider_dim == r.ider);
        CHECK(rep.h1_dim == r.h1);
        CHECK(rep.h1_dim == rep.dim - rep.ider_dim);
        CHECK(rep.ider_dim == ider_oracle(r.P));
        for (auto& d : rep.basis) CHECK_FALSE(derivation_failure(r.P, d).has_value());
    }
}

TEST_CASE("derivation dimension against a brute-force Leibniz solve") {
    std::vector<std::pair<std::string, Operad<Q>>> ops = {
        {"As", build_as<Q>(QQ(), 4)},
        {"Com", build_com<Q>(QQ(), 5)},
        {"Lie", build_lie<Q>(QQ(), 4)},
        {"Pois", build_pois<Q>(QQ(), 4)},
        {"Example44", build_example44<Q>(QQ(), 4)},
        {"DA idempotent", da(AlgebraData::idempotent(), 4)},
        {"DA square zero", da(AlgebraData::square_zero(), 4)},
        {"DA truncated", da(AlgebraData::truncated(2), 4)},
    };
    for (auto& [name, P] : ops) {
        CAPTURE(name);
        CHECK(derivations(P).dim == brute_force_der_dim(P));
    }
}

TEST_CASE("H1 of truncation quotients") {
    auto P = build_pois<Q>(QQ(), 5);
    auto PQ = quotient(P, truncation_ideal(P, 3));
    CHECK(derivations(PQ).h1_dim == 1);
    auto A = build_as<Q>(QQ(), 5);
    auto AQ = quotient(A, truncation_ideal(A, 5));
    CHECK(derivations(AQ).h1_dim == 0);
}

TEST_CASE("derivation identities on As, Pois and D_A") {
    std::vector<Operad<Q>> ops = {build_as<Q>(QQ(), 4), build_pois<Q>(QQ(), 4), da(AlgebraData::square_zero(), 4),
                                  da(AlgebraData::truncated(2), 4)};
    for (auto& P : ops) {
        CAPTURE(P.name);
        auto rep = derivations(P);
        int total = 0;
        for (int n = 0; n <= P.N; ++n) total += P.dim(n) * P.dim(n);
        Subspace<Q> der_span(total);
        for (auto& d : rep.basis) der_span.add(flatten(d));

        for (auto& d1 : rep.basis)
            for (auto& d2 : rep.basis) {
                auto br = commutator(d1, d2);
                CHECK_FALSE(derivation_failure(P, br).has_value());
                CHECK(der_span.contains(flatten(br)));
            }

        for (auto& d : rep.basis)
            for (int a = 0; a < P.dim(1); ++a) {
                auto lambda = unit_vec<Q>(QQ(), a);
                auto lhs = commutator(d, ad_map(P, lambda));
                auto rhs = ad_map(P, apply_map(d, 1, lambda));
                CHECK(maps_equal(lhs, rhs));
            }

        for (int c : {1, 2, -3}) {
            CHECK(maps_equal(sf_map(P, Q(-c)), ad_map(P, scaled(P.identity, Q(c)))));
            auto sf = sf_map(P, Q(c));
            for (auto& d : rep.basis) {
                auto comm = commutator(sf, d);
                CHECK(maps_equal(comm, add_maps(d, d, Q(-1))));
            }
        }
        for (int n = 0; n <= P.N; ++n) {
            auto sf = sf_map(P, Q(1));
            for (int a = 0; a < P.dim(n); ++a)
                CHECK(vec_equal(sf[n][a], scaled(unit_vec<Q>(QQ(), a), Q(n - 1))));
        }
    }
}

TEST_CASE("derivation images of the 2-unit stay in c 1_2 + 2I(2)") {
    for (auto P : {build_as<Q>(QQ(), 4), build_pois<Q>(QQ(), 4), da(AlgebraData::square_zero(), 4),
                   build_example44<Q>(QQ(), 4)}) {
        CAPTURE(P.name);
        auto I2 = truncation_ideal(P, 2);
        auto cap1 = restriction(P, 2, {1});
        for (auto& d : derivations(P).basis) {
            auto img = apply_map(d, 2, *P.two_unit);
            SVec<Q> capped;
            for (auto& [a, c] : img) capped = add(capped, cap1[a], c);
            Q c = capped.empty() ? Q(0) : entry(capped, P.identity_index);
            CHECK(vec_equal(capped, scaled(P.identity, c)));
            CHECK(I2[2].contains(add(img, *P.two_unit, -c)));
        }
    }
}

TEST_CASE("coboundaries are cocycles") {
    std::vector<Operad<Q>> ops = {build_as<Q>(QQ(), 4), build_pois<Q>(QQ(), 3), da(AlgebraData::square_zero(), 4),
                                  build_example44<Q>(QQ(), 4)};
    for (auto& P : ops) {
        CAPTURE(P.name);
        CHECK_FALSE(cocycle_failure(P, zero_cocycle(P)).has_value());
        for (int trial = 0; trial < 3; ++trial) {
            auto w = coboundary(P, random_map(P));
            CHECK_FALSE(cocycle_failure(P, w).has_value());
            CHECK(is_coboundary(P, w));
        }
        ArityMaps<Q> zero(P.N + 1);
        for (int n = 0; n <= P.N; ++n) zero[n].resize(P.dim(n));
        CHECK(coboundary(P, zero).is_zero());
    }
}

TEST_CASE("superfluous coboundaries") {
    auto P = build_as<Q>(QQ(), 4);
    std::vector<Q> c = {Q(3), Q(-1), Q(2), Q(5), Q(7)};
    ArityMaps<Q> d(P.N + 1);
    for (int n = 0; n <= P.N; ++n)
        for (int a = 0; a < P.dim(n); ++a) d[n].push_back(scaled(unit_vec<Q>(QQ(), a), c[n]));
    auto w = coboundary(P, d);
    CHECK_FALSE(w.has_vs());
    for (int m = 1; m <= 4; ++m)
        for (int n = 0; m + n - 1 <= 4; ++n)
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < P.dim(m); ++a)
                    for (int b = 0; b < P.dim(n); ++b) {
                        auto x = unit_vec<Q>(QQ(), a), y = unit_vec<Q>(QQ(), b);
                        auto expected = scaled(P.compose(m, x, i, n, y), c[m + n - 1] - c[m] - c[n]);
                        CHECK(vec_equal(wp_apply(P, w, m, x, i, n, y), expected));
                    }
    auto eq = cocycle_equivalent(P, w, zero_cocycle(P));
    CHECK(eq.equivalent);
    REQUIRE(eq.witness.has_value());
    CHECK(cocycles_equal(coboundary(P, *eq.witness), w));
}

TEST_CASE("H2 on small windows") {
    auto as4 = build_as<Q>(QQ(), 4);
    CHECK(h2_window(as4, Variant::S).h2_dim == 0);
    CHECK(h2_window(as4, Variant::Full).h2_dim == 0);
    auto com = build_com<Q>(QQ(), 5);
    for (auto v : {Variant::S, Variant::Full}) {
        auto rep = h2_window(com, v);
        CHECK(rep.h2_dim == 0);
        CHECK(rep.z2_dim == rep.b2_dim);
    }
    auto lie = build_lie<Q>(QQ(), 4);
    CHECK(h2_window(lie, Variant::S).h2_dim == 0);
    auto pois = build_pois<Q>(QQ(), 4);
    auto ps = h2_window(pois, Variant::S);
    CHECK(ps.h2_dim == 1);
    CHECK(h2_window(pois, Variant::Full).h2_dim == 1);

    Ring f2 = F(2);
    auto E = build_example28<Zp>(f2, 3);
    CHECK(h2_window(E, Variant::Full).h2_dim == 1);
    CHECK(h2_window(E, Variant::S).h2_dim == 0);
}

TEST_CASE("the orbit-reduced engine agrees with the direct system") {
    for (auto P : {build_as<Q>(QQ(), 3), build_com<Q>(QQ(), 4), build_pois<Q>(QQ(), 3), build_lie<Q>(QQ(), 4),
                   da(AlgebraData::square_zero(), 3)}) {
        CAPTURE(P.name);
        CohomologyOptions direct;
        direct.force_direct = true;
        auto a = h2_window(P, Variant::Full);
        auto b = h2_window(P, Variant::Full, direct);
        CHECK(a.h2_dim == b.h2_dim);
        CHECK(b.method != a.method);
    }
    Ring f2 = F(2);
    auto E = build_example28<Zp>(f2, 3);
    CohomologyOptions direct;
    direct.force_direct = true;
    CHECK(h2_window(E, Variant::Full, direct).h2_dim == 1);
}

TEST_CASE("H2 agrees across primes and the rationals") {
    for (std::string name : {"as", "pois", "lie"}) {
        auto q = h2_window(build<Q>(name, QQ(), 4), Variant::S).h2_dim;
        auto p1 = h2_window(build<Zp>(name, F(101), 4), Variant::S).h2_dim;
        auto p2 = h2_window(build<Zp>(name, F(103), 4), Variant::S).h2_dim;
        CHECK(q == p1);
        CHECK(p1 == p2);
    }
}

TEST_CASE("H2 representatives deform to valid operads and are not coboundaries") {
    std::vector<Operad<Q>> ops = {build_pois<Q>(QQ(), 4), da(AlgebraData::square_zero(), 3), build_as<Q>(QQ(), 4)};
    for (auto& P : ops) {
        CAPTURE(P.name);
        for (auto v : {Variant::S, Variant::Full}) {
            auto rep = h2_window(P, v);
            CHECK(static_cast<int>(rep.reps.size()) == rep.h2_dim);
            for (auto& w : rep.reps) {
                CHECK_FALSE(cocycle_failure(P, w).has_value());
                CHECK_FALSE(is_coboundary(P, w));
                auto D = deform(P, w);
                CHECK(validate_axioms(D).ok);
                CHECK_FALSE(cocycle_equivalent(P, w, zero_cocycle(P)).equivalent);
            }
        }
    }
}

TEST_CASE("coboundary-shifted cocycles give isomorphic deformations") {
    std::vector<Operad<Q>> ops = {build_as<Q>(QQ(), 4), build_pois<Q>(QQ(), 3), da(AlgebraData::square_zero(), 3)};
    for (auto& P : ops) {
        CAPTURE(P.name);
        auto reps = h2_window(P, Variant::S).reps;
        Cocycle<Q> w = reps.empty() ? zero_cocycle(P) : reps.front();
        for (int trial = 0; trial < 2; ++trial) {
            auto d = random_map(P);
            auto shifted = add_cocycles(w, coboundary(P, d), Q(1));
            auto D1 = deform(P, w), D2 = deform(P, shifted);
            auto rep = check_morphism(D1, D2, shift_map(P, d));
            CHECK_MESSAGE(rep.is_morphism, rep.failure);
            CHECK(rep.is_iso());
            auto eq = cocycle_equivalent(P, shifted, w);
            CHECK(eq.equivalent);
        }
    }
}

TEST_CASE("Example28: the action cocycle") {
    Ring f2 = F(2);
    auto P = build_example28<Zp>(f2, 3);
    auto w = zero_cocycle(P);
    w.vs[2][0][0] = unit_vec<Zp>(f2, 0);
    CHECK_FALSE(cocycle_failure(P, w).has_value());
    CHECK(validate_axioms(deform(P, w)).ok);
    auto eq = cocycle_equivalent(P, w, zero_cocycle(P));
    CHECK_FALSE(eq.equivalent);
    CHECK_FALSE(eq.certificate.empty());
    auto full = h2_window(P, Variant::Full);
    REQUIRE(full.reps.size() == 1);
    CHECK(cocycle_equivalent(P, full.reps[0], w).equivalent);
}

TEST_CASE("normalization") {
    auto P = build_as<Q>(QQ(), 4);
    auto z = normalize_cocycle(P, zero_cocycle(P));
    CHECK(z.cocycle.is_zero());
    for (auto& row : z.witness)
        for (auto& v : row) CHECK(v.empty());

    ArityMaps<Q> d(P.N + 1);
    for (int n = 0; n <= P.N; ++n) d[n].resize(P.dim(n));
    d[1][0] = P.identity;
    auto w = coboundary(P, d);
    CHECK_FALSE(w.is_zero());
    auto nz = normalize_cocycle(P, w);
    CHECK_FALSE(cocycle_failure(P, nz.cocycle).has_value());
    CHECK(cocycles_equal(add_cocycles(nz.cocycle, coboundary(P, nz.witness), Q(1)), w));
    for (int m = 1; m <= 4; ++m)
        for (int a = 0; a < P.dim(m); ++a) {
            auto x = unit_vec<Q>(QQ(), a);
            for (int i = 1; i <= m; ++i) CHECK(wp_apply(P, nz.cocycle, m, x, i, 1, P.identity).empty());
            CHECK(wp_apply(P, nz.cocycle, 1, P.identity, 1, m, x).empty());
            CHECK(vs_apply(P, nz.cocycle, m, x, Perm::identity(m)).empty());
        }

    auto pois = build_pois<Q>(QQ(), 4);
    auto rep = h2_window(pois, Variant::S).reps.at(0);
    auto shifted = add_cocycles(rep, coboundary(pois, random_map(pois)), Q(1));
    auto ns = normalize_cocycle(pois, shifted);
    CHECK(cocycles_equal(add_cocycles(ns.cocycle, coboundary(pois, ns.witness), Q(1)), shifted));
    CHECK(cocycle_equivalent(pois, ns.cocycle, rep).equivalent);

    auto eq = cocycle_equivalent(pois, rep, rep);
    CHECK(eq.equivalent);
    REQUIRE(eq.witness.has_value());
    CHECK(coboundary(pois, *eq.witness).is_zero());
}

TEST_CASE("As: normalized S-cocycles put the 1_2 o_2 1_2 value in the span of xi_2") {
    // Every S-cocycle of As on this window is the coboundary of an equivariant map,
    // and equivariant maps on kS_n are fixed by x_n = d(1_n).
    auto P = build_as<Q>(QQ(), 4);
    REQUIRE(h2_window(P, Variant::S).h2_dim == 0);
    std::vector<std::pair<int, int>> unknowns;
    for (int n = 0; n <= 4; ++n)
        for (int j = 0; j < P.dim(n); ++j) unknowns.push_back({n, j});
    auto one_n = [&](int n) { return n == 0 ? unit_vec<Q>(QQ(), 0) : n == 1 ? P.identity : identity_times(P, n, "id"); };
    std::vector<Cocycle<Q>> images;
    for (auto [n, j] : unknowns) {
        ArityMaps<Q> d(P.N + 1);
        for (int k = 0; k <= P.N; ++k) d[k].resize(P.dim(k));
        for (int a = 0; a < P.dim(n); ++a) {
            Perm sigma = n <= 1 ? Perm::identity(n) : [&] {
                std::vector<int> w;
                for (char ch : P.labels[n][a]) w.push_back(ch - '0');
                return Perm::from_word(w);
            }();
            d[n][a] = P.act(n, unit_vec<Q>(QQ(), j), sigma);
        }
        images.push_back(coboundary(P, d));
    }
    // constraints: wp_1(1_m, 1_n) = 0 for all in-window m, n
    int rows = 0;
    std::vector<std::tuple<int, int, int>> keys;
    for (int m = 1; m <= 4; ++m)
        for (int n = 0; m + n - 1 <= 4; ++n) keys.emplace_back(m, n, m + n - 1);
    for (auto& [m, n, out] : keys) rows += P.dim(out);
    Matrix<Q> M(QQ(), rows, static_cast<int>(unknowns.size()));
    for (size_t u = 0; u < unknowns.size(); ++u) {
        int r0 = 0;
        for (auto& [m, n, out] : keys) {
            for (auto& [k, v] : wp_apply(P, images[u], m, one_n(m), 1, n, one_n(n))) M.set(r0 + k, static_cast<int>(u), v);
            r0 += P.dim(out);
        }
    }
    auto kernel = rref(M).kernel;
    CHECK_FALSE(kernel.empty());
    SVec<Q> xi2 = add(add(add(identity_times(P, 3, "(23)"), identity_times(P, 3, "(12)"), Q(-1)),
                          identity_times(P, 3, "(123)"), Q(-1)),
                      identity_times(P, 3, "(132)"), Q(1));
    auto span_xi2 = Subspace<Q>::span(6, {xi2});
    for (auto& k : kernel) {
        Cocycle<Q> w = zero_cocycle(P);
        for (auto& [u, c] : k) w = add_cocycles(w, images[u], c);
        CHECK(span_xi2.contains(wp_apply(P, w, 2, *P.two_unit, 2, 2, *P.two_unit)));
    }
}

TEST_CASE("Ext1 of symmetric group modules") {
    // kS_m is free, so the vanishing holds in every characteristic
    auto A = build_as<Q>(QQ(), 4);
    for (int m = 0; m <= 4; ++m) CHECK(ext1(A, m, true).trivial());
    for (uint32_t p : {2u, 7u}) {
        auto Ap = build_as<Zp>(F(p), 5);
        for (int m = 2; m <= 5; ++m) CHECK(ext1(Ap, m, true).trivial());
    }
    auto Cq = build_com<Q>(QQ(), 4);
    for (int m = 2; m <= 4; ++m) CHECK(ext1(Cq, m, true).trivial());
    auto C2 = build_com<Zp>(F(2), 4);
    for (int m = 2; m <= 4; ++m) CHECK(ext1(C2, m, true).dim == 1);
    CHECK(ext1(C2, 1, true).trivial());
    auto C3 = build_com<Zp>(F(3), 4);
    for (int m = 2; m <= 4; ++m) CHECK(ext1(C3, m, true).trivial());
}

TEST_CASE("superfluous_solve") {
    const int N = 6;
    for (int n0 : {0, 1}) {
        SuperfluousInput<Q> zero{N, n0, std::vector<std::vector<Q>>(N + 1, std::vector<Q>(N + 1))};
        auto z = superfluous_solve(zero);
        REQUIRE(z.ok);
        for (auto& c : z.c) CHECK(c.is_zero());

        std::uniform_int_distribution<int> val(-9, 9);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Q> c(N + 1);
            for (auto& x : c) x = Q(val(rng()));
            SuperfluousInput<Q> in{N, n0, std::vector<std::vector<Q>>(N + 1, std::vector<Q>(N + 1))};
            for (int m = 1; m <= N; ++m)
                for (int n = n0; m + n - 1 <= N && n <= N; ++n) in.a[m][n] = c[m + n - 1] - c[m] - c[n];
            auto sol = superfluous_solve(in);
            REQUIRE(sol.ok);
            CHECK(sol.c[2].is_zero());
            CHECK(sol.c[1] == -in.a[1][1]);
            for (int m = 1; m <= N; ++m)
                for (int n = n0; m + n - 1 <= N && n <= N; ++n)
                    CHECK(in.a[m][n] == sol.c[m + n - 1] - sol.c[m] - sol.c[n]);
            // the difference is the gauge c_n -> c_n + lambda (n - 1)
            Q lambda = c[2] - sol.c[2];
            for (int n = (n0 == 0 ? 0 : 1); n <= N; ++n) CHECK(c[n] - sol.c[n] == lambda * Q(n - 1));
        }
        SuperfluousInput<Q> bad{N, n0, std::vector<std::vector<Q>>(N + 1, std::vector<Q>(N + 1))};
        bad.a[2][2] = Q(1);
        auto b = superfluous_solve(bad);
        CHECK_FALSE(b.ok);
        CHECK_FALSE(b.violation.empty());
    }
}

TEST_CASE("exponentials of nilpotent derivations") {
    auto P = da(AlgebraData::square_zero(), 4);
    ArityMaps<Q> zero(P.N + 1);
    for (int n = 0; n <= P.N; ++n) zero[n].resize(P.dim(n));
    CHECK(maps_equal(exp_derivation(P, zero), identity_maps(P)));

    auto x = P.element(1, {{"d1(1)1", Q(1)}}).v;
    auto adx = ad_map(P, x);
    CHECK_FALSE(derivation_failure(P, adx).has_value());
    auto e = exp_derivation(P, adx);
    auto rep = check_morphism(P, P, e);
    CHECK(rep.is_morphism);
    CHECK(rep.is_iso());
    auto einv = exp_derivation(P, add_maps(zero, adx, Q(-1)));
    CHECK(maps_equal(compose_maps(e, einv), identity_maps(P)));
    CHECK(maps_equal(compose_maps(einv, e), identity_maps(P)));

    // strictly upper triangular 3x3 matrices: d1 d2 = d3, so ad_x is nonzero and nilpotent
    auto U = da(AlgebraData::from_json(R"({"d":3,"omega":[[[0,0,0],[0,0,1],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]})"), 4);
    auto adu = ad_map(U, U.element(1, {{"d1(1)1", Q(1)}}).v);
    ArityMaps<Q> uzero(U.N + 1);
    for (int n = 0; n <= U.N; ++n) uzero[n].resize(U.dim(n));
    CHECK_FALSE(maps_equal(adu, uzero));
    auto eu = exp_derivation(U, adu);
    CHECK_FALSE(maps_equal(eu, identity_maps(U)));
    CHECK(check_morphism(U, U, eu).is_iso());
    CHECK(maps_equal(compose_maps(eu, exp_derivation(U, add_maps(uzero, adu, Q(-1)))), identity_maps(U)));

    try {
        exp_derivation(P, sf_map(P, Q(1)));
        FAIL("expected NotNilpotentOnWindow");
    } catch (const DomainError& err) {
        CHECK(err.kind == "NotNilpotentOnWindow");
    }
    auto Pp = build_com<Zp>(F(5), 3);
    try {
        exp_derivation(Pp, sf_map(Pp, one<Zp>(F(5))));
        FAIL("expected PositiveCharacteristic");
    } catch (const DomainError& err) {
        CHECK(err.kind == "PositiveCharacteristic");
    }
}

TEST_CASE("lifting deformations order by order") {
    auto A = build_as<Q>(QQ(), 4);
    auto D = constant_extension(A, 2);
    for (int J = 1; J <= 2; ++J) {
        auto lr = lift_order(A, D);
        REQUIRE(lr.lifted);
        CHECK(validate_axioms(lr.op).ok);
        CHECK(level_part(A, lr.op, J + 1).is_zero());
        D = lr.op;
    }

    // an order-one deformation of As lifts to k[t]/(t^4)
    auto w = coboundary(A, random_map(A));
    Operad<QEps> E = deform(A, w);
    for (int J = 1; J <= 2; ++J) {
        auto lr = lift_order(A, E);
        REQUIRE(lr.lifted);
        CHECK(validate_axioms(lr.op).ok);
        CHECK(vec_equal(reduce_mod_t(lr.op, QQ()).comp_basis(2, 2, 1, 0, 0), A.comp_basis(2, 2, 1, 0, 0)));
        E = lr.op;
    }
    CHECK(E.ring.order == 4);
}

TEST_CASE("the LL first-order class is non-trivial") {
    Ring r = Ring::parse("Q-eps:2");
    auto LL = build_ll<QEps>(r, 4);
    auto P = build_pois<Q>(QQ(), 4);
    auto w = level_part(P, LL, 1);
    CHECK_FALSE(cocycle_failure(P, w).has_value());
    CHECK_FALSE(is_coboundary(P, w));
    auto rep = h2_window(P, Variant::S).reps.at(0);
    // the class is a nonzero multiple of the representative
    bool proportional = false;
    for (int c : {1, -1, 2, -2, 3, -3})
        for (int den : {1, 2, 3, 4, 6}) proportional = proportional || cocycle_equivalent(P, w, add_cocycles(zero_cocycle(P), rep, Q(c, den))).equivalent;
    CHECK(proportional);

    auto lr = lift_order(build_pois<Q>(QQ(), 3), build_ll<QEps>(r, 3));
    CHECK(lr.lifted);
}

}  // TEST_SUITE
