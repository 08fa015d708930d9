#include <algorithm>

#include "doctest.h"
#include "liftcheck/padpoly.hpp"
#include "test_util.hpp"

using lt::Rational;
using lt::TruncSeries;
using lt::Valuation;

namespace {

TruncSeries poly(const std::vector<std::int64_t>& c, int p_cap = 8, int p = 3) {
    return TruncSeries::from_ints(fp(p), c, p_cap);
}

lt::EisensteinPoly eis(const std::vector<std::int64_t>& c, int prec = 8, int p = 3) {
    return lt::EisensteinPoly::from_ints(fp(p), c, prec);
}

}  // namespace

TEST_CASE("is_distinguished examples") {
    auto a = lt::is_distinguished(poly({-3, 0, 1}));
    CHECK(a.distinguished);
    CHECK(a.degree == 2);
    CHECK_FALSE(lt::is_distinguished(poly({-3, 0, 2})).distinguished);
    // oracle: expand (U^2 - 3)(1 + U) and inspect the U^2 coefficient
    auto prod = poly({-3, 0, 1}) * poly({1, 1});
    CHECK(prod.coeff(2).is_unit());
    auto b = lt::is_distinguished(prod);
    CHECK_FALSE(b.distinguished);
    CHECK(b.degree == 3);
    CHECK_THROWS_AS(lt::is_distinguished(poly({27, 81}, 3)), lt::IndeterminateAtPrecision);
}

TEST_CASE("weierstrass_prepare examples") {
    auto w = poly({-3, 0, 1}) * poly({1, 1});
    auto pr = lt::weierstrass_prepare(w);
    CHECK(pr.t == 0);
    CHECK(pr.degree == 2);
    CHECK(pr.v.congruent(poly({-3, 0, 1}), 8, pr.u_cap));
    CHECK(TruncSeries(fp(3), pr.u.coeffs(), pr.u_cap, 8).congruent(TruncSeries(fp(3), poly({1, 1}).coeffs(), pr.u_cap, 8), 8,
                                                                  pr.u_cap));

    auto pr2 = lt::weierstrass_prepare(poly({-9, 3}));
    CHECK(pr2.t == 1);
    CHECK(pr2.v.congruent(poly({-3, 1}, 7), 7, 3));
    CHECK(pr2.u.coeff(0) == lt::WittScalar::one(fp(3), 7));
    CHECK(pr2.u.degree() == 0);

    auto pr3 = lt::weierstrass_prepare(poly({1, 1}));
    CHECK(pr3.t == 0);
    CHECK(pr3.degree == 0);
    CHECK(pr3.v.degree() == 0);
    CHECK(pr3.u.degree() == 1);

    CHECK_THROWS_AS(lt::weierstrass_prepare(poly({27, 0, 81}, 3)), lt::PrecisionExhausted);
}

TEST_CASE("weierstrass_prepare round trip on random series") {
    std::mt19937_64 rng(2024);
    auto k = fp(3);
    for (int trial = 0; trial < 200; ++trial) {
        int N = 2 + static_cast<int>(rng() % 5), M = 3 + static_cast<int>(rng() % 6);
        int t = static_cast<int>(rng() % 2);
        std::vector<std::int64_t> c(M);
        std::int64_t pN = 1;
        for (int i = 0; i < N; ++i) pN *= 3;
        for (auto& x : c) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(pN));
        int d = static_cast<int>(rng() % M);
        for (int i = 0; i < d; ++i) c[i] = c[i] / 3 * 3;
        if (c[d] % 3 == 0) c[d] += 1;
        if (t == 1)
            for (auto& x : c) x = x * 3 % pN;
        TruncSeries w = TruncSeries::from_ints(k, c, N, M);
        auto pr = lt::weierstrass_prepare(w);
        REQUIRE(pr.t == t);
        REQUIRE(lt::is_distinguished(pr.v).distinguished);
        REQUIRE(pr.degree == d);
        std::vector<lt::WittScalar> back;
        auto vu = pr.v * pr.u;
        for (const auto& x : vu.coeffs()) back.push_back(x.times_p_pow(pr.t).with_precision(N));
        REQUIRE(TruncSeries(k, back, M, N).congruent(w, N, M));
    }
}

TEST_CASE("newton_polygon examples") {
    auto r = sqrt3_ring(8);
    auto np = lt::newton_polygon(lt::ChainPoly{r.zero(), r.pi() * r.from_int(2), r.one()});
    CHECK(np.zero_roots == 1);
    CHECK(np.root_valuations() == std::vector<Rational>{Rational(1, 2)});
    CHECK(np.degree() == 2);

    auto z = lt::witt_quotient(fp(3), 6);
    auto np2 = lt::newton_polygon(lt::ChainPoly{z.from_int(-3), z.zero(), z.one()});
    CHECK(np2.slopes == std::vector<std::pair<Rational, int>>{{Rational(1, 2), 2}});
    auto np3 = lt::newton_polygon(lt::ChainPoly{z.from_int(-9), z.one()});
    CHECK(np3.slopes == std::vector<std::pair<Rational, int>>{{Rational(2), 1}});
}

TEST_CASE("newton slopes match explicit root valuations") {
    // (X - pi)(X - 3)(X - 3 pi^3) over Z_3[sqrt 3]: root valuations 1/2, 1, 5/2
    auto r = sqrt3_ring(16);
    std::vector<lt::ChainRingElem> roots{r.pi(), r.from_int(3), r.from_int(3) * r.pi().pow(3)};
    lt::ChainPoly w{r.one()};
    for (const auto& a : roots) {
        lt::ChainPoly next(w.size() + 1, r.zero());
        for (std::size_t i = 0; i < w.size(); ++i) {
            next[i + 1] += w[i];
            next[i] -= w[i] * a;
        }
        w = next;
    }
    auto np = lt::newton_polygon(w);
    std::vector<Rational> expect;
    for (const auto& a : roots) expect.push_back(a.val().value());
    auto got = np.root_valuations();
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
    CHECK(np.degree() == 3);
}

TEST_CASE("krasner_bound examples") {
    auto kb = lt::krasner_bound(eis({-3, 0, 1}));
    CHECK(kb.separations == std::vector<Rational>{Rational(1, 2)});
    CHECK(kb.bound_val == Rational(1, 2));
    CHECK(kb.containment_threshold() == Rational(1));

    auto k5 = fp(5);
    auto u = lt::teichmuller(k5, 2, 6);
    auto c0 = -(u * lt::WittScalar::from_int(k5, 5, 6));
    lt::EisensteinPoly g5({c0, lt::WittScalar::zero(k5, 6), lt::WittScalar::one(k5, 6)});
    CHECK(lt::krasner_bound(g5).separations == std::vector<Rational>{Rational(1, 2)});

    // oracle for X^3 - 3: the X^j coefficient of g(X + pi) is C(3, j) pi^{3-j}
    // (plus -3 at j = 0), a single term of valuation v_3(C(3,j)) + (3-j)/3.
    auto v3 = [](std::int64_t n) {
        int v = 0;
        while (n % 3 == 0) {
            n /= 3;
            ++v;
        }
        return v;
    };
    std::vector<Valuation> vals;
    const std::int64_t binom[4] = {1, 3, 3, 1};
    for (int j = 1; j <= 3; ++j) vals.push_back(Valuation::finite(Rational(v3(binom[j])) + Rational(3 - j, 3)));
    auto oracle = lt::newton_polygon(vals).root_valuations();
    auto kb3 = lt::krasner_bound(eis({-3, 0, 0, 1}));
    CHECK(kb3.separations == oracle);
    CHECK(oracle == std::vector<Rational>{Rational(5, 6), Rational(5, 6)});
    CHECK(kb3.separations.size() == 2);
}

TEST_CASE("hensel_root examples") {
    auto r = sqrt3_ring(16);
    lt::ChainPoly w{r.from_int(-3 - 243), r.zero(), r.one()};
    auto y = lt::hensel_root(w, r.pi());
    CHECK(lt::evaluate(w, y).is_zero());
    CHECK((y - r.pi()).vpi() >= 9);
    CHECK(lt::hensel_root(w, y) == y);

    auto z5 = lt::witt_quotient(fp(5), 4);
    CHECK(lt::hensel_root(lt::ChainPoly{z5.from_int(-5), z5.one()}, z5.from_int(5)) == z5.from_int(5));
    auto z3 = lt::witt_quotient(fp(3), 5);
    CHECK(lt::hensel_root(lt::ChainPoly{z3.from_int(-1), z3.zero(), z3.one()}, z3.one()) == z3.one());
    // X^2 - 6 has no root near pi
    CHECK_THROWS_AS(lt::hensel_root(lt::ChainPoly{r.from_int(-6), r.zero(), r.one()}, r.pi()), lt::NoConvergence);
}

TEST_CASE("roots_in_ring finds both square roots of 3") {
    auto r = sqrt3_ring(12);
    auto roots = lt::roots_in_ring(lt::ChainPoly{r.from_int(-3), r.zero(), r.one()});
    REQUIRE(roots.size() == 2);
    for (const auto& a : roots) CHECK((a.value * a.value - r.from_int(3)).vpi() >= a.known_level);
    // X^2 + 1 has no root over Z_3[sqrt 3]: -1 is not a square mod 3
    CHECK(lt::roots_in_ring(lt::ChainPoly{r.one(), r.zero(), r.one()}).empty());
}

TEST_CASE("track_roots examples") {
    auto g = eis({-3, 0, 1});
    auto m = lt::track_roots(poly({-3, 81, 1}), g, 4);
    CHECK(m.bijective);
    CHECK(m.g_roots_found == 2);
    CHECK(m.separations_exceed_bound);
    CHECK(m.field_match);
    for (const auto& p : m.pairs) CHECK(p.separation.at_least_value(Rational(7, 2)));

    auto id = lt::track_roots(poly({-3, 0, 1}), g, 4);
    for (const auto& p : id.pairs) CHECK(p.separation.is_lower_bound());
    CHECK(id.field_match);

    try {
        lt::track_roots(poly({-6, 0, 1}), g, 1);
        FAIL("expected KrasnerFail");
    } catch (const lt::KrasnerFail& e) {
        CHECK(e.threshold == Rational(1));
    }
    CHECK_THROWS_AS(lt::track_roots(poly({-3, 0, 0, 1}), g, 2), lt::DegreeMismatch);
    CHECK_THROWS_AS(lt::track_roots(poly({-3, 1, 1}), g, 2), lt::PreconditionFailed);
}

TEST_CASE("track_roots is Galois equivariant under pi -> -pi") {
    auto g = eis({-3, 0, 1});
    auto m = lt::track_roots(poly({-3 + 81 * 5, 81 * 2, 1}), g, 4);
    REQUIRE(m.pairs.size() == 2);
    auto conj = [](const lt::ChainRingElem& x) {
        return x.ring().from_coords({x.coords()[0], -x.coords()[1]});
    };
    for (const auto& p : m.pairs) {
        const auto* other = &m.pairs[0];
        for (const auto& q : m.pairs)
            if ((q.g_root.value - conj(p.g_root.value)).vpi() >= q.g_root.known_level) other = &q;
        CHECK((other->w_root.value - conj(p.w_root.value)).vpi() >= std::min(p.w_root.known_level, other->w_root.known_level));
    }
}

TEST_CASE("roots of w in (p^N, g) satisfy v(g(y)) >= N") {
    std::mt19937_64 rng(5);
    auto g = eis({-3, 0, 1}, 10);
    for (int trial = 0; trial < 40; ++trial) {
        int N = 2 + static_cast<int>(rng() % 4);
        std::int64_t pN = 1;
        for (int i = 0; i < N; ++i) pN *= 3;
        std::int64_t h0 = static_cast<std::int64_t>(rng() % 9), h1 = static_cast<std::int64_t>(rng() % 9);
        auto w = TruncSeries::from_ints(fp(3), {-3 + pN * h0, pN * h1, 1}, 10);
        auto m = lt::track_roots(w, g, N);
        REQUIRE(m.bijective);
        for (const auto& p : m.pairs) {
            CHECK(p.g_at_w_root.at_least_value(Rational(N)));
            CHECK(p.separation.exceeds(m.krasner.bound_val));
        }
    }
}

TEST_CASE("galois_orbit_match examples") {
    auto g = poly({9, -3, -3, 1});  // (U^2 - 3)(U - 3)
    auto w = poly({9 + 729, -3, -3, 1});
    auto rep = lt::galois_orbit_match(w, g, 6, sqrt3_ring(16));
    CHECK(rep.preserved);
    CHECK(rep.threshold == Rational(3, 2));
    CHECK(rep.threshold_from_splitting_ring);
    std::vector<int> degs;
    for (const auto& f : rep.w_factors) degs.push_back(f.degree);
    std::sort(degs.begin(), degs.end());
    CHECK(degs == std::vector<int>{1, 2});
    // the discriminant fallback is 2 v(disc) = 6, which N = 6 does not exceed
    CHECK_THROWS_AS(lt::galois_orbit_match(w, g, 6), lt::KrasnerFail);

    auto irr = lt::galois_orbit_match(poly({-3 + 27, 0, 1}), poly({-3, 0, 1}), 3);
    REQUIRE(irr.w_factors.size() == 1);
    CHECK(irr.w_factors[0].degree == 2);

    // U^2 - 9a with a = -1 a non-square mod 3: one unramified quadratic orbit
    auto unr = lt::factor_pattern(poly({9, 0, 1}));
    REQUIRE(unr.size() == 1);
    CHECK(unr[0].degree == 2);
    CHECK(unr[0].root_valuation == Rational(1));
}

TEST_CASE("weight_relation examples") {
    auto k = fp(3);
    // j = 1 + p + w2 with w2 = U - p
    auto j = poly({1, 1});
    CHECK(lt::weight_relation(j, 2).congruent(poly({-3, 1}), 8, 4));
    CHECK(lt::weight_relation(j, 3).congruent(poly({-6 - 9, 1}), 8, 4));
    // w2 = p (U - 1): the weight 3 relation is p times a unit on val >= 1/e
    auto j2 = poly({1, 3});
    auto rel = lt::weight_relation(j2, 3);
    auto r = sqrt3_ring(12);
    auto relR = lt::to_chain_poly(rel, r);
    for (std::uint64_t idx = 0; idx < 200; ++idx) {
        auto y = r.pi() * r.element_at(idx * 7919 % r.size());
        CHECK(lt::evaluate(relR, y).val() == Valuation::finite(1));
    }
}
