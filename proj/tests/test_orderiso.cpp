#include "doctest.h"
#include "liftcheck/orderiso.hpp"
#include "liftcheck/padpoly.hpp"
#include "test_util.hpp"

namespace {

lt::WPoly wp(const std::vector<std::int64_t>& c, int prec = 12) { return lt::poly_from_ints(fp(3), c, prec); }

int v3(std::int64_t n) {
    if (n == 0) return 99;
    int v = 0;
    while (n % 3 == 0) {
        n /= 3;
        ++v;
    }
    return v;
}

// y'(y) in A_f, for y' a coordinate vector read as a polynomial
lt::WVector compose(const lt::FiniteAlgebra& a, const lt::WVector& outer, const lt::WVector& inner) {
    return a.evaluate(lt::WPoly(outer.begin(), outer.end()), inner);
}

}  // namespace

TEST_CASE("find_root_in_algebra examples") {
    lt::FiniteAlgebra a(wp({-3, 0, 1}));
    auto y = lt::find_root_in_algebra(wp({-3 - 243, 0, 1}), a);
    CHECK(a.valuation(a.sub(y, a.generator())) >= 3);
    CHECK(a.valuation(a.evaluate(wp({-3 - 243, 0, 1}), y)) >= 12);
    CHECK(lt::find_root_in_algebra(wp({-3, 0, 1}), a) == a.generator());
    for (int prec = 4; prec <= 14; ++prec) {
        lt::FiniteAlgebra ap(wp({-3, 0, 1}, prec));
        CHECK_THROWS_AS(lt::find_root_in_algebra(wp({-6, 0, 1}, prec), ap), lt::NoConvergence);
    }
}

TEST_CASE("order_isomorphic examples") {
    auto m = lt::order_isomorphic(wp({-3, 0, 1}), wp({-3 - 243, 0, 1}), 12);
    CHECK(m.homomorphism);
    CHECK(m.surjective_mod_p);
    CHECK(m.verified_mod == 12);
    auto id = lt::order_isomorphic(wp({-3, 0, 1}), wp({-3, 0, 1}), 12);
    CHECK(id.shift_valuation == 12);
    CHECK_THROWS_AS(lt::order_isomorphic(wp({-3, 0, 1}), wp({-6, 0, 1}), 12), lt::NotClose);
    CHECK_THROWS_AS(lt::order_isomorphic(wp({9, 6, 1}), wp({9, 6, 1}), 12), lt::NotSquarefree);
}

TEST_CASE("discriminant valuation agrees with the closed formulas") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        std::int64_t b = static_cast<std::int64_t>(rng() % 200) - 100, c = static_cast<std::int64_t>(rng() % 200) - 100;
        std::int64_t dq = b * b - 4 * c;
        if (dq == 0 || v3(dq) >= 10) continue;
        CHECK(lt::discriminant_valuation(wp({c, b, 1}, 14)) == lt::Valuation::finite(v3(dq)));
        std::int64_t dc = -4 * b * b * b - 27 * c * c;
        if (dc == 0 || v3(dc) >= 10) continue;
        CHECK(lt::discriminant_valuation(wp({c, b, 0, 1}, 14)) == lt::Valuation::finite(v3(dc)));
    }
}

TEST_CASE("closeness_threshold examples") {
    auto a = lt::closeness_threshold(wp({-3, 0, 1}));
    CHECK(a.disc_valuation == 1);
    CHECK(a.analytic == 3);
    CHECK(a.empirical <= 3);
    auto b = lt::closeness_threshold(wp({-1, 1}));
    CHECK(b.analytic == 1);
    CHECK(b.empirical == 1);
    auto c = lt::closeness_threshold(wp({-18, 0, 1}));  // 9a with a = 2 a non-square mod 3
    CHECK(c.disc_valuation == 2);
    CHECK(c.analytic == 5);
    CHECK(c.empirical <= 5);
}

TEST_CASE("perturbations beyond the analytic threshold are isomorphic") {
    std::mt19937_64 rng(17);
    std::vector<std::vector<std::int64_t>> fs{{-3, 0, 1}, {-3, 0, 0, 1}, {-18, 0, 1}, {1, 1, 1}, {-1, 1}, {3, 6, -3, 1}};
    for (const auto& fc : fs) {
        auto f = wp(fc, 14);
        int depth = lt::closeness_threshold(f).analytic;
        std::int64_t pd = 1;
        for (int i = 0; i < depth; ++i) pd *= 3;
        for (int t = 0; t < 20; ++t) {
            auto gc = fc;
            for (std::size_t i = 0; i + 1 < gc.size(); ++i) gc[i] += pd * static_cast<std::int64_t>(rng() % 1000);
            auto g = wp(gc, 14);
            auto m = lt::order_isomorphic(f, g, 14);
            REQUIRE(m.homomorphism);
            REQUIRE(m.surjective_mod_p);
            // the inverse map X -> y' in A_g composes to the identity mod p
            auto inv = lt::order_isomorphic(g, f, 14);
            lt::FiniteAlgebra af(f);
            auto back = compose(af, inv.image_of_generator, m.image_of_generator);
            CHECK(af.valuation(af.sub(back, af.generator())) >= 1);
        }
    }
}
