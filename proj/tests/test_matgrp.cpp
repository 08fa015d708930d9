#include <random>
#include <set>

#include "doctest.h"
#include "liftcheck/matgrp.hpp"
#include "test_util.hpp"

namespace {

lt::ChainRing tpoly(int p, int len, int f = 1) { return lt::truncated_polynomial_ring(fq(p, f), len); }

lt::Mat2 random_sl2(const lt::ChainRing& r, std::mt19937_64& rng) {
    while (true) {
        auto a = random_elem(r, rng), b = random_elem(r, rng), c = random_elem(r, rng);
        if (!a.is_unit()) continue;
        return {a, b, c, (r.one() + b * c) * a.inverse()};
    }
}

// Exhaustive count of 2x2 matrices with unit (or unit one) determinant.
std::pair<std::uint64_t, std::uint64_t> count_gl_sl(const lt::ChainRing& r) {
    lt::RingTable t(r);
    std::uint64_t gl = 0, sl = 0;
    auto n = t.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    auto det = t.mat_det(lt::RingTable::pack(a, b, c, d));
                    gl += t.is_unit(det);
                    sl += det == t.one();
                }
    return {gl, sl};
}

}  // namespace

TEST_CASE("closure examples") {
    auto f3 = lt::witt_quotient(fp(3), 1);
    auto sl = lt::FiniteMatGroup::close(lt::sl2_generators(f3));
    CHECK(sl.order() == 24);
    auto gl = lt::FiniteMatGroup::close(lt::gl2_generators(f3));
    CHECK(gl.order() == 48);
    auto triv = lt::FiniteMatGroup::close({lt::Mat2::identity(f3)});
    CHECK(triv.order() == 1);
    CHECK_THROWS_AS(lt::FiniteMatGroup::close(lt::gl2_generators(f3), 20), lt::CapExceeded);
    CHECK_THROWS_AS(lt::FiniteMatGroup::close({lt::Mat2::from_ints(f3, 1, 1, 1, 1)}), lt::PreconditionFailed);
}

TEST_CASE("closure is closed and the BFS tree is consistent") {
    auto r = tpoly(3, 2);
    auto g = lt::FiniteMatGroup::close(lt::gl2_generators(r));
    const auto& t = g.table();
    for (std::size_t i = 1; i < g.order(); ++i)
        REQUIRE(t.mat_mul(g.keys()[g.parent(i)], g.generator_key(g.via(i))) == g.keys()[i]);
    std::mt19937_64 rng(4);
    for (int s = 0; s < 500; ++s) {
        auto x = g.keys()[rng() % g.order()], y = g.keys()[rng() % g.order()];
        REQUIRE(g.contains_key(t.mat_mul(x, y)));
        REQUIRE(g.contains_key(t.mat_inv(x)));
    }
}

TEST_CASE("group orders match the formulas and exhaustive counts") {
    std::vector<lt::ChainRing> rings{lt::witt_quotient(fp(3), 1), lt::witt_quotient(fp(5), 1), tpoly(3, 2),
                                     lt::witt_quotient(fp(3), 2), lt::witt_quotient(fq(2 + 1, 2), 1)};
    for (const auto& r : rings) {
        auto [gl, sl] = count_gl_sl(r);
        CHECK(gl == lt::gl2_order(r));
        CHECK(sl == lt::sl2_order(r));
        CHECK(lt::FiniteMatGroup::close(lt::gl2_generators(r)).order() == gl);
        CHECK(lt::FiniteMatGroup::close(lt::sl2_generators(r)).order() == sl);
    }
    CHECK(lt::FiniteMatGroup::close(lt::sl2_generators(tpoly(3, 3))).order() == 17496);
    CHECK(lt::sl2_order(tpoly(3, 3)) == 24ull * 729);
}

TEST_CASE("is_full examples") {
    auto f3 = lt::witt_quotient(fp(3), 1);
    CHECK(lt::is_full(lt::FiniteMatGroup::close(lt::gl2_generators(f3))));
    auto torus = lt::FiniteMatGroup::close({lt::diagonal(f3.from_int(2), f3.one()), lt::diagonal(f3.one(), f3.from_int(2))});
    CHECK(torus.order() == 4);
    CHECK_FALSE(lt::is_full(torus));
    // lifts of SL_2(F_3) generators with no U-part generate a copy of SL_2(F_3)
    auto r = tpoly(3, 2);
    auto lifted = lt::FiniteMatGroup::close({lt::Mat2::from_ints(r, 1, 1, 0, 1), lt::Mat2::from_ints(r, 1, 0, 1, 1)});
    CHECK(lifted.order() == 24);
    CHECK_FALSE(lt::is_full(lifted));
    auto u = r.pi();
    auto with_u = lt::FiniteMatGroup::close({lt::Mat2::from_ints(r, 1, 1, 0, 1), lt::Mat2::from_ints(r, 1, 0, 1, 1),
                                             lt::elementary12(u)});
    CHECK(with_u.order() == 648);
    CHECK(lt::is_full(with_u));
}

TEST_CASE("reduction commutes with closure") {
    std::mt19937_64 rng(11);
    auto r = tpoly(3, 3);
    for (int t = 0; t < 10; ++t) {
        std::vector<lt::Mat2> gens{random_sl2(r, rng), random_sl2(r, rng)};
        auto g = lt::FiniteMatGroup::close(gens);
        std::vector<lt::Mat2> red;
        for (const auto& m : gens) red.push_back(m.reduce(2));
        auto q = lt::FiniteMatGroup::close(red);
        lt::RingTable t2(r.at_level(2));
        std::set<lt::MatKey> image;
        for (std::size_t i = 0; i < g.order(); ++i) image.insert(t2.key(g.element(i).reduce(2)));
        CHECK(image.size() == q.order());
        for (auto k : image) CHECK(q.contains_key(k));
        // reduction is a homomorphism
        auto x = g.element(rng() % g.order()), y = g.element(rng() % g.order());
        CHECK((x * y).reduce(2) == x.reduce(2) * y.reduce(2));
    }
}

TEST_CASE("boston_check on random generators over F_3[U]/U^3") {
    std::mt19937_64 rng(2024);
    auto r = tpoly(3, 3);
    int applicable = 0, tried = 0;
    while (applicable < 20 && tried < 400) {
        ++tried;
        std::vector<lt::Mat2> gens{random_sl2(r, rng), random_sl2(r, rng)};
        auto v = lt::boston_check(gens);
        CHECK(v.sl2_order == 17496);
        if (!v.applicable) continue;
        ++applicable;
        CHECK(v.contains_sl2);
        CHECK_FALSE(v.counterexample.has_value());
        CHECK(v.method == "enumerated");
        CHECK(v.closure_order == 17496);
    }
    CHECK(applicable == 20);
}

TEST_CASE("boston_check gates and degenerate cases") {
    auto f3 = lt::witt_quotient(fp(3), 1);
    auto v = lt::boston_check(lt::gl2_generators(f3));
    CHECK(v.applicable);
    CHECK(v.contains_sl2);
    auto r = tpoly(3, 3);
    auto u = r.from_int(2);
    auto t = lt::boston_check({lt::diagonal(u, u), lt::diagonal(u, r.one())});
    CHECK_FALSE(t.applicable);
    CHECK(t.closure_order == 0);
}

TEST_CASE("find_section examples") {
    auto s = lt::find_section(tpoly(3, 2));
    CHECK(s.split);
    CHECK(s.method == "ring-section");
    CHECK(s.pairs_checked == 2304);
    auto z9 = lt::find_section(lt::witt_quotient(fp(3), 2));
    CHECK(z9.split);
    CHECK(z9.method == "generator-lift");
    CHECK(z9.section_order == 48);
    REQUIRE(z9.images.size() == 2);
    CHECK(z9.images[0].reduce(1) == z9.presentation[0]);
    CHECK(z9.images[1].reduce(1) == z9.presentation[1]);
    // a ring section is unavailable for Z/9, and forcing the lift search on F_3[U]/U^2 also splits
    lt::SectionOptions no_ring;
    no_ring.try_ring_section = false;
    CHECK(lt::find_section(tpoly(3, 2), no_ring).split);
    CHECK_THROWS_AS(lt::find_section(lt::witt_quotient(fp(3), 3)), lt::PreconditionFailed);
}

TEST_CASE("find_section verdicts do not depend on the presentation") {
    lt::SectionOptions alt;
    alt.presentation = 1;
    CHECK(lt::find_section(lt::witt_quotient(fp(3), 2), alt).split);
    auto z25 = lt::find_section(lt::witt_quotient(fp(5), 2));
    CHECK_FALSE(z25.split);
    CHECK(z25.lifts_searched > 0);
    auto z25b = lt::find_section(lt::witt_quotient(fp(5), 2), alt);
    CHECK_FALSE(z25b.split);
}
