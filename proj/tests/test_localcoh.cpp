#include <random>

#include "doctest.h"
#include "liftcheck/localcoh.hpp"
#include "test_util.hpp"

namespace {

using lt::Place;

lt::ResidueMat diag(const lt::ResidueField& k, std::int64_t a, std::int64_t b) { return {k.from_int(a), 0, 0, k.from_int(b)}; }

lt::LocalModuleSpec random_spec(std::mt19937_64& rng) {
    static const int primes[] = {3, 5, 7};
    int p = primes[rng() % 3];
    auto k = fp(p);
    Place v = rng() % 2 ? Place::AwayFromP : Place::AtP;
    int q = v == Place::AtP ? p : std::vector<int>{2, 7, 11, 13, 17, 19}[rng() % 6];
    if (q == p) q = 23;
    auto m = rng() % 2 ? lt::ad0_module(k) : lt::ad_module(k);
    auto a = static_cast<std::int64_t>(1 + rng() % (p - 1));
    std::optional<lt::ResidueMat> inertia;
    if (v == Place::AtP) inertia = lt::ResidueMat{k->from_int(static_cast<std::int64_t>(1 + rng() % (p - 1))),
                                                  static_cast<lt::ResidueField::Elem>(rng() % 2), 0, 1};
    return lt::local_module(m, v, q, diag(*k, a, 1), inertia);
}

}  // namespace

TEST_CASE("dual_module examples") {
    auto k = fp(5);
    int q = 2;
    auto ad0 = lt::local_module(lt::ad0_module(k), Place::AwayFromP, q, diag(*k, q, 1));
    auto d = lt::dual_module(ad0);
    // basis E12, H, E21 carries Fr eigenvalues q, 1, 1/q; the dual carries 1, q, q^2
    CHECK(d.frobenius == lt::KMatrix{1, 0, 0, 0, 2, 0, 0, 0, 4});
    auto triv = lt::local_module(lt::trivial_module(k), Place::AwayFromP, 7, diag(*k, 1, 1));
    CHECK(lt::dual_module(triv).frobenius == lt::KMatrix{k->from_int(7)});
    CHECK(lt::dual_module(triv).twist == 1);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        auto s = random_spec(rng);
        auto dd = lt::dual_module(lt::dual_module(s));
        REQUIRE(dd.frobenius == s.frobenius);
        REQUIRE(dd.inertia == s.inertia);
        REQUIRE(dd.twist == s.twist);
    }
}

TEST_CASE("local_dims examples at nice primes") {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{3, 2}, {3, 5}, {5, 2}, {5, 3}, {7, 3}, {7, 13}}) {
        auto k = fp(p);
        auto ad0 = lt::local_dims(lt::local_module(lt::ad0_module(k), Place::AwayFromP, q, diag(*k, q, 1)));
        CHECK(ad0.h0 == 1);
        CHECK(ad0.dim_L == 1);
        auto ad = lt::local_dims(lt::local_module(lt::ad_module(k), Place::AwayFromP, q, diag(*k, q, 1)));
        CHECK(ad.h0 == 2);
        CHECK(ad.dim_L_tilde == 2);
        CHECK(ad.dim_L_tilde == ad0.dim_L + 1);
    }
}

TEST_CASE("local_dims of the cyclotomic character at p") {
    auto k = fp(3);
    lt::LocalModuleSpec mu;
    mu.place = Place::AtP;
    mu.q_v = 3;
    mu.field = k;
    mu.dim = 1;
    mu.frobenius = {1};
    mu.inertia = lt::KMatrix{lt::cyclotomic_inertia(*k)};
    mu.twist = 1;
    auto d = lt::local_dims(mu);
    CHECK(d.h0 == 0);
    CHECK(d.h2 == 1);
    CHECK(d.h1 == 2);
}

TEST_CASE("local dimension identities") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 300; ++t) {
        auto s = random_spec(rng);
        auto d = lt::local_dims(s);
        auto dd = lt::local_dims(lt::dual_module(s));
        int delta = s.place == Place::AtP ? 1 : 0;
        REQUIRE(d.h2 == lt::local_h0(lt::dual_module(s)));
        REQUIRE(d.h1 == d.h0 + d.h2 + delta * s.dim);
        REQUIRE(d.h1 >= d.h1_nr);
        if (s.place == Place::AwayFromP) REQUIRE(d.h1_nr == d.h0);
        REQUIRE(d.h1 == dd.h1);
        REQUIRE(d.dim_L + d.dim_L_perp() == dd.h1);
        REQUIRE(d.dim_L_perp() >= 0);
        REQUIRE(d.dim_L - d.h0 == delta);
    }
}

TEST_CASE("tame relation is enforced away from p") {
    auto k = fp(3);
    CHECK_NOTHROW(lt::local_module(lt::ad0_module(k), Place::AwayFromP, 2, diag(*k, 2, 1), lt::ResidueMat{1, 1, 0, 1}));
    CHECK_THROWS_AS(lt::local_module(lt::ad0_module(k), Place::AwayFromP, 2, diag(*k, 1, 1), lt::ResidueMat{1, 1, 0, 1}),
                    lt::PreconditionFailed);
}

TEST_CASE("unramified H^1 agrees with cyclic group cohomology") {
    auto r = lt::truncated_polynomial_ring(fp(3), 2);
    auto k = fp(3);
    for (int q : {2, 5, 7, 11, 13}) {
        // diag(q (1 + U), 1) has order divisible by 3 times the order of its action
        auto fr = lt::diagonal(r.from_int(q) * (r.one() + r.pi()), r.one());
        auto g = lt::FiniteMatGroup::close({fr});
        for (const auto& m : {lt::ad0_module(k), lt::ad_module(k)}) {
            auto spec = lt::local_module(m, Place::AwayFromP, q, diag(*k, q, 1));
            CHECK(lt::local_dims(spec).h1_nr == lt::h1(g, m).dim_h1);
        }
    }
}

TEST_CASE("nice_test examples") {
    CHECK(lt::nice_test(5, 2, {2, 1}) == lt::NiceVerdict::Nice);
    CHECK(lt::nice_test(3, 7, {7, 1}) == lt::NiceVerdict::Neither);
    CHECK(lt::nice_test(3, 5, {5, 1}) == lt::NiceVerdict::Nice);  // 5 = -1 mod 3
    CHECK(lt::nice_test(5, 2, {3, 1}) == lt::NiceVerdict::Neither);
    auto r = lt::witt_quotient(fp(5), 2);
    lt::NiceData good{{{r.from_int(2), r.one()}}, 4};
    CHECK(lt::nice_test(5, 2, {1, 2}, good) == lt::NiceVerdict::RhoRNice);
    lt::NiceData wrong_lift{{{r.from_int(7), r.one()}}, 4};
    CHECK(lt::nice_test(5, 2, {2, 1}, wrong_lift) == lt::NiceVerdict::Nice);
    lt::NiceData p_order{{{r.from_int(2), r.one()}}, 20};
    CHECK(lt::nice_test(5, 2, {2, 1}, p_order) == lt::NiceVerdict::Nice);
    CHECK_THROWS_AS(lt::nice_test(5, 5, {1, 1}), lt::PreconditionFailed);
}

TEST_CASE("local table at p") {
    struct Expected {
        int h0, raw, tilde, vars;
    };
    std::vector<Expected> exp{{2, 4, 4, 4}, {1, 3, 3, 3}, {1, 3, 3, 3}, {1, 3, 3, 3}, {2, 5, 4, 4}};
    for (int c = 1; c <= 5; ++c) {
        auto row = lt::vequalsp_table(c);
        CHECK(row.h0_ad == exp[c - 1].h0);
        CHECK(row.dim_L_tilde_raw == exp[c - 1].raw);
        CHECK(row.dim_L_tilde == exp[c - 1].tilde);
        CHECK(row.smooth_vars == exp[c - 1].vars);
        CHECK(row.dim_L_tilde == row.h0_ad + 2);
    }
    for (int p : {5, 7}) {
        CHECK(lt::vequalsp_table(1, p).dim_L_tilde_raw == 4);
        CHECK(lt::vequalsp_table(5, p).dim_L_tilde_raw == 5);
    }
    CHECK_THROWS_AS(lt::vequalsp_table(6), lt::ConfigError);
}

TEST_CASE("archimedean place") {
    auto k = fp(3);
    CHECK(lt::local_dims(lt::archimedean_module(lt::ad_module(k))).h0 == 2);
    CHECK(lt::local_dims(lt::archimedean_module(lt::ad0_module(k))).h0 == 1);
    CHECK(lt::local_dims(lt::archimedean_module(lt::ad_module(k))).dim_L == 0);
}
