#include "liftcheck/selmer.hpp"

#include <algorithm>
#include <random>

#include "liftcheck/localcoh.hpp"
#include "liftcheck/wlinalg.hpp"

namespace liftcheck {

namespace {

using Elem = ResidueField::Elem;

bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

FieldPtr prime_field_ptr(int p) { return std::make_shared<const ResidueField>(ResidueField::standard(p, 1)); }

GModule module_for(LedgerModule m, const FieldPtr& k) {
    return m == LedgerModule::Ad0 ? ad0_module(k) : ad_module(k);
}

// h0 of M or of Hom(M, mu_p) for the image model of G_p; the second image
// generator is the tame inertia generator, on which the cyclotomic
// character is w.
int shape_h0(const GModule& m, const VpRow& row, bool dual) {
    const auto& k = *m.field;
    int d = m.dim;
    Elem w = cyclotomic_inertia(k);
    KMatrix stacked;
    for (std::size_t i = 0; i < row.image_generators.size(); ++i) {
        auto a = m.action(row.image_generators[i]);
        if (dual) {
            auto inv = kmat_inverse(k, a, d);
            Elem eps = i == 1 ? w : Elem{1};
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) a[r * d + c] = k.mul(eps, inv[c * d + r]);
        }
        for (int r = 0; r < d; ++r) a[r * d + r] = k.sub(a[r * d + r], 1);
        stacked.insert(stacked.end(), a.begin(), a.end());
    }
    int rows = static_cast<int>(stacked.size()) / d;
    return d - kmat_rank(k, stacked, rows, d);
}

std::string prime_id(int q) { return "q" + std::to_string(q); }

}  // namespace

std::string module_name(LedgerModule m) { return m == LedgerModule::Ad0 ? "Ad0" : "Ad~"; }

int wiles_difference(const SelmerLedger& l) {
    int d = l.global_h0 - l.global_h0_dual;
    for (const auto& v : l.places) d += v.dim_L - v.h0;
    return d;
}

bool wiles_identity_holds(const SelmerLedger& l) { return l.selmer - l.dual_selmer == wiles_difference(l); }

void check_ledger(const SelmerLedger& l) {
    if (l.selmer < 0 || l.dual_selmer < 0 || l.global_h0 < 0 || l.global_h0_dual < 0)
        throw NegativeDimension("ledger has a negative dimension");
    for (const auto& v : l.places)
        if (v.dim_L < 0 || v.h0 < 0 || v.h0_dual < 0) throw NegativeDimension("place " + v.id + " has a negative dimension");
    if (!wiles_identity_holds(l))
        throw RuleMismatch("ledger (" + std::to_string(l.selmer) + ", " + std::to_string(l.dual_selmer) +
                           ") violates the Wiles identity, difference " + std::to_string(wiles_difference(l)));
}

SelmerLedger initial_ledger(LedgerModule m, int p, int local_case, int selmer, int dual_selmer) {
    if (p < 3 || !is_prime(p)) throw ConfigError("p must be an odd prime");
    auto k = prime_field_ptr(p);
    auto mod = module_for(m, k);
    auto row = vequalsp_table(local_case, p);
    SelmerLedger l;
    l.module = m;
    l.p = p;
    // H^0(G_Q, Ad) is the scalars and H^0(G_Q, Ad0) = 0; neither dual has invariants
    l.global_h0 = m == LedgerModule::Ad0 ? 0 : 1;
    l.global_h0_dual = 0;
    int hp = shape_h0(mod, row, false);
    l.places.push_back({"p", hp + (m == LedgerModule::Ad0 ? 1 : 2), hp, shape_h0(mod, row, true)});
    auto inf = archimedean_module(mod);
    l.places.push_back({"inf", 0, local_h0(inf), local_h0(dual_module(inf))});
    l.selmer = selmer;
    l.dual_selmer = dual_selmer;
    check_ledger(l);
    return l;
}

PlaceEntry nice_place_entry(LedgerModule m, int p, int q) {
    auto k = prime_field_ptr(p);
    auto spec = local_module(module_for(m, k), Place::AwayFromP, q, {k->from_int(q), 0, 0, 1});
    auto d = local_dims(spec);
    return {prime_id(q), m == LedgerModule::Ad0 ? d.dim_L : d.dim_L_tilde, d.h0, local_h0(dual_module(spec))};
}

std::string rule_name(NiceRule r) {
    switch (r) {
        case NiceRule::PairedDrop: return "paired_drop";
        case NiceRule::Unchanged: return "unchanged";
        case NiceRule::PairedRise: return "paired_rise";
    }
    return "?";
}

NiceRule select_rule(LedgerModule m, const NicePrimeEvent& ev) {
    if (ev.h_nonzero_at_q && ev.phi_nonzero_at_q) {
        if (ev.new_tilde_class) throw RuleMismatch("new_tilde_class applies only to the unchanged rule");
        return NiceRule::PairedDrop;
    }
    if (!ev.h_nonzero_at_q && ev.phi_nonzero_at_q && ev.selmer_vanishes_at_q) {
        if (m == LedgerModule::Ad0) {
            if (ev.new_tilde_class) throw RuleMismatch("new_tilde_class is meaningless for Ad0");
            return NiceRule::Unchanged;
        }
        if (!ev.new_tilde_class) throw RuleMismatch("Ad~ update needs new_tilde_class attested");
        return *ev.new_tilde_class ? NiceRule::PairedRise : NiceRule::Unchanged;
    }
    throw RuleMismatch("flags at q" + std::to_string(ev.q) + " match no update rule");
}

NiceUpdate apply_nice_prime(const SelmerLedger& l, const NicePrimeEvent& ev) {
    check_ledger(l);
    if (!is_prime(ev.q) || ev.q == l.p || nice_test(l.p, ev.q, {ev.q, 1}) == NiceVerdict::Neither)
        throw RuleMismatch(std::to_string(ev.q) + " is not a nice prime for p = " + std::to_string(l.p));
    auto id = prime_id(ev.q);
    if (std::any_of(l.places.begin(), l.places.end(), [&](const PlaceEntry& v) { return v.id == id; }))
        throw RuleMismatch(id + " is already in the ledger");
    NiceUpdate u;
    u.rule = select_rule(l.module, ev);
    u.ledger = l;
    int delta = u.rule == NiceRule::PairedDrop ? -1 : u.rule == NiceRule::PairedRise ? 1 : 0;
    u.ledger.selmer += delta;
    u.ledger.dual_selmer += delta;
    if (u.ledger.selmer < 0 || u.ledger.dual_selmer < 0)
        throw NegativeDimension("dimension drop at " + id + " below zero");
    u.ledger.places.push_back(nice_place_entry(l.module, l.p, ev.q));
    if (ev.h1_dual_vanishes_at_q) u.inflation_codimension = 1;
    check_ledger(u.ledger);
    return u;
}

TraceEntry trace_entry(const std::string& label, const SelmerLedger& l) {
    return {label, l.selmer, l.dual_selmer, wiles_difference(l), wiles_identity_holds(l)};
}

std::vector<int> nice_primes(int p, std::size_t count) {
    std::vector<int> out;
    for (int q = 2; out.size() < count; ++q)
        if (is_prime(q) && q % p != 0 && q % p != 1) out.push_back(q);
    return out;
}

EasyRun simulate_theorem_easy(int s, int p, int local_case) {
    if (s < 0) throw PreconditionFailed("initial dual Selmer dimension must be nonnegative");
    EasyRun run;
    auto l = initial_ledger(LedgerModule::AdTilde, p, local_case, s + 1, s);
    run.trace.push_back(trace_entry("S", l));
    run.primes = nice_primes(p, static_cast<std::size_t>(s));
    for (int q : run.primes) {
        NicePrimeEvent ev;
        ev.q = q;
        ev.h_nonzero_at_q = true;
        ev.phi_nonzero_at_q = true;
        l = apply_nice_prime(l, ev).ledger;
        run.trace.push_back(trace_entry(prime_id(q), l));
    }
    run.final_ledger = l;
    run.tangent_dim_one = l.selmer == 1 && l.dual_selmer == 0;
    return run;
}

// ------------------------------------------------------------------ small extension ladder

std::string LadderGenerator::str() const {
    std::string out;
    if (r) out += "p^" + std::to_string(r) + " ";
    if (s) out += "U^" + std::to_string(s) + " ";
    return out + (on_g ? "g" : "U^n");
}

std::vector<WittScalar> ladder_value(const IdealLadder& l, const LadderGenerator& x) {
    const auto& k = l.g.front().field_ptr();
    int K = l.ambient;
    std::vector<WittScalar> out(K, WittScalar::zero(k, K));
    std::vector<WittScalar> base;
    if (x.on_g) {
        base = l.g;
    } else {
        base.assign(l.n + 1, WittScalar::zero(k, K));
        base[l.n] = WittScalar::one(k, K);
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(x.s);
        if (j < out.size()) out[j] = base[i].times_p_pow(x.r);
    }
    return out;
}

namespace {

// The ideal generated by polys inside (W/p^K)[U]/(U^K), as a W-span of all
// U-shifts. Membership there decides membership in W[[U]] for ideals that
// contain p^K and U^K.
SpanReducer ideal_span(const FieldPtr& k, int K, const std::vector<std::vector<WittScalar>>& polys) {
    SpanReducer span(k, static_cast<std::size_t>(K), K);
    for (const auto& f : polys) {
        for (int sh = 0; sh < K; ++sh) {
            WVector v(K, WittScalar::zero(k, K));
            for (int i = 0; i + sh < K; ++i) v[i + sh] = f[i];
            span.insert(v);
        }
    }
    return span;
}

SpanReducer ideal_span(const IdealLadder& l, const std::vector<LadderGenerator>& gens) {
    std::vector<std::vector<WittScalar>> polys;
    for (const auto& x : gens) polys.push_back(ladder_value(l, x));
    return ideal_span(l.g.front().field_ptr(), l.ambient, polys);
}

}  // namespace

IdealLadder small_extension_ladder(const EisensteinPoly& g, int n, int N) {
    if (n < 1) throw PreconditionFailed("n must be positive");
    if (N < n) throw PreconditionFailed("N = " + std::to_string(N) + " is below n = " + std::to_string(n));
    IdealLadder l;
    const auto& k = g.field_ptr();
    l.p = k->p();
    l.e = g.degree();
    l.n = n;
    l.N = N;
    l.top = N + N * l.e;
    // p^{top + ceil(n/e)} and U^{top + n} lie in every ideal of the ladder
    l.ambient = l.top + n;
    if (g.precision() < l.ambient)
        throw PrecisionExhausted("g is known mod p^" + std::to_string(g.precision()) + ", the ladder needs p^" +
                                 std::to_string(l.ambient));
    for (const auto& c : g.coeffs()) l.g.push_back(c.with_precision(l.ambient));

    std::vector<LadderGenerator> cur{{0, 0, true}, {0, 0, false}};
    l.ideals.push_back(cur);
    l.all_small = true;
    for (int d = 0; d < l.top; ++d) {
        for (bool on_g : {true, false}) {
            std::vector<LadderGenerator> level;
            for (const auto& x : cur)
                if (x.on_g == on_g && x.r + x.s == d) level.push_back(x);
            std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return a.r > b.r; });
            for (const auto& x : level) {
                std::vector<LadderGenerator> next;
                for (const auto& y : cur)
                    if (!(y == x)) next.push_back(y);
                LadderGenerator px{x.r + 1, x.s, on_g}, ux{x.r, x.s + 1, on_g};
                for (const auto& y : {px, ux})
                    if (std::find(next.begin(), next.end(), y) == next.end()) next.push_back(y);
                auto span = ideal_span(l, next);
                LadderStep st;
                st.kernel = x;
                st.p_kills = span.contains(ladder_value(l, px));
                st.u_kills = span.contains(ladder_value(l, ux));
                st.kernel_nonzero = !span.contains(ladder_value(l, x));
                l.all_small = l.all_small && st.p_kills && st.u_kills;
                l.steps.push_back(st);
                l.ideals.push_back(next);
                cur = std::move(next);
            }
        }
    }

    auto pN = [&](int a, int b) {
        std::vector<WittScalar> f(l.ambient, WittScalar::zero(k, l.ambient));
        if (b < l.ambient) f[b] = WittScalar::one(k, l.ambient).times_p_pow(a);
        return f;
    };
    auto box = ideal_span(k, l.ambient, {pN(N, 0), pN(0, N * l.e)});
    l.end_in_box = std::all_of(cur.begin(), cur.end(), [&](const auto& x) { return box.contains(ladder_value(l, x)); });
    auto start = ideal_span(l, l.ideals.front());
    l.box_in_start = start.contains(pN(N, 0)) && start.contains(pN(0, N * l.e));
    return l;
}

// ------------------------------------------------------------------ endgame

HardReport simulate_theorem_hard(const EisensteinPoly& g, const HardOptions& opt) {
    if (opt.case_id != 1 && opt.case_id != 2) throw ConfigError("case must be 1 or 2");
    if (opt.n < 1 || opt.N < opt.n) throw PreconditionFailed("need 1 <= n <= N");
    const auto& k = g.field_ptr();
    int p = k->p(), e = g.degree();
    HardReport rep;
    rep.case_id = opt.case_id;

    auto tilde = initial_ledger(LedgerModule::AdTilde, p, opt.local_case, 1, 0);
    auto ad0 = initial_ledger(LedgerModule::Ad0, p, opt.local_case, 1, 1);
    rep.tilde_trace.push_back(trace_entry("Y_N", tilde));
    rep.ad0_trace.push_back(trace_entry("Y_N", ad0));
    auto qs = nice_primes(p, 2);

    NicePrimeEvent first;
    first.q = qs[0];
    first.phi_nonzero_at_q = true;
    first.selmer_vanishes_at_q = true;
    ad0 = apply_nice_prime(ad0, first).ledger;
    first.new_tilde_class = opt.case_id == 2;
    auto u1 = apply_nice_prime(tilde, first);
    tilde = u1.ledger;
    rep.rules.push_back(u1.rule);
    rep.tilde_trace.push_back(trace_entry(prime_id(qs[0]), tilde));
    rep.ad0_trace.push_back(trace_entry(prime_id(qs[0]), ad0));

    if (opt.case_id == 2) {
        NicePrimeEvent second;
        second.q = qs[1];
        second.phi_nonzero_at_q = true;
        second.selmer_vanishes_at_q = true;
        second.h1_dual_vanishes_at_q = true;
        ad0 = apply_nice_prime(ad0, second).ledger;
        // the new class h has nonzero trace-zero part at q2, so h lies outside L~
        second.h_nonzero_at_q = true;
        auto u2 = apply_nice_prime(tilde, second);
        tilde = u2.ledger;
        rep.rules.push_back(u2.rule);
        rep.tilde_trace.push_back(trace_entry(prime_id(qs[1]), tilde));
        rep.ad0_trace.push_back(trace_entry(prime_id(qs[1]), ad0));
    }
    rep.terminal_ok = tilde.selmer == 1 && tilde.dual_selmer == 0;

    int prec = g.precision();
    std::mt19937_64 rng(opt.seed);
    std::vector<std::int64_t> c(e, 0);
    c[0] = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p - 1));
    for (int i = 1; i < e; ++i) c[i] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p * p));
    for (int i = 0; i <= e; ++i) {
        auto wi = g.coeffs()[i];
        if (i < e) wi += WittScalar::from_int(k, c[i], prec).times_p_pow(opt.N);
        rep.w.push_back(wi);
    }
    TruncSeries w(k, rep.w, TruncSeries::kExact, prec);
    rep.degree_e = is_distinguished(w).degree == e;
    rep.match = track_roots(w, g, opt.N);

    rep.root_closeness = Rational(opt.n, e);
    for (const auto& pr : rep.match.pairs) {
        const auto& a = pr.g_root;
        if ((a.value - a.value.ring().pi()).vpi() >= a.known_level) rep.root_close = pr.separation.exceeds(rep.root_closeness);
    }
    rep.iso = order_isomorphic(g.coeffs(), rep.w, prec);
    rep.field_equal = rep.iso.homomorphism && rep.iso.surjective_mod_p && rep.match.field_match;
    return rep;
}

// ------------------------------------------------------------------ adjoint decomposition

std::pair<ResidueMat, ResidueMat> decompose_adjoint(const ResidueField& k, const ResidueMat& h) {
    if (k.p() == 2) throw PreconditionFailed("the scalar projection needs p odd");
    Elem half_tr = k.mul(k.add(h[0], h[3]), k.inv(k.from_int(2)));
    ResidueMat sc{half_tr, 0, 0, half_tr};
    ResidueMat ad0{k.sub(h[0], half_tr), h[1], h[2], k.sub(h[3], half_tr)};
    return {ad0, sc};
}

}  // namespace liftcheck
