#include "liftcheck/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "liftcheck/groupcoh.hpp"
#include "liftcheck/localcoh.hpp"
#include "liftcheck/matgrp.hpp"
#include "liftcheck/orderiso.hpp"
#include "liftcheck/padpoly.hpp"
#include "liftcheck/selmer.hpp"

namespace liftcheck {

// ------------------------------------------------------------------ parsing

namespace {

using IntPoly = std::vector<std::int64_t>;

IntPoly poly_add(IntPoly a, const IntPoly& b, std::int64_t sign = 1) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
    return a;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

class PolyParser {
public:
    explicit PolyParser(const std::string& s) : s_(s) {}

    IntPoly parse() {
        auto r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        while (r.size() > 1 && r.back() == 0) r.pop_back();
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("cannot parse polynomial \"" + s_ + "\": " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool starts_factor() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 'U' || c == 'X' || c == 'u' || c == 'x';
    }
    std::int64_t number() {
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_++] - '0');
            if (v > (std::int64_t{1} << 52)) fail("coefficient too large");
        }
        return v;
    }
    IntPoly power(IntPoly base) {
        if (!peek('^')) return base;
        ++pos_;
        auto e = number();
        if (e > 64) fail("exponent too large");
        IntPoly r{1};
        for (std::int64_t i = 0; i < e; ++i) r = poly_mul(r, base);
        return r;
    }
    IntPoly factor() {
        skip();
        if (peek('(')) {
            ++pos_;
            auto inner = expr();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return power(inner);
        }
        char c = pos_ < s_.size() ? s_[pos_] : '\0';
        if (c == 'U' || c == 'X' || c == 'u' || c == 'x') {
            ++pos_;
            return power({0, 1});
        }
        auto v = number();
        return power({v});
    }
    IntPoly term() {
        auto r = factor();
        while (true) {
            if (peek('*')) {
                ++pos_;
                r = poly_mul(r, factor());
            } else if (starts_factor()) {
                r = poly_mul(r, factor());
            } else {
                return r;
            }
        }
    }
    IntPoly expr() {
        std::int64_t sign = 1;
        if (peek('-')) {
            ++pos_;
            sign = -1;
        } else if (peek('+')) {
            ++pos_;
        }
        IntPoly r = poly_add({0}, term(), sign);
        while (true) {
            if (peek('+')) {
                ++pos_;
                r = poly_add(r, term());
            } else if (peek('-')) {
                ++pos_;
                r = poly_add(r, term(), -1);
            } else {
                return r;
            }
        }
    }

    std::string s_;
    std::size_t pos_ = 0;
};

std::pair<int, int> prime_power(std::int64_t q) {
    if (q < 2) throw ConfigError("expected a prime power, got " + std::to_string(q));
    int p = 2;
    while (q % p) ++p;
    int f = 0;
    while (q % p == 0) {
        q /= p;
        ++f;
    }
    if (q != 1) throw ConfigError("expected a prime power");
    return {p, f};
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        auto v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + " \"" + s + "\"");
    }
}

std::string strip(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

FieldPtr field_ptr(int p, int f) { return std::make_shared<const ResidueField>(ResidueField::standard(p, f)); }

FieldPtr parse_field(const std::string& s) {
    if (s.size() < 2 || s[0] != 'F') throw ConfigError("cannot parse field \"" + s + "\"");
    auto [p, f] = prime_power(parse_int(s.substr(s[1] == '_' ? 2 : 1), "field size"));
    return field_ptr(p, f);
}

EisensteinPoly eisenstein_from(const IntPoly& c, int p, int precision) {
    return EisensteinPoly::from_ints(field_ptr(p, 1), c, precision);
}

}  // namespace

std::vector<std::int64_t> parse_int_poly(const std::string& s) { return PolyParser(s).parse(); }

ChainRing parse_ring(const std::string& spec) {
    auto s = strip(spec);
    if (s.rfind("Z/", 0) == 0) {
        auto [p, k] = prime_power(parse_int(s.substr(2), "modulus"));
        return witt_quotient(field_ptr(p, 1), k);
    }
    auto br = s.find("[U]/");
    if (br == std::string::npos) return witt_quotient(parse_field(s), 1);
    auto base = s.substr(0, br), rel = s.substr(br + 4);
    if (base[0] == 'F') {
        if (rel.size() > 2 && rel.front() == '(' && rel.back() == ')') rel = rel.substr(1, rel.size() - 2);
        if (rel.rfind("U^", 0) != 0) throw ConfigError("expected U^n in \"" + spec + "\"");
        return truncated_polynomial_ring(parse_field(base), static_cast<int>(parse_int(rel.substr(2), "length")));
    }
    if (base[0] == 'Z') {
        int p = static_cast<int>(parse_int(base.substr(1), "prime"));
        if (rel.size() < 2 || rel.front() != '(' || rel.back() != ')') throw ConfigError("expected (g, U^n) in \"" + spec + "\"");
        rel = rel.substr(1, rel.size() - 2);
        auto comma = rel.rfind(',');
        if (comma == std::string::npos || rel.compare(comma + 1, 2, "U^") != 0)
            throw ConfigError("expected (g, U^n) in \"" + spec + "\"");
        auto g = parse_int_poly(rel.substr(0, comma));
        int n = static_cast<int>(parse_int(rel.substr(comma + 3), "level"));
        int e = static_cast<int>(g.size()) - 1;
        if (e < 1 || n < 1) throw ConfigError("bad extension in \"" + spec + "\"");
        try {
            return make_extension(field_ptr(p, 1), eisenstein_from(g, p, n / e + 2), n);
        } catch (const NotEisenstein& ex) {
            throw ConfigError(ex.what());
        }
    }
    throw ConfigError("cannot parse ring \"" + spec + "\"");
}

// ------------------------------------------------------------------ report helpers

namespace {

std::string rat(const Rational& r) { return r.str(); }

Json ledger_trace(const std::vector<TraceEntry>& t) {
    Json a = Json::array();
    for (const auto& e : t)
        a.push_back({{"label", e.label},
                     {"selmer", e.selmer},
                     {"dual_selmer", e.dual_selmer},
                     {"wiles_difference", e.wiles_difference},
                     {"identity_holds", e.identity_holds}});
    return a;
}

Json witt_list(const std::vector<WittScalar>& c) {
    Json a = Json::array();
    for (const auto& x : c) a.push_back(x.str());
    return a;
}

template <class T>
T param(const Json& p, const std::string& key, T fallback) {
    if (!p.contains(key) || p[key].is_null()) return fallback;
    try {
        return p[key].get<T>();
    } catch (const Json::exception&) {
        throw ConfigError("parameter " + key + " has the wrong type");
    }
}

int odd_prime(const Json& params, const std::string& key = "p") {
    int p = param(params, key, 3);
    if (p < 3 || prime_power(p).second != 1) throw ConfigError(key + " must be an odd prime");
    return p;
}

Mat2 random_sl2(const ChainRing& r, std::mt19937_64& rng) {
    while (true) {
        auto a = r.element_at(rng() % r.size()), b = r.element_at(rng() % r.size()), c = r.element_at(rng() % r.size());
        if (!a.is_unit()) continue;
        return {a, b, c, (r.one() + b * c) * a.inverse()};
    }
}

Json mat_json(const Mat2& m) { return m.str(); }

// ------------------------------------------------------------------ verifications

Json verify_h1_sl2(const Json& params) {
    int p = odd_prime(params);
    auto r = witt_quotient(field_ptr(p, 1), 1);
    auto g = FiniteMatGroup::close(sl2_generators(r));
    auto v = h1_vanishing_check(g, false);
    return {{"group", "SL2(F" + std::to_string(p) + ")"},
            {"order", g.order()},
            {"dim_h1", v.dim_h1},
            {"full", v.full},
            {"conclusion_applies", v.conclusion_applies},
            {"pass", v.conclusion_applies && v.dim_h1 == 0}};
}

Json verify_h1_gl2(const Json& params) {
    auto qs = param(params, "q", std::vector<int>{3, 5, 7, 9});
    bool attest = param(params, "attest", true);
    Json rows = Json::array();
    bool pass = !qs.empty();
    for (int q : qs) {
        auto [p, f] = prime_power(q);
        if (p == 2) throw ConfigError("q must be odd");
        auto r = witt_quotient(field_ptr(p, f), 1);
        auto g = FiniteMatGroup::close(gl2_generators(r));
        auto v = h1_vanishing_check(g, attest);
        pass = pass && v.conclusion_applies && v.dim_h1 == 0;
        rows.push_back({{"q", q},
                        {"order", g.order()},
                        {"dim_h1", v.dim_h1},
                        {"needs_diagonal_hypothesis", v.needs_diagonal_hypothesis},
                        {"hypothesis_holds", v.hypothesis_holds},
                        {"diagonal_witness", v.diagonal_witness ? Json(v.diagonal_witness->str()) : Json()},
                        {"conclusion_applies", v.conclusion_applies}});
    }
    return {{"groups", rows}, {"pass", pass}};
}

Json verify_h1_level_two(const Json& params) {
    int p = odd_prime(params);
    auto k = field_ptr(p, 1);
    auto r = truncated_polynomial_ring(k, 2);
    Json rows = Json::array();
    bool pass = true;
    for (bool gl : {true, false}) {
        auto g = FiniteMatGroup::close(gl ? gl2_generators(r) : sl2_generators(r));
        auto cs = h1(g, ad0_module(k));
        bool full = is_full(g);
        pass = pass && full && cs.dim_h1 == 1;
        rows.push_back({{"group", gl ? "GL2" : "SL2"},
                        {"order", g.order()},
                        {"full", full},
                        {"dim_z1", cs.dim_z1},
                        {"dim_b1", cs.dim_b1},
                        {"dim_h1", cs.dim_h1}});
    }
    return {{"ring", r.describe()}, {"groups", rows}, {"pass", pass}};
}

Json verify_boston(const Json& params) {
    auto r = parse_ring(param(params, "ring", std::string("F3[U]/U^3")));
    int count = param(params, "count", 50);
    std::mt19937_64 rng(param(params, "seed", std::uint64_t{1}));
    int applicable = 0, tried = 0, counterexamples = 0;
    std::set<std::string> methods;
    while (applicable < count && tried < 100 * std::max(count, 1)) {
        ++tried;
        std::vector<Mat2> gens{random_sl2(r, rng), random_sl2(r, rng)};
        auto v = boston_check(gens);
        if (!v.applicable) continue;
        ++applicable;
        methods.insert(v.method);
        if (!v.contains_sl2) ++counterexamples;
    }
    return {{"ring", r.describe()},
            {"sets_tried", tried},
            {"sets_applicable", applicable},
            {"counterexamples", counterexamples},
            {"methods", Json(std::vector<std::string>(methods.begin(), methods.end()))},
            {"sl2_order", sl2_order(r)},
            {"pass", applicable == count && counterexamples == 0}};
}

Json section_json(const std::string& ring, const SectionResult& s) {
    Json images = Json::array();
    for (const auto& m : s.images) images.push_back(mat_json(m));
    return {{"ring", ring},
            {"split", s.split},
            {"method", s.method},
            {"pairs_checked", s.pairs_checked},
            {"lifts_searched", s.lifts_searched},
            {"section_order", s.section_order},
            {"images", images}};
}

Json verify_splitting(const Json& params) {
    bool nonsplit = param(params, "nonsplit", false);
    int p = odd_prime(params);
    auto k = field_ptr(p, 1);
    Json rows = Json::array();
    auto a = find_section(truncated_polynomial_ring(k, 2));
    rows.push_back(section_json("F" + std::to_string(p) + "[U]/U^2", a));
    SectionOptions no_ring;
    no_ring.try_ring_section = false;
    auto b = find_section(witt_quotient(k, 2), no_ring);
    rows.push_back(section_json("Z/" + std::to_string(p * p), b));
    std::uint64_t gl = gl2_order(witt_quotient(k, 1));
    bool pass = a.split && a.method == "ring-section" && a.pairs_checked == gl * gl && b.split;
    if (nonsplit) {
        auto z25 = find_section(witt_quotient(field_ptr(5, 1), 2), no_ring);
        rows.push_back(section_json("Z/25", z25));
        pass = pass && !z25.split;
    }
    return {{"sections", rows}, {"pass", pass}};
}

Json verify_local_table(const Json& params) {
    int p = odd_prime(params);
    Json rows = Json::array();
    bool pass = true;
    for (int c = 1; c <= 5; ++c) {
        auto row = vequalsp_table(c, p);
        int diff = wiles_difference(initial_ledger(LedgerModule::AdTilde, p, c, 1, 0));
        pass = pass && row.dim_L_tilde == row.h0_ad + 2 && diff == 1;
        rows.push_back({{"case", c},
                        {"shape", row.description},
                        {"split", row.split},
                        {"h0", row.h0_ad},
                        {"dim_L_tilde_raw", row.dim_L_tilde_raw},
                        {"dim_L_tilde", row.dim_L_tilde},
                        {"smooth_vars", row.smooth_vars},
                        {"wiles_difference", diff}});
    }
    return {{"p", p}, {"rows", rows}, {"pass", pass}};
}

Json verify_nice_prime(const Json& params) {
    int p = odd_prime(params);
    auto qs = param(params, "q", nice_primes(p, 4));
    auto k = field_ptr(p, 1);
    Json rows = Json::array();
    bool pass = !qs.empty();
    for (int q : qs) {
        if (q % p == 0) throw ConfigError("q must differ from p");
        ResidueMat fr{k->from_int(q), 0, 0, 1};
        auto d0 = local_dims(local_module(ad0_module(k), Place::AwayFromP, q, fr));
        auto d = local_dims(local_module(ad_module(k), Place::AwayFromP, q, fr));
        auto verdict = nice_test(p, q, {q, 1});
        bool ok = verdict != NiceVerdict::Neither && d0.h0 == 1 && d0.dim_L == 1 && d.dim_L_tilde == 2;
        pass = pass && ok;
        rows.push_back({{"q", q},
                        {"verdict", verdict_name(verdict)},
                        {"h0_ad0", d0.h0},
                        {"dim_L", d0.dim_L},
                        {"h0_ad", d.h0},
                        {"dim_L_tilde", d.dim_L_tilde},
                        {"h1_ad0", d0.h1}});
    }
    return {{"p", p}, {"primes", rows}, {"pass", pass}};
}

Json verify_easy(const Json& params) {
    int p = odd_prime(params);
    int smax = param(params, "s_max", 10);
    Json rows = Json::array();
    bool pass = true;
    for (int s = 0; s <= smax; ++s) {
        auto run = simulate_theorem_easy(s, p);
        bool ids = std::all_of(run.trace.begin(), run.trace.end(), [](const auto& e) { return e.identity_holds; });
        bool ok = run.tangent_dim_one && ids && run.trace.size() == static_cast<std::size_t>(s + 1);
        pass = pass && ok;
        rows.push_back({{"s", s},
                        {"steps", run.trace.size() - 1},
                        {"final", std::to_string(run.final_ledger.selmer) + "," + std::to_string(run.final_ledger.dual_selmer)},
                        {"identity_every_step", ids}});
    }
    return {{"runs", rows}, {"pass", pass}};
}

Json ladder_json(const IdealLadder& l) {
    Json end = Json::array();
    for (const auto& x : l.end()) end.push_back(x.str());
    std::size_t nonzero = 0;
    for (const auto& st : l.steps) nonzero += st.kernel_nonzero;
    return {{"p", l.p},
            {"e", l.e},
            {"n", l.n},
            {"N", l.N},
            {"top", l.top},
            {"steps", l.steps.size()},
            {"nonzero_kernels", nonzero},
            {"all_small", l.all_small},
            {"end_in_box", l.end_in_box},
            {"box_in_start", l.box_in_start},
            {"end_ideal", end},
            {"first_kernel", l.steps.empty() ? Json() : Json(l.steps.front().kernel.str())}};
}

EisensteinPoly eisenstein_param(const Json& params, int precision) {
    int p = odd_prime(params);
    try {
        return eisenstein_from(parse_int_poly(param(params, "g", std::string("U^2-3"))), p, precision);
    } catch (const NotEisenstein& e) {
        throw ConfigError(e.what());
    }
}

Json verify_ladder(const Json& params) {
    int n = param(params, "n", 2), N = param(params, "N", 4);
    int e = static_cast<int>(parse_int_poly(param(params, "g", std::string("U^2-3"))).size()) - 1;
    auto g = eisenstein_param(params, N + N * e + n);
    auto l = small_extension_ladder(g, n, N);
    auto rep = ladder_json(l);
    rep["pass"] = l.verified();
    return rep;
}

Json hard_json(const HardReport& h) {
    Json rules = Json::array();
    for (auto r : h.rules) rules.push_back(rule_name(r));
    Json pairs = Json::array();
    for (const auto& pr : h.match.pairs)
        pairs.push_back({{"w_root", pr.w_root.value.str()},
                         {"g_root", pr.g_root.value.str()},
                         {"separation", pr.separation.str()},
                         {"g_at_w_root", pr.g_at_w_root.str()}});
    return {{"case", h.case_id},
            {"tilde_trace", ledger_trace(h.tilde_trace)},
            {"ad0_trace", ledger_trace(h.ad0_trace)},
            {"rules", rules},
            {"w", witt_list(h.w)},
            {"krasner_threshold", rat(h.match.threshold)},
            {"root_pairs", pairs},
            {"root_closeness_bound", rat(h.root_closeness)},
            {"root_close", h.root_close},
            {"degree_e", h.degree_e},
            {"field_equal", h.field_equal},
            {"iso_shift_valuation", h.iso.shift_valuation},
            {"terminal_ok", h.terminal_ok},
            {"certified", h.certified()}};
}

Json verify_endgame(const Json& params) {
    HardOptions opt;
    opt.case_id = param(params, "case", 1);
    opt.n = param(params, "n", 2);
    opt.N = param(params, "N", 6);
    opt.seed = param(params, "seed", std::uint64_t{1});
    auto g = eisenstein_param(params, param(params, "precision", opt.N + 6));
    auto h = simulate_theorem_hard(g, opt);
    auto rep = hard_json(h);
    rep["pass"] = h.certified();
    return rep;
}

Json verify_order_iso(const Json& params) {
    int prec = param(params, "precision", 12);
    int count = param(params, "count", 100);
    std::mt19937_64 rng(param(params, "seed", std::uint64_t{1}));
    auto k = field_ptr(3, 1);
    auto f = poly_from_ints(k, {-3, 0, 1}, prec);
    auto close = order_isomorphic(f, poly_from_ints(k, {-3 - 243, 0, 1}, prec), prec);
    bool close_ok = close.homomorphism && close.surjective_mod_p;
    int refused = 0, depths = 0;
    for (int d = 1; d <= prec; ++d) {
        ++depths;
        try {
            order_isomorphic(poly_from_ints(k, {-3, 0, 1}, d), poly_from_ints(k, {-6, 0, 1}, d), d);
        } catch (const NotClose&) {
            ++refused;
        } catch (const NotSquarefree&) {
            ++refused;
        }
    }
    auto th = closeness_threshold(f);
    std::int64_t pd = 1;
    for (int i = 0; i < th.analytic; ++i) pd *= 3;
    int ok = 0;
    for (int t = 0; t < count; ++t) {
        std::vector<std::int64_t> c{-3 + pd * static_cast<std::int64_t>(rng() % 1000),
                                    pd * static_cast<std::int64_t>(rng() % 1000), 1};
        try {
            auto m = order_isomorphic(f, poly_from_ints(k, c, prec), prec);
            ok += m.homomorphism && m.surjective_mod_p;
        } catch (const Error&) {
        }
    }
    return {{"close_pair_isomorphic", close_ok},
            {"close_pair_shift_valuation", close.shift_valuation},
            {"far_pair_refused_depths", refused},
            {"far_pair_depths", depths},
            {"analytic_threshold", th.analytic},
            {"disc_valuation", th.disc_valuation},
            {"perturbations", count},
            {"perturbations_isomorphic", ok},
            {"pass", close_ok && refused == depths && ok == count}};
}

Json verify_weierstrass(const Json& params) {
    int count = param(params, "count", 200);
    std::mt19937_64 rng(param(params, "seed", std::uint64_t{2024}));
    auto k = field_ptr(3, 1);
    int ok = 0, distinguished = 0;
    for (int trial = 0; trial < count; ++trial) {
        int N = 2 + static_cast<int>(rng() % 5), M = 3 + static_cast<int>(rng() % 6);
        std::int64_t pN = 1;
        for (int i = 0; i < N; ++i) pN *= 3;
        std::vector<std::int64_t> c(M);
        for (auto& x : c) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(pN));
        int d = static_cast<int>(rng() % M);
        if (c[d] % 3 == 0) c[d] += 1;
        if (rng() % 2)
            for (auto& x : c) x = x * 3 % pN;
        auto w = TruncSeries::from_ints(k, c, N, M);
        auto pr = weierstrass_prepare(w);
        distinguished += is_distinguished(pr.v).distinguished;
        std::vector<WittScalar> back;
        auto vu = pr.v * pr.u;
        for (const auto& x : vu.coeffs()) back.push_back(x.times_p_pow(pr.t).with_precision(N));
        ok += TruncSeries(k, back, M, N).congruent(w, pr.p_cap, pr.u_cap);
    }
    return {{"series", count}, {"round_trips", ok}, {"distinguished", distinguished}, {"pass", ok == count && distinguished == count}};
}

Json verify_orbit_match(const Json& params) {
    auto gc = parse_int_poly(param(params, "g", std::string("(U^2-3)(U-3)")));
    int N = param(params, "N", 6);
    int prec = param(params, "precision", 8);
    std::int64_t pN = 1;
    for (int i = 0; i < N; ++i) pN *= 3;
    auto wc = gc;
    wc[0] += pN;
    auto k = field_ptr(3, 1);
    auto g = TruncSeries::from_ints(k, gc, prec), w = TruncSeries::from_ints(k, wc, prec);
    std::optional<ChainRing> split;
    auto ring = param(params, "splitting", std::string("Z3[U]/(U^2-3, U^16)"));
    if (!ring.empty()) split = parse_ring(ring);
    auto rep = galois_orbit_match(w, g, N, split);
    std::vector<int> wd, gd;
    for (const auto& f : rep.w_factors) wd.push_back(f.degree);
    for (const auto& f : rep.g_factors) gd.push_back(f.degree);
    std::sort(wd.rbegin(), wd.rend());
    std::sort(gd.rbegin(), gd.rend());
    return {{"w_pattern", wd},
            {"g_pattern", gd},
            {"threshold", rat(rep.threshold)},
            {"threshold_from_splitting_ring", rep.threshold_from_splitting_ring},
            {"preserved", rep.preserved},
            {"pass", rep.preserved && wd == gd}};
}

using VerifyFn = Json (*)(const Json&);

const std::map<std::string, VerifyFn>& verifiers() {
    static const std::map<std::string, VerifyFn> table{
        {"h1-sl2", verify_h1_sl2},
        {"h1-gl2", verify_h1_gl2},
        {"h1-level-two", verify_h1_level_two},
        {"boston", verify_boston},
        {"splitting", verify_splitting},
        {"local-table", verify_local_table},
        {"nice-prime", verify_nice_prime},
        {"easy", verify_easy},
        {"ladder", verify_ladder},
        {"endgame", verify_endgame},
        {"order-iso", verify_order_iso},
        {"weierstrass", verify_weierstrass},
        {"orbit-match", verify_orbit_match},
    };
    return table;
}

}  // namespace

std::vector<std::string> verify_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : verifiers()) ids.push_back(id);
    return ids;
}

Json verify(const std::string& id, const Json& params) {
    auto it = verifiers().find(id);
    if (it == verifiers().end()) throw ConfigError("unknown verification \"" + id + "\"");
    auto rep = it->second(params);
    rep["id"] = id;
    return rep;
}

// ------------------------------------------------------------------ command line

namespace {

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

// Scalars as key / value lines; arrays of objects as TSV tables.
void render_tsv(const Json& rep, std::ostream& out) {
    for (const auto& [key, v] : rep.items())
        if (!v.is_array() || v.empty() || !v.front().is_object()) {
            if (v.is_array()) {
                std::string joined;
                for (const auto& x : v) joined += (joined.empty() ? "" : ",") + scalar_text(x);
                out << key << '\t' << joined << '\n';
            } else if (!v.is_object()) {
                out << key << '\t' << scalar_text(v) << '\n';
            }
        }
    for (const auto& [key, v] : rep.items()) {
        if (!v.is_array() || v.empty() || !v.front().is_object()) continue;
        out << "\n# " << key << '\n';
        std::vector<std::string> cols;
        for (const auto& [c, x] : v.front().items()) cols.push_back(c);
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
        out << '\n';
        for (const auto& row : v) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                out << (i ? "\t" : "") << (row.contains(cols[i]) ? scalar_text(row[cols[i]]) : "-");
            out << '\n';
        }
    }
}

std::vector<Mat2> parse_generators(const ChainRing& r, const std::vector<std::string>& specs) {
    std::vector<Mat2> out;
    auto at_pi = [&](const std::string& s) {
        auto c = parse_int_poly(s);
        auto acc = r.zero();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r.pi() + r.from_int(*it);
        return acc;
    };
    for (const auto& s : specs) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string x; std::getline(ss, x, ',');) parts.push_back(x);
        if (parts.size() != 4) throw ConfigError("a generator needs four entries a,b,c,d: \"" + s + "\"");
        out.push_back({at_pi(parts[0]), at_pi(parts[1]), at_pi(parts[2]), at_pi(parts[3])});
    }
    return out;
}

std::vector<Mat2> group_generators(const ChainRing& r, const std::string& kind, const std::vector<std::string>& gens) {
    if (!gens.empty()) return parse_generators(r, gens);
    if (kind == "gl2") return gl2_generators(r);
    if (kind == "sl2") return sl2_generators(r);
    if (kind == "borel") return borel_generators(r);
    throw ConfigError("group must be gl2, sl2 or borel, or give --gen");
}

GModule module_named(const std::string& name, const FieldPtr& k) {
    if (name == "ad0") return ad0_module(k);
    if (name == "ad") return ad_module(k);
    if (name == "trivial") return trivial_module(k);
    if (name == "det") return det_twist_module(k, 1);
    throw ConfigError("module must be ad0, ad, trivial or det");
}

Json poly_json(const TruncSeries& s) { return witt_list(s.coeffs()); }

struct Context {
    bool json = false;
};

int emit(const Json& rep, const Context& ctx, std::ostream& out) {
    if (ctx.json)
        out << rep.dump(2) << '\n';
    else
        render_tsv(rep, out);
    if (rep.contains("pass") && rep["pass"].is_boolean() && !rep["pass"].get<bool>()) return 1;
    return 0;
}

int run_scenario(const std::string& path, const Context& ctx, std::ostream& out, std::ostream& err);

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"liftcheck: desk-scale checks for lifting residual Galois representations"};
    app.require_subcommand(1);
    Context ctx;
    app.add_flag("--json", ctx.json, "emit canonical JSON instead of TSV");

    // verify
    auto* ver = app.add_subcommand("verify", "run a named verification");
    ver->fallthrough();
    std::string vid;
    ver->add_option("id", vid, "verification id")->required();
    std::optional<int> vp, vn, vN, vcount, vcase, vprec, vsmax;
    std::optional<std::uint64_t> vseed;
    std::optional<std::string> vg, vring;
    std::vector<int> vq;
    bool vnonsplit = false, vno_attest = false;
    ver->add_option("--p", vp, "residue characteristic");
    ver->add_option("--q", vq, "field sizes or nice primes");
    ver->add_option("--n", vn, "level n");
    ver->add_option("--N", vN, "depth N");
    ver->add_option("--count", vcount, "number of random trials");
    ver->add_option("--case", vcase, "endgame case 1 or 2");
    ver->add_option("--precision", vprec, "p-adic precision");
    ver->add_option("--s-max", vsmax, "largest initial dual Selmer dimension");
    ver->add_option("--seed", vseed, "random seed");
    ver->add_option("--g", vg, "Eisenstein or target polynomial in U");
    ver->add_option("--ring", vring, "ring, e.g. F3[U]/U^3");
    ver->add_flag("--nonsplit", vnonsplit, "also certify that Z/25 does not split");
    ver->add_flag("--no-attest", vno_attest, "do not attest the diagonal hypothesis over F_5");

    // simulate (alias selmer)
    auto* sim = app.add_subcommand("simulate", "Selmer bookkeeping simulations");
    sim->alias("selmer");
    sim->fallthrough();
    sim->require_subcommand(1);
    auto* easy = sim->add_subcommand("easy", "nice primes drop (s + 1, s) to (1, 0)");
    int es = 3, ep = 3;
    easy->add_option("--s", es, "initial dual Selmer dimension");
    easy->add_option("--p", ep, "residue characteristic");
    auto* hard = sim->add_subcommand("hard", "endgame certificate");
    int hcase = 1, hp = 3, hn = 2, hN = 6;
    std::optional<int> he, hprec;
    std::uint64_t hseed = 1;
    std::string hg = "U^2-3";
    hard->add_option("--case", hcase, "1 or 2");
    hard->add_option("--p", hp, "residue characteristic");
    hard->add_option("--e", he, "ramification degree; must match the degree of g");
    hard->add_option("--g", hg, "Eisenstein polynomial");
    hard->add_option("--n", hn, "level n");
    hard->add_option("--N", hN, "depth N");
    hard->add_option("--precision", hprec, "p-adic precision");
    hard->add_option("--seed", hseed, "seed for the perturbation");
    auto* lad = sim->add_subcommand("ladder", "small extension ladder");
    int lp = 3, ln = 2, lN = 4;
    std::string lg = "U^2-3";
    lad->add_option("--p", lp, "residue characteristic");
    lad->add_option("--g", lg, "Eisenstein polynomial");
    lad->add_option("--n", ln, "level n");
    lad->add_option("--N", lN, "depth N");

    // group
    auto* grp = app.add_subcommand("group", "matrix groups over chain rings");
    grp->fallthrough();
    grp->require_subcommand(1);
    std::string gring = "F3[U]/U^2", gkind = "gl2";
    std::vector<std::string> ggens;
    std::optional<std::size_t> gcap;
    int gpres = 0;
    bool gno_ring = false;
    auto group_opts = [&](CLI::App* c, bool gens) {
        c->add_option("--ring", gring, "ring");
        if (gens) {
            c->add_option("--group", gkind, "gl2, sl2 or borel");
            c->add_option("--gen", ggens, "generator a,b,c,d with entries polynomials in pi");
            c->add_option("--cap", gcap, "closure cap");
        }
    };
    auto* gclose = grp->add_subcommand("close", "order of the generated group");
    group_opts(gclose, true);
    auto* gboston = grp->add_subcommand("boston", "SL_2 containment from a full image mod m^2");
    group_opts(gboston, true);
    auto* gsec = grp->add_subcommand("section", "section of GL_2(R) -> GL_2(k)");
    group_opts(gsec, false);
    gsec->add_option("--presentation", gpres, "0 or 1");
    gsec->add_flag("--no-ring-section", gno_ring, "skip the ring section");

    // coh
    auto* coh = app.add_subcommand("coh", "group cohomology");
    coh->fallthrough();
    coh->require_subcommand(1);
    auto* ch1 = coh->add_subcommand("h1", "dimensions of Z^1, B^1, H^1");
    std::string cmod = "ad0";
    group_opts(ch1, true);
    ch1->add_option("--module", cmod, "ad0, ad, trivial or det");

    // local
    auto* loc = app.add_subcommand("local", "local cohomology dimensions");
    loc->fallthrough();
    loc->require_subcommand(1);
    auto* ldims = loc->add_subcommand("dims", "dimensions at a prime q != p");
    int ldp = 3, ldq = 2;
    std::string ldmod = "ad0";
    std::optional<std::string> ldfrob;
    ldims->add_option("--p", ldp, "residue characteristic");
    ldims->add_option("--q", ldq, "prime");
    ldims->add_option("--module", ldmod, "ad0 or ad");
    ldims->add_option("--frob", ldfrob, "Frobenius a,b,c,d over F_p; default diag(q, 1)");
    auto* ltab = loc->add_subcommand("table", "local table at p");
    int ltp = 3;
    ltab->add_option("--p", ltp, "residue characteristic");

    // p-adic polynomial tools
    int pp = 3, pcap = 8;
    std::optional<int> ucap;
    std::string pw, pgs;
    int pN = 4;
    auto* prep = app.add_subcommand("prep", "Weierstrass preparation");
    prep->fallthrough();
    prep->add_option("--w", pw, "series coefficients as a polynomial in U")->required();
    prep->add_option("--p", pp, "prime");
    prep->add_option("--pcap", pcap, "p-adic cap");
    prep->add_option("--ucap", ucap, "U-adic cap; exact polynomial when omitted");
    auto* newton = app.add_subcommand("newton", "Newton polygon");
    newton->fallthrough();
    newton->add_option("--w", pw, "polynomial in U")->required();
    newton->add_option("--p", pp, "prime");
    newton->add_option("--pcap", pcap, "p-adic cap");
    auto* kras = app.add_subcommand("krasner", "Krasner bound of an Eisenstein polynomial");
    kras->fallthrough();
    kras->add_option("--g", pgs, "Eisenstein polynomial")->required();
    kras->add_option("--p", pp, "prime");
    kras->add_option("--pcap", pcap, "p-adic cap");
    auto* track = app.add_subcommand("track", "match roots of w and g");
    track->fallthrough();
    track->add_option("--w", pw, "distinguished polynomial")->required();
    track->add_option("--g", pgs, "Eisenstein polynomial")->required();
    track->add_option("--N", pN, "congruence depth");
    track->add_option("--p", pp, "prime");
    track->add_option("--pcap", pcap, "p-adic cap");
    auto* oiso = app.add_subcommand("orderiso", "isomorphism W[X]/(f) -> W[X]/(g)");
    oiso->fallthrough();
    std::string of, og;
    oiso->add_option("--f", of, "monic polynomial")->required();
    oiso->add_option("--g", og, "monic polynomial")->required();
    oiso->add_option("--p", pp, "prime");
    oiso->add_option("--precision", pcap, "p-adic precision");

    auto* run = app.add_subcommand("run", "run a JSON scenario file");
    run->fallthrough();
    std::string scen;
    run->add_option("scenario", scen, "scenario file")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    if (*ver) {
        Json params = Json::object();
        if (vp) params["p"] = *vp;
        if (!vq.empty()) params["q"] = vq;
        if (vn) params["n"] = *vn;
        if (vN) params["N"] = *vN;
        if (vcount) params["count"] = *vcount;
        if (vcase) params["case"] = *vcase;
        if (vprec) params["precision"] = *vprec;
        if (vsmax) params["s_max"] = *vsmax;
        if (vseed) params["seed"] = *vseed;
        if (vg) params["g"] = *vg;
        if (vring) params["ring"] = *vring;
        if (vnonsplit) params["nonsplit"] = true;
        if (vno_attest) params["attest"] = false;
        return emit(verify(vid, params), ctx, out);
    }
    if (*sim) {
        if (*easy) {
            auto r = simulate_theorem_easy(es, ep);
            return emit({{"s", es},
                         {"primes", r.primes},
                         {"trace", ledger_trace(r.trace)},
                         {"tangent_dim_one", r.tangent_dim_one},
                         {"pass", r.tangent_dim_one}},
                        ctx, out);
        }
        if (*hard) {
            Json params{{"case", hcase}, {"p", hp}, {"g", hg}, {"n", hn}, {"N", hN}, {"seed", hseed}};
            if (hprec) params["precision"] = *hprec;
            if (he && *he != static_cast<int>(parse_int_poly(hg).size()) - 1)
                throw ConfigError("--e does not match the degree of --g");
            auto rep = verify("endgame", params);
            rep.erase("id");
            return emit(rep, ctx, out);
        }
        auto rep = verify("ladder", {{"p", lp}, {"g", lg}, {"n", ln}, {"N", lN}});
        rep.erase("id");
        return emit(rep, ctx, out);
    }
    if (*grp) {
        auto r = parse_ring(gring);
        if (*gsec) {
            SectionOptions opt;
            opt.presentation = gpres;
            opt.try_ring_section = !gno_ring;
            return emit(section_json(r.describe(), find_section(r, opt)), ctx, out);
        }
        auto gens = group_generators(r, gkind, ggens);
        std::size_t cap = gcap.value_or(default_closure_cap());
        if (*gboston) {
            auto v = boston_check(gens, cap);
            return emit({{"applicable", v.applicable},
                         {"contains_sl2", v.contains_sl2},
                         {"quotient_order", v.quotient_order},
                         {"closure_order", v.closure_order},
                         {"sl2_order", v.sl2_order},
                         {"method", v.method},
                         {"counterexample", v.counterexample ? Json(v.counterexample->str()) : Json()}},
                        ctx, out);
        }
        auto g = FiniteMatGroup::close(gens, cap);
        return emit({{"ring", r.describe()},
                     {"order", g.order()},
                     {"full", is_full(g)},
                     {"gl2_order", gl2_order(r)},
                     {"sl2_order", sl2_order(r)}},
                    ctx, out);
    }
    if (*coh) {
        auto r = parse_ring(gring);
        auto gens = group_generators(r, gkind, ggens);
        auto g = FiniteMatGroup::close(gens, gcap.value_or(default_closure_cap()));
        auto m = module_named(cmod, r.residue_field());
        auto cs = h1(g, m);
        return emit({{"ring", r.describe()},
                     {"module", m.label},
                     {"order", g.order()},
                     {"h0", h0(g, m)},
                     {"dim_z1", cs.dim_z1},
                     {"dim_b1", cs.dim_b1},
                     {"dim_h1", cs.dim_h1}},
                    ctx, out);
    }
    if (*loc) {
        if (*ltab) {
            auto rep = verify("local-table", {{"p", ltp}});
            rep.erase("id");
            return emit(rep, ctx, out);
        }
        auto k = field_ptr(odd_prime(Json{{"p", ldp}}), 1);
        ResidueMat fr{k->from_int(ldq), 0, 0, 1};
        if (ldfrob) {
            std::vector<std::int64_t> e;
            std::stringstream ss(*ldfrob);
            for (std::string x; std::getline(ss, x, ',');) e.push_back(parse_int(strip(x), "matrix entry"));
            if (e.size() != 4) throw ConfigError("--frob needs four entries");
            fr = {k->from_int(e[0]), k->from_int(e[1]), k->from_int(e[2]), k->from_int(e[3])};
        }
        if (ldq % ldp == 0) throw ConfigError("q must differ from p");
        auto spec = local_module(module_named(ldmod, k), Place::AwayFromP, ldq, fr);
        auto d = local_dims(spec);
        return emit({{"p", ldp},
                     {"q", ldq},
                     {"module", ldmod},
                     {"h0", d.h0},
                     {"h1", d.h1},
                     {"h2", d.h2},
                     {"h1_nr", d.h1_nr},
                     {"dim_L", d.dim_L},
                     {"dim_L_tilde", d.dim_L_tilde},
                     {"dim_L_perp", d.dim_L_perp()},
                     {"verdict", verdict_name(nice_test(ldp, ldq, {ldq, 1}))}},
                    ctx, out);
    }
    if (*prep) {
        auto w = TruncSeries::from_ints(field_ptr(pp, 1), parse_int_poly(pw), pcap, ucap.value_or(TruncSeries::kExact));
        auto pr = weierstrass_prepare(w);
        return emit({{"t", pr.t},
                     {"degree", pr.degree},
                     {"v", poly_json(pr.v)},
                     {"u", poly_json(pr.u)},
                     {"p_cap", pr.p_cap},
                     {"u_cap", pr.u_cap == TruncSeries::kExact ? Json("exact") : Json(pr.u_cap)}},
                    ctx, out);
    }
    if (*newton) {
        auto w = TruncSeries::from_ints(field_ptr(pp, 1), parse_int_poly(pw), pcap);
        std::vector<Valuation> vals;
        for (const auto& c : w.coeffs()) vals.push_back(c.valuation());
        auto np = newton_polygon(vals);
        Json verts = Json::array(), slopes = Json::array();
        for (const auto& [i, v] : np.vertices) verts.push_back({{"i", i}, {"v", rat(v)}});
        for (const auto& [s, m] : np.slopes) slopes.push_back({{"root_valuation", rat(s)}, {"multiplicity", m}});
        return emit({{"vertices", verts}, {"slopes", slopes}, {"zero_roots", np.zero_roots}}, ctx, out);
    }
    if (*kras) {
        EisensteinPoly g = [&] {
            try {
                return eisenstein_from(parse_int_poly(pgs), pp, pcap);
            } catch (const NotEisenstein& e) {
                throw ConfigError(e.what());
            }
        }();
        auto kb = krasner_bound(g);
        Json seps = Json::array();
        for (const auto& s : kb.separations) seps.push_back(rat(s));
        return emit({{"separations", seps},
                     {"bound", rat(kb.bound_val)},
                     {"disc_valuation", kb.disc_valuation},
                     {"containment_threshold", rat(kb.containment_threshold())}},
                    ctx, out);
    }
    if (*track) {
        auto g = eisenstein_from(parse_int_poly(pgs), pp, pcap);
        auto w = TruncSeries::from_ints(field_ptr(pp, 1), parse_int_poly(pw), pcap);
        auto m = track_roots(w, g, pN);
        Json pairs = Json::array();
        for (const auto& pr : m.pairs)
            pairs.push_back({{"w_root", pr.w_root.value.str()},
                             {"g_root", pr.g_root.value.str()},
                             {"separation", pr.separation.str()},
                             {"g_at_w_root", pr.g_at_w_root.str()}});
        return emit({{"threshold", rat(m.threshold)},
                     {"krasner_bound", rat(m.krasner.bound_val)},
                     {"pairs", pairs},
                     {"bijective", m.bijective},
                     {"separations_exceed_bound", m.separations_exceed_bound},
                     {"field_match", m.field_match},
                     {"pass", m.field_match && m.bijective}},
                    ctx, out);
    }
    if (*oiso) {
        auto k = field_ptr(pp, 1);
        auto m = order_isomorphic(poly_from_ints(k, parse_int_poly(of), pcap), poly_from_ints(k, parse_int_poly(og), pcap), pcap);
        return emit({{"image_of_generator", witt_list(m.image_of_generator)},
                     {"verified_mod", m.verified_mod},
                     {"homomorphism", m.homomorphism},
                     {"surjective_mod_p", m.surjective_mod_p},
                     {"shift_valuation", m.shift_valuation},
                     {"pass", m.homomorphism && m.surjective_mod_p}},
                    ctx, out);
    }
    return run_scenario(scen, ctx, out, err);
}

// A scenario is {"name", "command": "simulate hard", "parameters": {flag: value},
// "expected": {report key: value}}.
int run_scenario(const std::string& path, const Context& ctx, std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario " + path);
    Json s;
    try {
        s = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!s.is_object() || !s.contains("command") || !s["command"].is_string())
        throw ConfigError("scenario needs a string \"command\"");
    std::vector<std::string> args{"--json"};
    std::stringstream cmd(s["command"].get<std::string>());
    for (std::string w; cmd >> w;) args.push_back(w);
    if (args.size() > 1 && args[1] == "run") throw ConfigError("scenarios cannot nest");
    const Json params = s.value("parameters", Json::object());
    for (const auto& [key, v] : params.items()) {
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back("--" + key);
            continue;
        }
        if (v.is_array()) {
            for (const auto& x : v) {
                args.push_back("--" + key);
                args.push_back(scalar_text(x));
            }
            continue;
        }
        args.push_back("--" + key);
        args.push_back(scalar_text(v));
    }
    std::stringstream inner_out;
    int code = run_cli(args, inner_out, err);
    if (code == 2) return 2;
    Json report = Json::parse(inner_out.str());
    Json mismatches = Json::array();
    const Json expected = s.value("expected", Json::object());
    for (const auto& [key, v] : expected.items())
        if (!report.contains(key) || report[key] != v)
            mismatches.push_back({{"key", key}, {"expected", v}, {"got", report.contains(key) ? report[key] : Json()}});
    Json rep{{"name", s.value("name", path)},
             {"command", s["command"]},
             {"exit_code", code},
             {"report", report},
             {"mismatches", mismatches},
             {"pass", code == 0 && mismatches.empty()}};
    return emit(rep, ctx, out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "verification failed: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace liftcheck
