#include <algorithm>
#include <map>

#include "kpoly.hpp"
#include "liftcheck/padpoly.hpp"
#include "liftcheck/wlinalg.hpp"

namespace liftcheck {

ChainPoly to_chain_poly(const std::vector<WittScalar>& w, const ChainRing& r) {
    ChainPoly out;
    for (const auto& c : w) out.push_back(r.from_witt(c));
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    return out;
}

ChainPoly to_chain_poly(const TruncSeries& w, const ChainRing& r) {
    if (!w.is_polynomial() && w.degree() + 1 >= w.u_cap())
        throw IndeterminateAtPrecision("series is not determined as a polynomial at its U-precision");
    return to_chain_poly(w.coeffs(), r);
}

ChainRingElem evaluate(const ChainPoly& w, const ChainRingElem& y) {
    auto r = y.ring().zero();
    for (std::size_t i = w.size(); i-- > 0;) r = r * y + w[i];
    return r;
}

ChainPoly derivative(const ChainPoly& w) {
    ChainPoly d;
    for (std::size_t i = 1; i < w.size(); ++i) d.push_back(w[i] * w[i].ring().from_int(static_cast<std::int64_t>(i)));
    return d;
}

ChainPoly compose_linear(const ChainPoly& w, const ChainRingElem& c, const ChainRingElem& s) {
    const auto& r = c.ring();
    ChainPoly acc;
    // Horner in the polynomial ring: acc <- acc * (c + s X) + w_i
    for (std::size_t i = w.size(); i-- > 0;) {
        ChainPoly next(acc.size() + 1, r.zero());
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] += acc[j] * c;
            next[j + 1] += acc[j] * s;
        }
        next[0] += w[i];
        acc = std::move(next);
    }
    return acc;
}

// ------------------------------------------------------------------ Newton polygons

int NewtonPolygon::degree() const {
    int d = zero_roots;
    for (const auto& s : slopes) d += s.second;
    return d;
}

std::vector<Rational> NewtonPolygon::root_valuations() const {
    std::vector<Rational> out;
    for (const auto& [v, m] : slopes)
        for (int i = 0; i < m; ++i) out.push_back(v);
    return out;
}

NewtonPolygon newton_polygon(const std::vector<Valuation>& vals) {
    std::vector<std::pair<int, Rational>> pts;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i].is_finite()) pts.emplace_back(static_cast<int>(i), vals[i].value());
    if (pts.empty()) throw ZeroInput("Newton polygon of a polynomial that vanishes to precision");
    NewtonPolygon np;
    np.zero_roots = pts.front().first;
    std::vector<std::pair<int, Rational>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            auto cross = Rational(b.first - a.first) * (pt.second - a.second) -
                         (b.second - a.second) * Rational(pt.first - a.first);
            if (cross > Rational(0)) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    np.vertices = hull;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        int len = hull[i + 1].first - hull[i].first;
        np.slopes.emplace_back((hull[i].second - hull[i + 1].second) / Rational(len), len);
    }
    return np;
}

NewtonPolygon newton_polygon(const ChainPoly& w) {
    std::vector<Valuation> vals;
    for (const auto& c : w) vals.push_back(c.val());
    return newton_polygon(vals);
}

// ------------------------------------------------------------------ Krasner

Rational KrasnerBound::separation_sum() const {
    Rational s(0);
    for (const auto& x : separations) s += x;
    return s;
}

bool KrasnerBound::implies_containment(const Valuation& g_of_y) const {
    return g_of_y.exceeds(containment_threshold());
}

namespace {

std::vector<WittScalar> poly_mulmod_monic(const std::vector<WittScalar>& a, const std::vector<WittScalar>& b,
                                          const std::vector<WittScalar>& f) {
    const auto& k = f.front().field_ptr();
    int prec = f.front().precision();
    for (const auto& c : f) prec = std::min(prec, c.precision());
    std::size_t n = f.size() - 1;
    std::vector<WittScalar> r(a.size() + b.size(), WittScalar::zero(k, prec));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (std::size_t d = r.size(); d-- > n;) {
        auto c = r[d];
        if (c.is_zero()) continue;
        for (std::size_t i = 0; i <= n; ++i) r[d - n + i] -= c * f[i];
    }
    r.resize(n, WittScalar::zero(k, prec));
    return r;
}

}  // namespace

Valuation discriminant_valuation(const std::vector<WittScalar>& f) {
    if (f.size() < 2) throw PreconditionFailed("discriminant of a constant");
    std::size_t n = f.size() - 1;
    const auto& k = f.front().field_ptr();
    int prec = f.front().precision();
    for (const auto& c : f) prec = std::min(prec, c.precision());
    if (n == 1) return Valuation::finite(0);
    std::vector<WittScalar> df;
    for (std::size_t i = 1; i <= n; ++i) df.push_back(f[i] * WittScalar::from_int(k, static_cast<std::int64_t>(i), prec));
    WMatrix m(n, WVector(n, WittScalar::zero(k, prec)));
    std::vector<WittScalar> xj{WittScalar::one(k, prec)};
    for (std::size_t j = 0; j < n; ++j) {
        auto col = poly_mulmod_monic(df, xj, f);
        for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
        xj.insert(xj.begin(), WittScalar::zero(k, prec));
    }
    return det_valuation(m);
}

KrasnerBound krasner_bound(const EisensteinPoly& g) {
    int e = g.degree();
    if (e < 2) throw PreconditionFailed("Krasner bound needs degree >= 2");
    auto dv = discriminant_valuation(g.coeffs());
    if (!dv.is_finite()) throw RepeatedRoots("discriminant vanishes to precision " + dv.str());
    int disc = static_cast<int>(dv.value().num());
    int n = std::min(e * g.precision(), disc + 2 * e);
    if (n <= disc) throw PrecisionExhausted("Eisenstein precision too small to separate the roots");
    auto r = make_extension(g.field_ptr(), g, n);
    auto shifted = compose_linear(to_chain_poly(g.coeffs(), r), r.pi(), r.one());
    if (!shifted.front().is_zero()) throw PreconditionFailed("pi is not a root of g");
    ChainPoly quotient(shifted.begin() + 1, shifted.end());
    auto np = newton_polygon(quotient);
    if (np.zero_roots != 0) throw RepeatedRoots("g'(pi) vanishes in the working ring");
    KrasnerBound kb;
    kb.separations = np.root_valuations();
    kb.bound_val = *std::max_element(kb.separations.begin(), kb.separations.end());
    kb.disc_valuation = disc;
    return kb;
}

// ------------------------------------------------------------------ roots

ChainRingElem hensel_root(const ChainPoly& w, const ChainRingElem& y0) {
    const auto& R = y0.ring();
    int n = R.level();
    auto dw = derivative(w);
    auto fy = evaluate(w, y0), dy = evaluate(dw, y0);
    int s = dy.vpi();
    if (s >= n || (!fy.is_zero() && fy.vpi() <= 2 * s))
        throw NoConvergence("Newton condition v(w(y0)) > 2 v(w'(y0)) fails: " + fy.val().str() + " vs 2*" + dy.val().str());
    auto y = y0;
    for (int it = 0; it < 2 * n + 8; ++it) {
        fy = evaluate(w, y);
        if (fy.is_zero()) return y;
        dy = evaluate(dw, y);
        auto q = fy, u = dy;
        for (int i = 0; i < s; ++i) {
            q = q.div_pi();
            u = u.div_pi();
        }
        auto delta = q * u.inverse();
        y = y - R.from_coords(delta.coords());
    }
    throw NoConvergence("Newton iteration did not reach an exact root");
}

namespace {

// (a / pi^v) mod pi for v(a) >= v.
ResidueField::Elem residue_after_shift(const ChainRingElem& a, int v) {
    if (a.vpi() > v) return 0;
    auto x = a;
    for (int i = 0; i < v; ++i) x = x.div_pi();
    return x.residue();
}

void root_search(const ChainPoly& w, const ChainPoly& dw, const ChainRingElem& c, int depth,
                 std::vector<RootApprox>& out) {
    const auto& R = c.ring();
    int n = R.level();
    const auto& k = *R.residue_field();
    if (depth > 0) {
        auto fy = evaluate(w, c), dy = evaluate(dw, c);
        int s = dy.vpi();
        if (s < n && (fy.is_zero() || fy.vpi() > 2 * s)) {
            out.push_back({hensel_root(w, c), n - s});
            return;
        }
    }
    auto step = depth >= n ? R.zero() : R.pi().pow(static_cast<std::uint64_t>(depth));
    auto F = compose_linear(w, c, step);
    int v = n;
    for (const auto& a : F) v = std::min(v, a.vpi());
    if (v >= n) {
        out.push_back({c, depth});
        return;
    }
    detail::KPoly res;
    for (const auto& a : F) res.push_back(residue_after_shift(a, v));
    detail::ktrim(res);
    if (res.size() <= 1) return;
    for (ResidueField::Elem x = 0; x < k.q(); ++x) {
        if (detail::keval(k, res, x) != 0) continue;
        root_search(w, dw, c + step * R.lift_residue(x), depth + 1, out);
    }
}

}  // namespace

std::vector<RootApprox> roots_in_ring(const ChainPoly& w) {
    if (w.empty()) throw ZeroInput("root search for the zero polynomial");
    const auto& R = w.front().ring();
    std::vector<RootApprox> out;
    root_search(w, derivative(w), R.zero(), 0, out);
    return out;
}

// ------------------------------------------------------------------ root tracking

namespace {

Valuation difference_val(const RootApprox& a, const RootApprox& b) {
    int lvl = std::min(a.known_level, b.known_level);
    int e = a.value.ring().e();
    int d = (a.value - b.value).vpi();
    if (d >= lvl) return Valuation::at_least(Rational(lvl, e));
    return Valuation::finite(Rational(d, e));
}

bool val_exceeds(const Valuation& v, Rational t) {
    try {
        return v.exceeds(t);
    } catch (const IndeterminateAtPrecision&) {
        return false;
    }
}

}  // namespace

RootMatch track_roots(const TruncSeries& w, const EisensteinPoly& g, int N) {
    int e = g.degree();
    auto dist = is_distinguished(w);
    if (!dist.distinguished) throw PreconditionFailed("w is not a distinguished polynomial");
    if (dist.degree != e)
        throw DegreeMismatch("w has degree " + std::to_string(dist.degree) + ", g has degree " + std::to_string(e));
    if (!w.is_polynomial() && w.u_cap() < N * e)
        throw IndeterminateAtPrecision("w is known only mod U^" + std::to_string(w.u_cap()) + ", membership needs U^" +
                                       std::to_string(N * e));
    int prec = std::min(w.p_cap(), g.precision());
    if (prec < N) throw PrecisionExhausted("coefficients known below p^" + std::to_string(N));
    // Reducing the monic w by the monic g of the same degree leaves w - g.
    for (int i = 0; i < e; ++i)
        if (!w.coeff(i).congruent(g.coeffs()[i], N))
            throw PreconditionFailed("w does not lie in (p^N, g, U^{Ne}): coefficient of U^" + std::to_string(i));

    RootMatch rm;
    rm.krasner = krasner_bound(g);
    rm.threshold = rm.krasner.containment_threshold();
    if (!(Rational(N) > rm.threshold))
        throw KrasnerFail("congruence depth N=" + std::to_string(N) + " does not exceed the Krasner threshold",
                          rm.threshold);
    rm.level = e * prec;
    auto R = make_extension(g.field_ptr(), g, rm.level);
    std::vector<WittScalar> wc;
    for (int i = 0; i <= e; ++i) wc.push_back(w.coeff(i));
    auto wR = to_chain_poly(wc, R), gR = to_chain_poly(g.coeffs(), R);
    auto groots = roots_in_ring(gR), wroots = roots_in_ring(wR);
    rm.g_roots_found = static_cast<int>(groots.size());
    rm.w_roots_found = static_cast<int>(wroots.size());
    std::vector<int> used(wroots.size(), 0);
    rm.bijective = !groots.empty() && groots.size() == wroots.size();
    rm.separations_exceed_bound = !groots.empty();
    for (const auto& a : groots) {
        if (wroots.empty()) break;
        std::size_t best = 0;
        int best_d = -1;
        for (std::size_t j = 0; j < wroots.size(); ++j) {
            int d = std::min((wroots[j].value - a.value).vpi(), std::min(a.known_level, wroots[j].known_level));
            if (d > best_d) {
                best_d = d;
                best = j;
            }
        }
        if (used[best]++) rm.bijective = false;
        const auto& y = wroots[best];
        auto gy = evaluate(gR, y.value);
        auto gval = gy.vpi() >= y.known_level ? Valuation::at_least(Rational(y.known_level, e))
                                              : Valuation::finite(Rational(gy.vpi(), e));
        rm.pairs.push_back({y, a, difference_val(y, a), gval});
        if (!val_exceeds(rm.pairs.back().separation, rm.krasner.bound_val)) rm.separations_exceed_bound = false;
    }
    rm.field_match = rm.separations_exceed_bound && !rm.pairs.empty();
    return rm;
}

// ------------------------------------------------------------------ Galois orbits

std::vector<OrbitFactor> factor_pattern(const TruncSeries& h) {
    const auto& k = *h.field_ptr();
    int d = h.degree();
    if (d < 0) throw ZeroInput("factor pattern of a series that vanishes to precision");
    if (!h.is_polynomial() && d + 1 >= h.u_cap()) throw IndeterminateAtPrecision("series is not a polynomial at its caps");
    std::vector<Valuation> vals;
    for (int i = 0; i <= d; ++i) vals.push_back(h.coeff(i).valuation());
    if (!vals[0].is_finite()) throw IndeterminateAtPrecision("constant term vanishes to precision");
    auto np = newton_polygon(vals);
    std::vector<OrbitFactor> out;
    for (std::size_t s = 0; s + 1 < np.vertices.size(); ++s) {
        auto [i0, v0] = np.vertices[s];
        auto [i1, v1] = np.vertices[s + 1];
        Rational lambda = (v0 - v1) / Rational(i1 - i0);
        int b = static_cast<int>(lambda.den());
        for (int i = i0 + 1; i < i1; ++i) {
            Rational line = v0 - lambda * Rational(i - i0);
            if (vals[i].is_lower_bound() && !(vals[i].value() > line))
                throw IndeterminateAtPrecision("coefficient of U^" + std::to_string(i) + " too imprecise for the polygon");
        }
        detail::KPoly res;
        for (int i = i0; i <= i1; i += b) {
            Rational line = v0 - lambda * Rational(i - i0);
            if (vals[i].is_finite() && vals[i].value() == line) {
                auto x = h.coeff(i);
                for (int j = 0; j < static_cast<int>(line.num()); ++j) x = x.div_p(x.precision() - 1);
                res.push_back(x.residue());
            } else {
                res.push_back(0);
            }
        }
        if (!detail::ksquarefree(k, res))
            throw IndeterminateAtPrecision("residual polynomial of slope " + lambda.str() + " is not squarefree");
        for (int m : detail::kfactor_degrees(k, res)) out.push_back({m * b, lambda});
    }
    return out;
}

OrbitReport galois_orbit_match(const TruncSeries& w, const TruncSeries& g, int N, const std::optional<ChainRing>& splitting) {
    auto dg = is_distinguished(g), dw = is_distinguished(w);
    if (!dg.distinguished || !dw.distinguished) throw PreconditionFailed("w and g must be distinguished polynomials");
    if (dg.degree != dw.degree) throw DegreeMismatch("w and g have different degrees");
    auto disc = discriminant_valuation(std::vector<WittScalar>(g.coeffs().begin(), g.coeffs().begin() + dg.degree + 1));
    if (!disc.is_finite()) throw NotSquarefree("g has vanishing discriminant to precision");
    int prec = std::min(w.p_cap(), g.p_cap());
    if (prec < N) throw PrecisionExhausted("coefficients known below p^" + std::to_string(N));
    for (int i = 0; i <= dg.degree; ++i)
        if (!w.coeff(i).congruent(g.coeff(i), N)) throw PreconditionFailed("w is not congruent to g mod p^N");

    OrbitReport rep;
    if (splitting) {
        auto roots = roots_in_ring(to_chain_poly(g, *splitting));
        if (static_cast<int>(roots.size()) != dg.degree)
            throw PreconditionFailed("supplied ring does not split g: found " + std::to_string(roots.size()) + " roots");
        Rational worst(0);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            Rational mx(0), sum(0);
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (i == j) continue;
                auto sv = difference_val(roots[i], roots[j]);
                if (!sv.is_finite()) throw IndeterminateAtPrecision("roots of g not separated in the supplied ring");
                mx = std::max(mx, sv.value());
                sum += sv.value();
            }
            worst = std::max(worst, mx + sum);
        }
        rep.threshold = worst;
        rep.threshold_from_splitting_ring = true;
    } else {
        rep.threshold = Rational(2) * disc.value();
        rep.threshold_from_splitting_ring = false;
    }
    if (!(Rational(N) > rep.threshold))
        throw KrasnerFail("congruence depth N=" + std::to_string(N) + " does not exceed the orbit threshold", rep.threshold);
    rep.w_factors = factor_pattern(w);
    rep.g_factors = factor_pattern(g);
    auto key = [](const OrbitFactor& a, const OrbitFactor& b) {
        return a.root_valuation != b.root_valuation ? a.root_valuation < b.root_valuation : a.degree < b.degree;
    };
    std::sort(rep.w_factors.begin(), rep.w_factors.end(), key);
    std::sort(rep.g_factors.begin(), rep.g_factors.end(), key);
    rep.preserved = rep.w_factors.size() == rep.g_factors.size();
    for (std::size_t i = 0; i < std::min(rep.w_factors.size(), rep.g_factors.size()); ++i) {
        rep.pairing.emplace_back(rep.w_factors[i], rep.g_factors[i]);
        if (rep.w_factors[i].degree != rep.g_factors[i].degree) rep.preserved = false;
    }
    return rep;
}

}  // namespace liftcheck
