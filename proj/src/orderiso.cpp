#include "liftcheck/orderiso.hpp"

#include <algorithm>
#include <random>

#include "liftcheck/padpoly.hpp"

namespace liftcheck {

FiniteAlgebra::FiniteAlgebra(WPoly modulus) : f_(std::move(modulus)) {
    if (f_.size() < 2) throw ConfigError("algebra modulus must have degree >= 1");
    prec_ = f_.front().precision();
    for (const auto& c : f_) prec_ = std::min(prec_, c.precision());
    for (auto& c : f_) c = c.with_precision(prec_);
    if (!(f_.back() == WittScalar::one(field_ptr(), prec_))) throw ConfigError("algebra modulus must be monic");
}

WVector FiniteAlgebra::zero() const { return WVector(rank(), WittScalar::zero(field_ptr(), prec_)); }

WVector FiniteAlgebra::one() const {
    auto r = zero();
    r[0] = WittScalar::one(field_ptr(), prec_);
    return r;
}

WVector FiniteAlgebra::generator() const {
    if (rank() == 1) return {-f_[0]};
    auto r = zero();
    r[1] = WittScalar::one(field_ptr(), prec_);
    return r;
}

WVector FiniteAlgebra::add(const WVector& a, const WVector& b) const {
    WVector r;
    for (int i = 0; i < rank(); ++i) r.push_back((a[i] + b[i]).with_precision(prec_));
    return r;
}

WVector FiniteAlgebra::sub(const WVector& a, const WVector& b) const {
    WVector r;
    for (int i = 0; i < rank(); ++i) r.push_back((a[i] - b[i]).with_precision(prec_));
    return r;
}

WVector FiniteAlgebra::mul(const WVector& a, const WVector& b) const {
    int n = rank();
    WVector t(2 * n - 1, WittScalar::zero(field_ptr(), prec_));
    for (int i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; j < n; ++j) t[i + j] += a[i] * b[j];
    }
    for (int d = 2 * n - 2; d >= n; --d) {
        auto c = t[d];
        if (c.is_zero()) continue;
        for (int i = 0; i < n; ++i) t[d - n + i] -= c * f_[i];
    }
    t.erase(t.begin() + n, t.end());
    return t;
}

WVector FiniteAlgebra::evaluate(const WPoly& g, const WVector& y) const {
    auto r = zero();
    for (std::size_t i = g.size(); i-- > 0;) {
        r = mul(r, y);
        r[0] = (r[0] + g[i]).with_precision(prec_);
    }
    return r;
}

WMatrix FiniteAlgebra::mult_matrix(const WVector& y) const {
    int n = rank();
    WMatrix m(n, WVector(n, WittScalar::zero(field_ptr(), prec_)));
    auto col = y;
    auto x = generator();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) m[i][j] = col[i];
        col = mul(col, x);
    }
    return m;
}

int FiniteAlgebra::valuation(const WVector& a) const {
    int v = prec_;
    for (const auto& c : a) v = std::min(v, c.valuation_or_precision());
    return v;
}

WPoly derivative(const WPoly& g) {
    WPoly d;
    for (std::size_t i = 1; i < g.size(); ++i)
        d.push_back(g[i] * WittScalar::from_int(g[i].field_ptr(), static_cast<std::int64_t>(i), g[i].precision()));
    if (d.empty()) d.push_back(WittScalar::zero(g.front().field_ptr(), g.front().precision()));
    return d;
}

WPoly poly_from_ints(const FieldPtr& k, const std::vector<std::int64_t>& c, int precision) {
    WPoly r;
    for (auto v : c) r.push_back(WittScalar::from_int(k, v, precision));
    return r;
}

namespace {

int max_elementary_divisor(const FiniteAlgebra& a, const WVector& y) {
    auto ed = elementary_divisor_valuations(a.mult_matrix(y));
    return *std::max_element(ed.begin(), ed.end());
}

WPoly at_precision(const WPoly& g, int prec) {
    WPoly r;
    for (const auto& c : g) {
        if (c.precision() < prec) throw PrecisionExhausted("polynomial coefficient known below the requested precision");
        r.push_back(c.with_precision(prec));
    }
    return r;
}

}  // namespace

WVector find_root_in_algebra(const WPoly& g, const FiniteAlgebra& a) {
    int prec = a.precision();
    auto gp = at_precision(g, prec);
    auto dg = derivative(gp);
    auto y = a.generator();
    int delta = max_elementary_divisor(a, a.evaluate(dg, y));
    int v0 = a.valuation(a.evaluate(gp, y));
    if (delta >= prec || (v0 < prec && v0 <= 2 * delta))
        throw NoConvergence("v(g(X)) = " + std::to_string(v0) + " does not exceed 2 * " + std::to_string(delta));
    for (int it = 0; it < 2 * prec + 8; ++it) {
        auto gy = a.evaluate(gp, y);
        if (a.valuation(gy) >= prec) return y;
        auto z = solve_linear(a.mult_matrix(a.evaluate(dg, y)), gy);
        if (!z) throw NoConvergence("Newton step has no solution at this precision");
        y = a.sub(y, *z);
    }
    throw NoConvergence("Newton iteration did not converge");
}

AlgebraMap order_isomorphic(const WPoly& f, const WPoly& g, int precision) {
    if (f.size() != g.size())
        throw DegreeMismatch("f and g have degrees " + std::to_string(f.size() - 1) + " and " + std::to_string(g.size() - 1));
    auto fp = at_precision(f, precision), gp = at_precision(g, precision);
    if (!discriminant_valuation(fp).is_finite()) throw NotSquarefree("f has vanishing discriminant to precision");
    FiniteAlgebra alg(fp);
    AlgebraMap m;
    try {
        m.image_of_generator = find_root_in_algebra(gp, alg);
    } catch (const NoConvergence& e) {
        throw NotClose(std::string("g is not close enough to f: ") + e.what());
    }
    const auto& y = m.image_of_generator;
    m.verified_mod = precision;
    m.homomorphism = alg.valuation(alg.evaluate(gp, y)) >= precision;
    int n = alg.rank();
    WMatrix powers(n, WVector(n, WittScalar::zero(alg.field_ptr(), precision)));
    auto col = alg.one();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) powers[i][j] = col[i];
        col = alg.mul(col, y);
    }
    m.surjective_mod_p = det_valuation(powers) == Valuation::finite(0);
    auto diff = alg.sub(y, alg.generator());
    m.shift_valuation = alg.valuation(diff);
    return m;
}

ClosenessThreshold closeness_threshold(const WPoly& f, std::uint64_t seed, int samples) {
    auto dv = discriminant_valuation(f);
    if (!dv.is_finite()) throw NotSquarefree("f has vanishing discriminant to precision");
    ClosenessThreshold ct;
    ct.disc_valuation = static_cast<int>(dv.value().num());
    ct.analytic = 2 * ct.disc_valuation + 1;
    ct.samples = samples;
    const auto& k = f.front().field_ptr();
    int prec = ct.analytic + 3;
    auto fp = at_precision(f, prec);
    std::mt19937_64 rng(seed);
    std::int64_t q = 1;
    for (int i = 0; i < prec; ++i) q *= k->p();
    auto all_succeed = [&](int depth) {
        for (int s = 0; s < samples; ++s) {
            auto g = fp;
            auto scale = WittScalar::from_int(k, 1, prec).times_p_pow(depth).with_precision(prec);
            for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                std::vector<std::int64_t> c(k->f());
                for (auto& x : c) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q));
                g[i] += WittScalar(k, c, prec) * scale;
            }
            try {
                order_isomorphic(fp, g, prec);
            } catch (const NotClose&) {
                return false;
            }
        }
        return true;
    };
    ct.empirical = ct.analytic;
    for (int depth = ct.analytic; depth >= 1; --depth) {
        if (!all_succeed(depth)) break;
        ct.empirical = depth;
    }
    return ct;
}

}  // namespace liftcheck
