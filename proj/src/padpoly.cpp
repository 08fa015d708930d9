#include "liftcheck/padpoly.hpp"

#include <algorithm>
#include <sstream>

namespace liftcheck {

namespace {

using Series = std::vector<WittScalar>;

Series mul_trunc(const Series& a, const Series& b, std::size_t len, const FieldPtr& k, int prec) {
    Series r(std::min(len, a.size() + b.size()), WittScalar::zero(k, prec));
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

Series inverse_series(const Series& b, std::size_t len, const FieldPtr& k, int prec) {
    auto b0inv = b.at(0).inverse();
    Series c(len, WittScalar::zero(k, prec));
    for (std::size_t n = 0; n < len; ++n) {
        auto s = n == 0 ? WittScalar::one(k, prec) : WittScalar::zero(k, prec);
        for (std::size_t i = 1; i <= n && i < b.size(); ++i) s -= b[i] * c[n - i];
        c[n] = s * b0inv;
    }
    return c;
}

}  // namespace

TruncSeries::TruncSeries(FieldPtr k, std::vector<WittScalar> coeffs, int u_cap, int p_cap)
    : k_(std::move(k)), u_cap_(u_cap), p_cap_(p_cap) {
    if (p_cap < 1) throw PrecisionExhausted("series p-precision must be >= 1");
    if (u_cap < 1) throw PrecisionExhausted("series U-precision must be >= 1");
    for (std::size_t i = 0; i < coeffs.size() && static_cast<long>(i) < static_cast<long>(u_cap); ++i) {
        if (coeffs[i].precision() < p_cap)
            throw PrecisionExhausted("coefficient of U^" + std::to_string(i) + " known below the series p-precision");
        c_.push_back(coeffs[i].with_precision(p_cap));
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

TruncSeries TruncSeries::from_ints(const FieldPtr& k, const std::vector<std::int64_t>& coeffs, int p_cap, int u_cap) {
    std::vector<WittScalar> c;
    for (auto v : coeffs) c.push_back(WittScalar::from_int(k, v, p_cap));
    return {k, std::move(c), u_cap, p_cap};
}

TruncSeries TruncSeries::zero(const FieldPtr& k, int p_cap, int u_cap) { return {k, {}, u_cap, p_cap}; }

TruncSeries TruncSeries::monomial(const FieldPtr& k, int degree, int p_cap, int u_cap) {
    std::vector<std::int64_t> c(degree + 1, 0);
    c[degree] = 1;
    return from_ints(k, c, p_cap, u_cap);
}

WittScalar TruncSeries::coeff(std::size_t i) const {
    if (static_cast<long>(i) >= static_cast<long>(u_cap_))
        throw PrecisionExhausted("coefficient of U^" + std::to_string(i) + " lies beyond the U-precision");
    return i < c_.size() ? c_[i] : WittScalar::zero(k_, p_cap_);
}

int TruncSeries::degree() const { return static_cast<int>(c_.size()) - 1; }

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    int u = std::min(u_cap_, o.u_cap_), p = std::min(p_cap_, o.p_cap_);
    std::vector<WittScalar> r;
    for (std::size_t i = 0; i < std::max(c_.size(), o.c_.size()); ++i) {
        auto a = i < c_.size() ? c_[i] : WittScalar::zero(k_, p);
        auto b = i < o.c_.size() ? o.c_[i] : WittScalar::zero(k_, p);
        r.push_back((a + b).with_precision(p));
    }
    return {k_, std::move(r), u, p};
}

TruncSeries TruncSeries::operator-() const {
    std::vector<WittScalar> r;
    for (const auto& c : c_) r.push_back(-c);
    return {k_, std::move(r), u_cap_, p_cap_};
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const { return *this + (-o); }

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    int u = std::min(u_cap_, o.u_cap_), p = std::min(p_cap_, o.p_cap_);
    std::size_t len = u == kExact ? c_.size() + o.c_.size() : static_cast<std::size_t>(u);
    return {k_, mul_trunc(c_, o.c_, len, k_, p), u, p};
}

TruncSeries TruncSeries::scale(const WittScalar& s) const {
    std::vector<WittScalar> r;
    for (const auto& c : c_) r.push_back(c * s);
    return {k_, std::move(r), u_cap_, std::min(p_cap_, s.precision())};
}

TruncSeries TruncSeries::with_caps(int u_cap, int p_cap) const {
    if (u_cap > u_cap_ || p_cap > p_cap_) throw PrecisionExhausted("cannot raise series caps");
    return {k_, c_, u_cap, p_cap};
}

bool TruncSeries::congruent(const TruncSeries& o, int p_cap, int u_cap) const {
    if (p_cap > std::min(p_cap_, o.p_cap_) || u_cap > std::min(u_cap_, o.u_cap_))
        throw PrecisionExhausted("congruence beyond known series caps");
    auto len = std::max(c_.size(), o.c_.size());
    for (std::size_t i = 0; i < len && static_cast<long>(i) < static_cast<long>(u_cap); ++i)
        if (!coeff(i).congruent(o.coeff(i), p_cap)) return false;
    return true;
}

std::string TruncSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        const auto& cc = c_[i].coords();
        if (cc.size() == 1) os << cc[0];
        else {
            os << "(";
            for (std::size_t j = 0; j < cc.size(); ++j) os << (j ? "," : "") << cc[j];
            os << ")";
        }
        if (i > 0) os << "*U" << (i > 1 ? "^" + std::to_string(i) : "");
    }
    if (first) os << "0";
    os << " mod p^" << p_cap_;
    if (!is_polynomial()) os << ", U^" << u_cap_;
    return os.str();
}

DistinguishedResult is_distinguished(const TruncSeries& w) {
    int d = w.degree();
    if (d < 0) throw IndeterminateAtPrecision("series vanishes to its declared precision");
    if (!(w.coeff(d) == WittScalar::one(w.field_ptr(), w.p_cap()))) return {false, d};
    for (int i = 0; i < d; ++i)
        if (w.coeff(i).is_unit()) return {false, d};
    return {true, d};
}

Preparation weierstrass_prepare(const TruncSeries& w) {
    const auto& k = w.field_ptr();
    int N = w.p_cap();
    int t = N;
    for (const auto& c : w.coeffs()) t = std::min(t, c.valuation_or_precision());
    if (t >= N) throw PrecisionExhausted("series vanishes mod p^" + std::to_string(N) + ", p-exponent cannot be separated");
    int Np = N - t;
    Series wp;
    for (const auto& c : w.coeffs()) wp.push_back(t == 0 ? c : c.div_p(Np));
    int d = 0;
    while (!wp[d].is_unit()) ++d;

    int M = w.is_polynomial() ? static_cast<int>(wp.size()) + N : w.u_cap();
    auto L = static_cast<std::size_t>(M + d * Np);
    Series P(wp.begin(), wp.begin() + d), B(wp.begin() + d, wp.end());
    auto Binv = inverse_series(B, L, k, Np);
    Series q = Binv;
    for (int it = 0; it <= std::max(M, Np) + 2; ++it) {
        // q <- B^{-1} (1 - alpha(q P)), alpha dropping the terms below U^d
        auto qp = mul_trunc(q, P, L + d, k, Np);
        Series rhs(L, WittScalar::zero(k, Np));
        rhs[0] = WittScalar::one(k, Np);
        for (std::size_t i = d; i < qp.size() && i - d < L; ++i) rhs[i - d] -= qp[i];
        auto next = mul_trunc(Binv, rhs, L, k, Np);
        if (next == q) break;
        q = std::move(next);
    }
    auto qw = mul_trunc(q, wp, L, k, Np);
    std::vector<WittScalar> vc(qw.begin(), qw.begin() + std::min<std::size_t>(d, qw.size()));
    vc.resize(d, WittScalar::zero(k, Np));
    vc.push_back(WittScalar::one(k, Np));
    auto uc = inverse_series(q, static_cast<std::size_t>(M), k, Np);
    TruncSeries v(k, vc, TruncSeries::kExact, Np);
    TruncSeries u(k, uc, M, Np);

    std::vector<WittScalar> shifted;
    auto vu = v * u;
    for (const auto& c : vu.coeffs()) shifted.push_back(c.times_p_pow(t).with_precision(N));
    TruncSeries recon(k, shifted, M, N);
    if (!recon.congruent(TruncSeries(k, w.coeffs(), M, N), N, M))
        throw NoConvergence("Weierstrass preparation failed its round-trip certificate");
    if (!is_distinguished(v).distinguished) throw NoConvergence("prepared factor is not distinguished");
    return {t, v, u, d, N, M};
}

TruncSeries weight_relation(const TruncSeries& j, int k) {
    if (k < 2) throw ConfigError("weight must be >= 2");
    const auto& f = j.field_ptr();
    auto c = WittScalar::from_int(f, 1 + f->p(), j.p_cap()).pow(static_cast<std::uint64_t>(k - 1));
    return j - TruncSeries(f, {c}, TruncSeries::kExact, j.p_cap());
}

}  // namespace liftcheck
