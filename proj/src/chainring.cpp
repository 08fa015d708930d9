#include "liftcheck/chainring.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "witt_kernel.hpp"

namespace liftcheck {

bool Valuation::exceeds(Rational t) const {
    switch (kind_) {
        case Kind::Finite: return v_ > t;
        case Kind::Infinite: return true;
        case Kind::AtLeast:
            if (v_ > t) return true;
            throw IndeterminateAtPrecision("valuation known only as " + str() + ", cannot compare with " + t.str());
    }
    return false;
}

bool Valuation::at_least_value(Rational t) const {
    switch (kind_) {
        case Kind::Finite: return v_ >= t;
        case Kind::Infinite: return true;
        case Kind::AtLeast:
            if (v_ >= t) return true;
            throw IndeterminateAtPrecision("valuation known only as " + str() + ", cannot compare with " + t.str());
    }
    return false;
}

namespace {

using FpPoly = std::vector<int>;

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::vector<int> prime_factors(std::uint64_t n) {
    std::vector<int> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(static_cast<int>(d));
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(static_cast<int>(n));
    return out;
}

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
    int r = 1;
    for (int e = p - 2, b = a % p; e > 0; e >>= 1, b = b * b % p)
        if (e & 1) r = r * b % p;
    return r;
}

FpPoly poly_mod(FpPoly a, const FpPoly& m, int p) {
    trim(a);
    int dm = static_cast<int>(m.size()) - 1;
    int lead_inv = inv_mod(m.back(), p);
    while (static_cast<int>(a.size()) - 1 >= dm) {
        int shift = static_cast<int>(a.size()) - 1 - dm;
        int c = a.back() * lead_inv % p;
        for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

FpPoly poly_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, int p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return poly_mod(std::move(r), m, p);
}

FpPoly poly_powmod(FpPoly base, std::uint64_t e, const FpPoly& m, int p) {
    FpPoly r{1};
    base = poly_mod(std::move(base), m, p);
    while (e > 0) {
        if (e & 1) r = poly_mulmod(r, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

FpPoly poly_gcd(FpPoly a, FpPoly b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool rabin_irreducible(const FpPoly& m, int p) {
    int f = static_cast<int>(m.size()) - 1;
    if (f == 1) return true;
    auto frob_power = [&](int k) {
        FpPoly x{0, 1};
        for (int i = 0; i < k; ++i) x = poly_powmod(x, static_cast<std::uint64_t>(p), m, p);
        return x;
    };
    auto minus_x = [&](FpPoly a) {
        if (a.size() < 2) a.resize(2, 0);
        a[1] = (a[1] - 1 + p) % p;
        trim(a);
        return a;
    };
    if (!minus_x(frob_power(f)).empty()) return false;
    for (int r : prime_factors(static_cast<std::uint64_t>(f))) {
        auto g = poly_gcd(minus_x(frob_power(f / r)), m, p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace

ResidueField::ResidueField(int p, std::vector<int> modulus) : p_(p), modulus_(std::move(modulus)) {
    if (!is_prime(p) || p < 3) throw ConfigError("residue characteristic must be an odd prime, got " + std::to_string(p));
    for (auto& c : modulus_) c = ((c % p) + p) % p;
    if (modulus_.size() < 2 || modulus_.back() != 1) throw ConfigError("field modulus must be monic of degree >= 1");
    f_ = static_cast<int>(modulus_.size()) - 1;
    if (!rabin_irreducible(modulus_, p)) throw ConfigError("field modulus is reducible over F_" + std::to_string(p));
    std::uint64_t q = 1;
    for (int i = 0; i < f_; ++i) {
        pow_p_.push_back(static_cast<std::uint32_t>(q));
        q *= static_cast<std::uint64_t>(p);
        if (q > (1u << 20)) throw ConfigError("residue field too large for desk-scale tables");
    }
    q_ = static_cast<std::uint32_t>(q);

    auto to_poly = [&](Elem a) {
        FpPoly r(f_, 0);
        for (int j = 0; j < f_; ++j) {
            r[j] = static_cast<int>(a % static_cast<Elem>(p));
            a /= static_cast<Elem>(p);
        }
        trim(r);
        return r;
    };
    auto from_poly = [&](const FpPoly& a) {
        Elem r = 0;
        for (std::size_t j = a.size(); j-- > 0;) r = r * static_cast<Elem>(p) + static_cast<Elem>(a[j]);
        return r;
    };
    auto factors = prime_factors(q_ - 1);
    generator_ = 0;
    for (Elem a = 1; a < q_ && generator_ == 0; ++a) {
        bool ok = true;
        for (int r : factors) {
            auto pw = poly_powmod(to_poly(a), (q_ - 1) / static_cast<std::uint32_t>(r), modulus_, p);
            if (pw == FpPoly{1}) {
                ok = false;
                break;
            }
        }
        if (ok) generator_ = a;
    }
    if (q_ == 2) generator_ = 1;
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    FpPoly cur{1};
    auto gpoly = to_poly(generator_);
    for (std::uint32_t i = 0; i + 1 < q_; ++i) {
        Elem idx = from_poly(cur);
        exp_[i] = idx;
        log_[idx] = i;
        cur = poly_mulmod(cur, gpoly, modulus_, p);
    }
}

ResidueField ResidueField::prime_field(int p) { return {p, {0, 1}}; }

ResidueField ResidueField::standard(int p, int f) {
    if (f < 1) throw ConfigError("inertial degree must be >= 1");
    if (f == 1) return prime_field(p);
    if (!is_prime(p) || p < 3) throw ConfigError("residue characteristic must be an odd prime");
    std::uint64_t count = 1;
    for (int i = 0; i < f; ++i) count *= static_cast<std::uint64_t>(p);
    for (std::uint64_t code = 0; code < count; ++code) {
        FpPoly m(f + 1, 0);
        auto c = code;
        for (int i = 0; i < f; ++i) {
            m[i] = static_cast<int>(c % static_cast<std::uint64_t>(p));
            c /= static_cast<std::uint64_t>(p);
        }
        m[f] = 1;
        if (m[0] == 0) continue;
        if (rabin_irreducible(m, p)) return {p, m};
    }
    throw ConfigError("no irreducible polynomial found");
}

ResidueField::Elem ResidueField::from_int(std::int64_t v) const {
    return static_cast<Elem>(((v % p_) + p_) % p_);
}

ResidueField::Elem ResidueField::from_coeffs(std::span<const std::int64_t> c) const {
    Elem r = 0;
    for (int j = f_; j-- > 0;) {
        std::int64_t d = j < static_cast<int>(c.size()) ? ((c[j] % p_) + p_) % p_ : 0;
        r = r * static_cast<Elem>(p_) + static_cast<Elem>(d);
    }
    return r;
}

std::vector<int> ResidueField::coeffs(Elem a) const {
    std::vector<int> r(f_);
    for (int j = 0; j < f_; ++j) {
        r[j] = static_cast<int>(a % static_cast<Elem>(p_));
        a /= static_cast<Elem>(p_);
    }
    return r;
}

ResidueField::Elem ResidueField::add(Elem a, Elem b) const {
    if (f_ == 1) {
        auto s = a + b;
        return s >= static_cast<Elem>(p_) ? s - static_cast<Elem>(p_) : s;
    }
    Elem r = 0;
    for (int j = 0; j < f_; ++j) {
        Elem da = a % static_cast<Elem>(p_), db = b % static_cast<Elem>(p_);
        a /= static_cast<Elem>(p_);
        b /= static_cast<Elem>(p_);
        r += ((da + db) % static_cast<Elem>(p_)) * pow_p_[j];
    }
    return r;
}

ResidueField::Elem ResidueField::neg(Elem a) const {
    Elem r = 0;
    for (int j = 0; j < f_; ++j) {
        Elem d = a % static_cast<Elem>(p_);
        a /= static_cast<Elem>(p_);
        r += ((static_cast<Elem>(p_) - d) % static_cast<Elem>(p_)) * pow_p_[j];
    }
    return r;
}

ResidueField::Elem ResidueField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

ResidueField::Elem ResidueField::mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    auto s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
}

ResidueField::Elem ResidueField::inv(Elem a) const {
    if (a == 0) throw ZeroInput("inverse of zero in F_q");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

ResidueField::Elem ResidueField::pow(Elem a, std::uint64_t n) const {
    if (n == 0) return 1;
    if (a == 0) return 0;
    return exp_[static_cast<std::uint32_t>((static_cast<std::uint64_t>(log_[a]) * (n % (q_ - 1))) % (q_ - 1))];
}

bool ResidueField::is_square(Elem a) const { return a == 0 || log_[a] % 2 == 0; }

FieldPtr PrimeFieldSpec::build() const {
    if (modulus.empty()) return std::make_shared<const ResidueField>(ResidueField::standard(p, f));
    if (static_cast<int>(modulus.size()) != f + 1) throw ConfigError("field modulus degree does not match f");
    return std::make_shared<const ResidueField>(p, modulus);
}

namespace detail {

int max_precision(int p) {
    int n = 0;
    std::int64_t v = 1;
    const std::int64_t limit = std::int64_t{1} << 61;
    while (v <= limit / p) {
        v *= p;
        ++n;
    }
    return n;
}

WittKernel::WittKernel(const ResidueField& k, int precision)
    : k_(&k), p_(k.p()), f_(k.f()), n_(precision), pn_(ipow(k.p(), precision)) {
    lifted_.assign(k.modulus().begin(), k.modulus().end() - 1);
    scratch_.resize(2 * static_cast<std::size_t>(f_));
}

void WittKernel::mul(const std::int64_t* a, const std::int64_t* b, std::int64_t* out) const {
    if (f_ == 1) {
        out[0] = mulmod(a[0], b[0], pn_);
        return;
    }
    std::vector<__int128> t(2 * f_ - 1, 0);
    for (int i = 0; i < f_; ++i)
        for (int j = 0; j < f_; ++j) t[i + j] = (t[i + j] + static_cast<__int128>(a[i]) * b[j]) % pn_;
    for (int d = 2 * f_ - 2; d >= f_; --d) {
        auto c = t[d];
        t[d] = 0;
        if (c == 0) continue;
        for (int i = 0; i < f_; ++i) t[d - f_ + i] = (t[d - f_ + i] - c * lifted_[i]) % pn_;
    }
    for (int j = 0; j < f_; ++j) {
        auto v = static_cast<std::int64_t>(t[j] % pn_);
        out[j] = v < 0 ? v + pn_ : v;
    }
}

void WittKernel::inv(const std::int64_t* a, std::int64_t* out) const {
    std::vector<std::int64_t> res(a, a + f_);
    for (auto& r : res) r %= p_;
    auto r0 = k_->inv(k_->from_coeffs(res));
    auto digits = k_->coeffs(r0);
    std::vector<std::int64_t> y(digits.begin(), digits.end()), t(f_), two(f_, 0);
    two[0] = 2 % pn_;
    for (int prec = 1; prec < n_; prec *= 2) {
        mul(a, y.data(), t.data());
        sub(two.data(), t.data(), t.data());
        mul(y.data(), t.data(), y.data());
    }
    std::copy(y.begin(), y.end(), out);
}

ChainRingImpl::ChainRingImpl(FieldPtr kk, EisensteinPoly gg, int nn)
    : k(std::move(kk)),
      g(std::move(gg)),
      p(k->p()),
      f(k->f()),
      e(g.degree()),
      n(nn),
      quo(nn / g.degree()),
      rem(nn % g.degree()),
      K((nn + g.degree() - 1) / g.degree()),
      wk(*k, (nn + g.degree() - 1) / g.degree()) {
    if (n < 1) throw ConfigError("chain ring level must be >= 1");
    if (g.precision() < K)
        throw PrecisionExhausted("Eisenstein coefficients known to p^" + std::to_string(g.precision()) +
                                 " but level " + std::to_string(n) + " needs p^" + std::to_string(K));
    if (K > max_precision(p)) throw ConfigError("chain ring level exceeds 64-bit digit capacity");
    cap.resize(e);
    for (int i = 0; i < e; ++i) cap[i] = ipow(p, i < rem ? quo + 1 : quo);
    glow.assign(width(), 0);
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < f; ++j) glow[i * f + j] = g.coeffs()[i].coords()[j] % wk.modulus();
    std::vector<std::int64_t> g0p(f);
    for (int j = 0; j < f; ++j) g0p[j] = (g.coeffs()[0].coords()[j] / p) % wk.modulus();
    g0_over_p_inv.resize(f);
    wk.inv(g0p.data(), g0_over_p_inv.data());
}

void ChainRingImpl::canonicalize(std::int64_t* c) const {
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < f; ++j) c[i * f + j] = modnorm(c[i * f + j], cap[i]);
}

void ChainRingImpl::mul(const std::int64_t* a, const std::int64_t* b, std::int64_t* out) const {
    std::vector<std::int64_t> t(static_cast<std::size_t>(2 * e - 1) * f, 0), prod(f);
    for (int i = 0; i < e; ++i) {
        if (wk.is_zero(a + i * f)) continue;
        for (int j = 0; j < e; ++j) {
            wk.mul(a + i * f, b + j * f, prod.data());
            wk.add(t.data() + (i + j) * f, prod.data(), t.data() + (i + j) * f);
        }
    }
    for (int d = 2 * e - 2; d >= e; --d) {
        auto* c = t.data() + d * f;
        if (wk.is_zero(c)) continue;
        for (int i = 0; i < e; ++i) {
            wk.mul(c, glow.data() + i * f, prod.data());
            wk.sub(t.data() + (d - e + i) * f, prod.data(), t.data() + (d - e + i) * f);
        }
        std::fill(c, c + f, 0);
    }
    std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(width()), out);
    canonicalize(out);
}

int ChainRingImpl::vpi(const std::int64_t* a) const {
    int best = n;
    for (int i = 0; i < e; ++i) {
        if (wk.is_zero(a + i * f)) continue;
        best = std::min(best, e * wk.val(a + i * f) + i);
    }
    return best;
}

}  // namespace detail

// ---------------------------------------------------------------- WittScalar

WittScalar::WittScalar(FieldPtr k, std::vector<std::int64_t> coords, int precision)
    : k_(std::move(k)), c_(std::move(coords)), n_(precision) {
    if (!k_) throw ConfigError("WittScalar without residue field");
    if (n_ < 1) throw PrecisionExhausted("WittScalar precision must be >= 1");
    if (n_ > detail::max_precision(k_->p())) throw ConfigError("precision exceeds 64-bit digit capacity");
    if (static_cast<int>(c_.size()) > k_->f()) throw ConfigError("too many Witt coordinates");
    c_.resize(k_->f(), 0);
    auto m = detail::ipow(k_->p(), n_);
    for (auto& x : c_) x = detail::modnorm(x, m);
}

WittScalar WittScalar::from_int(FieldPtr k, std::int64_t v, int precision) {
    return {std::move(k), {v}, precision};
}

WittScalar WittScalar::lift(FieldPtr k, ResidueField::Elem a, int precision) {
    auto d = k->coeffs(a);
    return {std::move(k), std::vector<std::int64_t>(d.begin(), d.end()), precision};
}

std::vector<std::vector<int>> WittScalar::digits() const {
    std::vector<std::vector<int>> out;
    for (auto x : c_) {
        std::vector<int> layer;
        for (int i = 0; i < n_; ++i) {
            layer.push_back(static_cast<int>(x % k_->p()));
            x /= k_->p();
        }
        out.push_back(std::move(layer));
    }
    return out;
}

int WittScalar::valuation_or_precision() const {
    int v = n_;
    for (auto x : c_) v = std::min(v, detail::vp_int(x, k_->p(), n_));
    return v;
}

Valuation WittScalar::valuation() const {
    int v = valuation_or_precision();
    return v >= n_ ? Valuation::at_least(n_) : Valuation::finite(v);
}

bool WittScalar::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](auto x) { return x == 0; });
}

bool WittScalar::is_unit() const { return valuation_or_precision() == 0; }

ResidueField::Elem WittScalar::residue() const { return k_->from_coeffs(c_); }

namespace {

void check_same_field(const WittScalar& a, const WittScalar& b) {
    if (a.field_ptr() != b.field_ptr() && !(a.field() == b.field()))
        throw PreconditionFailed("WittScalar operands over different residue fields");
}

}  // namespace

WittScalar WittScalar::operator+(const WittScalar& o) const {
    check_same_field(*this, o);
    int m = std::min(n_, o.n_);
    detail::WittKernel wk(*k_, m);
    std::vector<std::int64_t> a(c_), b(o.c_), r(k_->f());
    wk.reduce_mod(a.data(), wk.modulus(), a.data());
    wk.reduce_mod(b.data(), wk.modulus(), b.data());
    wk.add(a.data(), b.data(), r.data());
    return {k_, std::move(r), m};
}

WittScalar WittScalar::operator-() const {
    detail::WittKernel wk(*k_, n_);
    std::vector<std::int64_t> r(k_->f());
    wk.neg(c_.data(), r.data());
    return {k_, std::move(r), n_};
}

WittScalar WittScalar::operator-(const WittScalar& o) const { return *this + (-o); }

WittScalar WittScalar::operator*(const WittScalar& o) const {
    check_same_field(*this, o);
    int m = std::min(n_, o.n_);
    detail::WittKernel wk(*k_, m);
    std::vector<std::int64_t> a(c_), b(o.c_), r(k_->f());
    wk.reduce_mod(a.data(), wk.modulus(), a.data());
    wk.reduce_mod(b.data(), wk.modulus(), b.data());
    wk.mul(a.data(), b.data(), r.data());
    return {k_, std::move(r), m};
}

WittScalar WittScalar::pow(std::uint64_t n) const {
    auto r = one(k_, n_);
    auto b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

WittScalar WittScalar::inverse() const {
    if (is_zero()) throw ZeroInput("inverse of a WittScalar that is zero to precision " + std::to_string(n_));
    if (!is_unit()) throw PreconditionFailed("inverse of a non-unit WittScalar");
    detail::WittKernel wk(*k_, n_);
    std::vector<std::int64_t> r(k_->f());
    wk.inv(c_.data(), r.data());
    return {k_, std::move(r), n_};
}

WittScalar WittScalar::div_p(int out_precision) const {
    if (out_precision < 1 || out_precision > n_ - 1)
        throw PrecisionExhausted("division by p of a value known mod p^" + std::to_string(n_) +
                                 " cannot give " + std::to_string(out_precision) + " digits");
    for (auto x : c_)
        if (x % k_->p() != 0) throw PreconditionFailed("division by p of a unit");
    std::vector<std::int64_t> r;
    for (auto x : c_) r.push_back(x / k_->p());
    return {k_, std::move(r), out_precision};
}

WittScalar WittScalar::with_precision(int m) const {
    if (m > n_) throw PrecisionExhausted("cannot raise precision from " + std::to_string(n_) + " to " + std::to_string(m));
    return {k_, c_, m};
}

WittScalar WittScalar::times_p_pow(int v) const {
    int m = std::min(n_ + v, detail::max_precision(k_->p()));
    std::vector<std::int64_t> r(c_);
    auto mod = detail::ipow(k_->p(), m);
    auto s = detail::ipow(k_->p(), v) % mod;
    for (auto& x : r) x = detail::mulmod(x, s, mod);
    return {k_, std::move(r), m};
}

bool WittScalar::congruent(const WittScalar& o, int m) const {
    check_same_field(*this, o);
    if (m > std::min(n_, o.n_)) throw PrecisionExhausted("congruence beyond known precision");
    auto mod = detail::ipow(k_->p(), m);
    for (int j = 0; j < k_->f(); ++j)
        if (c_[j] % mod != o.c_[j] % mod) return false;
    return true;
}

bool operator==(const WittScalar& a, const WittScalar& b) {
    return a.n_ == b.n_ && a.c_ == b.c_ && (a.k_ == b.k_ || *a.k_ == *b.k_);
}

std::string WittScalar::str() const {
    std::ostringstream os;
    if (c_.size() == 1) {
        os << c_[0];
    } else {
        os << "(";
        for (std::size_t j = 0; j < c_.size(); ++j) os << (j ? "," : "") << c_[j];
        os << ")";
    }
    os << " mod " << k_->p() << "^" << n_;
    return os.str();
}

WittScalar teichmuller(const FieldPtr& k, ResidueField::Elem a, int precision) {
    if (a == 0) throw ZeroInput("Teichmuller lift of zero");
    auto x = WittScalar::lift(k, a, precision);
    for (int it = 0; it <= precision + 1; ++it) {
        auto y = x.pow(k->q());
        if (y == x) return x;
        x = y;
    }
    throw NoConvergence("Teichmuller iteration did not stabilise");
}

// ------------------------------------------------------------ EisensteinPoly

EisensteinPoly::EisensteinPoly(std::vector<WittScalar> coeffs) : c_(std::move(coeffs)) {
    if (c_.size() < 2) throw NotEisenstein("Eisenstein polynomial must have degree >= 1");
    for (const auto& c : c_) check_same_field(c, c_.front());
    int e = degree();
    if (!(c_[e] == WittScalar::one(c_[e].field_ptr(), c_[e].precision())))
        throw NotEisenstein("Eisenstein polynomial must be monic");
    for (int i = 1; i < e; ++i)
        if (c_[i].is_unit()) throw NotEisenstein("coefficient of X^" + std::to_string(i) + " is a unit");
    auto v0 = c_[0].valuation();
    if (v0.is_lower_bound()) {
        if (c_[0].precision() < 2) throw PrecisionExhausted("constant term valuation undetermined at precision 1");
        throw NotEisenstein("constant term has valuation >= 2");
    }
    if (v0.value() != 1) throw NotEisenstein("constant term must have valuation exactly 1, got " + v0.str());
}

EisensteinPoly EisensteinPoly::from_ints(const FieldPtr& k, const std::vector<std::int64_t>& coeffs, int precision) {
    std::vector<WittScalar> c;
    for (auto v : coeffs) c.push_back(WittScalar::from_int(k, v, precision));
    return EisensteinPoly(std::move(c));
}

int EisensteinPoly::precision() const {
    int m = c_.front().precision();
    for (const auto& c : c_) m = std::min(m, c.precision());
    return m;
}

// ----------------------------------------------------------------- ChainRing

ChainRing make_extension(const FieldPtr& k, const EisensteinPoly& g, int n) {
    if (!(g.field_ptr() == k || *g.field_ptr() == *k))
        throw ConfigError("Eisenstein polynomial is over a different residue field");
    return ChainRing(std::make_shared<const detail::ChainRingImpl>(k, g, n));
}

ChainRing make_extension(const PrimeFieldSpec& spec, const EisensteinPoly& g, int n) {
    auto k = g.field_ptr();
    if (k->p() != spec.p || k->f() != spec.f || (!spec.modulus.empty() && k->modulus() != spec.modulus))
        throw ConfigError("Eisenstein polynomial does not match the field spec");
    return make_extension(k, g, n);
}

ChainRing truncated_polynomial_ring(const FieldPtr& k, int len) {
    std::vector<std::int64_t> c(len + 1, 0);
    c[0] = -k->p();
    c[len] = 1;
    return make_extension(k, EisensteinPoly::from_ints(k, c, 2), len);
}

ChainRing witt_quotient(const FieldPtr& k, int n) {
    return make_extension(k, EisensteinPoly::from_ints(k, {-k->p(), 1}, std::max(n, 2)), n);
}

int ChainRing::p() const { return impl_->p; }
int ChainRing::f() const { return impl_->f; }
int ChainRing::e() const { return impl_->e; }
int ChainRing::level() const { return impl_->n; }
int ChainRing::witt_precision() const { return impl_->K; }
const FieldPtr& ChainRing::residue_field() const { return impl_->k; }
const EisensteinPoly& ChainRing::eisenstein() const { return impl_->g; }

std::uint64_t ChainRing::size() const {
    std::uint64_t s = 1;
    for (int i = 0; i < impl_->n; ++i) {
        if (s > std::numeric_limits<std::uint64_t>::max() / impl_->k->q()) throw CapExceeded("ring size overflow", i);
        s *= impl_->k->q();
    }
    return s;
}

ChainRing ChainRing::at_level(int m) const {
    if (m == impl_->n) return *this;
    return ChainRing(std::make_shared<const detail::ChainRingImpl>(impl_->k, impl_->g, m));
}

ChainRingElem ChainRing::zero() const { return {*this, std::vector<std::int64_t>(impl_->width(), 0)}; }
ChainRingElem ChainRing::one() const { return from_int(1); }

ChainRingElem ChainRing::pi() const {
    std::vector<std::int64_t> c(impl_->width(), 0);
    if (impl_->e > 1) c[impl_->f] = 1;
    else c[0] = detail::modnorm(-impl_->glow[0], impl_->cap[0]);
    return {*this, std::move(c)};
}

ChainRingElem ChainRing::from_int(std::int64_t v) const {
    std::vector<std::int64_t> c(impl_->width(), 0);
    c[0] = v;
    return {*this, std::move(c)};
}

ChainRingElem ChainRing::from_witt(const WittScalar& w) const {
    if (w.precision() < impl_->K)
        throw PrecisionExhausted("WittScalar known to p^" + std::to_string(w.precision()) + ", ring needs p^" +
                                 std::to_string(impl_->K));
    std::vector<std::int64_t> c(impl_->width(), 0);
    for (int j = 0; j < impl_->f; ++j) c[j] = w.coords()[j];
    return {*this, std::move(c)};
}

ChainRingElem ChainRing::from_coords(std::vector<std::int64_t> coords) const { return {*this, std::move(coords)}; }

ChainRingElem ChainRing::lift_residue(ResidueField::Elem a) const {
    std::vector<std::int64_t> c(impl_->width(), 0);
    auto d = impl_->k->coeffs(a);
    for (int j = 0; j < impl_->f; ++j) c[j] = d[j];
    return {*this, std::move(c)};
}

ChainRingElem ChainRing::element_at(std::uint64_t index) const {
    std::vector<std::int64_t> c(impl_->width(), 0);
    for (int i = 0; i < impl_->e; ++i)
        for (int j = 0; j < impl_->f; ++j) {
            auto cap = static_cast<std::uint64_t>(impl_->cap[i]);
            c[i * impl_->f + j] = static_cast<std::int64_t>(index % cap);
            index /= cap;
        }
    return {*this, std::move(c)};
}

std::vector<ChainRingElem> ChainRing::additive_generators() const {
    std::vector<ChainRingElem> out;
    for (int i = 0; i < impl_->e; ++i) {
        if (impl_->cap[i] == 1) continue;
        for (int j = 0; j < impl_->f; ++j) {
            std::vector<std::int64_t> c(impl_->width(), 0);
            c[i * impl_->f + j] = 1;
            out.emplace_back(*this, std::move(c));
        }
    }
    return out;
}

bool operator==(const ChainRing& a, const ChainRing& b) {
    if (a.impl_ == b.impl_) return true;
    const auto& x = *a.impl_;
    const auto& y = *b.impl_;
    return x.n == y.n && x.e == y.e && *x.k == *y.k && x.glow == y.glow;
}

std::string ChainRing::describe() const {
    std::ostringstream os;
    os << "O/(pi^" << impl_->n << ") p=" << impl_->p << " f=" << impl_->f << " e=" << impl_->e << " g=";
    for (int i = impl_->e; i >= 0; --i) {
        os << (i == impl_->e ? "" : " + ") << "(" << impl_->g.coeffs()[i].str() << ")X^" << i;
    }
    return os.str();
}

// ------------------------------------------------------------- ChainRingElem

ChainRingElem::ChainRingElem(ChainRing ring, std::vector<std::int64_t> coords)
    : ring_(std::move(ring)), c_(std::move(coords)) {
    if (c_.size() != ring_.impl().width()) throw ConfigError("chain ring element has wrong number of coordinates");
    ring_.impl().canonicalize(c_.data());
}

namespace {

void check_same_ring(const ChainRingElem& a, const ChainRingElem& b) {
    if (!(a.ring() == b.ring())) throw PreconditionFailed("chain ring operands from different rings");
}

}  // namespace

Valuation ChainRingElem::val() const {
    int v = vpi();
    if (v >= ring_.level()) return Valuation::infinite();
    return Valuation::finite(Rational(v, ring_.e()));
}

int ChainRingElem::vpi() const { return ring_.impl().vpi(c_.data()); }

bool ChainRingElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](auto x) { return x == 0; });
}

bool ChainRingElem::is_unit() const { return vpi() == 0; }

ResidueField::Elem ChainRingElem::residue() const {
    return ring_.residue_field()->from_coeffs(std::span<const std::int64_t>(c_.data(), ring_.f()));
}

std::uint64_t ChainRingElem::index() const {
    const auto& im = ring_.impl();
    std::uint64_t idx = 0, radix = 1;
    for (int i = 0; i < im.e; ++i)
        for (int j = 0; j < im.f; ++j) {
            idx += static_cast<std::uint64_t>(c_[i * im.f + j]) * radix;
            radix *= static_cast<std::uint64_t>(im.cap[i]);
        }
    return idx;
}

ChainRingElem ChainRingElem::operator+(const ChainRingElem& o) const {
    check_same_ring(*this, o);
    std::vector<std::int64_t> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = c_[i] + o.c_[i];
    return {ring_, std::move(r)};
}

ChainRingElem ChainRingElem::operator-(const ChainRingElem& o) const {
    check_same_ring(*this, o);
    std::vector<std::int64_t> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = c_[i] - o.c_[i];
    return {ring_, std::move(r)};
}

ChainRingElem ChainRingElem::operator-() const {
    std::vector<std::int64_t> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -c_[i];
    return {ring_, std::move(r)};
}

ChainRingElem ChainRingElem::operator*(const ChainRingElem& o) const {
    check_same_ring(*this, o);
    std::vector<std::int64_t> r(c_.size());
    ring_.impl().mul(c_.data(), o.c_.data(), r.data());
    return {ring_, std::move(r)};
}

ChainRingElem ChainRingElem::pow(std::uint64_t n) const {
    auto r = ring_.one();
    auto b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

ChainRingElem ChainRingElem::inverse() const {
    if (is_zero()) throw ZeroInput("inverse of zero in " + ring_.describe());
    if (!is_unit()) throw PreconditionFailed("inverse of a non-unit in a chain ring");
    auto y = ring_.lift_residue(ring_.residue_field()->inv(residue()));
    auto two = ring_.from_int(2);
    for (int prec = 1; prec < ring_.level(); prec *= 2) y = y * (two - *this * y);
    return y;
}

ChainRingElem ChainRingElem::reduce(int m) const {
    if (m > ring_.level() || m < 1) throw PreconditionFailed("reduction to level " + std::to_string(m) + " from level " +
                                                             std::to_string(ring_.level()));
    return {ring_.at_level(m), c_};
}

ChainRingElem ChainRingElem::lift_to(const ChainRing& higher) const {
    if (higher.level() < ring_.level() || !(higher.at_level(ring_.level()) == ring_))
        throw PreconditionFailed("lift target is not a higher level of the same ring");
    return {higher, c_};
}

ChainRingElem ChainRingElem::div_pi() const {
    const auto& im = ring_.impl();
    if (im.n < 2) throw PrecisionExhausted("division by pi in the residue field");
    if (vpi() < 1) throw PreconditionFailed("division by pi of a unit");
    const auto& wk = im.wk;
    int e = im.e, f = im.f;
    std::vector<std::int64_t> y(im.width(), 0), t(f), x0p(f);
    wk.div_p_pow(c_.data(), 1, x0p.data());
    wk.mul(x0p.data(), im.g0_over_p_inv.data(), t.data());
    wk.neg(t.data(), y.data() + (e - 1) * f);
    for (int i = 1; i < e; ++i) {
        wk.mul(y.data() + (e - 1) * f, im.glow.data() + i * f, t.data());
        wk.add(c_.data() + i * f, t.data(), y.data() + (i - 1) * f);
    }
    return {ring_.at_level(im.n - 1), std::move(y)};
}

bool operator==(const ChainRingElem& a, const ChainRingElem& b) { return a.c_ == b.c_ && a.ring_ == b.ring_; }

std::string ChainRingElem::str() const {
    std::ostringstream os;
    const auto& im = ring_.impl();
    os << "[";
    for (int i = 0; i < im.e; ++i) {
        if (i) os << ", ";
        if (im.f == 1) {
            os << c_[i];
        } else {
            os << "(";
            for (int j = 0; j < im.f; ++j) os << (j ? "," : "") << c_[i * im.f + j];
            os << ")";
        }
    }
    os << "]";
    return os.str();
}

}  // namespace liftcheck
