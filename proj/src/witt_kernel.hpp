#pragma once

// Raw arithmetic on W(F_{p^f})/p^N values stored as f contiguous int64 digits.

#include <cstdint>
#include <vector>

#include "liftcheck/chainring.hpp"

namespace liftcheck::detail {

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

inline std::int64_t ipow(std::int64_t p, int n) {
    std::int64_t r = 1;
    for (int i = 0; i < n; ++i) r *= p;
    return r;
}

inline std::int64_t modnorm(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

// Largest N with p^N comfortably inside int64.
int max_precision(int p);

inline int vp_int(std::int64_t a, int p, int cap) {
    if (a == 0) return cap;
    int v = 0;
    while (a % p == 0 && v < cap) {
        a /= p;
        ++v;
    }
    return v;
}

class WittKernel {
public:
    WittKernel(const ResidueField& k, int precision);

    int p() const { return p_; }
    int f() const { return f_; }
    int precision() const { return n_; }
    std::int64_t modulus() const { return pn_; }

    void add(const std::int64_t* a, const std::int64_t* b, std::int64_t* out) const {
        for (int j = 0; j < f_; ++j) {
            auto s = a[j] + b[j];
            out[j] = s >= pn_ ? s - pn_ : s;
        }
    }
    void sub(const std::int64_t* a, const std::int64_t* b, std::int64_t* out) const {
        for (int j = 0; j < f_; ++j) {
            auto s = a[j] - b[j];
            out[j] = s < 0 ? s + pn_ : s;
        }
    }
    void neg(const std::int64_t* a, std::int64_t* out) const {
        for (int j = 0; j < f_; ++j) out[j] = a[j] == 0 ? 0 : pn_ - a[j];
    }
    // out may alias an input.
    void mul(const std::int64_t* a, const std::int64_t* b, std::int64_t* out) const;
    void scale(const std::int64_t* a, std::int64_t s, std::int64_t* out) const {
        auto sm = modnorm(s, pn_);
        for (int j = 0; j < f_; ++j) out[j] = mulmod(a[j], sm, pn_);
    }
    int val(const std::int64_t* a) const {
        int v = n_;
        for (int j = 0; j < f_; ++j) v = std::min(v, vp_int(a[j], p_, n_));
        return v;
    }
    bool is_zero(const std::int64_t* a) const {
        for (int j = 0; j < f_; ++j)
            if (a[j] != 0) return false;
        return true;
    }
    // Inverse of a unit.
    void inv(const std::int64_t* a, std::int64_t* out) const;
    // A representative of a / p^v; requires val(a) >= v.
    void div_p_pow(const std::int64_t* a, int v, std::int64_t* out) const {
        auto d = ipow(p_, v);
        for (int j = 0; j < f_; ++j) out[j] = a[j] / d;
    }
    void reduce_mod(const std::int64_t* a, std::int64_t m, std::int64_t* out) const {
        for (int j = 0; j < f_; ++j) out[j] = a[j] % m;
    }

    const ResidueField& field() const { return *k_; }

private:
    const ResidueField* k_;
    int p_;
    int f_;
    int n_;
    std::int64_t pn_;
    std::vector<std::int64_t> lifted_;  // low coefficients of the monic lifted modulus
    mutable std::vector<std::int64_t> scratch_;
};

struct ChainRingImpl {
    FieldPtr k;
    EisensteinPoly g;
    int p;
    int f;
    int e;
    int n;
    int quo;  // n = quo * e + rem
    int rem;
    int K;    // Witt precision ceil(n / e)
    WittKernel wk;
    std::vector<std::int64_t> cap;     // per coordinate modulus
    std::vector<std::int64_t> glow;    // e blocks of f digits: g_0 .. g_{e-1} mod p^K
    std::vector<std::int64_t> g0_over_p_inv;  // (g_0 / p)^{-1} mod p^K

    ChainRingImpl(FieldPtr k, EisensteinPoly g, int n);

    std::size_t width() const { return static_cast<std::size_t>(e) * f; }
    void canonicalize(std::int64_t* c) const;
    void mul(const std::int64_t* a, const std::int64_t* b, std::int64_t* out) const;
    int vpi(const std::int64_t* a) const;
};

}  // namespace liftcheck::detail
