#pragma once

// Dense polynomials over a residue field F_q, indexed by ResidueField::Elem.

#include <vector>

#include "liftcheck/chainring.hpp"

namespace liftcheck::detail {

using KPoly = std::vector<ResidueField::Elem>;

inline void ktrim(KPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline KPoly ksub(const ResidueField& k, KPoly a, const KPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = k.sub(a[i], b[i]);
    ktrim(a);
    return a;
}

inline KPoly kmul(const ResidueField& k, const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return {};
    KPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
    ktrim(r);
    return r;
}

// Quotient and remainder of a by nonzero b.
inline std::pair<KPoly, KPoly> kdivmod(const ResidueField& k, KPoly a, const KPoly& b) {
    ktrim(a);
    KPoly q;
    auto db = b.size() - 1;
    auto lead_inv = k.inv(b.back());
    if (a.size() > db) q.assign(a.size() - db, 0);
    while (!a.empty() && a.size() - 1 >= db) {
        auto shift = a.size() - 1 - db;
        auto c = k.mul(a.back(), lead_inv);
        q[shift] = c;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] = k.sub(a[shift + i], k.mul(c, b[i]));
        ktrim(a);
    }
    ktrim(q);
    return {q, a};
}

inline KPoly kmod(const ResidueField& k, const KPoly& a, const KPoly& b) { return kdivmod(k, a, b).second; }

inline KPoly kgcd(const ResidueField& k, KPoly a, KPoly b) {
    ktrim(a);
    ktrim(b);
    while (!b.empty()) {
        auto r = kmod(k, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        auto inv = k.inv(a.back());
        for (auto& c : a) c = k.mul(c, inv);
    }
    return a;
}

inline KPoly kderiv(const ResidueField& k, const KPoly& a) {
    KPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(k.mul(k.from_int(static_cast<std::int64_t>(i)), a[i]));
    ktrim(r);
    return r;
}

inline KPoly kpowmod(const ResidueField& k, KPoly base, std::uint64_t e, const KPoly& m) {
    KPoly r{1};
    base = kmod(k, base, m);
    while (e > 0) {
        if (e & 1) r = kmod(k, kmul(k, r, base), m);
        base = kmod(k, kmul(k, base, base), m);
        e >>= 1;
    }
    return kmod(k, r, m);
}

inline ResidueField::Elem keval(const ResidueField& k, const KPoly& a, ResidueField::Elem x) {
    ResidueField::Elem r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = k.add(k.mul(r, x), a[i]);
    return r;
}

inline bool ksquarefree(const ResidueField& k, const KPoly& a) {
    if (a.size() <= 1) return true;
    auto d = kderiv(k, a);
    if (d.empty()) return false;
    return kgcd(k, a, d).size() == 1;
}

// Degrees of the irreducible factors of a squarefree polynomial.
inline std::vector<int> kfactor_degrees(const ResidueField& k, KPoly a) {
    std::vector<int> out;
    ktrim(a);
    KPoly h{0, 1};
    for (int i = 1; a.size() > 1; ++i) {
        if (2 * i > static_cast<int>(a.size()) - 1) {
            out.push_back(static_cast<int>(a.size()) - 1);
            break;
        }
        h = kpowmod(k, h, k.q(), a);
        auto g = kgcd(k, ksub(k, h, KPoly{0, 1}), a);
        int dg = static_cast<int>(g.size()) - 1;
        for (int j = 0; j < dg / i; ++j) out.push_back(i);
        if (dg > 0) {
            a = kdivmod(k, a, g).first;
            h = kmod(k, h, a);
        }
    }
    return out;
}

}  // namespace liftcheck::detail
