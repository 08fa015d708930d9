#include "liftcheck/localcoh.hpp"

namespace liftcheck {

namespace {

using Elem = ResidueField::Elem;

KMatrix transpose_inverse(const ResidueField& k, const KMatrix& a, int m) {
    auto inv = kmat_inverse(k, a, m);
    KMatrix t(m * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) t[r * m + c] = inv[c * m + r];
    return t;
}

KMatrix scaled(const ResidueField& k, Elem s, KMatrix a) {
    for (auto& x : a) x = k.mul(s, x);
    return a;
}

KMatrix kmat_pow(const ResidueField& k, const KMatrix& a, int m, std::uint64_t n) {
    KMatrix r(m * m, 0);
    for (int i = 0; i < m; ++i) r[i * m + i] = 1;
    auto b = a;
    for (; n; n >>= 1) {
        if (n & 1) r = kmat_mul(k, r, b, m);
        b = kmat_mul(k, b, b, m);
    }
    return r;
}

LocalModuleSpec character_at_p(const FieldPtr& k, Elem frob, Elem inertia) {
    LocalModuleSpec s;
    s.place = Place::AtP;
    s.q_v = k->p();
    s.field = k;
    s.dim = 1;
    s.frobenius = {frob};
    s.inertia = KMatrix{inertia};
    return s;
}

}  // namespace

std::string place_name(Place v) {
    switch (v) {
        case Place::AwayFromP: return "away";
        case Place::AtP: return "p";
        case Place::Archimedean: return "infinity";
    }
    return "?";
}

Elem cyclotomic_inertia(const ResidueField& k) {
    int p = k.p();
    for (int a = 2; a < p; ++a) {
        int x = 1, ord = 0;
        do {
            x = x * a % p;
            ++ord;
        } while (x != 1);
        if (ord == p - 1) return k.from_int(a);
    }
    return k.from_int(1);
}

LocalModuleSpec local_module(const GModule& m, Place v, int q_v, const ResidueMat& frob,
                             const std::optional<ResidueMat>& inertia) {
    LocalModuleSpec s;
    s.place = v;
    s.q_v = q_v;
    s.field = m.field;
    s.dim = m.dim;
    s.frobenius = m.action(frob);
    if (inertia) s.inertia = m.action(*inertia);
    validate(s);
    return s;
}

void validate(const LocalModuleSpec& m) {
    const auto& k = *m.field;
    int d = m.dim;
    if (static_cast<int>(m.frobenius.size()) != d * d) throw ConfigError("frobenius has the wrong size");
    if (kmat_rank(k, m.frobenius, d, d) != d) throw PreconditionFailed("frobenius is not invertible");
    if (m.inertia) {
        if (static_cast<int>(m.inertia->size()) != d * d) throw ConfigError("inertia has the wrong size");
        if (kmat_rank(k, *m.inertia, d, d) != d) throw PreconditionFailed("inertia is not invertible");
        if (m.place == Place::AwayFromP) {
            auto lhs = kmat_mul(k, kmat_mul(k, m.frobenius, *m.inertia, d), kmat_inverse(k, m.frobenius, d), d);
            if (m.q_v <= 0) throw ConfigError("residue field size must be positive");
            if (lhs != kmat_pow(k, *m.inertia, d, static_cast<std::uint64_t>(m.q_v)))
                throw PreconditionFailed("tame relation Fr I Fr^-1 = I^q fails");
        }
    }
}

LocalModuleSpec dual_module(const LocalModuleSpec& m) {
    const auto& k = *m.field;
    LocalModuleSpec d = m;
    d.twist = 1 - m.twist;
    auto fi = transpose_inverse(k, m.frobenius, m.dim);
    switch (m.place) {
        case Place::AwayFromP:
            d.frobenius = scaled(k, k.from_int(m.q_v), fi);
            if (m.inertia) d.inertia = transpose_inverse(k, *m.inertia, m.dim);
            break;
        case Place::AtP:
            d.frobenius = fi;
            if (m.inertia) d.inertia = scaled(k, cyclotomic_inertia(k), transpose_inverse(k, *m.inertia, m.dim));
            break;
        case Place::Archimedean:
            d.frobenius = scaled(k, k.neg(1), fi);
            break;
    }
    return d;
}

int local_h0(const LocalModuleSpec& m) {
    const auto& k = *m.field;
    int d = m.dim;
    KMatrix stacked;
    auto append = [&](const KMatrix& a) {
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) stacked.push_back(r == c ? k.sub(a[r * d + c], 1) : a[r * d + c]);
    };
    append(m.frobenius);
    if (m.inertia) append(*m.inertia);
    int rows = static_cast<int>(stacked.size()) / d;
    return d - kmat_rank(k, stacked, rows, d);
}

LocalDims local_dims(const LocalModuleSpec& m) {
    validate(m);
    LocalDims r;
    r.h0 = local_h0(m);
    if (m.place == Place::Archimedean) return r;
    int delta = m.place == Place::AtP ? 1 : 0;
    r.h2 = local_h0(dual_module(m));
    r.h1 = r.h0 + r.h2 + delta * m.dim;
    r.h1_nr = r.h0;
    r.dim_L = r.h0 + delta;
    r.dim_L_tilde = r.h0 + 2 * delta;
    return r;
}

std::string verdict_name(NiceVerdict v) {
    switch (v) {
        case NiceVerdict::Neither: return "neither";
        case NiceVerdict::Nice: return "nice";
        case NiceVerdict::RhoRNice: return "rho_R-nice";
    }
    return "?";
}

NiceVerdict nice_test(int p, int q, std::pair<std::int64_t, std::int64_t> eigenvalues, const NiceData& lifted) {
    if (q == p) throw PreconditionFailed("nice primes are distinct from p");
    auto mod = [p](std::int64_t x) { return ((x % p) + p) % p; };
    std::int64_t qm = mod(q);
    if (qm == 1) return NiceVerdict::Neither;
    auto a = mod(eigenvalues.first), b = mod(eigenvalues.second);
    if (!((a == qm && b == 1) || (a == 1 && b == qm))) return NiceVerdict::Neither;
    if (!lifted.lifted_eigenvalues || !lifted.element_order) return NiceVerdict::Nice;
    const auto& [x, y] = *lifted.lifted_eigenvalues;
    const auto& r = x.ring();
    auto rq = r.from_int(q), one = r.one();
    bool eig_ok = (x == rq && y == one) || (x == one && y == rq);
    bool order_ok = *lifted.element_order % static_cast<std::uint64_t>(p) != 0;
    return eig_ok && order_ok ? NiceVerdict::RhoRNice : NiceVerdict::Nice;
}

VpRow vequalsp_table(int case_id, int p) {
    if (case_id < 1 || case_id > 5) throw ConfigError("local case must be 1..5");
    auto kp = std::make_shared<const ResidueField>(ResidueField::standard(p, 1));
    const auto& k = *kp;
    Elem w = cyclotomic_inertia(k), eta = k.generator(), one = 1, zero = 0;
    VpRow row;
    row.case_id = case_id;
    // upper-left character on (Fr, tau); eps sends Fr to 1 and tau to w
    Elem chi_fr = case_id <= 2 ? eta : one;
    ResidueMat unipotent{one, one, zero, one};
    row.image_generators = {{chi_fr, zero, zero, one}, {w, zero, zero, one}};
    row.split = case_id == 1 || case_id == 5;
    if (!row.split) row.image_generators.push_back(unipotent);
    static const char* names[] = {"diag(eta eps, 1)", "[[eta eps, *], [0, 1]]", "[[eps, *], [0, 1]] flat",
                                  "[[eps, *], [0, 1]] not flat", "diag(eps, 1)"};
    row.description = names[case_id - 1];
    auto ad = ad_module(kp);
    KMatrix stacked;
    for (const auto& g : row.image_generators) {
        auto a = ad.action(g);
        for (int i = 0; i < ad.dim; ++i) a[i * ad.dim + i] = k.sub(a[i * ad.dim + i], 1);
        stacked.insert(stacked.end(), a.begin(), a.end());
    }
    int rows = static_cast<int>(stacked.size()) / ad.dim;
    row.h0_ad = ad.dim - kmat_rank(k, stacked, rows, ad.dim);
    row.dim_L_tilde = row.h0_ad + 2;
    row.dim_L_tilde_raw = row.dim_L_tilde;
    // for a split image, extensions of 1 by the upper-left character beyond the generic single class
    if (row.split) row.dim_L_tilde_raw += local_dims(character_at_p(kp, chi_fr, w)).h1 - 1;
    row.smooth_vars = row.dim_L_tilde;
    return row;
}

LocalModuleSpec archimedean_module(const GModule& m) {
    const auto& k = *m.field;
    return local_module(m, Place::Archimedean, 0, {1, 0, 0, k.neg(1)});
}

}  // namespace liftcheck
