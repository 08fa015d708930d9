#include "liftcheck/groupcoh.hpp"

namespace liftcheck {

namespace {

using Elem = ResidueField::Elem;

ResidueMat mul2(const ResidueField& k, const ResidueMat& x, const ResidueMat& y) {
    return {k.add(k.mul(x[0], y[0]), k.mul(x[1], y[2])), k.add(k.mul(x[0], y[1]), k.mul(x[1], y[3])),
            k.add(k.mul(x[2], y[0]), k.mul(x[3], y[2])), k.add(k.mul(x[2], y[1]), k.mul(x[3], y[3]))};
}

Elem det2(const ResidueField& k, const ResidueMat& g) { return k.sub(k.mul(g[0], g[3]), k.mul(g[1], g[2])); }

ResidueMat inv2(const ResidueField& k, const ResidueMat& g) {
    auto di = k.inv(det2(k, g));
    return {k.mul(g[3], di), k.neg(k.mul(g[1], di)), k.neg(k.mul(g[2], di)), k.mul(g[0], di)};
}

// Conjugation action on span of the given basis matrices; coords picks the
// coordinates of a matrix in that basis.
KMatrix conjugation(const ResidueField& k, const ResidueMat& g, const std::vector<ResidueMat>& basis,
                    const std::function<std::vector<Elem>(const ResidueMat&)>& coords) {
    auto gi = inv2(k, g);
    auto m = basis.size();
    KMatrix out(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        auto c = coords(mul2(k, mul2(k, g, basis[j]), gi));
        for (std::size_t i = 0; i < m; ++i) out[i * m + j] = c[i];
    }
    return out;
}

Elem kpow_signed(const ResidueField& k, Elem a, int j) {
    if (j >= 0) return k.pow(a, static_cast<std::uint64_t>(j));
    return k.pow(k.inv(a), static_cast<std::uint64_t>(-j));
}

int fq_dim(int fp_dim, int f) {
    if (fp_dim % f) throw PreconditionFailed("F_p dimension is not a multiple of f");
    return fp_dim / f;
}

std::vector<std::vector<FpVec>> generator_actions(const FiniteMatGroup& g, const GModule& m) {
    std::vector<std::vector<FpVec>> out;
    for (std::size_t s = 0; s < g.num_generators(); ++s)
        out.push_back(fp_action(m, residue_matrix(g.table(), g.generator_key(s))));
    return out;
}

}  // namespace

ResidueMat residue_matrix(const RingTable& t, MatKey m) {
    auto e = RingTable::unpack(m);
    return {t.residue(e[0]), t.residue(e[1]), t.residue(e[2]), t.residue(e[3])};
}

KMatrix kmat_inverse(const ResidueField& k, KMatrix a, int m) {
    KMatrix inv(m * m, 0);
    for (int i = 0; i < m; ++i) inv[i * m + i] = 1;
    for (int c = 0; c < m; ++c) {
        int piv = c;
        while (piv < m && a[piv * m + c] == 0) ++piv;
        if (piv == m) throw PreconditionFailed("module action is not invertible");
        for (int j = 0; j < m; ++j) {
            std::swap(a[c * m + j], a[piv * m + j]);
            std::swap(inv[c * m + j], inv[piv * m + j]);
        }
        auto s = k.inv(a[c * m + c]);
        for (int j = 0; j < m; ++j) {
            a[c * m + j] = k.mul(a[c * m + j], s);
            inv[c * m + j] = k.mul(inv[c * m + j], s);
        }
        for (int i = 0; i < m; ++i) {
            if (i == c || a[i * m + c] == 0) continue;
            auto t = a[i * m + c];
            for (int j = 0; j < m; ++j) {
                a[i * m + j] = k.sub(a[i * m + j], k.mul(t, a[c * m + j]));
                inv[i * m + j] = k.sub(inv[i * m + j], k.mul(t, inv[c * m + j]));
            }
        }
    }
    return inv;
}

KMatrix kmat_mul(const ResidueField& k, const KMatrix& a, const KMatrix& b, int m) {
    KMatrix out(m * m, 0);
    for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) {
            if (a[i * m + l] == 0) continue;
            for (int j = 0; j < m; ++j) out[i * m + j] = k.add(out[i * m + j], k.mul(a[i * m + l], b[l * m + j]));
        }
    return out;
}

int kmat_rank(const ResidueField& k, KMatrix a, int rows, int cols) {
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = rank;
        while (piv < rows && a[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        for (int j = 0; j < cols; ++j) std::swap(a[rank * cols + j], a[piv * cols + j]);
        auto s = k.inv(a[rank * cols + c]);
        for (int i = rank + 1; i < rows; ++i) {
            auto t = k.mul(a[i * cols + c], s);
            if (t == 0) continue;
            for (int j = c; j < cols; ++j) a[i * cols + j] = k.sub(a[i * cols + j], k.mul(t, a[rank * cols + j]));
        }
        ++rank;
    }
    return rank;
}

GModule ad0_module(FieldPtr k) {
    GModule m{"Ad0", k, 3, {}};
    m.action = [k](const ResidueMat& g) {
        const auto& f = *k;
        std::vector<ResidueMat> basis{{0, 1, 0, 0}, {1, 0, 0, f.neg(1)}, {0, 0, 1, 0}};
        return conjugation(f, g, basis, [](const ResidueMat& y) { return std::vector<Elem>{y[1], y[0], y[2]}; });
    };
    return m;
}

GModule ad_module(FieldPtr k) {
    GModule m{"Ad", k, 4, {}};
    m.action = [k](const ResidueMat& g) {
        std::vector<ResidueMat> basis{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
        return conjugation(*k, g, basis, [](const ResidueMat& y) { return std::vector<Elem>(y.begin(), y.end()); });
    };
    return m;
}

GModule trivial_module(FieldPtr k, int dim) {
    GModule m{"trivial", k, dim, {}};
    m.action = [dim](const ResidueMat&) {
        KMatrix id(dim * dim, 0);
        for (int i = 0; i < dim; ++i) id[i * dim + i] = 1;
        return id;
    };
    return m;
}

GModule det_twist_module(FieldPtr k, int j) {
    GModule m{"det^" + std::to_string(j), k, 1, {}};
    m.action = [k, j](const ResidueMat& g) { return KMatrix{kpow_signed(*k, det2(*k, g), j)}; };
    return m;
}

GModule dual_twist_module(const GModule& src, int j) {
    GModule m{src.label + "*(" + std::to_string(j) + ")", src.field, src.dim, {}};
    auto act = src.action;
    auto k = src.field;
    int d = src.dim;
    m.action = [act, k, j, d](const ResidueMat& g) {
        auto inv = kmat_inverse(*k, act(g), d);
        auto chi = kpow_signed(*k, det2(*k, g), j);
        KMatrix out(d * d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) out[r * d + c] = k->mul(chi, inv[c * d + r]);
        return out;
    };
    return m;
}

GModule direct_sum(const GModule& a, const GModule& b) {
    if (!(*a.field == *b.field)) throw PreconditionFailed("direct sum of modules over different fields");
    GModule m{a.label + "+" + b.label, a.field, a.dim + b.dim, {}};
    auto aa = a.action, ba = b.action;
    int da = a.dim, db = b.dim, d = a.dim + b.dim;
    m.action = [aa, ba, da, db, d](const ResidueMat& g) {
        auto x = aa(g), y = ba(g);
        KMatrix out(d * d, 0);
        for (int r = 0; r < da; ++r)
            for (int c = 0; c < da; ++c) out[r * d + c] = x[r * da + c];
        for (int r = 0; r < db; ++r)
            for (int c = 0; c < db; ++c) out[(da + r) * d + da + c] = y[r * db + c];
        return out;
    };
    return m;
}

GModule subquotient(const GModule& src, int lo, int hi, std::string label) {
    if (lo < 0 || hi <= lo || hi > src.dim) throw ConfigError("bad subquotient range");
    GModule m{std::move(label), src.field, hi - lo, {}};
    auto act = src.action;
    int d = src.dim;
    m.action = [act, d, lo, hi](const ResidueMat& g) {
        auto x = act(g);
        for (int c = 0; c < hi; ++c)
            for (int r = (c < lo ? lo : hi); r < d; ++r)
                if (x[r * d + c] != 0) throw PreconditionFailed("subquotient is not stable under the action");
        int w = hi - lo;
        KMatrix out(w * w);
        for (int r = 0; r < w; ++r)
            for (int c = 0; c < w; ++c) out[r * w + c] = x[(lo + r) * d + lo + c];
        return out;
    };
    return m;
}

GModule borel_u0(FieldPtr k) { return subquotient(ad0_module(std::move(k)), 0, 1, "U0"); }
GModule borel_u1_mod_u0(FieldPtr k) { return subquotient(ad0_module(std::move(k)), 1, 2, "U1/U0"); }

std::vector<FpVec> fp_action(const GModule& m, const ResidueMat& g) {
    const auto& k = *m.field;
    int f = k.f(), p = k.p(), n = m.dim, dd = n * f;
    auto a = m.action(g);
    std::vector<Elem> tpow(f);
    for (int l = 0; l < f; ++l) {
        std::vector<std::int64_t> c(f, 0);
        c[l] = 1;
        tpow[l] = k.from_coeffs(c);
    }
    std::vector<FpVec> out(dd, FpVec(dd, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto c = a[i * n + j];
            if (c == 0) continue;
            for (int l = 0; l < f; ++l) {
                auto col = k.coeffs(k.mul(c, tpow[l]));
                for (int r = 0; r < f; ++r) out[i * f + r][j * f + l] = col[r] % p;
            }
        }
    return out;
}

FpVec fp_apply(const std::vector<FpVec>& a, const FpVec& x, int p) {
    FpVec y(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        long long s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += static_cast<long long>(a[i][j]) * x[j];
        y[i] = static_cast<int>(s % p);
    }
    return y;
}

int h0(const FiniteMatGroup& g, const GModule& m) {
    int p = m.field->p(), dd = m.dim * m.field->f();
    FpEchelon ech(p, dd);
    for (const auto& a : generator_actions(g, m))
        for (int i = 0; i < dd; ++i) {
            auto row = a[i];
            row[i] = (row[i] + p - 1) % p;
            ech.insert(std::move(row));
        }
    return fq_dim(dd - ech.rank(), m.field->f());
}

CocycleSpace h1(const FiniteMatGroup& g, const GModule& m) {
    int p = m.field->p(), f = m.field->f(), dd = m.dim * f;
    auto ng = g.num_generators();
    std::size_t nunk = ng * dd;
    auto order = g.order();
    // L[i] is the D x nunk matrix giving the cocycle value at element i in
    // terms of the generator values.
    std::vector<int> L(order * dd * nunk, 0);
    std::vector<char> known(order, 0);
    known[0] = 1;
    FpEchelon eq(p, nunk);
    CocycleSpace cs;
    std::vector<int> cand(dd * nunk);
    for (std::size_t i = 0; i < order; ++i) {
        auto rho = fp_action(m, residue_matrix(g.table(), g.keys()[i]));
        const int* li = L.data() + i * dd * nunk;
        for (std::size_t s = 0; s < ng; ++s) {
            std::copy(li, li + dd * nunk, cand.begin());
            for (int r = 0; r < dd; ++r)
                for (int c = 0; c < dd; ++c) {
                    auto& x = cand[r * nunk + s * dd + c];
                    x = (x + rho[r][c]) % p;
                }
            auto j = g.successor(i, s);
            int* lj = L.data() + j * dd * nunk;
            if (!known[j]) {
                std::copy(cand.begin(), cand.end(), lj);
                known[j] = 1;
                continue;
            }
            for (int r = 0; r < dd; ++r) {
                FpVec row(nunk);
                bool nonzero = false;
                for (std::size_t c = 0; c < nunk; ++c) {
                    row[c] = (cand[r * nunk + c] - lj[r * nunk + c] + p) % p;
                    nonzero |= row[c] != 0;
                }
                if (!nonzero) continue;
                ++cs.relations;
                eq.insert(std::move(row));
            }
        }
    }
    cs.basis = eq.nullspace();
    int z1 = static_cast<int>(nunk) - eq.rank();
    int b1 = dd - f * h0(g, m);
    cs.dim_z1 = fq_dim(z1, f);
    cs.dim_b1 = fq_dim(b1, f);
    cs.dim_h1 = cs.dim_z1 - cs.dim_b1;
    return cs;
}

std::vector<FpVec> extend_cocycle(const FiniteMatGroup& g, const GModule& m, const FpVec& z) {
    int p = m.field->p(), dd = m.dim * m.field->f();
    if (z.size() != g.num_generators() * dd) throw PreconditionFailed("cocycle has the wrong length");
    std::vector<FpVec> vals(g.order(), FpVec(dd, 0));
    for (std::size_t j = 1; j < g.order(); ++j) {
        auto i = g.parent(j);
        auto s = g.via(j);
        auto rho = fp_action(m, residue_matrix(g.table(), g.keys()[i]));
        FpVec zs(z.begin() + s * dd, z.begin() + (s + 1) * dd);
        auto add = fp_apply(rho, zs, p);
        for (int r = 0; r < dd; ++r) vals[j][r] = (vals[i][r] + add[r]) % p;
    }
    return vals;
}

FpVec coboundary(const FiniteMatGroup& g, const GModule& m, const FpVec& x) {
    int p = m.field->p();
    FpVec out;
    for (const auto& a : generator_actions(g, m)) {
        auto y = fp_apply(a, x, p);
        for (std::size_t r = 0; r < y.size(); ++r) out.push_back((y[r] - x[r] + p) % p);
    }
    return out;
}

int h1_invariants(const FiniteMatGroup& b, const FiniteMatGroup& n, const GModule& m) {
    int p = m.field->p(), f = m.field->f(), dd = m.dim * f;
    const auto& t = n.table();
    auto cs = h1(n, m);
    std::size_t nunk = n.num_generators() * dd;
    FpEchelon bnd(p, nunk);
    for (int i = 0; i < dd; ++i) {
        FpVec e(dd, 0);
        e[i] = 1;
        bnd.insert(coboundary(n, m, e));
    }
    std::vector<std::vector<FpVec>> ext;
    for (const auto& z : cs.basis) ext.push_back(extend_cocycle(n, m, z));
    FpEchelon images(p, nunk * b.num_generators());
    for (std::size_t zi = 0; zi < cs.basis.size(); ++zi) {
        FpVec row;
        for (std::size_t bi = 0; bi < b.num_generators(); ++bi) {
            auto bk = b.generator_key(bi);
            auto binv = t.mat_inv(bk);
            auto rho = fp_action(m, residue_matrix(t, bk));
            FpVec w;
            for (std::size_t s = 0; s < n.num_generators(); ++s) {
                auto conj = t.mat_mul(t.mat_mul(binv, n.generator_key(s)), bk);
                auto idx = n.find(conj);
                if (!idx) throw PreconditionFailed("subgroup is not normal");
                auto v = fp_apply(rho, ext[zi][*idx], p);
                for (int r = 0; r < dd; ++r) w.push_back((v[r] - cs.basis[zi][s * dd + r] + p) % p);
            }
            auto red = bnd.reduce(std::move(w));
            row.insert(row.end(), red.begin(), red.end());
        }
        images.insert(std::move(row));
    }
    int kernel = static_cast<int>(cs.basis.size()) - images.rank();
    return fq_dim(kernel - bnd.rank(), f);
}

std::vector<Mat2> unipotent_generators(const ChainRing& r) {
    std::vector<Mat2> out;
    for (const auto& b : r.additive_generators()) out.push_back(elementary12(b));
    return out;
}

std::vector<Mat2> borel_generators(const ChainRing& r) {
    std::vector<ChainRingElem> units{r.lift_residue(r.residue_field()->generator())};
    for (const auto& b : r.additive_generators())
        if (b.vpi() > 0) units.push_back(r.one() + b);
    std::vector<Mat2> out;
    for (const auto& u : units) {
        out.push_back(diagonal(u, r.one()));
        out.push_back(diagonal(r.one(), u));
    }
    auto un = unipotent_generators(r);
    out.insert(out.end(), un.begin(), un.end());
    return out;
}

RestrictionReport restriction_dim_chase(const FiniteMatGroup& g, const FiniteMatGroup& b, const FiniteMatGroup& n,
                                        const GModule& m) {
    for (std::size_t s = 0; s < b.num_generators(); ++s)
        if (!g.contains_key(b.generator_key(s))) throw PreconditionFailed("B is not a subgroup of G");
    for (std::size_t s = 0; s < n.num_generators(); ++s)
        if (!b.contains_key(n.generator_key(s))) throw PreconditionFailed("N is not a subgroup of B");
    std::size_t p = static_cast<std::size_t>(m.field->p());
    RestrictionReport r;
    r.index_in_g = g.order() / b.order();
    r.index_in_b = b.order() / n.order();
    r.index_prime_to_p = r.index_in_g % p != 0;
    r.h1_g = h1(g, m).dim_h1;
    r.h1_b = h1(b, m).dim_h1;
    r.h1_n = h1(n, m).dim_h1;
    r.h0_n = h0(n, m);
    r.h1_n_invariants = h1_invariants(b, n, m);
    r.restriction_bound_holds = !r.index_prime_to_p || r.h1_g <= r.h1_b;
    r.inflation_restriction_holds = r.index_in_b % p != 0 ? r.h1_b == r.h1_n_invariants : true;
    return r;
}

VanishingReport h1_vanishing_check(const FiniteMatGroup& g, bool attest_diagonal) {
    if (g.ring().level() != 1) throw PreconditionFailed("vanishing check needs a group over the residue field");
    const auto& k = *g.ring().residue_field();
    VanishingReport v;
    v.full = is_full(g);
    v.needs_diagonal_hypothesis = k.q() == 5;
    v.hypothesis_attested = attest_diagonal;
    const auto& t = g.table();
    for (auto key : g.keys()) {
        auto e = residue_matrix(t, key);
        if (e[1] != 0 || e[2] != 0) continue;
        if (k.mul(e[0], e[0]) != k.mul(e[3], e[3])) {
            v.hypothesis_holds = true;
            v.diagonal_witness = t.mat(key);
            break;
        }
    }
    v.dim_h1 = h1(g, ad0_module(g.ring().residue_field())).dim_h1;
    v.conclusion_applies =
        v.full && (!v.needs_diagonal_hypothesis || (v.hypothesis_attested && v.hypothesis_holds));
    return v;
}

BoundedReport h1_bounded(const std::vector<Mat2>& gens, std::size_t cap) {
    if (gens.empty()) throw PreconditionFailed("h1_bounded needs generators");
    const auto& top = gens.front().ring();
    auto ad0 = ad0_module(top.residue_field());
    BoundedReport rep;
    rep.monotone = true;
    for (int r = 1; r <= top.level(); ++r) {
        std::vector<Mat2> red;
        for (const auto& x : gens) red.push_back(x.reduce(r));
        auto g = FiniteMatGroup::close(red, cap);
        int d = h1(g, ad0).dim_h1;
        if (!rep.dims.empty() && d < rep.dims.back()) rep.monotone = false;
        rep.levels.push_back(r);
        rep.orders.push_back(g.order());
        rep.dims.push_back(d);
    }
    return rep;
}

}  // namespace liftcheck
