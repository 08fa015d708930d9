#include "liftcheck/wlinalg.hpp"

#include <algorithm>

#include "witt_kernel.hpp"

namespace liftcheck {

namespace {

int min_precision(const WMatrix& m, const WVector* b) {
    int p = std::numeric_limits<int>::max();
    for (const auto& row : m)
        for (const auto& x : row) p = std::min(p, x.precision());
    if (b)
        for (const auto& x : *b) p = std::min(p, x.precision());
    return p;
}

const FieldPtr& field_of(const WMatrix& m, const WVector* b) {
    for (const auto& row : m)
        if (!row.empty()) return row.front().field_ptr();
    if (b && !b->empty()) return b->front().field_ptr();
    throw PreconditionFailed("empty linear system");
}

// Dense matrix of W/p^P values, f digits per entry.
struct RawMat {
    std::size_t rows, cols;
    int f;
    std::vector<std::int64_t> d;
    std::int64_t* at(std::size_t i, std::size_t j) { return d.data() + (i * cols + j) * f; }
};

RawMat to_raw(const WMatrix& m, int f, std::int64_t mod) {
    RawMat r{m.size(), m.empty() ? 0 : m.front().size(), f, {}};
    r.d.resize(r.rows * r.cols * f);
    for (std::size_t i = 0; i < r.rows; ++i) {
        if (m[i].size() != r.cols) throw PreconditionFailed("ragged matrix");
        for (std::size_t j = 0; j < r.cols; ++j)
            for (int t = 0; t < f; ++t) r.at(i, j)[t] = m[i][j].coords()[t] % mod;
    }
    return r;
}

struct ColOp {
    bool swap;
    std::size_t a, b;              // swap a,b  or  col b += t * col a
    std::vector<std::int64_t> t;
};

struct Smith {
    std::size_t rank = 0;
    std::vector<int> vals;
    std::vector<std::vector<std::int64_t>> unit_inv;
    std::vector<ColOp> ops;
};

// Reduces a (and rows of rhs alongside) to diagonal form.
Smith smith(const detail::WittKernel& wk, RawMat& a, std::vector<std::int64_t>* rhs) {
    int f = wk.f();
    Smith s;
    std::vector<std::int64_t> t(f), u(f), uinv(f), tmp(f);
    auto n = std::min(a.rows, a.cols);
    for (std::size_t k = 0; k < n; ++k) {
        int best = wk.precision();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = k; i < a.rows; ++i)
            for (std::size_t j = k; j < a.cols; ++j) {
                int v = wk.val(a.at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best >= wk.precision()) break;
        if (bi != k) {
            for (std::size_t j = 0; j < a.cols; ++j) std::swap_ranges(a.at(k, j), a.at(k, j) + f, a.at(bi, j));
            if (rhs) std::swap_ranges(rhs->data() + k * f, rhs->data() + k * f + f, rhs->data() + bi * f);
        }
        if (bj != k) {
            for (std::size_t i = 0; i < a.rows; ++i) std::swap_ranges(a.at(i, k), a.at(i, k) + f, a.at(i, bj));
            s.ops.push_back({true, k, bj, {}});
        }
        wk.div_p_pow(a.at(k, k), best, u.data());
        wk.inv(u.data(), uinv.data());
        for (std::size_t i = k + 1; i < a.rows; ++i) {
            if (wk.is_zero(a.at(i, k))) continue;
            wk.div_p_pow(a.at(i, k), best, tmp.data());
            wk.mul(tmp.data(), uinv.data(), t.data());
            for (std::size_t j = k; j < a.cols; ++j) {
                wk.mul(t.data(), a.at(k, j), tmp.data());
                wk.sub(a.at(i, j), tmp.data(), a.at(i, j));
            }
            if (rhs) {
                wk.mul(t.data(), rhs->data() + k * f, tmp.data());
                wk.sub(rhs->data() + i * f, tmp.data(), rhs->data() + i * f);
            }
        }
        for (std::size_t j = k + 1; j < a.cols; ++j) {
            if (wk.is_zero(a.at(k, j))) continue;
            wk.div_p_pow(a.at(k, j), best, tmp.data());
            wk.mul(tmp.data(), uinv.data(), t.data());
            wk.neg(t.data(), t.data());
            s.ops.push_back({false, k, j, t});
            std::fill(a.at(k, j), a.at(k, j) + f, 0);
        }
        s.vals.push_back(best);
        s.unit_inv.push_back(uinv);
        ++s.rank;
    }
    return s;
}

}  // namespace

Valuation det_valuation(const WMatrix& m) {
    if (m.empty() || m.size() != m.front().size()) throw PreconditionFailed("determinant of a non-square matrix");
    int prec = min_precision(m, nullptr);
    const auto& k = field_of(m, nullptr);
    detail::WittKernel wk(*k, prec);
    auto a = to_raw(m, k->f(), wk.modulus());
    auto s = smith(wk, a, nullptr);
    if (s.rank < m.size()) return Valuation::at_least(prec);
    int total = 0;
    for (int v : s.vals) total += v;
    if (total >= prec) return Valuation::at_least(prec);
    return Valuation::finite(total);
}

std::vector<int> elementary_divisor_valuations(const WMatrix& m) {
    int prec = min_precision(m, nullptr);
    const auto& k = field_of(m, nullptr);
    detail::WittKernel wk(*k, prec);
    auto a = to_raw(m, k->f(), wk.modulus());
    auto s = smith(wk, a, nullptr);
    auto out = s.vals;
    out.resize(std::min(a.rows, a.cols), prec);
    return out;
}

std::optional<WVector> solve_linear(const WMatrix& m, const WVector& b) {
    if (m.size() != b.size()) throw PreconditionFailed("right-hand side length mismatch");
    int prec = min_precision(m, &b);
    const auto& k = field_of(m, &b);
    int f = k->f();
    detail::WittKernel wk(*k, prec);
    auto a = to_raw(m, f, wk.modulus());
    std::vector<std::int64_t> rhs(b.size() * f);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (int t = 0; t < f; ++t) rhs[i * f + t] = b[i].coords()[t] % wk.modulus();
    auto s = smith(wk, a, &rhs);
    std::vector<std::int64_t> w(a.cols * f, 0), tmp(f);
    for (std::size_t i = 0; i < a.rows; ++i) {
        auto* r = rhs.data() + i * f;
        if (i < s.rank) {
            if (wk.val(r) < s.vals[i]) return std::nullopt;
            wk.div_p_pow(r, s.vals[i], tmp.data());
            wk.mul(tmp.data(), s.unit_inv[i].data(), w.data() + i * f);
        } else if (!wk.is_zero(r)) {
            return std::nullopt;
        }
    }
    for (auto it = s.ops.rbegin(); it != s.ops.rend(); ++it) {
        if (it->swap) {
            std::swap_ranges(w.data() + it->a * f, w.data() + it->a * f + f, w.data() + it->b * f);
        } else {
            wk.mul(it->t.data(), w.data() + it->b * f, tmp.data());
            wk.add(w.data() + it->a * f, tmp.data(), w.data() + it->a * f);
        }
    }
    WVector z;
    for (std::size_t j = 0; j < a.cols; ++j)
        z.emplace_back(k, std::vector<std::int64_t>(w.begin() + j * f, w.begin() + j * f + f), prec);
    return z;
}

SpanReducer::SpanReducer(FieldPtr k, std::size_t dim, int precision)
    : k_(std::move(k)), dim_(dim), prec_(precision), pivot_(dim), piv_val_(dim, 0) {}

std::vector<std::int64_t> SpanReducer::flatten(const WVector& x) const {
    if (x.size() != dim_) throw PreconditionFailed("vector length does not match span dimension");
    int f = k_->f();
    auto mod = detail::ipow(k_->p(), prec_);
    std::vector<std::int64_t> r(dim_ * f);
    for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i].precision() < prec_) throw PrecisionExhausted("span vector known below span precision");
        for (int t = 0; t < f; ++t) r[i * f + t] = x[i].coords()[t] % mod;
    }
    return r;
}

std::size_t SpanReducer::reduce(std::vector<std::int64_t>& x) const {
    detail::WittKernel wk(*k_, prec_);
    int f = k_->f();
    std::vector<std::int64_t> t(f), tmp(f);
    for (std::size_t c = 0; c < dim_; ++c) {
        auto* xc = x.data() + c * f;
        if (wk.is_zero(xc)) continue;
        if (!pivot_[c] || wk.val(xc) < piv_val_[c]) return c;
        wk.div_p_pow(xc, piv_val_[c], t.data());
        const auto& row = *pivot_[c];
        for (std::size_t j = c; j < dim_; ++j) {
            wk.mul(t.data(), row.data() + j * f, tmp.data());
            wk.sub(x.data() + j * f, tmp.data(), x.data() + j * f);
        }
    }
    return dim_;
}

bool SpanReducer::contains_raw(std::vector<std::int64_t> x) const { return reduce(x) == dim_; }

bool SpanReducer::insert_raw(std::vector<std::int64_t> x) {
    detail::WittKernel wk(*k_, prec_);
    int f = k_->f();
    std::vector<std::int64_t> u(f), uinv(f);
    bool grew = false;
    std::vector<std::vector<std::int64_t>> work{std::move(x)};
    while (!work.empty()) {
        auto y = std::move(work.back());
        work.pop_back();
        auto c = reduce(y);
        if (c == dim_) continue;
        grew = true;
        int v = wk.val(y.data() + c * f);
        wk.div_p_pow(y.data() + c * f, v, u.data());
        wk.inv(u.data(), uinv.data());
        for (std::size_t j = c; j < dim_; ++j) wk.mul(y.data() + j * f, uinv.data(), y.data() + j * f);
        if (pivot_[c]) work.push_back(std::move(*pivot_[c]));
        if (v > 0) {
            auto ann = y;
            auto s = detail::ipow(k_->p(), prec_ - v);
            for (auto& a : ann) a = detail::mulmod(a, s, wk.modulus());
            work.push_back(std::move(ann));
        }
        pivot_[c] = std::move(y);
        piv_val_[c] = v;
    }
    return grew;
}

bool SpanReducer::insert(const WVector& x) { return insert_raw(flatten(x)); }
bool SpanReducer::contains(const WVector& x) const { return contains_raw(flatten(x)); }

std::size_t SpanReducer::rows() const {
    return static_cast<std::size_t>(std::count_if(pivot_.begin(), pivot_.end(), [](const auto& r) { return r.has_value(); }));
}

}  // namespace liftcheck
