#include "liftcheck/fplinalg.hpp"

#include "liftcheck/errors.hpp"

namespace liftcheck {

int fp_inv(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw PreconditionFailed("inverse of zero in F_p");
    int r = 1;
    for (int e = p - 2, b = a; e > 0; e >>= 1, b = b * b % p)
        if (e & 1) r = r * b % p;
    return r;
}

FpEchelon::FpEchelon(int p, std::size_t ncols) : p_(p), ncols_(ncols) {}

FpVec FpEchelon::reduce(FpVec x) const {
    if (x.size() != ncols_) throw PreconditionFailed("vector length does not match echelon width");
    for (auto& v : x) v = ((v % p_) + p_) % p_;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        int c = x[pivots_[r]];
        if (c == 0) continue;
        const auto& row = rows_[r];
        for (std::size_t j = pivots_[r]; j < ncols_; ++j) x[j] = (x[j] + (p_ - c) * row[j]) % p_;
    }
    return x;
}

bool FpEchelon::contains(const FpVec& x) const {
    auto r = reduce(x);
    for (int v : r)
        if (v) return false;
    return true;
}

bool FpEchelon::insert(FpVec x) {
    x = reduce(std::move(x));
    std::size_t piv = 0;
    while (piv < ncols_ && x[piv] == 0) ++piv;
    if (piv == ncols_) return false;
    int s = fp_inv(x[piv], p_);
    for (auto& v : x) v = v * s % p_;
    for (auto& row : rows_) {
        int c = row[piv];
        if (c == 0) continue;
        for (std::size_t j = piv; j < ncols_; ++j) row[j] = (row[j] + (p_ - c) * x[j]) % p_;
    }
    auto pos = rows_.begin();
    auto ppos = pivots_.begin();
    while (ppos != pivots_.end() && *ppos < piv) {
        ++pos;
        ++ppos;
    }
    rows_.insert(pos, std::move(x));
    pivots_.insert(ppos, piv);
    return true;
}

std::vector<FpVec> FpEchelon::nullspace() const {
    std::vector<bool> is_pivot(ncols_, false);
    for (auto c : pivots_) is_pivot[c] = true;
    std::vector<FpVec> out;
    for (std::size_t f = 0; f < ncols_; ++f) {
        if (is_pivot[f]) continue;
        FpVec v(ncols_, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < rows_.size(); ++r) v[pivots_[r]] = (p_ - rows_[r][f]) % p_;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace liftcheck
