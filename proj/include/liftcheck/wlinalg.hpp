#pragma once

#include <optional>
#include <vector>

#include "liftcheck/chainring.hpp"

namespace liftcheck {

using WVector = std::vector<WittScalar>;
using WMatrix = std::vector<WVector>;  // row-major

// Valuation of det(m) over W/p^P, P the smallest entry precision; at_least(P)
// when the determinant vanishes to that precision.
Valuation det_valuation(const WMatrix& m);

// Valuations of the Smith diagonal of m over W/p^P, padded with P for the
// part that vanishes to precision.
std::vector<int> elementary_divisor_valuations(const WMatrix& m);

// Some z with m z = b exactly mod p^P, or nullopt if none exists.
std::optional<WVector> solve_linear(const WMatrix& m, const WVector& b);

// Incrementally maintained W-submodule of (W/p^P)^dim in Howell echelon form,
// so membership is decided by reduction.
class SpanReducer {
public:
    SpanReducer(FieldPtr k, std::size_t dim, int precision);

    std::size_t dim() const { return dim_; }
    int precision() const { return prec_; }
    // Returns true when x was not already in the span.
    bool insert(const WVector& x);
    bool contains(const WVector& x) const;
    // Raw versions over f * dim digits (coordinate-major).
    bool insert_raw(std::vector<std::int64_t> x);
    bool contains_raw(std::vector<std::int64_t> x) const;
    std::size_t rows() const;

private:
    std::vector<std::int64_t> flatten(const WVector& x) const;
    // Reduces x against the pivots; returns the first column that did not
    // reduce, or dim_ if x reduced to zero.
    std::size_t reduce(std::vector<std::int64_t>& x) const;

    FieldPtr k_;
    std::size_t dim_;
    int prec_;
    std::vector<std::optional<std::vector<std::int64_t>>> pivot_;  // pivot_[c][c] = p^{piv_val_[c]}
    std::vector<int> piv_val_;
};

}  // namespace liftcheck
