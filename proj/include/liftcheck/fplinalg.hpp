#pragma once

#include <cstddef>
#include <vector>

namespace liftcheck {

using FpVec = std::vector<int>;  // entries in [0, p)

// Row space over F_p kept in reduced row echelon form, pivots chosen as the
// first nonzero column.
class FpEchelon {
public:
    FpEchelon(int p, std::size_t ncols);

    int p() const { return p_; }
    std::size_t ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<FpVec>& rows() const { return rows_; }

    // Returns true when x enlarged the span.
    bool insert(FpVec x);
    bool contains(const FpVec& x) const;
    // Canonical representative of x modulo the span; linear in x.
    FpVec reduce(FpVec x) const;
    // Basis of {x : r . x = 0 for every row r}.
    std::vector<FpVec> nullspace() const;

private:
    int p_;
    std::size_t ncols_;
    std::vector<FpVec> rows_;
    std::vector<std::size_t> pivots_;
};

int fp_inv(int a, int p);

}  // namespace liftcheck
