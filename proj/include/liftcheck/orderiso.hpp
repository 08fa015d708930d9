#pragma once

#include <cstdint>
#include <vector>

#include "liftcheck/chainring.hpp"
#include "liftcheck/wlinalg.hpp"

namespace liftcheck {

using WPoly = std::vector<WittScalar>;  // coefficient of X^i at index i

// W[X]/(f) for monic f, elements as coordinate vectors in 1, X, ..., X^{n-1}.
class FiniteAlgebra {
public:
    explicit FiniteAlgebra(WPoly modulus);

    int rank() const { return static_cast<int>(f_.size()) - 1; }
    int precision() const { return prec_; }
    const FieldPtr& field_ptr() const { return f_.front().field_ptr(); }
    const WPoly& modulus() const { return f_; }

    WVector zero() const;
    WVector one() const;
    WVector generator() const;
    WVector add(const WVector& a, const WVector& b) const;
    WVector sub(const WVector& a, const WVector& b) const;
    WVector mul(const WVector& a, const WVector& b) const;
    WVector evaluate(const WPoly& g, const WVector& y) const;
    // Matrix of multiplication by y; column j is y X^j.
    WMatrix mult_matrix(const WVector& y) const;
    // Smallest coordinate valuation; precision() for zero.
    int valuation(const WVector& a) const;

private:
    WPoly f_;
    int prec_;
};

struct AlgebraMap {
    WVector image_of_generator;
    int verified_mod;       // g(y) = 0 mod p^verified_mod
    bool homomorphism;
    bool surjective_mod_p;  // 1, y, ..., y^{n-1} span A/pA
    int shift_valuation;   // v(y - X)
};

WPoly derivative(const WPoly& g);
WPoly poly_from_ints(const FieldPtr& k, const std::vector<std::int64_t>& c, int precision);

// Newton iteration from y = X; throws NoConvergence when v(g(X)) does not
// exceed twice the largest elementary divisor of multiplication by g'(X).
WVector find_root_in_algebra(const WPoly& g, const FiniteAlgebra& a);

// X -> y with g(y) = 0 in W[X]/(f); throws NotClose or NotSquarefree.
AlgebraMap order_isomorphic(const WPoly& f, const WPoly& g, int precision);

struct ClosenessThreshold {
    int disc_valuation;
    int analytic;   // 2 v(disc f) + 1
    int empirical;  // least depth at which every sampled perturbation succeeded
    int samples;
};

ClosenessThreshold closeness_threshold(const WPoly& f, std::uint64_t seed = 1, int samples = 24);

}  // namespace liftcheck
