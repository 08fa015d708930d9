#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "liftcheck/chainring.hpp"

namespace liftcheck {

// Element of W(F_{p^f})[[U]] known mod (p^{p_cap}, U^{u_cap}). A u_cap of
// kExact marks a polynomial, known exactly in U.
class TruncSeries {
public:
    static constexpr int kExact = std::numeric_limits<int>::max();

    TruncSeries(FieldPtr k, std::vector<WittScalar> coeffs, int u_cap, int p_cap);
    static TruncSeries from_ints(const FieldPtr& k, const std::vector<std::int64_t>& coeffs, int p_cap,
                                 int u_cap = kExact);
    static TruncSeries zero(const FieldPtr& k, int p_cap, int u_cap = kExact);
    static TruncSeries monomial(const FieldPtr& k, int degree, int p_cap, int u_cap = kExact);

    const FieldPtr& field_ptr() const { return k_; }
    int u_cap() const { return u_cap_; }
    int p_cap() const { return p_cap_; }
    bool is_polynomial() const { return u_cap_ == kExact; }
    const std::vector<WittScalar>& coeffs() const { return c_; }
    WittScalar coeff(std::size_t i) const;
    // Index of the last coefficient that is nonzero mod p^{p_cap}; -1 if none.
    int degree() const;
    bool is_zero() const { return degree() < 0; }

    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator*(const TruncSeries& o) const;
    TruncSeries operator-() const;
    TruncSeries scale(const WittScalar& s) const;
    TruncSeries with_caps(int u_cap, int p_cap) const;
    // Coefficientwise equality mod (p^m, U^l).
    bool congruent(const TruncSeries& o, int p_cap, int u_cap) const;

    std::string str() const;

private:
    FieldPtr k_;
    std::vector<WittScalar> c_;
    int u_cap_;
    int p_cap_;
};

struct DistinguishedResult {
    bool distinguished;
    int degree;
};

// Last nonzero coefficient equal to 1 and every lower one divisible by p.
DistinguishedResult is_distinguished(const TruncSeries& w);

struct Preparation {
    int t;
    TruncSeries v;  // distinguished of degree `degree`
    TruncSeries u;  // unit
    int degree;
    int p_cap;      // w = p^t v u holds mod (p^p_cap, U^u_cap)
    int u_cap;
};

Preparation weierstrass_prepare(const TruncSeries& w);

// ------------------------------------------------------------------ polynomials over chain rings

using ChainPoly = std::vector<ChainRingElem>;  // coefficient of X^i at index i

ChainPoly to_chain_poly(const TruncSeries& w, const ChainRing& r);
ChainPoly to_chain_poly(const std::vector<WittScalar>& w, const ChainRing& r);
ChainRingElem evaluate(const ChainPoly& w, const ChainRingElem& y);
ChainPoly derivative(const ChainPoly& w);
// w(c + s X)
ChainPoly compose_linear(const ChainPoly& w, const ChainRingElem& c, const ChainRingElem& s);

struct NewtonPolygon {
    std::vector<std::pair<int, Rational>> vertices;
    std::vector<std::pair<Rational, int>> slopes;  // root valuation and multiplicity
    int zero_roots = 0;                            // roots at 0, split off before the hull

    int degree() const;
    std::vector<Rational> root_valuations() const;
};

// Coefficients given by valuation; non-finite entries are treated as absent.
NewtonPolygon newton_polygon(const std::vector<Valuation>& coeff_vals);
NewtonPolygon newton_polygon(const ChainPoly& w);

struct KrasnerBound {
    std::vector<Rational> separations;  // v(pi - pi_j) over the other roots
    Rational bound_val;                 // max separation
    int disc_valuation;                 // v_p of the discriminant over W

    Rational separation_sum() const;
    // A y with v(g(y)) above this lies closer to some root than bound_val.
    Rational containment_threshold() const { return bound_val + separation_sum(); }
    bool implies_containment(const Valuation& g_of_y) const;
};

KrasnerBound krasner_bound(const EisensteinPoly& g);

// v_p of det(multiplication by f'(X)) on W[X]/(f), f monic.
Valuation discriminant_valuation(const std::vector<WittScalar>& f);

struct RootApprox {
    ChainRingElem value;
    int known_level;  // the root is determined mod pi^known_level
};

// All roots in O of a polynomial over O/(pi^n), to the precision the ring allows.
std::vector<RootApprox> roots_in_ring(const ChainPoly& w);

// Newton iteration from y0; needs v(w(y0)) > 2 v(w'(y0)).
ChainRingElem hensel_root(const ChainPoly& w, const ChainRingElem& y0);

struct RootPair {
    RootApprox w_root;
    RootApprox g_root;
    Valuation separation;   // v(y - pi_j)
    Valuation g_at_w_root;  // v(g(y))
};

struct RootMatch {
    std::vector<RootPair> pairs;
    KrasnerBound krasner;
    Rational threshold;
    int level;
    int g_roots_found;
    int w_roots_found;
    bool bijective;
    bool separations_exceed_bound;
    bool field_match;
};

RootMatch track_roots(const TruncSeries& w, const EisensteinPoly& g, int N);

struct OrbitFactor {
    int degree;
    Rational root_valuation;
};

struct OrbitReport {
    std::vector<OrbitFactor> w_factors;
    std::vector<OrbitFactor> g_factors;
    std::vector<std::pair<OrbitFactor, OrbitFactor>> pairing;
    Rational threshold;
    bool threshold_from_splitting_ring;
    bool preserved;
};

// Degrees of irreducible factors over W[1/p] from Newton segments and
// residual polynomials; requires every residual polynomial squarefree.
std::vector<OrbitFactor> factor_pattern(const TruncSeries& h);

OrbitReport galois_orbit_match(const TruncSeries& w, const TruncSeries& g, int N,
                               const std::optional<ChainRing>& splitting = std::nullopt);

// j(U) - (1+p)^{k-1}
TruncSeries weight_relation(const TruncSeries& j, int k);

}  // namespace liftcheck
