#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liftcheck/fplinalg.hpp"
#include "liftcheck/matgrp.hpp"

namespace liftcheck {

using ResidueMat = std::array<ResidueField::Elem, 4>;  // a, b, c, d of a matrix over k
using KMatrix = std::vector<ResidueField::Elem>;        // square, row-major over k

ResidueMat residue_matrix(const RingTable& t, MatKey m);

KMatrix kmat_mul(const ResidueField& k, const KMatrix& a, const KMatrix& b, int m);
KMatrix kmat_inverse(const ResidueField& k, KMatrix a, int m);  // throws PreconditionFailed if singular
int kmat_rank(const ResidueField& k, KMatrix a, int rows, int cols);

// Finite F_q[G]-module on which G acts through its reduction to GL_2(k).
// action(g) is the m x m matrix whose column j is the image of basis vector j.
struct GModule {
    std::string label;
    FieldPtr field;
    int dim = 0;
    std::function<KMatrix(const ResidueMat&)> action;
};

GModule ad0_module(FieldPtr k);  // basis E12, H = diag(1, -1), E21; conjugation
GModule ad_module(FieldPtr k);   // basis E11, E12, E21, E22; conjugation
GModule trivial_module(FieldPtr k, int dim = 1);
GModule det_twist_module(FieldPtr k, int j);          // F_q with g acting by det(g)^j
GModule dual_twist_module(const GModule& m, int j);    // det^j tensor Hom(M, F_q)
GModule direct_sum(const GModule& a, const GModule& b);
// Basis vectors [lo, hi) of m, assuming the spans of the first lo and first
// hi basis vectors are invariant; action throws PreconditionFailed otherwise.
GModule subquotient(const GModule& m, int lo, int hi, std::string label);
// Flag pieces of Ad0 for the upper Borel: U0 = span(E12), U1 / U0 with U1 = span(E12, H).
GModule borel_u0(FieldPtr k);
GModule borel_u1_mod_u0(FieldPtr k);

// Action of an element as a D x D matrix over F_p, D = dim * f, each F_q
// coordinate expanded in the basis 1, t, ..., t^{f-1}.
std::vector<FpVec> fp_action(const GModule& m, const ResidueMat& g);
FpVec fp_apply(const std::vector<FpVec>& a, const FpVec& x, int p);

// Dimension over F_q of the fixed space of all generators.
int h0(const FiniteMatGroup& g, const GModule& m);

struct CocycleSpace {
    int dim_z1 = 0;  // all dims over F_q
    int dim_b1 = 0;
    int dim_h1 = 0;
    int relations = 0;  // consistency equations harvested during BFS
    // Basis of Z^1 over F_p; cocycle values on generators, generator-major,
    // D digits per generator.
    std::vector<FpVec> basis;
};

CocycleSpace h1(const FiniteMatGroup& g, const GModule& m);
// Values of the cocycle with generator values z at every element, in the
// group's BFS order.
std::vector<FpVec> extend_cocycle(const FiniteMatGroup& g, const GModule& m, const FpVec& z);
// Coboundary of x: values g x - x on generators.
FpVec coboundary(const FiniteMatGroup& g, const GModule& m, const FpVec& x);

struct RestrictionReport {
    std::size_t index_in_g = 0;  // [G : B]
    std::size_t index_in_b = 0;  // [B : N]
    bool index_prime_to_p = false;
    int h1_g = 0;
    int h1_b = 0;
    int h1_n = 0;
    int h1_n_invariants = 0;  // dim H^1(N, M)^{B/N}
    int h0_n = 0;
    // Checks implied by the inflation-restriction sequences.
    bool restriction_bound_holds = false;  // h1_g <= h1_b when [G : B] is prime to p
    bool inflation_restriction_holds = false;  // h1_b == h1_n_invariants when [B : N] is prime to p
};

// N must be normal in B and B a subgroup of G, all over the same ring.
RestrictionReport restriction_dim_chase(const FiniteMatGroup& g, const FiniteMatGroup& b, const FiniteMatGroup& n,
                                        const GModule& m);

// Dimension over F_q of H^1(N, M)^{B/N}, B acting by (b f)(x) = b f(b^-1 x b).
int h1_invariants(const FiniteMatGroup& b, const FiniteMatGroup& n, const GModule& m);

// Upper Borel of GL_2(R) and its unipotent radical.
std::vector<Mat2> borel_generators(const ChainRing& r);
std::vector<Mat2> unipotent_generators(const ChainRing& r);

struct VanishingReport {
    bool full = false;                       // G contains SL_2(k)
    bool needs_diagonal_hypothesis = false;  // k = F_5
    bool hypothesis_attested = false;
    bool hypothesis_holds = false;           // some diag(r, s) in G with r/s != s/r
    std::optional<Mat2> diagonal_witness;
    int dim_h1 = 0;
    bool conclusion_applies = false;         // vanishing is predicted
};

// H^1(G, Ad0) for G inside GL_2(k) together with the vanishing hypotheses.
VanishingReport h1_vanishing_check(const FiniteMatGroup& g, bool attest_diagonal = false);

struct BoundedReport {
    std::vector<int> levels;
    std::vector<std::size_t> orders;
    std::vector<int> dims;  // dim H^1(G_r, Ad0)
    bool monotone = false;  // inflation is injective, so dims cannot drop
};

// H^1(G_r, Ad0) for the images G_r of gens in GL_2(O/pi^r), r = 1..top level.
BoundedReport h1_bounded(const std::vector<Mat2>& gens, std::size_t cap = default_closure_cap());

}  // namespace liftcheck
