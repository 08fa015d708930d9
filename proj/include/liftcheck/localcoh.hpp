#pragma once

#include <optional>
#include <string>

#include "liftcheck/groupcoh.hpp"

namespace liftcheck {

enum class Place { AwayFromP, AtP, Archimedean };

std::string place_name(Place v);

// Action of a decomposition group on a finite F_q-module, through a Frobenius
// and a tame inertia generator. At an archimedean place frobenius holds
// complex conjugation.
struct LocalModuleSpec {
    Place place = Place::AwayFromP;
    int q_v = 0;  // residue field size; p at v = p
    FieldPtr field;
    int dim = 0;
    KMatrix frobenius;
    std::optional<KMatrix> inertia;
    int twist = 0;  // number of cyclotomic twists applied
};

// Image of a tame inertia generator at p under the mod p cyclotomic
// character: the least primitive root mod p.
ResidueField::Elem cyclotomic_inertia(const ResidueField& k);

LocalModuleSpec local_module(const GModule& m, Place v, int q_v, const ResidueMat& frob,
                             const std::optional<ResidueMat>& inertia = std::nullopt);

// Throws PreconditionFailed unless frobenius is invertible and, away from p,
// Fr I Fr^-1 = I^{q_v}.
void validate(const LocalModuleSpec& m);

// Hom(M, mu_p): away from p, Fr -> q_v Fr^{-T} and I -> I^{-T}; at p,
// Fr -> Fr^{-T} and I -> w I^{-T} with w = cyclotomic_inertia; at infinity
// c -> -c^{-T}.
LocalModuleSpec dual_module(const LocalModuleSpec& m);

struct LocalDims {
    int h0 = 0;
    int h1 = 0;
    int h2 = 0;
    int h1_nr = 0;
    int dim_L = 0;        // h0 + [v = p]
    int dim_L_tilde = 0;  // h0 + 2 [v = p]
    // Annihilator of a dim_L subspace under the perfect local pairing.
    int dim_L_perp() const { return h1 - dim_L; }
};

int local_h0(const LocalModuleSpec& m);
// Euler characteristic and duality; h2 = 0, h1 = 0 at infinity (p odd).
LocalDims local_dims(const LocalModuleSpec& m);

enum class NiceVerdict { Neither, Nice, RhoRNice };
std::string verdict_name(NiceVerdict v);

struct NiceData {
    // Frobenius eigenvalues of the lift and their ring, when known.
    std::optional<std::pair<ChainRingElem, ChainRingElem>> lifted_eigenvalues;
    std::optional<std::uint64_t> element_order;
};

// q != p: nice iff q != 1 mod p and the eigenvalues are {q, 1} mod p.
NiceVerdict nice_test(int p, int q, std::pair<std::int64_t, std::int64_t> eigenvalues, const NiceData& lifted = {});

struct VpRow {
    int case_id = 0;
    std::string description;
    std::vector<ResidueMat> image_generators;  // model of the image of G_p
    bool split = false;
    int h0_ad = 0;
    int dim_L_tilde_raw = 0;
    int dim_L_tilde = 0;  // after the four-dimensional redefinition in the split cyclotomic case
    int smooth_vars = 0;
};

// Local data at p for the five shapes of the residual representation; h0 and
// the extension counts are recomputed from the model over F_p.
VpRow vequalsp_table(int case_id, int p = 3);

// h0 of Ad or Ad0 at infinity for complex conjugation diag(1, -1).
LocalModuleSpec archimedean_module(const GModule& m);

}  // namespace liftcheck
