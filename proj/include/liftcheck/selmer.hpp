#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftcheck/groupcoh.hpp"
#include "liftcheck/orderiso.hpp"
#include "liftcheck/padpoly.hpp"

namespace liftcheck {

// Ad0 with the conditions L_v, or Ad with the enlarged conditions L~_v.
enum class LedgerModule { Ad0, AdTilde };
std::string module_name(LedgerModule m);

struct PlaceEntry {
    std::string id;
    int dim_L = 0;
    int h0 = 0;
    int h0_dual = 0;
};

struct SelmerLedger {
    LedgerModule module = LedgerModule::Ad0;
    int p = 3;
    int global_h0 = 0;
    int global_h0_dual = 0;
    std::vector<PlaceEntry> places;
    int selmer = 0;
    int dual_selmer = 0;
};

// global_h0 - global_h0_dual + sum over places of (dim L_v - h0_v).
int wiles_difference(const SelmerLedger& l);
bool wiles_identity_holds(const SelmerLedger& l);
// Throws NegativeDimension for a negative entry and RuleMismatch when the
// identity fails.
void check_ledger(const SelmerLedger& l);

// Ledger over G_S with the place p (local shape 1..5) and the archimedean
// place; the global terms are those of an absolutely irreducible odd
// residual representation. Throws RuleMismatch unless the current dims obey
// the identity.
SelmerLedger initial_ledger(LedgerModule m, int p, int local_case, int selmer, int dual_selmer);

// Entry for a nice prime q: h0 and the dual h0 from Frobenius diag(q, 1),
// dim L_q = h0_q.
PlaceEntry nice_place_entry(LedgerModule m, int p, int q);

enum class NiceRule { PairedDrop, Unchanged, PairedRise };
std::string rule_name(NiceRule r);

struct NicePrimeEvent {
    int q = 0;
    bool h_nonzero_at_q = false;      // the Selmer class h restricts nontrivially (for Ad: outside L~_q)
    bool phi_nonzero_at_q = false;    // the dual Selmer class restricts nontrivially
    bool selmer_vanishes_at_q = false;    // the whole Selmer group restricts to 0 at q
    bool h1_dual_vanishes_at_q = false;   // Sha^1 of the dual restricts to 0: inflation has codimension 1
    // For Ad with the L~ conditions the unchanged rule only pins the Ad0
    // part; whether a new class ramified at q enters is attested here.
    std::optional<bool> new_tilde_class;
};

// The rule selected by the flags, or RuleMismatch when none applies.
NiceRule select_rule(LedgerModule m, const NicePrimeEvent& ev);

struct NiceUpdate {
    SelmerLedger ledger;
    NiceRule rule = NiceRule::Unchanged;
    std::optional<int> inflation_codimension;  // 1 when the dual Sha flag is set, else 0 or 1
};

// Returns the ledger over S + {q}. Throws RuleMismatch for flags matching no
// rule, a q that is not nice or already present; NegativeDimension when a
// drop would go below zero.
NiceUpdate apply_nice_prime(const SelmerLedger& l, const NicePrimeEvent& ev);

struct TraceEntry {
    std::string label;
    int selmer = 0;
    int dual_selmer = 0;
    int wiles_difference = 0;
    bool identity_holds = false;
};

TraceEntry trace_entry(const std::string& label, const SelmerLedger& l);

struct EasyRun {
    std::vector<TraceEntry> trace;  // s + 1 entries from (s + 1, s) to (1, 0)
    std::vector<int> primes;        // nice primes added, in order
    SelmerLedger final_ledger;
    bool tangent_dim_one = false;   // terminal (1, 0)
};

// Nice primes for p in increasing order: q prime with q != 0, 1 mod p.
std::vector<int> nice_primes(int p, std::size_t count);

EasyRun simulate_theorem_easy(int s, int p = 3, int local_case = 1);

// ------------------------------------------------------------------ small extension ladder

// p^r U^s G with G = g (on_g) or G = U^n.
struct LadderGenerator {
    int r = 0;
    int s = 0;
    bool on_g = true;
    friend bool operator==(const LadderGenerator&, const LadderGenerator&) = default;
    std::string str() const;
};

struct LadderStep {
    LadderGenerator kernel;        // generator x replaced by p x and U x
    bool p_kills = false;          // p x lies in the next ideal
    bool u_kills = false;          // U x lies in the next ideal
    bool kernel_nonzero = false;   // x does not lie in the next ideal
};

struct IdealLadder {
    int p = 0;
    int e = 0;
    int n = 0;
    int N = 0;
    int top = 0;      // N + N e
    int ambient = 0;  // membership is decided in (W/p^K)[U]/(U^K), K = top + n
    std::vector<WittScalar> g;
    std::vector<std::vector<LadderGenerator>> ideals;  // ideals[0] = (g, U^n)
    std::vector<LadderStep> steps;                      // steps[i] maps ideals[i + 1] onto ideals[i]
    bool all_small = false;
    bool end_in_box = false;    // I inside (p^N, U^{Ne})
    bool box_in_start = false;  // (p^N, U^{Ne}) inside (g, U^n)

    const std::vector<LadderGenerator>& end() const { return ideals.back(); }
    bool verified() const { return all_small && end_in_box && box_in_start; }
};

// Coefficients of p^r U^s G, index i holding U^i.
std::vector<WittScalar> ladder_value(const IdealLadder& l, const LadderGenerator& x);

// Throws PreconditionFailed when N < n or n < 1.
IdealLadder small_extension_ladder(const EisensteinPoly& g, int n, int N);

// ------------------------------------------------------------------ endgame

struct HardOptions {
    int case_id = 1;  // 1: one nice prime suffices, 2: a second one is needed
    int n = 2;
    int N = 6;
    int local_case = 1;
    std::uint64_t seed = 1;
};

struct HardReport {
    int case_id = 0;
    std::vector<TraceEntry> tilde_trace;  // Ad with L~, from Y_N
    std::vector<TraceEntry> ad0_trace;    // Ad0 with L, from Y_N
    std::vector<NiceRule> rules;
    std::vector<WittScalar> w;            // degree e relation g + p^N c
    RootMatch match;
    AlgebraMap iso;
    Rational root_closeness;    // bound val(pi^n) that val(y - pi) must exceed
    bool root_close = false;
    bool degree_e = false;
    bool field_equal = false;
    bool terminal_ok = false;   // Ad tilde at (1, 0)
    bool certified() const { return root_close && degree_e && field_equal && terminal_ok && match.bijective; }
};

// Throws ConfigError for a case other than 1 or 2, PreconditionFailed when
// N < n, KrasnerFail when N does not clear the Krasner threshold of g.
HardReport simulate_theorem_hard(const EisensteinPoly& g, const HardOptions& opt);

// ------------------------------------------------------------------ adjoint decomposition

// h = h_ad0 + h_sc with h_sc = (tr h / 2) I; p must be odd.
std::pair<ResidueMat, ResidueMat> decompose_adjoint(const ResidueField& k, const ResidueMat& h);

}  // namespace liftcheck
