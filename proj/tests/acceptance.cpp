// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "liftcheck/cli.hpp"

namespace {

using liftcheck::Json;
using liftcheck::verify;

struct Criterion {
    int number;
    std::string name;
    double limit_seconds;
    std::function<bool(std::string&)> check;
};

bool all_of(const Json& rows, const std::function<bool(const Json&)>& f) {
    for (const auto& r : rows)
        if (!f(r)) return false;
    return true;
}

std::vector<Criterion> criteria() {
    return {
        {1, "H^1(SL2(F3), Ad0) = 0", 1.0,
         [](std::string& d) {
             auto r = verify("h1-sl2", {{"p", 3}});
             d = "order " + r["order"].dump() + ", dim " + r["dim_h1"].dump();
             return r["pass"] == true && r["order"] == 24 && r["dim_h1"] == 0;
         }},
        {2, "H^1(GL2(Fq), Ad0) = 0 for q = 3, 7, 9 and q = 5 under the diagonal hypothesis", 30.0,
         [](std::string& d) {
             auto r = verify("h1-gl2", {{"q", {3, 5, 7, 9}}});
             std::set<int> seen;
             bool ok = r["pass"] == true;
             for (const auto& g : r["groups"]) {
                 seen.insert(g["q"].get<int>());
                 ok = ok && g["dim_h1"] == 0 && g["conclusion_applies"] == true;
                 if (g["q"] == 5) ok = ok && g["needs_diagonal_hypothesis"] == true && g["hypothesis_holds"] == true;
             }
             d = std::to_string(seen.size()) + " fields";
             return ok && seen == std::set<int>{3, 5, 7, 9};
         }},
        {3, "H^1 of GL2 over F3[U]/U^2 (order 3888) has dimension 1", 300.0,
         [](std::string& d) {
             auto r = verify("h1-level-two");
             const auto& g = r["groups"][0];
             d = "order " + g["order"].dump() + ", dim " + g["dim_h1"].dump();
             return g["group"] == "GL2" && g["order"] == 3888 && g["dim_h1"] == 1;
         }},
        {4, "50 random generating sets over F3[U]/U^3 contain SL2, no counterexample", 300.0,
         [](std::string& d) {
             auto r = verify("boston", {{"count", 50}, {"seed", 1}});
             d = r["sets_applicable"].dump() + " applicable, " + r["counterexamples"].dump() + " counterexamples";
             return r["sets_applicable"] == 50 && r["counterexamples"] == 0;
         }},
        {5, "GL2(F3[U]/U^2) -> GL2(F3) splits via the ring section (2304 pairs), as does Z/9", 120.0,
         [](std::string& d) {
             auto r = verify("splitting");
             const auto& s = r["sections"];
             d = "pairs " + s[0]["pairs_checked"].dump();
             return s.size() == 2 && s[0]["split"] == true && s[0]["method"] == "ring-section" &&
                    s[0]["pairs_checked"] == 2304 && s[1]["ring"] == "Z/9" && s[1]["split"] == true;
         }},
        {6, "local table at p = 3: (2,4), (1,3) x3, (2,5 -> 4), Wiles difference 1", 1.0,
         [](std::string& d) {
             auto r = verify("local-table", {{"p", 3}});
             const auto& rows = r["rows"];
             if (rows.size() != 5) return false;
             std::vector<std::vector<int>> want{{2, 4, 4}, {1, 3, 3}, {1, 3, 3}, {1, 3, 3}, {2, 5, 4}};
             bool ok = true;
             for (std::size_t i = 0; i < 5; ++i) {
                 const auto& row = rows[i];
                 ok = ok && row["h0"] == want[i][0] && row["dim_L_tilde_raw"] == want[i][1] &&
                      row["dim_L_tilde"] == want[i][2] && row["wiles_difference"] == 1;
             }
             d = "5 rows";
             return ok;
         }},
        {7, "nice primes: h0(Ad0) = 1 = dim L, dim L~ = 2", 1.0,
         [](std::string& d) {
             auto r = verify("nice-prime", {{"p", 3}});
             d = std::to_string(r["primes"].size()) + " primes";
             return !r["primes"].empty() && all_of(r["primes"], [](const Json& q) {
                 return q["h0_ad0"] == 1 && q["dim_L"] == 1 && q["dim_L_tilde"] == 2 && q["verdict"] == "nice";
             });
         }},
        {8, "easy case reaches (1,0) for s = 0..10 with the identity at every step", 1.0,
         [](std::string& d) {
             auto r = verify("easy", {{"s_max", 10}});
             const auto& runs = r["runs"];
             bool ok = runs.size() == 11;
             for (std::size_t s = 0; ok && s < runs.size(); ++s)
                 ok = runs[s]["s"] == static_cast<int>(s) && runs[s]["final"] == "1,0" &&
                      runs[s]["identity_every_step"] == true && runs[s]["steps"] == static_cast<int>(s);
             d = std::to_string(runs.size()) + " runs";
             return ok;
         }},
        {9, "ideal ladder for (p, g, n, N) = (3, U^2-3, 2, 4)", 10.0,
         [](std::string& d) {
             auto r = verify("ladder", {{"g", "U^2-3"}, {"n", 2}, {"N", 4}});
             d = r["steps"].dump() + " steps";
             return r["all_small"] == true && r["end_in_box"] == true && r["box_in_start"] == true &&
                    r["first_kernel"] == "g";
         }},
        {10, "hard case 1 certificate at N = 6", 30.0,
         [](std::string& d) {
             auto r = verify("endgame", {{"case", 1}, {"N", 6}, {"n", 2}});
             d = "rules " + r["rules"].dump();
             return r["certified"] == true && r["degree_e"] == true && r["field_equal"] == true &&
                    r["root_close"] == true && r["terminal_ok"] == true;
         }},
        {11, "order isomorphism: close pair accepted, far pair refused, perturbations accepted", 60.0,
         [](std::string& d) {
             auto r = verify("order-iso");
             d = r["far_pair_refused_depths"].dump() + "/" + r["far_pair_depths"].dump() + " refusals, " +
                 r["perturbations_isomorphic"].dump() + "/" + r["perturbations"].dump() + " perturbations";
             return r["close_pair_isomorphic"] == true && r["far_pair_refused_depths"] == r["far_pair_depths"] &&
                    r["perturbations"] == 100 && r["perturbations_isomorphic"] == 100;
         }},
        {12, "200 Weierstrass preparation round trips", 60.0,
         [](std::string& d) {
             auto r = verify("weierstrass", {{"count", 200}});
             d = r["round_trips"].dump() + " round trips";
             return r["series"] == 200 && r["round_trips"] == 200 && r["distinguished"] == 200;
         }},
        {13, "orbit decomposition {2,1} preserved under a 3^N perturbation", 10.0,
         [](std::string& d) {
             auto r = verify("orbit-match");
             d = "pattern " + r["w_pattern"].dump();
             return r["preserved"] == true && r["g_pattern"] == Json({2, 1}) && r["w_pattern"] == Json({2, 1});
         }},
    };
}

}  // namespace

int main() {
    int failures = 0;
    for (const auto& c : criteria()) {
        std::string detail;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.limit_seconds;
        if (!in_time) detail += ", over time limit";
        bool pass = ok && in_time;
        if (!pass) ++failures;
        std::printf("%s %2d %s [%s; %.3f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.number, c.name.c_str(),
                    detail.c_str(), secs, c.limit_seconds);
    }
    return failures == 0 ? 0 : 1;
}
