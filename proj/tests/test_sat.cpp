#include "doctest.h"

#include "leakcheck/sat.hpp"

#include <random>
#include <sstream>

using namespace leakcheck;

namespace {

// Brute-force 2^n enumeration over CNF given as literal lists.
bool brute_force_sat(int nvars, const std::vector<std::vector<Lit>> &cnf) {
    for (uint64_t m = 0; m < (uint64_t{1} << nvars); m++) {
        bool all_ok = true;
        for (const auto &clause : cnf) {
            bool sat = false;
            for (Lit p : clause) {
                bool v = (m >> p.var()) & 1;
                if (v != p.neg()) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all_ok = false;
                break;
            }
        }
        if (all_ok)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("trivial sat and unsat") {
    SatSolver s;
    int a = s.new_var();
    int b = s.new_var();
    // (a | b) & (~a)
    CHECK(s.add_clause({Lit::make(a), Lit::make(b)}));
    CHECK(s.add_clause({Lit::make(a, true)}));
    REQUIRE(s.solve() == SatSolver::Result::Sat);
    CHECK(s.model_value(b));
    CHECK_FALSE(s.model_value(a));

    SatSolver u;
    int x = u.new_var();
    u.add_clause({Lit::make(x)});
    u.add_clause({Lit::make(x, true)});
    CHECK(u.solve() == SatSolver::Result::Unsat);
}

TEST_CASE("incremental assumptions") {
    SatSolver s;
    int a = s.new_var();
    int b = s.new_var();
    int c = s.new_var();
    s.add_clause({Lit::make(a, true), Lit::make(b)});
    s.add_clause({Lit::make(b, true), Lit::make(c)});
    CHECK(s.solve({Lit::make(a)}) == SatSolver::Result::Sat);
    CHECK(s.model_value(c));
    CHECK(s.solve({Lit::make(a), Lit::make(c, true)}) == SatSolver::Result::Unsat);
    // solver stays usable after an unsat call
    CHECK(s.solve({Lit::make(a)}) == SatSolver::Result::Sat);
    CHECK(s.solve() == SatSolver::Result::Sat);
}

TEST_CASE("random 3-CNF agrees with brute force") {
    std::mt19937 rng(20240817);
    int disagreements = 0;
    for (int round = 0; round < 200; round++) {
        int nvars = 5 + static_cast<int>(rng() % 14); // 5..18
        int nclauses = static_cast<int>(nvars * 4.0);
        std::vector<std::vector<Lit>> cnf;
        for (int i = 0; i < nclauses; i++) {
            std::vector<Lit> clause;
            for (int k = 0; k < 3; k++)
                clause.push_back(Lit::make(static_cast<int>(rng() % nvars), rng() & 1));
            cnf.push_back(clause);
        }
        SatSolver s;
        for (int v = 0; v < nvars; v++)
            s.new_var();
        bool ok = true;
        for (auto &clause : cnf)
            ok = s.add_clause(clause) && ok;
        SatSolver::Result r = ok ? s.solve() : SatSolver::Result::Unsat;
        bool expected = brute_force_sat(nvars, cnf);
        if ((r == SatSolver::Result::Sat) != expected)
            disagreements++;
        if (r == SatSolver::Result::Sat) {
            // model must actually satisfy the formula
            for (const auto &clause : cnf) {
                bool sat = false;
                for (Lit p : clause)
                    sat |= s.model_value(p.var()) != p.neg();
                CHECK(sat);
            }
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("conflict budget reports Undef, not Unsat") {
    // A hard pigeonhole-ish instance with a tiny budget.
    SatSolver s;
    const int holes = 7;
    const int pigeons = 8;
    std::vector<std::vector<int>> var(pigeons, std::vector<int>(holes));
    for (int p = 0; p < pigeons; p++)
        for (int h = 0; h < holes; h++)
            var[p][h] = s.new_var();
    for (int p = 0; p < pigeons; p++) {
        std::vector<Lit> at_least;
        for (int h = 0; h < holes; h++)
            at_least.push_back(Lit::make(var[p][h]));
        s.add_clause(at_least);
    }
    for (int h = 0; h < holes; h++)
        for (int p1 = 0; p1 < pigeons; p1++)
            for (int p2 = p1 + 1; p2 < pigeons; p2++)
                s.add_clause({Lit::make(var[p1][h], true), Lit::make(var[p2][h], true)});
    CHECK(s.solve({}, 10) == SatSolver::Result::Undef);
    CHECK(s.solve({}, -1) == SatSolver::Result::Unsat);
}

TEST_CASE("dimacs dump is well-formed") {
    SatSolver s;
    int a = s.new_var();
    int b = s.new_var();
    s.add_clause({Lit::make(a), Lit::make(b)});
    s.add_clause({Lit::make(a, true), Lit::make(b)});
    std::ostringstream os;
    s.dump_dimacs(os, {Lit::make(b, true)});
    std::string text = os.str();
    CHECK(text.find("p cnf 2 3") == 0);
    CHECK(text.find("1 2 0") != std::string::npos);
    CHECK(text.find("-1 2 0") != std::string::npos);
    CHECK(text.find("-2 0") != std::string::npos);
}
