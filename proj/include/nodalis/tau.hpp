#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nodalis/chow.hpp"
#include "nodalis/order.hpp"

namespace nodalis {

struct TauClass {
    Graph graph;
    Mult m;
    bool zero_flag = false;
    long long rank = 0;
    ChowExpr total_chern;           // 1 when the class vanishes in K-theory
    std::set<std::string> symbols;  // unresolved parameters entering total_chern
};

// The compensation class attached to Y(Gamma).  Zero iff some negative class
// has e.e < e.(C-M(E)E); otherwise rank and total Chern class per the locally
// free representative.
TauClass tau_of(const Graph& g, const Mult& m);

// Exceptional coefficient vector of C - M(E)E - sum_{neg} e_i; the correction
// invariant over Y(Gamma) removes this class, so its obstruction bundle is
// built from these coefficients.
std::vector<long long> twisted_coefficients(const Graph& g, const Mult& m);

// The mixed algebraic family invariant over Y(Gamma) in t_L-restricted mode
// (the Picard factor is 1): the degree-zero pushforward of
// c_total(tau) . c_total(U) . [Y(Gamma)].
PushResult mixed_invariant(const Graph& g, const Mult& m, const PushRules& rules = PushRules{});

// Expected-dimension discrepancy between the full moduli space and the
// restricted one over Y(Gamma), computed from the two dimension formulas
// (not from the rank expression it must reproduce).
long long expected_dim_discrepancy(const Graph& g, const Mult& m);

struct EvalContext {
    OrderingContext ord;
    PushRules rules;
    std::map<int, PushResult> memo;  // by delta index
};

EvalContext make_eval_context(int n, const Mult& m, bool reversed_tie_break = false,
                              int max_n = 7, const PushRules& rules = PushRules{});

// The recursion: AFSW*(Gamma) = mixed(Gamma) - sum over Gamma >> Gamma' of
// AFSW*(Gamma'); for gamma_n the sum runs over all of Delta(n) - {gamma_n}.
PushResult afsw_star(EvalContext& ctx, int delta_index);
PushResult afsw_star(EvalContext& ctx, const Graph& g);

struct Contribution {
    Graph graph;
    std::string status;  // "leading" | "tau_zero" | "subtracted" | "zero"
    PushResult afsw;
};

struct NodeCount {
    int delta = 0;
    PushResult pre_factorial;  // AFSW*(gamma_delta), the ordered count
    PushResult d;              // divided by delta!
    std::vector<Contribution> provenance;
};

// d_delta(L) = (1/delta!) AFSW*(gamma_delta, m = (2,...,2)).
NodeCount node_count(int delta, int max_delta = 4, bool reversed_tie_break = false,
                     const PushRules& rules = PushRules{});

}  // namespace nodalis
