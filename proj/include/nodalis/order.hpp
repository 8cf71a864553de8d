#pragma once

#include <optional>
#include <vector>

#include "nodalis/lattice.hpp"

namespace nodalis {

// Gamma1 >= Gamma2 under the cone ordering: C_{Gamma1} inside C_{Gamma2}.
bool succ(const Graph& g1, const Graph& g2, const Mult& m);

// The persistence ordering >>.  (A) every negatively-pairing e_i of g keeps
// the same class at the same index in g2; (B) g2 acquires a negative class at
// an index where g pairs >= 0.
bool gg(const Graph& g, const Graph& g2, const Mult& m);

// Common degenerations: admissible graphs below both, the proxy for
// Y(g1) cap Y(g2) being nonempty.
std::vector<Graph> common_degenerations(const Graph& g1, const Graph& g2, int max_n = 7);

// S_{gprime} meets Y(g): some stratum of Y(g) carries exactly gprime's
// exceptional cone, i.e. some admissible W <= g has stratum assignment
// gprime.  Both index-set reductions and the restriction identity need this
// sharper test; the closure overlap alone is too coarse.
bool stratum_meets_closure(const Graph& gprime, const Graph& g, const Mult& m, int max_n = 7);

// The breaking ordering (square ordering).  Needs a common degeneration and
// the difference of the negative-class sums must decompose non-negatively in
// the cone of the selected witness degeneration (the first one extracted by
// the minimal-element loop).
bool sq(const Graph& g, const Graph& g2, const Mult& m, bool reversed_tie_break = false,
        int max_n = 7);

// All data the recursion and the CLI need about Delta(n) at once.
struct OrderingContext {
    int n = 0;
    Mult m;
    bool reversed_tie_break = false;
    int max_n = 7;
    std::vector<Graph> delta;            // canonical order
    std::vector<int> models;             // the linear ordering |=, least first
    std::vector<std::vector<char>> succ_mat, gg_mat, sq_mat;
    std::vector<std::vector<char>> meets_mat;  // meets_mat[i][j]: S_j meets Y(i)

    int index_of(const Graph& g) const;
    // strictly below gi under |=
    bool models_below(int lo, int hi) const;
};

OrderingContext build_ordering_context(int n, const Mult& m, bool reversed_tie_break = false,
                                       int max_n = 7);

// Repeated extraction of minimal elements under succ, ties broken by the
// canonical encoding (reversed flag flips the tie-break).  Returns indexes
// into `delta`, least first; gamma_n comes out last.
std::vector<int> build_models_order(const std::vector<Graph>& delta, const Mult& m,
                                    bool reversed_tie_break = false);

struct IndexSets {
    std::vector<int> I;       // indexes into delta, |=-ascending
    std::vector<int> Ibar;
    std::vector<int> IbarGG;
};

IndexSets index_sets(const OrderingContext& ctx, int gi);

// The accumulation ordering on Ibar; returns Ibar re-sorted with the
// |--largest element first.
std::vector<int> vdash_order(const OrderingContext& ctx, int gi);

// Case (b) of the hierarchy relation: the inserted graph between g and g2,
// or nothing when the negative classes of g persist (case (a)).
std::optional<Graph> intermediate_graph(const Graph& g, const Graph& g2, const Mult& m,
                                        int max_n = 7);

}  // namespace nodalis
