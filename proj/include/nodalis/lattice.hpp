#pragma once

#include <optional>
#include <vector>

#include "nodalis/graph.hpp"
#include "nodalis/rational.hpp"

namespace nodalis {

// Singular multiplicities 0 < m_1 <= m_2 <= ... <= m_n.
using Mult = std::vector<long long>;

void validate_mult(const Mult& m, int n);

Mult mult_all(int n, long long m = 2);

// e.(C - M(E)E); for e = E_i - sum_{J} E_j this is m_i - sum_{J} m_j.
long long pairing_with_target(const ExcClass& e, const Mult& m);

// Membership in Delta(n): every type I class pairs negatively with
// C - M(E)E or is a -1 class.
bool special_condition(const Graph& g, const Mult& m);

std::vector<Graph> enumerate_Delta(int n, const Mult& m, int max_n = 7);

// Indexes k with e_k.(C - M(E)E) < 0, ascending.
std::vector<int> negative_indexes(const Graph& g, const Mult& m);

// Simplicial cone spanned by the type I classes of one admissible graph.
struct ExcCone {
    int n = 0;
    std::vector<ExcClass> gens;
};

// Generators are all n type I classes (the -1 classes included, matching the
// worked cones of the figures).
ExcCone cone_of(const Graph& g, const Mult& m);

// Same construction without the Delta(n) gate, for internal use on arbitrary
// admissible graphs.
ExcCone cone_of_graph(const Graph& g);

struct ConeDecomp {
    bool in_span = false;
    bool member = false;         // in_span and all coefficients >= 0
    std::vector<Rat> coeffs;     // valid when in_span
};

// Unique coordinates of v in the simplicial cone, by exact Gaussian
// elimination with deterministic pivoting.
ConeDecomp decompose_in_cone(const ExcClass& v, const ExcCone& cone);

// c1 a subcone of c2: every generator of c1 is a member of c2.
bool cone_contains(const ExcCone& c1, const ExcCone& c2);

// The graph Gamma_0 whose non-(-1) type I classes are exactly the given
// negatively-pairing classes, all other vertexes free.
Graph stratum_assignment(int n, const std::vector<ExcClass>& negclasses, const Mult& m);

// Gromov-Taubes expected dimension (e.e - K_rel.e)/2 with K_rel = sum E_a.
long long d_GT(const ExcClass& e);

}  // namespace nodalis
