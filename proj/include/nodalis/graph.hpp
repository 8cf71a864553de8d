#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nodalis {

// An n-vertex graph with arrowed one-edges a->b, a<b.  Edges are kept sorted
// lexicographically; equality and ordering are structural, so the sorted edge
// list doubles as the canonical encoding.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    friend bool operator==(const Graph&, const Graph&) = default;
    friend auto operator<=>(const Graph&, const Graph&) = default;
};

// Validates vertex range and a<b orientation; rejects duplicates.  Malformed
// input is an InputError, which is distinct from an axiom violation.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

Graph gamma_n(int n);

std::string graph_str(const Graph& g);

struct AxiomViolation {
    int axiom = 0;
    std::vector<int> vertices;
};

struct AxiomCheck {
    bool ok = true;
    std::vector<AxiomViolation> violations;
};

// Literal check of the five admissibility axioms.  Axioms 1 and 2 are
// guaranteed by construction; 3, 4, 5 are checked one by one with vertex
// witnesses.
AxiomCheck check_axioms(const Graph& g);

bool is_admissible(const Graph& g);

// J_i = direct descendent indexes of i.  1-based; slot 0 unused.
std::vector<std::vector<int>> descendent_sets(const Graph& g);

// I_i = {i} together with the direct descendent indexes of i.
std::vector<int> index_set_of_vertex(const Graph& g, int i);

// Number of one-edges.
int codim(const Graph& g);

// All admissible graphs on n vertices, canonically sorted.  Enumerates by
// choosing descendent sets vertex by vertex with pairing-based pruning; the
// unpruned filter lives in the oracle module.
std::vector<Graph> enumerate_adm(int n, int max_n = 7);

// Integer class in span{E_1..E_n} plus an optional multiple of the base
// class C.  Fiberwise pairing: E_i.E_j = -delta_ij, E_i.C = 0.
struct ExcClass {
    std::vector<long long> e;  // coefficients of E_1..E_n
    long long c = 0;           // coefficient of C

    friend bool operator==(const ExcClass&, const ExcClass&) = default;
};

ExcClass unit_E(int n, int i);

ExcClass add(const ExcClass& a, const ExcClass& b);
ExcClass sub(const ExcClass& a, const ExcClass& b);

// Fiberwise intersection number.  C.C does not reduce to a number here, so
// both operands carrying a C-component is refused.
long long pair_classes(const ExcClass& a, const ExcClass& b);

std::string class_str(const ExcClass& a);

// e_i = E_i - sum_{j in J_i} E_j for each vertex.
std::vector<ExcClass> type_I_classes(const Graph& g);

// The fan-like graph keeping only the edges i->j, j in J_i.
Graph fan_subgraph(const Graph& g, int i);

// Reconstructs the admissible graph whose type I classes are the given ones.
// Requires each class to be of shape E_i - sum_{j in J_i} E_j with
// inf(J_i) > i and pairwise non-negative pairings; violations name the
// offending vertex or pair.
Graph graph_from_classes(const std::vector<ExcClass>& classes);

// Membership in adm_2(n): every vertex has at most one direct descendent.
bool is_chain_like(const Graph& g);

// Order-preserving relabel of K to {1..|K|}; substitutes E_a -> E_phi(a) for
// a in K and E_a -> 0 otherwise, then rebuilds the graph.  Equals the induced
// subgraph on K.
Graph restrict_graph(const Graph& g, const std::vector<int>& K);

// Degeneration order: Y_small lies in the closure Y(big), detected by the
// effectivity criterion (every type I class of big is a non-negative integer
// combination of the type I classes of small).
bool degenerates(const Graph& small, const Graph& big);

}  // namespace nodalis
