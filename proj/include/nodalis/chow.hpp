#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nodalis/graph.hpp"
#include "nodalis/lattice.hpp"
#include "nodalis/rational.hpp"

namespace nodalis {

// Generators of the working subring of A(M_n):
//   H(i)  = pullback of C from the i-th factor          (degree 1)
//   K(i)  = pullback of K_M                             (degree 1)
//   P(i)  = pullback of the point class                 (degree 2)
//   C2(i) = pullback of c_2(TM)                         (degree 2)
//   X(a,b) = exceptional divisor of the (a,b) diagonal  (degree 1)
//   Q(k)  = symbolic first Chern class, unresolved      (degree 1)
enum class GK : uint8_t { H = 0, K = 1, P = 2, C2 = 3, X = 4, Q = 5 };

struct Gen {
    GK kind;
    uint8_t i = 0;  // vertex, or smaller pair index
    uint8_t j = 0;  // larger pair index (X only)
};

uint32_t gen_key(Gen g);
Gen gen_of_key(uint32_t k);
int gen_grade(GK k);
std::string gen_str(Gen g);

// Monomial: sorted (generator, exponent) pairs.
using Mono = std::vector<std::pair<uint32_t, int>>;

int mono_grade(const Mono& m);

// Graded formal Q-linear combination of monomials; mixed grades allowed
// (total Chern classes are mixed).
struct ChowExpr {
    int n = 0;
    std::map<Mono, Rat> t;

    bool is_zero() const { return t.empty(); }
    friend bool operator==(const ChowExpr&, const ChowExpr&) = default;
};

ChowExpr ce_zero(int n);
ChowExpr ce_const(int n, const Rat& c);
ChowExpr ce_gen(int n, Gen g);

ChowExpr add(const ChowExpr& a, const ChowExpr& b);
ChowExpr sub(const ChowExpr& a, const ChowExpr& b);
ChowExpr mul(const ChowExpr& a, const ChowExpr& b);
ChowExpr scale(const ChowExpr& a, const Rat& c);
ChowExpr grade_part(const ChowExpr& a, int grade);
std::string chow_str(const ChowExpr& a);

// Universal polynomial over Q in x = L.L, y = L.K, z = K.K, w = c_2(M).
struct UniversalPoly {
    std::map<std::array<int, 4>, Rat> t;

    bool is_zero() const { return t.empty(); }
    friend bool operator==(const UniversalPoly&, const UniversalPoly&) = default;
};

UniversalPoly up_zero();
UniversalPoly up_const(const Rat& c);
UniversalPoly up_mono(int a, int b, int c, int d, const Rat& coef);
UniversalPoly add(const UniversalPoly& a, const UniversalPoly& b);
UniversalPoly sub(const UniversalPoly& a, const UniversalPoly& b);
UniversalPoly mul(const UniversalPoly& a, const UniversalPoly& b);
UniversalPoly scale(const UniversalPoly& a, const Rat& c);
Rat up_eval(const UniversalPoly& p, const Rat& x, const Rat& y, const Rat& z, const Rat& w);
// -1 when zero, -2 when inhomogeneous.
int up_homogeneous_degree(const UniversalPoly& p);
std::string up_str(const UniversalPoly& p);

// The codimension-two blowdown rule table: p_*(x^j . p^*c) uses coeff[j] for
// j = 2..5 in front of iota_*(s_{j-2}(N) . c|_Z); beyond that the sign is
// (-1)^{j-1}.  The table exists so tests can perturb a single constant.
struct PushRules {
    std::array<Rat, 6> coeff{Rat(0), Rat(0), Rat(-1), Rat(1), Rat(-1), Rat(1)};
};

struct PushResult {
    UniversalPoly poly;
    bool parametric = false;
    std::set<std::string> symbols;  // unresolved Q-symbols that were hit
};

// Pushforward A(M_n) -> A(pt).  Eliminates every X(a,b) in the reverse of the
// blowup order, then evaluates on the product by the factor pairing.
// Monomials that keep a Q-symbol are reported, never silently dropped.
PushResult pushforward_to_point(const ChowExpr& e, const PushRules& rules = PushRules{});

// [Y(Gamma)] as a class on M_n.
ChowExpr class_of_stratum(const Graph& g);

// Total Chern class of the relative obstruction bundle U_{M(E)E}.
ChowExpr obstruction_total_chern(int n, const Mult& m);

// Same Whitney product for an arbitrary exceptional coefficient vector (the
// correction terms remove C - M(E)E - sum e_i, whose coefficients need not be
// monotone).  Entries must be >= 0; an entry of 0 contributes the unit.
ChowExpr obstruction_total_chern_vec(int n, const std::vector<long long>& coeffs);

// c_1 and c_2 of the relative tangent of the stage-l fibration, as classes
// on M_n (l = n+1 gives the full tower M_{n+1} -> M_n on index set 1..n+1).
ChowExpr relative_tangent_c1(int n, int l);
ChowExpr relative_tangent_c2(int n, int l);

// Fiberwise integral of c_2(T_{M_{n+1}/M_n}) over a fiber above the open
// stratum, evaluated through the engine by inserting the class of a generic
// fiber.  Must equal w + n.
UniversalPoly fiber_euler_check(int n, const PushRules& rules = PushRules{});

}  // namespace nodalis
