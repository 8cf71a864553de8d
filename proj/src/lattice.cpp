#include "nodalis/lattice.hpp"

#include <algorithm>
#include <set>

// Pairings against C - M(E)E, the exceptional cones and their membership
// tests.  Cones here are always simplicial: the generators are the type I
// classes of a single admissible graph, whose coefficient matrix is
// unitriangular, so decompositions are unique and integral whenever the input
// is integral.

namespace nodalis {

void validate_mult(const Mult& m, int n) {
    if (static_cast<int>(m.size()) != n) throw InputError("multiplicity vector length mismatch");
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] <= 0) throw InputError("multiplicities must be positive");
        if (i > 0 && m[i - 1] > m[i]) throw InputError("multiplicities must be non-decreasing");
    }
}

Mult mult_all(int n, long long m) { return Mult(static_cast<size_t>(n), m); }

long long pairing_with_target(const ExcClass& e, const Mult& m) {
    if (e.e.size() != m.size()) throw InputError("class/multiplicity rank mismatch");
    if (e.c != 0) throw InputError("pairing_with_target expects a pure exceptional class");
    // e.(C - sum m_a E_a) = sum_a m_a * e_a   (E_i.E_j = -delta, E_i.C = 0)
    long long s = 0;
    for (size_t a = 0; a < m.size(); ++a) s += m[a] * e.e[a];
    return s;
}

bool special_condition(const Graph& g, const Mult& m) {
    validate_mult(m, g.n);
    for (const ExcClass& e : type_I_classes(g)) {
        if (pairing_with_target(e, m) < 0) continue;
        if (pair_classes(e, e) == -1) continue;
        return false;
    }
    return true;
}

std::vector<Graph> enumerate_Delta(int n, const Mult& m, int max_n) {
    validate_mult(m, n);
    std::vector<Graph> out;
    for (const Graph& g : enumerate_adm(n, max_n))
        if (special_condition(g, m)) out.push_back(g);
    return out;
}

std::vector<int> negative_indexes(const Graph& g, const Mult& m) {
    std::vector<int> out;
    auto cls = type_I_classes(g);
    for (int i = 1; i <= g.n; ++i)
        if (pairing_with_target(cls[i - 1], m) < 0) out.push_back(i);
    return out;
}

ExcCone cone_of_graph(const Graph& g) { return ExcCone{g.n, type_I_classes(g)}; }

ExcCone cone_of(const Graph& g, const Mult& m) {
    if (!special_condition(g, m))
        throw InputError("graph is outside Delta(n) for the given multiplicities");
    return cone_of_graph(g);
}

namespace {

// Type I generator sets are unitriangular: generator j carries +1 at its apex
// and entries only at larger indexes.  Forward substitution is then exact
// over the integers; this is the deterministic-pivot elimination with the
// pivots known in advance.
std::optional<ConeDecomp> decompose_triangular(const ExcClass& v, const ExcCone& cone) {
    int n = cone.n;
    if (static_cast<int>(cone.gens.size()) != n) return std::nullopt;
    for (int j = 0; j < n; ++j) {
        const ExcClass& g = cone.gens[j];
        if (g.c != 0 || g.e[j] != 1) return std::nullopt;
        for (int i = 0; i < j; ++i)
            if (g.e[i] != 0) return std::nullopt;
    }
    std::vector<long long> rem = v.e;
    ConeDecomp d;
    d.in_span = true;
    d.coeffs.resize(n);
    d.member = true;
    for (int j = 0; j < n; ++j) {
        long long c = rem[j];
        d.coeffs[j] = rat(c);
        if (c < 0) d.member = false;
        if (c != 0)
            for (int i = j; i < n; ++i) rem[i] -= c * cone.gens[j].e[i];
    }
    for (long long x : rem)
        if (x != 0) throw EngineError("triangular cone decomposition failed");
    return d;
}

}  // namespace

ConeDecomp decompose_in_cone(const ExcClass& v, const ExcCone& cone) {
    int n = cone.n;
    int k = static_cast<int>(cone.gens.size());
    if (static_cast<int>(v.e.size()) != n || v.c != 0)
        throw InputError("decompose_in_cone expects a pure exceptional class of matching rank");
    if (auto fast = decompose_triangular(v, cone)) return *fast;
    // Solve sum_j x_j gens[j] = v exactly; columns are the generators.
    std::vector<std::vector<Rat>> A(n, std::vector<Rat>(k + 1));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) A[i][j] = rat(cone.gens[j].e[i]);
    for (int i = 0; i < n; ++i) A[i][k] = rat(v.e[i]);

    std::vector<int> pivot_col_of_row;
    int row = 0;
    for (int col = 0; col < k && row < n; ++col) {
        int pr = -1;
        for (int i = row; i < n; ++i)
            if (A[i][col] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(A[row], A[pr]);
        Rat inv = 1 / A[row][col];
        for (int j = col; j <= k; ++j) A[row][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == row || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (int j = col; j <= k; ++j) A[i][j] -= f * A[row][j];
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    ConeDecomp d;
    for (int i = row; i < n; ++i)
        if (A[i][k] != 0) return d;  // outside the span
    d.in_span = true;
    d.coeffs.assign(k, rat(0));
    for (int i = 0; i < row; ++i) d.coeffs[pivot_col_of_row[i]] = A[i][k];
    // Free columns would make the solution non-unique; the simplicial
    // hypothesis excludes them, but guard anyway.
    if (row < k) {
        std::set<int> piv(pivot_col_of_row.begin(), pivot_col_of_row.end());
        for (int j = 0; j < k; ++j)
            if (!piv.count(j)) throw EngineError("cone generators are linearly dependent");
    }
    d.member = std::all_of(d.coeffs.begin(), d.coeffs.end(), [](const Rat& c) { return c >= 0; });
    return d;
}

bool cone_contains(const ExcCone& c1, const ExcCone& c2) {
    if (c1.n != c2.n) throw InputError("cone rank mismatch");
    for (const ExcClass& g : c1.gens)
        if (!decompose_in_cone(g, c2).member) return false;
    return true;
}

Graph stratum_assignment(int n, const std::vector<ExcClass>& negclasses, const Mult& m) {
    validate_mult(m, n);
    std::vector<std::pair<int, ExcClass>> placed;
    std::vector<bool> used(n + 1, false);
    for (const ExcClass& e : negclasses) {
        if (static_cast<int>(e.e.size()) != n || e.c != 0)
            throw InputError("stratum class of wrong rank");
        if (pairing_with_target(e, m) >= 0)
            throw InputError("stratum class " + class_str(e) +
                             " does not pair negatively with C-M(E)E");
        int apex = 0;
        for (int i = 1; i <= n; ++i)
            if (e.e[i - 1] == 1) {
                if (apex != 0) throw InputError("stratum class has two unit coefficients");
                apex = i;
            }
        if (apex == 0 || used[apex]) throw InputError("stratum classes must have distinct apexes");
        used[apex] = true;
        placed.emplace_back(apex, e);
    }
    for (size_t a = 0; a < negclasses.size(); ++a)
        for (size_t b = a + 1; b < negclasses.size(); ++b)
            if (pair_classes(negclasses[a], negclasses[b]) < 0)
                throw InputError("stratum classes pair negatively");
    // complete with -1 classes at the free vertexes
    std::vector<ExcClass> cls;
    cls.reserve(n);
    for (int i = 1; i <= n; ++i) cls.push_back(unit_E(n, i));
    for (auto& [apex, e] : placed) cls[apex - 1] = e;
    Graph g0 = graph_from_classes(cls);
    if (!special_condition(g0, m)) throw EngineError("stratum assignment left Delta(n)");
    return g0;
}

long long d_GT(const ExcClass& e) {
    // K_rel = sum_a E_a, so K_rel.e = -sum_a e_a in the diagonal(-1) pairing.
    long long krel_e = 0;
    for (long long c : e.e) krel_e -= c;
    long long num = pair_classes(e, e) - krel_e;
    if (num % 2 != 0) throw EngineError("odd Gromov-Taubes numerator");
    return num / 2;
}

}  // namespace nodalis
