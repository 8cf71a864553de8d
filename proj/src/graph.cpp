#include "nodalis/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "nodalis/rational.hpp"

// Admissible graphs and their type I exceptional classes.
//
// A graph on markings {1..n} with oriented one-edges a->b, a<b, is admissible
// when the only loops are triangles (a<b<c with edges a->b, a->c, b->c), no
// vertex has more than two direct ascendents, two direct ascendents always
// close into a triangle, and two triangles sharing an edge give the shared
// edge's head exactly one direct descendent among the other three vertexes.
//
// In terms of the descendent sets J_i these axioms are equivalent to
//     b not in J_a  =>  J_a and J_b disjoint
//     b in J_a      =>  |J_a cap J_b| <= 1        (for all a < b)
// which is the statement that the classes e_i = E_i - sum_{J_i} E_j pair
// non-negatively with each other.  The literal axioms are checked here; the
// equivalence is exercised exhaustively against the brute-force filter in the
// oracle suite.

namespace nodalis {

namespace {

std::vector<std::vector<int>> ascendent_sets(const Graph& g) {
    std::vector<std::vector<int>> up(g.n + 1);
    for (auto [a, b] : g.edges) up[b].push_back(a);
    return up;
}

bool has_edge(const Graph& g, int a, int b) {
    return std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(a, b));
}

bool is_triangle(const Graph& g, int a, int b, int c) {
    return has_edge(g, a, b) && has_edge(g, a, c) && has_edge(g, b, c);
}

}  // namespace

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 0) throw InputError("vertex count must be non-negative");
    std::sort(edges.begin(), edges.end());
    for (size_t i = 0; i < edges.size(); ++i) {
        auto [a, b] = edges[i];
        if (a < 1 || b < 1 || a > n || b > n)
            throw InputError("edge endpoint out of range: (" + std::to_string(a) + "," +
                             std::to_string(b) + ")");
        if (a >= b)
            throw InputError("edge must be oriented from smaller to larger marking: (" +
                             std::to_string(a) + "," + std::to_string(b) + ")");
        if (i > 0 && edges[i] == edges[i - 1])
            throw InputError("duplicate edge (" + std::to_string(a) + "," + std::to_string(b) +
                             ")");
    }
    return Graph{n, std::move(edges)};
}

Graph gamma_n(int n) { return Graph{n, {}}; }

std::string graph_str(const Graph& g) {
    std::string s = "n=" + std::to_string(g.n) + "{";
    for (size_t i = 0; i < g.edges.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(g.edges[i].first) + "->" + std::to_string(g.edges[i].second);
    }
    return s + "}";
}

AxiomCheck check_axioms(const Graph& g) {
    AxiomCheck r;
    auto J = descendent_sets(g);
    auto up = ascendent_sets(g);

    // Axiom 4: at most two direct ascendents; exactly two close a triangle.
    for (int v = 1; v <= g.n; ++v) {
        if (up[v].size() > 2) {
            auto w = up[v];
            w.push_back(v);
            r.violations.push_back({4, w});
        } else if (up[v].size() == 2) {
            int p = up[v][0], q = up[v][1];
            if (!is_triangle(g, std::min(p, q), std::max(p, q), v))
                r.violations.push_back({4, {p, q, v}});
        }
    }

    // Axiom 3: every cycle of the underlying undirected graph is a triangle.
    // A 3-cycle on a<b<c forces the edges a->b, a->c, b->c, which is exactly
    // the allowed pattern, so only longer cycles violate.  With <= 7 vertexes
    // a direct simple-cycle scan (rooted at the smallest cycle vertex) is
    // enough.
    {
        std::vector<std::set<int>> adj(g.n + 1);
        for (auto [a, b] : g.edges) {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        std::set<std::vector<int>> seen;
        std::vector<int> path;
        std::function<void(int, int)> dfs = [&](int start, int v) {
            for (int w : adj[v]) {
                if (w == start && path.size() >= 3) {
                    std::vector<int> cyc = path;
                    std::sort(cyc.begin(), cyc.end());
                    if (seen.insert(cyc).second && cyc.size() != 3)
                        r.violations.push_back({3, cyc});
                    continue;
                }
                if (w <= start) continue;
                if (std::find(path.begin(), path.end(), w) != path.end()) continue;
                path.push_back(w);
                dfs(start, w);
                path.pop_back();
            }
        };
        for (int s = 1; s <= g.n; ++s) {
            path = {s};
            dfs(s, s);
        }
    }

    // Axiom 5: adjacent triangles sharing an edge.  For a shared edge u->v the
    // head v must have exactly one direct descendent among the other three.
    {
        // collect triangles by edge
        std::map<std::pair<int, int>, std::vector<int>> tri_by_edge;
        for (auto [a, b] : g.edges)
            for (int c = 1; c <= g.n; ++c) {
                if (c == a || c == b) continue;
                int x = a, y = b, z = c;
                if (z < x) std::swap(x, z);
                if (z < y) std::swap(y, z);
                if (y < x) std::swap(x, y);
                if (is_triangle(g, x, y, z)) tri_by_edge[{a, b}].push_back(c);
            }
        for (auto& [edge, cs] : tri_by_edge) {
            auto [u, v] = edge;
            for (size_t i = 0; i < cs.size(); ++i)
                for (size_t j = i + 1; j < cs.size(); ++j) {
                    int w1 = cs[i], w2 = cs[j];
                    int down = 0;
                    for (int w : {u, w1, w2})
                        if (w > v && has_edge(g, v, w)) ++down;
                    if (down != 1) r.violations.push_back({5, {u, v, w1, w2}});
                }
        }
    }

    r.ok = r.violations.empty();
    return r;
}

bool is_admissible(const Graph& g) { return check_axioms(g).ok; }

std::vector<std::vector<int>> descendent_sets(const Graph& g) {
    std::vector<std::vector<int>> J(g.n + 1);
    for (auto [a, b] : g.edges) J[a].push_back(b);
    return J;
}

std::vector<int> index_set_of_vertex(const Graph& g, int i) {
    std::vector<int> I{i};
    for (auto [a, b] : g.edges)
        if (a == i) I.push_back(b);
    return I;
}

int codim(const Graph& g) { return static_cast<int>(g.edges.size()); }

namespace {

// Pairing compatibility of descendent sets, per vertex pair:
//   b in J_a:     |J_a cap J_b| <= 1
//   b not in J_a: J_a cap J_b empty.
bool sets_compatible(const std::vector<uint32_t>& Jbits, int a, int b) {
    bool edge_ab = (Jbits[a] >> b) & 1u;
    uint32_t common = Jbits[a] & Jbits[b];
    int cnt = __builtin_popcount(common);
    return edge_ab ? cnt <= 1 : cnt == 0;
}

}  // namespace

std::vector<Graph> enumerate_adm(int n, int max_n) {
    if (n < 1) throw InputError("n must be positive");
    if (n > max_n)
        throw UsageError("n=" + std::to_string(n) + " exceeds configured bound " +
                         std::to_string(max_n));
    std::vector<Graph> out;
    std::vector<uint32_t> Jbits(n + 1, 0);
    std::function<void(int)> rec = [&](int a) {
        if (a > n) {
            std::vector<std::pair<int, int>> edges;
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    if ((Jbits[i] >> j) & 1u) edges.emplace_back(i, j);
            out.push_back(Graph{n, std::move(edges)});
            return;
        }
        // choose J_a among subsets of (a, n]
        uint32_t pool = 0;
        for (int j = a + 1; j <= n; ++j) pool |= (1u << j);
        for (uint32_t sub = pool;; sub = (sub - 1) & pool) {
            Jbits[a] = sub;
            bool ok = true;
            for (int a2 = 1; a2 < a && ok; ++a2) ok = sets_compatible(Jbits, a2, a);
            if (ok) rec(a + 1);
            if (sub == 0) break;
        }
        Jbits[a] = 0;
    };
    rec(1);
    std::sort(out.begin(), out.end());
    return out;
}

ExcClass unit_E(int n, int i) {
    ExcClass r;
    r.e.assign(n, 0);
    r.e[i - 1] = 1;
    return r;
}

ExcClass add(const ExcClass& a, const ExcClass& b) {
    ExcClass r = a;
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    r.c += b.c;
    return r;
}

ExcClass sub(const ExcClass& a, const ExcClass& b) {
    ExcClass r = a;
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] -= b.e[i];
    r.c -= b.c;
    return r;
}

long long pair_classes(const ExcClass& a, const ExcClass& b) {
    if (a.e.size() != b.e.size()) throw InputError("class rank mismatch");
    if (a.c != 0 && b.c != 0)
        throw EngineError("pairing with C.C is not numeric in the fiberwise lattice");
    long long s = 0;
    for (size_t i = 0; i < a.e.size(); ++i) s -= a.e[i] * b.e[i];
    return s;
}

std::string class_str(const ExcClass& a) {
    std::string s;
    auto term = [&](long long c, const std::string& name) {
        if (c == 0) return;
        if (!s.empty() && c > 0) s += "+";
        if (c == -1)
            s += "-";
        else if (c != 1)
            s += std::to_string(c);
        s += name;
    };
    term(a.c, "C");
    for (size_t i = 0; i < a.e.size(); ++i) term(a.e[i], "E" + std::to_string(i + 1));
    return s.empty() ? "0" : s;
}

std::vector<ExcClass> type_I_classes(const Graph& g) {
    std::vector<ExcClass> out;
    out.reserve(g.n);
    for (int i = 1; i <= g.n; ++i) out.push_back(unit_E(g.n, i));
    for (auto [a, b] : g.edges) out[a - 1].e[b - 1] -= 1;
    return out;
}

Graph fan_subgraph(const Graph& g, int i) {
    if (i < 1 || i > g.n) throw InputError("vertex out of range");
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : g.edges)
        if (a == i) edges.emplace_back(a, b);
    return Graph{g.n, std::move(edges)};
}

Graph graph_from_classes(const std::vector<ExcClass>& classes) {
    int n = static_cast<int>(classes.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= n; ++i) {
        const ExcClass& e = classes[i - 1];
        if (static_cast<int>(e.e.size()) != n || e.c != 0)
            throw InputError("class " + std::to_string(i) + " is not in span{E_1..E_n}");
        for (int j = 1; j <= n; ++j) {
            long long c = e.e[j - 1];
            if (j == i) {
                if (c != 1) throw InputError("class " + std::to_string(i) + " lacks unit E_i");
            } else if (c == -1) {
                if (j < i)
                    throw InputError("class " + std::to_string(i) +
                                     " is malformed: inf(J)>i violated at E" + std::to_string(j));
                edges.emplace_back(i, j);
            } else if (c != 0) {
                throw InputError("class " + std::to_string(i) + " has coefficient " +
                                 std::to_string(c) + " at E" + std::to_string(j));
            }
        }
    }
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            if (pair_classes(classes[a - 1], classes[b - 1]) < 0)
                throw InputError("negative cross-pairing between classes " + std::to_string(a) +
                                 " and " + std::to_string(b));
    Graph g = make_graph(n, std::move(edges));
    if (!is_admissible(g)) throw EngineError("reconstructed graph fails the axioms");
    return g;
}

bool is_chain_like(const Graph& g) {
    auto J = descendent_sets(g);
    for (int i = 1; i <= g.n; ++i)
        if (J[i].size() > 1) return false;
    return true;
}

Graph restrict_graph(const Graph& g, const std::vector<int>& K) {
    if (K.empty()) throw InputError("restriction to an empty index set");
    std::vector<int> phi(g.n + 1, 0);
    int m = 0;
    std::vector<int> sortedK = K;
    std::sort(sortedK.begin(), sortedK.end());
    for (int k : sortedK) {
        if (k < 1 || k > g.n) throw InputError("restriction index out of range");
        if (phi[k] != 0) throw InputError("duplicate restriction index");
        phi[k] = ++m;
    }
    // e_i -> E_phi(i) - sum_{j in J_i cap K} E_phi(j); rebuild from classes.
    std::vector<ExcClass> cls;
    for (int k : sortedK) {
        ExcClass e = unit_E(m, phi[k]);
        for (auto [a, b] : g.edges)
            if (a == k && phi[b] != 0) e.e[phi[b] - 1] -= 1;
        cls.push_back(std::move(e));
    }
    return graph_from_classes(cls);
}

bool degenerates(const Graph& small, const Graph& big) {
    if (small.n != big.n) throw InputError("degeneration compares graphs of equal n");
    int n = small.n;
    auto es = type_I_classes(small);
    auto eb = type_I_classes(big);
    // The matrix of small classes is unitriangular, so each big class has a
    // unique integer decomposition; effectivity is non-negativity.
    for (const ExcClass& v : eb) {
        std::vector<long long> rem = v.e;
        for (int i = 0; i < n; ++i) {
            long long coef = rem[i];  // coefficient of E_{i+1} decides c_i
            if (coef < 0) return false;
            if (coef != 0)
                for (int j = 0; j < n; ++j) rem[j] -= coef * es[i].e[j];
        }
        for (long long x : rem)
            if (x != 0) throw EngineError("triangular decomposition failed");
    }
    return true;
}

}  // namespace nodalis
