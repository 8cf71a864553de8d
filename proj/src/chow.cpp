#include "nodalis/chow.hpp"

#include <algorithm>
#include <functional>

// Symbolic intersection calculus on the universal space tower.
//
// M_n is blown up from the n-fold product along the partial diagonals, stage
// b = 2..n blowing up the strict transforms of the (a,b) diagonals in
// increasing a; X(a,b) is the total transform of the stage exceptional
// divisor.  The center of stage (a,b) is a cross-section of the partially
// blown-up fibration, so it is isomorphic to the stage-(b-1) tower times the
// untouched factors, and restriction along it is the index substitution
//   H(b),K(b),P(b),C2(b) -> the same at a,   X(a',b) -> X(a',a)  (a'<a).
// Its normal bundle is the relative tangent of the partial fibration along
// the section:
//   c1(N) = -K(a) - sum_{a'<a} X(a',a),   c2(N) = C2(a) - sum_{a'<a} X(a',a)^2.
// Pushing forward along one blowdown is then
//   p_*(x^0.c) = c,  p_*(x^1.c) = 0,
//   p_*(x^j.c) = (-1)^{j-1} iota_*( s_{j-2}(N) . c|_Z ),  j >= 2,
// with s(N) = c(N)^{-1}.  Everything downstream of the rule table is pinned
// by the fiber Euler numbers, the one-node polynomial, and agreement with the
// independently built multiplication-table evaluator.

namespace nodalis {

uint32_t gen_key(Gen g) {
    return (static_cast<uint32_t>(g.kind) << 16) | (static_cast<uint32_t>(g.i) << 8) |
           static_cast<uint32_t>(g.j);
}

Gen gen_of_key(uint32_t k) {
    return Gen{static_cast<GK>((k >> 16) & 0xff), static_cast<uint8_t>((k >> 8) & 0xff),
               static_cast<uint8_t>(k & 0xff)};
}

int gen_grade(GK k) {
    switch (k) {
        case GK::P:
        case GK::C2: return 2;
        default: return 1;
    }
}

std::string gen_str(Gen g) {
    switch (g.kind) {
        case GK::H: return "h" + std::to_string(g.i);
        case GK::K: return "k" + std::to_string(g.i);
        case GK::P: return "p" + std::to_string(g.i);
        case GK::C2: return "c" + std::to_string(g.i);
        case GK::X:
            return "x{" + std::to_string(g.i) + ";" + std::to_string(g.j) + "}";
        case GK::Q: return "q" + std::to_string(g.i);
    }
    return "?";
}

int mono_grade(const Mono& m) {
    int g = 0;
    for (auto [k, e] : m) g += gen_grade(gen_of_key(k).kind) * e;
    return g;
}

namespace {

// A monomial dies when any factor index accumulates pullback degree > 2.
bool factor_degree_ok(const Mono& m) {
    int deg[130] = {0};
    for (auto [k, e] : m) {
        Gen g = gen_of_key(k);
        if (g.kind == GK::H || g.kind == GK::K)
            deg[g.i] += e;
        else if (g.kind == GK::P || g.kind == GK::C2)
            deg[g.i] += 2 * e;
        else
            continue;
        if (deg[g.i] > 2) return false;
    }
    return true;
}

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        } else if (a[i].first < b[j].first) {
            r.push_back(a[i++]);
        } else {
            r.push_back(b[j++]);
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

void add_term(ChowExpr& e, Mono m, Rat c) {
    if (c == 0) return;
    auto [it, fresh] = e.t.emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) e.t.erase(it);
    }
}

}  // namespace

ChowExpr ce_zero(int n) { return ChowExpr{n, {}}; }

ChowExpr ce_const(int n, const Rat& c) {
    ChowExpr e{n, {}};
    if (c != 0) e.t.emplace(Mono{}, c);
    return e;
}

ChowExpr ce_gen(int n, Gen g) {
    if (g.kind == GK::X && !(g.i < g.j)) throw InputError("X(a,b) needs a<b");
    ChowExpr e{n, {}};
    e.t.emplace(Mono{{gen_key(g), 1}}, rat(1));
    return e;
}

ChowExpr add(const ChowExpr& a, const ChowExpr& b) {
    if (a.n != b.n) throw InputError("expression ambient mismatch");
    ChowExpr r = a;
    for (auto& [m, c] : b.t) add_term(r, m, c);
    return r;
}

ChowExpr sub(const ChowExpr& a, const ChowExpr& b) {
    if (a.n != b.n) throw InputError("expression ambient mismatch");
    ChowExpr r = a;
    for (auto& [m, c] : b.t) add_term(r, m, -c);
    return r;
}

ChowExpr mul(const ChowExpr& a, const ChowExpr& b) {
    if (a.n != b.n) throw InputError("expression ambient mismatch");
    int cap = 2 * a.n;
    ChowExpr r{a.n, {}};
    for (auto& [ma, ca] : a.t) {
        int ga = mono_grade(ma);
        for (auto& [mb, cb] : b.t) {
            if (ga + mono_grade(mb) > cap) continue;
            Mono m = mono_mul(ma, mb);
            if (!factor_degree_ok(m)) continue;
            add_term(r, std::move(m), ca * cb);
        }
    }
    return r;
}

ChowExpr scale(const ChowExpr& a, const Rat& c) {
    ChowExpr r{a.n, {}};
    if (c == 0) return r;
    for (auto& [m, coef] : a.t) r.t.emplace(m, coef * c);
    return r;
}

ChowExpr grade_part(const ChowExpr& a, int grade) {
    ChowExpr r{a.n, {}};
    for (auto& [m, c] : a.t)
        if (mono_grade(m) == grade) r.t.emplace(m, c);
    return r;
}

std::string chow_str(const ChowExpr& a) {
    if (a.t.empty()) return "0";
    std::string s;
    for (auto& [m, c] : a.t) {
        if (!s.empty()) s += " + ";
        s += rat_str(c);
        for (auto [k, e] : m) {
            s += "*" + gen_str(gen_of_key(k));
            if (e > 1) s += "^" + std::to_string(e);
        }
    }
    return s;
}

UniversalPoly up_zero() { return {}; }

UniversalPoly up_const(const Rat& c) {
    UniversalPoly p;
    if (c != 0) p.t.emplace(std::array<int, 4>{0, 0, 0, 0}, c);
    return p;
}

UniversalPoly up_mono(int a, int b, int c, int d, const Rat& coef) {
    UniversalPoly p;
    if (coef != 0) p.t.emplace(std::array<int, 4>{a, b, c, d}, coef);
    return p;
}

namespace {
void up_add_term(UniversalPoly& p, std::array<int, 4> k, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = p.t.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) p.t.erase(it);
    }
}
}  // namespace

UniversalPoly add(const UniversalPoly& a, const UniversalPoly& b) {
    UniversalPoly r = a;
    for (auto& [k, c] : b.t) up_add_term(r, k, c);
    return r;
}

UniversalPoly sub(const UniversalPoly& a, const UniversalPoly& b) {
    UniversalPoly r = a;
    for (auto& [k, c] : b.t) up_add_term(r, k, -c);
    return r;
}

UniversalPoly mul(const UniversalPoly& a, const UniversalPoly& b) {
    UniversalPoly r;
    for (auto& [ka, ca] : a.t)
        for (auto& [kb, cb] : b.t)
            up_add_term(r, {ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]}, ca * cb);
    return r;
}

UniversalPoly scale(const UniversalPoly& a, const Rat& c) {
    UniversalPoly r;
    if (c == 0) return r;
    for (auto& [k, coef] : a.t) r.t.emplace(k, coef * c);
    return r;
}

Rat up_eval(const UniversalPoly& p, const Rat& x, const Rat& y, const Rat& z, const Rat& w) {
    Rat s = 0;
    auto powr = [](Rat v, int e) {
        Rat r = 1;
        while (e-- > 0) r *= v;
        return r;
    };
    for (auto& [k, c] : p.t) s += c * powr(x, k[0]) * powr(y, k[1]) * powr(z, k[2]) * powr(w, k[3]);
    return s;
}

int up_homogeneous_degree(const UniversalPoly& p) {
    if (p.t.empty()) return -1;
    int d = -1;
    for (auto& [k, c] : p.t) {
        int kd = k[0] + k[1] + k[2] + k[3];
        if (d == -1) d = kd;
        if (kd != d) return -2;
    }
    return d;
}

std::string up_str(const UniversalPoly& p) {
    if (p.t.empty()) return "0";
    std::string s;
    const char* names[4] = {"x", "y", "z", "w"};
    for (auto& [k, c] : p.t) {
        if (!s.empty()) s += " + ";
        s += rat_str(c);
        for (int i = 0; i < 4; ++i)
            if (k[i]) {
                s += names[i];
                if (k[i] > 1) s += "^" + std::to_string(k[i]);
            }
    }
    return s;
}

// ---------------------------------------------------------------------------
// the elimination engine
// ---------------------------------------------------------------------------

namespace {

using Terms = std::map<Mono, Rat>;

void terms_add(Terms& t, Mono m, Rat c) {
    if (c == 0) return;
    auto [it, fresh] = t.emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) t.erase(it);
    }
}

Terms terms_mul(const Terms& a, const Terms& b) {
    Terms r;
    for (auto& [ma, ca] : a)
        for (auto& [mb, cb] : b) {
            Mono m = mono_mul(ma, mb);
            if (!factor_degree_ok(m)) continue;
            terms_add(r, std::move(m), ca * cb);
        }
    return r;
}

// All normal-bundle data of the stage-(a,b) center, expressed on the center
// (index b already substituted away).
Terms center_c1N(int a) {
    Terms t;
    t.emplace(Mono{{gen_key({GK::K, static_cast<uint8_t>(a)}), 1}}, rat(-1));
    for (int a2 = 1; a2 < a; ++a2)
        t.emplace(Mono{{gen_key({GK::X, static_cast<uint8_t>(a2), static_cast<uint8_t>(a)}), 1}},
                  rat(-1));
    return t;
}

Terms center_c2N(int a) {
    Terms t;
    t.emplace(Mono{{gen_key({GK::C2, static_cast<uint8_t>(a)}), 1}}, rat(1));
    for (int a2 = 1; a2 < a; ++a2)
        t.emplace(Mono{{gen_key({GK::X, static_cast<uint8_t>(a2), static_cast<uint8_t>(a)}), 2}},
                  rat(-1));
    return t;
}

// s_0 = 1, s_k = -(c1 s_{k-1} + c2 s_{k-2}).
Terms center_segre(int a, int k) {
    Terms s0;
    s0.emplace(Mono{}, rat(1));
    if (k == 0) return s0;
    Terms c1 = center_c1N(a), c2 = center_c2N(a);
    Terms prev2;  // s_{-1} = 0
    Terms prev = s0;
    Terms cur;
    for (int i = 1; i <= k; ++i) {
        cur.clear();
        for (auto& [m, c] : terms_mul(c1, prev)) terms_add(cur, m, -c);
        for (auto& [m, c] : terms_mul(c2, prev2)) terms_add(cur, m, -c);
        prev2 = prev;
        prev = cur;
    }
    return prev;
}

// Restriction along the (a,b) section: merge index b into index a.
Mono subst_mono(const Mono& m, int a, int b) {
    Mono r;
    for (auto [k, e] : m) {
        Gen g = gen_of_key(k);
        switch (g.kind) {
            case GK::H:
            case GK::K:
            case GK::P:
            case GK::C2:
                if (g.i == b) g.i = static_cast<uint8_t>(a);
                break;
            case GK::X:
                if (g.j == b) {
                    if (g.i >= a) throw EngineError("unexpected live pair at substitution");
                    g.j = static_cast<uint8_t>(a);
                } else if (g.i == b) {
                    throw EngineError("pair with smaller index b alive at substitution");
                }
                break;
            case GK::Q: break;
        }
        r.emplace_back(gen_key(g), e);
    }
    std::sort(r.begin(), r.end());
    // re-merge duplicates
    Mono out;
    for (auto& p : r) {
        if (!out.empty() && out.back().first == p.first)
            out.back().second += p.second;
        else
            out.push_back(p);
    }
    return out;
}

struct Evaluator {
    const PushRules& rules;
    UniversalPoly acc;
    bool parametric = false;
    std::set<std::string> symbols;

    Rat sign_for_power(int j) const {
        if (j < static_cast<int>(rules.coeff.size())) return rules.coeff[j];
        return (j % 2 == 1) ? rat(1) : rat(-1);  // (-1)^{j-1}
    }

    void eval_product(const Terms& terms, const std::vector<int>& alive) {
        for (auto& [m, coef] : terms) {
            bool param = false;
            int hk[130] = {0}, kk[130] = {0}, pk[130] = {0}, ck[130] = {0};
            bool dead = false;
            for (auto [k, e] : m) {
                Gen g = gen_of_key(k);
                switch (g.kind) {
                    case GK::H: hk[g.i] += e; break;
                    case GK::K: kk[g.i] += e; break;
                    case GK::P: pk[g.i] += e; break;
                    case GK::C2: ck[g.i] += e; break;
                    case GK::X:
                        throw EngineError("non-eliminable monomial pattern: " +
                                          gen_str(g));
                    case GK::Q:
                        param = true;
                        symbols.insert(gen_str(g));
                        break;
                }
            }
            if (param) {
                parametric = true;
                continue;  // reported, never evaluated
            }
            std::array<int, 4> expo{0, 0, 0, 0};
            for (int i : alive) {
                int h = hk[i], k2 = kk[i], p = pk[i], c = ck[i];
                int deg = h + k2 + 2 * p + 2 * c;
                if (deg != 2) {
                    dead = true;
                    break;
                }
                if (h == 2)
                    expo[0] += 1;
                else if (h == 1 && k2 == 1)
                    expo[1] += 1;
                else if (k2 == 2)
                    expo[2] += 1;
                else if (c == 1)
                    expo[3] += 1;
                // p == 1 contributes the unit
            }
            if (dead) continue;
            up_add_term(acc, expo, coef);
        }
    }

    // Eliminate every pair inside [1..t] in reverse blowup order.
    void eval_tower(Terms terms, int t, std::vector<int> alive) {
        for (int b = t; b >= 2; --b) {
            for (int a = b - 1; a >= 1; --a) {
                uint32_t xk = gen_key({GK::X, static_cast<uint8_t>(a), static_cast<uint8_t>(b)});
                std::map<int, Terms> by_power;
                Terms rest;
                for (auto& [m, c] : terms) {
                    int j = 0;
                    Mono m2;
                    for (auto& p : m) {
                        if (p.first == xk)
                            j = p.second;
                        else
                            m2.push_back(p);
                    }
                    if (j == 0)
                        terms_add(rest, m, c);
                    else
                        terms_add(by_power[j], std::move(m2), c);
                }
                for (auto& [j, cj] : by_power) {
                    Rat sgn = sign_for_power(j);
                    if (sgn == 0) continue;
                    Terms sub;
                    for (auto& [m, c] : cj) terms_add(sub, subst_mono(m, a, b), c * sgn);
                    sub = terms_mul(sub, center_segre(a, std::max(j - 2, 0)));
                    std::vector<int> alive2;
                    for (int i : alive)
                        if (i != b) alive2.push_back(i);
                    eval_tower(std::move(sub), b - 1, std::move(alive2));
                }
                terms = std::move(rest);
            }
        }
        eval_product(terms, alive);
    }
};

}  // namespace

PushResult pushforward_to_point(const ChowExpr& e, const PushRules& rules) {
    if (e.n < 1) throw InputError("pushforward needs n >= 1");
    Evaluator ev{rules};
    std::vector<int> alive(e.n);
    for (int i = 0; i < e.n; ++i) alive[i] = i + 1;
    ev.eval_tower(Terms(e.t), e.n, std::move(alive));
    return PushResult{std::move(ev.acc), ev.parametric, std::move(ev.symbols)};
}

ChowExpr class_of_stratum(const Graph& g) {
    ChowExpr r = ce_const(g.n, rat(1));
    auto J = descendent_sets(g);
    for (int k = 1; k <= g.n; ++k) {
        if (J[k].empty()) continue;  // -1 classes contribute the unit factor
        std::vector<int> js = J[k];
        std::sort(js.begin(), js.end());
        for (size_t s = 0; s < js.size(); ++s) {
            ChowExpr f = ce_gen(g.n, {GK::X, static_cast<uint8_t>(k),
                                      static_cast<uint8_t>(js[s])});
            for (size_t r2 = 0; r2 < s; ++r2)
                f = sub(f, ce_gen(g.n, {GK::X, static_cast<uint8_t>(std::min(js[r2], js[s])),
                                        static_cast<uint8_t>(std::max(js[r2], js[s]))}));
            r = mul(r, f);
        }
    }
    return r;
}

ChowExpr relative_tangent_c1(int n, int l) {
    ChowExpr r = scale(ce_gen(n, {GK::K, static_cast<uint8_t>(l)}), rat(-1));
    for (int a = 1; a < l; ++a)
        r = sub(r, ce_gen(n, {GK::X, static_cast<uint8_t>(a), static_cast<uint8_t>(l)}));
    return r;
}

ChowExpr relative_tangent_c2(int n, int l) {
    ChowExpr r = ce_gen(n, {GK::C2, static_cast<uint8_t>(l)});
    for (int a = 1; a < l; ++a) {
        ChowExpr x = ce_gen(n, {GK::X, static_cast<uint8_t>(a), static_cast<uint8_t>(l)});
        r = sub(r, mul(x, x));
    }
    return r;
}

namespace {

using SKey = std::array<int, 3>;  // exponents of (lambda, e1, e2)

// Total Chern class of Line(lambda) (x) S^{m-1}(O + T*), T* of rank two with
// Chern roots summing to e1, multiplying to e2.  Expanded once over Z and then
// evaluated on the actual classes.
std::map<SKey, long long> symmetric_chern_template(int m) {
    // polynomial in (lambda, alpha, beta), dense over small exponents
    using APoly = std::map<std::array<int, 3>, long long>;
    APoly prod{{{0, 0, 0}, 1}};
    for (int i = 0; i + 0 <= m - 1; ++i)
        for (int j = 0; i + j <= m - 1; ++j) {
            APoly f{{{0, 0, 0}, 1}, {{1, 0, 0}, 1}};
            if (i) f[{0, 1, 0}] = i;
            if (j) f[{0, 0, 1}] = j;
            APoly next;
            for (auto& [ka, ca] : prod)
                for (auto& [kb, cb] : f) {
                    std::array<int, 3> k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
                    next[k] += ca * cb;
                }
            std::erase_if(next, [](auto& kv) { return kv.second == 0; });
            prod = std::move(next);
        }
    // rewrite the (alpha,beta)-symmetric part through e1, e2 using power sums
    int maxk = 0;
    for (auto& [k, c] : prod) maxk = std::max(maxk, std::max(k[1], k[2]));
    using EPoly = std::map<std::array<int, 2>, long long>;  // (e1,e2) exponents
    std::vector<EPoly> ps(maxk + 1);
    ps[0][{0, 0}] = 2;
    if (maxk >= 1) ps[1][{1, 0}] = 1;
    for (int k = 2; k <= maxk; ++k) {
        for (auto& [e, c] : ps[k - 1]) ps[k][{e[0] + 1, e[1]}] += c;
        for (auto& [e, c] : ps[k - 2]) ps[k][{e[0], e[1] + 1}] -= c;
        std::erase_if(ps[k], [](auto& kv) { return kv.second == 0; });
    }
    std::map<SKey, long long> out;
    for (auto& [k, c] : prod) {
        int dl = k[0], da = k[1], db = k[2];
        if (da < db) continue;  // handled together with the mirror term
        if (da == db) {
            out[{dl, 0, da}] += c;
        } else {
            auto mirror = prod.find({dl, db, da});
            long long cm = (mirror == prod.end()) ? 0 : mirror->second;
            if (cm != c) throw EngineError("asymmetric Chern template");
            // alpha^da beta^db + alpha^db beta^da = e2^db (alpha^{da-db}+beta^{da-db})
            for (auto& [e, pc] : ps[da - db]) out[{dl, e[0], e[1] + db}] += c * pc;
        }
    }
    std::erase_if(out, [](auto& kv) { return kv.second == 0; });
    return out;
}

ChowExpr ce_pow(const ChowExpr& a, int e) {
    ChowExpr r = ce_const(a.n, rat(1));
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

}  // namespace

ChowExpr obstruction_total_chern(int n, const Mult& m) {
    validate_mult(m, n);
    return obstruction_total_chern_vec(n, m);
}

ChowExpr obstruction_total_chern_vec(int n, const std::vector<long long>& m) {
    if (static_cast<int>(m.size()) != n) throw InputError("coefficient vector length mismatch");
    for (long long v : m)
        if (v < 0) throw InputError("negative exceptional coefficient");
    ChowExpr total = ce_const(n, rat(1));
    for (int l = 1; l <= n; ++l) {
        if (m[l - 1] == 0) continue;
        ChowExpr lambda = ce_gen(n, {GK::H, static_cast<uint8_t>(l)});
        for (int a = 1; a < l; ++a)
            lambda = sub(lambda, scale(ce_gen(n, {GK::X, static_cast<uint8_t>(a),
                                                  static_cast<uint8_t>(l)}),
                                       rat(m[a - 1])));
        // cotangent: negate c1 of the relative tangent
        ChowExpr t1 = scale(relative_tangent_c1(n, l), rat(-1));
        ChowExpr t2 = relative_tangent_c2(n, l);
        ChowExpr factor = ce_zero(n);
        for (auto& [k, c] : symmetric_chern_template(static_cast<int>(m[l - 1]))) {
            ChowExpr term = scale(ce_pow(lambda, k[0]), rat(c));
            term = mul(term, ce_pow(t1, k[1]));
            term = mul(term, ce_pow(t2, k[2]));
            factor = add(factor, term);
        }
        total = mul(total, factor);
    }
    return total;
}

UniversalPoly fiber_euler_check(int n, const PushRules& rules) {
    // c2 of the relative tangent of M_{n+1} -> M_n against the class of a
    // generic fiber (a point condition on each of the first n factors).
    int N = n + 1;
    ChowExpr e = relative_tangent_c2(N, N);
    for (int i = 1; i <= n; ++i) e = mul(e, ce_gen(N, {GK::P, static_cast<uint8_t>(i)}));
    PushResult r = pushforward_to_point(e, rules);
    if (r.parametric) throw EngineError("fiber Euler check cannot be parametric");
    return r.poly;
}

}  // namespace nodalis
