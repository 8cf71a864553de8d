#include "nodalis/oracle_ring.hpp"

#include <algorithm>

// Stage-by-stage based rings.
//
// For a codimension-two blowup with center Z and exceptional divisor
// D = P(N), the ring of the blown-up space is spanned by pullbacks together
// with the pushed classes  E(b) = i_*(g^*b)  and  F(b) = i_*(g^*b . xi),
// xi = c1(O_N(1)), b running over a basis of the center ring.  With the
// Grothendieck relation xi^2 = -c1(N) xi - c2(N) and D|_D = -xi the products
// close:
//   p^*a . E(b) = E(a|_Z b)         p^*a . F(b) = F(a|_Z b)
//   E(b)E(b') = -F(bb')
//   E(b)F(b') = E(bb' c2) + F(bb' c1)
//   F(b)F(b') = -E(bb' c1 c2) - F(bb' (c1^2 - c2))
// and the integrals are  int p^*a = int a,  int E(b) = 0,  int F(b) = int b.
//
// Restriction of a divisor-supported class to its own divisor:
//   p^*a |-> (a|_Z, 0),  E(b) |-> (0, -b),  F(b) |-> (b c2, b c1)
// written as pairs (u, v) for g^*u + g^*v.xi; these pairs feed the
// construction of the later centers' restriction maps.

namespace nodalis {

namespace {

using Vec = std::map<int, Rat>;  // sparse vector over a ring basis

void vadd(Vec& a, int id, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = a.emplace(id, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) a.erase(it);
    }
}

void vadd(Vec& a, const Vec& b, const Rat& scale = Rat(1)) {
    for (auto& [id, c] : b) vadd(a, id, c * scale);
}

struct Ring {
    int cdim = 0;
    std::vector<int> grade;
    std::vector<UniversalPoly> integ;
    // mul[i][j], computed eagerly; zero vectors stay empty
    std::vector<std::vector<Vec>> mul;
    std::map<uint32_t, Vec> gens;

    int size() const { return static_cast<int>(grade.size()); }

    Vec mul_vec(const Vec& a, const Vec& b) const {
        Vec r;
        for (auto& [i, ca] : a)
            for (auto& [j, cb] : b) vadd(r, mul[i][j], ca * cb);
        return r;
    }

    UniversalPoly integrate(const Vec& v) const {
        UniversalPoly p;
        for (auto& [i, c] : v) p = add(p, scale(integ[i], c));
        return p;
    }
};

// ---- the surface ring A(M): 1, h, k, h2, hk, k2, p, c ----

enum SElt { S1 = 0, SH, SK, SH2, SHK, SK2, SP, SC, SCOUNT };

int surf_grade(int e) { return e == S1 ? 0 : (e == SH || e == SK) ? 1 : 2; }

// product table of the surface basis; -1 means zero
int surf_mul(int a, int b) {
    if (a == S1) return b;
    if (b == S1) return a;
    if (surf_grade(a) + surf_grade(b) > 2) return -1;
    if (a == SH && b == SH) return SH2;
    if (a == SK && b == SK) return SK2;
    if ((a == SH && b == SK) || (a == SK && b == SH)) return SHK;
    return -1;
}

UniversalPoly surf_integ(int e) {
    switch (e) {
        case SH2: return up_mono(1, 0, 0, 0, rat(1));
        case SHK: return up_mono(0, 1, 0, 0, rat(1));
        case SK2: return up_mono(0, 0, 1, 0, rat(1));
        case SP: return up_const(rat(1));
        case SC: return up_mono(0, 0, 0, 1, rat(1));
        default: return up_zero();
    }
}

// Product of several surface factors; `slots[i]` lists the vertex labels whose
// pullback generators land in factor i (two labels on a diagonal slot).
Ring product_ring(const std::vector<std::vector<int>>& slots) {
    int nf = static_cast<int>(slots.size());
    int nb = 1;
    for (int i = 0; i < nf; ++i) nb *= SCOUNT;
    Ring r;
    r.cdim = 2 * nf;
    r.grade.resize(nb);
    r.integ.resize(nb);
    auto decode = [&](int id) {
        std::vector<int> t(nf);
        for (int i = 0; i < nf; ++i) {
            t[i] = id % SCOUNT;
            id /= SCOUNT;
        }
        return t;
    };
    for (int id = 0; id < nb; ++id) {
        auto t = decode(id);
        int g = 0;
        UniversalPoly ip = up_const(rat(1));
        for (int i = 0; i < nf; ++i) {
            g += surf_grade(t[i]);
            ip = mul(ip, surf_integ(t[i]));
        }
        r.grade[id] = g;
        r.integ[id] = (g == r.cdim) ? ip : up_zero();
    }
    r.mul.assign(nb, std::vector<Vec>(nb));
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) {
            auto ta = decode(a), tb = decode(b);
            int id = 0, mult = 1;
            bool zero = false;
            for (int i = 0; i < nf; ++i) {
                int p = surf_mul(ta[i], tb[i]);
                if (p < 0) {
                    zero = true;
                    break;
                }
                id += p * mult;
                mult *= SCOUNT;
            }
            if (!zero) r.mul[a][b].emplace(id, rat(1));
        }
    // generator embeddings
    for (int i = 0; i < nf; ++i) {
        int mult = 1;
        for (int j = 0; j < i; ++j) mult *= SCOUNT;
        for (int v : slots[i]) {
            auto put = [&](GK kind, int selt) {
                Vec w;
                w.emplace(selt * mult, rat(1));
                r.gens[gen_key({kind, static_cast<uint8_t>(v)})] = w;
            };
            put(GK::H, SH);
            put(GK::K, SK);
            put(GK::P, SP);
            put(GK::C2, SC);
        }
    }
    return r;
}

// ---- blowup step ----

struct Blown {
    Ring ring;
    // id layout: [0, nA) pullbacks, [nA, nA+nZ) E, [nA+nZ, nA+2nZ) F
    int nA = 0, nZ = 0;
};

Blown blowup_ring(const Ring& A, const Ring& Z, const std::vector<Vec>& restr, const Vec& c1N,
                  const Vec& c2N, uint32_t new_gen) {
    Blown B;
    B.nA = A.size();
    B.nZ = Z.size();
    Ring& R = B.ring;
    int nb = B.nA + 2 * B.nZ;
    R.cdim = A.cdim;
    if (Z.cdim != A.cdim - 2) throw EngineError("center of wrong dimension");
    R.grade.resize(nb);
    R.integ.resize(nb);
    for (int i = 0; i < B.nA; ++i) {
        R.grade[i] = A.grade[i];
        R.integ[i] = A.integ[i];
    }
    for (int i = 0; i < B.nZ; ++i) {
        R.grade[B.nA + i] = Z.grade[i] + 1;
        R.integ[B.nA + i] = up_zero();
        R.grade[B.nA + B.nZ + i] = Z.grade[i] + 2;
        R.integ[B.nA + B.nZ + i] = Z.integ[i];
    }
    auto liftE = [&](const Vec& z) {
        Vec r;
        for (auto& [i, c] : z) vadd(r, B.nA + i, c);
        return r;
    };
    auto liftF = [&](const Vec& z) {
        Vec r;
        for (auto& [i, c] : z) vadd(r, B.nA + B.nZ + i, c);
        return r;
    };
    Vec c1c2 = Z.mul_vec(c1N, c2N);
    Vec c1sq_minus_c2 = Z.mul_vec(c1N, c1N);
    for (auto& [i, c] : c2N) vadd(c1sq_minus_c2, i, -c);

    R.mul.assign(nb, std::vector<Vec>(nb));
    auto unit = [&](int i) {
        Vec v;
        v.emplace(i, rat(1));
        return v;
    };
    for (int i = 0; i < nb; ++i)
        for (int j = i; j < nb; ++j) {
            Vec out;
            bool iE = i >= B.nA && i < B.nA + B.nZ, iF = i >= B.nA + B.nZ;
            bool jE = j >= B.nA && j < B.nA + B.nZ, jF = j >= B.nA + B.nZ;
            if (!iE && !iF && !jE && !jF) {
                for (auto& [k, c] : A.mul[i][j]) vadd(out, k, c);
            } else if (!iE && !iF) {
                // pullback times divisor class
                Vec zb = Z.mul_vec(restr[i], unit(j - (jE ? B.nA : B.nA + B.nZ)));
                out = jE ? liftE(zb) : liftF(zb);
            } else {
                int zi = i - (iE ? B.nA : B.nA + B.nZ);
                int zj = j - (jE ? B.nA : B.nA + B.nZ);
                Vec bb = Z.mul_vec(unit(zi), unit(zj));
                if (iE && jE) {
                    vadd(out, liftF(bb), rat(-1));
                } else if (iF && jF) {
                    vadd(out, liftE(Z.mul_vec(bb, c1c2)), rat(-1));
                    vadd(out, liftF(Z.mul_vec(bb, c1sq_minus_c2)), rat(-1));
                } else {
                    vadd(out, liftE(Z.mul_vec(bb, c2N)));
                    vadd(out, liftF(Z.mul_vec(bb, c1N)));
                }
            }
            // prune by dimension
            std::erase_if(out, [&](auto& kv) { return R.grade[kv.first] > R.cdim; });
            R.mul[i][j] = out;
            R.mul[j][i] = std::move(out);
        }
    for (auto& [k, v] : A.gens) R.gens[k] = v;  // pullback ids unchanged
    {
        Vec x = liftE(unit(0));
        // basis id 0 of every ring built here is its unit
        if (Z.grade[0] != 0) throw EngineError("center ring unit is not basis 0");
        R.gens[new_gen] = x;
    }
    return B;
}

// restriction of a divisor class to its own divisor, as (u, v) pairs
struct DivRestrict {
    std::vector<std::pair<Vec, Vec>> table;  // per basis id of the blown ring
};

DivRestrict divisor_restriction(const Blown& B, const Ring& Z, const std::vector<Vec>& restr,
                                const Vec& c1N, const Vec& c2N) {
    DivRestrict d;
    d.table.resize(B.ring.size());
    for (int i = 0; i < B.ring.size(); ++i) {
        if (i < B.nA) {
            d.table[i] = {restr[i], {}};
        } else if (i < B.nA + B.nZ) {
            Vec v;
            vadd(v, i - B.nA, rat(-1));
            d.table[i] = {{}, v};
        } else {
            Vec u;
            u.emplace(i - B.nA - B.nZ, rat(1));
            d.table[i] = {Z.mul_vec(u, c2N), Z.mul_vec(u, c1N)};
        }
    }
    return d;
}

}  // namespace

struct AltEvaluator::Impl {
    Ring ring;

    // expand a monomial into the basis
    Vec embed(const Mono& m) const {
        Vec acc;
        acc.emplace(0, rat(1));
        for (auto [k, e] : m) {
            auto it = ring.gens.find(k);
            if (it == ring.gens.end())
                throw InputError("alt evaluator cannot embed generator " +
                                 gen_str(gen_of_key(k)));
            for (int t = 0; t < e; ++t) acc = ring.mul_vec(acc, it->second);
        }
        return acc;
    }
};

AltEvaluator::AltEvaluator(int n) : n_(n), impl_(new Impl) {
    if (n < 1 || n > 3) throw InputError("alt evaluator supports n <= 3");
    if (n == 1) {
        impl_->ring = product_ring({{1}});
        return;
    }
    // the two-index tower: blow up the diagonal of M x M
    auto build_t2 = [&](int i1, int i2, int extra) {
        std::vector<std::vector<int>> slots = {{i1}, {i2}};
        if (extra) slots.push_back({extra});
        Ring base = product_ring(slots);
        std::vector<std::vector<int>> zslots = {{i1, i2}};
        if (extra) zslots.push_back({extra});
        Ring zc = product_ring(zslots);
        // restriction: merge the two factors
        int nb = base.size();
        std::vector<Vec> restr(nb);
        int nf = extra ? 3 : 2;
        for (int id = 0; id < nb; ++id) {
            std::vector<int> t(nf);
            int v = id;
            for (int f = 0; f < nf; ++f) {
                t[f] = v % SCOUNT;
                v /= SCOUNT;
            }
            int p = surf_mul(t[0], t[1]);
            if (p < 0) continue;
            restr[id].emplace(p + (extra ? t[2] * SCOUNT : 0), rat(1));
        }
        Vec c1N, c2N;  // -k and c on the diagonal slot
        vadd(c1N, SK, rat(-1));
        vadd(c2N, SC, rat(1));
        auto B = blowup_ring(base, zc, restr, c1N, c2N,
                             gen_key({GK::X, static_cast<uint8_t>(i1),
                                      static_cast<uint8_t>(i2)}));
        return std::make_tuple(B, zc, restr, c1N, c2N);
    };

    if (n == 2) {
        impl_->ring = std::get<0>(build_t2(1, 2, 0)).ring;
        return;
    }

    // n == 3: stages (1,2), (1,3), (2,3)
    auto [B12, z12, restr12, c1_12, c2_12] = build_t2(1, 2, 3);
    // the two-index tower ring on {1,2} serves as the center of both stage
    // (1,3) and stage (2,3)
    auto [T2, zT2, restrT2, c1_T2, c2_T2] = build_t2(1, 2, 0);
    DivRestrict T2div = divisor_restriction(T2, zT2, restrT2, c1_T2, c2_T2);
    const Ring& RT2 = T2.ring;

    // surface-element embedding at a vertex of the T2 ring
    auto embed_surf = [&](int vertex, int selt) {
        Vec acc;
        acc.emplace(0, rat(1));
        auto gen_at = [&](GK kind) {
            return RT2.gens.at(gen_key({kind, static_cast<uint8_t>(vertex)}));
        };
        switch (selt) {
            case S1: break;
            case SH: acc = gen_at(GK::H); break;
            case SK: acc = gen_at(GK::K); break;
            case SP: acc = gen_at(GK::P); break;
            case SC: acc = gen_at(GK::C2); break;
            case SH2: acc = RT2.mul_vec(gen_at(GK::H), gen_at(GK::H)); break;
            case SHK: acc = RT2.mul_vec(gen_at(GK::H), gen_at(GK::K)); break;
            case SK2: acc = RT2.mul_vec(gen_at(GK::K), gen_at(GK::K)); break;
        }
        return acc;
    };

    // restriction of the stage-(1,2) blown ring to the center of stage (a,3):
    // merge vertex 3 into vertex `a`, land in the T2 ring
    auto make_restr3 = [&](int a) {
        std::vector<Vec> r(B12.ring.size());
        for (int i = 0; i < B12.ring.size(); ++i) {
            if (i < B12.nA) {
                // product symbol (b1, b2, b3)
                int v = i;
                int b1 = v % SCOUNT;
                v /= SCOUNT;
                int b2 = v % SCOUNT;
                v /= SCOUNT;
                int b3 = v % SCOUNT;
                Vec acc = embed_surf(1, b1);
                acc = RT2.mul_vec(acc, embed_surf(2, b2));
                acc = RT2.mul_vec(acc, embed_surf(a, b3));
                r[i] = acc;
            } else {
                // E or F over the (1,2)-diagonal center (slots {merged, 3});
                // merging 3 into either vertex lands in the merged slot
                bool isF = i >= B12.nA + B12.nZ;
                int zi = i - (isF ? B12.nA + B12.nZ : B12.nA);
                int u = zi % SCOUNT;
                int b3 = zi / SCOUNT;
                int p = surf_mul(u, b3);
                if (p < 0) continue;
                // E/F of the T2 ring over A(M)-element p
                r[i].emplace((isF ? T2.nA + T2.nZ : T2.nA) + p, rat(1));
            }
        }
        return r;
    };

    Vec c1_13 = RT2.gens.at(gen_key({GK::K, 1}));
    for (auto& [k, c] : c1_13) c = -c;
    Vec c2_13 = RT2.gens.at(gen_key({GK::C2, 1}));
    Blown B13 = blowup_ring(B12.ring, RT2, make_restr3(1), c1_13, c2_13,
                            gen_key({GK::X, 1, 3}));

    // stage (2,3): restriction of B13's basis to the T2 ring
    std::vector<Vec> restr23(B13.ring.size());
    std::vector<Vec> base23 = make_restr3(2);
    for (int i = 0; i < B13.ring.size(); ++i) {
        if (i < B13.nA) {
            restr23[i] = base23[i];
        } else {
            bool isF = i >= B13.nA + B13.nZ;
            int zi = i - (isF ? B13.nA + B13.nZ : B13.nA);
            // argument lives on the T2 ring; restrict it to the (1,2)
            // exceptional divisor of T2 and push back in as E/F there
            auto [u, v] = T2div.table[zi];
            if (isF) {
                // extra xi factor: (u, v) . xi = (-v c2, u - v c1)
                Vec u2 = zT2.mul_vec(v, c2_T2);
                for (auto& [k, c] : u2) c = -c;
                Vec v2 = u;
                vadd(v2, zT2.mul_vec(v, c1_T2), rat(-1));
                u = std::move(u2);
                v = std::move(v2);
            }
            Vec out;
            for (auto& [k, c] : u) vadd(out, T2.nA + k, c);
            for (auto& [k, c] : v) vadd(out, T2.nA + T2.nZ + k, c);
            restr23[i] = out;
        }
    }
    Vec c1_23 = RT2.gens.at(gen_key({GK::K, 2}));
    for (auto& [k, c] : c1_23) c = -c;
    vadd(c1_23, RT2.gens.at(gen_key({GK::X, 1, 2})), rat(-1));
    Vec x12 = RT2.gens.at(gen_key({GK::X, 1, 2}));
    Vec c2_23 = RT2.gens.at(gen_key({GK::C2, 2}));
    vadd(c2_23, RT2.mul_vec(x12, x12), rat(-1));
    Blown B23 = blowup_ring(B13.ring, RT2, restr23, c1_23, c2_23, gen_key({GK::X, 2, 3}));
    impl_->ring = std::move(B23.ring);
}

AltEvaluator::~AltEvaluator() = default;

UniversalPoly AltEvaluator::eval(const ChowExpr& e) const {
    if (e.n != n_) throw InputError("alt evaluator ambient mismatch");
    UniversalPoly out;
    for (auto& [m, c] : e.t) {
        for (auto [k, exp] : m)
            if (gen_of_key(k).kind == GK::Q)
                throw InputError("alt evaluator cannot integrate symbolic parameters");
        out = add(out, scale(impl_->ring.integrate(impl_->embed(m)), c));
    }
    return out;
}

UniversalPoly alt_pushforward(const ChowExpr& e, int n) { return AltEvaluator(n).eval(e); }

}  // namespace nodalis
