#include "cq/bivariate.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace cq {

namespace {

// F_q[X][Y]: entry j is the Y^j coefficient, a univariate polynomial in X
using YPoly = std::vector<FqPoly>;

int deg_y(const YPoly& f) { return static_cast<int>(f.size()) - 1; }

int deg_x(const YPoly& f) {
    int d = -1;
    for (auto& c : f) d = std::max(d, c.degree());
    return d;
}

bool ypoly_zero(const YPoly& f) {
    for (auto& c : f)
        if (!c.is_zero()) return false;
    return true;
}

void ytrim(YPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

YPoly ypoly_from(const Polynomial<FqElem>& P) {
    const Field& F = P.ctx();
    YPoly out(P.degree_in(1) + 1, FqPoly(F));
    for (auto& [m, c] : P.terms()) {
        FqPoly& cy = out[m[1]];
        std::vector<FqElem> cc = cy.coeffs();
        if (static_cast<int>(cc.size()) <= m[0]) cc.resize(m[0] + 1, FqElem::zero(F));
        cc[m[0]] = cc[m[0]] + c;
        cy = FqPoly(F, std::move(cc));
    }
    ytrim(out);
    return out;
}

Polynomial<FqElem> ypoly_to_poly(const Field& F, const YPoly& f) {
    Polynomial<FqElem> out(F, 2);
    for (size_t j = 0; j < f.size(); j++) {
        for (int i = 0; i <= f[j].degree(); i++) {
            const FqElem& c = f[j].coeffs()[i];
            if (c.is_zero()) continue;
            out.add_term({static_cast<uint8_t>(i), static_cast<uint8_t>(j)}, c);
        }
    }
    return out;
}

YPoly ypoly_mul(const Field& F, const YPoly& a, const YPoly& b, int trunc_x = -1) {
    if (ypoly_zero(a) || ypoly_zero(b)) return {};
    YPoly c(a.size() + b.size() - 1, FqPoly(F));
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); j++) {
            if (b[j].is_zero()) continue;
            FqPoly t = a[i] * b[j];
            if (trunc_x >= 0 && t.degree() >= trunc_x) {
                std::vector<FqElem> tc(t.coeffs().begin(), t.coeffs().begin() + trunc_x);
                t = FqPoly(F, std::move(tc));
            }
            c[i + j] = c[i + j] + t;
        }
    }
    ytrim(c);
    return c;
}

YPoly ypoly_sub(const Field& F, const YPoly& a, const YPoly& b) {
    YPoly c(std::max(a.size(), b.size()), FqPoly(F));
    for (size_t i = 0; i < c.size(); i++) {
        if (i < a.size()) c[i] = c[i] + a[i];
        if (i < b.size()) c[i] = c[i] - b[i];
    }
    ytrim(c);
    return c;
}

YPoly ypoly_scale(const YPoly& a, const FqElem& s) {
    YPoly c = a;
    for (auto& ci : c) ci = ci * s;
    ytrim(c);
    return c;
}

// exact division by a divisor whose leading Y-coefficient is a nonzero
// constant; throws when the division leaves a remainder
YPoly ypoly_exact_div(const Field& F, YPoly a, const YPoly& b) {
    if (ypoly_zero(b)) throw DivisionByZero("ypoly_exact_div by zero");
    if (b.back().degree() != 0) throw Error("ypoly_exact_div: divisor lead not constant (internal)");
    const FqElem lead_inv = b.back().coeffs()[0].inv();
    ytrim(a);
    if (ypoly_zero(a)) return {};
    if (deg_y(a) < deg_y(b)) throw NonIntegralResult("ypoly_exact_div: no quotient");
    YPoly q(deg_y(a) - deg_y(b) + 1, FqPoly(F));
    while (!ypoly_zero(a) && deg_y(a) >= deg_y(b)) {
        FqPoly c = a.back() * lead_inv;
        int shift = deg_y(a) - deg_y(b);
        q[shift] = q[shift] + c;
        for (size_t i = 0; i < b.size(); i++) a[shift + i] = a[shift + i] - c * b[i];
        if (!a.back().is_zero()) throw NonIntegralResult("ypoly_exact_div: inexact");
        ytrim(a);
    }
    if (!ypoly_zero(a)) throw NonIntegralResult("ypoly_exact_div: nonzero remainder");
    ytrim(q);
    return q;
}

bool ypoly_divides(const Field& F, const YPoly& d, const YPoly& a) {
    try {
        ypoly_exact_div(F, a, d);
        return true;
    } catch (const NonIntegralResult&) {
        return false;
    }
}

FqPoly content_x(const Field& F, const YPoly& a) {
    FqPoly g(F);
    for (auto& c : a) g = poly_gcd(g, c);
    return g;
}

YPoly primitive_part(const Field& F, const YPoly& a) {
    if (ypoly_zero(a)) return {};
    FqPoly c = content_x(F, a);
    if (c.degree() == 0) return ypoly_scale(a, c.coeffs()[0].inv());
    YPoly out = a;
    for (auto& ci : out) {
        auto [q, r] = ci.divmod(c);
        assert(r.is_zero());
        ci = std::move(q);
    }
    return out;
}

// pseudo-remainder of a by b in the Y variable
YPoly ypoly_prem(const Field& F, YPoly a, const YPoly& b) {
    const FqPoly lb = b.back();
    int steps = deg_y(a) - deg_y(b) + 1;
    for (int s = 0; s < steps && !ypoly_zero(a) && deg_y(a) >= deg_y(b); s++) {
        FqPoly la = a.back();
        int shift = deg_y(a) - deg_y(b);
        YPoly scaled(a.size(), FqPoly(F));
        for (size_t i = 0; i < a.size(); i++) scaled[i] = a[i] * lb;
        for (size_t i = 0; i < b.size(); i++) scaled[shift + i] = scaled[shift + i] - la * b[i];
        a = std::move(scaled);
        ytrim(a);
    }
    return a;
}

// gcd in F_q[X][Y] via a primitive pseudo-remainder sequence; the result is
// primitive, and for divisors of a Y-monic polynomial the lead is constant
YPoly ypoly_gcd(const Field& F, YPoly a, YPoly b) {
    FqPoly ca = content_x(F, a), cb = content_x(F, b);
    a = primitive_part(F, a);
    b = primitive_part(F, b);
    if (deg_y(a) < deg_y(b)) std::swap(a, b);
    while (!ypoly_zero(b)) {
        YPoly r = ypoly_prem(F, a, b);
        a = std::move(b);
        b = primitive_part(F, r);
    }
    // fold in the content gcd so gcd(content) * gcd(primitive) is returned
    FqPoly cg = poly_gcd(ca, cb);
    if (cg.degree() > 0) {
        YPoly scaled(a.size(), FqPoly(F));
        for (size_t i = 0; i < a.size(); i++) scaled[i] = a[i] * cg;
        return scaled;
    }
    return a;
}

FqPoly ypoly_specialize(const Field& F, const YPoly& a, const FqElem& x0) {
    std::vector<FqElem> c;
    c.reserve(a.size());
    for (auto& ci : a) c.push_back(ci.eval(x0));
    return FqPoly(F, std::move(c));
}

YPoly ypoly_shift_x(const Field& F, const YPoly& a, const FqElem& x0) {
    YPoly out = a;
    for (auto& c : out) c = c.shift_arg(x0);
    (void)F;
    return out;
}

// ---------------------------------------------------------------------------
// squarefree monic-in-Y lifting core
// ---------------------------------------------------------------------------

std::vector<YPoly> lift_factor_squarefree(const Field& F, const YPoly& W, uint64_t seed);

// factors of W over the extension, merged along Frobenius orbits and cast
// back down to F_q
std::vector<YPoly> factor_via_extension(const Field& F, const YPoly& W, uint64_t seed) {
    const int m = deg_y(W);
    const int bad_bound = 2 * m * m + 1;
    for (int c = 2; c <= 6; c++) {
        if (F->k * c > 24) break;
        mpz_class qc;
        mpz_pow_ui(qc.get_mpz_t(), F->q.get_mpz_t(), c);
        if (qc <= bad_bound && c < 6) continue;
        Field big = FqField::make(F->p, F->k * c);
        FieldHom emb(F, big);
        // reverse table for casting back down (q is small on this branch)
        std::map<std::vector<int64_t>, FqElem> down;
        for (uint64_t i = 0; i < F->q64; i++) {
            FqElem a = FqElem::from_index(F, i);
            down.emplace(emb.map(a).rep(), a);
        }
        YPoly Wb;
        for (auto& ci : W) Wb.push_back(emb.map_poly(ci));
        auto big_factors = lift_factor_squarefree(big, Wb, seed ^ 0x657874ull);
        // Frobenius a -> a^q permutes the factors; orbit products live over F_q
        auto frob = [&](const YPoly& f) {
            YPoly out;
            for (auto& cy : f) {
                std::vector<FqElem> cc;
                for (auto& a : cy.coeffs()) cc.push_back(a.pow(F->q));
                out.push_back(FqPoly(big, std::move(cc)));
            }
            return out;
        };
        auto key_of = [](const YPoly& f) {
            std::vector<std::vector<int64_t>> key;
            for (auto& cy : f)
                for (auto& a : cy.coeffs()) key.push_back(a.rep());
            return key;
        };
        std::map<std::vector<std::vector<int64_t>>, size_t> index;
        for (size_t i = 0; i < big_factors.size(); i++) index[key_of(big_factors[i])] = i;
        std::vector<bool> used(big_factors.size(), false);
        std::vector<YPoly> out;
        for (size_t i = 0; i < big_factors.size(); i++) {
            if (used[i]) continue;
            YPoly orbit_prod = big_factors[i];
            used[i] = true;
            YPoly cur = frob(big_factors[i]);
            while (true) {
                auto it = index.find(key_of(cur));
                if (it == index.end()) throw Error("factor orbit escaped the factor set (internal)");
                if (it->second == i) break;
                used[it->second] = true;
                orbit_prod = ypoly_mul(big, orbit_prod, cur);
                cur = frob(cur);
            }
            // cast down coefficientwise
            YPoly small;
            for (auto& cy : orbit_prod) {
                std::vector<FqElem> cc;
                for (auto& a : cy.coeffs()) {
                    auto it = down.find(a.rep());
                    if (it == down.end()) throw Error("orbit product not defined over F_q (internal)");
                    cc.push_back(it->second);
                }
                small.push_back(FqPoly(F, std::move(cc)));
            }
            out.push_back(std::move(small));
        }
        return out;
    }
    throw Error("factor_via_extension: no usable extension (internal)");
}

std::vector<YPoly> lift_factor_squarefree(const Field& F, const YPoly& W, uint64_t seed) {
    const int m = deg_y(W);
    if (m <= 0) throw Error("lift_factor_squarefree: constant input (internal)");
    if (m == 1) return {W};

    // specialization: W(x0, Y) must stay squarefree of full Y-degree; the
    // lead is constant so only squarefreeness can fail, at most 2 m^2 times
    std::optional<FqElem> good;
    {
        Rng rng(seed ^ 0x73706563ull);
        const uint64_t scan = F->q_fits_u64 && F->q64 <= 2048 ? F->q64 : 256;
        for (uint64_t t = 0; t < scan; t++) {
            FqElem x0 = (F->q_fits_u64 && F->q64 <= 2048) ? FqElem::from_index(F, t) : fq_random(F, rng);
            FqPoly u = ypoly_specialize(F, W, x0);
            if (u.degree() != m) continue;
            if (poly_gcd(u, u.derivative()).degree() == 0) {
                good = x0;
                break;
            }
        }
    }
    if (!good) return factor_via_extension(F, W, seed);

    // translate so the good point sits at X = 0
    YPoly W0 = ypoly_shift_x(F, W, *good);
    FqPoly u = ypoly_specialize(F, W0, FqElem::zero(F));
    auto uf = factor_univariate(u, seed ^ 0x756e69ull);
    std::vector<FqPoly> base;
    for (auto& [g, e] : uf.factors) {
        assert(e == 1);
        base.push_back(g);
    }
    if (base.size() == 1) return {W};

    const int B = deg_x(W0) + 1; // X-degrees of factors are bounded by deg_x(W)

    // Bezout data: inv_i = (prod_{j != i} u_j)^{-1} mod u_i
    std::vector<FqPoly> inv;
    for (size_t i = 0; i < base.size(); i++) {
        FqPoly prod = FqPoly::constant(FqElem::one(F));
        for (size_t j = 0; j < base.size(); j++)
            if (j != i) prod = (prod * base[j]).mod(base[i]);
        inv.push_back(poly_invmod(prod, base[i]));
    }

    // linear X-adic lift of the whole factor set
    std::vector<YPoly> lifted;
    for (auto& b : base) {
        YPoly f(1, FqPoly(F));
        f[0] = b;
        lifted.push_back(std::move(f));
    }
    for (int sigma = 1; sigma < B; sigma++) {
        YPoly prod(1, FqPoly::constant(FqElem::one(F)));
        for (auto& f : lifted) prod = ypoly_mul(F, prod, f, sigma + 1);
        YPoly err = ypoly_sub(F, W0, prod);
        // coefficient of X^sigma as a univariate in Y
        std::vector<FqElem> ec;
        for (auto& cy : err) ec.push_back(cy.coeff(sigma));
        FqPoly e(F, std::move(ec));
        if (e.is_zero()) continue;
        for (size_t i = 0; i < base.size(); i++) {
            FqPoly delta = (e * inv[i]).mod(base[i]);
            if (delta.is_zero()) continue;
            // lifted[i] += X^sigma * delta
            for (int j = 0; j <= delta.degree(); j++) {
                if (delta.coeffs()[j].is_zero()) continue;
                if (deg_y(lifted[i]) < j) lifted[i].resize(j + 1, FqPoly(F));
                FqPoly cj = lifted[i][j];
                std::vector<FqElem> cc = cj.coeffs();
                if (static_cast<int>(cc.size()) <= sigma) cc.resize(sigma + 1, FqElem::zero(F));
                cc[sigma] = cc[sigma] + delta.coeffs()[j];
                lifted[i][j] = FqPoly(F, std::move(cc));
            }
        }
    }

    // recombination by trial division, subsets in size order
    std::vector<YPoly> out;
    std::vector<size_t> remaining(base.size());
    for (size_t i = 0; i < base.size(); i++) remaining[i] = i;
    YPoly rest = W0;
    size_t s = 1;
    while (!remaining.empty() && s <= remaining.size()) {
        bool found = false;
        std::vector<size_t> pick(s);
        // iterate s-subsets of remaining in lexicographic order
        std::vector<size_t> idx(s);
        for (size_t i = 0; i < s; i++) idx[i] = i;
        while (true) {
            YPoly cand(1, FqPoly::constant(FqElem::one(F)));
            for (size_t i = 0; i < s; i++) cand = ypoly_mul(F, cand, lifted[remaining[idx[i]]], B);
            // scale monic (lead is a constant by construction)
            cand = ypoly_scale(cand, cand.back().coeffs()[0].inv());
            if (ypoly_divides(F, cand, rest)) {
                rest = ypoly_exact_div(F, rest, cand);
                out.push_back(cand);
                std::vector<size_t> next_remaining;
                for (size_t i = 0, j = 0; i < remaining.size(); i++) {
                    if (j < s && idx[j] == i) {
                        j++;
                        continue;
                    }
                    next_remaining.push_back(remaining[i]);
                }
                remaining = std::move(next_remaining);
                found = true;
                break;
            }
            // next subset
            int pos = static_cast<int>(s) - 1;
            while (pos >= 0 && idx[pos] == remaining.size() - s + pos) pos--;
            if (pos < 0) break;
            idx[pos]++;
            for (size_t i = pos + 1; i < s; i++) idx[i] = idx[i - 1] + 1;
        }
        if (!found) s++;
        else if (deg_y(rest) == 0) break;
        (void)pick;
    }
    if (deg_y(rest) > 0) out.push_back(ypoly_scale(rest, rest.back().coeffs()[0].inv()));

    // undo the translation
    for (auto& f : out) f = ypoly_shift_x(F, f, -*good);
    return out;
}

// ---------------------------------------------------------------------------

struct Shear {
    // X -> X + a Y   (power == 1)  or  X -> X + Y^power
    FqElem a;
    int power = 1;
};

Polynomial<FqElem> apply_shear(const Polynomial<FqElem>& P, const Shear& sh, bool inverse) {
    const Field& F = P.ctx();
    auto X = Polynomial<FqElem>::variable(F, 2, 0);
    auto Y = Polynomial<FqElem>::variable(F, 2, 1);
    Polynomial<FqElem> yterm(F, 2);
    if (sh.power == 1) {
        yterm = Y * sh.a;
    } else {
        Mono mo(2, 0);
        mo[1] = static_cast<uint8_t>(sh.power);
        yterm.add_term(mo, FqElem::one(F));
    }
    std::vector<Polynomial<FqElem>> images{inverse ? X - yterm : X + yterm, Y};
    return P.substitute(images);
}

} // namespace

BivariateFactorization factor_bivariate(const Polynomial<FqElem>& P, uint64_t seed) {
    const Field& F = P.ctx();
    if (P.nvars() != 2) throw DimensionMismatch("factor_bivariate: expected two variables");
    if (P.is_zero()) throw Error("factor_bivariate: zero polynomial");
    if (F->p == 2) throw EvenCharacteristic("factor_bivariate: odd characteristic only");
    const int D = P.total_degree();
    if (D > 2 * kMaxDegree) throw DegreeTooLarge("factor_bivariate: degree cap exceeded");
    if (F->p <= D)
        throw SmallCharacteristic("factor_bivariate needs p > deg; p = " + std::to_string(F->p) +
                                  ", deg = " + std::to_string(D));

    BivariateFactorization out{FqElem::one(F), {}};
    auto push = [&](const Polynomial<FqElem>& f, int mult) {
        // canonical normalization: leading coefficient (graded-lex max term) 1
        auto lead = f.terms().rbegin();
        FqElem lc = lead->second;
        Mono best = lead->first;
        for (auto& [m, c] : f.terms()) {
            if (mono_degree(m) > mono_degree(best) ||
                (mono_degree(m) == mono_degree(best) && m > best)) {
                best = m;
                lc = c;
            }
        }
        for (int i = 0; i < mult; i++) out.unit = out.unit * lc;
        out.factors.emplace_back(f * lc.inv(), mult);
    };

    if (D == 0) {
        out.unit = P.terms().begin()->second;
        return out;
    }

    auto emit_univariate = [&](const FqPoly& u, int var, int mult_scale) {
        auto uf = factor_univariate(u, seed ^ 0x636f6eull);
        for (int i = 0; i < mult_scale; i++) out.unit = out.unit * uf.unit;
        for (auto& [g, e] : uf.factors) {
            Polynomial<FqElem> bi(F, 2);
            for (int i = 0; i <= g.degree(); i++) {
                if (g.coeffs()[i].is_zero()) continue;
                Mono m(2, 0);
                m[var] = static_cast<uint8_t>(i);
                bi.add_term(m, g.coeffs()[i]);
            }
            push(bi, e * mult_scale);
        }
    };

    Polynomial<FqElem> work = P;

    // pure univariate inputs
    if (work.degree_in(1) == 0) {
        std::vector<FqElem> c(work.degree_in(0) + 1, FqElem::zero(F));
        for (auto& [m, cf] : work.terms()) c[m[0]] = cf;
        emit_univariate(FqPoly(F, std::move(c)), 0, 1);
        return out;
    }
    if (work.degree_in(0) == 0) {
        std::vector<FqElem> c(work.degree_in(1) + 1, FqElem::zero(F));
        for (auto& [m, cf] : work.terms()) c[m[1]] = cf;
        emit_univariate(FqPoly(F, std::move(c)), 1, 1);
        return out;
    }

    // univariate contents in both views
    {
        YPoly yv = ypoly_from(work);
        FqPoly cx = content_x(F, yv);
        if (cx.degree() > 0) {
            emit_univariate(cx.monic(), 0, 1);
            out.unit = out.unit * cx.lead();
            YPoly pp;
            for (auto& ci : yv) pp.push_back(ci.divmod(cx).first);
            work = ypoly_to_poly(F, pp);
        }
    }
    {
        // X-view content: swap variables, reuse the same helper
        std::vector<Polynomial<FqElem>> swap_img{Polynomial<FqElem>::variable(F, 2, 1),
                                                 Polynomial<FqElem>::variable(F, 2, 0)};
        Polynomial<FqElem> swapped = work.substitute(swap_img);
        YPoly yv = ypoly_from(swapped);
        FqPoly cy = content_x(F, yv);
        if (cy.degree() > 0) {
            emit_univariate(cy.monic(), 1, 1);
            out.unit = out.unit * cy.lead();
            YPoly pp;
            for (auto& ci : yv) pp.push_back(ci.divmod(cy).first);
            work = ypoly_to_poly(F, pp).substitute(swap_img);
        }
    }

    if (work.total_degree() == 0) {
        out.unit = out.unit * work.terms().begin()->second;
        return out;
    }

    // shear until monic in Y: coefficient of Y^deg must become a constant
    const int Dw = work.total_degree();
    Shear sh{FqElem::zero(F), 1};
    bool found_shear = false;
    {
        // top form evaluated at (a, 1) is the candidate Y-lead
        Polynomial<FqElem> top(F, 2);
        for (auto& [m, c] : work.terms())
            if (mono_degree(m) == Dw) top.add_term(m, c);
        uint64_t limit = F->q_fits_u64 ? std::min<uint64_t>(F->q64, 4096) : 4096;
        for (uint64_t t = 0; t < limit; t++) {
            FqElem a = FqElem::from_index(F, t);
            if (!top.evaluate({a, FqElem::one(F)}).is_zero()) {
                sh.a = a;
                found_shear = true;
                break;
            }
        }
    }
    if (!found_shear) sh = Shear{FqElem::zero(F), Dw + 1};

    Polynomial<FqElem> sheared = apply_shear(work, sh, false);
    YPoly Q = ypoly_from(sheared);
    assert(Q.back().degree() == 0);
    FqElem qlead = Q.back().coeffs()[0];
    out.unit = out.unit * qlead;
    Q = ypoly_scale(Q, qlead.inv());

    // squarefree part W = Q / gcd(Q, dQ/dY)
    YPoly Qy(Q.size() - 1, FqPoly(F));
    for (size_t j = 1; j < Q.size(); j++) Qy[j - 1] = Q[j] * FqElem::from_int(F, static_cast<int64_t>(j));
    ytrim(Qy);
    YPoly G = ypoly_gcd(F, Q, Qy);
    YPoly W = Q;
    if (deg_y(G) > 0 || deg_x(G) > 0) {
        G = ypoly_scale(G, G.back().coeffs()[0].inv());
        W = ypoly_exact_div(F, Q, G);
    }
    W = ypoly_scale(W, W.back().coeffs()[0].inv());

    auto irreducibles = lift_factor_squarefree(F, W, seed);

    // multiplicities by trial division against Q, then undo the shear
    YPoly rest = Q;
    for (auto& V : irreducibles) {
        int mult = 0;
        while (ypoly_divides(F, V, rest)) {
            rest = ypoly_exact_div(F, rest, V);
            mult++;
        }
        assert(mult >= 1);
        push(apply_shear(ypoly_to_poly(F, V), sh, true), mult);
    }
    assert(deg_y(rest) == 0 && deg_x(rest) <= 0);

    // final self-check: unit * prod factors^mult == P
    Polynomial<FqElem> prod = Polynomial<FqElem>::constant(F, 2, out.unit);
    for (auto& [f, e] : out.factors)
        for (int i = 0; i < e; i++) prod = prod * f;
    if (prod != P) throw Error("factor_bivariate: reconstruction mismatch (internal)");
    return out;
}

bool is_absolutely_irreducible(const Polynomial<FqElem>& P, int expected_degree, uint64_t seed) {
    const Field& F = P.ctx();
    if (P.nvars() != 2) throw DimensionMismatch("is_absolutely_irreducible: expected two variables");
    if (P.is_zero()) return false;
    const int d = P.total_degree();
    if (expected_degree >= 0 && expected_degree != d) return false;
    if (d > kMaxDegree) throw DegreeTooLarge("is_absolutely_irreducible: degree " + std::to_string(d));
    if (d == 0) return false;
    if (d == 1) return true;

    auto fac = factor_bivariate(P, seed);
    if (fac.factors.size() != 1 || fac.factors[0].second != 1) return false;
    if (fac.factors[0].first.total_degree() != d) return false;

    for (int r = 2; r <= d; r++) {
        if (d % r) continue;
        if (F->k * r > 24)
            throw DegreeTooLarge("is_absolutely_irreducible: extension degree cap");
        Field big = FqField::make(F->p, F->k * r);
        FieldHom emb(F, big);
        Polynomial<FqElem> Pb(big, 2);
        for (auto& [m, c] : P.terms()) Pb.add_term(m, emb.map(c));
        auto fb = factor_bivariate(Pb, seed ^ (0x720000ull + r));
        if (fb.factors.size() != 1 || fb.factors[0].second != 1) return false;
    }
    return true;
}

} // namespace cq
