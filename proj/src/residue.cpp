#include "cq/residue.hpp"

#include <cassert>

namespace cq {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Step1Direct: return "step1_direct";
        case Stage::Step2: return "step2";
        case Stage::Step3: return "step3";
    }
    return "?";
}

std::string ResidueDiagnostics::str() const {
    return "planes=" + std::to_string(planes_tried) + " spaces=" + std::to_string(spaces_tried) +
           " deg0-trials=" + std::to_string(deg0_trials) + " slices=" + std::to_string(slices_tried) +
           " rejected{reducible=" + std::to_string(slices_reducible) +
           ", x2-vanishing=" + std::to_string(slices_x2_vanishing) +
           ", no-point=" + std::to_string(slices_no_point) + "}";
}

namespace {

// polynomial in the listed variables only, reindexed to 0..|vars|-1
Polynomial<FqElem> project_vars(const Polynomial<FqElem>& f, const std::vector<int>& vars) {
    std::vector<int> pos(f.nvars(), -1);
    for (size_t i = 0; i < vars.size(); i++) pos[vars[i]] = static_cast<int>(i);
    Polynomial<FqElem> out(f.ctx(), static_cast<int>(vars.size()));
    for (auto& [m, c] : f.terms()) {
        Mono mo(vars.size(), 0);
        for (int i = 0; i < f.nvars(); i++) {
            if (!m[i]) continue;
            if (pos[i] < 0) throw DimensionMismatch("project_vars: polynomial uses a dropped variable");
            mo[pos[i]] = m[i];
        }
        out.add_term(mo, c);
    }
    return out;
}

FqVec embed_point(const Field& F, const FqVec& pt, const std::vector<int>& vars, int n) {
    FqVec x(n, FqElem::zero(F));
    for (size_t i = 0; i < vars.size(); i++) x[vars[i]] = pt[i];
    return x;
}

ResidueSolution verified(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g, const FqVec& x,
                         Stage stage) {
    bool nonzero = false;
    for (auto& c : x) nonzero = nonzero || !c.is_zero();
    if (!nonzero) throw Error("residue solution is the zero vector (internal)");
    if (!f.evaluate(x).is_zero() || !g.evaluate(x).is_zero())
        throw Error("residue solution fails to vanish (internal)");
    int rank = jacobian_rank(f, g, x);
    if (rank != 2) throw Error("residue solution has singular Jacobian (internal)");
    return ResidueSolution{x, rank, stage};
}

// first projective common zero of two ternary forms accepted by the
// callback; canonical representatives (1,y,z), (0,1,z), (0,0,1) in index
// order, so scans are deterministic
bool scan_ternary_common(const Polynomial<FqElem>& f3, const Polynomial<FqElem>& g3,
                         const std::function<bool(const FqVec&)>& accept) {
    const Field& F = f3.ctx();
    const uint64_t q = F->q64;
    const FqElem one = FqElem::one(F), zero = FqElem::zero(F);
    if (F->k == 1) {
        // table-driven fast path
        const int64_t p = F->p;
        struct T {
            int64_t c;
            int ex, ey, ez;
        };
        auto compile = [&](const Polynomial<FqElem>& h) {
            std::vector<T> v;
            for (auto& [m, c] : h.terms()) v.push_back({c.rep()[0], m[0], m[1], m[2]});
            return v;
        };
        auto tf = compile(f3), tg = compile(g3);
        std::vector<std::array<int64_t, 4>> pw(q);
        for (uint64_t v = 0; v < q; v++) {
            pw[v][0] = 1;
            for (int e = 1; e <= 3; e++) pw[v][e] = pw[v][e - 1] * static_cast<int64_t>(v) % p;
        }
        auto eval = [&](const std::vector<T>& tt, int64_t X, int64_t Y, int64_t Z) {
            int64_t acc = 0;
            for (auto& t : tt) acc += t.c * pw[X][t.ex] % p * pw[Y][t.ey] % p * pw[Z][t.ez] % p;
            return acc % p;
        };
        for (uint64_t y = 0; y < q; y++)
            for (uint64_t z = 0; z < q; z++) {
                if (eval(tf, 1, y, z) == 0 && eval(tg, 1, y, z) == 0) {
                    if (accept({one, FqElem::from_index(F, y), FqElem::from_index(F, z)})) return true;
                }
            }
        for (uint64_t z = 0; z < q; z++) {
            if (eval(tf, 0, 1, z) == 0 && eval(tg, 0, 1, z) == 0)
                if (accept({zero, one, FqElem::from_index(F, z)})) return true;
        }
        if (eval(tf, 0, 0, 1) == 0 && eval(tg, 0, 0, 1) == 0)
            if (accept({zero, zero, one})) return true;
        return false;
    }
    for (uint64_t y = 0; y < q; y++)
        for (uint64_t z = 0; z < q; z++) {
            FqVec pt{one, FqElem::from_index(F, y), FqElem::from_index(F, z)};
            if (f3.evaluate(pt).is_zero() && g3.evaluate(pt).is_zero())
                if (accept(pt)) return true;
        }
    for (uint64_t z = 0; z < q; z++) {
        FqVec pt{zero, one, FqElem::from_index(F, z)};
        if (f3.evaluate(pt).is_zero() && g3.evaluate(pt).is_zero())
            if (accept(pt)) return true;
    }
    FqVec pt{zero, zero, one};
    if (f3.evaluate(pt).is_zero() && g3.evaluate(pt).is_zero())
        if (accept(pt)) return true;
    return false;
}

bool grad_nonzero(const Polynomial<FqElem>& g, const FqVec& x) {
    for (int i = 0; i < g.nvars(); i++)
        if (!g.derivative(i).evaluate(x).is_zero()) return true;
    return false;
}

FqMat span_matrix(const Field& F, const std::vector<FqVec>& cols, int n) {
    FqMat M(n, FqVec(cols.size(), FqElem::zero(F)));
    for (size_t j = 0; j < cols.size(); j++)
        for (int i = 0; i < n; i++) M[i][j] = cols[j][i];
    return M;
}

FqVec map_from_span(const std::vector<FqVec>& cols, const FqVec& coeffs) {
    const Field& F = coeffs[0].field();
    FqVec x(cols[0].size(), FqElem::zero(F));
    for (size_t j = 0; j < cols.size(); j++)
        for (size_t i = 0; i < x.size(); i++) x[i] = x[i] + cols[j][i] * coeffs[j];
    return x;
}

// seeded hunt for a point where every listed polynomial is nonzero; sweeps
// the whole space instead when it is small
std::optional<FqVec> point_all_nonzero(const std::vector<Polynomial<FqElem>>& polys, Rng& rng,
                                       int trials, int* counter = nullptr) {
    if (polys.empty()) return FqVec{};
    const Field& F = polys[0].ctx();
    const int m = polys[0].nvars();
    auto good = [&](const FqVec& pt) {
        for (auto& f : polys)
            if (f.evaluate(pt).is_zero()) return false;
        return true;
    };
    mpz_class total;
    mpz_pow_ui(total.get_mpz_t(), F->q.get_mpz_t(), m);
    if (total.fits_ulong_p() && total.get_ui() <= 200000) {
        uint64_t npts = total.get_ui();
        for (uint64_t s = 0; s < npts; s++) {
            FqVec pt;
            uint64_t t = s;
            for (int i = 0; i < m; i++) {
                pt.push_back(FqElem::from_index(F, t % F->q64));
                t /= F->q64;
            }
            if (counter) (*counter)++;
            if (good(pt)) return pt;
        }
        return std::nullopt;
    }
    for (int t = 0; t < trials; t++) {
        FqVec pt;
        for (int i = 0; i < m; i++) pt.push_back(fq_random(F, rng));
        if (counter) (*counter)++;
        if (good(pt)) return pt;
    }
    return std::nullopt;
}

} // namespace

FqVec find_zero_with_gradient(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g, uint64_t seed,
                              ResidueDiagnostics* diag) {
    const Field& F = f.ctx();
    const int n = f.nvars();
    if (f.is_zero() && g.is_zero()) throw Error("find_zero_with_gradient: zero system");
    ResidueDiagnostics local;
    ResidueDiagnostics& d = diag ? *diag : local;

    // small ambient spaces: exhaust directly
    {
        mpz_class total;
        mpz_pow_ui(total.get_mpz_t(), F->q.get_mpz_t(), n);
        if (total.fits_ulong_p() && total.get_ui() <= 200000) {
            uint64_t npts = total.get_ui();
            for (uint64_t s = 1; s < npts; s++) {
                FqVec pt;
                uint64_t t = s;
                for (int i = 0; i < n; i++) {
                    pt.push_back(FqElem::from_index(F, t % F->q64));
                    t /= F->q64;
                }
                if (f.evaluate(pt).is_zero() && g.evaluate(pt).is_zero() && grad_nonzero(g, pt))
                    return pt;
            }
            throw SearchExhausted("no common zero with grad g != 0 in the whole space" +
                                  std::string(n < 6 ? " (n < 6: h(f,g) > 5 needs n >= 6)" : ""));
        }
    }

    Rng rng(Rng(seed).child("step1").next());
    std::optional<FqVec> singular_zero; // common zero with grad g = 0, for phase B
    std::optional<FqVec> g_zero;        // zero of g with f != 0, for phase B

    auto try_span = [&](const std::vector<FqVec>& cols) -> std::optional<FqVec> {
        FqMat M = span_matrix(F, cols, n);
        if (mat_rank(M) != 3) return std::nullopt;
        auto f3 = substitute_linear(f, M);
        auto g3 = substitute_linear(g, M);
        std::optional<FqVec> hit;
        scan_ternary_common(f3, g3, [&](const FqVec& pt) {
            FqVec x = map_from_span(cols, pt);
            bool nonzero = false;
            for (auto& c : x) nonzero = nonzero || !c.is_zero();
            if (!nonzero) return false;
            if (grad_nonzero(g, x)) {
                hit = x;
                return true;
            }
            if (!singular_zero) singular_zero = x;
            return false;
        });
        // harvest a zero of g with f != 0 for the structured fallback
        if (!g_zero) {
            scan_ternary_common(g3, g3, [&](const FqVec& pt) {
                FqVec x = map_from_span(cols, pt);
                if (!f.evaluate(x).is_zero()) {
                    g_zero = x;
                    return true;
                }
                return false;
            });
        }
        return hit;
    };

    auto random_vec = [&] {
        FqVec v(n, FqElem::zero(F));
        for (int i = 0; i < n; i++) v[i] = fq_random(F, rng);
        return v;
    };

    for (int trial = 0; trial < 64; trial++) {
        d.planes_tried++;
        auto hit = try_span({random_vec(), random_vec(), random_vec()});
        if (hit) return *hit;
    }

    // structured fallback: spans through a recorded singular common zero and
    // a zero of g off the cubic, in the spirit of the S(X,Y,Z) slice
    if (!g_zero) {
        auto an = analyze_quadratic(g);
        for (int t = 0; t < 32 && !an.isotropic_basis.empty() && !g_zero; t++) {
            FqVec v(n, FqElem::zero(F));
            for (auto& b : an.isotropic_basis) {
                FqElem c = fq_random(F, rng);
                for (int i = 0; i < n; i++) v[i] = v[i] + c * b[i];
            }
            bool nz = false;
            for (auto& c : v) nz = nz || !c.is_zero();
            if (nz && !f.evaluate(v).is_zero()) g_zero = v;
        }
    }
    for (int trial = 0; trial < 64; trial++) {
        d.spaces_tried++;
        std::vector<FqVec> cols;
        cols.push_back(singular_zero ? *singular_zero : random_vec());
        cols.push_back(g_zero ? *g_zero : random_vec());
        cols.push_back(random_vec());
        auto hit = try_span(cols);
        if (hit) return *hit;
    }
    throw SearchExhausted(
        "step 1 found no common zero with grad g != 0 after " + std::to_string(d.planes_tried) +
        " planes and " + std::to_string(d.spaces_tried) + " structured 3-spaces" +
        std::string(n < 6 ? "; n < 6, while h(f,g) > 5 needs n >= 6" : "") +
        "; the h-invariant hypotheses likely fail for this input");
}

NormalizeOutcome normalize(const Polynomial<FqElem>& f_in, const Polynomial<FqElem>& g_in,
                           const FqVec& e1) {
    const Field& F = f_in.ctx();
    const int n = f_in.nvars();
    if (!f_in.evaluate(e1).is_zero() || !g_in.evaluate(e1).is_zero())
        throw DimensionMismatch("normalize: e1 is not a common zero");

    if (jacobian_rank(f_in, g_in, e1) == 2)
        return {verified(f_in, g_in, e1, Stage::Step1Direct), std::nullopt};

    if (!grad_nonzero(g_in, e1)) throw DimensionMismatch("normalize: grad g vanishes at e1");

    // accumulated change: f(y) := f_orig(tau y)
    FqMat tau = mat_identity(F, n);
    Polynomial<FqElem> f = f_in, g = g_in;
    auto compose = [&](const FqMat& A) {
        f = substitute_linear(f, A);
        g = substitute_linear(g, A);
        tau = mat_mul(tau, A);
    };

    // 1. e1 to the first basis vector: first column of A1 is e1
    compose(mat_transpose(complete_rows_to_invertible(F, {e1}, n)));

    // 2. g = x1 g1(x2..) + rest; send g1 to x2
    auto coeff_of_x1 = [&](const Polynomial<FqElem>& h) {
        // linear form: terms with exactly one power of x1
        FqVec v(n, FqElem::zero(F));
        for (auto& [m, c] : h.terms()) {
            if (m[0] != 1) continue;
            for (int i = 1; i < n; i++)
                if (m[i] == 1) v[i] = c;
        }
        return v;
    };
    FqVec g1 = coeff_of_x1(g);
    {
        bool nz = false;
        for (auto& c : g1) nz = nz || !c.is_zero();
        if (!nz) throw DimensionMismatch("normalize: g has no x1 cross term at e1 (grad precondition)");
        // block change on x2..xn with first block row g1
        FqMat rows{FqVec(g1.begin() + 1, g1.end())};
        FqMat blk = *mat_inverse(complete_rows_to_invertible(F, rows, n - 1));
        FqMat A = mat_identity(F, n);
        for (int i = 1; i < n; i++)
            for (int j = 1; j < n; j++) A[i][j] = blk[i - 1][j - 1];
        compose(A);
    }

    // 3. complete the hyperbolic pair: g = x2 (x1 + a x2 + L(x3..)) + g2(x3..)
    {
        FqElem lam = FqElem::zero(F);
        FqVec L(n, FqElem::zero(F));
        for (auto& [m, c] : g.terms()) {
            if (m[1] == 2) lam = c;
            else if (m[1] == 1 && m[0] == 0) {
                for (int i = 2; i < n; i++)
                    if (m[i] == 1) L[i] = c;
            }
        }
        FqMat A = mat_identity(F, n);
        // x1 = y1 - lam y2 - L(y3..)
        A[0][1] = -lam;
        for (int i = 2; i < n; i++) A[0][i] = -L[i];
        compose(A);
    }

    // e1 is still the first unit vector; rank 2 now means we are done early
    {
        FqVec e(n, FqElem::zero(F));
        e[0] = FqElem::one(F);
        if (jacobian_rank(f, g, e) == 2) {
            FqVec back = mat_vec(tau, e);
            return {verified(f_in, g_in, back, Stage::Step1Direct), std::nullopt};
        }
    }

    // 4. drop deg_x1 f to <= 1; the x1^2 coefficient is forced to lam' x2
    {
        FqVec f1 = [&] {
            FqVec v(n, FqElem::zero(F));
            for (auto& [m, c] : f.terms()) {
                if (m[0] != 2) continue;
                for (int i = 1; i < n; i++)
                    if (m[i] == 1) v[i] = c;
            }
            return v;
        }();
        // rank-2 check above failed, so f1 is proportional to x2
        FqElem lamp = f1[1];
        if (!lamp.is_zero()) {
            auto x1 = Polynomial<FqElem>::variable(F, n, 0);
            f = f - x1 * g * lamp;
        }
    }

    // 5. purge x2 from the x1 coefficient of f by subtracting ell * g
    {
        Polynomial<FqElem> ell(F, n); // linear in x2..: f2 = x2 ell + f2hat
        for (auto& [m, c] : f.terms()) {
            if (m[0] != 1 || m[1] == 0) continue;
            Mono mo(n, 0);
            if (m[1] == 2) mo[1] = 1;
            else {
                for (int i = 2; i < n; i++)
                    if (m[i] == 1) mo[i] = 1;
            }
            ell.add_term(mo, c);
        }
        if (!ell.is_zero()) f = f - ell * g;
    }

    NormalizedSystem ns;
    ns.tau = tau;
    ns.f = f;
    ns.g = g;
    // split f = x1 f2(x3..) + f3(x2..), g = x1 x2 + g2(x3..)
    Polynomial<FqElem> f2(F, n), f3(F, n), g2(F, n);
    for (auto& [m, c] : f.terms()) {
        if (m[0] == 0) {
            f3.add_term(m, c);
        } else if (m[0] == 1) {
            Mono mo = m;
            mo[0] = 0;
            f2.add_term(mo, c);
        } else {
            throw Error("normalize: x1 degree not reduced (internal)");
        }
    }
    for (auto& [m, c] : g.terms()) {
        if (m[0] == 1 && m[1] == 1) continue; // the x1 x2 term
        if (m[0] != 0 || m[1] != 0) throw Error("normalize: g not in x1 x2 + g2(x3..) shape (internal)");
        g2.add_term(m, c);
    }
    if (f2.involves(0) || f2.involves(1) || f3.involves(0) || g2.involves(0) || g2.involves(1))
        throw Error("normalize: shape constraints violated (internal)");
    ns.f2 = f2;
    ns.f3 = f3;
    ns.g2 = g2;
    ns.deg1 = !f2.is_zero();
    return {std::nullopt, ns};
}

FqVec nonsingular_cubic_zero(const Polynomial<FqElem>& f_in, uint64_t seed) {
    const Field& F = f_in.ctx();
    const int m = f_in.nvars();
    if (f_in.is_zero()) throw SearchExhausted("cubic vanishes identically; no nonsingular zero");
    if (F->p <= 3) throw Error("nonsingular cubic search requires p > 3");
    Rng rng(Rng(seed).child("nscubic").next());

    // essential variables: kernel of v -> sum v_i d_i f  (valid for p > 3)
    FqMat A; // columns: complement basis then kernel basis
    int m_ess;
    {
        std::vector<Polynomial<FqElem>> parts;
        for (int i = 0; i < m; i++) parts.push_back(f_in.derivative(i));
        std::map<Mono, int> rows;
        for (auto& pd : parts)
            for (auto& [mo, c] : pd.terms())
                if (!rows.count(mo)) rows.emplace(mo, static_cast<int>(rows.size()));
        FqMat M(rows.size(), FqVec(m, FqElem::zero(F)));
        for (int i = 0; i < m; i++)
            for (auto& [mo, c] : parts[i].terms()) M[rows[mo]][i] = c;
        auto ker = kernel_basis(M);
        m_ess = m - static_cast<int>(ker.size());
        FqMat krows;
        for (auto& v : ker) krows.push_back(v);
        FqMat full = complete_rows_to_invertible(F, krows, m);
        // complement rows come after the kernel rows; we want them first
        FqMat cols;
        for (size_t i = krows.size(); i < full.size(); i++) cols.push_back(full[i]);
        for (size_t i = 0; i < krows.size(); i++) cols.push_back(full[i]);
        A = mat_transpose(cols);
    }
    if (m_ess == 0) throw SearchExhausted("cubic has no essential variables (internal)");

    FqMat Asub(m, FqVec(m_ess, FqElem::zero(F)));
    for (int i = 0; i < m; i++)
        for (int j = 0; j < m_ess; j++) Asub[i][j] = A[i][j];
    Polynomial<FqElem> f = substitute_linear(f_in, Asub); // m_ess variables, all essential

    // find a nontrivial zero of f
    auto find_zero = [&]() -> std::optional<FqVec> {
        // cheap prepass: unit vectors
        for (int i = 0; i < m_ess; i++) {
            FqVec e(m_ess, FqElem::zero(F));
            e[i] = FqElem::one(F);
            if (f.evaluate(e).is_zero()) return e;
        }
        mpz_class total;
        mpz_pow_ui(total.get_mpz_t(), F->q.get_mpz_t(), m_ess);
        if (total.fits_ulong_p() && total.get_ui() <= 50000) {
            for (uint64_t s = 1; s < total.get_ui(); s++) {
                FqVec pt;
                uint64_t t = s;
                for (int i = 0; i < m_ess; i++) {
                    pt.push_back(FqElem::from_index(F, t % F->q64));
                    t /= F->q64;
                }
                if (f.evaluate(pt).is_zero()) return pt;
            }
            return std::nullopt;
        }
        // seeded lines: interpolate the restricted cubic at 4 nodes
        for (int trial = 0; trial < 256; trial++) {
            FqVec a, b;
            for (int i = 0; i < m_ess; i++) {
                a.push_back(fq_random(F, rng));
                b.push_back(fq_random(F, rng));
            }
            bool az = true;
            for (auto& c : a) az = az && c.is_zero();
            if (az) continue;
            std::vector<FqElem> vals;
            for (int t = 0; t < 4; t++) {
                FqVec pt(m_ess, FqElem::zero(F));
                FqElem tv = FqElem::from_int(F, t);
                for (int i = 0; i < m_ess; i++) pt[i] = b[i] + tv * a[i];
                vals.push_back(f.evaluate(pt));
            }
            // Lagrange through nodes 0..3
            FqPoly U(F);
            for (int i = 0; i < 4; i++) {
                FqPoly Li = FqPoly::constant(FqElem::one(F));
                FqElem den = FqElem::one(F);
                for (int j = 0; j < 4; j++) {
                    if (i == j) continue;
                    Li = Li * (FqPoly::x(F) - FqPoly::constant(FqElem::from_int(F, j)));
                    den = den * (FqElem::from_int(F, i) - FqElem::from_int(F, j));
                }
                U = U + Li * (vals[i] * den.inv());
            }
            if (U.is_zero()) {
                // the whole line lies on the cubic; pick a nonzero point
                for (int t = 0; t < 4; t++) {
                    FqVec pt(m_ess, FqElem::zero(F));
                    FqElem tv = FqElem::from_int(F, t);
                    for (int i = 0; i < m_ess; i++) pt[i] = b[i] + tv * a[i];
                    bool nz = false;
                    for (auto& c : pt) nz = nz || !c.is_zero();
                    if (nz) return pt;
                }
                continue;
            }
            for (auto& root : poly_roots(U, rng.next())) {
                FqVec pt(m_ess, FqElem::zero(F));
                for (int i = 0; i < m_ess; i++) pt[i] = b[i] + root * a[i];
                bool nz = false;
                for (auto& c : pt) nz = nz || !c.is_zero();
                if (nz) return pt;
            }
        }
        return std::nullopt;
    };

    for (int rounds = 0; rounds < 16; rounds++) {
        auto e = find_zero();
        if (!e) break;
        // move e to the first coordinate and decompose
        FqMat B = mat_transpose(complete_rows_to_invertible(F, {*e}, m_ess));
        Polynomial<FqElem> fb = substitute_linear(f, B);
        Polynomial<FqElem> f1(F, m_ess), f2c(F, m_ess), f3c(F, m_ess);
        for (auto& [mo, c] : fb.terms()) {
            if (mo[0] == 3) throw Error("nonsingular_cubic_zero: x1^3 survived at a zero (internal)");
            Mono mm = mo;
            mm[0] = 0;
            if (mo[0] == 2) f1.add_term(mm, c);
            else if (mo[0] == 1) f2c.add_term(mm, c);
            else f3c.add_term(mm, c);
        }
        FqVec sol_local;
        if (!f1.is_zero()) {
            FqVec e1(m_ess, FqElem::zero(F));
            e1[0] = FqElem::one(F);
            sol_local = e1;
        } else if (!f2c.is_zero()) {
            auto pt = point_all_nonzero({f2c}, rng, 512);
            if (!pt) break;
            FqVec y = *pt;
            y[0] = -(f3c.evaluate(*pt) * f2c.evaluate(*pt).inv());
            sol_local = y;
        } else {
            throw Error("nonsingular_cubic_zero: inessential direction after reduction (internal)");
        }
        FqVec y = mat_vec(B, sol_local);
        // back through the essential embedding
        FqVec x = mat_vec(Asub, y);
        if (!f_in.evaluate(x).is_zero()) throw Error("nonsingular_cubic_zero: verify failed (internal)");
        if (!grad_nonzero(f_in, x)) throw Error("nonsingular_cubic_zero: singular result (internal)");
        return x;
    }
    throw SearchExhausted("no nonsingular zero of the cubic found (degenerate or anisotropic input)");
}

ResidueSolution solve_deg0(const NormalizedSystem& ns, uint64_t seed, ResidueDiagnostics* diag) {
    const Field& F = ns.f.ctx();
    const int n = ns.f.nvars();
    ResidueDiagnostics local;
    ResidueDiagnostics& d = diag ? *diag : local;
    Rng rng(Rng(seed).child("deg0").next());

    const Polynomial<FqElem>& fc = ns.f3; // = f, no x1
    int delta = fc.degree_in(1);

    auto assemble = [&](const FqVec& tail) {
        // tail: coords 1..n-1 set, coord 0 to fill with -x2^{-1} g2
        FqVec x = tail;
        FqElem x2 = x[1];
        x[0] = -(ns.g2.evaluate(x) * x2.inv());
        return verified(ns.f, ns.g, x, Stage::Step2);
    };

    if (delta == 0) {
        std::vector<int> tail3;
        for (int i = 2; i < n; i++) tail3.push_back(i);
        auto z = nonsingular_cubic_zero(project_vars(fc, tail3), rng.next());
        FqVec x = embed_point(F, z, tail3, n);
        x[1] = FqElem::one(F);
        return assemble(x);
    }

    if (delta == 1) {
        // f = x2 f2a(x3..) + f3a(x3..)
        Polynomial<FqElem> f2a(F, n), f3a(F, n);
        for (auto& [m, c] : fc.terms()) {
            Mono mm = m;
            mm[1] = 0;
            if (m[1] == 1) f2a.add_term(mm, c);
            else f3a.add_term(mm, c);
        }
        if (!f3a.is_zero()) {
            auto pt = point_all_nonzero({f2a, f3a}, rng, 512, &d.deg0_trials);
            if (!pt) throw SearchExhausted("deg0 delta=1: no point with f2, f3 both nonzero (q <= 5?)");
            FqVec x = *pt;
            x[0] = FqElem::zero(F);
            x[1] = -(f3a.evaluate(*pt) * f2a.evaluate(*pt).inv());
            x[0] = -(ns.g2.evaluate(x) * x[1].inv());
            return verified(ns.f, ns.g, x, Stage::Step2);
        }
        // f = x2 f2a: need a nonsingular zero of the quadratic f2a
        std::vector<int> tail3;
        for (int i = 2; i < n; i++) tail3.push_back(i);
        auto an = analyze_quadratic(project_vars(f2a, tail3));
        for (int t = 0; t < 512 && !an.isotropic_basis.empty(); t++) {
            d.deg0_trials++;
            FqVec v(tail3.size(), FqElem::zero(F));
            for (auto& b : an.isotropic_basis) {
                FqElem c = fq_random(F, rng);
                for (size_t i = 0; i < v.size(); i++) v[i] = v[i] + c * b[i];
            }
            FqVec x = embed_point(F, v, tail3, n);
            x[1] = FqElem::one(F);
            if (!grad_nonzero(f2a, x)) continue;
            return assemble(x);
        }
        throw SearchExhausted("deg0 delta=1 degenerate: quadratic factor has no nonsingular zero");
    }

    if (delta == 2) {
        FqVec x(n, FqElem::zero(F));
        x[1] = FqElem::one(F);
        return assemble(x);
    }

    // delta = 3
    {
        std::vector<int> tail2;
        for (int i = 1; i < n; i++) tail2.push_back(i);
        Polynomial<FqElem> fproj = project_vars(fc, tail2); // vars: x2, x3, ..., xn
        auto a = nonsingular_cubic_zero(fproj, rng.next());
        if (!a[0].is_zero()) {
            FqVec x = embed_point(F, a, tail2, n);
            return assemble(x);
        }
        // a has x2-coordinate 0: move it to the x3 slot (fixing x2)
        const int mm = static_cast<int>(tail2.size());
        FqVec arest(a.begin() + 1, a.end());
        FqMat blk = mat_transpose(complete_rows_to_invertible(F, {arest}, mm - 1));
        FqMat C = mat_identity(F, mm);
        for (int i = 1; i < mm; i++)
            for (int j = 1; j < mm; j++) C[i][j] = blk[i - 1][j - 1];
        Polynomial<FqElem> fC = substitute_linear(fproj, C); // a is now e2 (x3 slot)

        // fC over (x2, x3, x4..): split on the x3 degree
        Polynomial<FqElem> f1p(F, mm), rest(F, mm);
        for (auto& [m, c] : fC.terms()) {
            if (m[1] == 3) throw Error("solve_deg0 delta=3: cubic term at a zero (internal)");
            Mono mo = m;
            mo[1] = 0;
            if (m[1] == 2) f1p.add_term(mo, c);
            else if (m[1] == 0) rest.add_term(mo, c);
        }
        if (f1p.is_zero()) throw Error("solve_deg0 delta=3: zero was singular (internal)");
        Polynomial<FqElem> r0(F, mm); // part of rest free of x2
        for (auto& [m, c] : rest.terms())
            if (m[0] == 0) r0.add_term(m, c);
        if (r0.is_zero())
            throw SearchExhausted("deg0 delta=3: f lies in ideal(x2, x3); h(f - lg) > 3 must fail");

        // e4 over x4..: r0(e4) != 0 and the Y^2 slice coefficient nonzero
        FqElem alpha = FqElem::zero(F); // x2 coefficient of f1p
        {
            Mono mo(mm, 0);
            mo[0] = 1;
            alpha = f1p.coeff(mo);
        }
        std::optional<FqVec> e4;
        for (int t = 0; t < 512 && !e4; t++) {
            d.deg0_trials++;
            FqVec v(mm, FqElem::zero(F));
            for (int i = 2; i < mm; i++) v[i] = fq_random(F, rng);
            if (r0.evaluate(v).is_zero()) continue;
            if (alpha.is_zero() && f1p.evaluate(v).is_zero()) continue;
            e4 = v;
        }
        if (!e4) throw SearchExhausted("deg0 delta=3: no usable e4 direction (q <= 5?)");

        // T(X,Y,Z) = fC(X e1 + Y e2 + Z e4), nonsingular zero with X != 0
        FqVec eX(mm, FqElem::zero(F)), eY(mm, FqElem::zero(F));
        eX[0] = FqElem::one(F);
        eY[1] = FqElem::one(F);
        FqMat M = span_matrix(F, {eX, eY, *e4}, mm);
        Polynomial<FqElem> T = substitute_linear(fC, M);
        std::vector<Polynomial<FqElem>> Tgrad{T.derivative(0), T.derivative(1), T.derivative(2)};

        const uint64_t q = F->q64;
        for (uint64_t yi = 0; yi < q; yi++) {
            for (uint64_t zi = 0; zi < q; zi++) {
                FqVec pt{FqElem::one(F), FqElem::from_index(F, yi), FqElem::from_index(F, zi)};
                if (!T.evaluate(pt).is_zero()) continue;
                bool ns_pt = false;
                for (auto& gp : Tgrad) ns_pt = ns_pt || !gp.evaluate(pt).is_zero();
                if (!ns_pt) continue;
                FqVec y = map_from_span({eX, eY, *e4}, pt);
                FqVec z = mat_vec(C, y);
                FqVec x = embed_point(F, z, tail2, n);
                return assemble(x);
            }
        }
        throw SearchExhausted("deg0 delta=3: T slice had no nonsingular zero with X != 0 (q <= 3?)");
    }
}

Polynomial<FqElem> build_H(const NormalizedSystem& ns) {
    if (!ns.deg1) throw DimensionMismatch("build_H: system is not in deg1 shape");
    const Field& F = ns.f.ctx();
    const int n = ns.f.nvars();
    auto x2 = Polynomial<FqElem>::variable(F, n, 1);
    Polynomial<FqElem> H = x2 * ns.f3 - ns.f2 * ns.g2;
    std::vector<int> tail2;
    for (int i = 1; i < n; i++) tail2.push_back(i);
    return project_vars(H, tail2); // variables x2..xn, with x2 first
}

namespace {

FqPoly partial_eval_x(const Polynomial<FqElem>& biv, const FqElem& xv) {
    const Field& F = biv.ctx();
    std::vector<FqElem> c(biv.degree_in(1) + 1, FqElem::zero(F));
    for (auto& [m, co] : biv.terms()) {
        FqElem t = co;
        for (int e = 0; e < m[0]; e++) t = t * xv;
        c[m[1]] = c[m[1]] + t;
    }
    return FqPoly(F, std::move(c));
}

} // namespace

ResidueSolution solve_deg1(const NormalizedSystem& ns, uint64_t seed, ResidueDiagnostics* diag) {
    const Field& F = ns.f.ctx();
    const int n = ns.f.nvars();
    ResidueDiagnostics local;
    ResidueDiagnostics& d = diag ? *diag : local;
    Rng rng(Rng(seed).child("deg1").next());

    Polynomial<FqElem> H = build_H(ns); // m = n-1 variables, x2 first
    const int m = H.nvars();
    const int nslice = m - 1;

    for (int trial = 0; trial < 64; trial++) {
        d.slices_tried++;
        SliceParams<FqElem> sp;
        for (int i = 0; i < 3 * nslice + 1; i++) sp.xi.push_back(fq_random(F, rng));

        // the substituted x2 coordinate is xi_0 + X, never identically zero
        // with this variable alignment; the guard stays for safety
        if (slice_coordinate(H, sp, 0).is_zero()) {
            d.slices_x2_vanishing++;
            continue;
        }
        auto Hs = slice(H, sp);
        if (Hs.total_degree() != 4 || !is_absolutely_irreducible(Hs, 4, rng.next())) {
            d.slices_reducible++;
            continue;
        }

        // hunt a nonsingular curve point with x2 != 0: walk X, solve for Y
        auto HsX = Hs.derivative(0);
        auto HsY = Hs.derivative(1);
        bool found = false;
        FqVec pt2;
        for (uint64_t xi = 0; xi < F->q64 && !found; xi++) {
            FqElem X = FqElem::from_index(F, xi);
            FqElem x2v = sp.xi[0] + X;
            if (x2v.is_zero()) continue;
            FqPoly PY = partial_eval_x(Hs, X);
            if (PY.is_zero()) continue; // vertical component; skip this X
            for (auto& Y : poly_roots(PY, rng.next())) {
                FqVec xy{X, Y};
                if (HsX.evaluate(xy).is_zero() && HsY.evaluate(xy).is_zero()) continue;
                // map back through the slice to a point on H
                FqVec y(m, FqElem::zero(F));
                y[0] = x2v;
                for (int j = 1; j < m; j++)
                    y[j] = sp.xi[j] + sp.xi[nslice + j] * X + sp.xi[2 * nslice + j] * Y;
                pt2 = y;
                found = true;
                break;
            }
        }
        if (!found) {
            d.slices_no_point++;
            continue;
        }

        // lift through the quartic identity: x1 = -x2^{-1} g2(x3..)
        std::vector<int> tail2;
        for (int i = 1; i < n; i++) tail2.push_back(i);
        FqVec x = embed_point(F, pt2, tail2, n);
        x[0] = -(ns.g2.evaluate(x) * x[1].inv());
        return verified(ns.f, ns.g, x, Stage::Step3);
    }
    throw SearchExhausted("step 3 exhausted 64 slices: " + d.str() +
                          "; persistent reducible slices indicate H itself factors, i.e. the "
                          "h-invariant hypotheses fail (cf. the absolute-irreducibility guard)");
}

ResidueSolution solve_residue(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g, uint64_t seed,
                              ResidueDiagnostics* diag) {
    const Field& F = f.ctx();
    if (F->p == 2) throw EvenCharacteristic("residue solver requires odd characteristic");
    if (F->p == 3) throw Error("residue solver restricted to p > 3");
    if (f.nvars() < 2) throw DimensionMismatch("residue solver needs at least 2 variables");
    if (f.is_zero() && g.is_zero()) throw DimensionMismatch("residue solver: zero system");
    require_form(f, 3, "residue cubic");
    require_form(g, 2, "residue quadratic");

    FqVec e1 = find_zero_with_gradient(f, g, seed, diag);
    auto outcome = normalize(f, g, e1);
    if (outcome.early) return *outcome.early;

    const NormalizedSystem& ns = *outcome.ns;
    ResidueSolution sol = ns.deg1 ? solve_deg1(ns, seed, diag) : solve_deg0(ns, seed, diag);

    FqVec x = mat_vec(ns.tau, sol.x);
    auto out = verified(f, g, x, sol.stage);
    return out;
}

} // namespace cq
