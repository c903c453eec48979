#include "cq/minimize.hpp"

#include <cassert>

namespace cq {

namespace {

// parametrization matrix of the subspace cut out by the given forms:
// columns are a kernel basis, so f(M y) is the restriction of f
FqMat subspace_param(const Field& F, const FqMat& forms, int n) {
    if (forms.empty()) return mat_identity(F, n);
    auto basis = kernel_basis(forms);
    FqMat M(n, FqVec(basis.size(), FqElem::zero(F)));
    for (size_t j = 0; j < basis.size(); j++)
        for (int i = 0; i < n; i++) M[i][j] = basis[j][i];
    return M;
}

} // namespace

mpz_class subspace_count(const mpz_class& q, int n, int h) {
    mpz_class num = 1, den = 1;
    for (int i = 1; i <= h; i++) {
        mpz_class qa, qb;
        mpz_pow_ui(qa.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n - h + i));
        mpz_pow_ui(qb.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(i));
        num *= qa - 1;
        den *= qb - 1;
    }
    return num / den;
}

bool for_each_codim_subspace(const Field& F, int n, int h,
                             const std::function<bool(const FqMat&)>& fn) {
    if (h == 0) return fn(FqMat{});
    // pivot columns ascending, then an odometer over the free RREF cells
    std::vector<int> piv(h);
    for (int i = 0; i < h; i++) piv[i] = i;
    const uint64_t q = F->q_fits_u64 ? F->q64 : 0;
    if (q == 0) throw BudgetExceeded("subspace enumeration needs q to fit a machine word");
    for (;;) {
        std::vector<bool> is_piv(n, false);
        for (int c : piv) is_piv[c] = true;
        std::vector<std::pair<int, int>> cells;
        for (int i = 0; i < h; i++)
            for (int j = piv[i] + 1; j < n; j++)
                if (!is_piv[j]) cells.emplace_back(i, j);
        std::vector<uint64_t> idx(cells.size(), 0);
        for (;;) {
            FqMat A(h, FqVec(n, FqElem::zero(F)));
            for (int i = 0; i < h; i++) A[i][piv[i]] = FqElem::one(F);
            for (size_t c = 0; c < cells.size(); c++)
                A[cells[c].first][cells[c].second] = FqElem::from_index(F, idx[c]);
            if (fn(A)) return true;
            size_t c = 0;
            while (c < cells.size() && ++idx[c] == q) idx[c++] = 0;
            if (c == cells.size()) break;
        }
        // next pivot combination
        int i = h - 1;
        while (i >= 0 && piv[i] == n - h + i) i--;
        if (i < 0) break;
        piv[i]++;
        for (int j = i + 1; j < h; j++) piv[j] = piv[j - 1] + 1;
    }
    return false;
}

std::optional<FqVec> solve_linear_system(const FqMat& A, const FqVec& b) {
    if (A.empty()) return FqVec{};
    const Field& F = b.at(0).field();
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    FqMat aug(rows, FqVec(cols + 1, FqElem::zero(F)));
    for (int i = 0; i < rows; i++) {
        for (int j = 0; j < cols; j++) aug[i][j] = A[i][j];
        aug[i][cols] = b[i];
    }
    auto piv = rref_inplace(aug);
    FqVec x(cols, FqElem::zero(F));
    for (size_t r = 0; r < piv.size(); r++) {
        if (piv[r] == cols) return std::nullopt; // inconsistent
        x[piv[r]] = aug[r][cols];
    }
    return x;
}

std::optional<FqVec> linear_multiplier(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g) {
    const Field& F = f.ctx();
    const int m = f.nvars();
    if (g.is_zero()) {
        if (f.is_zero()) return FqVec(m, FqElem::zero(F));
        return std::nullopt;
    }
    // coefficients of sum_j c_j (x_j g) - f = 0, row per monomial
    std::map<Mono, int> row_of;
    auto row = [&](const Mono& mo) {
        auto it = row_of.find(mo);
        if (it == row_of.end()) it = row_of.emplace(mo, static_cast<int>(row_of.size())).first;
        return it->second;
    };
    std::vector<std::pair<std::pair<int, int>, FqElem>> entries; // ((row, col), coeff)
    std::vector<std::pair<int, FqElem>> rhs;
    for (int j = 0; j < m; j++) {
        for (auto& [mo, c] : g.terms()) {
            Mono mj = mo;
            mj[j]++;
            entries.push_back({{row(mj), j}, c});
        }
    }
    for (auto& [mo, c] : f.terms()) rhs.push_back({row(mo), c});
    const int rows = static_cast<int>(row_of.size());
    FqMat A(rows, FqVec(m, FqElem::zero(F)));
    FqVec b(rows, FqElem::zero(F));
    for (auto& [rc, c] : entries) A[rc.first][rc.second] = A[rc.first][rc.second] + c;
    for (auto& [r, c] : rhs) b[r] = b[r] + c;
    return solve_linear_system(A, b);
}

namespace {

enum class HFlavor { Single, Shift, System };

struct SearchOut {
    enum class Status { Witness, ProvenAbove, Presumed } status;
    int h = 0;
    HMode mode = HMode::UpperBound;
    FqMat forms;
    std::optional<FqVec> l;
};

// does the flavor's condition hold on the subspace cut out by `forms`?
// fills `l_out` for the Shift flavor
bool holds_on_subspace(const Polynomial<FqElem>& f, const Polynomial<FqElem>* g, HFlavor flavor,
                       const FqMat& forms, std::optional<FqVec>* l_out) {
    const Field& F = f.ctx();
    const int n = f.nvars();
    FqMat M = subspace_param(F, forms, n);
    auto fW = substitute_linear(f, M);
    switch (flavor) {
        case HFlavor::Single:
            return fW.is_zero();
        case HFlavor::System: {
            if (!fW.is_zero()) return false;
            auto gW = substitute_linear(*g, M);
            return gW.is_zero();
        }
        case HFlavor::Shift: {
            auto gW = substitute_linear(*g, M);
            auto lw = linear_multiplier(fW, gW);
            if (!lw) return false;
            if (l_out) {
                // pull the multiplier back to a form on the ambient space:
                // solve M^T l = lw so that l restricted to W equals lw
                auto lfull = solve_linear_system(mat_transpose(M), *lw);
                if (!lfull) return false;
                *l_out = *lfull;
            }
            return true;
        }
    }
    return false;
}

std::optional<SearchOut> probe_level(const Polynomial<FqElem>& f, const Polynomial<FqElem>* g,
                                     HFlavor flavor, int level, Rng& rng) {
    const Field& F = f.ctx();
    const int n = f.nvars();
    // coordinate-aligned subsets first: they catch planted structure
    {
        std::vector<int> sub(level);
        for (int i = 0; i < level; i++) sub[i] = i;
        uint64_t scanned = 0;
        for (;;) {
            if (++scanned > 20000) break;
            FqMat forms;
            for (int c : sub) {
                FqVec row(n, FqElem::zero(F));
                row[c] = FqElem::one(F);
                forms.push_back(std::move(row));
            }
            std::optional<FqVec> l;
            if (holds_on_subspace(f, g, flavor, forms, &l)) {
                SearchOut out{SearchOut::Status::Witness, level, HMode::UpperBound, forms, l};
                return out;
            }
            int i = level - 1;
            while (i >= 0 && sub[i] == n - level + i) i--;
            if (i < 0) break;
            sub[i]++;
            for (int j = i + 1; j < level; j++) sub[j] = sub[j - 1] + 1;
        }
    }
    // seeded random subspaces
    for (int t = 0; t < 64; t++) {
        FqMat forms;
        for (int i = 0; i < level; i++) {
            FqVec row(n, FqElem::zero(F));
            for (int j = 0; j < n; j++) row[j] = fq_random(F, rng);
            forms.push_back(std::move(row));
        }
        if (mat_rank(forms) != level) continue;
        std::optional<FqVec> l;
        if (holds_on_subspace(f, g, flavor, forms, &l))
            return SearchOut{SearchOut::Status::Witness, level, HMode::UpperBound, forms, l};
    }
    return std::nullopt;
}

SearchOut h_search(const Polynomial<FqElem>& f, const Polynomial<FqElem>* g, HFlavor flavor, int cap,
                   uint64_t budget, uint64_t seed) {
    const Field& F = f.ctx();
    const int n = f.nvars();

    // codimension 0: the whole space
    {
        bool zero_level = false;
        std::optional<FqVec> l;
        switch (flavor) {
            case HFlavor::Single: zero_level = f.is_zero(); break;
            case HFlavor::System: zero_level = f.is_zero() && g->is_zero(); break;
            case HFlavor::Shift: {
                auto lw = linear_multiplier(f, *g);
                if (lw) {
                    zero_level = true;
                    l = *lw;
                }
                break;
            }
        }
        if (zero_level) return {SearchOut::Status::Witness, 0, HMode::Exact, FqMat{}, l};
    }

    // quadratic forms resolve exactly at any scale
    if (flavor == HFlavor::Single && f.total_degree() == 2 && F->p != 2) {
        auto an = analyze_quadratic(f);
        if (an.h > cap) return {SearchOut::Status::ProvenAbove, cap + 1, HMode::Exact, FqMat{}, {}};
        return {SearchOut::Status::Witness, an.h, HMode::Exact, an.annihilator, {}};
    }

    int exhausted_below = 1;
    for (int h = 1; h <= cap; h++) {
        if (!F->q_fits_u64 || subspace_count(F->q, n, h) > budget) break;
        bool found = false;
        FqMat wit;
        std::optional<FqVec> wl;
        for_each_codim_subspace(F, n, h, [&](const FqMat& forms) {
            std::optional<FqVec> l;
            if (holds_on_subspace(f, g, flavor, forms, &l)) {
                found = true;
                wit = forms;
                wl = l;
                return true;
            }
            return false;
        });
        if (found) return {SearchOut::Status::Witness, h, HMode::Exact, wit, wl};
        exhausted_below = h + 1;
    }
    if (exhausted_below > cap) return {SearchOut::Status::ProvenAbove, cap + 1, HMode::Exact, FqMat{}, {}};

    // budget ran out: seeded probes for an upper bound; a hit at the first
    // unexplored level is still the exact minimum
    Rng rng(Rng(seed).child("h-probe").next());
    for (int level = exhausted_below; level <= cap; level++) {
        auto hit = probe_level(f, g, flavor, level, rng);
        if (hit) {
            hit->mode = level == exhausted_below ? HMode::Exact : HMode::UpperBound;
            return *hit;
        }
    }
    return {SearchOut::Status::Presumed, cap + 1, HMode::UpperBound, FqMat{}, {}};
}

HCertificate to_cert(const SearchOut& so) {
    HCertificate c;
    c.h = so.h;
    c.mode = so.mode;
    c.forms = so.forms;
    c.l = so.l;
    return c;
}

// exhaustive fallback witness: every form vanishes on the zero subspace
SearchOut trivial_witness(const Field& F, int n) {
    return {SearchOut::Status::Witness, n, HMode::UpperBound, mat_identity(F, n), FqVec(n, FqElem::zero(F))};
}

} // namespace

HCertificate h_invariant(const Polynomial<FqElem>& f, uint64_t budget, uint64_t seed) {
    if (f.is_zero()) return HCertificate{0, HMode::Exact, {}, {}};
    auto so = h_search(f, nullptr, HFlavor::Single, f.nvars(), budget, seed);
    if (so.status != SearchOut::Status::Witness) so = trivial_witness(f.ctx(), f.nvars());
    return to_cert(so);
}

HCertificate h_invariant_system(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g,
                                uint64_t budget, uint64_t seed) {
    if (f.is_zero() && g.is_zero())
        throw DimensionMismatch("h_invariant_system: both forms are zero");
    auto so = h_search(f, &g, HFlavor::System, f.nvars(), budget, seed);
    if (so.status != SearchOut::Status::Witness) so = trivial_witness(f.ctx(), f.nvars());
    return to_cert(so);
}

std::string ReducedReport::str() const {
    auto one = [](const char* name, const HCertificate& c, bool sat, int threshold) {
        std::string s = std::string(name);
        if (sat) {
            s += " > " + std::to_string(threshold);
            s += c.mode == HMode::Exact ? " (exact)" : " (bound)";
        } else {
            s += " = " + std::to_string(c.h);
            s += c.mode == HMode::Exact ? " (exact witness)" : " (witness, upper bound)";
        }
        return s;
    };
    return one("h(g)", h_g, sat_g, 2) + ", " + one("h(f-lg)", h_f_shift, sat_f, 3) + ", " +
           one("h(f,g)", h_system, sat_sys, 5);
}

ReducedReport check_reduced(const PadicSystem& S, uint64_t budget, uint64_t seed) {
    auto [f, g] = reduce_mod_p(S);
    ReducedReport r;
    auto run = [&](const Polynomial<FqElem>& a, const Polynomial<FqElem>* b, HFlavor fl, int cap,
                   const char* tag) {
        // degenerate zero cases resolve to h = 0 inside h_search
        return h_search(a, b, fl, cap, budget, Rng(seed).child(tag).next());
    };
    auto sg = run(g, nullptr, HFlavor::Single, 2, "hg");
    auto sf = run(f, &g, HFlavor::Shift, 3, "hfs");
    auto ss = run(f, &g, HFlavor::System, 5, "hsys");
    r.h_g = to_cert(sg);
    r.sat_g = sg.status != SearchOut::Status::Witness;
    r.h_f_shift = to_cert(sf);
    r.sat_f = sf.status != SearchOut::Status::Witness;
    r.h_system = to_cert(ss);
    r.sat_sys = ss.status != SearchOut::Status::Witness;
    return r;
}

const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::QuadMove: return "QuadMove";
        case MoveKind::CubicMove: return "CubicMove";
        case MoveKind::BothMove: return "BothMove";
    }
    return "?";
}

std::string ReductionMove::transcript_line() const {
    return std::string(move_kind_name(kind)) + " " + std::to_string(c1) + " " + std::to_string(c2) +
           " " + std::to_string(s) + " " + std::to_string(s);
}

bool move_progress(const ReductionMove& m, const OmegaWeights& w) {
    // c1 w1 + c2 w2 - s > 0 in exact arithmetic
    long lhs = m.c1 * w.w1_num * w.w2_den + m.c2 * w.w2_num * w.w1_den;
    long rhs = static_cast<long>(m.s) * w.w1_den * w.w2_den;
    return lhs > rhs;
}

PadicSystem apply_move(const PadicSystem& S, const ReductionMove& m) {
    if (!move_progress(m))
        throw Error("reduction move violates the order condition (internal)");
    const Ring& R = S.ring;
    if (R->N < 2) throw PrecisionExhausted("apply_move: no precision left to divide by p");
    const int n = S.n;

    // tau = lift(basis) * diag(p,...,p,1,...,1) with s leading scalings
    std::vector<std::vector<PadicInt>> M(n, std::vector<PadicInt>(n, PadicInt::zero(R)));
    const PadicInt pp = PadicInt::from_int(R, R->p);
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) {
            M[i][j] = PadicInt::from_residue(R, m.basis[i][j]);
            if (j < m.s) M[i][j] = M[i][j] * pp;
        }

    Polynomial<PadicInt> Fz(R, n), Gz(R, n);
    {
        Polynomial<PadicInt> Fsrc = S.F;
        if (m.kind == MoveKind::CubicMove && m.l) {
            Polynomial<PadicInt> L(R, n);
            for (int j = 0; j < n; j++) {
                Mono mo(n, 0);
                mo[j] = 1;
                L.add_term(mo, PadicInt::from_residue(R, (*m.l)[j]));
            }
            Fsrc = Fsrc - L * S.G;
        }
        Fz = substitute_linear(Fsrc, M);
        Gz = substitute_linear(S.G, M);
    }

    Ring target = R->at_precision(R->N - 1);
    auto div_p = [&](const Polynomial<PadicInt>& f) {
        Polynomial<PadicInt> out(target, f.nvars());
        for (auto& [mo, c] : f.terms()) out.add_term(mo, c.exact_div_p(target));
        return out;
    };

    Polynomial<PadicInt> Fp(target, n), Gp(target, n);
    switch (m.kind) {
        case MoveKind::QuadMove:
            Fp = reduce_poly_precision(Fz, target);
            Gp = div_p(Gz);
            break;
        case MoveKind::CubicMove:
            Fp = div_p(Fz);
            Gp = reduce_poly_precision(Gz, target);
            break;
        case MoveKind::BothMove:
            Fp = div_p(Fz);
            Gp = div_p(Gz);
            break;
    }
    try {
        return PadicSystem::make(target, std::move(Fp), std::move(Gp));
    } catch (const DimensionMismatch&) {
        throw PrecisionExhausted("apply_move: system vanished at working precision");
    }
}

ReduceResult reduce_fully(const PadicSystem& S, uint64_t budget, int max_moves, uint64_t seed) {
    ReduceResult out{S, {}, {}};
    for (int step = 0;; step++) {
        auto [f, g] = reduce_mod_p(out.system);
        const Field& F = f.ctx();
        const int n = out.system.n;
        Rng rng(Rng(seed).child("reduce").next() ^ static_cast<uint64_t>(step));

        auto sg = h_search(g, nullptr, HFlavor::Single, 2, budget, rng.next());
        std::optional<ReductionMove> mv;
        if (sg.status == SearchOut::Status::Witness) {
            ReductionMove m;
            m.kind = MoveKind::QuadMove;
            m.c1 = 0;
            m.c2 = 1;
            m.s = sg.h;
            m.basis = *mat_inverse(complete_rows_to_invertible(F, sg.forms, n));
            mv = m;
        }
        if (!mv) {
            auto sf = h_search(f, &g, HFlavor::Shift, 3, budget, rng.next());
            if (sf.status == SearchOut::Status::Witness) {
                ReductionMove m;
                m.kind = MoveKind::CubicMove;
                m.c1 = 1;
                m.c2 = 0;
                m.s = sf.h;
                m.basis = *mat_inverse(complete_rows_to_invertible(F, sf.forms, n));
                m.l = sf.l;
                mv = m;
            }
        }
        if (!mv) {
            auto ss = h_search(f, &g, HFlavor::System, 5, budget, rng.next());
            if (ss.status == SearchOut::Status::Witness) {
                ReductionMove m;
                m.kind = MoveKind::BothMove;
                m.c1 = 1;
                m.c2 = 1;
                m.s = ss.h;
                m.basis = *mat_inverse(complete_rows_to_invertible(F, ss.forms, n));
                mv = m;
            }
        }
        if (!mv) break;
        if (step >= max_moves)
            throw PrecisionExhausted("reduce_fully: move cap " + std::to_string(max_moves) +
                                     " hit; input looks bottomless at this precision");
        out.moves.push_back(*mv);
        out.system = apply_move(out.system, *mv);
    }
    out.report = check_reduced(out.system, budget, seed);
    return out;
}

std::pair<std::vector<PadicInt>, int> pull_back(const std::vector<ReductionMove>& moves,
                                                const std::vector<PadicInt>& x0) {
    std::vector<PadicInt> x = x0;
    if (x.empty()) return {x, 0};
    Ring R = x[0].ring();
    const int n = static_cast<int>(x.size());
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
        const PadicInt pp = PadicInt::from_int(R, R->p);
        std::vector<PadicInt> y(n, PadicInt::zero(R));
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                PadicInt e = PadicInt::from_residue(R, it->basis[i][j]);
                if (j < it->s) e = e * pp;
                y[i] = y[i] + e * x[j];
            }
        }
        x = std::move(y);
    }
    int strip = R->N;
    for (auto& c : x) strip = std::min(strip, c.valuation());
    if (strip >= R->N)
        throw PrecisionExhausted("pull_back: transported point vanished at working precision");
    for (int t = 0; t < strip; t++) {
        Ring lower = R->at_precision(R->N - 1);
        for (auto& c : x) c = c.exact_div_p(lower);
        R = lower;
    }
    return {x, strip};
}

} // namespace cq
