#include "cq/quadform.hpp"

#include <cassert>

namespace cq {

FqMat gram_matrix(const Polynomial<FqElem>& g) {
    const Field& F = g.ctx();
    if (F->p == 2) throw EvenCharacteristic("quadratic form analysis needs odd characteristic");
    const int n = g.nvars();
    FqMat B(n, FqVec(n, FqElem::zero(F)));
    const FqElem half = FqElem::from_int(F, 2).inv();
    for (auto& [m, c] : g.terms()) {
        int i = -1, j = -1;
        for (int v = 0; v < n; v++) {
            if (m[v] == 2) i = j = v;
            else if (m[v] == 1) (i < 0 ? i : j) = v;
        }
        if (j < 0) throw DimensionMismatch("gram_matrix: input not quadratic");
        if (i == j) B[i][i] = c;
        else B[i][j] = B[j][i] = c * half;
    }
    return B;
}

namespace {

FqElem bilinear(const FqMat& B, const FqVec& u, const FqVec& v) {
    const Field& F = u[0].field();
    FqElem acc = FqElem::zero(F);
    for (size_t i = 0; i < u.size(); i++) {
        if (u[i].is_zero()) continue;
        for (size_t j = 0; j < v.size(); j++) acc = acc + u[i] * B[i][j] * v[j];
    }
    return acc;
}

// diagonalizing basis for the restriction of B to span(basis); the form is
// nondegenerate there, so every diagonal value comes out nonzero
FqMat diagonalize(const FqMat& B, FqMat basis) {
    FqMat diag;
    while (!basis.empty()) {
        const Field& F = basis[0][0].field();
        // find a vector with Q(v) != 0; for nondegenerate B one exists among
        // basis vectors and their pairwise sums (odd characteristic)
        int found = -1;
        for (size_t i = 0; i < basis.size(); i++)
            if (!bilinear(B, basis[i], basis[i]).is_zero()) {
                found = static_cast<int>(i);
                break;
            }
        FqVec v;
        if (found >= 0) {
            v = basis[found];
            basis.erase(basis.begin() + found);
        } else {
            // all basis vectors isotropic; some B(b_i, b_j) != 0 by nondegeneracy
            bool ok = false;
            for (size_t i = 0; i < basis.size() && !ok; i++)
                for (size_t j = i + 1; j < basis.size() && !ok; j++)
                    if (!bilinear(B, basis[i], basis[j]).is_zero()) {
                        v = basis[i];
                        for (size_t t = 0; t < v.size(); t++) v[t] = v[t] + basis[j][t];
                        basis.erase(basis.begin() + j);
                        ok = true;
                    }
            if (!ok) throw Error("diagonalize: degenerate block (internal)");
        }
        // project the rest off v
        FqElem qv = bilinear(B, v, v);
        FqElem qinv = qv.inv();
        for (auto& w : basis) {
            FqElem lam = bilinear(B, v, w) * qinv;
            for (size_t t = 0; t < w.size(); t++) w[t] = w[t] - lam * v[t];
        }
        diag.push_back(std::move(v));
    }
    return diag;
}

// isotropic vector inside span(diag) for the diagonalized nondegenerate
// block, or nullopt when the block is anisotropic (rank <= 2 only)
std::optional<FqVec> block_isotropic(const FqMat& B, const FqMat& diag) {
    const int r = static_cast<int>(diag.size());
    if (r == 0) return std::nullopt;
    const Field& F = diag[0][0].field();
    std::vector<FqElem> a;
    for (auto& d : diag) a.push_back(bilinear(B, d, d));
    if (r == 1) return std::nullopt;
    if (r == 2) {
        // a1 x^2 + a2 = 0 solvable iff -a2/a1 is a square
        auto s = fq_sqrt(-(a[1] * a[0].inv()));
        if (!s) return std::nullopt;
        FqVec v(diag[0].size(), FqElem::zero(F));
        for (size_t t = 0; t < v.size(); t++) v[t] = s->first * diag[0][t] + diag[1][t];
        return v;
    }
    // r >= 3: a1 x^2 + a2 y^2 + a3 = 0 always has a solution; scan y
    for (uint64_t yi = 0;; yi++) {
        if (F->q_fits_u64 && yi >= F->q64) throw Error("block_isotropic: scan exhausted (internal)");
        FqElem y = FqElem::from_index(F, yi);
        FqElem rhs = -(a[2] + a[1] * y * y) * a[0].inv();
        auto s = fq_sqrt(rhs);
        if (!s) continue;
        FqVec v(diag[0].size(), FqElem::zero(F));
        for (size_t t = 0; t < v.size(); t++) v[t] = s->first * diag[0][t] + y * diag[1][t] + diag[2][t];
        return v;
    }
}

} // namespace

QuadAnalysis analyze_quadratic(const Polynomial<FqElem>& g) {
    const Field& F = g.ctx();
    const int n = g.nvars();
    QuadAnalysis out;
    if (g.is_zero()) {
        out.isotropic_basis = mat_identity(F, n);
        return out;
    }
    FqMat B = gram_matrix(g);
    FqMat radical_rows = [&] {
        FqMat rows;
        for (auto& v : kernel_basis(B)) rows.push_back(v);
        return rows;
    }();
    out.rank = n - static_cast<int>(radical_rows.size());

    // complement of the radical, carried as explicit vectors
    FqMat full = complete_rows_to_invertible(F, radical_rows, n);
    FqMat block(full.begin() + radical_rows.size(), full.end());

    FqMat isotropic = radical_rows;
    while (true) {
        FqMat diag = diagonalize(B, block);
        auto v = block_isotropic(B, diag);
        if (!v) break;
        // hyperbolic partner: some u in the block with B(v, u) != 0
        int ui = -1;
        for (size_t i = 0; i < block.size(); i++)
            if (!bilinear(B, *v, block[i]).is_zero()) {
                ui = static_cast<int>(i);
                break;
            }
        assert(ui >= 0);
        FqVec u = block[ui];
        FqElem bvu = bilinear(B, *v, u);
        FqElem qu = bilinear(B, u, u);
        FqElem half = FqElem::from_int(F, 2).inv();
        // u' = u - (Q(u) / (2 B(v,u))) v is isotropic with B(v, u') = B(v, u)
        FqElem lam = qu * half * bvu.inv();
        for (size_t t = 0; t < u.size(); t++) u[t] = u[t] - lam * (*v)[t];
        // project the rest of the block off the hyperbolic plane span(v, u)
        FqMat next;
        FqElem bvu_inv = bvu.inv();
        for (auto& w : block) {
            FqVec w2 = w;
            FqElem c1 = bilinear(B, u, w) * bvu_inv;  // coefficient on v
            FqElem c2 = bilinear(B, *v, w) * bvu_inv; // coefficient on u
            for (size_t t = 0; t < w2.size(); t++) w2[t] = w2[t] - c1 * (*v)[t] - c2 * u[t];
            next.push_back(std::move(w2));
        }
        // keep an independent subset of the projected vectors (v and u project
        // to zero, dropping the block dimension by two)
        FqMat kept;
        for (auto& w : next) {
            FqMat trial = kept;
            trial.push_back(w);
            if (mat_rank(std::move(trial)) > static_cast<int>(kept.size())) kept.push_back(w);
        }
        block = std::move(kept);
        isotropic.push_back(*v);
        out.witt++;
    }

    out.h = out.rank - out.witt;
    out.isotropic_basis = isotropic;
    if (isotropic.empty()) {
        // no nonzero vector where g vanishes; annihilator is everything
        out.annihilator = mat_identity(F, n);
    } else {
        for (auto& row : kernel_basis(isotropic)) out.annihilator.push_back(row);
    }
    return out;
}

std::optional<FqVec> find_quadric_zero(const Polynomial<FqElem>& g) {
    auto an = analyze_quadratic(g);
    if (an.isotropic_basis.empty()) return std::nullopt;
    return an.isotropic_basis[0];
}

} // namespace cq
