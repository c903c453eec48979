#include "cq/linalg.hpp"

namespace cq {

FqMat mat_identity(const Field& F, int n) {
    FqMat I(n, FqVec(n, FqElem::zero(F)));
    for (int i = 0; i < n; i++) I[i][i] = FqElem::one(F);
    return I;
}

FqMat mat_mul(const FqMat& A, const FqMat& B) {
    const int n = static_cast<int>(A.size());
    const int m = static_cast<int>(B[0].size());
    const int k = static_cast<int>(B.size());
    const Field& F = A[0][0].field();
    FqMat C(n, FqVec(m, FqElem::zero(F)));
    for (int i = 0; i < n; i++)
        for (int l = 0; l < k; l++) {
            if (A[i][l].is_zero()) continue;
            for (int j = 0; j < m; j++) C[i][j] = C[i][j] + A[i][l] * B[l][j];
        }
    return C;
}

FqVec mat_vec(const FqMat& A, const FqVec& x) {
    const Field& F = x.at(0).field();
    FqVec y(A.size(), FqElem::zero(F));
    for (size_t i = 0; i < A.size(); i++)
        for (size_t j = 0; j < x.size(); j++) y[i] = y[i] + A[i][j] * x[j];
    return y;
}

FqMat mat_transpose(const FqMat& A) {
    const int n = static_cast<int>(A.size());
    const int m = static_cast<int>(A[0].size());
    FqMat T(m, FqVec(n, FqElem::zero(A[0][0].field())));
    for (int i = 0; i < n; i++)
        for (int j = 0; j < m; j++) T[j][i] = A[i][j];
    return T;
}

std::vector<int> rref_inplace(FqMat& A) {
    std::vector<int> pivots;
    if (A.empty()) return pivots;
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; c++) {
        int sel = -1;
        for (int i = r; i < rows; i++)
            if (!A[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(A[sel], A[r]);
        FqElem inv = A[r][c].inv();
        for (int j = 0; j < cols; j++) A[r][j] = A[r][j] * inv;
        for (int i = 0; i < rows; i++) {
            if (i == r || A[i][c].is_zero()) continue;
            FqElem f = A[i][c];
            for (int j = 0; j < cols; j++) A[i][j] = A[i][j] - f * A[r][j];
        }
        pivots.push_back(c);
        r++;
    }
    return pivots;
}

int mat_rank(FqMat A) {
    return static_cast<int>(rref_inplace(A).size());
}

std::optional<FqMat> mat_inverse(const FqMat& A) {
    const int n = static_cast<int>(A.size());
    const Field& F = A[0][0].field();
    FqMat aug(n, FqVec(2 * n, FqElem::zero(F)));
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) aug[i][j] = A[i][j];
        aug[i][n + i] = FqElem::one(F);
    }
    auto piv = rref_inplace(aug);
    if (static_cast<int>(piv.size()) != n || piv.back() != n - 1) return std::nullopt;
    FqMat inv(n, FqVec(n, FqElem::zero(F)));
    for (int i = 0; i < n; i++)
        for (int j = 0; j < n; j++) inv[i][j] = aug[i][n + j];
    return inv;
}

std::vector<FqVec> kernel_basis(const FqMat& A) {
    FqMat R = A;
    const int cols = static_cast<int>(A[0].size());
    const Field& F = A[0][0].field();
    auto pivots = rref_inplace(R);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<FqVec> basis;
    for (int free = 0; free < cols; free++) {
        if (is_pivot[free]) continue;
        FqVec v(cols, FqElem::zero(F));
        v[free] = FqElem::one(F);
        for (size_t r = 0; r < pivots.size(); r++) v[pivots[r]] = -R[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

FqMat complete_rows_to_invertible(const Field& F, const FqMat& rows, int n) {
    if (rows.empty()) return mat_identity(F, n);
    FqMat R = rows;
    auto pivots = rref_inplace(R);
    if (pivots.size() != rows.size()) throw Error("complete_rows_to_invertible: dependent rows");
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    FqMat out = rows;
    for (int c = 0; c < n; c++) {
        if (is_pivot[c]) continue;
        FqVec e(n, FqElem::zero(F));
        e[c] = FqElem::one(F);
        out.push_back(std::move(e));
    }
    if (static_cast<int>(out.size()) != n) throw Error("complete_rows_to_invertible: bad arity");
    return out;
}

Polynomial<FqElem> apply_matrix(const Polynomial<FqElem>& f, const FqMat& M) {
    return substitute_linear(f, M);
}

int jacobian_rank(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g, const FqVec& x) {
    FqMat J{f.gradient(x), g.gradient(x)};
    return mat_rank(std::move(J));
}

} // namespace cq
