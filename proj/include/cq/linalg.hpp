#pragma once

#include <optional>
#include <vector>

#include "cq/fq.hpp"
#include "cq/polynomial.hpp"

namespace cq {

// dense row-major matrices over F_q; sizes here stay tiny (n <= 64)
using FqVec = std::vector<FqElem>;
using FqMat = std::vector<FqVec>;

FqMat mat_identity(const Field& F, int n);
FqMat mat_mul(const FqMat& A, const FqMat& B);
FqVec mat_vec(const FqMat& A, const FqVec& x);
FqMat mat_transpose(const FqMat& A);

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref_inplace(FqMat& A);
int mat_rank(FqMat A);
std::optional<FqMat> mat_inverse(const FqMat& A);
// basis of { x : A x = 0 }
std::vector<FqVec> kernel_basis(const FqMat& A);

// invertible matrix whose first rows are the given independent rows
FqMat complete_rows_to_invertible(const Field& F, const FqMat& rows, int n);

// f(M y) with M square or rectangular, entries over the same field
Polynomial<FqElem> apply_matrix(const Polynomial<FqElem>& f, const FqMat& M);

// rank of the 2 x n matrix (grad f; grad g) at x
int jacobian_rank(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g, const FqVec& x);

} // namespace cq
