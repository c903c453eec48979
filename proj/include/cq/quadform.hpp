#pragma once

#include "cq/linalg.hpp"

namespace cq {

// Exact structure of a quadratic form over F_q, odd characteristic: rank,
// Witt index, and an explicit maximal totally isotropic subspace.  The
// h-invariant of a quadratic form is rank - witt, the codimension of that
// subspace, so this engine gives exact h-certificates for quadratics at any
// size where generic subspace enumeration is hopeless.
struct QuadAnalysis {
    int rank = 0;
    int witt = 0;
    int h = 0;                 // rank - witt = codim of the maximal isotropic subspace
    FqMat isotropic_basis;     // (n - h) rows spanning a subspace where g vanishes
    FqMat annihilator;         // h independent linear forms cutting that subspace out
};

// Gram matrix B with g(x) = x^T B x; throws EvenCharacteristic for p = 2
FqMat gram_matrix(const Polynomial<FqElem>& g);

QuadAnalysis analyze_quadratic(const Polynomial<FqElem>& g);

// some nonzero v with g(v) = 0, or nullopt when the form is anisotropic
// (possible only for rank <= 2 plus trivial radical)
std::optional<FqVec> find_quadric_zero(const Polynomial<FqElem>& g);

} // namespace cq
