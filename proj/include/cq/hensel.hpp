#pragma once

#include <array>

#include "cq/padic.hpp"
#include "cq/residue.hpp"

namespace cq {

struct LiftResult {
    std::vector<PadicInt> x;       // zero of (F, G) at the target precision
    std::array<int, 2> pivot;      // coordinates Newton iterated on
    int residual_valuation_F = 0;  // v(F(x)), = N on success
    int residual_valuation_G = 0;
    std::vector<int> step_residuals; // min residual valuation after each Newton step
};

// Multivariate Hensel lift on a square 2x2 subsystem: the lexicographically
// first invertible 2x2 minor of the Jacobian mod p picks two coordinates,
// the others freeze at canonical lifts, and Newton doubles the working
// precision each step (1 -> 2 -> 4 -> ... -> N).  Residuals are verified
// exactly before returning.  Throws SingularJacobian when the residue zero
// has Jacobian rank < 2.
LiftResult lift(const PadicSystem& S, const ResidueSolution& x0, int target_precision);

} // namespace cq
