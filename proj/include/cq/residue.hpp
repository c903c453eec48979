#pragma once

#include <optional>
#include <string>

#include "cq/bivariate.hpp"
#include "cq/forms.hpp"
#include "cq/linalg.hpp"
#include "cq/quadform.hpp"

namespace cq {

enum class Stage { Step1Direct, Step2, Step3 };
const char* stage_name(Stage s);

// A verified nonsingular common zero over the residue field: f = g = 0,
// x != 0, and the 2 x n Jacobian (grad f; grad g) has rank 2.
struct ResidueSolution {
    FqVec x;
    int jacobian_rank = 0;
    Stage stage = Stage::Step1Direct;
};

// per-stage trial counters, surfaced through the CLI diagnostics stream
struct ResidueDiagnostics {
    int planes_tried = 0;        // step 1 random planes
    int spaces_tried = 0;        // step 1 structured 3-spaces
    int deg0_trials = 0;         // step 2 point searches
    int slices_tried = 0;        // step 3 slices drawn
    int slices_reducible = 0;    // rejected: slice not absolutely irreducible
    int slices_x2_vanishing = 0; // rejected: sliced x2 coordinate identically zero
    int slices_no_point = 0;     // accepted slice with no usable curve point
    std::string str() const;
};

// Normal shapes after Steps 1-2 of the search: g = x1 x2 + g2(x3..) exactly,
// and f either free of x1 (deg0) or x1 f2(x3..) + f3(x2..) (deg1).
struct NormalizedSystem {
    FqMat tau; // accumulated basis change: this->f(y) = f_orig(tau y)
    bool deg1 = false;
    Polynomial<FqElem> f, g;   // full forms in normalized coordinates
    Polynomial<FqElem> f2;     // quadratic in x3.. (zero in deg0 shape)
    Polynomial<FqElem> f3;     // cubic in x2..
    Polynomial<FqElem> g2;     // quadratic in x3..
};

struct NormalizeOutcome {
    std::optional<ResidueSolution> early; // e1 itself was nonsingular
    std::optional<NormalizedSystem> ns;
};

// Step 1: a common zero with grad g != 0, by seeded random plane
// restriction (a cubic and a conic meet in few points; enumerate the
// q^2+q+1 plane points), with structured 3-space slices as fallback.
FqVec find_zero_with_gradient(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g,
                              uint64_t seed, ResidueDiagnostics* diag = nullptr);

// Step 1 -> 2 bridge: move e1 to the first basis vector, bring g to
// x1 x2 + g2(x3..), drop f's x1-degree to <= 1, purge x2 from f2.
NormalizeOutcome normalize(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g, const FqVec& e1);

// Step 2 (deg0 shape): nonsingular zero of f with x2 != 0, then
// x1 = -x2^{-1} g2; all four cases of delta = deg_x2 f.
ResidueSolution solve_deg0(const NormalizedSystem& ns, uint64_t seed,
                           ResidueDiagnostics* diag = nullptr);

// the quartic x2 f3(x2..) - (f2 g2)(x3..), in variables x2..xn
Polynomial<FqElem> build_H(const NormalizedSystem& ns);

// Step 3 (deg1 shape): seeded slices of H to plane curves, absolute
// irreducibility guard, nonsingular curve point with x2 != 0, pulled back
// through the quartic identity.
ResidueSolution solve_deg1(const NormalizedSystem& ns, uint64_t seed,
                           ResidueDiagnostics* diag = nullptr);

// full composition; output re-verified before return
ResidueSolution solve_residue(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g,
                              uint64_t seed, ResidueDiagnostics* diag = nullptr);

// nonsingular zero of a cubic form (n >= 1 variables), used by step 2;
// essential-variable reduction plus the zero-then-shift recipe
FqVec nonsingular_cubic_zero(const Polynomial<FqElem>& f, uint64_t seed);

} // namespace cq
