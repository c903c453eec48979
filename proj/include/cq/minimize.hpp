#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cq/padic.hpp"
#include "cq/quadform.hpp"

namespace cq {

// weights of the reduction order; defaults are d_i + 1/6 for (cubic,
// quadratic), the epsilon = 1/(r d_max) choice with r = 2, d_max = 3
struct OmegaWeights {
    long w1_num = 19, w1_den = 6; // omega_1 = 3 + 1/6
    long w2_num = 13, w2_den = 6; // omega_2 = 2 + 1/6
};

enum class HMode { Exact, UpperBound };

// Certificate for an h-invariant value: h independent linear forms whose
// ideal contains the form(s), plus the shift form l when the f - l g variant
// was searched.  Exact mode only when the subspace search space was
// exhausted (or the quadratic classifier applied, which is always exact).
struct HCertificate {
    int h = 0;
    HMode mode = HMode::UpperBound;
    FqMat forms;                // h rows; the ideal generators / annihilator
    std::optional<FqVec> l;     // linear shift witness (Shift flavor)
};

// h(f): minimal codimension of a linear subspace on which f vanishes
// identically.  Degree-2 inputs always resolve exactly through the
// quadratic-form classifier; otherwise codimensions are enumerated while
// the subspace count stays within budget, after which seeded probes give an
// upper bound.
HCertificate h_invariant(const Polynomial<FqElem>& f, uint64_t budget = 2000000,
                         uint64_t seed = 0x68696e76ull);

// h(f, g): minimal codim of a subspace where g and f - l g vanish for some
// linear form l; since l g vanishes wherever g does, this is the minimal
// codim where both f and g vanish.
HCertificate h_invariant_system(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g,
                                uint64_t budget = 2000000, uint64_t seed = 0x6873797aull);

struct ReducedReport {
    HCertificate h_g;       // tested against > 2
    HCertificate h_f_shift; // min over l of h(f - l g), tested against > 3
    HCertificate h_system;  // tested against > 5
    bool sat_g = false, sat_f = false, sat_sys = false;
    bool all() const { return sat_g && sat_f && sat_sys; }
    std::string str() const;
};

ReducedReport check_reduced(const PadicSystem& S, uint64_t budget = 2000000,
                            uint64_t seed = 0x72647563ull);

enum class MoveKind { QuadMove, CubicMove, BothMove };

const char* move_kind_name(MoveKind k);

// One application of (T, tau): a residue-level basis change A, the count of
// coordinates scaled by p (= s = v(det tau)), and the optional linear form
// entering T.  Scaled coordinates are always the first |scaled| in the new
// basis.  c and s satisfy the order condition c1 w1 + c2 w2 - s > 0.
struct ReductionMove {
    MoveKind kind = MoveKind::QuadMove;
    int c1 = 0, c2 = 0;
    int s = 0;                  // = number of scaled coordinates = v(det tau)
    FqMat basis;                // n x n invertible over F_q: f'(y) = f(A y)
    std::optional<FqVec> l;     // residue linear form for the F - L G shift
    std::string transcript_line() const; // "kind c1 c2 s det_valuation"
};

bool move_progress(const ReductionMove& m, const OmegaWeights& w = {});

// Executes the move on the p-adic system.  Output precision drops by one
// when a form is divided by p.  Throws NonIntegralResult when the witness
// fails to make the scaled form divisible.
PadicSystem apply_move(const PadicSystem& S, const ReductionMove& m);

struct ReduceResult {
    PadicSystem system;
    std::vector<ReductionMove> moves;
    ReducedReport report; // for the final system
};

// Applies moves until check_reduced holds (exactly, or presumed under
// budget).  Throws PrecisionExhausted when moves run the precision down or
// the move count passes max_moves.
ReduceResult reduce_fully(const PadicSystem& S, uint64_t budget = 2000000, int max_moves = 64,
                          uint64_t seed = 0x72647563ull);

// Transport of a zero of the reduced system to original coordinates,
// through the recorded moves in reverse; the returned valuation is the
// p-content stripped from the pulled-back point (precision spent).
std::pair<std::vector<PadicInt>, int> pull_back(const std::vector<ReductionMove>& moves,
                                                const std::vector<PadicInt>& x);

// Gaussian binomial [n choose h]_q, the number of codim-h subspaces
mpz_class subspace_count(const mpz_class& q, int n, int h);

// enumeration of codim-h subspaces via RREF annihilator representatives;
// fn returns true to stop; returns true if stopped
bool for_each_codim_subspace(const Field& F, int n, int h,
                             const std::function<bool(const FqMat&)>& fn);

// particular solution x of A x = b, free variables zeroed
std::optional<FqVec> solve_linear_system(const FqMat& A, const FqVec& b);

// linear form ell with f == ell * g, if one exists
std::optional<FqVec> linear_multiplier(const Polynomial<FqElem>& f, const Polynomial<FqElem>& g);

} // namespace cq
