#pragma once

#include "cq/fq_poly.hpp"
#include "cq/polynomial.hpp"

namespace cq {

struct BivariateFactorization {
    FqElem unit;                                          // scalar with unit * prod factors^mult == input
    std::vector<std::pair<Polynomial<FqElem>, int>> factors; // irreducible over F_q, with multiplicity
};

// Factorization over F_q of a nonzero polynomial in two variables.
//
// Route: strip univariate contents, shear to make the input monic in Y,
// factor a squarefree specialization P(x0, Y), Hensel-lift the factor set
// X-adically to degree precision, then recombine lifted factors by trial
// division.  Specializations walk a seeded sequence; if no squarefree
// specialization exists over F_q the lift runs over a small extension and
// Frobenius orbits are merged back down.
//
// Restrictions: odd characteristic and p > total degree (both guarded).
BivariateFactorization factor_bivariate(const Polynomial<FqElem>& P, uint64_t seed = 0x62697661ull);

// True iff P stays irreducible over the algebraic closure.  P must be
// irreducible over F_q to start; conjugate factors of an F_q-irreducible
// polynomial of degree d live in F_{q^r} with r | d, so the check
// re-factors over each F_{q^r}.  Guard: d <= 8.
bool is_absolutely_irreducible(const Polynomial<FqElem>& P, int expected_degree = -1,
                               uint64_t seed = 0x61627369ull);

} // namespace cq
