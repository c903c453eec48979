#pragma once

#include <string>

#include "cq/bivariate.hpp"
#include "cq/enumerate.hpp"
#include "cq/forms.hpp"

namespace cq {

enum class LemmaTag { Warning, Schmidt, LeepYeomans, CafureMatera };

const char* lemma_name(LemmaTag t);

// One verified instance of a counting lemma: the exact count (or bad-slice
// count), the bound the lemma asserts, and whether the inequality held.
// These are theorems, so a failing report means an implementation bug.
struct CountReport {
    LemmaTag lemma;
    mpz_class count;
    mpz_class bound;
    bool pass = false;
    std::string q;
    std::string params; // "m=6 d=5" style, for the CSV
    std::string csv_row() const;
};

// exact number of common affine zeros by full enumeration
uint64_t count_affine_zeros(const std::vector<Polynomial<FqElem>>& system, int m,
                            uint64_t budget = 100000000ull);

// system of forms in m > sum(deg) variables has at least q^(m - sum deg) zeros
CountReport verify_warning(const std::vector<Polynomial<FqElem>>& system, int m,
                           uint64_t budget = 100000000ull);

// a nonzero polynomial of degree d has at most d q^(m-1) affine zeros
CountReport verify_schmidt(const Polynomial<FqElem>& f, int m, int d,
                           uint64_t budget = 100000000ull);

// absolutely irreducible plane curve of degree d has at least
// q + 1 - (d-1)(d-2)/2 * floor(2 sqrt q) nonsingular projective points
CountReport verify_leep_yeomans(const Polynomial<FqElem>& P, int d);

// fraction of slices of an absolutely irreducible hypersurface that fail to
// stay absolutely irreducible is at most (3d^4 - 4d^3 + 5d^2)/2 / q
CountReport cafure_matera_fraction(const Polynomial<FqElem>& P, int d, int trials, uint64_t seed);

// floor(2 sqrt q) via exact integer square root
mpz_class floor_two_sqrt(const mpz_class& q);
// (3 d^4 - 4 d^3 + 5 d^2) / 2
int64_t cafure_matera_numerator(int d);

// nonsingular projective zeros of a ternary form, by enumeration of the
// q^2 + q + 1 canonical representatives
uint64_t count_nonsingular_projective(const Polynomial<FqElem>& ternary_form);

// homogenization of a bivariate polynomial to a ternary form of degree d
Polynomial<FqElem> homogenize_to_ternary(const Polynomial<FqElem>& P, int d);

} // namespace cq
