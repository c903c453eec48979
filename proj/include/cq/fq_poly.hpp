#pragma once

#include <utility>
#include <vector>

#include "cq/fq.hpp"

namespace cq {

// Dense univariate polynomials over F_q, coefficients low-to-high with no
// trailing zeros.  The zero polynomial has an empty coefficient vector.
class FqPoly {
public:
    explicit FqPoly(Field f) : field_(std::move(f)) {}
    FqPoly(Field f, std::vector<FqElem> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
        trim();
    }

    static FqPoly x(const Field& f);
    static FqPoly constant(const FqElem& a);

    const Field& field() const { return field_; }
    const std::vector<FqElem>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const FqElem& coeff(int i) const;
    void set_coeff(int i, const FqElem& a);
    FqElem lead() const;
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    FqPoly operator+(const FqPoly& o) const;
    FqPoly operator-(const FqPoly& o) const;
    FqPoly operator*(const FqPoly& o) const;
    FqPoly operator*(const FqElem& a) const;
    bool operator==(const FqPoly& o) const { return c_ == o.c_; }

    FqPoly monic() const;
    FqPoly derivative() const;
    FqElem eval(const FqElem& at) const;
    std::pair<FqPoly, FqPoly> divmod(const FqPoly& g) const; // g != 0
    FqPoly mod(const FqPoly& g) const { return divmod(g).second; }
    FqPoly shift_arg(const FqElem& a) const; // f(x + a)

    std::string str() const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    Field field_;
    std::vector<FqElem> c_;
};

FqPoly poly_gcd(FqPoly a, FqPoly b); // monic gcd
FqPoly poly_powmod(const FqPoly& base, const mpz_class& e, const FqPoly& mod);
// inverse of a modulo m for gcd(a, m) = 1; throws DivisionByZero otherwise
FqPoly poly_invmod(const FqPoly& a, const FqPoly& m);

// irreducibility over the coefficient field (Rabin's criterion)
bool poly_irreducible(const FqPoly& f);

struct UnivariateFactorization {
    FqElem unit;                               // product of factors^mult times unit == input
    std::vector<std::pair<FqPoly, int>> factors; // monic irreducible, with multiplicity
};

// Complete factorization over F_q.  Odd characteristic only (the
// equal-degree split uses quadratic residues); throws EvenCharacteristic.
// Deterministic for a fixed seed.
UnivariateFactorization factor_univariate(const FqPoly& f, uint64_t seed = 0x66616374ull);

// all distinct roots in F_q, sorted by canonical rep
std::vector<FqElem> poly_roots(const FqPoly& f, uint64_t seed = 0x726f6f74ull);

// Embedding of a subfield into an extension with the same characteristic,
// computed from a root of src's modulus in dst.  Requires src->k | dst->k.
class FieldHom {
public:
    FieldHom(Field src, Field dst);
    const Field& src() const { return src_; }
    const Field& dst() const { return dst_; }
    FqElem map(const FqElem& a) const;
    FqPoly map_poly(const FqPoly& f) const;

private:
    Field src_, dst_;
    std::vector<FqElem> gen_powers_; // images of x^0..x^(k-1)
};

} // namespace cq
