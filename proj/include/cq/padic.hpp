#pragma once

#include <memory>

#include "cq/fq.hpp"
#include "cq/polynomial.hpp"

namespace cq {

class PadicRing;
using Ring = std::shared_ptr<const PadicRing>;

// O_K / p^N for K unramified over Q_p of degree k, realized as
// (Z/p^N)[t] modulo the canonical lift of the residue-field modulus.
// The uniformizer is p itself.
class PadicRing : public std::enable_shared_from_this<PadicRing> {
public:
    int64_t p;
    int k;
    std::vector<int64_t> modulus; // same convention as FqField
    int N;                        // precision: elements live mod p^N
    mpz_class pN;
    Field residue;

    static Ring make(const Field& residue_field, int N);
    Ring at_precision(int N2) const { return make(residue, N2); }
    bool same(const PadicRing& o) const {
        return this == &o || (p == o.p && modulus == o.modulus && N == o.N);
    }
    std::string describe() const;

private:
    PadicRing() = default;
};

class PadicInt {
public:
    using Ctx = Ring;

    PadicInt() = default;
    PadicInt(Ring r, std::vector<mpz_class> rep) : ring_(std::move(r)), rep_(std::move(rep)) {}

    static PadicInt zero(const Ring& r) { return PadicInt(r, std::vector<mpz_class>(r->k, 0)); }
    static PadicInt one(const Ring& r) { return from_int(r, 1); }
    static PadicInt from_int(const Ring& r, int64_t v);
    static PadicInt from_int(const Ring& r, const mpz_class& v);
    static PadicInt from_residue(const Ring& r, const FqElem& a); // canonical lift

    const Ring& ring() const { return ring_; }
    const std::vector<mpz_class>& rep() const { return rep_; }
    bool is_zero() const;
    bool is_unit() const { return valuation() == 0; }

    PadicInt operator+(const PadicInt& o) const;
    PadicInt operator-(const PadicInt& o) const;
    PadicInt operator-() const;
    PadicInt operator*(const PadicInt& o) const;
    PadicInt inv() const; // units only, throws DivisionByZero otherwise
    bool operator==(const PadicInt& o) const;
    bool operator!=(const PadicInt& o) const { return !(*this == o); }

    // largest s <= N with p^s | a; the zero residue gets N by convention
    int valuation() const;
    FqElem reduce_mod_p() const;
    // reinterpret at another precision: truncates downward, extends upward
    // by the canonical representative
    PadicInt at_precision(const Ring& r2) const;
    // exact division by p, landing one digit lower; throws NonIntegralResult
    PadicInt exact_div_p(const Ring& target) const;

    std::string str() const;

private:
    void check_same(const PadicInt& o) const;
    Ring ring_;
    std::vector<mpz_class> rep_;
};

// the pair (F, G) of a cubic and quadratic form over O_K at fixed precision
struct PadicSystem {
    Ring ring;
    int n = 0;
    Polynomial<PadicInt> F; // degree 3
    Polynomial<PadicInt> G; // degree 2

    static PadicSystem make(Ring ring, Polynomial<PadicInt> F, Polynomial<PadicInt> G);
};

std::pair<Polynomial<FqElem>, Polynomial<FqElem>> reduce_mod_p(const PadicSystem& S);
std::pair<PadicInt, PadicInt> evaluate_system(const PadicSystem& S, const std::vector<PadicInt>& x);
Polynomial<PadicInt> reduce_poly_precision(const Polynomial<PadicInt>& f, const Ring& target);
Polynomial<PadicInt> lift_poly(const Polynomial<FqElem>& f, const Ring& target);

} // namespace cq
