#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cq/errors.hpp"
#include "cq/rng.hpp"

namespace cq {

class FqField;
using Field = std::shared_ptr<const FqField>;

// F_q, q = p^k, elements in the canonical reduced polynomial basis mod a
// monic irreducible modulus over F_p.  Handles are immutable once built.
class FqField : public std::enable_shared_from_this<FqField> {
public:
    int64_t p;                    // prime characteristic
    int k;                        // extension degree >= 1
    std::vector<int64_t> modulus; // monic degree k, coeffs in [0,p) low-to-high; x for k == 1
    mpz_class q;                  // p^k exactly
    bool q_fits_u64;
    uint64_t q64;                 // valid when q_fits_u64

    // modulus omitted and k > 1: deterministic seeded irreducible search
    static Field make(int64_t p, int k,
                      std::optional<std::vector<int64_t>> modulus = std::nullopt);

    bool same(const FqField& o) const { return this == &o || (p == o.p && modulus == o.modulus); }
    std::string describe() const;

private:
    FqField() = default;
};

class FqElem {
public:
    using Ctx = Field;

    FqElem() = default;
    FqElem(Field f, std::vector<int64_t> rep) : field_(std::move(f)), rep_(std::move(rep)) {}

    static FqElem zero(const Field& f) { return FqElem(f, std::vector<int64_t>(f->k, 0)); }
    static FqElem one(const Field& f);
    static FqElem from_int(const Field& f, int64_t v);
    static FqElem from_int(const Field& f, const mpz_class& v);
    // generator image x of the polynomial basis (k > 1), else 1
    static FqElem gen(const Field& f);
    // bijection with [0, q): base-p digits, least significant = constant coord
    static FqElem from_index(const Field& f, uint64_t idx);
    uint64_t to_index() const;

    const Field& field() const { return field_; }
    const std::vector<int64_t>& rep() const { return rep_; }
    bool is_zero() const;
    bool is_one() const;

    FqElem operator+(const FqElem& o) const;
    FqElem operator-(const FqElem& o) const;
    FqElem operator-() const;
    FqElem operator*(const FqElem& o) const;
    FqElem inv() const;               // throws DivisionByZero on 0
    FqElem operator/(const FqElem& o) const { return *this * o.inv(); }
    FqElem pow(const mpz_class& e) const;
    FqElem pow(int64_t e) const { return pow(mpz_class(e)); }
    FqElem frobenius() const { return pow(mpz_class(field_->p)); }

    bool operator==(const FqElem& o) const;
    bool operator!=(const FqElem& o) const { return !(*this == o); }
    // lexicographic on canonical rep, for deterministic tie-breaking
    bool operator<(const FqElem& o) const { return rep_ < o.rep_; }

    std::string str() const; // "c" for k == 1, "c0,c1,..." otherwise

private:
    void check_same(const FqElem& o) const;
    Field field_;
    std::vector<int64_t> rep_;
};

// +1 / -1 as 1 / -1, 0 on zero; odd characteristic only
int legendre(const FqElem& a);

// {r, -r} with r*r = a, or nullopt for a non-residue; sqrt(0) = {0,0}.
// Tonelli–Shanks; throws EvenCharacteristic for p = 2.
std::optional<std::pair<FqElem, FqElem>> fq_sqrt(const FqElem& a);

// uniform element from the rng (used by seeded searches)
FqElem fq_random(const Field& f, Rng& rng);

} // namespace cq
