#include "cq/fq.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace cq {

namespace {

// -------- machine-word arithmetic mod p (p < 2^20, products fit int64) -----

int64_t norm_mod(int64_t v, int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

int64_t inv_mod(int64_t a, int64_t p) {
    int64_t t = 0, nt = 1, r = p, nr = norm_mod(a, p);
    if (nr == 0) throw DivisionByZero("inverse of 0 mod " + std::to_string(p));
    while (nr != 0) {
        int64_t qq = r / nr;
        std::swap(t -= qq * nt, nt);
        std::swap(r -= qq * nr, nr);
    }
    return norm_mod(t, p);
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % d == 0) return n == d;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, s++;
    auto mulmod = [&](uint64_t a, uint64_t b) {
        return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % n);
    };
    // deterministic witness set for 64-bit integers
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = 1, e = d, base = a % n;
        if (base == 0) continue;
        while (e) {
            if (e & 1) x = mulmod(x, base);
            base = mulmod(base, base);
            e >>= 1;
        }
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; i++) {
            x = mulmod(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// -------- dense univariate polys over F_p, coeffs low-to-high ---------------

using Upoly = std::vector<int64_t>;

void utrim(Upoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Upoly umul(const Upoly& a, const Upoly& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    Upoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); i++) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); j++) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    utrim(c);
    return c;
}

// remainder of a by monic m
Upoly umod(Upoly a, const Upoly& m, int64_t p) {
    assert(!m.empty() && m.back() == 1);
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        int64_t lead = a.back();
        size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (size_t i = 0; i < dm; i++)
                a[shift + i] = norm_mod(a[shift + i] - lead * m[i], p);
        }
        a.pop_back();
    }
    utrim(a);
    return a;
}

Upoly ugcd(Upoly a, Upoly b, int64_t p) {
    utrim(a);
    utrim(b);
    while (!b.empty()) {
        int64_t li = inv_mod(b.back(), p);
        Upoly bm = b;
        for (auto& c : bm) c = c * li % p;
        a = umod(std::move(a), bm, p);
        std::swap(a, b);
    }
    if (!a.empty()) {
        int64_t li = inv_mod(a.back(), p);
        for (auto& c : a) c = c * li % p;
    }
    return a;
}

Upoly upowmod_x(const mpz_class& e, const Upoly& m, int64_t p) {
    // x^e mod m by square-and-multiply over the bits of e
    Upoly result{1};
    Upoly base = umod({0, 1}, m, p);
    mpz_class ee = e;
    while (ee > 0) {
        if (mpz_odd_p(ee.get_mpz_t())) result = umod(umul(result, base, p), m, p);
        base = umod(umul(base, base, p), m, p);
        ee >>= 1;
    }
    return result;
}

bool irreducible_trial(const Upoly& f, int64_t p) {
    // divide by every monic poly of degree <= k/2 (encoded base p)
    const int k = static_cast<int>(f.size()) - 1;
    for (int d = 1; 2 * d <= k; d++) {
        uint64_t count = 1;
        for (int i = 0; i < d; i++) count *= static_cast<uint64_t>(p);
        for (uint64_t code = 0; code < count; code++) {
            Upoly g(d + 1, 0);
            uint64_t c = code;
            for (int i = 0; i < d; i++) {
                g[i] = static_cast<int64_t>(c % p);
                c /= p;
            }
            g[d] = 1;
            if (umod(f, g, p).empty()) return false;
        }
    }
    return true;
}

bool irreducible_rabin(const Upoly& f, int64_t p) {
    const int k = static_cast<int>(f.size()) - 1;
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    // x^(p^k) == x mod f
    Upoly xq = upowmod_x(pk, f, p);
    Upoly x = umod({0, 1}, f, p);
    if (xq != x) return false;
    // gcd(x^(p^(k/l)) - x, f) = 1 for every prime l | k
    int kk = k;
    for (int l = 2; l * l <= kk; l++) {
        if (kk % l) continue;
        while (kk % l == 0) kk /= l;
        mpz_class e;
        mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k / l));
        Upoly g = upowmod_x(e, f, p);
        // g - x
        if (g.size() < 2) g.resize(2, 0);
        g[1] = norm_mod(g[1] - 1, p);
        utrim(g);
        if (ugcd(g, f, p).size() != 1) return false;
    }
    if (kk > 1) {
        mpz_class e;
        mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k / kk));
        Upoly g = upowmod_x(e, f, p);
        if (g.size() < 2) g.resize(2, 0);
        g[1] = norm_mod(g[1] - 1, p);
        utrim(g);
        if (ugcd(g, f, p).size() != 1) return false;
    }
    return true;
}

bool is_irreducible_fp(const Upoly& f, int64_t p) {
    const int k = static_cast<int>(f.size()) - 1;
    if (k < 1) return false;
    if (k == 1) return true;
    double trial_cost = k * std::pow(static_cast<double>(p), k / 2.0);
    if (trial_cost <= 4096.0) return irreducible_trial(f, p);
    return irreducible_rabin(f, p);
}

} // namespace

Field FqField::make(int64_t p, int k, std::optional<std::vector<int64_t>> modulus) {
    if (p < 2 || !is_prime_u64(static_cast<uint64_t>(p)))
        throw NotPrime("p = " + std::to_string(p));
    if (p >= (int64_t(1) << 20))
        throw Error("characteristic too large; p < 2^20 required");
    if (k < 1 || k > 24) throw Error("extension degree out of range [1,24]: k = " + std::to_string(k));

    auto f = std::shared_ptr<FqField>(new FqField());
    f->p = p;
    f->k = k;
    mpz_ui_pow_ui(f->q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    f->q_fits_u64 = f->q.fits_ulong_p();
    f->q64 = f->q_fits_u64 ? static_cast<uint64_t>(f->q.get_ui()) : 0;

    if (modulus) {
        auto m = *modulus;
        for (auto& c : m) c = norm_mod(c, p);
        utrim(m);
        if (static_cast<int>(m.size()) != k + 1 || m.back() != 1)
            throw ReducibleModulus("modulus must be monic of degree k = " + std::to_string(k));
        if (k > 1 && !is_irreducible_fp(m, p))
            throw ReducibleModulus("supplied modulus factors over F_" + std::to_string(p));
        f->modulus = std::move(m);
    } else if (k == 1) {
        f->modulus = {0, 1};
    } else {
        // deterministic seeded search; seed depends only on (p, k) so every
        // build constructs the same field
        Rng rng(0x66716669ull ^ (static_cast<uint64_t>(p) << 8) ^ static_cast<uint64_t>(k));
        for (int tries = 0; tries < 100000; tries++) {
            Upoly cand(k + 1, 0);
            for (int i = 0; i < k; i++) cand[i] = static_cast<int64_t>(rng.below(static_cast<uint64_t>(p)));
            cand[k] = 1;
            if (is_irreducible_fp(cand, p)) {
                f->modulus = std::move(cand);
                break;
            }
        }
        if (f->modulus.empty()) throw Error("irreducible modulus search failed");
    }
    return f;
}

std::string FqField::describe() const {
    if (k == 1) return "F_" + std::to_string(p);
    return "F_" + q.get_str() + " (p=" + std::to_string(p) + ", k=" + std::to_string(k) + ")";
}

FqElem FqElem::one(const Field& f) {
    std::vector<int64_t> r(f->k, 0);
    r[0] = 1;
    return FqElem(f, std::move(r));
}

FqElem FqElem::from_int(const Field& f, int64_t v) {
    std::vector<int64_t> r(f->k, 0);
    r[0] = norm_mod(v, f->p);
    return FqElem(f, std::move(r));
}

FqElem FqElem::from_int(const Field& f, const mpz_class& v) {
    mpz_class m = v % f->p;
    if (m < 0) m += f->p;
    return from_int(f, m.get_si());
}

FqElem FqElem::gen(const Field& f) {
    if (f->k == 1) return one(f);
    std::vector<int64_t> r(f->k, 0);
    r[1] = 1;
    return FqElem(f, std::move(r));
}

FqElem FqElem::from_index(const Field& f, uint64_t idx) {
    std::vector<int64_t> r(f->k, 0);
    for (int i = 0; i < f->k; i++) {
        r[i] = static_cast<int64_t>(idx % static_cast<uint64_t>(f->p));
        idx /= static_cast<uint64_t>(f->p);
    }
    return FqElem(f, std::move(r));
}

uint64_t FqElem::to_index() const {
    uint64_t idx = 0;
    for (int i = field_->k - 1; i >= 0; i--)
        idx = idx * static_cast<uint64_t>(field_->p) + static_cast<uint64_t>(rep_[i]);
    return idx;
}

bool FqElem::is_zero() const {
    for (auto c : rep_)
        if (c) return false;
    return true;
}

bool FqElem::is_one() const {
    if (rep_[0] != 1) return false;
    for (size_t i = 1; i < rep_.size(); i++)
        if (rep_[i]) return false;
    return true;
}

void FqElem::check_same(const FqElem& o) const {
    if (!field_ || !o.field_ || !field_->same(*o.field_))
        throw FieldMismatch("operands from different fields");
}

FqElem FqElem::operator+(const FqElem& o) const {
    check_same(o);
    std::vector<int64_t> r(rep_.size());
    for (size_t i = 0; i < r.size(); i++) {
        r[i] = rep_[i] + o.rep_[i];
        if (r[i] >= field_->p) r[i] -= field_->p;
    }
    return FqElem(field_, std::move(r));
}

FqElem FqElem::operator-(const FqElem& o) const {
    check_same(o);
    std::vector<int64_t> r(rep_.size());
    for (size_t i = 0; i < r.size(); i++) {
        r[i] = rep_[i] - o.rep_[i];
        if (r[i] < 0) r[i] += field_->p;
    }
    return FqElem(field_, std::move(r));
}

FqElem FqElem::operator-() const {
    std::vector<int64_t> r(rep_.size());
    for (size_t i = 0; i < r.size(); i++) r[i] = rep_[i] ? field_->p - rep_[i] : 0;
    return FqElem(field_, std::move(r));
}

FqElem FqElem::operator*(const FqElem& o) const {
    check_same(o);
    const int64_t p = field_->p;
    const int k = field_->k;
    if (k == 1) return FqElem(field_, {rep_[0] * o.rep_[0] % p});
    std::vector<int64_t> prod(2 * k - 1, 0);
    for (int i = 0; i < k; i++) {
        if (rep_[i] == 0) continue;
        for (int j = 0; j < k; j++) prod[i + j] = (prod[i + j] + rep_[i] * o.rep_[j]) % p;
    }
    // reduce by the monic modulus
    for (int d = 2 * k - 2; d >= k; d--) {
        int64_t lead = prod[d];
        if (lead == 0) continue;
        prod[d] = 0;
        for (int i = 0; i < k; i++)
            prod[d - k + i] = norm_mod(prod[d - k + i] - lead * field_->modulus[i], p);
    }
    prod.resize(k);
    return FqElem(field_, std::move(prod));
}

FqElem FqElem::pow(const mpz_class& e) const {
    if (e < 0) return inv().pow(-e);
    FqElem result = one(field_);
    FqElem base = *this;
    mpz_class ee = e;
    while (ee > 0) {
        if (mpz_odd_p(ee.get_mpz_t())) result = result * base;
        base = base * base;
        ee >>= 1;
    }
    return result;
}

FqElem FqElem::inv() const {
    if (is_zero()) throw DivisionByZero("inv(0) in " + field_->describe());
    const int64_t p = field_->p;
    if (field_->k == 1) return FqElem(field_, {inv_mod(rep_[0], p)});
    // extended Euclid against the modulus in F_p[x]
    Upoly r0 = field_->modulus, r1 = rep_;
    utrim(r1);
    Upoly t0, t1{1};
    while (!r1.empty()) {
        // divide r0 by r1
        Upoly q;
        Upoly rem = r0;
        int64_t li = inv_mod(r1.back(), p);
        while (rem.size() >= r1.size() && !rem.empty()) {
            int64_t c = rem.back() * li % p;
            size_t shift = rem.size() - r1.size();
            if (q.size() < shift + 1) q.resize(shift + 1, 0);
            q[shift] = c;
            for (size_t i = 0; i < r1.size(); i++)
                rem[shift + i] = norm_mod(rem[shift + i] - c * r1[i], p);
            utrim(rem);
        }
        Upoly qt1 = umul(q, t1, p);
        Upoly nt = t0;
        if (nt.size() < qt1.size()) nt.resize(qt1.size(), 0);
        for (size_t i = 0; i < qt1.size(); i++) nt[i] = norm_mod(nt[i] - qt1[i], p);
        utrim(nt);
        t0 = std::move(t1);
        t1 = std::move(nt);
        r0 = std::move(r1);
        r1 = std::move(rem);
    }
    // r0 = gcd (a unit since modulus is irreducible and rep != 0)
    int64_t gi = inv_mod(r0[0], p);
    for (auto& c : t0) c = c * gi % p;
    t0.resize(field_->k, 0);
    return FqElem(field_, std::move(t0));
}

bool FqElem::operator==(const FqElem& o) const {
    check_same(o);
    return rep_ == o.rep_;
}

std::string FqElem::str() const {
    std::string s = std::to_string(rep_[0]);
    for (size_t i = 1; i < rep_.size(); i++) s += "," + std::to_string(rep_[i]);
    return s;
}

int legendre(const FqElem& a) {
    const Field& f = a.field();
    if (f->p == 2) throw EvenCharacteristic("legendre symbol undefined for p = 2");
    if (a.is_zero()) return 0;
    FqElem e = a.pow(mpz_class((f->q - 1) / 2));
    return e.is_one() ? 1 : -1;
}

std::optional<std::pair<FqElem, FqElem>> fq_sqrt(const FqElem& a) {
    const Field& f = a.field();
    if (f->p == 2) throw EvenCharacteristic("square roots in characteristic 2 are out of scope");
    if (a.is_zero()) return std::make_pair(FqElem::zero(f), FqElem::zero(f));
    if (legendre(a) != 1) return std::nullopt;

    // q - 1 = 2^s * t with t odd
    mpz_class t = f->q - 1;
    int s = 0;
    while (mpz_even_p(t.get_mpz_t())) {
        t >>= 1;
        s++;
    }
    if (s == 1) {
        FqElem r = a.pow(mpz_class((f->q + 1) / 4));
        return std::make_pair(r, -r);
    }
    // deterministic seeded hunt for a non-residue
    Rng rng(Rng(0x746f6e656c6cull).child(f->describe()));
    FqElem z = FqElem::zero(f);
    for (;;) {
        z = fq_random(f, rng);
        if (!z.is_zero() && legendre(z) == -1) break;
    }
    FqElem c = z.pow(t);
    FqElem r = a.pow(mpz_class((t + 1) / 2));
    FqElem u = a.pow(t);
    int m = s;
    while (!u.is_one()) {
        FqElem v = u;
        int i = 0;
        while (!v.is_one()) {
            v = v * v;
            i++;
        }
        FqElem b = c;
        for (int j = 0; j < m - i - 1; j++) b = b * b;
        r = r * b;
        c = b * b;
        u = u * c;
        m = i;
    }
    return std::make_pair(r, -r);
}

FqElem fq_random(const Field& f, Rng& rng) {
    std::vector<int64_t> r(f->k);
    for (int i = 0; i < f->k; i++) r[i] = static_cast<int64_t>(rng.below(static_cast<uint64_t>(f->p)));
    return FqElem(f, std::move(r));
}

} // namespace cq
