#include "cq/padic.hpp"

namespace cq {

Ring PadicRing::make(const Field& residue_field, int N) {
    if (N < 1 || N > 4096) throw PrecisionExhausted("precision out of range [1,4096]: N = " + std::to_string(N));
    auto r = std::shared_ptr<PadicRing>(new PadicRing());
    r->p = residue_field->p;
    r->k = residue_field->k;
    r->modulus = residue_field->modulus;
    r->N = N;
    mpz_ui_pow_ui(r->pN.get_mpz_t(), static_cast<unsigned long>(r->p), static_cast<unsigned long>(N));
    r->residue = residue_field;
    return r;
}

std::string PadicRing::describe() const {
    return "O_K/p^" + std::to_string(N) + " (p=" + std::to_string(p) + ", k=" + std::to_string(k) + ")";
}

PadicInt PadicInt::from_int(const Ring& r, int64_t v) {
    return from_int(r, mpz_class(v));
}

PadicInt PadicInt::from_int(const Ring& r, const mpz_class& v) {
    std::vector<mpz_class> rep(r->k, 0);
    rep[0] = v % r->pN;
    if (rep[0] < 0) rep[0] += r->pN;
    return PadicInt(r, std::move(rep));
}

PadicInt PadicInt::from_residue(const Ring& r, const FqElem& a) {
    if (!a.field()->same(*r->residue)) throw FieldMismatch("from_residue: wrong residue field");
    std::vector<mpz_class> rep(r->k, 0);
    for (int i = 0; i < r->k; i++) rep[i] = a.rep()[i];
    return PadicInt(r, std::move(rep));
}

bool PadicInt::is_zero() const {
    for (auto& c : rep_)
        if (c != 0) return false;
    return true;
}

void PadicInt::check_same(const PadicInt& o) const {
    if (!ring_ || !o.ring_ || !ring_->same(*o.ring_))
        throw FieldMismatch("p-adic operands from different rings");
}

PadicInt PadicInt::operator+(const PadicInt& o) const {
    check_same(o);
    std::vector<mpz_class> r(rep_.size());
    for (size_t i = 0; i < r.size(); i++) {
        r[i] = rep_[i] + o.rep_[i];
        if (r[i] >= ring_->pN) r[i] -= ring_->pN;
    }
    return PadicInt(ring_, std::move(r));
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
    check_same(o);
    std::vector<mpz_class> r(rep_.size());
    for (size_t i = 0; i < r.size(); i++) {
        r[i] = rep_[i] - o.rep_[i];
        if (r[i] < 0) r[i] += ring_->pN;
    }
    return PadicInt(ring_, std::move(r));
}

PadicInt PadicInt::operator-() const {
    std::vector<mpz_class> r(rep_.size());
    for (size_t i = 0; i < r.size(); i++) r[i] = rep_[i] == 0 ? mpz_class(0) : mpz_class(ring_->pN - rep_[i]);
    return PadicInt(ring_, std::move(r));
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
    check_same(o);
    const int k = ring_->k;
    if (k == 1) {
        std::vector<mpz_class> r(1);
        r[0] = rep_[0] * o.rep_[0] % ring_->pN;
        return PadicInt(ring_, std::move(r));
    }
    std::vector<mpz_class> prod(2 * k - 1, 0);
    for (int i = 0; i < k; i++) {
        if (rep_[i] == 0) continue;
        for (int j = 0; j < k; j++) prod[i + j] += rep_[i] * o.rep_[j];
    }
    for (int d = 2 * k - 2; d >= k; d--) {
        if (prod[d] == 0) continue;
        mpz_class lead = prod[d] % ring_->pN;
        prod[d] = 0;
        for (int i = 0; i < k; i++) prod[d - k + i] -= lead * ring_->modulus[i];
    }
    prod.resize(k);
    for (auto& c : prod) {
        c %= ring_->pN;
        if (c < 0) c += ring_->pN;
    }
    return PadicInt(ring_, std::move(prod));
}

PadicInt PadicInt::inv() const {
    if (valuation() != 0) throw DivisionByZero("p-adic inverse of a non-unit");
    // Newton off the residue inverse: z <- z (2 - a z)
    PadicInt z = from_residue(ring_, reduce_mod_p().inv());
    PadicInt two = from_int(ring_, 2);
    for (int guard = 0; guard < 64; guard++) {
        PadicInt az = *this * z;
        if (az == one(ring_)) return z;
        z = z * (two - az);
    }
    throw Error("p-adic inverse failed to converge (internal)");
}

bool PadicInt::operator==(const PadicInt& o) const {
    check_same(o);
    return rep_ == o.rep_;
}

int PadicInt::valuation() const {
    int best = ring_->N;
    mpz_class tmp, pz(static_cast<long>(ring_->p));
    for (auto& c : rep_) {
        if (c == 0) continue;
        int v = static_cast<int>(mpz_remove(tmp.get_mpz_t(), c.get_mpz_t(), pz.get_mpz_t()));
        best = std::min(best, v);
        if (best == 0) break;
    }
    return best;
}

FqElem PadicInt::reduce_mod_p() const {
    std::vector<int64_t> r(ring_->k);
    for (int i = 0; i < ring_->k; i++) {
        mpz_class m = rep_[i] % ring_->p;
        r[i] = m.get_si();
    }
    return FqElem(ring_->residue, std::move(r));
}

PadicInt PadicInt::at_precision(const Ring& r2) const {
    if (r2->p != ring_->p || r2->modulus != ring_->modulus)
        throw FieldMismatch("at_precision: different base ring");
    std::vector<mpz_class> rep(rep_.size());
    for (size_t i = 0; i < rep_.size(); i++) rep[i] = rep_[i] % r2->pN;
    return PadicInt(r2, std::move(rep));
}

PadicInt PadicInt::exact_div_p(const Ring& target) const {
    if (target->N != ring_->N - 1)
        throw PrecisionExhausted("exact_div_p: target precision must drop by one");
    std::vector<mpz_class> rep(rep_.size());
    for (size_t i = 0; i < rep_.size(); i++) {
        if (rep_[i] % ring_->p != 0)
            throw NonIntegralResult("exact_div_p: coordinate not divisible by p");
        rep[i] = rep_[i] / ring_->p % target->pN;
    }
    return PadicInt(target, std::move(rep));
}

std::string PadicInt::str() const {
    std::string s = rep_[0].get_str();
    for (size_t i = 1; i < rep_.size(); i++) s += "," + rep_[i].get_str();
    return s;
}

PadicSystem PadicSystem::make(Ring ring, Polynomial<PadicInt> F, Polynomial<PadicInt> G) {
    if (F.nvars() != G.nvars()) throw DimensionMismatch("system forms disagree on variable count");
    if (!F.is_homogeneous(3)) throw DimensionMismatch("F must be a cubic form");
    if (!G.is_homogeneous(2)) throw DimensionMismatch("G must be a quadratic form");
    if (F.is_zero() && G.is_zero()) throw DimensionMismatch("system is identically zero");
    PadicSystem s;
    s.n = F.nvars();
    s.ring = std::move(ring);
    s.F = std::move(F);
    s.G = std::move(G);
    return s;
}

std::pair<Polynomial<FqElem>, Polynomial<FqElem>> reduce_mod_p(const PadicSystem& S) {
    const Field& F = S.ring->residue;
    auto red = [&](const Polynomial<PadicInt>& f) {
        Polynomial<FqElem> r(F, f.nvars());
        for (auto& [m, c] : f.terms()) r.add_term(m, c.reduce_mod_p());
        return r;
    };
    return {red(S.F), red(S.G)};
}

std::pair<PadicInt, PadicInt> evaluate_system(const PadicSystem& S, const std::vector<PadicInt>& x) {
    if (static_cast<int>(x.size()) != S.n) throw DimensionMismatch("evaluate_system: point arity");
    return {S.F.evaluate(x), S.G.evaluate(x)};
}

Polynomial<PadicInt> reduce_poly_precision(const Polynomial<PadicInt>& f, const Ring& target) {
    Polynomial<PadicInt> r(target, f.nvars());
    for (auto& [m, c] : f.terms()) r.add_term(m, c.at_precision(target));
    return r;
}

Polynomial<PadicInt> lift_poly(const Polynomial<FqElem>& f, const Ring& target) {
    Polynomial<PadicInt> r(target, f.nvars());
    for (auto& [m, c] : f.terms()) r.add_term(m, PadicInt::from_residue(target, c));
    return r;
}

} // namespace cq
