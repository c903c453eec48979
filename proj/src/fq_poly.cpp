#include "cq/fq_poly.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace cq {

FqPoly FqPoly::x(const Field& f) {
    return FqPoly(f, {FqElem::zero(f), FqElem::one(f)});
}

FqPoly FqPoly::constant(const FqElem& a) {
    return FqPoly(a.field(), {a});
}

const FqElem& FqPoly::coeff(int i) const {
    static thread_local FqElem scratch;
    if (i < 0 || i >= static_cast<int>(c_.size())) {
        scratch = FqElem::zero(field_);
        return scratch;
    }
    return c_[i];
}

void FqPoly::set_coeff(int i, const FqElem& a) {
    if (i >= static_cast<int>(c_.size())) {
        if (a.is_zero()) return;
        c_.resize(i + 1, FqElem::zero(field_));
    }
    c_[i] = a;
    trim();
}

FqElem FqPoly::lead() const {
    return c_.empty() ? FqElem::zero(field_) : c_.back();
}

FqPoly FqPoly::operator+(const FqPoly& o) const {
    std::vector<FqElem> r(std::max(c_.size(), o.c_.size()), FqElem::zero(field_));
    for (size_t i = 0; i < r.size(); i++) {
        if (i < c_.size()) r[i] = r[i] + c_[i];
        if (i < o.c_.size()) r[i] = r[i] + o.c_[i];
    }
    return FqPoly(field_, std::move(r));
}

FqPoly FqPoly::operator-(const FqPoly& o) const {
    std::vector<FqElem> r(std::max(c_.size(), o.c_.size()), FqElem::zero(field_));
    for (size_t i = 0; i < r.size(); i++) {
        if (i < c_.size()) r[i] = r[i] + c_[i];
        if (i < o.c_.size()) r[i] = r[i] - o.c_[i];
    }
    return FqPoly(field_, std::move(r));
}

FqPoly FqPoly::operator*(const FqPoly& o) const {
    if (is_zero() || o.is_zero()) return FqPoly(field_);
    std::vector<FqElem> r(c_.size() + o.c_.size() - 1, FqElem::zero(field_));
    for (size_t i = 0; i < c_.size(); i++) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); j++) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    }
    return FqPoly(field_, std::move(r));
}

FqPoly FqPoly::operator*(const FqElem& a) const {
    if (a.is_zero()) return FqPoly(field_);
    std::vector<FqElem> r = c_;
    for (auto& ci : r) ci = ci * a;
    return FqPoly(field_, std::move(r));
}

FqPoly FqPoly::monic() const {
    if (is_zero() || is_monic()) return *this;
    return *this * lead().inv();
}

FqPoly FqPoly::derivative() const {
    if (c_.size() <= 1) return FqPoly(field_);
    std::vector<FqElem> r(c_.size() - 1, FqElem::zero(field_));
    for (size_t i = 1; i < c_.size(); i++) r[i - 1] = c_[i] * FqElem::from_int(field_, static_cast<int64_t>(i));
    return FqPoly(field_, std::move(r));
}

FqElem FqPoly::eval(const FqElem& at) const {
    FqElem acc = FqElem::zero(field_);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * at + c_[i];
    return acc;
}

std::pair<FqPoly, FqPoly> FqPoly::divmod(const FqPoly& g) const {
    if (g.is_zero()) throw DivisionByZero("polynomial division by zero");
    FqPoly q(field_), r = *this;
    const FqElem li = g.lead().inv();
    while (!r.is_zero() && r.degree() >= g.degree()) {
        FqElem c = r.lead() * li;
        int shift = r.degree() - g.degree();
        std::vector<FqElem> qc(shift + 1, FqElem::zero(field_));
        qc[shift] = c;
        FqPoly term(field_, std::move(qc));
        q = q + term;
        r = r - term * g;
    }
    return {q, r};
}

FqPoly FqPoly::shift_arg(const FqElem& a) const {
    // Horner on f(x + a)
    FqPoly xa = FqPoly::x(field_) + FqPoly::constant(a);
    FqPoly acc(field_);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * xa + FqPoly::constant(c_[i]);
    return acc;
}

std::string FqPoly::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = 0; i < c_.size(); i++) {
        if (c_[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + c_[i].str() + ")";
        if (i == 1) s += "*x";
        else if (i > 1) s += "*x^" + std::to_string(i);
    }
    return s;
}

FqPoly poly_gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = a.mod(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

FqPoly poly_powmod(const FqPoly& base, const mpz_class& e, const FqPoly& mod) {
    FqPoly result = FqPoly::constant(FqElem::one(base.field()));
    FqPoly b = base.mod(mod);
    mpz_class ee = e;
    while (ee > 0) {
        if (mpz_odd_p(ee.get_mpz_t())) result = (result * b).mod(mod);
        b = (b * b).mod(mod);
        ee >>= 1;
    }
    return result;
}

FqPoly poly_invmod(const FqPoly& a, const FqPoly& m) {
    const Field& F = a.field();
    FqPoly r0 = m, r1 = a.mod(m);
    FqPoly t0(F), t1 = FqPoly::constant(FqElem::one(F));
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        FqPoly t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.degree() != 0) throw DivisionByZero("poly_invmod: arguments not coprime");
    return (t0 * r0.coeffs()[0].inv()).mod(m);
}

bool poly_irreducible(const FqPoly& f) {
    const Field& F = f.field();
    const int d = f.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    FqPoly m = f.monic();
    mpz_class qd;
    mpz_pow_ui(qd.get_mpz_t(), F->q.get_mpz_t(), static_cast<unsigned long>(d));
    FqPoly xq = poly_powmod(FqPoly::x(F), qd, m);
    if (!(xq == FqPoly::x(F).mod(m))) return false;
    int dd = d;
    auto check_level = [&](int l) {
        mpz_class e;
        mpz_pow_ui(e.get_mpz_t(), F->q.get_mpz_t(), static_cast<unsigned long>(d / l));
        FqPoly g = poly_powmod(FqPoly::x(F), e, m) - FqPoly::x(F);
        return poly_gcd(g, m).degree() == 0;
    };
    for (int l = 2; l * l <= dd; l++) {
        if (dd % l) continue;
        while (dd % l == 0) dd /= l;
        if (!check_level(l)) return false;
    }
    if (dd > 1 && !check_level(dd)) return false;
    return true;
}

namespace {

// distinct-degree split of a monic squarefree f: list of (product, degree)
std::vector<std::pair<FqPoly, int>> distinct_degree(const FqPoly& f) {
    const Field& F = f.field();
    std::vector<std::pair<FqPoly, int>> out;
    FqPoly rest = f;
    FqPoly h = FqPoly::x(F).mod(rest.degree() > 0 ? rest : f);
    int d = 0;
    while (rest.degree() > 0) {
        d++;
        if (2 * d > rest.degree()) {
            out.emplace_back(rest, rest.degree());
            break;
        }
        h = poly_powmod(h, F->q, rest);
        FqPoly g = poly_gcd(h - FqPoly::x(F), rest);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            rest = rest.divmod(g).first;
            h = h.mod(rest);
        }
    }
    return out;
}

// Cantor–Zassenhaus split of a monic product of irreducibles of equal degree d
void equal_degree(const FqPoly& f, int d, Rng& rng, std::vector<FqPoly>& out) {
    const Field& F = f.field();
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    mpz_class qd;
    mpz_pow_ui(qd.get_mpz_t(), F->q.get_mpz_t(), static_cast<unsigned long>(d));
    mpz_class e = (qd - 1) / 2;
    for (;;) {
        // random poly of degree < deg f
        std::vector<FqElem> rc;
        rc.reserve(f.degree());
        for (int i = 0; i < f.degree(); i++) rc.push_back(fq_random(F, rng));
        FqPoly a(F, std::move(rc));
        if (a.degree() < 1) continue;
        FqPoly g = poly_gcd(a, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f.divmod(g).first, d, rng, out);
            return;
        }
        FqPoly b = poly_powmod(a, e, f) - FqPoly::constant(FqElem::one(F));
        g = poly_gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f.divmod(g).first, d, rng, out);
            return;
        }
    }
}

} // namespace

UnivariateFactorization factor_univariate(const FqPoly& f, uint64_t seed) {
    const Field& F = f.field();
    if (F->p == 2) throw EvenCharacteristic("univariate factorization restricted to odd characteristic");
    if (f.is_zero()) throw Error("factor_univariate: zero polynomial");
    UnivariateFactorization out{f.lead(), {}};
    if (f.degree() == 0) return out;

    Rng rng(seed ^ 0x657175616cull);
    std::map<std::vector<std::vector<int64_t>>, std::pair<FqPoly, int>> acc; // keyed by coeff reps

    auto add_factor = [&](const FqPoly& g, int mult) {
        std::vector<std::vector<int64_t>> key;
        for (auto& c : g.coeffs()) key.push_back(c.rep());
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(std::move(key), std::make_pair(g, mult));
        else it->second.second += mult;
    };

    auto factor_squarefree_part = [&](const FqPoly& part, int mult) {
        if (part.degree() <= 0) return;
        for (auto& [prod, dd] : distinct_degree(part)) {
            std::vector<FqPoly> irr;
            equal_degree(prod, dd, rng, irr);
            std::sort(irr.begin(), irr.end(), [](const FqPoly& a, const FqPoly& b) {
                if (a.degree() != b.degree()) return a.degree() < b.degree();
                for (int i = a.degree(); i >= 0; i--)
                    if (!(a.coeffs()[i] == b.coeffs()[i])) return a.coeffs()[i] < b.coeffs()[i];
                return false;
            });
            for (auto& g2 : irr) add_factor(g2, mult);
        }
    };

    // squarefree decomposition; multiplicities divisible by p cannot occur in
    // our degree range (degrees stay below the characteristic, guarded here)
    FqPoly fm = f.monic();
    FqPoly d1 = fm.derivative();
    if (d1.is_zero())
        throw SmallCharacteristic("factor_univariate: derivative vanished (degree >= characteristic)");
    FqPoly g = poly_gcd(fm, d1);
    FqPoly w = fm.divmod(g).first; // product of the distinct irreducible factors
    int i = 1;
    while (w.degree() > 0) {
        FqPoly y = poly_gcd(w, g);     // factors with multiplicity > i
        FqPoly z = w.divmod(y).first;  // factors with multiplicity exactly i
        factor_squarefree_part(z, i);
        w = std::move(y);
        if (w.degree() > 0) g = g.divmod(w).first;
        i++;
    }

    for (auto& [k, v] : acc) out.factors.push_back(v);
    return out;
}

std::vector<FqElem> poly_roots(const FqPoly& f, uint64_t seed) {
    const Field& F = f.field();
    if (f.is_zero()) throw Error("poly_roots: zero polynomial");
    if (f.degree() == 0) return {};
    // roots live in the degree-1 part of x^q - x
    FqPoly m = f.monic();
    FqPoly xq = poly_powmod(FqPoly::x(F), F->q, m);
    FqPoly lin = poly_gcd(xq - FqPoly::x(F), m);
    std::vector<FqElem> roots;
    if (lin.degree() <= 0) return roots;
    if (F->p == 2) {
        // brute scan; only tiny even fields reach here
        if (!F->q_fits_u64) throw EvenCharacteristic("root scan infeasible for this field");
        for (uint64_t i = 0; i < F->q64; i++) {
            FqElem a = FqElem::from_index(F, i);
            if (lin.eval(a).is_zero()) roots.push_back(a);
        }
        return roots;
    }
    // split the product of linear factors
    Rng rng(seed ^ 0x73706c6974ull);
    std::vector<FqPoly> stack{lin};
    mpz_class e = (F->q - 1) / 2;
    while (!stack.empty()) {
        FqPoly g = stack.back();
        stack.pop_back();
        if (g.degree() == 1) {
            roots.push_back(-(g.coeffs()[0] * g.coeffs()[1].inv()));
            continue;
        }
        if (g.degree() == 0) continue;
        // x -> x + delta, then gcd with x^((q-1)/2) - 1
        FqElem delta = fq_random(F, rng);
        FqPoly shifted = g.shift_arg(delta);
        if (shifted.coeffs()[0].is_zero()) {
            roots.push_back(-delta);
            shifted = shifted.divmod(FqPoly::x(F)).first;
            if (shifted.degree() >= 1) {
                // undo the shift for the remaining factor
                stack.push_back(shifted.shift_arg(-delta));
            }
            continue;
        }
        FqPoly h = poly_powmod(FqPoly::x(F), e, shifted) - FqPoly::constant(FqElem::one(F));
        FqPoly a = poly_gcd(h, shifted);
        if (a.degree() > 0 && a.degree() < shifted.degree()) {
            stack.push_back(a.shift_arg(-delta));
            stack.push_back(shifted.divmod(a).first.shift_arg(-delta));
        } else {
            stack.push_back(g); // unlucky delta, retry
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

FieldHom::FieldHom(Field src, Field dst) : src_(std::move(src)), dst_(std::move(dst)) {
    if (src_->p != dst_->p) throw FieldMismatch("embedding requires equal characteristic");
    if (dst_->k % src_->k != 0) throw FieldMismatch("no embedding: src degree does not divide dst degree");
    FqElem theta = FqElem::one(dst_);
    if (src_->k > 1) {
        // smallest root of src's modulus in dst (canonical embedding choice)
        std::vector<FqElem> mc;
        for (auto c : src_->modulus) mc.push_back(FqElem::from_int(dst_, c));
        FqPoly m(dst_, std::move(mc));
        auto roots = poly_roots(m);
        if (roots.empty()) throw Error("embedding root not found (internal)");
        theta = roots.front();
    }
    gen_powers_.push_back(FqElem::one(dst_));
    for (int i = 1; i < src_->k; i++) gen_powers_.push_back(gen_powers_.back() * theta);
}

FqElem FieldHom::map(const FqElem& a) const {
    if (!a.field()->same(*src_)) throw FieldMismatch("FieldHom::map: element not in source field");
    FqElem acc = FqElem::zero(dst_);
    for (int i = 0; i < src_->k; i++) {
        if (a.rep()[i]) acc = acc + gen_powers_[i] * FqElem::from_int(dst_, a.rep()[i]);
    }
    return acc;
}

FqPoly FieldHom::map_poly(const FqPoly& f) const {
    std::vector<FqElem> c;
    c.reserve(f.coeffs().size());
    for (auto& a : f.coeffs()) c.push_back(map(a));
    return FqPoly(dst_, std::move(c));
}

} // namespace cq
