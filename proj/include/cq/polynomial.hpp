#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cq/errors.hpp"

namespace cq {

// exponent vector; entry per variable, total degree <= 255
using Mono = std::vector<uint8_t>;

inline int mono_degree(const Mono& m) {
    int d = 0;
    for (auto e : m) d += e;
    return d;
}

constexpr int kMaxVars = 64;
constexpr int kMaxDegree = 8;

// Sparse multivariate polynomial over a coefficient ring R.  R carries its
// own context handle (field or p-adic ring); stored terms never have zero
// coefficients, so equality is map equality.  Ordered term map keeps every
// iteration deterministic.
template <class R>
class Polynomial {
public:
    using Ctx = typename R::Ctx;

    Polynomial() : nvars_(0) {}
    Polynomial(Ctx ctx, int nvars) : ctx_(std::move(ctx)), nvars_(nvars) {
        if (nvars < 0 || nvars > kMaxVars)
            throw DimensionMismatch("variable count out of range: " + std::to_string(nvars));
    }

    static Polynomial zero(const Ctx& ctx, int nvars) { return Polynomial(ctx, nvars); }

    static Polynomial constant(const Ctx& ctx, int nvars, const R& v) {
        Polynomial f(ctx, nvars);
        f.add_term(Mono(nvars, 0), v);
        return f;
    }

    static Polynomial variable(const Ctx& ctx, int nvars, int i) {
        Polynomial f(ctx, nvars);
        Mono m(nvars, 0);
        m.at(i) = 1;
        f.add_term(m, R::one(ctx));
        return f;
    }

    const Ctx& ctx() const { return ctx_; }
    int nvars() const { return nvars_; }
    const std::map<Mono, R>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    // accumulating insert; drops the term when the sum cancels
    void add_term(const Mono& m, const R& c) {
        if (static_cast<int>(m.size()) != nvars_) throw DimensionMismatch("monomial arity");
        // container-level guard only; the d <= 8 form cap is checked at module
        // boundaries (internal transforms may inflate degrees temporarily)
        if (mono_degree(m) > 255) throw DegreeTooLarge("monomial degree beyond supported range");
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    R coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? R::zero(ctx_) : it->second;
    }

    int total_degree() const { // -1 for the zero polynomial
        int d = -1;
        for (auto& [m, c] : terms_) d = std::max(d, mono_degree(m));
        return d;
    }

    int degree_in(int i) const {
        int d = 0;
        for (auto& [m, c] : terms_) d = std::max<int>(d, m[i]);
        return d;
    }

    bool is_homogeneous(int d) const {
        for (auto& [m, c] : terms_)
            if (mono_degree(m) != d) return false;
        return true;
    }

    bool involves(int i) const {
        for (auto& [m, c] : terms_)
            if (m[i]) return true;
        return false;
    }

    Polynomial operator+(const Polynomial& o) const {
        check_compat(o);
        Polynomial r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const {
        check_compat(o);
        Polynomial r = *this;
        for (auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }

    Polynomial operator-() const {
        Polynomial r(ctx_, nvars_);
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Polynomial operator*(const Polynomial& o) const {
        check_compat(o);
        Polynomial r(ctx_, nvars_);
        for (auto& [ma, ca] : terms_) {
            for (auto& [mb, cb] : o.terms_) {
                Mono m(nvars_);
                for (int i = 0; i < nvars_; i++) m[i] = static_cast<uint8_t>(ma[i] + mb[i]);
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    Polynomial operator*(const R& a) const {
        Polynomial r(ctx_, nvars_);
        if (a.is_zero()) return r;
        for (auto& [m, c] : terms_) r.add_term(m, c * a);
        return r;
    }

    bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    R evaluate(const std::vector<R>& x) const {
        if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatch("evaluate: point arity");
        R acc = R::zero(ctx_);
        for (auto& [m, c] : terms_) {
            R t = c;
            for (int i = 0; i < nvars_; i++)
                for (int e = 0; e < m[i]; e++) t = t * x[i];
            acc = acc + t;
        }
        return acc;
    }

    // formal partial derivative, valid in any characteristic
    Polynomial derivative(int i) const {
        Polynomial r(ctx_, nvars_);
        for (auto& [m, c] : terms_) {
            if (!m[i]) continue;
            Mono d = m;
            d[i]--;
            r.add_term(d, c * R::from_int(ctx_, static_cast<int64_t>(m[i])));
        }
        return r;
    }

    std::vector<R> gradient(const std::vector<R>& x) const {
        std::vector<R> g;
        g.reserve(nvars_);
        for (int i = 0; i < nvars_; i++) g.push_back(derivative(i).evaluate(x));
        return g;
    }

    // general composition: variable i is replaced by images[i] (all in the
    // same target variable set)
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (static_cast<int>(images.size()) != nvars_) throw DimensionMismatch("substitute: image arity");
        int out_vars = nvars_ ? images[0].nvars() : 0;
        // cached powers per variable
        std::vector<std::vector<Polynomial>> pw(nvars_);
        for (int i = 0; i < nvars_; i++) {
            int need = degree_in(i);
            pw[i].push_back(Polynomial::constant(ctx_, out_vars, R::one(ctx_)));
            for (int e = 1; e <= need; e++) pw[i].push_back(pw[i].back() * images[i]);
        }
        Polynomial r(ctx_, out_vars);
        for (auto& [m, c] : terms_) {
            Polynomial t = Polynomial::constant(ctx_, out_vars, c);
            for (int i = 0; i < nvars_; i++)
                if (m[i]) t = t * pw[i][m[i]];
            r = r + t;
        }
        return r;
    }

    std::string str(const std::string& var = "x") const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")";
            for (int i = 0; i < nvars_; i++) {
                if (!m[i]) continue;
                s += "*" + var + std::to_string(i + 1);
                if (m[i] > 1) s += "^" + std::to_string(m[i]);
            }
        }
        return s;
    }

private:
    void check_compat(const Polynomial& o) const {
        if (nvars_ != o.nvars_) throw DimensionMismatch("mixed variable counts");
    }

    Ctx ctx_;
    int nvars_;
    std::map<Mono, R> terms_;
};

// f(M y): M is n x m over the coefficient ring, row i gives the expansion of
// old variable x_i in the new variables y.  Rectangular M restricts to a
// subspace; square invertible M is the usual change of basis.
template <class R>
Polynomial<R> substitute_linear(const Polynomial<R>& f, const std::vector<std::vector<R>>& M) {
    if (static_cast<int>(M.size()) != f.nvars()) throw DimensionMismatch("substitute_linear: row count");
    int m = f.nvars() ? static_cast<int>(M[0].size()) : 0;
    std::vector<Polynomial<R>> images;
    images.reserve(f.nvars());
    for (int i = 0; i < f.nvars(); i++) {
        if (static_cast<int>(M[i].size()) != m) throw DimensionMismatch("substitute_linear: ragged matrix");
        Polynomial<R> img(f.ctx(), m);
        for (int j = 0; j < m; j++) {
            Mono mo(m, 0);
            mo[j] = 1;
            img.add_term(mo, M[i][j]);
        }
        images.push_back(std::move(img));
    }
    return f.substitute(images);
}

} // namespace cq
