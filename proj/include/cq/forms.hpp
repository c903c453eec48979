#pragma once

#include <algorithm>
#include <sstream>

#include "cq/polynomial.hpp"

namespace cq {

// Homogeneity contract for the Form role of Polynomial.  Degree-d forms are
// plain polynomials whose stored monomials all have total degree d; the
// checks live at module boundaries instead of in a separate wrapper type.
template <class R>
void require_form(const Polynomial<R>& f, int d, const char* what) {
    if (f.total_degree() > kMaxDegree) throw DegreeTooLarge(std::string(what) + ": degree cap is 8");
    if (!f.is_homogeneous(d))
        throw DimensionMismatch(std::string(what) + ": not homogeneous of degree " + std::to_string(d));
}

// Slice parameters: 3n+1 scalars for a polynomial in n+1 variables x_0..x_n.
// The sliced polynomial in (X, Y) substitutes
//   x_0 -> xi_0 + X,   x_j -> xi_j + xi_{n+j} X + xi_{2n+j} Y   (1 <= j <= n).
template <class R>
struct SliceParams {
    std::vector<R> xi;
};

template <class R>
Polynomial<R> slice(const Polynomial<R>& f, const SliceParams<R>& sp) {
    const int n = f.nvars() - 1;
    if (n < 0) throw DimensionMismatch("slice: polynomial has no variables");
    if (static_cast<int>(sp.xi.size()) != 3 * n + 1)
        throw DimensionMismatch("slice: expected " + std::to_string(3 * n + 1) + " parameters, got " +
                                std::to_string(sp.xi.size()));
    const auto& ctx = f.ctx();
    std::vector<Polynomial<R>> images;
    images.reserve(n + 1);
    auto X = Polynomial<R>::variable(ctx, 2, 0);
    auto Y = Polynomial<R>::variable(ctx, 2, 1);
    images.push_back(Polynomial<R>::constant(ctx, 2, sp.xi[0]) + X);
    for (int j = 1; j <= n; j++) {
        images.push_back(Polynomial<R>::constant(ctx, 2, sp.xi[j]) + X * sp.xi[n + j] + Y * sp.xi[2 * n + j]);
    }
    return f.substitute(images);
}

// The substituted (X, Y)-polynomial standing in for variable i under a slice.
template <class R>
Polynomial<R> slice_coordinate(const Polynomial<R>& f, const SliceParams<R>& sp, int i) {
    const int n = f.nvars() - 1;
    const auto& ctx = f.ctx();
    auto X = Polynomial<R>::variable(ctx, 2, 0);
    auto Y = Polynomial<R>::variable(ctx, 2, 1);
    if (i == 0) return Polynomial<R>::constant(ctx, 2, sp.xi[0]) + X;
    return Polynomial<R>::constant(ctx, 2, sp.xi[i]) + X * sp.xi[n + i] + Y * sp.xi[2 * n + i];
}

// The unique symmetric d-linear map with M_F(x,...,x) = F(x), evaluated by
// inclusion-exclusion over argument subsets.  Needs d! invertible, so
// characteristic 0 or > d.
template <class R>
class MultilinearForm {
public:
    explicit MultilinearForm(Polynomial<R> f) : f_(std::move(f)), d_(std::max(f_.total_degree(), 0)) {
        if (f_.ctx()->p != 0 && f_.ctx()->p <= d_)
            throw SmallCharacteristic("polarization needs characteristic > " + std::to_string(d_));
        if (!f_.is_homogeneous(d_)) throw DimensionMismatch("polarize: input is not a form");
    }

    int arity() const { return d_; }
    const Polynomial<R>& form() const { return f_; }

    R operator()(const std::vector<std::vector<R>>& args) const {
        if (static_cast<int>(args.size()) != d_) throw DimensionMismatch("multilinear arity");
        const auto& ctx = f_.ctx();
        const int n = f_.nvars();
        R acc = R::zero(ctx);
        for (unsigned mask = 1; mask < (1u << d_); mask++) {
            std::vector<R> pt(n, R::zero(ctx));
            int bits = 0;
            for (int i = 0; i < d_; i++) {
                if (!(mask >> i & 1)) continue;
                bits++;
                if (static_cast<int>(args[i].size()) != n) throw DimensionMismatch("multilinear argument arity");
                for (int j = 0; j < n; j++) pt[j] = pt[j] + args[i][j];
            }
            R v = f_.evaluate(pt);
            acc = ((d_ - bits) % 2) ? acc - v : acc + v;
        }
        R dfact = R::one(ctx);
        for (int i = 2; i <= d_; i++) dfact = dfact * R::from_int(ctx, i);
        return acc * dfact.inv();
    }

private:
    Polynomial<R> f_;
    int d_;
};

// canonical text serialization: one line "e1 e2 ... en : c" per monomial
template <class R>
std::string form_to_lines(const Polynomial<R>& f) {
    std::ostringstream os;
    for (auto& [m, c] : f.terms()) {
        for (int i = 0; i < f.nvars(); i++) {
            if (i) os << ' ';
            os << static_cast<int>(m[i]);
        }
        os << " : " << c.str() << '\n';
    }
    return os.str();
}

} // namespace cq
