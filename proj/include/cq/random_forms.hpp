#pragma once

#include <functional>

#include "cq/padic.hpp"
#include "cq/polynomial.hpp"
#include "cq/rng.hpp"

namespace cq {

// all exponent vectors in n variables with total degree exactly d
inline void for_each_monomial(int n, int d, const std::function<void(const Mono&)>& fn) {
    Mono m(n, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n - 1) {
            m[i] = static_cast<uint8_t>(left);
            fn(m);
            m[i] = 0;
            return;
        }
        for (int e = left; e >= 0; e--) {
            m[i] = static_cast<uint8_t>(e);
            rec(i + 1, left - e);
        }
        m[i] = 0;
    };
    if (n == 0) return;
    rec(0, d);
}

// dense random form of degree d (coefficients uniform, zeros included)
inline Polynomial<FqElem> random_form(const Field& F, int n, int d, Rng& rng) {
    Polynomial<FqElem> f(F, n);
    for_each_monomial(n, d, [&](const Mono& m) { f.add_term(m, fq_random(F, rng)); });
    return f;
}

// random polynomial with total degree <= d (all monomials, uniform coeffs)
inline Polynomial<FqElem> random_poly(const Field& F, int n, int d, Rng& rng) {
    Polynomial<FqElem> f(F, n);
    for (int dd = 0; dd <= d; dd++)
        for_each_monomial(n, dd, [&](const Mono& m) { f.add_term(m, fq_random(F, rng)); });
    return f;
}

inline PadicInt padic_random(const Ring& R, Rng& rng) {
    std::vector<mpz_class> rep(R->k);
    for (int i = 0; i < R->k; i++) {
        mpz_class acc = 0;
        for (int d = 0; d < R->N; d++) acc = acc * R->p + static_cast<long>(rng.below(R->p));
        rep[i] = acc;
    }
    return PadicInt(R, std::move(rep));
}

inline Polynomial<PadicInt> random_padic_form(const Ring& R, int n, int d, Rng& rng) {
    Polynomial<PadicInt> f(R, n);
    for_each_monomial(n, d, [&](const Mono& m) { f.add_term(m, padic_random(R, rng)); });
    return f;
}

} // namespace cq
