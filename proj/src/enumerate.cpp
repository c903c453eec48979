#include "cq/enumerate.hpp"

#ifdef CQ_HAVE_OPENMP
#include <omp.h>
#endif

namespace cq {

uint64_t affine_point_count(const Field& F, int m, uint64_t budget) {
    mpz_class total;
    mpz_pow_ui(total.get_mpz_t(), F->q.get_mpz_t(), static_cast<unsigned long>(m));
    if (!total.fits_ulong_p() || total.get_ui() > budget)
        throw BudgetExceeded("q^m = " + total.get_str() + " exceeds point budget " + std::to_string(budget));
    return static_cast<uint64_t>(total.get_ui());
}

namespace {

// compiled term list for the prime-field fast path
struct FastPoly {
    // per term: coefficient and (variable, exponent) pairs
    struct Term {
        int64_t c;
        std::vector<std::pair<int, int>> ve;
    };
    std::vector<Term> terms;
};

FastPoly compile_fast(const Polynomial<FqElem>& f) {
    FastPoly out;
    for (auto& [m, c] : f.terms()) {
        FastPoly::Term t;
        t.c = c.rep()[0];
        for (int i = 0; i < f.nvars(); i++)
            if (m[i]) t.ve.emplace_back(i, m[i]);
        out.terms.push_back(std::move(t));
    }
    return out;
}

// pw[v * (dmax+1) + e] = v^e mod p
std::vector<int64_t> power_table(int64_t p, int dmax) {
    std::vector<int64_t> pw(static_cast<size_t>(p) * (dmax + 1));
    for (int64_t v = 0; v < p; v++) {
        pw[static_cast<size_t>(v) * (dmax + 1)] = 1;
        for (int e = 1; e <= dmax; e++)
            pw[static_cast<size_t>(v) * (dmax + 1) + e] = pw[static_cast<size_t>(v) * (dmax + 1) + e - 1] * v % p;
    }
    return pw;
}

bool all_zero_fast(const std::vector<FastPoly>& fps, const std::vector<int64_t>& x,
                   const std::vector<int64_t>& pw, int stride, int64_t p) {
    for (auto& fp : fps) {
        int64_t acc = 0;
        for (auto& t : fp.terms) {
            int64_t prod = t.c;
            for (auto& [v, e] : t.ve) prod = prod * pw[static_cast<size_t>(x[v]) * stride + e] % p;
            acc += prod;
        }
        if (acc % p != 0) return false;
    }
    return true;
}

uint64_t count_block_fast(const std::vector<FastPoly>& fps, int m, int64_t p, int64_t lead,
                          const std::vector<int64_t>& pw, int stride) {
    std::vector<int64_t> x(m, 0);
    x[0] = lead;
    uint64_t hits = 0;
    for (;;) {
        if (all_zero_fast(fps, x, pw, stride, p)) hits++;
        int i = m - 1;
        while (i >= 1 && ++x[i] == p) x[i--] = 0;
        if (i == 0) break;
    }
    return hits;
}

bool all_zero_generic(const std::vector<Polynomial<FqElem>>& polys, const std::vector<FqElem>& x) {
    for (auto& f : polys)
        if (!f.evaluate(x).is_zero()) return false;
    return true;
}

uint64_t count_block_generic(const std::vector<Polynomial<FqElem>>& polys, const Field& F, int m,
                             uint64_t lead) {
    std::vector<FqElem> x(m, FqElem::zero(F));
    std::vector<uint64_t> idx(m, 0);
    idx[0] = lead;
    x[0] = FqElem::from_index(F, lead);
    uint64_t hits = 0;
    for (;;) {
        if (all_zero_generic(polys, x)) hits++;
        int i = m - 1;
        while (i >= 1) {
            if (++idx[i] == F->q64) {
                idx[i] = 0;
                x[i] = FqElem::zero(F);
                i--;
            } else {
                x[i] = FqElem::from_index(F, idx[i]);
                break;
            }
        }
        if (i == 0) break;
    }
    return hits;
}

} // namespace

uint64_t count_common_zeros(const std::vector<Polynomial<FqElem>>& polys, int m, uint64_t budget) {
    if (polys.empty()) throw DimensionMismatch("count_common_zeros: pass the ambient field via at least one polynomial");
    const Field& F = polys[0].ctx();
    for (auto& f : polys)
        if (f.nvars() != m) throw DimensionMismatch("count_common_zeros: variable count mismatch");
    affine_point_count(F, m, budget);
    if (m == 0) return all_zero_generic(polys, {}) ? 1 : 0;

    const int64_t q_lead = static_cast<int64_t>(F->q64);
    uint64_t total = 0;
    if (F->k == 1) {
        int dmax = 0;
        std::vector<FastPoly> fps;
        for (auto& f : polys) {
            fps.push_back(compile_fast(f));
            for (int i = 0; i < m; i++) dmax = std::max(dmax, f.degree_in(i));
        }
        auto pw = power_table(F->p, dmax);
        const int stride = dmax + 1;
#ifdef CQ_HAVE_OPENMP
#pragma omp parallel for reduction(+ : total) schedule(static)
#endif
        for (int64_t lead = 0; lead < q_lead; lead++)
            total += count_block_fast(fps, m, F->p, lead, pw, stride);
    } else {
#ifdef CQ_HAVE_OPENMP
#pragma omp parallel for reduction(+ : total) schedule(static)
#endif
        for (int64_t lead = 0; lead < q_lead; lead++)
            total += count_block_generic(polys, F, m, static_cast<uint64_t>(lead));
    }
    return total;
}

uint64_t count_common_zeros_reference(const std::vector<Polynomial<FqElem>>& polys, int m,
                                      uint64_t budget) {
    if (polys.empty()) throw DimensionMismatch("count_common_zeros_reference: empty polynomial list");
    const Field& F = polys[0].ctx();
    for (auto& f : polys)
        if (f.nvars() != m) throw DimensionMismatch("count_common_zeros_reference: variable count mismatch");
    uint64_t npts = affine_point_count(F, m, budget);
    if (m == 0) return all_zero_generic(polys, {}) ? 1 : 0;

    // odometer with the *last* variable as the fastest digit, so the visit
    // order differs from the kernel's leading-coordinate blocks
    std::vector<FqElem> x(m, FqElem::zero(F));
    std::vector<uint64_t> idx(m, 0);
    uint64_t hits = 0;
    for (uint64_t step = 0; step < npts; step++) {
        if (all_zero_generic(polys, x)) hits++;
        for (int i = m - 1; i >= 0; i--) {
            if (++idx[i] == F->q64) {
                idx[i] = 0;
                x[i] = FqElem::zero(F);
            } else {
                x[i] = FqElem::from_index(F, idx[i]);
                break;
            }
        }
    }
    return hits;
}

} // namespace cq
