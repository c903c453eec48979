#include "cq/oracles.hpp"

#include <cmath>

#ifdef CQ_HAVE_OPENMP
#include <omp.h>
#endif

namespace cq {

const char* lemma_name(LemmaTag t) {
    switch (t) {
        case LemmaTag::Warning: return "warning";
        case LemmaTag::Schmidt: return "schmidt";
        case LemmaTag::LeepYeomans: return "leep-yeomans";
        case LemmaTag::CafureMatera: return "cafure-matera";
    }
    return "?";
}

std::string CountReport::csv_row() const {
    return std::string(lemma_name(lemma)) + "," + q + "," + params + "," + count.get_str() + "," +
           bound.get_str() + "," + (pass ? "1" : "0");
}

uint64_t count_affine_zeros(const std::vector<Polynomial<FqElem>>& system, int m, uint64_t budget) {
    return count_common_zeros(system, m, budget);
}

CountReport verify_warning(const std::vector<Polynomial<FqElem>>& system, int m, uint64_t budget) {
    if (system.empty()) throw DimensionMismatch("verify_warning: empty system");
    int delta = 0;
    for (auto& f : system) delta += std::max(f.total_degree(), 0);
    if (m <= delta)
        throw HypothesisNotMet("warning lemma needs m > sum of degrees = " + std::to_string(delta));
    const Field& F = system[0].ctx();
    CountReport r;
    r.lemma = LemmaTag::Warning;
    r.q = F->q.get_str();
    r.params = "m=" + std::to_string(m) + " delta=" + std::to_string(delta);
    r.count = count_affine_zeros(system, m, budget);
    mpz_pow_ui(r.bound.get_mpz_t(), F->q.get_mpz_t(), static_cast<unsigned long>(m - delta));
    r.pass = r.count >= r.bound;
    return r;
}

CountReport verify_schmidt(const Polynomial<FqElem>& f, int m, int d, uint64_t budget) {
    if (f.is_zero()) throw HypothesisNotMet("schmidt lemma needs a nonzero polynomial");
    const Field& F = f.ctx();
    CountReport r;
    r.lemma = LemmaTag::Schmidt;
    r.q = F->q.get_str();
    r.params = "m=" + std::to_string(m) + " d=" + std::to_string(d);
    r.count = count_affine_zeros({f}, m, budget);
    mpz_pow_ui(r.bound.get_mpz_t(), F->q.get_mpz_t(), static_cast<unsigned long>(m - 1));
    r.bound *= d;
    r.pass = r.count <= r.bound;
    return r;
}

mpz_class floor_two_sqrt(const mpz_class& q) {
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), mpz_class(4 * q).get_mpz_t());
    return s;
}

int64_t cafure_matera_numerator(int d) {
    int64_t d2 = int64_t(d) * d;
    return (3 * d2 * d2 - 4 * d2 * d + 5 * d2) / 2;
}

Polynomial<FqElem> homogenize_to_ternary(const Polynomial<FqElem>& P, int d) {
    if (P.nvars() != 2) throw DimensionMismatch("homogenize_to_ternary: expected bivariate input");
    if (P.total_degree() > d) throw DimensionMismatch("homogenize_to_ternary: degree exceeds d");
    Polynomial<FqElem> out(P.ctx(), 3);
    for (auto& [m, c] : P.terms()) {
        Mono mo(3, 0);
        mo[0] = m[0];
        mo[1] = m[1];
        mo[2] = static_cast<uint8_t>(d - m[0] - m[1]);
        out.add_term(mo, c);
    }
    return out;
}

uint64_t count_nonsingular_projective(const Polynomial<FqElem>& form) {
    if (form.nvars() != 3) throw DimensionMismatch("count_nonsingular_projective: ternary form expected");
    const Field& F = form.ctx();
    if (!F->q_fits_u64 || F->q64 > 100000)
        throw BudgetExceeded("projective enumeration infeasible for this field");
    const uint64_t q = F->q64;
    std::vector<Polynomial<FqElem>> partials{form.derivative(0), form.derivative(1), form.derivative(2)};

    auto nonsingular_zero = [&](const std::vector<FqElem>& pt) -> bool {
        if (!form.evaluate(pt).is_zero()) return false;
        for (auto& pd : partials)
            if (!pd.evaluate(pt).is_zero()) return true;
        return false;
    };

    uint64_t count = 0;
    const FqElem one = FqElem::one(F);
    const FqElem zero = FqElem::zero(F);
#ifdef CQ_HAVE_OPENMP
#pragma omp parallel for reduction(+ : count) schedule(static)
#endif
    for (int64_t yi = 0; yi < static_cast<int64_t>(q); yi++) {
        FqElem y = FqElem::from_index(F, static_cast<uint64_t>(yi));
        for (uint64_t zi = 0; zi < q; zi++) {
            if (nonsingular_zero({one, y, FqElem::from_index(F, zi)})) count++;
        }
    }
    for (uint64_t zi = 0; zi < q; zi++)
        if (nonsingular_zero({zero, one, FqElem::from_index(F, zi)})) count++;
    if (nonsingular_zero({zero, zero, one})) count++;
    return count;
}

CountReport verify_leep_yeomans(const Polynomial<FqElem>& P, int d) {
    const Field& F = P.ctx();
    if (!is_absolutely_irreducible(P, d))
        throw NotAbsolutelyIrreducible("leep-yeomans hypothesis fails for this input");
    CountReport r;
    r.lemma = LemmaTag::LeepYeomans;
    r.q = F->q.get_str();
    r.params = "d=" + std::to_string(d);
    r.count = count_nonsingular_projective(homogenize_to_ternary(P, d));
    r.bound = F->q + 1 - mpz_class((int64_t(d) - 1) * (d - 2) / 2) * floor_two_sqrt(F->q);
    r.pass = r.count >= r.bound;
    return r;
}

CountReport cafure_matera_fraction(const Polynomial<FqElem>& P, int d, int trials, uint64_t seed) {
    const Field& F = P.ctx();
    const int n = P.nvars() - 1;
    if (P.total_degree() != d) throw DimensionMismatch("cafure_matera_fraction: degree mismatch");

    // precondition: absolute irreducibility, checked directly for bivariate
    // input and through a certifying full-degree slice otherwise (a
    // full-degree absolutely irreducible slice forces the input itself to be
    // absolutely irreducible)
    bool certified = false;
    if (P.nvars() == 2) {
        certified = is_absolutely_irreducible(P, d);
    } else {
        Rng cert_rng(Rng(seed).child("cafure-certify").next());
        for (int t = 0; t < 32 && !certified; t++) {
            SliceParams<FqElem> sp;
            for (int i = 0; i < 3 * n + 1; i++) sp.xi.push_back(fq_random(F, cert_rng));
            auto s = slice(P, sp);
            if (s.total_degree() == d && is_absolutely_irreducible(s, d)) certified = true;
        }
    }
    if (!certified)
        throw NotAbsolutelyIrreducible("cafure-matera: could not certify absolute irreducibility");

    // seed per-trial streams so the count is independent of evaluation order
    Rng base(Rng(seed).child("cafure-trials").next());
    std::vector<uint64_t> trial_seeds;
    trial_seeds.reserve(trials);
    for (int t = 0; t < trials; t++) trial_seeds.push_back(base.next());

    int64_t bad = 0;
#ifdef CQ_HAVE_OPENMP
#pragma omp parallel for reduction(+ : bad) schedule(dynamic)
#endif
    for (int t = 0; t < trials; t++) {
        Rng rng(trial_seeds[t]);
        SliceParams<FqElem> sp;
        for (int i = 0; i < 3 * n + 1; i++) sp.xi.push_back(fq_random(F, rng));
        auto s = slice(P, sp);
        bool ok = !s.is_zero() && s.total_degree() >= 1 &&
                  (s.total_degree() == 1 || is_absolutely_irreducible(s, -1));
        if (!ok) bad++;
    }

    CountReport r;
    r.lemma = LemmaTag::CafureMatera;
    r.q = F->q.get_str();
    r.params = "d=" + std::to_string(d) + " trials=" + std::to_string(trials) + " numerator=" +
               std::to_string(cafure_matera_numerator(d));
    r.count = bad;
    // allowed count: trials * (numerator/q + 3 sigma sampling slack)
    double b = std::min(1.0, static_cast<double>(cafure_matera_numerator(d)) / F->q.get_d());
    double sigma = std::sqrt(std::max(b * (1.0 - b), 1e-12) / trials);
    double allowed = std::min(1.0, b + 3.0 * sigma) * trials;
    r.bound = mpz_class(static_cast<long>(std::ceil(allowed)));
    r.pass = r.count <= r.bound;
    return r;
}

} // namespace cq
