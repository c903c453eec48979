#include "cq/hensel.hpp"

#include "cq/linalg.hpp"

namespace cq {

LiftResult lift(const PadicSystem& S, const ResidueSolution& x0, int target_precision) {
    const Ring R0 = S.ring;
    const Field& F = R0->residue;
    const int n = S.n;
    if (static_cast<int>(x0.x.size()) != n) throw DimensionMismatch("lift: point arity");
    if (target_precision < 1 || target_precision > R0->N)
        throw PrecisionExhausted("lift: target precision outside [1, N]");
    const int N = target_precision;

    auto [f, g] = reduce_mod_p(S);

    // lexicographically first invertible 2x2 minor of (grad f; grad g) mod p
    FqVec gf = f.gradient(x0.x), gg = g.gradient(x0.x);
    int pi = -1, pj = -1;
    for (int i = 0; i < n && pi < 0; i++)
        for (int j = i + 1; j < n; j++) {
            if (!(gf[i] * gg[j] - gf[j] * gg[i]).is_zero()) {
                pi = i;
                pj = j;
                break;
            }
        }
    if (pi < 0) throw SingularJacobian("lift: Jacobian rank < 2 at the residue zero");

    Ring R = R0->at_precision(N);
    Polynomial<PadicInt> Fp = reduce_poly_precision(S.F, R);
    Polynomial<PadicInt> Gp = reduce_poly_precision(S.G, R);
    std::array<Polynomial<PadicInt>, 2> dF{Fp.derivative(pi), Fp.derivative(pj)};
    std::array<Polynomial<PadicInt>, 2> dG{Gp.derivative(pi), Gp.derivative(pj)};

    // frozen coordinates: canonical lifts of the residue zero
    std::vector<PadicInt> x;
    x.reserve(n);
    for (int i = 0; i < n; i++) x.push_back(PadicInt::from_residue(R, x0.x[i]));

    auto residual_val = [&] {
        auto [vF, vG] = evaluate_system(PadicSystem{R, n, Fp, Gp}, x);
        return std::min(vF.valuation(), vG.valuation());
    };

    LiftResult out;
    out.pivot = {pi, pj};

    // Newton with doubling working precision; corrections computed in the
    // small ring and applied to the full-precision point
    int cur = 1;
    while (cur < N) {
        int nxt = std::min(2 * cur, N);
        Ring Rs = R0->at_precision(nxt);
        std::vector<PadicInt> xs;
        xs.reserve(n);
        for (auto& c : x) xs.push_back(c.at_precision(Rs));
        PadicInt rF = reduce_poly_precision(Fp, Rs).evaluate(xs);
        PadicInt rG = reduce_poly_precision(Gp, Rs).evaluate(xs);
        PadicInt a = reduce_poly_precision(dF[0], Rs).evaluate(xs);
        PadicInt b = reduce_poly_precision(dF[1], Rs).evaluate(xs);
        PadicInt c = reduce_poly_precision(dG[0], Rs).evaluate(xs);
        PadicInt d = reduce_poly_precision(dG[1], Rs).evaluate(xs);
        PadicInt det = a * d - b * c;
        PadicInt det_inv = det.inv(); // unit by the minor choice
        PadicInt di = (d * rF - b * rG) * det_inv;
        PadicInt dj = (a * rG - c * rF) * det_inv;
        // corrections carried back to the full ring by canonical representative
        x[pi] = x[pi] - di.at_precision(R);
        x[pj] = x[pj] - dj.at_precision(R);
        cur = nxt;
        out.step_residuals.push_back(residual_val());
    }

    auto [vF, vG] = evaluate_system(PadicSystem{R, n, Fp, Gp}, x);
    out.residual_valuation_F = vF.valuation();
    out.residual_valuation_G = vG.valuation();
    if (out.residual_valuation_F < N || out.residual_valuation_G < N)
        throw Error("lift: Newton failed to converge (internal)");
    for (int i = 0; i < n; i++)
        if (!(x[i].reduce_mod_p() == x0.x[i])) throw Error("lift: residue drifted (internal)");
    out.x = std::move(x);
    return out;
}

} // namespace cq
