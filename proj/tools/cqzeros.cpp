// cqzeros: find nontrivial p-adic zeros of a cubic+quadratic system over an
// unramified extension of Q_p, and verify the finite-field counting bounds
// the search relies on.
//
// Exit codes: 0 solved / all bounds pass, 1 input error, 2 search exhausted,
// 3 enumeration budget exceeded.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef CQ_HAVE_OPENMP
#include <omp.h>
#endif

#include "cq/hensel.hpp"
#include "cq/minimize.hpp"
#include "cq/oracles.hpp"
#include "cq/random_forms.hpp"
#include "cq/residue.hpp"
#include "cq/system_io.hpp"

using namespace cq;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0, kExitInput = 1, kExitExhausted = 2, kExitBudget = 3;

struct CommonOpts {
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool json_out = false;
};

void apply_threads(int threads) {
#ifdef CQ_HAVE_OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

std::string mode_str(HMode m) { return m == HMode::Exact ? "exact" : "bound"; }

json h_report_json(const ReducedReport& r) {
    auto one = [](const HCertificate& c, bool sat, int thr) {
        json j;
        j["satisfied"] = sat;
        j["threshold"] = thr;
        j["h"] = c.h;
        j["mode"] = mode_str(c.mode);
        return j;
    };
    json j;
    j["h_g"] = one(r.h_g, r.sat_g, 2);
    j["h_f_shift"] = one(r.h_f_shift, r.sat_f, 3);
    j["h_system"] = one(r.h_system, r.sat_sys, 5);
    return j;
}

std::string point_str(const std::vector<PadicInt>& x) {
    std::string s;
    for (size_t i = 0; i < x.size(); i++) s += (i ? " " : "") + x[i].str();
    return s;
}

std::string residue_point_str(const FqVec& x) {
    std::string s;
    for (size_t i = 0; i < x.size(); i++) s += (i ? " " : "") + x[i].str();
    return s;
}

// independent substitution check: plain mpz arithmetic straight off the
// parsed file and the printed coordinate string, no library evaluation path
bool independent_check(const SystemFile& sf, int precision, const std::string& x_line) {
    // parse coordinates: space-separated, each k comma-separated integers
    std::vector<std::vector<mpz_class>> coords;
    {
        std::istringstream is(x_line);
        std::string tok;
        while (is >> tok) {
            std::vector<mpz_class> parts;
            std::istringstream ts(tok);
            std::string p;
            while (std::getline(ts, p, ',')) parts.emplace_back(p);
            if (static_cast<int>(parts.size()) != sf.k) return false;
            coords.push_back(std::move(parts));
        }
    }
    if (static_cast<int>(coords.size()) != sf.n) return false;

    mpz_class pN;
    mpz_ui_pow_ui(pN.get_mpz_t(), static_cast<unsigned long>(sf.p), static_cast<unsigned long>(precision));
    std::vector<int64_t> modulus;
    if (sf.k > 1) {
        if (!sf.modulus) {
            // the deterministic seeded modulus is reproduced through the library
            modulus = FqField::make(sf.p, sf.k)->modulus;
        } else {
            modulus = *sf.modulus;
        }
    }
    auto mul = [&](const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
        std::vector<mpz_class> prod(2 * sf.k - 1, 0);
        for (int i = 0; i < sf.k; i++)
            for (int j = 0; j < sf.k; j++) prod[i + j] += a[i] * b[j];
        for (int d = 2 * sf.k - 2; d >= sf.k; d--) {
            if (prod[d] == 0) continue;
            mpz_class lead = prod[d];
            prod[d] = 0;
            for (int i = 0; i < sf.k; i++) prod[d - sf.k + i] -= lead * modulus[i];
        }
        prod.resize(sf.k);
        for (auto& c : prod) {
            c %= pN;
            if (c < 0) c += pN;
        }
        return prod;
    };
    auto eval = [&](const std::vector<std::pair<std::vector<int>, mpz_class>>& mons) {
        std::vector<mpz_class> acc(sf.k, 0);
        for (auto& [e, c] : mons) {
            std::vector<mpz_class> t(sf.k, 0);
            t[0] = c % pN;
            if (t[0] < 0) t[0] += pN;
            for (int i = 0; i < sf.n; i++)
                for (int rep = 0; rep < e[i]; rep++) t = mul(t, coords[i]);
            for (int i = 0; i < sf.k; i++) acc[i] = (acc[i] + t[i]) % pN;
        }
        return acc;
    };
    auto zero = [&](const std::vector<mpz_class>& v) {
        for (auto& c : v)
            if (c % pN != 0) return false;
        return true;
    };
    if (!zero(eval(sf.cubic)) || !zero(eval(sf.quadratic))) return false;
    // nontriviality: some coordinate is a unit mod p
    for (auto& co : coords)
        for (auto& c : co)
            if (c % sf.p != 0) return true;
    return false;
}

int cmd_solve(const std::string& path, CommonOpts& common, std::optional<int> precision, int max_moves,
              uint64_t budget, bool check) {
    SystemFile sf = load_system_file(path);
    uint64_t seed = common.seed_set ? common.seed : sf.seed;
    PadicSystem S = build_system(sf, precision);
    const int N = S.ring->N;

    std::vector<std::string> warnings;
    if (sf.n < 14 || !(S.ring->residue->q > 293))
        warnings.push_back("guarantee needs n >= 14 and q > 293 (here n = " + std::to_string(sf.n) +
                           ", q = " + S.ring->residue->q.get_str() + "); attempting anyway");

    auto red = reduce_fully(S, budget, max_moves, seed);
    auto [f, g] = reduce_mod_p(red.system);
    ResidueDiagnostics diag;
    auto rsol = solve_residue(f, g, seed, &diag);
    auto lifted = lift(red.system, rsol, red.system.ring->N);
    auto [x, strip] = pull_back(red.moves, lifted.x);

    // verify against the original system at the surviving precision
    const int final_N = x.empty() ? N : x[0].ring()->N;
    Ring Rv = S.ring->at_precision(final_N);
    PadicSystem Sv{Rv, S.n, reduce_poly_precision(S.F, Rv), reduce_poly_precision(S.G, Rv)};
    std::vector<PadicInt> xv;
    for (auto& c : x) xv.push_back(c.at_precision(Rv));
    auto [rF, rG] = evaluate_system(Sv, xv);
    bool unit_coord = false;
    for (auto& c : xv) unit_coord = unit_coord || c.valuation() == 0;
    bool verified = rF.valuation() >= final_N && rG.valuation() >= final_N && unit_coord;

    std::string xs = point_str(xv);
    if (common.json_out) {
        json j;
        j["status"] = verified ? "solved" : "unverified";
        j["warnings"] = warnings;
        j["n"] = sf.n;
        j["q"] = S.ring->residue->q.get_str();
        j["precision"] = final_N;
        j["precision_spent"] = N - final_N;
        json mv = json::array();
        for (auto& m : red.moves) mv.push_back(m.transcript_line());
        j["moves"] = mv;
        j["h_report"] = h_report_json(red.report);
        j["stage"] = stage_name(rsol.stage);
        j["diagnostics"] = diag.str();
        j["pivot"] = {lifted.pivot[0], lifted.pivot[1]};
        j["x"] = xs;
        j["residual_valuation_F"] = rF.valuation();
        j["residual_valuation_G"] = rG.valuation();
        if (check) j["check"] = independent_check(sf, final_N, xs) ? "ok" : "FAILED";
        std::cout << j.dump(2) << "\n";
    } else {
        for (auto& w : warnings) std::cout << "warning: " << w << "\n";
        std::cout << "moves: " << red.moves.size() << "\n";
        for (auto& m : red.moves) std::cout << "move: " << m.transcript_line() << "\n";
        std::cout << "h-report: " << red.report.str() << "\n";
        std::cout << "stage: " << stage_name(rsol.stage) << "\n";
        std::cout << "diagnostics: " << diag.str() << "\n";
        std::cout << "pivot: " << lifted.pivot[0] << " " << lifted.pivot[1] << "\n";
        std::cout << "precision: " << final_N << " (spent " << N - final_N << ")\n";
        std::cout << "x: " << xs << "\n";
        std::cout << "residual-valuations: F=" << rF.valuation() << " G=" << rG.valuation() << "\n";
        std::cout << "verified: " << (verified ? "true" : "false") << "\n";
        if (check) std::cout << "check: " << (independent_check(sf, final_N, xs) ? "ok" : "FAILED") << "\n";
    }
    if (check && !independent_check(sf, final_N, xs)) return kExitExhausted;
    return verified ? kExitOk : kExitExhausted;
}

int cmd_reduce(const std::string& path, CommonOpts& common, int max_moves, uint64_t budget) {
    SystemFile sf = load_system_file(path);
    uint64_t seed = common.seed_set ? common.seed : sf.seed;
    PadicSystem S = build_system(sf, std::nullopt);
    auto red = reduce_fully(S, budget, max_moves, seed);
    if (common.json_out) {
        json j;
        json mv = json::array();
        for (auto& m : red.moves) mv.push_back(m.transcript_line());
        j["moves"] = mv;
        j["h_report"] = h_report_json(red.report);
        j["precision"] = red.system.ring->N;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "moves: " << red.moves.size() << "\n";
        for (auto& m : red.moves) std::cout << "move: " << m.transcript_line() << "\n";
        std::cout << "h-report: " << red.report.str() << "\n";
        std::cout << "precision: " << red.system.ring->N << "\n";
    }
    return kExitOk;
}

int cmd_residue_solve(const std::string& path, CommonOpts& common) {
    SystemFile sf = load_system_file(path);
    uint64_t seed = common.seed_set ? common.seed : sf.seed;
    PadicSystem S = build_system(sf, 1);
    auto [f, g] = reduce_mod_p(S);
    ResidueDiagnostics diag;
    auto sol = solve_residue(f, g, seed, &diag);
    if (common.json_out) {
        json j;
        j["x"] = residue_point_str(sol.x);
        j["jacobian_rank"] = sol.jacobian_rank;
        j["stage"] = stage_name(sol.stage);
        j["diagnostics"] = diag.str();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "x: " << residue_point_str(sol.x) << "\n";
        std::cout << "jacobian-rank: " << sol.jacobian_rank << "\n";
        std::cout << "stage: " << stage_name(sol.stage) << "\n";
        std::cout << "diagnostics: " << diag.str() << "\n";
    }
    return kExitOk;
}

int cmd_verify_bounds(const std::string& suite, int64_t p, int k, int m, int d, int nvars, int trials,
                      uint64_t seed, uint64_t budget) {
    Field F = FqField::make(p, k);
    Rng rng(Rng(seed).child("verify-bounds").next());
    bool all_pass = true;
    std::cout << "lemma,q,params,count,bound,pass\n";
    auto emit = [&](const CountReport& r) {
        std::cout << r.csv_row() << "\n";
        all_pass = all_pass && r.pass;
    };

    if (suite == "warning") {
        for (int t = 0; t < trials; t++) {
            std::vector<Polynomial<FqElem>> sys{random_form(F, m, 3, rng), random_form(F, m, 2, rng)};
            if (sys[0].is_zero() && sys[1].is_zero()) continue;
            emit(verify_warning(sys, m, budget));
        }
    } else if (suite == "schmidt") {
        for (int t = 0; t < trials; t++) {
            auto f = random_poly(F, m, d, rng);
            if (f.is_zero()) continue;
            emit(verify_schmidt(f, m, std::max(f.total_degree(), 0), budget));
        }
    } else if (suite == "leep-yeomans") {
        int found = 0, attempts = 0;
        while (found < trials && attempts < trials * 200) {
            attempts++;
            auto P = random_poly(F, 2, d, rng);
            if (P.total_degree() != d) continue;
            try {
                if (!is_absolutely_irreducible(P, d, rng.next())) continue;
            } catch (const SmallCharacteristic&) {
                throw HypothesisNotMet("leep-yeomans suite needs p > d");
            }
            emit(verify_leep_yeomans(P, d));
            found++;
        }
        if (found < trials) {
            std::cerr << "error: could not sample enough absolutely irreducible curves\n";
            return kExitInput;
        }
    } else if (suite == "cafure-matera") {
        // one absolutely irreducible form, `trials` slices
        for (int attempt = 0; attempt < 50; attempt++) {
            auto P = random_form(F, nvars, d, rng);
            if (P.total_degree() != d) continue;
            try {
                emit(cafure_matera_fraction(P, d, trials, rng.next()));
                break;
            } catch (const NotAbsolutelyIrreducible&) {
                continue; // resample
            }
        }
    } else {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected warning|schmidt|leep-yeomans|cafure-matera)\n";
        return kExitInput;
    }
    return all_pass ? kExitOk : kExitExhausted;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic zeros of a cubic and quadratic form, with counting-bound oracles"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string file;
    std::optional<int> precision;
    int max_moves = 64;
    uint64_t budget = 2000000;
    bool check = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "override the file seed")->each([&](const std::string&) {
            common.seed_set = true;
        });
        sub->add_option("--threads", common.threads, "worker threads for enumeration kernels");
        sub->add_flag("--json", common.json_out, "JSON output (mirrors text fields)");
    };

    auto* solve = app.add_subcommand("solve", "full pipeline: reduce, solve mod p, lift, verify");
    solve->add_option("file", file, "system file")->required();
    int precision_flag = -1;
    solve->add_option("--precision", precision_flag, "override working precision N");
    solve->add_option("--max-moves", max_moves, "reduction move cap");
    solve->add_option("--budget", budget, "subspace enumeration budget");
    solve->add_flag("--check", check, "independent substitution check of the reported x");
    add_common(solve);

    auto* reduce = app.add_subcommand("reduce", "reduction stage only: move transcript and h-report");
    reduce->add_option("file", file, "system file")->required();
    reduce->add_option("--max-moves", max_moves, "reduction move cap");
    reduce->add_option("--budget", budget, "subspace enumeration budget");
    add_common(reduce);

    auto* rsolve = app.add_subcommand("residue-solve", "nonsingular zero of the mod-p system");
    rsolve->add_option("file", file, "system file (used at N = 1)")->required();
    add_common(rsolve);

    auto* verify = app.add_subcommand("verify-bounds", "counting-lemma oracle suites, CSV to stdout");
    std::string suite;
    int64_t vq = 5;
    int vk = 1, vm = 4, vd = 3, vnvars = 5, vtrials = 20;
    uint64_t vseed = 1;
    verify->add_option("suite", suite, "warning|schmidt|leep-yeomans|cafure-matera")->required();
    verify->add_option("--q", vq, "field characteristic (prime)");
    verify->add_option("--k", vk, "extension degree");
    verify->add_option("--m", vm, "variable count (warning/schmidt)");
    verify->add_option("--d", vd, "degree (schmidt/leep-yeomans/cafure-matera)");
    verify->add_option("--nvars", vnvars, "variables of the sliced form (cafure-matera)");
    verify->add_option("--trials", vtrials, "instances or slices");
    verify->add_option("--seed", vseed, "suite seed");
    verify->add_option("--budget", budget, "enumeration budget");
    verify->add_option("--threads", common.threads, "worker threads");

    CLI11_PARSE(app, argc, argv);
    apply_threads(common.threads);

    try {
        if (solve->parsed())
            return cmd_solve(file, common, precision_flag > 0 ? std::optional<int>(precision_flag) : std::nullopt,
                             max_moves, budget, check);
        if (reduce->parsed()) return cmd_reduce(file, common, max_moves, budget);
        if (rsolve->parsed()) return cmd_residue_solve(file, common);
        if (verify->parsed()) return cmd_verify_bounds(suite, vq, vk, vm, vd, vnvars, vtrials, vseed, budget);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const SearchExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExhausted;
    } catch (const HypothesisNotMet& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
