// Benchmark of the OpenMP counting kernel against the serial reference on
// the exhaustive zero-counting workloads the oracle suites run.

#include <chrono>
#include <iostream>

#ifdef CQ_HAVE_OPENMP
#include <omp.h>
#endif

#include "cq/enumerate.hpp"
#include "cq/random_forms.hpp"

using namespace cq;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void run_case(int64_t p, int m, int reps, uint64_t seed) {
    Field F = FqField::make(p, 1);
    Rng rng(seed);
    std::vector<std::vector<Polynomial<FqElem>>> systems;
    for (int r = 0; r < reps; r++)
        systems.push_back({random_form(F, m, 3, rng), random_form(F, m, 2, rng)});

    auto t0 = clock_type::now();
    uint64_t total_ref = 0;
    for (auto& sys : systems) total_ref += count_common_zeros_reference(sys, m);
    double t_ref = seconds_since(t0);

    t0 = clock_type::now();
    uint64_t total_par = 0;
    for (auto& sys : systems) total_par += count_common_zeros(sys, m);
    double t_par = seconds_since(t0);

    std::cout << "q=" << p << " m=" << m << " reps=" << reps << "  points/rep=" << std::fixed;
    mpz_class pts;
    mpz_ui_pow_ui(pts.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(m));
    std::cout << pts.get_str() << "  reference=" << t_ref << "s  kernel=" << t_par << "s  speedup="
              << (t_par > 0 ? t_ref / t_par : 0.0) << "  counts " << (total_ref == total_par ? "agree" : "DISAGREE")
              << " (" << total_par << ")\n";
    if (total_ref != total_par) std::exit(1);
}

} // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 0;
#ifdef CQ_HAVE_OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::cout << "threads: " << (threads > 0 ? threads : omp_get_max_threads()) << "\n";
#else
    std::cout << "threads: 1 (built without OpenMP)\n";
#endif
    run_case(3, 10, 4, 11);
    run_case(5, 7, 6, 12);
    run_case(7, 6, 8, 13);
    run_case(11, 5, 10, 14);
    return 0;
}
