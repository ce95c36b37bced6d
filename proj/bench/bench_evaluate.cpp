// Times the serial reference against the OpenMP batch evaluator on the same
// random genotypes and checks that both produce identical results.
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <vector>

#include <omp.h>

#include "qdaf/evaluate.hpp"
#include "qdaf/search.hpp"

int main(int argc, char** argv) {
    namespace chrono = std::chrono;
    const int count = argc > 1 ? std::atoi(argv[1]) : 200;

    qdaf::Rng rng(12345);
    std::vector<qdaf::FortressGenotype> genotypes;
    for (int i = 0; i < count; ++i) genotypes.push_back(qdaf::random_genotype({}, rng));
    std::vector<const qdaf::FortressGenotype*> ptrs;
    for (const auto& g : genotypes) ptrs.push_back(&g);
    const auto seeds = qdaf::draw_eval_seeds(7, 5);

    auto t0 = chrono::steady_clock::now();
    const auto serial = qdaf::evaluate_batch_serial(ptrs, seeds, {}, false);
    auto t1 = chrono::steady_clock::now();
    const auto parallel = qdaf::evaluate_batch(ptrs, seeds, {}, 0, false);
    auto t2 = chrono::steady_clock::now();

    const auto ms = [](auto d) { return chrono::duration_cast<chrono::milliseconds>(d).count(); };
    std::cout << "genotypes " << count << " x seeds " << seeds.size() << "\n";
    std::cout << "threads   " << omp_get_max_threads() << "\n";
    std::cout << "serial    " << ms(t1 - t0) << " ms\n";
    std::cout << "parallel  " << ms(t2 - t1) << " ms\n";
    std::cout << "identical " << (serial == parallel ? "yes" : "NO") << "\n";
    return serial == parallel ? 0 : 1;
}
