#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qdaf/genotype.hpp"
#include "qdaf/sim.hpp"

namespace qdaf {

struct SeedOutcome {
    std::uint64_t seed = 0;
    int final_count = 0;
    Termination termination = Termination::running;
    int ticks = 0;
    std::vector<std::vector<int>> population;  // [tick][class]; may be dropped for storage

    bool operator==(const SeedOutcome&) const = default;
};

/// Multi-seed evaluation of one genotype. Exploration is unioned across
/// seeds before computing fitness = explored / total.
struct EvalResult {
    double fitness = 0.0;
    int explored = 0;
    int total = 0;
    double bc_instances = 0.0;  // mean final instance count over seeds
    int bc_nodes = 0;
    double entropy = 0.0;
    std::vector<SeedOutcome> seeds;

    bool operator==(const EvalResult&) const = default;
};

/// Bucket of a class FSM size among class_count equal-width bins over [1, 6n+4].
int fsm_size_bin(int size, int class_count);

/// Shannon entropy of class sizes over the size bins, in base N = class count.
double fsm_size_entropy(const FortressGenotype& g);

EvalResult evaluate(const FortressGenotype& g, std::span<const std::uint64_t> seeds, SimConfig sim = {},
                    bool keep_trajectories = true);

/// Evaluates every genotype on every seed. Rollouts are distributed over
/// `jobs` OpenMP threads (0 = runtime default); the result is independent of
/// the thread count.
std::vector<EvalResult> evaluate_batch(std::span<const FortressGenotype* const> genotypes,
                                       std::span<const std::uint64_t> seeds, SimConfig sim = {}, int jobs = 0,
                                       bool keep_trajectories = true);

/// Single-threaded reference for evaluate_batch.
std::vector<EvalResult> evaluate_batch_serial(std::span<const FortressGenotype* const> genotypes,
                                              std::span<const std::uint64_t> seeds, SimConfig sim = {},
                                              bool keep_trajectories = true);

}  // namespace qdaf
