#include "qdaf/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace qdaf {

namespace {

struct RolloutSummary {
    ExploredSets explored;
    SeedOutcome outcome;
};

RolloutSummary run_rollout(const FortressGenotype& g, std::uint64_t seed, SimConfig sim, bool keep_trajectories) {
    SimulationState state = simulate(g, seed, sim);
    RolloutSummary s{state.explored(), {}};
    s.outcome.seed = seed;
    s.outcome.final_count = state.live_count();
    s.outcome.termination = state.termination();
    s.outcome.ticks = state.tick();
    if (keep_trajectories) s.outcome.population = state.population_log();
    return s;
}

EvalResult aggregate(const FortressGenotype& g, std::span<RolloutSummary> rollouts) {
    EvalResult r;
    ExploredSets unioned(g);
    double instances = 0.0;
    for (auto& s : rollouts) {
        unioned.merge(s.explored);
        instances += s.outcome.final_count;
        r.seeds.push_back(std::move(s.outcome));
    }
    const auto counts = exploration_counts(unioned, g);
    r.explored = counts.explored;
    r.total = counts.total;
    r.fitness = counts.fitness();
    r.bc_instances = instances / static_cast<double>(rollouts.size());
    r.bc_nodes = g.total_nodes();
    r.entropy = fsm_size_entropy(g);
    return r;
}

}  // namespace

int fsm_size_bin(int size, int class_count) {
    const int cap = max_nodes_per_class(class_count);
    if (cap <= 1) return 0;
    const int bin = (std::clamp(size, 1, cap) - 1) * class_count / (cap - 1);
    return std::min(bin, class_count - 1);
}

double fsm_size_entropy(const FortressGenotype& g) {
    const int n = static_cast<int>(g.classes.size());
    if (n < 2) return 0.0;
    std::vector<int> counts(n, 0);
    for (const auto& c : g.classes) ++counts[fsm_size_bin(static_cast<int>(c.nodes.size()), n)];
    double h = 0.0;
    for (int k : counts) {
        if (k == 0) continue;
        const double p = static_cast<double>(k) / n;
        h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(n));
}

EvalResult evaluate(const FortressGenotype& g, std::span<const std::uint64_t> seeds, SimConfig sim,
                    bool keep_trajectories) {
    if (seeds.empty()) throw std::invalid_argument("evaluation needs at least one seed");
    std::vector<RolloutSummary> rollouts;
    rollouts.reserve(seeds.size());
    for (auto seed : seeds) rollouts.push_back(run_rollout(g, seed, sim, keep_trajectories));
    return aggregate(g, rollouts);
}

std::vector<EvalResult> evaluate_batch(std::span<const FortressGenotype* const> genotypes,
                                       std::span<const std::uint64_t> seeds, SimConfig sim, int jobs,
                                       bool keep_trajectories) {
    if (seeds.empty()) throw std::invalid_argument("evaluation needs at least one seed");
    const std::size_t per = seeds.size();
    const auto tasks = static_cast<std::int64_t>(genotypes.size() * per);
    std::vector<RolloutSummary> rollouts(static_cast<std::size_t>(tasks));
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t t = 0; t < tasks; ++t) {
        const auto i = static_cast<std::size_t>(t) / per;
        const auto s = static_cast<std::size_t>(t) % per;
        rollouts[t] = run_rollout(*genotypes[i], seeds[s], sim, keep_trajectories);
    }

    std::vector<EvalResult> out;
    out.reserve(genotypes.size());
    for (std::size_t i = 0; i < genotypes.size(); ++i)
        out.push_back(aggregate(*genotypes[i], std::span(rollouts).subspan(i * per, per)));
    return out;
}

std::vector<EvalResult> evaluate_batch_serial(std::span<const FortressGenotype* const> genotypes,
                                              std::span<const std::uint64_t> seeds, SimConfig sim,
                                              bool keep_trajectories) {
    std::vector<EvalResult> out;
    out.reserve(genotypes.size());
    for (const auto* g : genotypes) out.push_back(evaluate(*g, seeds, sim, keep_trajectories));
    return out;
}

}  // namespace qdaf
