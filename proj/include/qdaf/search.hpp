#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qdaf/archive.hpp"
#include "qdaf/evaluate.hpp"
#include "qdaf/genotype.hpp"
#include "qdaf/rng.hpp"
#include "qdaf/sim.hpp"

namespace qdaf {

/// Loop probabilities for the three mutation loops (nodes, edges, instances).
struct MutationConfig {
    double node_prob = 0.5;
    double edge_prob = 0.5;
    double instance_prob = 0.5;
    int max_loop_iterations = 32;
    int max_node_count = 10;  // node edits touch k nodes with P(k) proportional to 1/k on [1, max]

    std::vector<std::string> validate() const;
    bool operator==(const MutationConfig&) const = default;
};

struct FortressLayout {
    int class_count = kDefaultClassCount;
    int width = kDefaultWidth;
    int height = kDefaultHeight;

    bool operator==(const FortressLayout&) const = default;
};

/// Heavy-tailed edit size: P(k) proportional to 1/k for k in [1, max_count].
int sample_node_count(int max_count, Rng& rng);

FortressGenotype mutate(FortressGenotype g, const MutationConfig& config, Rng& rng);

/// Splits `total` nodes over `class_count` classes: an even multinomial
/// draw, then greedy reassignment of any surplus above `cap` to the
/// emptiest classes, then empty classes borrow one node from the largest.
std::vector<int> split_node_budget(int total, int class_count, int cap, Rng& rng);

/// Aggregate node count drawn uniformly from [n, (6n+4)n]; one instance
/// per class on distinct interior tiles.
FortressGenotype random_genotype(const FortressLayout& layout, Rng& rng);
FortressGenotype random_genotype_with_total(const FortressLayout& layout, int total_nodes, Rng& rng);

struct SearchConfig {
    std::uint64_t master_seed = 0;
    FortressLayout layout;
    SimConfig sim;
    int seed_count = 5;
    ArchiveMode mode = ArchiveMode::instances_nodes;
    int bins_x = 100;
    int bins_y = 100;
    int batch_size = 10;
    int random_injection_period = 9;  // one random genotype per this many mutants
    int initial_batch = 10;
    MutationConfig mutation;

    std::vector<std::string> validate() const;
    ArchiveShape archive_shape() const;
    bool operator==(const SearchConfig&) const = default;
};

struct TelemetryRecord {
    int generation = 0;
    double qd_score = 0.0;
    double best_score = 0.0;
    std::size_t occupied_cells = 0;

    bool operator==(const TelemetryRecord&) const = default;
};

/// The fixed evaluation seeds of a run.
std::vector<std::uint64_t> draw_eval_seeds(std::uint64_t master_seed, int count);

/// Resumable MAP-Elites run. Every random draw derives from the master
/// seed, the generation and the offspring index, so a run restored from
/// (config, seeds, generation, archive) continues exactly as the original.
class Evolution {
public:
    explicit Evolution(SearchConfig config, int jobs = 0);
    Evolution(SearchConfig config, std::vector<std::uint64_t> eval_seeds, int generation, Archive archive,
              int jobs = 0);

    /// Evaluates the initial random batch; afterwards generation() == 0.
    TelemetryRecord initialize();
    /// Runs one generation of selection, variation, evaluation and insertion.
    TelemetryRecord step();

    bool initialized() const { return generation_ >= 0; }
    int generation() const { return generation_; }
    const SearchConfig& config() const { return config_; }
    const std::vector<std::uint64_t>& eval_seeds() const { return eval_seeds_; }
    const Archive& archive() const { return archive_; }
    TelemetryRecord telemetry() const;
    void set_jobs(int jobs) { jobs_ = jobs; }

private:
    void commit(std::vector<FortressGenotype> offspring);

    SearchConfig config_;
    std::vector<std::uint64_t> eval_seeds_;
    int generation_ = -1;
    Archive archive_;
    int jobs_ = 0;
};

/// Initializes and runs `generations` generations, reporting telemetry
/// for generation 0 and each following generation.
Archive evolve(const SearchConfig& config, int generations, int jobs = 0,
               const std::function<void(const TelemetryRecord&)>& on_generation = {});

/// Re-evaluates every elite and re-inserts it into an empty archive of the same shape.
Archive reevaluate_archive(const Archive& archive, std::span<const std::uint64_t> seeds, SimConfig sim,
                           int jobs = 0);

}  // namespace qdaf
