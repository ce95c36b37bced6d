#include "qdaf/search.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qdaf {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kEvalSeedsTag = 1;
constexpr std::uint64_t kInitialTag = 2;
constexpr std::uint64_t kOffspringTag = 3;

std::string join_violations(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& m : v) s += (s.empty() ? "" : "; ") + m;
    return s;
}

}  // namespace

std::vector<std::string> MutationConfig::validate() const {
    std::vector<std::string> out;
    auto prob = [&](const char* name, double p) {
        if (!(p >= 0.0 && p <= 1.0)) out.push_back(std::string(name) + " must lie in [0, 1]");
    };
    prob("node_prob", node_prob);
    prob("edge_prob", edge_prob);
    prob("instance_prob", instance_prob);
    if (max_loop_iterations < 1) out.push_back("max_loop_iterations must be at least 1");
    if (max_node_count < 1) out.push_back("max_node_count must be at least 1");
    return out;
}

int sample_node_count(int max_count, Rng& rng) {
    double total = 0.0;
    for (int k = 1; k <= max_count; ++k) total += 1.0 / k;
    double u = rng.unit() * total;
    for (int k = 1; k < max_count; ++k) {
        u -= 1.0 / k;
        if (u < 0.0) return k;
    }
    return max_count;
}

FortressGenotype mutate(FortressGenotype g, const MutationConfig& config, Rng& rng) {
    const auto ctx = make_context(g.alphabet(), g.width, g.height);
    const auto n = g.classes.size();
    const int cap = config.max_loop_iterations;

    double node_r = rng.unit();
    double edge_r = rng.unit();
    double instance_r = rng.unit();

    for (int it = 0; node_r < config.node_prob && it < cap; ++it) {
        const auto op = rng.below(3);
        auto& def = g.classes[rng.below(n)];
        const int count = sample_node_count(config.max_node_count, rng);
        if (op == 0)
            delete_nodes(def, count, rng);
        else if (op == 1)
            add_nodes(def, count, ctx, rng);
        else
            alter_nodes(def, count, ctx, rng);
        node_r = rng.unit();
    }

    for (int it = 0; edge_r < config.edge_prob && it < cap; ++it) {
        const auto op = rng.below(3);
        auto& def = g.classes[rng.below(n)];
        if (op == 0)
            delete_edge(def, rng);
        else if (op == 1)
            add_edge(def, ctx, rng);
        else
            alter_edge(def, ctx, rng);
        edge_r = rng.unit();
    }

    for (int it = 0; instance_r < config.instance_prob && it < cap; ++it) {
        if (rng.below(2) == 0) {
            if (!g.placements.empty())
                g.placements.erase(g.placements.begin() + static_cast<std::ptrdiff_t>(rng.below(g.placements.size())));
        } else if (static_cast<int>(g.placements.size()) < g.interior_tiles()) {
            const char glyph = g.classes[rng.below(n)].glyph;
            const int x = static_cast<int>(rng.between(1, g.width - 2));
            const int y = static_cast<int>(rng.between(1, g.height - 2));
            g.placements.push_back({glyph, x, y});
        }
        instance_r = rng.unit();
    }
    return g;
}

std::vector<int> split_node_budget(int total, int class_count, int cap, Rng& rng) {
    if (class_count < 1 || total < class_count || total > cap * class_count)
        throw std::invalid_argument("node total " + std::to_string(total) + " cannot be split over " +
                                    std::to_string(class_count) + " classes of at most " + std::to_string(cap));
    std::vector<int> counts(class_count, 0);
    for (int i = 0; i < total; ++i) ++counts[rng.below(class_count)];

    int surplus = 0;
    for (auto& c : counts) {
        if (c > cap) {
            surplus += c - cap;
            c = cap;
        }
    }
    while (surplus > 0) {
        auto it = std::min_element(counts.begin(), counts.end());
        const int give = std::min(surplus, cap - *it);
        *it += give;
        surplus -= give;
    }

    for (auto& c : counts) {
        if (c == 0) {
            --*std::max_element(counts.begin(), counts.end());
            c = 1;
        }
    }
    return counts;
}

FortressGenotype random_genotype_with_total(const FortressLayout& layout, int total_nodes, Rng& rng) {
    FortressGenotype g;
    g.width = layout.width;
    g.height = layout.height;
    const auto alphabet = default_alphabet(layout.class_count);
    const auto ctx = make_context(alphabet, g.width, g.height);
    const int cap = max_nodes_per_class(layout.class_count);

    const auto sizes = split_node_budget(total_nodes, layout.class_count, cap, rng);
    for (int i = 0; i < layout.class_count; ++i) g.classes.push_back(random_class(alphabet[i], i, sizes[i], ctx, rng));

    std::vector<int> tiles(g.interior_tiles());
    std::iota(tiles.begin(), tiles.end(), 0);
    const int inner_w = g.width - 2;
    for (int i = 0; i < layout.class_count && !tiles.empty(); ++i) {
        const auto pick = rng.below(tiles.size());
        const int t = tiles[pick];
        tiles.erase(tiles.begin() + static_cast<std::ptrdiff_t>(pick));
        g.placements.push_back({alphabet[i], 1 + t % inner_w, 1 + t / inner_w});
    }
    return g;
}

FortressGenotype random_genotype(const FortressLayout& layout, Rng& rng) {
    const int n = layout.class_count;
    const int total = static_cast<int>(rng.between(n, static_cast<std::int64_t>(max_nodes_per_class(n)) * n));
    return random_genotype_with_total(layout, total, rng);
}

std::vector<std::string> SearchConfig::validate() const {
    auto out = mutation.validate();
    if (layout.class_count < 1 || layout.class_count > 62) out.push_back("class_count must be in [1, 62]");
    if (layout.width < 3 || layout.height < 3) out.push_back("fortress must be at least 3x3 including walls");
    if (layout.class_count > FortressGenotype::interior_tile_count(layout.width, layout.height))
        out.push_back("fortress interior is smaller than the class count");
    if (sim.horizon < 1) out.push_back("horizon must be at least 1");
    if (sim.overpopulation_cap < 1) out.push_back("overpopulation_cap must be at least 1");
    if (seed_count < 1) out.push_back("seed_count must be at least 1");
    if (bins_x < 1 || bins_y < 1) out.push_back("archive resolution must be positive");
    if (batch_size < 1) out.push_back("batch_size must be at least 1");
    if (random_injection_period < 0) out.push_back("random_injection_period must be non-negative");
    if (initial_batch < 1) out.push_back("initial_batch must be at least 1");
    return out;
}

ArchiveShape SearchConfig::archive_shape() const {
    return default_shape(mode, bins_x, bins_y, layout.class_count, sim.overpopulation_cap);
}

std::vector<std::uint64_t> draw_eval_seeds(std::uint64_t master_seed, int count) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < count; ++i) seeds.push_back(derive_seed(master_seed, {kEvalSeedsTag, static_cast<std::uint64_t>(i)}));
    return seeds;
}

Evolution::Evolution(SearchConfig config, int jobs)
    : config_(std::move(config)), archive_(config_.archive_shape()), jobs_(jobs) {
    if (auto v = config_.validate(); !v.empty()) throw std::invalid_argument(join_violations(v));
    eval_seeds_ = draw_eval_seeds(config_.master_seed, config_.seed_count);
}

Evolution::Evolution(SearchConfig config, std::vector<std::uint64_t> eval_seeds, int generation, Archive archive,
                     int jobs)
    : config_(std::move(config)),
      eval_seeds_(std::move(eval_seeds)),
      generation_(generation),
      archive_(std::move(archive)),
      jobs_(jobs) {
    if (auto v = config_.validate(); !v.empty()) throw std::invalid_argument(join_violations(v));
    if (eval_seeds_.empty()) throw std::invalid_argument("no evaluation seeds");
}

TelemetryRecord Evolution::telemetry() const {
    return {generation_, archive_.qd_score(), archive_.best_score(), archive_.size()};
}

void Evolution::commit(std::vector<FortressGenotype> offspring) {
    std::vector<const FortressGenotype*> ptrs;
    for (const auto& g : offspring) ptrs.push_back(&g);
    auto results = evaluate_batch(ptrs, eval_seeds_, config_.sim, jobs_, false);
    for (std::size_t i = 0; i < offspring.size(); ++i) archive_.insert({std::move(offspring[i]), std::move(results[i])});
}

TelemetryRecord Evolution::initialize() {
    if (initialized()) throw std::logic_error("evolution already initialized");
    std::vector<FortressGenotype> batch;
    for (int i = 0; i < config_.initial_batch; ++i) {
        Rng rng(derive_seed(config_.master_seed, {kInitialTag, static_cast<std::uint64_t>(i)}));
        batch.push_back(random_genotype(config_.layout, rng));
    }
    commit(std::move(batch));
    generation_ = 0;
    return telemetry();
}

TelemetryRecord Evolution::step() {
    if (!initialized()) initialize();
    const int gen = generation_ + 1;

    std::vector<const Elite*> parents;
    for (const auto& [_, e] : archive_.cells()) parents.push_back(&e);

    std::vector<FortressGenotype> batch;
    for (int i = 0; i < config_.batch_size; ++i) {
        Rng rng(derive_seed(config_.master_seed,
                            {kOffspringTag, static_cast<std::uint64_t>(gen), static_cast<std::uint64_t>(i)}));
        const int period = config_.random_injection_period + 1;
        const bool inject = config_.random_injection_period > 0 && (i + 1) % period == 0;
        if (inject || parents.empty())
            batch.push_back(random_genotype(config_.layout, rng));
        else
            batch.push_back(mutate(parents[rng.below(parents.size())]->genotype, config_.mutation, rng));
    }
    commit(std::move(batch));
    generation_ = gen;
    return telemetry();
}

Archive evolve(const SearchConfig& config, int generations, int jobs,
               const std::function<void(const TelemetryRecord&)>& on_generation) {
    Evolution run(config, jobs);
    auto t = run.initialize();
    if (on_generation) on_generation(t);
    for (int g = 0; g < generations; ++g) {
        t = run.step();
        if (on_generation) on_generation(t);
    }
    return run.archive();
}

Archive reevaluate_archive(const Archive& archive, std::span<const std::uint64_t> seeds, SimConfig sim, int jobs) {
    std::vector<const FortressGenotype*> ptrs;
    for (const auto& [_, e] : archive.cells()) ptrs.push_back(&e.genotype);
    auto results = evaluate_batch(ptrs, seeds, sim, jobs, false);

    Archive fresh(archive.shape());
    for (std::size_t i = 0; i < ptrs.size(); ++i) fresh.insert({*ptrs[i], std::move(results[i])});
    return fresh;
}

}  // namespace qdaf
