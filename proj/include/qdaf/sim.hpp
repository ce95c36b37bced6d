#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdaf/genotype.hpp"
#include "qdaf/rng.hpp"

namespace qdaf {

inline constexpr int kDefaultHorizon = 100;
inline constexpr int kDefaultOverpopulationCap = 156;

enum class Termination : std::uint8_t { running, step_limit, overpopulation };

std::string_view to_string(Termination t);
std::optional<Termination> parse_termination(std::string_view s);

enum class Direction : std::uint8_t { north, south, east, west };

struct SimConfig {
    int horizon = kDefaultHorizon;
    int overpopulation_cap = kDefaultOverpopulationCap;
    bool operator==(const SimConfig&) const = default;
};

struct EntityInstance {
    std::int64_t instance_id = 0;
    int class_index = 0;
    int x = 0;
    int y = 0;
    int current_node = 0;
    int ticks_in_node = 0;
    bool alive = true;
};

/// Visited node indices and fired edge indices, per class.
struct ExploredSets {
    std::vector<std::vector<std::uint8_t>> nodes;
    std::vector<std::vector<std::uint8_t>> edges;

    explicit ExploredSets(const FortressGenotype& g = {});
    int count() const;
    void merge(const ExploredSets& other);
};

/// Explored and total node+edge counts; fitness is explored / total.
struct ExplorationCounts {
    int explored = 0;
    int total = 0;

    double fitness() const { return total > 0 ? static_cast<double>(explored) / total : 0.0; }
};

ExplorationCounts exploration_counts(const ExploredSets& explored, const FortressGenotype& g);

enum class LogEvent : std::uint8_t { init, act, spawn, taken };

/// One line of a rollout log. For act records, x/y are the position after
/// acting, node is the node that acted, and edge indexes the edge list of
/// the class the instance belongs to after acting (-1 if none fired).
struct LogRecord {
    int tick = 0;
    std::int64_t instance_id = 0;
    char glyph = '?';
    int x = 0;
    int y = 0;
    int node = 0;
    LogEvent event = LogEvent::act;
    ActionNode action;
    int edge = -1;

    bool operator==(const LogRecord&) const = default;
};

struct RolloutLog {
    std::vector<LogRecord> records;
    Termination termination = Termination::running;
    int ticks = 0;
    int final_count = 0;

    bool operator==(const RolloutLog&) const = default;
};

/// Live world for one seeded rollout. Holds a pointer to the genotype,
/// which must outlive the state.
class SimulationState {
public:
    SimulationState(const FortressGenotype& genotype, std::uint64_t seed, SimConfig config = {},
                    bool record_log = false);

    /// Advances one tick: every instance alive at tick start acts in id
    /// order, then takes at most one transition from its current node.
    void step();

    /// Steps until the rollout terminates.
    void run();

    /// Performs the current node's action for instances()[index]. A forced
    /// direction replaces the random draw for move, push and move_wall.
    void execute_action(std::size_t index, std::optional<Direction> direction = std::nullopt);

    bool eval_condition(const Condition& cond, std::size_t index) const;

    /// Highest-priority satisfied outgoing edge of the instance's current node, or -1.
    int select_edge(std::size_t index) const;

    const FortressGenotype& genotype() const { return *genotype_; }
    const SimConfig& config() const { return config_; }
    const std::vector<EntityInstance>& instances() const { return instances_; }
    int tick() const { return tick_; }
    int live_count() const { return live_count_; }
    Termination termination() const { return termination_; }
    const ExploredSets& explored() const { return explored_; }
    const std::vector<std::vector<int>>& population_log() const { return population_log_; }
    const std::optional<RolloutLog>& log() const { return log_; }
    ExplorationCounts exploration() const { return exploration_counts(explored_, *genotype_); }

    bool is_wall(int x, int y) const { return !genotype_->is_interior(x, y); }
    /// Number of live instances of a class on a tile, including any actor.
    int occupancy(int class_index, int x, int y) const;

    /// w x h characters, each row terminated by a newline. Walls '#', empty '.',
    /// otherwise the glyph of the highest-id instance on the tile.
    std::string render_frame() const;

private:
    std::size_t tile(int x, int y) const { return static_cast<std::size_t>(y) * genotype_->width + x; }
    void place(int class_index, int x, int y, int delta);
    void move_to(std::size_t index, int x, int y);
    void remove(std::size_t index, bool log_taken);
    void spawn(int class_index, int x, int y);
    int nearest(int class_index, std::size_t self) const;
    void visit_node(int class_index, int node);
    Direction draw_direction(std::optional<Direction> forced);
    void end_tick();

    const FortressGenotype* genotype_;
    SimConfig config_;
    Rng rng_;
    int tick_ = 0;
    std::int64_t next_id_ = 0;
    int live_count_ = 0;
    Termination termination_ = Termination::running;
    std::vector<EntityInstance> instances_;
    std::vector<std::int16_t> occupancy_;  // class-major, then row-major tiles
    std::vector<int> population_;
    std::array<std::int16_t, 256> class_of_glyph_{};
    std::vector<std::vector<std::vector<int>>> edge_order_;  // [class][node] -> edge indices by priority
    ExploredSets explored_;
    std::vector<std::vector<int>> population_log_;
    std::optional<RolloutLog> log_;
};

/// Runs a fresh rollout to termination.
SimulationState simulate(const FortressGenotype& genotype, std::uint64_t seed, SimConfig config = {},
                         bool record_log = false);

}  // namespace qdaf
