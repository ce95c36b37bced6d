#include "qdaf/sim.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace qdaf {

namespace {

constexpr std::array<std::string_view, 3> kTerminationNames = {"running", "step_limit", "overpopulation"};

constexpr std::array<std::pair<int, int>, 4> kOffsets = {{{0, -1}, {0, 1}, {1, 0}, {-1, 0}}};

std::pair<int, int> offset(Direction d) { return kOffsets[static_cast<int>(d)]; }

int manhattan(int x0, int y0, int x1, int y1) { return std::abs(x0 - x1) + std::abs(y0 - y1); }

}  // namespace

std::string_view to_string(Termination t) { return kTerminationNames[static_cast<int>(t)]; }

std::optional<Termination> parse_termination(std::string_view s) {
    for (std::size_t i = 0; i < kTerminationNames.size(); ++i)
        if (kTerminationNames[i] == s) return static_cast<Termination>(i);
    return std::nullopt;
}

ExploredSets::ExploredSets(const FortressGenotype& g) {
    for (const auto& c : g.classes) {
        nodes.emplace_back(c.nodes.size(), 0);
        edges.emplace_back(c.edges.size(), 0);
    }
}

int ExploredSets::count() const {
    int n = 0;
    for (const auto& v : nodes) n += static_cast<int>(std::count(v.begin(), v.end(), 1));
    for (const auto& v : edges) n += static_cast<int>(std::count(v.begin(), v.end(), 1));
    return n;
}

void ExploredSets::merge(const ExploredSets& other) {
    for (std::size_t c = 0; c < nodes.size(); ++c) {
        for (std::size_t i = 0; i < nodes[c].size(); ++i) nodes[c][i] |= other.nodes[c][i];
        for (std::size_t i = 0; i < edges[c].size(); ++i) edges[c][i] |= other.edges[c][i];
    }
}

ExplorationCounts exploration_counts(const ExploredSets& explored, const FortressGenotype& g) {
    return {explored.count(), g.total_nodes() + g.total_edges()};
}

SimulationState::SimulationState(const FortressGenotype& genotype, std::uint64_t seed, SimConfig config,
                                 bool record_log)
    : genotype_(&genotype), config_(config), rng_(seed), explored_(genotype) {
    if (config_.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    const auto& g = genotype;
    const std::size_t n = g.classes.size();

    class_of_glyph_.fill(-1);
    for (std::size_t c = 0; c < n; ++c)
        class_of_glyph_[static_cast<unsigned char>(g.classes[c].glyph)] = static_cast<std::int16_t>(c);

    edge_order_.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        const auto& def = g.classes[c];
        edge_order_[c].resize(def.nodes.size());
        for (std::size_t e = 0; e < def.edges.size(); ++e) edge_order_[c][def.edges[e].source].push_back(static_cast<int>(e));
        for (auto& order : edge_order_[c]) {
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return def.edges[a].condition.kind > def.edges[b].condition.kind;
            });
        }
    }

    occupancy_.assign(n * g.width * g.height, 0);
    population_.assign(n, 0);
    if (record_log) log_.emplace();

    for (const auto& p : g.placements) {
        const int c = class_of_glyph_[static_cast<unsigned char>(p.glyph)];
        if (c < 0) throw std::invalid_argument(std::string("placement with unknown glyph '") + p.glyph + "'");
        EntityInstance inst;
        inst.instance_id = next_id_++;
        inst.class_index = c;
        inst.x = p.x;
        inst.y = p.y;
        instances_.push_back(inst);
        place(c, p.x, p.y, 1);
        visit_node(c, 0);
        if (log_) log_->records.push_back({0, inst.instance_id, p.glyph, p.x, p.y, 0, LogEvent::init, {}, -1});
    }
    population_log_.push_back(population_);

    if (live_count_ >= config_.overpopulation_cap) termination_ = Termination::overpopulation;
    if (log_) {
        log_->termination = termination_;
        log_->final_count = live_count_;
    }
}

int SimulationState::occupancy(int class_index, int x, int y) const {
    if (is_wall(x, y)) return 0;
    const std::size_t plane = static_cast<std::size_t>(genotype_->width) * genotype_->height;
    return occupancy_[class_index * plane + tile(x, y)];
}

void SimulationState::place(int class_index, int x, int y, int delta) {
    const std::size_t plane = static_cast<std::size_t>(genotype_->width) * genotype_->height;
    occupancy_[class_index * plane + tile(x, y)] += static_cast<std::int16_t>(delta);
    population_[class_index] += delta;
    live_count_ += delta;
}

void SimulationState::move_to(std::size_t index, int x, int y) {
    auto& inst = instances_[index];
    place(inst.class_index, inst.x, inst.y, -1);
    inst.x = x;
    inst.y = y;
    place(inst.class_index, x, y, 1);
}

void SimulationState::remove(std::size_t index, bool log_taken) {
    auto& inst = instances_[index];
    inst.alive = false;
    place(inst.class_index, inst.x, inst.y, -1);
    if (log_ && log_taken) {
        log_->records.push_back({tick_, inst.instance_id, genotype_->classes[inst.class_index].glyph, inst.x, inst.y,
                                 inst.current_node, LogEvent::taken, {}, -1});
    }
}

void SimulationState::spawn(int class_index, int x, int y) {
    if (live_count_ >= config_.overpopulation_cap) return;

    std::array<std::pair<int, int>, 4> open{};
    std::size_t count = 0;
    for (auto [dx, dy] : kOffsets)
        if (!is_wall(x + dx, y + dy)) open[count++] = {x + dx, y + dy};
    auto [sx, sy] = count == 0 ? std::pair{x, y} : open[rng_.below(count)];

    EntityInstance inst;
    inst.instance_id = next_id_++;
    inst.class_index = class_index;
    inst.x = sx;
    inst.y = sy;
    instances_.push_back(inst);
    place(class_index, sx, sy, 1);
    visit_node(class_index, 0);
    if (log_) {
        log_->records.push_back({tick_, inst.instance_id, genotype_->classes[class_index].glyph, sx, sy, 0,
                                 LogEvent::spawn, {}, -1});
    }
}

int SimulationState::nearest(int class_index, std::size_t self) const {
    const auto& me = instances_[self];
    int best = -1;
    int best_dist = 0;
    // instances_ is ordered by id, so the first minimum has the lowest id.
    for (std::size_t j = 0; j < instances_.size(); ++j) {
        const auto& o = instances_[j];
        if (j == self || !o.alive || o.class_index != class_index) continue;
        const int d = manhattan(me.x, me.y, o.x, o.y);
        if (best < 0 || d < best_dist) {
            best = static_cast<int>(j);
            best_dist = d;
        }
    }
    return best;
}

void SimulationState::visit_node(int class_index, int node) { explored_.nodes[class_index][node] = 1; }

Direction SimulationState::draw_direction(std::optional<Direction> forced) {
    return forced ? *forced : static_cast<Direction>(rng_.below(4));
}

void SimulationState::execute_action(std::size_t index, std::optional<Direction> direction) {
    const EntityInstance self = instances_[index];
    const ActionNode action = genotype_->classes[self.class_index].nodes[self.current_node];
    const int target = is_targeted(action.kind) ? class_of_glyph_[static_cast<unsigned char>(action.target)] : -1;

    switch (action.kind) {
    case ActionKind::idle:
        break;
    case ActionKind::move: {
        auto [dx, dy] = offset(draw_direction(direction));
        if (!is_wall(self.x + dx, self.y + dy)) move_to(index, self.x + dx, self.y + dy);
        break;
    }
    case ActionKind::die:
        remove(index, false);
        break;
    case ActionKind::clone:
        spawn(self.class_index, self.x, self.y);
        break;
    case ActionKind::push: {
        auto [dx, dy] = offset(draw_direction(direction));
        const int nx = self.x + dx, ny = self.y + dy;
        if (is_wall(nx, ny)) break;
        if (occupancy(target, nx, ny) > 0) {
            const int bx = nx + dx, by = ny + dy;
            if (is_wall(bx, by)) break;
            for (std::size_t j = 0; j < instances_.size(); ++j) {
                const auto& o = instances_[j];
                if (o.alive && o.class_index == target && o.x == nx && o.y == ny) move_to(j, bx, by);
            }
        }
        move_to(index, nx, ny);
        break;
    }
    case ActionKind::take: {
        const int j = nearest(target, index);
        if (j >= 0) remove(static_cast<std::size_t>(j), true);
        break;
    }
    case ActionKind::chase: {
        const int j = nearest(target, index);
        if (j < 0) break;
        const int tx = instances_[j].x, ty = instances_[j].y;
        std::array<std::pair<int, int>, 2> steps{};
        std::size_t count = 0;
        if (tx != self.x) steps[count++] = {tx > self.x ? 1 : -1, 0};
        if (ty != self.y) steps[count++] = {0, ty > self.y ? 1 : -1};
        if (count == 2 && rng_.below(2) == 1) std::swap(steps[0], steps[1]);
        for (std::size_t k = 0; k < count; ++k) {
            auto [dx, dy] = steps[k];
            if (!is_wall(self.x + dx, self.y + dy)) {
                move_to(index, self.x + dx, self.y + dy);
                break;
            }
        }
        break;
    }
    case ActionKind::add:
        spawn(target, self.x, self.y);
        break;
    case ActionKind::transform: {
        place(self.class_index, self.x, self.y, -1);
        place(target, self.x, self.y, 1);
        auto& inst = instances_[index];
        inst.class_index = target;
        inst.current_node = 0;
        inst.ticks_in_node = 0;
        visit_node(target, 0);
        break;
    }
    case ActionKind::move_wall: {
        auto [dx, dy] = offset(draw_direction(direction));
        const int nx = self.x + dx, ny = self.y + dy;
        if (!is_wall(nx, ny) && occupancy(target, nx, ny) == 0) move_to(index, nx, ny);
        break;
    }
    }
}

bool SimulationState::eval_condition(const Condition& cond, std::size_t index) const {
    const auto& me = instances_[index];
    const int target = has_glyph(cond.kind) ? class_of_glyph_[static_cast<unsigned char>(cond.glyph)] : -1;
    // An instance never satisfies a condition on its own class by itself.
    const int self_same = target == me.class_index ? 1 : 0;

    switch (cond.kind) {
    case ConditionKind::none:
        return true;
    case ConditionKind::step:
        return me.ticks_in_node > 0 && me.ticks_in_node % cond.param == 0;
    case ConditionKind::touch:
        return occupancy(target, me.x, me.y) - self_same > 0;
    case ConditionKind::next_to:
        for (auto [dx, dy] : kOffsets)
            if (occupancy(target, me.x + dx, me.y + dy) > 0) return true;
        return false;
    case ConditionKind::within:
        if (population_[target] - self_same <= 0) return false;
        for (std::size_t j = 0; j < instances_.size(); ++j) {
            const auto& o = instances_[j];
            if (j != index && o.alive && o.class_index == target && manhattan(me.x, me.y, o.x, o.y) <= cond.param)
                return true;
        }
        return false;
    }
    return false;
}

int SimulationState::select_edge(std::size_t index) const {
    const auto& me = instances_[index];
    const auto& edges = genotype_->classes[me.class_index].edges;
    for (int e : edge_order_[me.class_index][me.current_node])
        if (eval_condition(edges[e].condition, index)) return e;
    return -1;
}

void SimulationState::step() {
    if (termination_ != Termination::running) throw std::logic_error("step on a terminated simulation");
    ++tick_;

    const std::size_t acting = instances_.size();
    for (std::size_t i = 0; i < acting; ++i) {
        if (!instances_[i].alive) continue;
        const EntityInstance before = instances_[i];
        const auto& before_class = genotype_->classes[before.class_index];

        std::size_t record = 0;
        if (log_) {
            record = log_->records.size();
            log_->records.push_back({tick_, before.instance_id, before_class.glyph, before.x, before.y,
                                     before.current_node, LogEvent::act, before_class.nodes[before.current_node], -1});
        }

        execute_action(i);
        if (!instances_[i].alive) continue;

        auto& inst = instances_[i];
        ++inst.ticks_in_node;
        const int e = select_edge(i);
        if (e >= 0) {
            const auto& edge = genotype_->classes[inst.class_index].edges[e];
            inst.current_node = edge.destination;
            inst.ticks_in_node = 0;
            explored_.edges[inst.class_index][e] = 1;
            visit_node(inst.class_index, edge.destination);
        }
        if (log_) {
            auto& r = log_->records[record];
            r.x = inst.x;
            r.y = inst.y;
            r.edge = e;
        }
    }
    end_tick();
}

void SimulationState::end_tick() {
    std::erase_if(instances_, [](const EntityInstance& i) { return !i.alive; });
    population_log_.push_back(population_);

    if (live_count_ >= config_.overpopulation_cap)
        termination_ = Termination::overpopulation;
    else if (tick_ >= config_.horizon)
        termination_ = Termination::step_limit;

    if (log_) {
        log_->termination = termination_;
        log_->ticks = tick_;
        log_->final_count = live_count_;
    }
}

void SimulationState::run() {
    while (termination_ == Termination::running) step();
}

std::string SimulationState::render_frame() const {
    const int w = genotype_->width, h = genotype_->height;
    std::string grid(static_cast<std::size_t>(w) * h, '.');
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (is_wall(x, y)) grid[tile(x, y)] = '#';
    for (const auto& inst : instances_)
        if (inst.alive) grid[tile(inst.x, inst.y)] = genotype_->classes[inst.class_index].glyph;

    std::string out;
    out.reserve(grid.size() + h);
    for (int y = 0; y < h; ++y) {
        out.append(grid, static_cast<std::size_t>(y) * w, w);
        out.push_back('\n');
    }
    return out;
}

SimulationState simulate(const FortressGenotype& genotype, std::uint64_t seed, SimConfig config, bool record_log) {
    SimulationState state(genotype, seed, config, record_log);
    state.run();
    return state;
}

}  // namespace qdaf
