#include "qdaf/archive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdaf {

std::string_view to_string(ArchiveMode m) {
    return m == ArchiveMode::instances_nodes ? "instances-nodes" : "instances-entropy";
}

std::optional<ArchiveMode> parse_archive_mode(std::string_view s) {
    if (s == "instances-nodes") return ArchiveMode::instances_nodes;
    if (s == "instances-entropy") return ArchiveMode::instances_entropy;
    return std::nullopt;
}

int bin_index(double value, BcRange range, int bins) {
    if (bins < 1) throw std::invalid_argument("bin count must be positive");
    const double span = range.hi - range.lo;
    if (!(span > 0.0)) return 0;
    const double pos = std::floor((value - range.lo) * bins / span);
    return static_cast<int>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
}

ArchiveShape default_shape(ArchiveMode mode, int bins_x, int bins_y, int class_count, int overpopulation_cap) {
    ArchiveShape s;
    s.mode = mode;
    s.bins_x = bins_x;
    s.bins_y = bins_y;
    s.range_x = {0.0, static_cast<double>(overpopulation_cap)};
    if (mode == ArchiveMode::instances_nodes)
        s.range_y = {static_cast<double>(class_count),
                     static_cast<double>(max_nodes_per_class(class_count) * class_count)};
    else
        s.range_y = {0.0, 1.0};
    return s;
}

Archive::Archive(ArchiveShape shape) : shape_(shape) {
    if (shape_.bins_x < 1 || shape_.bins_y < 1) throw std::invalid_argument("archive resolution must be positive");
}

std::pair<double, double> Archive::descriptor(const EvalResult& r) const {
    const double second = shape_.mode == ArchiveMode::instances_nodes ? r.bc_nodes : r.entropy;
    return {r.bc_instances, second};
}

CellIndex Archive::cell_of(const EvalResult& r) const {
    auto [a, b] = descriptor(r);
    return {bin_index(a, shape_.range_x, shape_.bins_x), bin_index(b, shape_.range_y, shape_.bins_y)};
}

bool Archive::insert(Elite candidate) {
    const CellIndex cell = cell_of(candidate.result);
    auto it = cells_.find(cell);
    if (it == cells_.end()) {
        cells_.emplace(cell, std::move(candidate));
        return true;
    }
    if (candidate.result.fitness > it->second.result.fitness) {
        it->second = std::move(candidate);
        return true;
    }
    return false;
}

double Archive::qd_score() const {
    double s = 0.0;
    for (const auto& [_, e] : cells_) s += e.result.fitness;
    return s;
}

double Archive::best_score() const {
    double best = 0.0;
    for (const auto& [_, e] : cells_) best = std::max(best, e.result.fitness);
    return best;
}

std::vector<HeatmapRecord> Archive::export_records() const {
    std::vector<HeatmapRecord> out;
    out.reserve(cells_.size());
    for (const auto& [cell, e] : cells_) {
        auto [a, b] = descriptor(e.result);
        out.push_back({cell.x, cell.y, a, b, e.result.fitness, e.result.entropy, e.result.bc_nodes});
    }
    return out;
}

double qd_score(const std::vector<HeatmapRecord>& records) {
    double s = 0.0;
    for (const auto& r : records) s += r.fitness;
    return s;
}

}  // namespace qdaf
