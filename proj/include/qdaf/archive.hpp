#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qdaf/evaluate.hpp"
#include "qdaf/genotype.hpp"

namespace qdaf {

/// Which behavior characteristics span the archive. The first axis is
/// always the mean final instance count.
enum class ArchiveMode : std::uint8_t { instances_nodes, instances_entropy };

std::string_view to_string(ArchiveMode m);
std::optional<ArchiveMode> parse_archive_mode(std::string_view s);

struct BcRange {
    double lo = 0.0;
    double hi = 1.0;

    bool operator==(const BcRange&) const = default;
};

/// Half-open equal-width bins; values outside the range are clamped and
/// the upper bound itself lands in the last bin.
int bin_index(double value, BcRange range, int bins);

struct CellIndex {
    int x = 0;
    int y = 0;

    auto operator<=>(const CellIndex&) const = default;
};

struct Elite {
    FortressGenotype genotype;
    EvalResult result;

    bool operator==(const Elite&) const = default;
};

/// One row of the heatmap export.
struct HeatmapRecord {
    int bin_x = 0;
    int bin_y = 0;
    double bc0 = 0.0;
    double bc1 = 0.0;
    double fitness = 0.0;
    double entropy = 0.0;
    int n_nodes = 0;

    bool operator==(const HeatmapRecord&) const = default;
};

struct ArchiveShape {
    ArchiveMode mode = ArchiveMode::instances_nodes;
    int bins_x = 100;
    int bins_y = 100;
    BcRange range_x{0.0, kDefaultOverpopulationCap};
    BcRange range_y{kDefaultClassCount, 1410.0};

    bool operator==(const ArchiveShape&) const = default;
};

/// Ranges for a mode given the class count and the overpopulation cap.
ArchiveShape default_shape(ArchiveMode mode, int bins_x, int bins_y, int class_count = kDefaultClassCount,
                           int overpopulation_cap = kDefaultOverpopulationCap);

/// MAP-Elites grid. Cells are kept in (x, y) order so iteration, parent
/// selection and serialization are deterministic.
class Archive {
public:
    explicit Archive(ArchiveShape shape = {});

    const ArchiveShape& shape() const { return shape_; }
    std::pair<double, double> descriptor(const EvalResult& r) const;
    CellIndex cell_of(const EvalResult& r) const;

    /// Stores the candidate if its cell is empty or it has strictly greater fitness.
    bool insert(Elite candidate);

    const std::map<CellIndex, Elite>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    double qd_score() const;
    double best_score() const;

    std::vector<HeatmapRecord> export_records() const;

    bool operator==(const Archive&) const = default;

private:
    ArchiveShape shape_;
    std::map<CellIndex, Elite> cells_;
};

/// Sum of fitness over records, in record order.
double qd_score(const std::vector<HeatmapRecord>& records);

}  // namespace qdaf
