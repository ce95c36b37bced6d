#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdaf/archive.hpp"
#include "qdaf/genotype.hpp"
#include "qdaf/search.hpp"
#include "qdaf/sim.hpp"

namespace qdaf {

inline constexpr int kGenotypeFormatVersion = 1;
inline constexpr int kSnapshotFormatVersion = 1;
inline constexpr int kRolloutFormatVersion = 1;
inline constexpr std::string_view kHeatmapHeader = "bin_x,bin_y,bc0,bc1,fitness,entropy,n_nodes";
inline constexpr std::string_view kTelemetryHeader = "generation\tqd_score\tbest_score\toccupied_cells";

class FormatError : public std::runtime_error {
public:
    enum class Kind { version, truncated, checksum, malformed, invalid, io };

    FormatError(Kind kind, int line, const std::string& message);

    Kind kind() const { return kind_; }
    int line() const { return line_; }  // 1-based; 0 when not tied to a line

private:
    Kind kind_;
    int line_;
};

/// Shortest decimal text that reads back as the same double.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);

// Genotype document (.fort). Classes are written sorted by glyph.
std::string serialize_genotype(const FortressGenotype& g);
FortressGenotype parse_genotype(std::string_view text);

// Rollout log (.roll).
std::string serialize_rollout(const RolloutLog& log, std::uint64_t seed, int horizon);
struct ParsedRollout {
    std::uint64_t seed = 0;
    int horizon = 0;
    RolloutLog log;
};
ParsedRollout parse_rollout(std::string_view text);
std::string action_token(LogEvent event, const ActionNode& action);

/// Per-tick population table: header "tick" plus one column per class glyph.
std::string population_table(const FortressGenotype& g, const std::vector<std::vector<int>>& population);

// Archive snapshot (.arch).
struct ArchiveSnapshot {
    SearchConfig config;
    std::vector<std::uint64_t> eval_seeds;
    int generation = 0;
    Archive archive;

    bool operator==(const ArchiveSnapshot&) const = default;
};

std::string config_line(const SearchConfig& c);
SearchConfig parse_config_line(std::string_view line);

std::string serialize_snapshot(const ArchiveSnapshot& s);
ArchiveSnapshot parse_snapshot(std::string_view text);

// Telemetry (.tsv) and heatmap export (.csv).
std::string telemetry_row(const TelemetryRecord& t);
std::vector<TelemetryRecord> parse_telemetry(std::string_view text);
std::string serialize_heatmap(const std::vector<HeatmapRecord>& records);
std::vector<HeatmapRecord> parse_heatmap(std::string_view text);

// Files. Writes go to a temporary sibling which is then renamed into place.
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void save_snapshot(const std::filesystem::path& path, const ArchiveSnapshot& s);
ArchiveSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace qdaf
