#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qdaf/archive.hpp"
#include "qdaf/io.hpp"
#include "qdaf/search.hpp"
#include "qdaf/sim.hpp"

namespace qdaf::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kReevalSeedTag = 0x7265657661ULL;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config files hold evolve options; top-level keys are read as if they sat
// under an [evolve] section.
class EvolveConfigFile : public CLI::ConfigTOML {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigTOML::from_config(input);
        for (auto& item : items)
            if (item.parents.empty() && item.name != "++" && item.name != "--") item.parents = {"evolve"};
        return items;
    }
};

fs::path output_dir() {
    const char* env = std::getenv("QDAF_OUT_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve(const std::string& flag, const std::string& fallback) {
    if (!flag.empty()) return flag;
    return output_dir() / fallback;
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const fs::path& p, std::string_view text) {
    ensure_parent(p);
    write_file_atomic(p, text);
}

void require_valid(const SearchConfig& c) {
    auto v = c.validate();
    if (v.empty()) return;
    std::string msg;
    for (const auto& m : v) msg += (msg.empty() ? "" : "\n") + m;
    throw ConfigError(msg);
}

// --- evolve -------------------------------------------------------------

struct EvolveOptions {
    SearchConfig config;
    std::string mode = "instances-nodes";
    int generations = 100;
    int checkpoint_every = 0;
    int jobs = 0;
    std::string out;
    std::string telemetry;
    std::string resume;
};

void add_evolve(CLI::App& app, EvolveOptions& o) {
    auto& c = o.config;
    app.add_option("--master-seed", c.master_seed, "Master seed for every random draw");
    app.add_option("--generations", o.generations, "Generations to run (added to the snapshot's when resuming)");
    app.add_option("--archive-mode", o.mode, "instances-nodes or instances-entropy");
    app.add_option("--bins-x", c.bins_x, "Archive bins along the instance axis");
    app.add_option("--bins-y", c.bins_y, "Archive bins along the second axis");
    app.add_option("--horizon", c.sim.horizon, "Simulation ticks per rollout");
    app.add_option("--seed-count", c.seed_count, "Evaluation seeds per genotype");
    app.add_option("--batch-size", c.batch_size, "Offspring per generation");
    app.add_option("--random-injection-period", c.random_injection_period, "Mutants per injected random genotype");
    app.add_option("--initial-batch", c.initial_batch, "Random genotypes evaluated at generation 0");
    app.add_option("--node-prob", c.mutation.node_prob, "Node mutation loop probability");
    app.add_option("--edge-prob", c.mutation.edge_prob, "Edge mutation loop probability");
    app.add_option("--instance-prob", c.mutation.instance_prob, "Instance mutation loop probability");
    app.add_option("--max-node-count", c.mutation.max_node_count, "Largest node count touched by one node edit");
    app.add_option("--classes", c.layout.class_count, "Entity classes per fortress");
    app.add_option("--width", c.layout.width, "Fortress width including walls");
    app.add_option("--height", c.layout.height, "Fortress height including walls");
    app.add_option("--overpopulation-cap", c.sim.overpopulation_cap, "Instance count that ends a rollout");
    app.add_option("--checkpoint-every", o.checkpoint_every, "Write the snapshot every N generations (0 = only at the end)");
    app.add_option("--jobs", o.jobs, "Parallel evaluation threads (0 = all)");
    app.add_option("--out", o.out, "Snapshot path (default $QDAF_OUT_DIR/archive.arch)");
    app.add_option("--telemetry", o.telemetry, "Telemetry path (default $QDAF_OUT_DIR/telemetry.tsv)");
    app.add_option("--resume", o.resume, "Continue from a snapshot; its stored configuration is used");
}

int run_evolve(EvolveOptions& o, std::ostream& out) {
    if (o.generations < 0) throw ConfigError("generations must be non-negative");
    if (o.checkpoint_every < 0) throw ConfigError("checkpoint-every must be non-negative");
    const auto snapshot_path = resolve(o.out, "archive.arch");
    const auto telemetry_path = resolve(o.telemetry, "telemetry.tsv");

    std::optional<Evolution> run;
    std::string telemetry;
    if (!o.resume.empty()) {
        auto snap = load_snapshot(o.resume);
        require_valid(snap.config);
        run.emplace(snap.config, snap.eval_seeds, snap.generation, snap.archive, o.jobs);
        if (fs::exists(telemetry_path)) telemetry = read_file(telemetry_path);
    } else {
        auto mode = parse_archive_mode(o.mode);
        if (!mode) throw ConfigError("archive-mode: expected instances-nodes or instances-entropy, got '" + o.mode + "'");
        o.config.mode = *mode;
        require_valid(o.config);
        run.emplace(o.config, o.jobs);
    }
    if (telemetry.empty()) telemetry = "# " + config_line(run->config()) + "\n" + std::string(kTelemetryHeader) + "\n";

    auto checkpoint = [&] {
        write_text(snapshot_path, serialize_snapshot({run->config(), run->eval_seeds(), run->generation(), run->archive()}));
        write_text(telemetry_path, telemetry);
    };

    if (!run->initialized()) telemetry += telemetry_row(run->initialize());
    for (int g = 0; g < o.generations; ++g) {
        telemetry += telemetry_row(run->step());
        if (o.checkpoint_every > 0 && run->generation() % o.checkpoint_every == 0) checkpoint();
    }
    checkpoint();

    const auto t = run->telemetry();
    out << "generation " << t.generation << "\nqd_score " << format_double(t.qd_score) << "\nbest_score "
        << format_double(t.best_score) << "\noccupied_cells " << t.occupied_cells << "\nsnapshot "
        << snapshot_path.string() << "\n";
    return kOk;
}

// --- simulate / render -----------------------------------------------------

struct SimulateOptions {
    std::string genotype;
    std::uint64_t seed = 0;
    int horizon = kDefaultHorizon;
    int overpopulation_cap = kDefaultOverpopulationCap;
    bool render = false;
    std::string log;
    std::string population;
    std::string frames;
};

std::string frame_stream(const FortressGenotype& g, const SimulateOptions& o) {
    SimulationState state(g, o.seed, {o.horizon, o.overpopulation_cap});
    std::string frames;
    while (state.termination() == Termination::running) {
        state.step();
        frames += "frame " + std::to_string(state.tick()) + "\n" + state.render_frame();
    }
    return frames;
}

int run_simulate(const SimulateOptions& o, std::ostream& out) {
    if (o.horizon < 1) throw ConfigError("horizon must be at least 1");
    const auto g = parse_genotype(read_file(o.genotype));
    const auto state = simulate(g, o.seed, {o.horizon, o.overpopulation_cap}, true);

    const auto log_path = resolve(o.log, "rollout.roll");
    const auto pop_path = resolve(o.population, "population.tsv");
    write_text(log_path, serialize_rollout(*state.log(), o.seed, o.horizon));
    write_text(pop_path, population_table(g, state.population_log()));

    if (o.render) {
        const auto frames = frame_stream(g, o);
        if (o.frames.empty())
            out << frames;
        else
            write_text(o.frames, frames);
    }
    const auto e = state.exploration();
    out << "termination " << to_string(state.termination()) << "\nticks " << state.tick() << "\ninstances "
        << state.live_count() << "\nexplored " << e.explored << "/" << e.total << "\nfitness "
        << format_double(e.fitness()) << "\n";
    return kOk;
}

int run_render(const SimulateOptions& o, std::ostream& out) {
    if (o.horizon < 1) throw ConfigError("horizon must be at least 1");
    const auto g = parse_genotype(read_file(o.genotype));
    out << frame_stream(g, o);
    return kOk;
}

// --- reevaluate --------------------------------------------------------------

struct ReevaluateOptions {
    std::string snapshot;
    int new_seeds = 5;
    bool keep_seeds = false;
    std::optional<std::uint64_t> seed_source;
    std::vector<int> horizons;
    std::string out_prefix;
    std::string report;
    int jobs = 0;
};

int run_reevaluate(const ReevaluateOptions& o, std::ostream& out) {
    const auto snap = load_snapshot(o.snapshot);
    if (snap.archive.empty()) throw ConfigError("snapshot archive is empty");
    if (!o.keep_seeds && o.new_seeds < 1) throw ConfigError("new-seeds must be at least 1");
    auto horizons = o.horizons.empty() ? std::vector<int>{snap.config.sim.horizon} : o.horizons;
    for (int h : horizons)
        if (h < 1) throw ConfigError("horizon must be at least 1");

    std::vector<std::uint64_t> seeds = snap.eval_seeds;
    if (!o.keep_seeds) {
        const auto source = o.seed_source ? *o.seed_source : derive_seed(snap.config.master_seed, {kReevalSeedTag});
        seeds = draw_eval_seeds(source, o.new_seeds);
    }

    const fs::path prefix = o.out_prefix.empty() ? output_dir() / "reeval" : fs::path(o.out_prefix);
    const auto& before = snap.archive;

    std::ostringstream report;
    report << "# " << config_line(snap.config) << "\n";
    report << "new_seeds\tepisode_steps\tbest_score\tqd_score\tarchive_size\tdelta_best\tdelta_qd\tdelta_size\tsnapshot\n";
    report << "no\t" << snap.config.sim.horizon << '\t' << format_double(before.best_score()) << '\t'
           << format_double(before.qd_score()) << '\t' << before.size() << "\t0\t0\t0\t" << o.snapshot << '\n';

    for (int h : horizons) {
        SimConfig sim = snap.config.sim;
        sim.horizon = h;
        const auto after = reevaluate_archive(before, seeds, sim, o.jobs);

        ArchiveSnapshot fresh{snap.config, seeds, snap.generation, after};
        fresh.config.sim.horizon = h;
        fs::path path = prefix;
        path += ".h" + std::to_string(h) + ".arch";
        write_text(path, serialize_snapshot(fresh));

        report << (o.keep_seeds ? "no" : "yes") << '\t' << h << '\t' << format_double(after.best_score()) << '\t'
               << format_double(after.qd_score()) << '\t' << after.size() << '\t'
               << format_double(after.best_score() - before.best_score()) << '\t'
               << format_double(after.qd_score() - before.qd_score()) << '\t'
               << static_cast<long long>(after.size()) - static_cast<long long>(before.size()) << '\t'
               << path.string() << '\n';
    }

    const auto report_path = resolve(o.report, "reeval_report.tsv");
    write_text(report_path, report.str());
    out << report.str();
    return kOk;
}

// --- export ------------------------------------------------------------------

struct ExportOptions {
    std::string snapshot;
    std::string out;
    std::string heat = "fitness";
    std::string grid;
};

int run_export(const ExportOptions& o, std::ostream& out) {
    if (o.heat != "fitness" && o.heat != "entropy" && o.heat != "n_nodes")
        throw ConfigError("heat: expected fitness, entropy or n_nodes, got '" + o.heat + "'");
    const auto snap = load_snapshot(o.snapshot);
    const auto records = snap.archive.export_records();
    const auto csv = serialize_heatmap(records);
    if (o.out.empty())
        out << csv;
    else
        write_text(o.out, csv);

    if (!o.grid.empty()) {
        // Dense bins_y x bins_x matrix of the heat column; empty cells are blank.
        const auto& shape = snap.archive.shape();
        std::vector<std::vector<std::string>> grid(shape.bins_y, std::vector<std::string>(shape.bins_x));
        for (const auto& r : records) {
            const double v = o.heat == "fitness" ? r.fitness : o.heat == "entropy" ? r.entropy : r.n_nodes;
            grid[r.bin_y][r.bin_x] = format_double(v);
        }
        std::string text;
        for (const auto& row : grid) {
            for (std::size_t x = 0; x < row.size(); ++x) text += (x ? "," : "") + row[x];
            text += '\n';
        }
        write_text(o.grid, text);
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quality-diversity search over fortress simulations", "qdaf"};
    app.require_subcommand(1);

    app.config_formatter(std::make_shared<EvolveConfigFile>());
    app.set_config("--config", "", "INI/TOML file of evolve options; flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    EvolveOptions evolve;
    auto* evolve_cmd = app.add_subcommand("evolve", "Run MAP-Elites and write an archive snapshot plus telemetry");
    evolve_cmd->fallthrough();
    add_evolve(*evolve_cmd, evolve);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Run one rollout and write its log and population table");
    sim_cmd->add_option("genotype", sim.genotype, "Genotype document (.fort)")->required();
    sim_cmd->add_option("--seed", sim.seed, "Rollout seed");
    sim_cmd->add_option("--horizon", sim.horizon, "Ticks to simulate");
    sim_cmd->add_option("--overpopulation-cap", sim.overpopulation_cap, "Instance count that ends the rollout");
    sim_cmd->add_flag("--render", sim.render, "Also emit one ASCII frame per tick");
    sim_cmd->add_option("--log", sim.log, "Rollout log path (default $QDAF_OUT_DIR/rollout.roll)");
    sim_cmd->add_option("--population", sim.population, "Population table path (default $QDAF_OUT_DIR/population.tsv)");
    sim_cmd->add_option("--frames", sim.frames, "Write frames here instead of stdout");

    SimulateOptions render;
    auto* render_cmd = app.add_subcommand("render", "Print one ASCII frame per tick of a rollout");
    render_cmd->add_option("genotype", render.genotype, "Genotype document (.fort)")->required();
    render_cmd->add_option("--seed", render.seed, "Rollout seed");
    render_cmd->add_option("--horizon", render.horizon, "Ticks to simulate");
    render_cmd->add_option("--overpopulation-cap", render.overpopulation_cap, "Instance count that ends the rollout");

    ReevaluateOptions reeval;
    std::uint64_t seed_source = 0;
    auto* reeval_cmd = app.add_subcommand("reevaluate", "Re-evaluate archive elites into fresh archives");
    reeval_cmd->add_option("snapshot", reeval.snapshot, "Archive snapshot (.arch)")->required();
    reeval_cmd->add_option("--new-seeds", reeval.new_seeds, "Number of fresh evaluation seeds");
    reeval_cmd->add_flag("--keep-seeds", reeval.keep_seeds, "Reuse the snapshot's evaluation seeds");
    auto* source_opt = reeval_cmd->add_option("--seed-source", seed_source, "Seed from which fresh seeds are drawn");
    reeval_cmd->add_option("--horizon", reeval.horizons, "Episode length; repeat for several (default: snapshot horizon)");
    reeval_cmd->add_option("--out-prefix", reeval.out_prefix, "Prefix for re-evaluated snapshots");
    reeval_cmd->add_option("--report", reeval.report, "Report path (default $QDAF_OUT_DIR/reeval_report.tsv)");
    reeval_cmd->add_option("--jobs", reeval.jobs, "Parallel evaluation threads (0 = all)");

    ExportOptions exp;
    auto* export_cmd = app.add_subcommand("export", "Write the archive heatmap table as CSV");
    export_cmd->add_option("snapshot", exp.snapshot, "Archive snapshot (.arch)")->required();
    export_cmd->add_option("--out", exp.out, "CSV path (default stdout)");
    export_cmd->add_option("--heat", exp.heat, "Column for --grid: fitness, entropy or n_nodes");
    export_cmd->add_option("--grid", exp.grid, "Also write a dense bins_y x bins_x matrix of the heat column");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*evolve_cmd) return run_evolve(evolve, out);
        if (*sim_cmd) return run_simulate(sim, out);
        if (*render_cmd) return run_render(render, out);
        if (*reeval_cmd) {
            if (*source_opt) reeval.seed_source = seed_source;
            return run_reevaluate(reeval, out);
        }
        if (*export_cmd) return run_export(exp, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const FormatError& e) {
        err << (e.kind() == FormatError::Kind::io ? "io error: " : "parse error: ") << e.what() << "\n";
        return e.kind() == FormatError::Kind::io ? kIoError : kParseError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const fs::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    }
    return kConfigError;
}

}  // namespace qdaf::cli
