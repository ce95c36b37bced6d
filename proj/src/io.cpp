#include "qdaf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qdaf {

namespace {

using Kind = FormatError::Kind;

std::vector<std::string_view> split(std::string_view s, char sep = ' ') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = s.find(sep, start);
        const auto stop = end == std::string_view::npos ? s.size() : end;
        if (stop > start || sep != ' ') out.push_back(s.substr(start, stop - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, int line, std::string_view what) {
    T v{};
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end)
        throw FormatError(Kind::malformed, line, "bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

char parse_glyph(std::string_view s, int line) {
    if (s.size() != 1 || !is_valid_glyph(s[0]))
        throw FormatError(Kind::malformed, line, "bad glyph '" + std::string(s) + "'");
    return s[0];
}

// Line cursor with 1-based numbering.
class Lines {
public:
    explicit Lines(std::string_view text) {
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            lines_.push_back(text.substr(start, end - start));
            start = end + 1;
        }
    }

    bool done() const { return pos_ >= lines_.size(); }
    int line() const { return static_cast<int>(pos_); }

    std::string_view next(std::string_view expecting) {
        if (done()) throw FormatError(Kind::truncated, line(), "unexpected end of input, expected " + std::string(expecting));
        return lines_[pos_++];
    }

    /// Next line split on spaces; its first token must equal `keyword`.
    std::vector<std::string_view> expect(std::string_view keyword, std::size_t min_tokens = 1) {
        auto tokens = split(next(keyword));
        if (tokens.empty() || tokens[0] != keyword)
            throw FormatError(Kind::malformed, line(), "expected '" + std::string(keyword) + "'");
        if (tokens.size() < min_tokens)
            throw FormatError(Kind::malformed, line(), "too few fields on '" + std::string(keyword) + "' line");
        return tokens;
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

void check_magic(Lines& in, std::string_view magic, int version) {
    auto tokens = split(in.next("header"));
    if (tokens.size() != 2 || tokens[0] != magic)
        throw FormatError(Kind::malformed, in.line(), "missing '" + std::string(magic) + "' header");
    const int v = parse_number<int>(tokens[1], in.line(), "version");
    if (v != version)
        throw FormatError(Kind::version, in.line(),
                          "unsupported " + std::string(magic) + " version " + std::to_string(v) + " (expected " +
                              std::to_string(version) + ")");
}

std::string node_text(const ActionNode& n) {
    std::string s(to_string(n.kind));
    if (is_targeted(n.kind)) (s += ' ') += n.target;
    return s;
}

void write_genotype(std::ostringstream& os, const FortressGenotype& g) {
    os << "qdaf-fortress " << kGenotypeFormatVersion << '\n';
    os << "size " << g.width << ' ' << g.height << '\n';
    os << "alphabet " << g.alphabet() << '\n';

    std::vector<const EntityClassDef*> ordered;
    for (const auto& c : g.classes) ordered.push_back(&c);
    std::stable_sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->glyph < b->glyph; });

    for (const auto* c : ordered) {
        os << "class " << c->glyph << ' ' << c->class_id << ' ' << c->nodes.size() << ' ' << c->edges.size() << '\n';
        for (const auto& n : c->nodes) os << "node " << node_text(n) << '\n';
        for (const auto& e : c->edges) {
            const auto& k = e.condition;
            os << "edge " << e.source << ' ' << e.destination << ' ' << to_string(k.kind) << ' '
               << (has_glyph(k.kind) ? k.glyph : '-') << ' ' << k.param << '\n';
        }
    }
    os << "placements " << g.placements.size() << '\n';
    for (const auto& p : g.placements) os << "at " << p.glyph << ' ' << p.x << ' ' << p.y << '\n';
    os << "end\n";
}

FortressGenotype read_genotype(Lines& in) {
    check_magic(in, "qdaf-fortress", kGenotypeFormatVersion);
    FortressGenotype g;

    auto size = in.expect("size", 3);
    g.width = parse_number<int>(size[1], in.line(), "width");
    g.height = parse_number<int>(size[2], in.line(), "height");
    if (g.width < 3 || g.height < 3) throw FormatError(Kind::invalid, in.line(), "fortress must be at least 3x3");

    auto alpha = in.expect("alphabet", 2);
    const Alphabet alphabet(alpha[1]);
    const int n = static_cast<int>(alphabet.size());
    const auto known = [&](char c) { return alphabet.find(c) != Alphabet::npos; };

    for (int ci = 0; ci < n; ++ci) {
        auto head = in.expect("class", 5);
        EntityClassDef def;
        def.glyph = parse_glyph(head[1], in.line());
        def.class_id = parse_number<int>(head[2], in.line(), "class id");
        const int nodes = parse_number<int>(head[3], in.line(), "node count");
        const int edges = parse_number<int>(head[4], in.line(), "edge count");
        if (nodes < 1 || nodes > max_nodes_per_class(n))
            throw FormatError(Kind::invalid, in.line(), "node count " + std::to_string(nodes) + " out of range");
        if (edges < 0) throw FormatError(Kind::invalid, in.line(), "negative edge count");

        for (int i = 0; i < nodes; ++i) {
            auto t = in.expect("node", 2);
            const auto kind = parse_action_kind(t[1]);
            if (!kind) throw FormatError(Kind::malformed, in.line(), "unknown action '" + std::string(t[1]) + "'");
            ActionNode node{*kind, '\0'};
            if (is_targeted(*kind)) {
                if (t.size() != 3) throw FormatError(Kind::malformed, in.line(), "action needs a target glyph");
                node.target = parse_glyph(t[2], in.line());
                if (!known(node.target))
                    throw FormatError(Kind::invalid, in.line(), "unknown target '" + std::string(t[2]) + "'");
            } else if (t.size() != 2) {
                throw FormatError(Kind::malformed, in.line(), "action takes no target");
            }
            def.nodes.push_back(node);
        }
        for (int i = 0; i < edges; ++i) {
            auto t = in.expect("edge", 6);
            Edge e;
            e.source = parse_number<int>(t[1], in.line(), "edge source");
            e.destination = parse_number<int>(t[2], in.line(), "edge destination");
            if (e.source < 0 || e.source >= nodes || e.destination < 0 || e.destination >= nodes)
                throw FormatError(Kind::invalid, in.line(), "dangling edge " + std::string(t[1]) + "->" +
                                                                std::string(t[2]) + " in class with " +
                                                                std::to_string(nodes) + " nodes");
            const auto kind = parse_condition_kind(t[3]);
            if (!kind) throw FormatError(Kind::malformed, in.line(), "unknown condition '" + std::string(t[3]) + "'");
            e.condition.kind = *kind;
            if (has_glyph(*kind)) {
                e.condition.glyph = parse_glyph(t[4], in.line());
                if (!known(e.condition.glyph))
                    throw FormatError(Kind::invalid, in.line(), "unknown target '" + std::string(t[4]) + "'");
            } else if (t[4] != "-") {
                throw FormatError(Kind::malformed, in.line(), "condition takes no glyph");
            }
            e.condition.param = parse_number<int>(t[5], in.line(), "condition parameter");
            def.edges.push_back(e);
        }
        g.classes.push_back(std::move(def));
    }

    auto pl = in.expect("placements", 2);
    const int count = parse_number<int>(pl[1], in.line(), "placement count");
    for (int i = 0; i < count; ++i) {
        auto t = in.expect("at", 4);
        Placement p;
        p.glyph = parse_glyph(t[1], in.line());
        p.x = parse_number<int>(t[2], in.line(), "x");
        p.y = parse_number<int>(t[3], in.line(), "y");
        if (!known(p.glyph)) throw FormatError(Kind::invalid, in.line(), "placement of unknown glyph");
        if (!g.is_interior(p.x, p.y))
            throw FormatError(Kind::invalid, in.line(),
                              "placement (" + std::string(t[2]) + "," + std::string(t[3]) + ") out of bounds");
        g.placements.push_back(p);
    }
    in.expect("end");

    if (g.alphabet() != alphabet)
        throw FormatError(Kind::invalid, in.line(), "class glyphs do not match the alphabet line");
    if (auto v = validate_genotype(g); !v.empty()) throw FormatError(Kind::invalid, in.line(), v.front());
    return g;
}

void write_result(std::ostringstream& os, const EvalResult& r) {
    os << "result " << format_double(r.fitness) << ' ' << r.explored << ' ' << r.total << ' '
       << format_double(r.bc_instances) << ' ' << r.bc_nodes << ' ' << format_double(r.entropy) << ' '
       << r.seeds.size() << '\n';
    for (const auto& s : r.seeds) {
        os << "seed " << s.seed << ' ' << s.final_count << ' ' << to_string(s.termination) << ' ' << s.ticks << ' '
           << s.population.size() << '\n';
        for (const auto& row : s.population) {
            os << "pop";
            for (int v : row) os << ' ' << v;
            os << '\n';
        }
    }
}

EvalResult read_result(Lines& in) {
    auto t = in.expect("result", 8);
    const int l = in.line();
    EvalResult r;
    r.fitness = parse_number<double>(t[1], l, "fitness");
    r.explored = parse_number<int>(t[2], l, "explored count");
    r.total = parse_number<int>(t[3], l, "total count");
    r.bc_instances = parse_number<double>(t[4], l, "bc_instances");
    r.bc_nodes = parse_number<int>(t[5], l, "bc_nodes");
    r.entropy = parse_number<double>(t[6], l, "entropy");
    const auto seeds = parse_number<std::size_t>(t[7], l, "seed count");
    if (r.fitness < 0.0 || r.fitness > 1.0 || r.explored < 0 || r.explored > r.total)
        throw FormatError(Kind::invalid, l, "inconsistent fitness record");
    for (std::size_t i = 0; i < seeds; ++i) {
        auto s = in.expect("seed", 6);
        SeedOutcome o;
        o.seed = parse_number<std::uint64_t>(s[1], in.line(), "seed");
        o.final_count = parse_number<int>(s[2], in.line(), "final count");
        const auto term = parse_termination(s[3]);
        if (!term) throw FormatError(Kind::malformed, in.line(), "unknown termination '" + std::string(s[3]) + "'");
        o.termination = *term;
        o.ticks = parse_number<int>(s[4], in.line(), "ticks");
        const auto rows = parse_number<std::size_t>(s[5], in.line(), "population rows");
        for (std::size_t k = 0; k < rows; ++k) {
            auto p = in.expect("pop");
            std::vector<int> row;
            for (std::size_t j = 1; j < p.size(); ++j) row.push_back(parse_number<int>(p[j], in.line(), "population"));
            o.population.push_back(std::move(row));
        }
        r.seeds.push_back(std::move(o));
    }
    return r;
}

}  // namespace

FormatError::FormatError(Kind kind, int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      kind_(kind),
      line_(line) {}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_genotype(const FortressGenotype& g) {
    std::ostringstream os;
    write_genotype(os, g);
    return os.str();
}

FortressGenotype parse_genotype(std::string_view text) {
    Lines in(text);
    auto g = read_genotype(in);
    if (!in.done()) throw FormatError(Kind::malformed, in.line() + 1, "trailing content after 'end'");
    return g;
}

std::string action_token(LogEvent event, const ActionNode& action) {
    switch (event) {
    case LogEvent::init:
        return "init";
    case LogEvent::spawn:
        return "spawn";
    case LogEvent::taken:
        return "taken";
    case LogEvent::act:
        break;
    }
    std::string s(to_string(action.kind));
    if (is_targeted(action.kind)) (s += ':') += action.target;
    return s;
}

std::string serialize_rollout(const RolloutLog& log, std::uint64_t seed, int horizon) {
    std::ostringstream os;
    os << "qdaf-roll " << kRolloutFormatVersion << '\n';
    os << "rollout " << seed << ' ' << horizon << '\n';
    for (const auto& r : log.records) {
        os << r.tick << ' ' << r.instance_id << ' ' << r.glyph << ' ' << r.x << ' ' << r.y << ' ' << r.node << ' '
           << action_token(r.event, r.action) << ' ' << r.edge << '\n';
    }
    os << "end " << to_string(log.termination) << ' ' << log.ticks << ' ' << log.final_count << '\n';
    return os.str();
}

ParsedRollout parse_rollout(std::string_view text) {
    Lines in(text);
    check_magic(in, "qdaf-roll", kRolloutFormatVersion);
    ParsedRollout out;
    auto head = in.expect("rollout", 3);
    out.seed = parse_number<std::uint64_t>(head[1], in.line(), "seed");
    out.horizon = parse_number<int>(head[2], in.line(), "horizon");

    for (;;) {
        auto t = split(in.next("record or end"));
        const int l = in.line();
        if (!t.empty() && t[0] == "end") {
            if (t.size() != 4) throw FormatError(Kind::malformed, l, "bad trailer");
            const auto term = parse_termination(t[1]);
            if (!term) throw FormatError(Kind::malformed, l, "unknown termination");
            out.log.termination = *term;
            out.log.ticks = parse_number<int>(t[2], l, "ticks");
            out.log.final_count = parse_number<int>(t[3], l, "final count");
            break;
        }
        if (t.size() != 8) throw FormatError(Kind::malformed, l, "expected 8 fields");
        LogRecord r;
        r.tick = parse_number<int>(t[0], l, "tick");
        r.instance_id = parse_number<std::int64_t>(t[1], l, "instance id");
        r.glyph = parse_glyph(t[2], l);
        r.x = parse_number<int>(t[3], l, "x");
        r.y = parse_number<int>(t[4], l, "y");
        r.node = parse_number<int>(t[5], l, "node");
        r.edge = parse_number<int>(t[7], l, "edge");
        const auto tok = t[6];
        if (tok == "init") {
            r.event = LogEvent::init;
        } else if (tok == "spawn") {
            r.event = LogEvent::spawn;
        } else if (tok == "taken") {
            r.event = LogEvent::taken;
        } else {
            const auto colon = tok.find(':');
            const auto kind = parse_action_kind(tok.substr(0, colon));
            if (!kind) throw FormatError(Kind::malformed, l, "unknown action '" + std::string(tok) + "'");
            r.event = LogEvent::act;
            r.action.kind = *kind;
            if (is_targeted(*kind)) {
                if (colon == std::string_view::npos) throw FormatError(Kind::malformed, l, "action needs a target");
                r.action.target = parse_glyph(tok.substr(colon + 1), l);
            }
        }
        out.log.records.push_back(r);
    }
    return out;
}

std::string population_table(const FortressGenotype& g, const std::vector<std::vector<int>>& population) {
    std::ostringstream os;
    os << "tick";
    for (const auto& c : g.classes) os << '\t' << c.glyph;
    os << "\ttotal\n";
    for (std::size_t t = 0; t < population.size(); ++t) {
        os << t;
        int total = 0;
        for (int v : population[t]) {
            os << '\t' << v;
            total += v;
        }
        os << '\t' << total << '\n';
    }
    return os.str();
}

std::string config_line(const SearchConfig& c) {
    std::ostringstream os;
    os << "config master_seed=" << c.master_seed << " class_count=" << c.layout.class_count
       << " width=" << c.layout.width << " height=" << c.layout.height << " horizon=" << c.sim.horizon
       << " overpopulation_cap=" << c.sim.overpopulation_cap << " seed_count=" << c.seed_count
       << " mode=" << to_string(c.mode) << " bins_x=" << c.bins_x << " bins_y=" << c.bins_y
       << " batch_size=" << c.batch_size << " random_injection_period=" << c.random_injection_period
       << " initial_batch=" << c.initial_batch << " node_prob=" << format_double(c.mutation.node_prob)
       << " edge_prob=" << format_double(c.mutation.edge_prob)
       << " instance_prob=" << format_double(c.mutation.instance_prob)
       << " max_loop_iterations=" << c.mutation.max_loop_iterations
       << " max_node_count=" << c.mutation.max_node_count;
    return os.str();
}

SearchConfig parse_config_line(std::string_view line) {
    auto tokens = split(line);
    if (tokens.empty() || tokens[0] != "config") throw FormatError(Kind::malformed, 0, "expected 'config' line");
    SearchConfig c;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string_view::npos) throw FormatError(Kind::malformed, 0, "bad config field");
        const auto key = tokens[i].substr(0, eq);
        const auto val = tokens[i].substr(eq + 1);
        auto i32 = [&] { return parse_number<int>(val, 0, key); };
        auto f64 = [&] { return parse_number<double>(val, 0, key); };
        if (key == "master_seed") c.master_seed = parse_number<std::uint64_t>(val, 0, key);
        else if (key == "class_count") c.layout.class_count = i32();
        else if (key == "width") c.layout.width = i32();
        else if (key == "height") c.layout.height = i32();
        else if (key == "horizon") c.sim.horizon = i32();
        else if (key == "overpopulation_cap") c.sim.overpopulation_cap = i32();
        else if (key == "seed_count") c.seed_count = i32();
        else if (key == "mode") {
            auto m = parse_archive_mode(val);
            if (!m) throw FormatError(Kind::malformed, 0, "unknown archive mode '" + std::string(val) + "'");
            c.mode = *m;
        }
        else if (key == "bins_x") c.bins_x = i32();
        else if (key == "bins_y") c.bins_y = i32();
        else if (key == "batch_size") c.batch_size = i32();
        else if (key == "random_injection_period") c.random_injection_period = i32();
        else if (key == "initial_batch") c.initial_batch = i32();
        else if (key == "node_prob") c.mutation.node_prob = f64();
        else if (key == "edge_prob") c.mutation.edge_prob = f64();
        else if (key == "instance_prob") c.mutation.instance_prob = f64();
        else if (key == "max_loop_iterations") c.mutation.max_loop_iterations = i32();
        else if (key == "max_node_count") c.mutation.max_node_count = i32();
        else throw FormatError(Kind::malformed, 0, "unknown config key '" + std::string(key) + "'");
    }
    return c;
}

std::string serialize_snapshot(const ArchiveSnapshot& s) {
    std::ostringstream os;
    const auto& shape = s.archive.shape();
    os << "qdaf-archive " << kSnapshotFormatVersion << '\n';
    os << config_line(s.config) << '\n';
    os << "shape " << to_string(shape.mode) << ' ' << shape.bins_x << ' ' << shape.bins_y << ' '
       << format_double(shape.range_x.lo) << ' ' << format_double(shape.range_x.hi) << ' '
       << format_double(shape.range_y.lo) << ' ' << format_double(shape.range_y.hi) << '\n';
    os << "eval_seeds " << s.eval_seeds.size();
    for (auto seed : s.eval_seeds) os << ' ' << seed;
    os << '\n';
    os << "generation " << s.generation << '\n';
    os << "cells " << s.archive.size() << '\n';
    for (const auto& [cell, elite] : s.archive.cells()) {
        os << "cell " << cell.x << ' ' << cell.y << '\n';
        write_result(os, elite.result);
        write_genotype(os, elite.genotype);
    }
    std::string body = os.str();
    char trailer[40];
    std::snprintf(trailer, sizeof trailer, "checksum %016llx\n", static_cast<unsigned long long>(fnv1a64(body)));
    return body + trailer;
}

ArchiveSnapshot parse_snapshot(std::string_view text) {
    // The trailer must be present before anything else is trusted.
    std::string_view trimmed = text;
    while (!trimmed.empty() && trimmed.back() == '\n') trimmed.remove_suffix(1);
    const auto last_nl = trimmed.rfind('\n');
    const auto body = last_nl == std::string_view::npos ? std::string_view{} : text.substr(0, last_nl + 1);
    const auto trailer = last_nl == std::string_view::npos ? trimmed : trimmed.substr(last_nl + 1);

    Lines in(body.empty() ? text : body);
    check_magic(in, "qdaf-archive", kSnapshotFormatVersion);
    if (trailer.rfind("checksum ", 0) != 0)
        throw FormatError(Kind::truncated, 0, "snapshot has no checksum trailer (truncated file?)");

    ArchiveSnapshot s;
    {
        const auto line = in.next("config");
        try {
            s.config = parse_config_line(line);
        } catch (const FormatError& e) {
            throw FormatError(e.kind(), in.line(), e.what());
        }
    }

    auto shape_t = in.expect("shape", 8);
    ArchiveShape shape;
    {
        const int l = in.line();
        const auto mode = parse_archive_mode(shape_t[1]);
        if (!mode) throw FormatError(Kind::malformed, l, "unknown archive mode");
        shape.mode = *mode;
        shape.bins_x = parse_number<int>(shape_t[2], l, "bins_x");
        shape.bins_y = parse_number<int>(shape_t[3], l, "bins_y");
        shape.range_x = {parse_number<double>(shape_t[4], l, "range"), parse_number<double>(shape_t[5], l, "range")};
        shape.range_y = {parse_number<double>(shape_t[6], l, "range"), parse_number<double>(shape_t[7], l, "range")};
        if (shape.bins_x < 1 || shape.bins_y < 1) throw FormatError(Kind::invalid, l, "archive resolution must be positive");
    }
    s.archive = Archive(shape);

    auto seeds_t = in.expect("eval_seeds", 2);
    const auto seed_count = parse_number<std::size_t>(seeds_t[1], in.line(), "seed count");
    if (seeds_t.size() != seed_count + 2) throw FormatError(Kind::malformed, in.line(), "seed count mismatch");
    for (std::size_t i = 0; i < seed_count; ++i)
        s.eval_seeds.push_back(parse_number<std::uint64_t>(seeds_t[i + 2], in.line(), "seed"));

    s.generation = parse_number<int>(in.expect("generation", 2)[1], in.line(), "generation");
    const auto cells = parse_number<std::size_t>(in.expect("cells", 2)[1], in.line(), "cell count");

    for (std::size_t i = 0; i < cells; ++i) {
        auto head = in.expect("cell", 3);
        const std::string where = "cell (" + std::string(head[1]) + "," + std::string(head[2]) + "): ";
        try {
            const CellIndex cell{parse_number<int>(head[1], in.line(), "bin x"), parse_number<int>(head[2], in.line(), "bin y")};
            Elite e;
            e.result = read_result(in);
            e.genotype = read_genotype(in);
            if (s.archive.cell_of(e.result) != cell)
                throw FormatError(Kind::invalid, in.line(), "stored coordinates disagree with the descriptor");
            if (s.archive.cells().contains(cell))
                throw FormatError(Kind::invalid, in.line(), "duplicate cell");
            s.archive.insert(std::move(e));
        } catch (const FormatError& err) {
            throw FormatError(err.kind(), 0, where + err.what());
        }
    }
    if (!in.done()) throw FormatError(Kind::malformed, in.line() + 1, "unexpected content before checksum");

    const auto expected = trailer.substr(9);
    char actual[20];
    std::snprintf(actual, sizeof actual, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
    if (expected != actual)
        throw FormatError(Kind::checksum, 0, "checksum mismatch (stored " + std::string(expected) + ", computed " + actual + ")");
    return s;
}

std::string telemetry_row(const TelemetryRecord& t) {
    return std::to_string(t.generation) + '\t' + format_double(t.qd_score) + '\t' + format_double(t.best_score) + '\t' +
           std::to_string(t.occupied_cells) + '\n';
}

std::vector<TelemetryRecord> parse_telemetry(std::string_view text) {
    Lines in(text);
    std::vector<TelemetryRecord> out;
    bool header = false;
    while (!in.done()) {
        const auto line = in.next("row");
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kTelemetryHeader) throw FormatError(Kind::malformed, in.line(), "bad telemetry header");
            header = true;
            continue;
        }
        auto f = split(line, '\t');
        if (f.size() != 4) throw FormatError(Kind::malformed, in.line(), "expected 4 fields");
        out.push_back({parse_number<int>(f[0], in.line(), "generation"), parse_number<double>(f[1], in.line(), "qd_score"),
                       parse_number<double>(f[2], in.line(), "best_score"),
                       parse_number<std::size_t>(f[3], in.line(), "occupied_cells")});
    }
    return out;
}

std::string serialize_heatmap(const std::vector<HeatmapRecord>& records) {
    std::ostringstream os;
    os << kHeatmapHeader << '\n';
    for (const auto& r : records) {
        os << r.bin_x << ',' << r.bin_y << ',' << format_double(r.bc0) << ',' << format_double(r.bc1) << ','
           << format_double(r.fitness) << ',' << format_double(r.entropy) << ',' << r.n_nodes << '\n';
    }
    return os.str();
}

std::vector<HeatmapRecord> parse_heatmap(std::string_view text) {
    Lines in(text);
    if (in.next("header") != kHeatmapHeader) throw FormatError(Kind::malformed, 1, "bad heatmap header");
    std::vector<HeatmapRecord> out;
    while (!in.done()) {
        const auto line = in.next("row");
        if (line.empty()) continue;
        auto f = split(line, ',');
        const int l = in.line();
        if (f.size() != 7) throw FormatError(Kind::malformed, l, "expected 7 fields");
        out.push_back({parse_number<int>(f[0], l, "bin_x"), parse_number<int>(f[1], l, "bin_y"),
                       parse_number<double>(f[2], l, "bc0"), parse_number<double>(f[3], l, "bc1"),
                       parse_number<double>(f[4], l, "fitness"), parse_number<double>(f[5], l, "entropy"),
                       parse_number<int>(f[6], l, "n_nodes")});
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(Kind::io, 0, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError(Kind::io, 0, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw FormatError(Kind::io, 0, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw FormatError(Kind::io, 0, "cannot rename " + tmp.string() + ": " + ec.message());
}

void save_snapshot(const std::filesystem::path& path, const ArchiveSnapshot& s) {
    write_file_atomic(path, serialize_snapshot(s));
}

ArchiveSnapshot load_snapshot(const std::filesystem::path& path) { return parse_snapshot(read_file(path)); }

}  // namespace qdaf
