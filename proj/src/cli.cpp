#include "chaincatch/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include "chaincatch/error.hpp"
#include "chaincatch/render.hpp"
#include "chaincatch/trace.hpp"

namespace chaincatch {

namespace {

const std::vector<std::string> kEscapeeNames{"random", "naive", "kcircle", "kcircle-rot", "slope"};
const std::vector<std::string> kChainNames{"random", "tag1", "tag2", "var1", "var2"};

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
    return out;
}

// Flags that feed the manifest. Values stay as text until the manifest resolves them.
class ManifestFlags {
public:
    CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto& slot = values_.emplace_back(std::make_unique<std::string>());
        CLI::Option* opt = app->add_option(flag, *slot, help);
        bound_.push_back({opt, key, slot.get()});
        return opt;
    }

    void apply(RunManifest& m) const {
        for (const auto& b : bound_)
            if (b.option->count() > 0) m.set(b.key, *b.value, Source::Flag);
    }

private:
    struct Bound {
        CLI::Option* option;
        std::string key;
        std::string* value;
    };
    std::vector<std::unique_ptr<std::string>> values_;
    std::vector<Bound> bound_;
};

const CLI::Validator kInteger = CLI::TypeValidator<long long>("INT");
const CLI::Validator kSeed = CLI::TypeValidator<std::uint64_t>("SEED");

CLI::Validator list_of(const std::vector<std::string>& allowed) {
    return CLI::Validator(
        [allowed](std::string& value) -> std::string {
            for (const auto& item : split_list(value))
                if (std::find(allowed.begin(), allowed.end(), item) == allowed.end())
                    return "'" + item + "' is not one of " + join(allowed);
            return {};
        },
        "LIST");
}

const CLI::Validator kPositiveList(
    [](std::string& value) -> std::string {
        for (const auto& item : split_list(value)) {
            long long n = 0;
            if (!CLI::detail::lexical_cast(item, n) || n < 1) return "'" + item + "' is not a positive integer";
        }
        return {};
    },
    "N[,N...]");

void add_params(ManifestFlags& flags, CLI::App* cmd) {
    flags.add(cmd, "--k", "k", "K circle radius")->check(CLI::Number);
    flags.add(cmd, "--k2", "k2", "escapee repulsion weight")->check(CLI::Number);
    flags.add(cmd, "--nsd", "nsd", "escapee safe distance")->check(CLI::Number);
    flags.add(cmd, "--dtheta", "dtheta", "K circle rotation step (radians)")->check(CLI::Number);
    flags.add(cmd, "--max-constant", "max_constant", "naive escapee constant")->check(CLI::Number);
    flags.add(cmd, "--r-safe", "r_safe", "chain spacing target")->check(CLI::Number);
    flags.add(cmd, "--r-touch", "r_touch", "leader approach distance")->check(CLI::Number);
    flags.add(cmd, "--switch-margin", "switch_margin", "distance gain needed to change pursuit")->check(CLI::Number);
    flags.add(cmd, "--width", "width", "arena width in cells")->check(kInteger);
    flags.add(cmd, "--height", "height", "arena height in cells")->check(kInteger);
    flags.add(cmd, "--agent-diameter", "agent_diameter", "agent diameter in cells")->check(kInteger);
    flags.add(cmd, "--slope-length", "slope_length", "corner slope length in cells")->check(kInteger);
    flags.add(cmd, "--max-steps", "max_steps", "cycle limit")->check(kInteger);
}

// Loads a config file as Source::File, or the manifest echoed in an artifact
// ("manifest k = v (src)" or "# k = v (src)" lines) with its recorded sources.
void load_settings(RunManifest& m, const std::string& path) {
    const std::string text = read_file(path);
    const std::string first = text.substr(0, text.find('\n'));
    const bool artifact = first.rfind("chaincatch-trace", 0) == 0 ||
                          (first.rfind("# ", 0) == 0 && first.find(" = ") != std::string::npos &&
                           !first.empty() && first.back() == ')');
    if (!artifact) {
        apply_config_text(m, text);
        return;
    }
    std::size_t start = 0;
    int line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (line.rfind("manifest ", 0) == 0)
            line.erase(0, 9);
        else if (line.rfind("# ", 0) == 0)
            line.erase(0, 2);
        else
            continue;
        Source source = Source::File;
        if (const auto paren = line.rfind(" ("); paren != std::string::npos && line.back() == ')') {
            const std::string tag = line.substr(paren + 2, line.size() - paren - 3);
            if (tag == "default") source = Source::Default;
            else if (tag == "env") source = Source::Env;
            else if (tag == "flag") source = Source::Flag;
            else if (tag != "file") throw ParseError("unknown setting source '" + tag + "'", line_no);
            line.resize(paren);
        }
        const auto kv = parse_key_values(line);
        if (kv.size() != 1 || !is_config_key(kv[0].key) || kv[0].value.empty())
            throw ParseError("bad manifest line '" + line + "'", line_no);
        m.set(kv[0].key, kv[0].value, source);
    }
}

void seed_from_env(RunManifest& m) {
    if (const char* env = std::getenv("CHAINCATCH_SEED"); env && *env) m.set("seed", env, Source::Env);
}

int cmd_run(RunManifest& m, const std::string& out_path, std::ostream& out) {
    const GameConfig config = resolve_game_config(m);
    config.validate();
    const GameTrace trace = run_game(config);
    write_file(out_path, serialize_trace(trace, m.render("manifest ")));
    if (trace.outcome.kind == OutcomeKind::Complete)
        out << "Complete T_c=" << trace.outcome.cycles << "\n";
    else
        out << "Timeout after " << trace.outcome.cycles << " cycles (T_c > max_steps)\n";
    out << "trace written to " << out_path << "\n";
    return 0;
}

int cmd_batch(RunManifest& m, const std::string& prefix, int threads, std::ostream& out) {
    const MatrixSpec spec = resolve_matrix_spec(m);
    const TransitionTable table = run_batch(spec, threads);
    const std::string header = m.render("# ");
    const std::string csv = export_csv(table);
    write_file(prefix + ".csv", header + csv);
    write_file(prefix + ".runs.txt", header + export_runs(table));
    out << csv << "\n" << summarize_orderings(table).render();
    out << "wrote " << prefix << ".csv and " << prefix << ".runs.txt\n";
    return 0;
}

int cmd_render(const std::string& trace_path, const RenderOptions& options, const std::string& dir,
               std::ostream& out) {
    const ParsedTrace parsed = parse_trace(read_file(trace_path));
    const auto frames = render_trace(parsed.trace, options, parsed.manifest_block);
    std::filesystem::create_directories(dir);
    for (const auto& f : frames) write_file((std::filesystem::path(dir) / f.name).string(), f.contents);
    out << "wrote " << frames.size() << " frames to " << dir << "\n";
    return 0;
}

int cmd_replay(const std::string& trace_path, std::ostream& out, std::ostream& err) {
    const std::string original = read_file(trace_path);
    const ParsedTrace parsed = parse_trace(original);
    const GameTrace again = run_game(parsed.trace.config);
    const std::string regenerated = serialize_trace(again, parsed.manifest_block);
    if (regenerated == original) {
        out << "replay identical: " << parsed.trace.records.size() << " records, outcome "
            << (again.outcome.kind == OutcomeKind::Complete ? "complete" : "timeout") << " "
            << again.outcome.cycles << "\n";
        return 0;
    }
    std::size_t a = 0, b = 0;
    int line = 1;
    while (true) {
        const auto ea = original.find('\n', a), eb = regenerated.find('\n', b);
        const auto la = original.substr(a, ea == std::string::npos ? std::string::npos : ea - a);
        const auto lb = regenerated.substr(b, eb == std::string::npos ? std::string::npos : eb - b);
        if (la != lb || ea == std::string::npos || eb == std::string::npos) {
            err << "replay diverged at line " << line << "\n  trace:  " << la << "\n  replay: " << lb << "\n";
            return 1;
        }
        a = ea + 1;
        b = eb + 1;
        ++line;
    }
}

} // namespace

MatrixSpec resolve_matrix_spec(RunManifest& m) {
    MatrixSpec spec;
    spec.arena = resolve_arena(m);

    const auto text_setting = [&](std::string_view key, const std::string& fallback) {
        if (auto v = m.get(key)) return *v;
        m.set(key, fallback, Source::Default);
        return fallback;
    };
    for (const auto& item : split_list(text_setting("agents", "10")))
        spec.agent_counts.push_back(int(parse_integer(item, "agents")));
    spec.runs_per_cell = int(parse_integer(text_setting("runs", "25"), "runs"));
    spec.base_seed = parse_seed(text_setting("seed", "1"), "seed");
    for (const auto& item : split_list(text_setting("escapee_strategies", join(kEscapeeNames)))) {
        const auto s = parse_escapee_strategy(item);
        if (!s) throw ParseError("escapee_strategies: unknown strategy '" + item + "'", 0);
        spec.escapee_strategies.push_back(*s);
    }
    for (const auto& item : split_list(text_setting("chain_strategies", join(kChainNames)))) {
        const auto s = parse_chain_strategy(item);
        if (!s) throw ParseError("chain_strategies: unknown strategy '" + item + "'", 0);
        spec.chain_strategies.push_back(*s);
    }
    spec.params = resolve_params(m, spec.arena);
    spec.validate();
    return spec;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chain Catch: grid pursuit simulator and benchmark harness", "chaincatch"};
    app.require_subcommand(1);

    // run
    ManifestFlags run_flags;
    std::string run_settings, run_out = "trace.txt";
    auto* run = app.add_subcommand("run", "play one game and write its trace");
    run->add_option("--arena,--config", run_settings, "config file (key = value) or an artifact with a manifest");
    run_flags.add(run, "--agents", "agents", "number of agents (>= 3)")->check(kInteger);
    run_flags.add(run, "--seed", "seed", "RNG seed")->check(kSeed);
    run_flags.add(run, "--catcher", "catcher", "id of the initial Catcher")->check(kInteger);
    run_flags.add(run, "--escapee-strategy", "escapee_strategy", "escapee strategy")
        ->check(CLI::IsMember(kEscapeeNames));
    run_flags.add(run, "--chain-strategy", "chain_strategy", "chain strategy")->check(CLI::IsMember(kChainNames));
    run_flags.add(run, "--positions", "positions", "file of 'id x y' start cells")->check(CLI::ExistingFile);
    add_params(run_flags, run);
    run->add_option("--out", run_out, "trace output path")->capture_default_str();

    // batch
    ManifestFlags batch_flags;
    std::string batch_settings, batch_out = "batch";
    int threads = int(std::max(1u, std::thread::hardware_concurrency()));
    auto* batch = app.add_subcommand("batch", "run a strategy matrix and report the orderings");
    batch->add_option("--arena,--config", batch_settings, "config file (key = value) or an artifact with a manifest");
    batch_flags.add(batch, "--agents", "agents", "agent counts, comma separated")->check(kPositiveList);
    batch_flags.add(batch, "--runs", "runs", "runs per cell (>= 1)")->check(kInteger & CLI::Range(1, 1000000));
    batch_flags.add(batch, "--seed", "seed", "base seed")->check(kSeed);
    batch_flags.add(batch, "--escapee-strategies", "escapee_strategies", "escapee strategies, comma separated")
        ->check(list_of(kEscapeeNames));
    batch_flags.add(batch, "--chain-strategies", "chain_strategies", "chain strategies, comma separated")
        ->check(list_of(kChainNames));
    add_params(batch_flags, batch);
    batch->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    batch->add_option("--out", batch_out, "writes PREFIX.csv and PREFIX.runs.txt")->capture_default_str();

    // render
    RenderOptions render_options;
    std::string render_trace_path, render_dir = "frames", render_format = "text";
    auto* render = app.add_subcommand("render", "write frames for a trace");
    render->add_option("trace", render_trace_path, "trace file")->required();
    render->add_option("--every", render_options.every, "keep every Nth cycle")->check(CLI::PositiveNumber);
    render->add_option("--out", render_dir, "output directory")->capture_default_str();
    render->add_flag("--k-circle", render_options.k_circle, "overlay the K circle");
    render->add_option("--format", render_format, "text or ppm")->check(CLI::IsMember({"text", "ppm"}));
    render->add_option("--scale", render_options.scale, "pixels per cell (ppm)")->check(CLI::PositiveNumber);

    // replay
    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "re-run a trace and check it reproduces exactly");
    replay->add_option("trace", replay_path, "trace file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            RunManifest m;
            seed_from_env(m);
            if (!run_settings.empty()) load_settings(m, run_settings);
            run_flags.apply(m);
            return cmd_run(m, run_out, out);
        }
        if (batch->parsed()) {
            RunManifest m;
            seed_from_env(m);
            if (!batch_settings.empty()) load_settings(m, batch_settings);
            batch_flags.apply(m);
            return cmd_batch(m, batch_out, threads, out);
        }
        if (render->parsed()) {
            render_options.format = render_format == "ppm" ? FrameFormat::Ppm : FrameFormat::Text;
            return cmd_render(render_trace_path, render_options, render_dir, out);
        }
        return cmd_replay(replay_path, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace chaincatch
