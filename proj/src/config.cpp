#include "chaincatch/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "chaincatch/error.hpp"

namespace chaincatch {

namespace {

constexpr std::array<std::string_view, 22> kConfigKeys{
    "width", "height", "agent_diameter", "slope_length", "max_steps",
    "agents", "seed", "catcher", "escapee_strategy", "chain_strategy",
    "k", "k2", "nsd", "dtheta", "max_constant", "r_safe", "r_touch", "switch_margin",
    "runs", "escapee_strategies", "chain_strategies", "positions"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Reads an integer setting, recording the default when absent.
long long int_setting(RunManifest& m, std::string_view key, long long fallback) {
    if (auto v = m.get(key)) return parse_integer(*v, key);
    m.set(key, std::to_string(fallback), Source::Default);
    return fallback;
}

double real_setting(RunManifest& m, std::string_view key, double fallback) {
    if (auto v = m.get(key)) return parse_double(*v, key);
    m.set(key, format_number(fallback), Source::Default);
    return fallback;
}

} // namespace

std::string_view to_string(Source s) {
    switch (s) {
    case Source::Default: return "default";
    case Source::Env: return "env";
    case Source::File: return "file";
    case Source::Flag: return "flag";
    }
    return "?";
}

void RunManifest::set(std::string_view key, std::string value, Source source) {
    for (auto& e : entries_) {
        if (e.key != key) continue;
        if (source >= e.source) {
            e.value = std::move(value);
            e.source = source;
        }
        return;
    }
    entries_.push_back({std::string(key), std::move(value), source});
}

std::optional<std::string> RunManifest::get(std::string_view key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e.value;
    return std::nullopt;
}

std::optional<Source> RunManifest::source_of(std::string_view key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e.source;
    return std::nullopt;
}

std::string RunManifest::render(std::string_view prefix) const {
    std::string out;
    for (const auto& e : entries_) {
        out += prefix;
        out += e.key + " = " + e.value + " (" + std::string(to_string(e.source)) + ")\n";
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what, int line) {
    const auto t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError(std::string(what) + ": expected a number, got '" + std::string(text) + "'", line);
    return v;
}

long long parse_integer(std::string_view text, std::string_view what, int line) {
    const auto t = trim(text);
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError(std::string(what) + ": expected an integer, got '" + std::string(text) + "'", line);
    return v;
}

std::uint64_t parse_seed(std::string_view text, std::string_view what, int line) {
    const auto t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ParseError(std::string(what) + ": expected an unsigned integer, got '" + std::string(text) + "'", line);
    return v;
}

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key before '='", line_no);
        out.push_back({std::string(key), std::string(value), line_no});
    }
    return out;
}

bool is_config_key(std::string_view key) {
    return std::find(kConfigKeys.begin(), kConfigKeys.end(), key) != kConfigKeys.end();
}

void apply_config_text(RunManifest& manifest, std::string_view text) {
    std::set<std::string> seen;
    for (const auto& kv : parse_key_values(text)) {
        if (!is_config_key(kv.key)) throw ParseError("unknown key '" + kv.key + "'", kv.line);
        if (!seen.insert(kv.key).second) throw ParseError("duplicate key '" + kv.key + "'", kv.line);
        if (kv.value.empty()) throw ParseError("empty value for '" + kv.key + "'", kv.line);
        manifest.set(kv.key, kv.value, Source::File);
    }
}

Arena resolve_arena(RunManifest& m) {
    const auto width = int_setting(m, "width", 75);
    const auto height = int_setting(m, "height", 75);
    const auto diameter = int_setting(m, "agent_diameter", 5);
    if (width < 1 || height < 1 || diameter < 1)
        throw InvariantError("width, height and agent_diameter must be >= 1");
    Arena arena = Arena::with_size(int(width), int(height), int(diameter));
    arena.slope_length = int(int_setting(m, "slope_length", arena.slope_length));
    arena.max_steps = int(int_setting(m, "max_steps", arena.max_steps));
    arena.validate();
    return arena;
}

GameConfig resolve_game_config(RunManifest& m) {
    GameConfig c;
    c.arena = resolve_arena(m);
    if (auto path = m.get("positions")) {
        c.initial_positions = parse_positions(read_file(*path));
        c.n_agents = int(int_setting(m, "agents", static_cast<long long>(c.initial_positions.size())));
    } else {
        c.n_agents = int(int_setting(m, "agents", 10));
    }
    if (auto v = m.get("seed")) {
        c.seed = parse_seed(*v, "seed");
    } else {
        m.set("seed", "1", Source::Default);
    }
    c.catcher_id = int(int_setting(m, "catcher", 0));

    const auto esc = m.get("escapee_strategy").value_or("kcircle");
    const auto chain = m.get("chain_strategy").value_or("tag1");
    const auto es = parse_escapee_strategy(esc);
    const auto cs = parse_chain_strategy(chain);
    if (!es) throw ParseError("escapee_strategy: unknown strategy '" + esc + "'", 0);
    if (!cs) throw ParseError("chain_strategy: unknown strategy '" + chain + "'", 0);
    c.escapee_strategy = *es;
    c.chain_strategy = *cs;
    m.set("escapee_strategy", esc, Source::Default);
    m.set("chain_strategy", chain, Source::Default);

    c.params = resolve_params(m, c.arena);
    return c;
}

StrategyParams resolve_params(RunManifest& m, const Arena& arena) {
    auto p = StrategyParams::defaults_for(arena);
    p.k = real_setting(m, "k", p.k);
    p.k2 = real_setting(m, "k2", p.k2);
    p.nsd = real_setting(m, "nsd", p.nsd);
    p.d_theta = real_setting(m, "dtheta", p.d_theta);
    p.max_constant = real_setting(m, "max_constant", p.max_constant);
    p.r_safe = real_setting(m, "r_safe", p.r_safe);
    p.r_touch = real_setting(m, "r_touch", p.r_touch);
    p.switch_margin = real_setting(m, "switch_margin", p.switch_margin);
    return p;
}

Arena load_arena(std::string_view text) {
    RunManifest m;
    for (const auto& kv : parse_key_values(text)) {
        static constexpr std::array<std::string_view, 5> arena_keys{"width", "height", "agent_diameter",
                                                                    "slope_length", "max_steps"};
        if (std::find(arena_keys.begin(), arena_keys.end(), kv.key) == arena_keys.end())
            throw ParseError("unknown arena key '" + kv.key + "'", kv.line);
        parse_integer(kv.value, kv.key, kv.line);
        m.set(kv.key, kv.value, Source::File);
    }
    return resolve_arena(m);
}

std::vector<Cell> parse_positions(std::string_view text) {
    std::vector<std::optional<Cell>> by_id;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string a, b, c, extra;
        if (!(fields >> a)) continue;
        if (!(fields >> b >> c) || (fields >> extra)) throw ParseError("expected 'id x y'", line_no);
        const auto id = parse_integer(a, "id", line_no);
        const int x = int(parse_integer(b, "x", line_no));
        const int y = int(parse_integer(c, "y", line_no));
        if (id < 0 || id > 100000) throw ParseError("agent id out of range", line_no);
        if (by_id.size() <= std::size_t(id)) by_id.resize(id + 1);
        if (by_id[id]) throw ParseError("agent " + std::to_string(id) + " listed twice", line_no);
        by_id[id] = Cell{x, y};
    }
    std::vector<Cell> out;
    for (std::size_t i = 0; i < by_id.size(); ++i) {
        if (!by_id[i]) throw ParseError("agent " + std::to_string(i) + " has no position", 0);
        out.push_back(*by_id[i]);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace chaincatch
