#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaincatch/sim.hpp"

namespace chaincatch {

// Where a resolved setting came from. Later sources override earlier ones.
enum class Source { Default, Env, File, Flag };

std::string_view to_string(Source s);

struct ManifestEntry {
    std::string key;
    std::string value;
    Source source = Source::Default;
};

// Every setting of a run, after merging defaults, config file and flags.
class RunManifest {
public:
    // Replaces an existing entry unless it came from a stronger source.
    void set(std::string_view key, std::string value, Source source);
    std::optional<std::string> get(std::string_view key) const;
    std::optional<Source> source_of(std::string_view key) const;

    const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }

    // One "<prefix>key = value (source)" line per entry, in insertion order.
    std::string render(std::string_view prefix) const;

private:
    std::vector<ManifestEntry> entries_;
};

// Shortest text that reads back to the same double.
std::string format_number(double v);

double parse_double(std::string_view text, std::string_view what, int line = 0);
long long parse_integer(std::string_view text, std::string_view what, int line = 0);
std::uint64_t parse_seed(std::string_view text, std::string_view what, int line = 0);

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

// "key = value" lines; '#' starts a comment, blank lines are skipped.
std::vector<KeyValue> parse_key_values(std::string_view text);

// Keys accepted in config files.
bool is_config_key(std::string_view key);

// Loads config text into the manifest as Source::File. Unknown keys throw ParseError.
void apply_config_text(RunManifest& manifest, std::string_view text);

// Builds an arena from the manifest; absent keys take their size-derived defaults.
Arena resolve_arena(RunManifest& manifest);

// Strategy parameters: arena-derived defaults overridden by k, k2, nsd, dtheta,
// max_constant, r_safe, r_touch and switch_margin.
StrategyParams resolve_params(RunManifest& manifest, const Arena& arena);

// Resolves a single-game config and records every default it used. A "positions"
// entry names a file of explicit start cells; "agents" then defaults to its count.
GameConfig resolve_game_config(RunManifest& manifest);

// Plain-text arena loader: width, height, agent_diameter, slope_length, max_steps.
Arena load_arena(std::string_view text);

// One "id x y" per line, ids 0..n-1 each exactly once. Returns cells indexed by id.
std::vector<Cell> parse_positions(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace chaincatch
