#include "chaincatch/trace.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "chaincatch/config.hpp"
#include "chaincatch/error.hpp"

namespace chaincatch {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) break;
        start = at + 1;
    }
    return out;
}

int to_int(std::string_view s, int line) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("expected an integer, got '" + std::string(s) + "'", line);
    return v;
}

std::string join_ints(const std::vector<int>& v, char sep) {
    if (v.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view s, char sep, int line) {
    std::vector<int> out;
    if (s == "-") return out;
    for (auto part : split(s, sep)) out.push_back(to_int(part, line));
    return out;
}

std::string_view outcome_name(OutcomeKind k) { return k == OutcomeKind::Complete ? "complete" : "timeout"; }

OutcomeKind parse_outcome_kind(std::string_view s, int line) {
    if (s == "complete") return OutcomeKind::Complete;
    if (s == "timeout") return OutcomeKind::Timeout;
    throw ParseError("unknown outcome '" + std::string(s) + "'", line);
}

std::string serialize_event(const Event& e) {
    if (const auto* c = std::get_if<CatchEvent>(&e))
        return "catch:" + std::to_string(c->catcher) + ">" + std::to_string(c->caught);
    if (const auto* r = std::get_if<CatchRejectedEvent>(&e))
        return "rejected:" + std::to_string(r->catcher) + ">" + std::to_string(r->caught);
    if (const auto* b = std::get_if<ChainBrokenEvent>(&e)) {
        std::string out = "broken:";
        for (std::size_t i = 0; i < b->links.size(); ++i) {
            if (i) out += '/';
            out += std::to_string(b->links[i]);
        }
        if (b->ends_meet) out += b->links.empty() ? "ends" : "/ends";
        return out;
    }
    return "over:" + std::string(outcome_name(std::get<GameOverEvent>(e).kind));
}

Event parse_event(std::string_view s, int line) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) throw ParseError("malformed event '" + std::string(s) + "'", line);
    const auto kind = s.substr(0, colon);
    const auto body = s.substr(colon + 1);
    if (kind == "catch" || kind == "rejected") {
        const auto gt = body.find('>');
        if (gt == std::string_view::npos) throw ParseError("malformed event '" + std::string(s) + "'", line);
        const int a = to_int(body.substr(0, gt), line);
        const int b = to_int(body.substr(gt + 1), line);
        if (kind == "catch") return CatchEvent{a, b};
        return CatchRejectedEvent{a, b};
    }
    if (kind == "broken") {
        ChainBrokenEvent ev;
        for (auto part : split(body, '/')) {
            if (part == "ends") ev.ends_meet = true;
            else ev.links.push_back(to_int(part, line));
        }
        return ev;
    }
    if (kind == "over") return GameOverEvent{parse_outcome_kind(body, line)};
    throw ParseError("unknown event kind '" + std::string(kind) + "'", line);
}

} // namespace

std::string serialize_config(const GameConfig& c) {
    const auto& a = c.arena;
    const auto& p = c.params;
    std::string out;
    auto put = [&](std::string_view key, const std::string& value) {
        if (!out.empty()) out += ' ';
        out += key;
        out += '=';
        out += value;
    };
    put("width", std::to_string(a.width));
    put("height", std::to_string(a.height));
    put("agent_diameter", std::to_string(a.agent_diameter));
    put("slope_length", std::to_string(a.slope_length));
    put("max_steps", std::to_string(a.max_steps));
    put("agents", std::to_string(c.n_agents));
    put("catcher", std::to_string(c.catcher_id));
    put("escapee_strategy", std::string(to_string(c.escapee_strategy)));
    put("chain_strategy", std::string(to_string(c.chain_strategy)));
    put("seed", std::to_string(c.seed));
    put("k", format_number(p.k));
    put("k2", format_number(p.k2));
    put("nsd", format_number(p.nsd));
    put("dtheta", format_number(p.d_theta));
    put("max_constant", format_number(p.max_constant));
    put("r_safe", format_number(p.r_safe));
    put("r_touch", format_number(p.r_touch));
    put("switch_margin", format_number(p.switch_margin));
    put("frozen", join_ints(c.frozen_ids, ','));
    if (c.initial_positions.empty()) {
        put("positions", "random");
    } else {
        std::string cells;
        for (std::size_t i = 0; i < c.initial_positions.size(); ++i) {
            if (i) cells += ',';
            cells += std::to_string(c.initial_positions[i].x) + ":" + std::to_string(c.initial_positions[i].y);
        }
        put("positions", cells);
    }
    return out;
}

GameConfig parse_config(std::string_view payload, int line) {
    static constexpr std::string_view keys[] = {
        "width", "height", "agent_diameter", "slope_length", "max_steps", "agents", "catcher",
        "escapee_strategy", "chain_strategy", "seed", "k", "k2", "nsd", "dtheta", "max_constant",
        "r_safe", "r_touch", "switch_margin", "frozen", "positions"};
    std::vector<std::pair<std::string_view, std::string_view>> fields;
    for (auto tok : split(payload, ' ')) {
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) throw ParseError("config field without '=': " + std::string(tok), line);
        fields.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
    auto value = [&](std::string_view key) -> std::string_view {
        for (const auto& [k, v] : fields)
            if (k == key) return v;
        throw ParseError("config is missing '" + std::string(key) + "'", line);
    };
    for (const auto& [k, v] : fields)
        if (std::find(std::begin(keys), std::end(keys), k) == std::end(keys))
            throw ParseError("unknown config field '" + std::string(k) + "'", line);

    GameConfig c;
    c.arena = Arena::with_size(to_int(value("width"), line), to_int(value("height"), line),
                               to_int(value("agent_diameter"), line));
    c.arena.slope_length = to_int(value("slope_length"), line);
    c.arena.max_steps = to_int(value("max_steps"), line);
    c.n_agents = to_int(value("agents"), line);
    c.catcher_id = to_int(value("catcher"), line);
    const auto es = parse_escapee_strategy(value("escapee_strategy"));
    const auto cs = parse_chain_strategy(value("chain_strategy"));
    if (!es || !cs) throw ParseError("unknown strategy name in config", line);
    c.escapee_strategy = *es;
    c.chain_strategy = *cs;
    const auto seed_text = value("seed");
    const auto res = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), c.seed);
    if (res.ec != std::errc() || res.ptr != seed_text.data() + seed_text.size())
        throw ParseError("bad seed '" + std::string(seed_text) + "'", line);
    c.params = StrategyParams::defaults_for(c.arena);
    c.params.k = parse_double(value("k"), "k", line);
    c.params.k2 = parse_double(value("k2"), "k2", line);
    c.params.nsd = parse_double(value("nsd"), "nsd", line);
    c.params.d_theta = parse_double(value("dtheta"), "dtheta", line);
    c.params.max_constant = parse_double(value("max_constant"), "max_constant", line);
    c.params.r_safe = parse_double(value("r_safe"), "r_safe", line);
    c.params.r_touch = parse_double(value("r_touch"), "r_touch", line);
    c.params.switch_margin = parse_double(value("switch_margin"), "switch_margin", line);
    c.frozen_ids = parse_int_list(value("frozen"), ',', line);
    const auto positions = value("positions");
    if (positions != "random") {
        for (auto cell : split(positions, ',')) {
            const auto colon = cell.find(':');
            if (colon == std::string_view::npos) throw ParseError("bad position '" + std::string(cell) + "'", line);
            c.initial_positions.push_back({to_int(cell.substr(0, colon), line), to_int(cell.substr(colon + 1), line)});
        }
    }
    try {
        c.validate();
    } catch (const InvariantError& e) {
        throw ParseError(std::string("invalid config: ") + e.what(), line);
    }
    return c;
}

std::string serialize_record(const CycleRecord& r) {
    std::string out = "cycle " + std::to_string(r.cycle) + " agents=";
    for (std::size_t i = 0; i < r.positions.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(i) + ":" + std::to_string(r.positions[i].x) + ":" + std::to_string(r.positions[i].y);
    }
    out += " chain=" + join_ints(r.chain, ',');
    out += " events=";
    if (r.events.empty()) out += '-';
    for (std::size_t i = 0; i < r.events.size(); ++i) {
        if (i) out += ';';
        out += serialize_event(r.events[i]);
    }
    return out;
}

std::string serialize_trace(const GameTrace& trace, std::string_view manifest_block) {
    std::string out = "chaincatch-trace 1\n";
    out += "config " + serialize_config(trace.config) + "\n";
    out += manifest_block;
    if (!manifest_block.empty() && manifest_block.back() != '\n') out += '\n';
    for (const auto& r : trace.records) out += serialize_record(r) + "\n";
    out += "outcome " + std::string(outcome_name(trace.outcome.kind)) + " " + std::to_string(trace.outcome.cycles) + "\n";
    return out;
}

ParsedTrace parse_trace(std::string_view text) {
    ParsedTrace parsed;
    auto& trace = parsed.trace;
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    int ln = 0;
    auto next = [&]() -> std::string_view {
        if (ln >= static_cast<int>(lines.size())) throw ParseError("unexpected end of trace", ln + 1);
        return lines[ln++];
    };

    if (next() != "chaincatch-trace 1") throw ParseError("missing 'chaincatch-trace 1' header", 1);
    const auto config_line = next();
    if (!config_line.starts_with("config ")) throw ParseError("expected config line", ln);
    trace.config = parse_config(config_line.substr(7), ln);
    const int n = trace.config.n_agents;
    const Arena& arena = trace.config.arena;

    while (ln < static_cast<int>(lines.size()) && lines[ln].starts_with("manifest ")) {
        parsed.manifest_block += std::string(lines[ln]) + "\n";
        ++ln;
    }

    bool have_outcome = false;
    while (ln < static_cast<int>(lines.size())) {
        const auto line = next();
        const int here = ln;
        if (line.starts_with("outcome ")) {
            const auto parts = split(line.substr(8), ' ');
            if (parts.size() != 2) throw ParseError("expected 'outcome <kind> <cycles>'", here);
            trace.outcome = Outcome{parse_outcome_kind(parts[0], here), to_int(parts[1], here)};
            have_outcome = true;
            if (ln != static_cast<int>(lines.size())) throw ParseError("content after outcome line", ln + 1);
            break;
        }
        const auto parts = split(line, ' ');
        if (parts.size() != 5 || parts[0] != "cycle" || !parts[2].starts_with("agents=") ||
            !parts[3].starts_with("chain=") || !parts[4].starts_with("events="))
            throw ParseError("expected 'cycle <k> agents=... chain=... events=...'", here);
        CycleRecord r;
        r.cycle = to_int(parts[1], here);
        if (r.cycle != static_cast<int>(trace.records.size()))
            throw ParseError("cycle " + std::to_string(r.cycle) + " out of sequence", here);
        const auto agents = split(parts[2].substr(7), ',');
        if (static_cast<int>(agents.size()) != n)
            throw ParseError("expected " + std::to_string(n) + " agents", here);
        std::set<Cell> cells;
        for (int i = 0; i < n; ++i) {
            const auto f = split(agents[i], ':');
            if (f.size() != 3 || to_int(f[0], here) != i) throw ParseError("bad agent entry '" + std::string(agents[i]) + "'", here);
            const Cell c{to_int(f[1], here), to_int(f[2], here)};
            if (!arena.in_bounds(c)) throw ParseError("agent " + std::to_string(i) + " out of bounds", here);
            if (!cells.insert(c).second) throw ParseError("two agents share a cell", here);
            r.positions.push_back(c);
        }
        r.chain = parse_int_list(parts[3].substr(6), ',', here);
        for (int id : r.chain)
            if (id < 0 || id >= n) throw ParseError("chain member " + std::to_string(id) + " out of range", here);
        const auto events = parts[4].substr(7);
        if (events != "-")
            for (auto e : split(events, ';')) r.events.push_back(parse_event(e, here));
        trace.records.push_back(std::move(r));
    }
    if (!have_outcome) throw ParseError("missing outcome line", ln + 1);
    if (trace.records.empty()) throw ParseError("trace has no cycle records", ln);
    const bool full = static_cast<int>(trace.records.back().chain.size()) == n;
    if ((trace.outcome.kind == OutcomeKind::Complete) != full)
        throw ParseError("outcome contradicts the final chain", ln);
    return parsed;
}

} // namespace chaincatch
