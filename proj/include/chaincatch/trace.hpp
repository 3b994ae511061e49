#pragma once

#include <string>
#include <string_view>

#include "chaincatch/sim.hpp"

namespace chaincatch {

// Line-delimited trace text:
//   chaincatch-trace 1
//   config width=75 height=75 ... positions=random
//   manifest <key> = <value> (<source>)      zero or more
//   cycle <k> agents=<id:x:y,...> chain=<ids or -> events=<events or ->
//   outcome <complete|timeout> <cycles>
// Events: catch:C>E, rejected:C>E, broken:<links/ends>, over:<kind>, joined by ';'.

std::string serialize_config(const GameConfig& config);
// Parses the payload of a "config" line (without the keyword).
GameConfig parse_config(std::string_view payload, int line = 0);

std::string serialize_record(const CycleRecord& record);

// `manifest_block` is inserted verbatim after the config line; each of its lines
// must start with "manifest ".
std::string serialize_trace(const GameTrace& trace, std::string_view manifest_block = {});

struct ParsedTrace {
    GameTrace trace;
    std::string manifest_block;
};

// Throws ParseError naming the first line that does not fit the format or
// contradicts the records before it.
ParsedTrace parse_trace(std::string_view text);

} // namespace chaincatch
