#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "burstcoord/events.hpp"

namespace burstcoord {

// JSON lines: {"entity": "...", "domain": "...", "t": 1.5} per line. Blank
// lines are skipped. Errors name the 1-based line number.
std::vector<Event> parse_events_jsonl(std::string_view text);

// CSV with header `entity,domain,t`.
std::vector<Event> parse_events_csv(std::string_view text);

// Picks the format from the content: a first non-blank character of '{'
// means JSON lines, anything else CSV.
std::vector<Event> read_events(const std::filesystem::path& path);

std::string events_to_jsonl(const std::vector<Event>& events);
std::string events_to_csv(const std::vector<Event>& events);

}  // namespace burstcoord
