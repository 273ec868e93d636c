#include "burstcoord/event_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "burstcoord/errors.hpp"
#include "burstcoord/text_io.hpp"

namespace burstcoord {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

std::string line_tag(std::size_t lineno) { return "line " + std::to_string(lineno); }

}  // namespace

std::vector<Event> parse_events_jsonl(std::string_view text) {
  std::vector<Event> events;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto tag = line_tag(i + 1);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::parse_error&) {
      throw InputError(tag + ": malformed JSON");
    }
    if (!obj.is_object()) throw InputError(tag + ": expected a JSON object");
    Event e;
    try {
      e.entity = obj.at("entity").get<std::string>();
      e.domain = obj.at("domain").get<std::string>();
      const auto& t = obj.at("t");
      if (!t.is_number()) throw InputError(tag + ": field 't' must be a number");
      e.t = t.get<double>();
    } catch (const nlohmann::json::exception& ex) {
      throw InputError(tag + ": " + ex.what());
    }
    try {
      validate_event(e, i + 1);
    } catch (const InputError& ex) {
      throw InputError(tag + ": " + ex.what());
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<Event> parse_events_csv(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && blank(lines[i])) ++i;
  if (i == lines.size()) return {};
  const auto header = text::csv_split(lines[i]);
  if (header.size() != 3 || text::trim(header[0]) != "entity" ||
      text::trim(header[1]) != "domain" || text::trim(header[2]) != "t") {
    throw InputError(line_tag(i + 1) + ": expected header 'entity,domain,t'");
  }
  std::vector<Event> events;
  for (++i; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const auto tag = line_tag(i + 1);
    std::vector<std::string> f;
    try {
      f = text::csv_split(lines[i]);
    } catch (const InputError& ex) {
      throw InputError(tag + ": " + ex.what());
    }
    if (f.size() != 3) throw InputError(tag + ": expected 3 fields");
    Event e{f[0], f[1], text::parse_double(f[2], tag)};
    try {
      validate_event(e, i + 1);
    } catch (const InputError& ex) {
      throw InputError(tag + ": " + ex.what());
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<Event> read_events(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_events_jsonl(text);
  return parse_events_csv(text);
}

std::string events_to_jsonl(const std::vector<Event>& events) {
  std::string out;
  for (const auto& e : events) {
    // Field order is fixed so output is byte-stable.
    nlohmann::ordered_json obj;
    obj["entity"] = e.entity;
    obj["domain"] = e.domain;
    obj["t"] = e.t;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::string events_to_csv(const std::vector<Event>& events) {
  std::string out = "entity,domain,t\n";
  for (const auto& e : events) {
    out += text::csv_escape(e.entity);
    out += ',';
    out += text::csv_escape(e.domain);
    out += ',';
    out += text::format_double(e.t);
    out += '\n';
  }
  return out;
}

}  // namespace burstcoord
