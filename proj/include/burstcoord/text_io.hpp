#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace burstcoord::text {

// Shortest representation that round-trips through strtod.
std::string format_double(double v);

// Strict decimal parse of the whole field; throws InputError on garbage.
double parse_double(std::string_view field, std::string_view what);
long long parse_int(std::string_view field, std::string_view what);

// RFC 4180-ish: fields containing a comma, quote or newline are quoted.
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split(std::string_view line);

std::string trim(std::string_view s);

std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace burstcoord::text
