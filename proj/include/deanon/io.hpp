#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace deanon::io {

/// Lines of a text file without their terminators (a trailing `\r` is
/// stripped too). A missing file raises MissingArtifactError.
std::vector<std::string> read_lines(std::filesystem::path const& path);

/// Writes text verbatim; throws Error when the file cannot be written.
void write_text(std::filesystem::path const& path, std::string_view text);

/// Strict parsers: the whole field must be consumed. Return false on failure.
bool parse_u64(std::string_view s, std::uint64_t& out);
bool parse_double(std::string_view s, double& out);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

}  // namespace deanon::io
