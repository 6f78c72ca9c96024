#include "deanon/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "deanon/error.hpp"

namespace deanon::io {

std::vector<std::string> read_lines(std::filesystem::path const& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifactError(path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

void write_text(std::filesystem::path const& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write failed: " + path.string());
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto const* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    auto const* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw Error("cannot format double");
    return std::string(buf, ptr);
}

}  // namespace deanon::io
