#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wavegp/error.hpp"

namespace wavegp {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorKind::Io, "cannot parse number '" + std::string(s) + "'");
    return x;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error(ErrorKind::Io, path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, path.string() + ": cannot open for writing");
    out << content;
    if (!out) throw Error(ErrorKind::Io, path.string() + ": write failed");
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, path.string() + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Rows of a comma-separated file without its header line.
inline std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                          std::string_view expected_header) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != expected_header)
        throw Error(ErrorKind::Io, path.string() + ": expected header '" + std::string(expected_header) + "'");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace wavegp
