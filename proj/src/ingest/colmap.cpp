#include "splatlab/ingest/colmap.hpp"

#include <charconv>
#include <sstream>
#include <string>
#include <vector>

namespace splatlab::ingest {

namespace {

template <typename T>
T parse_number(const std::string& tok, std::size_t line_no, const char* what) {
    T val{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), val);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(ParseErrorKind::malformed,
                         "line " + std::to_string(line_no) + ": bad " + what +
                             " '" + tok + "'");
    return val;
}

}  // namespace

PointCloud parse_colmap_points(std::string_view text) {
    PointCloud cloud;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::istringstream is{std::string(line)};
        std::vector<std::string> tok;
        std::string t;
        while (is >> t) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;

        if (tok.size() < 8)
            throw ParseError(ParseErrorKind::malformed,
                             "line " + std::to_string(line_no) + ": expected " +
                                 "at least 8 fields, got " +
                                 std::to_string(tok.size()));

        const auto id = parse_number<std::uint64_t>(tok[0], line_no, "point id");
        Vec3 p{parse_number<double>(tok[1], line_no, "x"),
               parse_number<double>(tok[2], line_no, "y"),
               parse_number<double>(tok[3], line_no, "z")};
        Vec3 c;
        for (int i = 0; i < 3; ++i) {
            const int v = parse_number<int>(tok[4 + i], line_no, "color");
            if (v < 0 || v > 255)
                throw ParseError(ParseErrorKind::malformed,
                                 "line " + std::to_string(line_no) +
                                     ": color out of range '" + tok[4 + i] + "'");
            c[i] = v / 255.0;
        }
        parse_number<double>(tok[7], line_no, "error");  // validated, discarded

        cloud.positions.push_back(p);
        cloud.colors.push_back(c);
        cloud.ids.push_back(id);
    }
    return cloud;
}

}  // namespace splatlab::ingest
