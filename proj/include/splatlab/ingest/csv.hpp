#pragma once

#include <string>
#include <vector>

#include "splatlab/ingest/json.hpp"

namespace splatlab::ingest {

// RFC 4180 quoting: fields containing comma, quote, CR or LF are quoted and
// embedded quotes doubled.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ += ',';
            out_ += csv_field(fields[i]);
        }
        out_ += '\n';
    }
    const std::string& str() const { return out_; }

    static std::string num(double v) { return format_double(v); }
    static std::string num(std::int64_t v) { return std::to_string(v); }
    static std::string num(std::size_t v) { return std::to_string(v); }

private:
    std::string out_;
};

}  // namespace splatlab::ingest
