#include "splatlab/ingest/json.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace splatlab::ingest {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json& Json::operator[](const std::string& key) {
    if (std::holds_alternative<std::nullptr_t>(value_)) value_ = ObjectT{};
    if (!is_object()) throw std::logic_error("Json: not an object");
    return std::get<ObjectT>(value_)[key];
}

void Json::push_back(Json v) {
    if (std::holds_alternative<std::nullptr_t>(value_)) value_ = ArrayT{};
    if (!is_array()) throw std::logic_error("Json: not an array");
    std::get<ArrayT>(value_).push_back(std::move(v));
}

namespace {

void escape_string(std::string& out, const std::string& s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += char(c);
                }
        }
    }
    out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(std::size_t(indent) * depth, ' ');
}

}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(value_)) {
        out += "null";
    } else if (auto* b = std::get_if<bool>(&value_)) {
        out += *b ? "true" : "false";
    } else if (auto* i = std::get_if<std::int64_t>(&value_)) {
        out += std::to_string(*i);
    } else if (auto* d = std::get_if<double>(&value_)) {
        out += format_double(*d);
    } else if (auto* s = std::get_if<std::string>(&value_)) {
        escape_string(out, *s);
    } else if (auto* a = std::get_if<ArrayT>(&value_)) {
        if (a->empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : *a) {
            if (!first) out += ',';
            first = false;
            newline_indent(out, indent, depth + 1);
            v.dump_to(out, indent, depth + 1);
        }
        newline_indent(out, indent, depth);
        out += ']';
    } else if (auto* o = std::get_if<ObjectT>(&value_)) {
        if (o->empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [k, v] : *o) {  // std::map iterates keys sorted
            if (!first) out += ',';
            first = false;
            newline_indent(out, indent, depth + 1);
            escape_string(out, k);
            out += indent < 0 ? ":" : ": ";
            v.dump_to(out, indent, depth + 1);
        }
        newline_indent(out, indent, depth);
        out += '}';
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    return out;
}

}  // namespace splatlab::ingest
