#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace splatlab::ingest {

// Report value tree with deterministic serialization: object keys emit in
// sorted order and doubles with 17 significant digits, so identical runs
// produce identical bytes.
class Json {
public:
    Json() : value_(nullptr) {}
    Json(std::nullptr_t) : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    Json(int v) : value_(std::int64_t(v)) {}
    Json(std::int64_t v) : value_(v) {}
    Json(std::uint64_t v) : value_(std::int64_t(v)) {}
    Json(std::size_t v) : value_(std::int64_t(v)) {}
    Json(double v) : value_(v) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}

    static Json object() {
        Json j;
        j.value_ = ObjectT{};
        return j;
    }
    static Json array() {
        Json j;
        j.value_ = ArrayT{};
        return j;
    }
    template <typename It>
    static Json array_of(It begin, It end) {
        Json j = array();
        for (auto it = begin; it != end; ++it) j.push_back(Json(*it));
        return j;
    }
    template <typename C>
    static Json array_of(const C& c) {
        return array_of(c.begin(), c.end());
    }

    Json& operator[](const std::string& key);
    void push_back(Json v);

    bool is_object() const { return std::holds_alternative<ObjectT>(value_); }
    bool is_array() const { return std::holds_alternative<ArrayT>(value_); }

    // Compact when indent < 0, otherwise pretty-printed with `indent` spaces.
    std::string dump(int indent = -1) const;

private:
    using ArrayT = std::vector<Json>;
    using ObjectT = std::map<std::string, Json>;
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string,
                 ArrayT, ObjectT>
        value_;

    void dump_to(std::string& out, int indent, int depth) const;
};

// 17-significant-digit float formatting shared by JSON and CSV emitters.
std::string format_double(double v);

}  // namespace splatlab::ingest
