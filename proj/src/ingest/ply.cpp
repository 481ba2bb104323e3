#include "splatlab/ingest/ply.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <sstream>

namespace splatlab::ingest {

namespace {

float load_f32_le(const std::byte* p) {
    std::uint32_t u = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                      (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
    return std::bit_cast<float>(u);
}

double load_f64_le(const std::byte* p) {
    std::uint64_t u = 0;
    for (int i = 7; i >= 0; --i) u = (u << 8) | std::uint64_t(p[i]);
    return std::bit_cast<double>(u);
}

void store_f32_le(std::vector<std::byte>& out, float v) {
    const auto u = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i)
        out.push_back(std::byte((u >> (8 * i)) & 0xff));
}

double load_scalar(const std::byte* p, PlyScalar t) {
    switch (t) {
        case PlyScalar::f32: return load_f32_le(p);
        case PlyScalar::f64: return load_f64_le(p);
        case PlyScalar::u8: return double(std::to_integer<unsigned>(*p));
    }
    return 0.0;
}

// Splits the header region into lines; returns one-past-end_header offset.
std::vector<std::string> header_lines(std::span<const std::byte> bytes,
                                      std::size_t& payload_offset) {
    std::vector<std::string> lines;
    std::string cur;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const char c = char(bytes[i]);
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            if (lines.back() == "end_header") {
                payload_offset = i + 1;
                return lines;
            }
            cur.clear();
        } else {
            cur += c;
            if (cur.size() > 4096)
                throw ParseError(ParseErrorKind::malformed,
                                 "ply header line exceeds 4096 bytes", i);
        }
    }
    throw ParseError(ParseErrorKind::malformed, "ply header has no end_header",
                     bytes.size());
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

PlyScalar scalar_from_name(const std::string& t, const std::string& prop) {
    if (t == "float" || t == "float32") return PlyScalar::f32;
    if (t == "double" || t == "float64") return PlyScalar::f64;
    if (t == "uchar" || t == "uint8") return PlyScalar::u8;
    throw ParseError(ParseErrorKind::schema,
                     "unsupported property type '" + t + "' for '" + prop + "'");
}

const char* scalar_name(PlyScalar t) {
    switch (t) {
        case PlyScalar::f32: return "float";
        case PlyScalar::f64: return "double";
        case PlyScalar::u8: return "uchar";
    }
    return "float";
}

std::size_t element_stride(const PlyElement& e) {
    std::size_t s = 0;
    for (const auto& p : e.properties) s += scalar_size(p.type);
    return s;
}

int property_index(const PlyElement& e, const std::string& name) {
    for (std::size_t i = 0; i < e.properties.size(); ++i)
        if (e.properties[i].name == name) return int(i);
    return -1;
}

int require_f32(const PlyElement& e, const std::string& name) {
    const int idx = property_index(e, name);
    if (idx < 0)
        throw ParseError(ParseErrorKind::schema,
                         "missing required property '" + name + "'");
    if (e.properties[idx].type != PlyScalar::f32)
        throw ParseError(ParseErrorKind::schema,
                         "property '" + name + "' must be float32");
    return idx;
}

// Byte offset of property i within one vertex record.
std::size_t property_offset(const PlyElement& e, int idx) {
    std::size_t off = 0;
    for (int i = 0; i < idx; ++i) off += scalar_size(e.properties[i].type);
    return off;
}

const std::array<const char*, 14> kRequiredSplatProps = {
    "x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2", "opacity",
    "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"};

}  // namespace

PlyHeader parse_ply_header(std::span<const std::byte> bytes) {
    if (bytes.size() < 4 || char(bytes[0]) != 'p' || char(bytes[1]) != 'l' ||
        char(bytes[2]) != 'y' ||
        (char(bytes[3]) != '\n' && char(bytes[3]) != '\r'))
        throw ParseError(ParseErrorKind::bad_magic, "input is not a ply file");

    PlyHeader h;
    auto lines = header_lines(bytes, h.header_bytes);

    bool format_seen = false;
    for (std::size_t li = 1; li + 1 < lines.size(); ++li) {
        auto tok = split_ws(lines[li]);
        if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
        if (tok[0] == "format") {
            if (tok.size() < 2)
                throw ParseError(ParseErrorKind::malformed, "bad format line");
            if (tok[1] == "binary_little_endian")
                h.binary_little_endian = true;
            else if (tok[1] == "ascii")
                h.binary_little_endian = false;
            else
                throw ParseError(ParseErrorKind::unsupported_format,
                                 "unsupported ply format '" + tok[1] + "'");
            format_seen = true;
        } else if (tok[0] == "element") {
            if (tok.size() < 3)
                throw ParseError(ParseErrorKind::malformed, "bad element line");
            PlyElement e;
            e.name = tok[1];
            std::size_t count = 0;
            auto [p, ec] = std::from_chars(tok[2].data(),
                                           tok[2].data() + tok[2].size(), count);
            if (ec != std::errc() || p != tok[2].data() + tok[2].size())
                throw ParseError(ParseErrorKind::malformed,
                                 "bad element count '" + tok[2] + "'");
            e.count = count;
            h.elements.push_back(std::move(e));
        } else if (tok[0] == "property") {
            if (h.elements.empty())
                throw ParseError(ParseErrorKind::malformed,
                                 "property before any element");
            if (tok.size() >= 2 && tok[1] == "list")
                throw ParseError(ParseErrorKind::schema,
                                 "list properties are not supported");
            if (tok.size() < 3)
                throw ParseError(ParseErrorKind::malformed, "bad property line");
            h.elements.back().properties.push_back(
                {tok[2], scalar_from_name(tok[1], tok[2])});
        } else {
            throw ParseError(ParseErrorKind::malformed,
                             "unrecognized header line '" + lines[li] + "'");
        }
    }
    if (!format_seen)
        throw ParseError(ParseErrorKind::malformed, "ply header missing format");
    return h;
}

namespace {

// Locates the vertex element and the payload offset where it starts,
// skipping any fixed-stride elements declared before it.
std::pair<const PlyElement*, std::size_t> locate_vertex(
    const PlyHeader& h, std::span<const std::byte> bytes) {
    std::size_t offset = h.header_bytes;
    for (const auto& e : h.elements) {
        if (e.name == "vertex") return {&e, offset};
        offset += e.count * element_stride(e);
    }
    throw ParseError(ParseErrorKind::schema, "missing vertex element");
}

void check_payload(std::span<const std::byte> bytes, std::size_t begin,
                   std::size_t need) {
    if (begin > bytes.size() || bytes.size() - begin < need)
        throw ParseError(
            ParseErrorKind::truncated,
            "payload truncated: need " + std::to_string(begin + need) +
                " bytes, have " + std::to_string(bytes.size()),
            bytes.size());
}

}  // namespace

GaussianPlyFile parse_gaussian_ply(std::span<const std::byte> bytes) {
    GaussianPlyFile out;
    out.header = parse_ply_header(bytes);
    if (!out.header.binary_little_endian)
        throw ParseError(ParseErrorKind::unsupported_format,
                         "ascii splat files are not supported");

    auto [vertex, payload] = locate_vertex(out.header, bytes);
    const std::size_t stride = element_stride(*vertex);

    std::array<std::size_t, 14> req{};
    for (std::size_t i = 0; i < kRequiredSplatProps.size(); ++i)
        req[i] = property_offset(*vertex, require_f32(*vertex, kRequiredSplatProps[i]));

    // f_rest is all-or-nothing.
    int n_rest = 0;
    std::array<std::size_t, 45> rest_off{};
    for (int i = 0; i < 45; ++i) {
        const std::string name = "f_rest_" + std::to_string(i);
        const int idx = property_index(*vertex, name);
        if (idx < 0) break;
        if (vertex->properties[idx].type != PlyScalar::f32)
            throw ParseError(ParseErrorKind::schema,
                             "property '" + name + "' must be float32");
        rest_off[i] = property_offset(*vertex, idx);
        ++n_rest;
    }
    if (n_rest != 0 && n_rest != 45)
        throw ParseError(ParseErrorKind::schema,
                         "f_rest group incomplete: found " +
                             std::to_string(n_rest) + " of 45 coefficients");

    check_payload(bytes, payload, vertex->count * stride);

    out.primitives.reserve(vertex->count);
    for (std::size_t v = 0; v < vertex->count; ++v) {
        const std::byte* rec = bytes.data() + payload + v * stride;
        auto f = [&](int i) { return double(load_f32_le(rec + req[i])); };
        GaussianPrimitive p;
        p.position = {f(0), f(1), f(2)};
        p.sh_dc = {f(3), f(4), f(5)};
        p.opacity_logit = f(6);
        p.log_scales = {f(7), f(8), f(9)};
        Quat q{f(10), f(11), f(12), f(13)};
        const double n = q.norm();
        if (std::isfinite(n) && n > 0.0 && std::fabs(n - 1.0) > 1e-12) {
            q = q.normalized();
            out.any_rotation_normalized = true;
        }
        p.rotation = q;
        if (n_rest == 45) {
            p.sh_rest.resize(45);
            for (int i = 0; i < 45; ++i)
                p.sh_rest[i] = load_f32_le(rec + rest_off[i]);
        }
        out.primitives.push_back(std::move(p));
    }
    return out;
}

PlyHeader standard_splat_header(std::size_t vertex_count, bool with_normals,
                                bool with_sh_rest) {
    PlyElement vertex;
    vertex.name = "vertex";
    vertex.count = vertex_count;
    auto add = [&](const std::string& n) {
        vertex.properties.push_back({n, PlyScalar::f32});
    };
    add("x"); add("y"); add("z");
    if (with_normals) { add("nx"); add("ny"); add("nz"); }
    add("f_dc_0"); add("f_dc_1"); add("f_dc_2");
    if (with_sh_rest)
        for (int i = 0; i < 45; ++i) add("f_rest_" + std::to_string(i));
    add("opacity");
    add("scale_0"); add("scale_1"); add("scale_2");
    add("rot_0"); add("rot_1"); add("rot_2"); add("rot_3");
    PlyHeader h;
    h.binary_little_endian = true;
    h.elements.push_back(std::move(vertex));
    return h;
}

std::vector<std::byte> write_gaussian_ply(
    const std::vector<GaussianPrimitive>& primitives,
    const PlyHeader& header_template) {
    const PlyElement* vertex = header_template.find("vertex");
    if (!vertex)
        throw std::invalid_argument("write_gaussian_ply: template lacks vertex element");

    std::string header = "ply\nformat binary_little_endian 1.0\nelement vertex " +
                         std::to_string(primitives.size()) + "\n";
    for (const auto& prop : vertex->properties) {
        if (prop.type != PlyScalar::f32)
            throw std::invalid_argument(
                "write_gaussian_ply: non-float32 property '" + prop.name + "'");
        header += "property float " + prop.name + "\n";
    }
    header += "end_header\n";

    std::vector<std::byte> out;
    out.reserve(header.size() +
                primitives.size() * vertex->properties.size() * 4);
    for (char c : header) out.push_back(std::byte(c));

    for (const auto& p : primitives) {
        for (const auto& prop : vertex->properties) {
            const std::string& n = prop.name;
            double v = 0.0;
            if (n == "x") v = p.position.x;
            else if (n == "y") v = p.position.y;
            else if (n == "z") v = p.position.z;
            else if (n == "nx" || n == "ny" || n == "nz") v = 0.0;
            else if (n == "f_dc_0") v = p.sh_dc.x;
            else if (n == "f_dc_1") v = p.sh_dc.y;
            else if (n == "f_dc_2") v = p.sh_dc.z;
            else if (n == "opacity") v = p.opacity_logit;
            else if (n == "scale_0") v = p.log_scales.x;
            else if (n == "scale_1") v = p.log_scales.y;
            else if (n == "scale_2") v = p.log_scales.z;
            else if (n == "rot_0") v = p.rotation.w;
            else if (n == "rot_1") v = p.rotation.x;
            else if (n == "rot_2") v = p.rotation.y;
            else if (n == "rot_3") v = p.rotation.z;
            else if (n.rfind("f_rest_", 0) == 0) {
                const int i = std::stoi(n.substr(7));
                if (i < 0 || i >= 45)
                    throw std::invalid_argument(
                        "write_gaussian_ply: unknown property '" + n + "'");
                v = i < int(p.sh_rest.size()) ? p.sh_rest[i] : 0.0f;
            } else {
                throw std::invalid_argument(
                    "write_gaussian_ply: unknown property '" + n + "'");
            }
            store_f32_le(out, float(v));
        }
    }
    return out;
}

PointCloud parse_pointcloud_ply(std::span<const std::byte> bytes) {
    const PlyHeader h = parse_ply_header(bytes);
    auto [vertex, payload] = locate_vertex(h, bytes);

    const int ix = property_index(*vertex, "x");
    const int iy = property_index(*vertex, "y");
    const int iz = property_index(*vertex, "z");
    for (auto [idx, name] :
         {std::pair{ix, "x"}, std::pair{iy, "y"}, std::pair{iz, "z"}})
        if (idx < 0)
            throw ParseError(ParseErrorKind::schema,
                             std::string("missing required property '") + name + "'");

    // uint8 red/green/blue or float r/g/b
    int ir = property_index(*vertex, "red");
    int ig = property_index(*vertex, "green");
    int ib = property_index(*vertex, "blue");
    bool color_u8 = ir >= 0 && ig >= 0 && ib >= 0;
    if (!color_u8) {
        ir = property_index(*vertex, "r");
        ig = property_index(*vertex, "g");
        ib = property_index(*vertex, "b");
    }
    const bool has_color = ir >= 0 && ig >= 0 && ib >= 0;

    PointCloud cloud;
    cloud.positions.reserve(vertex->count);
    if (has_color) cloud.colors.reserve(vertex->count);

    if (h.binary_little_endian) {
        const std::size_t stride = element_stride(*vertex);
        check_payload(bytes, payload, vertex->count * stride);
        auto scalar_at = [&](const std::byte* rec, int idx) {
            return load_scalar(rec + property_offset(*vertex, idx),
                               vertex->properties[idx].type);
        };
        for (std::size_t v = 0; v < vertex->count; ++v) {
            const std::byte* rec = bytes.data() + payload + v * stride;
            cloud.positions.push_back(
                {scalar_at(rec, ix), scalar_at(rec, iy), scalar_at(rec, iz)});
            if (has_color) {
                Vec3 c{scalar_at(rec, ir), scalar_at(rec, ig), scalar_at(rec, ib)};
                if (color_u8) c = c / 255.0;
                cloud.colors.push_back(c);
            }
        }
    } else {
        // ascii payload: one whitespace-separated token per scalar.
        std::string text(reinterpret_cast<const char*>(bytes.data()) + payload,
                         bytes.size() - payload);
        std::istringstream is(text);
        const std::size_t per_vertex = vertex->properties.size();
        std::vector<double> rec(per_vertex);
        for (std::size_t v = 0; v < vertex->count; ++v) {
            for (std::size_t i = 0; i < per_vertex; ++i) {
                std::string tok;
                if (!(is >> tok))
                    throw ParseError(ParseErrorKind::truncated,
                                     "ascii payload ends at vertex " +
                                         std::to_string(v),
                                     bytes.size());
                double val = 0.0;
                auto [p, ec] =
                    std::from_chars(tok.data(), tok.data() + tok.size(), val);
                if (ec != std::errc() || p != tok.data() + tok.size())
                    throw ParseError(ParseErrorKind::malformed,
                                     "bad ascii scalar '" + tok + "' at vertex " +
                                         std::to_string(v));
                rec[i] = val;
            }
            cloud.positions.push_back({rec[ix], rec[iy], rec[iz]});
            if (has_color) {
                Vec3 c{rec[ir], rec[ig], rec[ib]};
                if (color_u8) c = c / 255.0;
                cloud.colors.push_back(c);
            }
        }
    }
    return cloud;
}

std::vector<std::byte> write_pointcloud_ply(const PointCloud& cloud) {
    std::string header = "ply\nformat binary_little_endian 1.0\nelement vertex " +
                         std::to_string(cloud.size()) + "\n";
    header += "property float x\nproperty float y\nproperty float z\n";
    if (cloud.has_colors())
        header += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    header += "end_header\n";

    std::vector<std::byte> out;
    for (char c : header) out.push_back(std::byte(c));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        store_f32_le(out, float(cloud.positions[i].x));
        store_f32_le(out, float(cloud.positions[i].y));
        store_f32_le(out, float(cloud.positions[i].z));
        if (cloud.has_colors()) {
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(cloud.colors[i][c], 0.0, 1.0);
                out.push_back(std::byte(int(std::lround(v * 255.0))));
            }
        }
    }
    return out;
}

}  // namespace splatlab::ingest
