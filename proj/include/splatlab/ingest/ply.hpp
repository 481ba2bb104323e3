#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "splatlab/core/splat.hpp"

namespace splatlab::ingest {

enum class ParseErrorKind {
    bad_magic,
    unsupported_format,
    schema,      // required property missing or unusable type
    truncated,   // payload shorter than the header promises
    malformed,   // anything else structurally wrong
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::string detail,
               std::size_t byte_offset = 0)
        : std::runtime_error(detail),
          kind(kind),
          detail(std::move(detail)),
          byte_offset(byte_offset) {}

    ParseErrorKind kind;
    std::string detail;
    std::size_t byte_offset;  // meaningful for truncated payloads
};

enum class PlyScalar { f32, f64, u8 };

inline std::size_t scalar_size(PlyScalar t) {
    switch (t) {
        case PlyScalar::f32: return 4;
        case PlyScalar::f64: return 8;
        case PlyScalar::u8: return 1;
    }
    return 0;
}

struct PlyProperty {
    std::string name;
    PlyScalar type = PlyScalar::f32;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct PlyHeader {
    bool binary_little_endian = true;  // false => ascii
    std::vector<PlyElement> elements;
    std::size_t header_bytes = 0;  // offset of the first payload byte

    const PlyElement* find(const std::string& name) const {
        for (const auto& e : elements)
            if (e.name == name) return &e;
        return nullptr;
    }
};

struct GaussianPlyFile {
    std::vector<GaussianPrimitive> primitives;
    PlyHeader header;
    bool any_rotation_normalized = false;  // true when a quaternion needed fixing
};

// Header only; understands "format", "element", "property", "comment".
PlyHeader parse_ply_header(std::span<const std::byte> bytes);

// Splat files: binary little-endian, float32 properties
// x,y,z[,nx,ny,nz],f_dc_0..2[,f_rest_0..44],opacity,scale_0..2,rot_0..3.
// Unknown fixed-size vertex properties are skipped by stride.
GaussianPlyFile parse_gaussian_ply(std::span<const std::byte> bytes);

// Emits a binary little-endian splat PLY. The template header decides which
// optional property groups (normals, f_rest) appear; normals are written as
// zeros. Properties outside the known splat schema are rejected.
std::vector<std::byte> write_gaussian_ply(
    const std::vector<GaussianPrimitive>& primitives,
    const PlyHeader& header_template);

// Convenience template: x,y,z,nx,ny,nz,f_dc,f_rest?(45),opacity,scale,rot.
PlyHeader standard_splat_header(std::size_t vertex_count, bool with_normals,
                                bool with_sh_rest);

// Point clouds: x,y,z required, colors optional as uint8 red/green/blue or
// float r/g/b. Accepts ascii and binary little-endian.
PointCloud parse_pointcloud_ply(std::span<const std::byte> bytes);

std::vector<std::byte> write_pointcloud_ply(const PointCloud& cloud);

}  // namespace splatlab::ingest
