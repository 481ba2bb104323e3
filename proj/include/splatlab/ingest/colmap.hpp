#pragma once

#include <string_view>

#include "splatlab/core/splat.hpp"
#include "splatlab/ingest/ply.hpp"

namespace splatlab::ingest {

// COLMAP points3D.txt: "POINT3D_ID X Y Z R G B ERROR TRACK[] ..." per line,
// '#' lines ignored. Colors are rescaled to [0,1]; reprojection error and
// track entries are discarded.
PointCloud parse_colmap_points(std::string_view text);

}  // namespace splatlab::ingest
