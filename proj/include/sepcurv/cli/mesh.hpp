#pragma once

#include "sepcurv/geometry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sepcurv::cli {

struct MeshVertex {
    Eigen::Vector3d position;
    double k_special = 0.0;
    double k_oracle = 0.0;
};

/// Triangle mesh over a lattice of the two tangent coordinates. Faces index `vertices` (0-based).
struct Mesh {
    std::vector<MeshVertex> vertices;
    std::vector<std::array<std::size_t, 3>> faces;
    std::size_t grid_points = 0;
    std::size_t omitted = 0;
};

/// Lattice of nu x nv nodes spanning the closed ranges of box.ranges[0] and box.ranges[1].
/// Nodes whose height solve fails are omitted; a cell with three surviving corners keeps one
/// triangle. Requires a 3-dimensional surface.
Mesh build_mesh(const SeparableSurface& s, const SamplingBox& box, std::size_t nu, std::size_t nv);

/// OBJ text: `v x y z` lines then `f a b c` lines with 1-based indices.
std::string write_obj(const Mesh& mesh);

/// `vertex,k_special,k_oracle` keyed by the 1-based OBJ vertex index.
std::string write_curvature_csv(const Mesh& mesh);

} // namespace sepcurv::cli
