#include "sepcurv/cli/mesh.hpp"

#include "sepcurv/curvature.hpp"
#include "sepcurv/error.hpp"

#include <sstream>
#include <stdexcept>

namespace sepcurv::cli {

namespace {

double lattice(const Interval& r, std::size_t k, std::size_t count)
{
    if (count == 1) {
        return 0.5 * (r.lo + r.hi);
    }
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    return k + 1 == count ? r.hi : r.lo + t * (r.hi - r.lo);
}

} // namespace

Mesh build_mesh(const SeparableSurface& s, const SamplingBox& box, std::size_t nu, std::size_t nv)
{
    if (s.dimension() != 3) {
        throw std::invalid_argument("mesh export needs n = 3");
    }
    if (box.ranges.size() != 2) {
        throw std::invalid_argument("mesh export needs two tangent ranges");
    }
    const auto& tangent = s.tangent_indices();
    const std::size_t i = tangent[0];
    const std::size_t j = tangent[1];

    Mesh mesh;
    mesh.grid_points = nu * nv;
    std::vector<std::optional<std::size_t>> node(nu * nv);
    for (std::size_t b = 0; b < nv; ++b) {
        for (std::size_t a = 0; a < nu; ++a) {
            Eigen::VectorXd partial(2);
            partial << lattice(box.ranges[0], a, nu), lattice(box.ranges[1], b, nv);
            try {
                const SurfacePoint p = solve_height(s, partial, box.bracket);
                const double ks = sectional_special(s, p, i, j);
                const double ko = sectional_oracle(s, p, coordinate_plane(s, p, i, j));
                node[b * nu + a] = mesh.vertices.size();
                mesh.vertices.push_back({p.coords.head<3>(), ks, ko});
            } catch (const Error&) {
                ++mesh.omitted;
            }
        }
    }

    for (std::size_t b = 0; b + 1 < nv; ++b) {
        for (std::size_t a = 0; a + 1 < nu; ++a) {
            // counter-clockwise in (u, v)
            const std::array<std::optional<std::size_t>, 4> c = {node[b * nu + a], node[b * nu + a + 1],
                                                                 node[(b + 1) * nu + a + 1], node[(b + 1) * nu + a]};
            std::vector<std::size_t> live;
            for (const auto& v : c) {
                if (v) {
                    live.push_back(*v);
                }
            }
            if (live.size() == 4) {
                mesh.faces.push_back({live[0], live[1], live[2]});
                mesh.faces.push_back({live[0], live[2], live[3]});
            } else if (live.size() == 3) {
                mesh.faces.push_back({live[0], live[1], live[2]});
            }
        }
    }
    return mesh;
}

std::string write_obj(const Mesh& mesh)
{
    std::ostringstream out;
    out << "# sepcurv mesh vertices=" << mesh.vertices.size() << " faces=" << mesh.faces.size() << "\n";
    for (const auto& v : mesh.vertices) {
        out << "v " << format_real(v.position.x()) << ' ' << format_real(v.position.y()) << ' '
            << format_real(v.position.z()) << "\n";
    }
    for (const auto& f : mesh.faces) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << "\n";
    }
    return out.str();
}

std::string write_curvature_csv(const Mesh& mesh)
{
    std::ostringstream out;
    out << "vertex,k_special,k_oracle\n";
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        out << k + 1 << ',' << format_real(mesh.vertices[k].k_special) << ','
            << format_real(mesh.vertices[k].k_oracle) << "\n";
    }
    return out.str();
}

} // namespace sepcurv::cli
