#pragma once

#include "csdf/core.hpp"
#include "csdf/field.hpp"
#include "csdf/rng.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace csdf {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<Vec3> normals;  // optional per-vertex

    bool empty() const { return triangles.empty(); }
    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }
};

// Iso-surface triangulation of field(z, .) on a (resolution+1)^3 lattice over
// bbox. Vertices lie on lattice edges by linear interpolation; coincident
// vertices are welded and collapsed triangles dropped, so closed surfaces
// strictly inside bbox come out watertight. No sign change yields an empty
// mesh.
TriangleMesh marching_cubes(const LatentField& field, const LatentVector& z,
                            const BoundingBox& bbox, int resolution, double iso = 0.0);

// Serial reference implementation; must produce an identical mesh.
TriangleMesh marching_cubes_serial(const LatentField& field, const LatentVector& z,
                                   const BoundingBox& bbox, int resolution,
                                   double iso = 0.0);

double surface_area(const TriangleMesh& mesh);

double triangle_area(const TriangleMesh& mesh, int t);
Vec3 triangle_normal(const TriangleMesh& mesh, int t);  // unit length

// One uniform-weight smoothing pass per iteration, factor 0.5.
TriangleMesh laplacian_smooth(const TriangleMesh& mesh, int passes = 1,
                              double factor = 0.5);

// Exact point-to-triangle distance queries accelerated by a uniform grid over
// the triangles; brute force below 10^4 triangles. Immutable after build.
class MeshDistanceIndex {
public:
    explicit MeshDistanceIndex(const TriangleMesh& mesh);

    struct Nearest {
        double distance = 0.0;
        int triangle = -1;
        Vec3 closest;
    };
    Nearest nearest(const Vec3& p) const;
    double distance(const Vec3& p) const { return nearest(p).distance; }

private:
    const TriangleMesh& mesh_;
    bool brute_ = true;
    BoundingBox grid_box_;
    int nx_ = 1, ny_ = 1, nz_ = 1;
    Vec3 cell_;
    std::vector<std::vector<std::int32_t>> cells_;
    std::size_t cell_index(int i, int j, int k) const {
        return std::size_t(k) * std::size_t(ny_) * std::size_t(nx_) +
               std::size_t(j) * std::size_t(nx_) + std::size_t(i);
    }
};

struct SurfaceSample {
    Vec3 point;
    int triangle = -1;
};

// Area-weighted random points on the mesh, one keyed stream per sample.
std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, std::size_t n,
                                          RngSeed seed);

// Share of surface in contact: Area(S_AB) / (Area(A) + Area(B)) where S_AB is
// the part of mesh_a within eps of mesh_b, estimated by area-weighted
// sampling. The symmetric variant averages both directions and is what the
// training-prior computation uses.
double mesh_contact_ratio(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b,
                          double eps, double samples_per_area, RngSeed seed,
                          bool symmetric = false);

// Symmetric mean absolute nearest-surface distance (squared variant optional).
double chamfer_distance(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b,
                        std::size_t n_points, RngSeed seed, bool squared = false);

// Mean |cos| between sample normals and the nearest triangle's normal on the
// other mesh, symmetrized. In [0, 1].
double normal_consistency(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b,
                          std::size_t n_points, RngSeed seed);

// |area(a) - area(b)| / area(b).
double area_difference(const TriangleMesh& mesh_a, const TriangleMesh& mesh_b);

// bbox volume times the fraction of uniform samples inside both fields.
double intersection_volume(const LatentField& field_a, const LatentVector& za,
                           const LatentField& field_b, const LatentVector& zb,
                           const BoundingBox& bbox, std::size_t n_points, RngSeed seed);

struct ContactVertexStats {
    std::size_t count = 0;
    double area = 0.0;
};
// Vertices of mesh_a within eps of mesh_b (strict), and the summed area of
// mesh_a triangles whose three vertices all qualify.
ContactVertexStats contact_vertex_stats(const TriangleMesh& mesh_a,
                                        const TriangleMesh& mesh_b, double eps);

// Minimum of f_A + f_B over a (resolution+1)^3 lattice on bbox. Doubling the
// resolution refines the lattice in place, so the result never increases.
double min_pair_gap(const LatentField& field_a, const LatentVector& za,
                    const LatentField& field_b, const LatentVector& zb,
                    const BoundingBox& bbox, int resolution);

} // namespace csdf
