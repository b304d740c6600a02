#include "csdf/sampling.hpp"
#include "csdf/parallel.hpp"

#include <cmath>

namespace csdf {

std::vector<Vec3> uniform_points(const BoundingBox& bbox, std::size_t n, RngSeed seed) {
    if (!bbox.valid()) throw ConfigurationError("uniform_points: invalid bbox");
    std::vector<Vec3> pts(n);
    parallel_for(n, [&](std::size_t i) {
        StreamRng rng(seed, rng_tag::kUniformPoints, i);
        pts[i] = rng.next_in_box(bbox);
    });
    return pts;
}

namespace detail {

bool project_to_surface(const LatentField& field, const LatentVector& z, Vec3& x,
                        int max_steps, double tol) {
    for (int s = 0; s < max_steps; ++s) {
        const double f = field.eval(z, x);
        if (std::fabs(f) < tol) return true;
        const Vec3 g = field.grad_spatial(z, x);
        const double g2 = g.norm2();
        if (g2 < 1e-12) return false;
        x -= g * (f / g2);
    }
    return std::fabs(field.eval(z, x)) < tol;
}

// Coarse zero-crossing probe over a lattice; a reference with one sign
// everywhere cannot anchor near-surface sampling.
bool has_zero_crossing(const LatentField& field, const LatentVector& z,
                       const BoundingBox& bbox) {
    const int n = 12;
    bool seen_neg = false, seen_pos = false;
    const Vec3 e = bbox.extent();
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                Vec3 p{bbox.min.x + e.x * i / n, bbox.min.y + e.y * j / n,
                       bbox.min.z + e.z * k / n};
                const double f = field.eval(z, p);
                seen_neg |= f < 0;
                seen_pos |= f >= 0;
                if (seen_neg && seen_pos) return true;
            }
    return false;
}

} // namespace detail

std::vector<DataSample> near_surface_samples(const LatentField& reference,
                                             const LatentVector& z,
                                             const BoundingBox& bbox, std::size_t n,
                                             double near_fraction, double band_sigma,
                                             RngSeed seed) {
    if (near_fraction < 0 || near_fraction > 1)
        throw ConfigurationError("near_fraction must be in [0, 1]");
    if (band_sigma <= 0) throw ConfigurationError("band_sigma must be > 0");
    reference.check_latent(z);

    const std::size_t n_near = std::size_t(std::llround(near_fraction * double(n)));
    if (n_near > 0 && !detail::has_zero_crossing(reference, z, bbox))
        throw DegenerateInputError("reference field has no zero crossing in bbox");

    std::vector<DataSample> out(n);
    parallel_for(n, [&](std::size_t i) {
        StreamRng rng(seed, rng_tag::kNearSurface, i);
        DataSample s;
        if (i < n_near) {
            // Project a uniform candidate onto the surface; retry with fresh
            // candidates when Newton does not land within tolerance.
            Vec3 p;
            bool ok = false;
            for (int attempt = 0; attempt < 8 && !ok; ++attempt) {
                p = rng.next_in_box(bbox);
                ok = detail::project_to_surface(reference, z, p);
            }
            p.x += band_sigma * rng.next_gaussian();
            p.y += band_sigma * rng.next_gaussian();
            p.z += band_sigma * rng.next_gaussian();
            if (!bbox.contains(p)) {
                p = bbox.clamp(p);
                s.clamped = true;
            }
            s.point = p;
        } else {
            s.point = rng.next_in_box(bbox);
        }
        s.target_distance = reference.eval(z, s.point);
        out[i] = s;
    });
    return out;
}

} // namespace csdf
