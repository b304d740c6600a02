#pragma once

#include "csdf/core.hpp"
#include "csdf/field.hpp"
#include "csdf/rng.hpp"

#include <vector>

namespace csdf {

// A spatial location paired with the reference distance the data loss anchors
// to. `clamped` marks near-surface samples that were pulled back into the box.
struct DataSample {
    Vec3 point;
    double target_distance = 0.0;
    bool clamped = false;
};

// n uniform points in bbox. Pure function of (bbox, n, seed): every point is
// drawn from its own keyed stream, so the result is bit-identical for any
// thread count.
std::vector<Vec3> uniform_points(const BoundingBox& bbox, std::size_t n, RngSeed seed);

// Near-surface-biased samples with target distances from the reference field.
// A near_fraction share starts from uniform candidates projected onto the
// zero set (Newton steps along the spatial gradient) and perturbed by
// isotropic Gaussian noise of stddev band_sigma; the remainder is uniform.
// Throws DegenerateInputError when the reference has no zero crossing in bbox.
std::vector<DataSample> near_surface_samples(const LatentField& reference,
                                             const LatentVector& z,
                                             const BoundingBox& bbox, std::size_t n,
                                             double near_fraction, double band_sigma,
                                             RngSeed seed);

namespace detail {
// Newton-style projection x <- x - f * grad / |grad|^2, up to max_steps,
// accepted when |f| < tol. Returns true on acceptance.
bool project_to_surface(const LatentField& field, const LatentVector& z, Vec3& x,
                        int max_steps = 10, double tol = 1e-4);
} // namespace detail

} // namespace csdf
