#pragma once

#include "csdf/core.hpp"
#include "csdf/field.hpp"
#include "csdf/sampling.hpp"
#include "csdf/scene.hpp"

#include <span>
#include <string>
#include <vector>

namespace csdf {

// A declared relation between two scene components: either a target share of
// contact surface (with the contact distance epsilon), or a minimum gap.
struct PairConstraint {
    enum class Kind { TargetContactRatio, MinGap };

    std::string component_a;
    std::string component_b;
    Kind kind = Kind::TargetContactRatio;
    double target_ratio = 0.0;  // p in (0, 0.5]
    double epsilon = 0.01;      // contact distance, scene units
    double min_gap = 0.0;       // d > 0, scene units

    void validate() const;
};

// The three topologically meaningful point sets for one pair.
struct MinedSets {
    std::vector<Vec3> contact;       // pulled toward f_A = -f_B
    std::vector<Vec3> ncontact;      // both-band points pushed apart
    std::vector<Vec3> intersecting;  // inside both objects
};

struct LossWeights {
    double intersecting = 1.0;  // lambda1; also weights the min-gap hinge
    double contact = 1.0;       // lambda2
    double ncontact = 0.25;     // lambda3
    double data = 1.0;          // lambda4
};

// Scalar loss over one pair plus gradients on both latents.
struct PairLossTerms {
    double value = 0.0;
    std::vector<double> grad_a;
    std::vector<double> grad_b;
};

struct ComponentLossTerms {
    double value = 0.0;
    std::vector<double> grad;
};

// Band-count estimator of the contact ratio:
//   sum 1(|a_i|<eps) 1(|b_i|<eps) / (sum 1(|a_i|<eps) + sum 1(|b_i|<eps)),
// 0 when the denominator vanishes. Always in [0, 0.5].
double estimate_contact_ratio(std::span<const double> values_a,
                              std::span<const double> values_b, double eps);

// Round-half-away-from-zero of p * (band count of A + band count of B).
std::size_t expected_contact_count(double p, std::span<const double> values_a,
                                   std::span<const double> values_b, double eps);

// contact = the n_contact points with smallest |a_i|+|b_i| over all samples
// (ties by ascending index); ncontact = both-band points not selected;
// intersecting = points inside both.
MinedSets mine_point_sets(std::span<const Vec3> points, std::span<const double> values_a,
                          std::span<const double> values_b, double eps,
                          std::size_t n_contact);

// sum |f_A + f_B| over the contact set; zero when the surfaces share a wall
// through every point (f_A = -f_B).
PairLossTerms contact_loss(const LatentField& field_a, const LatentVector& za,
                           const LatentField& field_b, const LatentVector& zb,
                           std::span<const Vec3> contact_set);

// sum -(f_A + f_B) over the ncontact set; decreasing it moves both surfaces
// away from the point.
PairLossTerms ncontact_loss(const LatentField& field_a, const LatentVector& za,
                            const LatentField& field_b, const LatentVector& zb,
                            std::span<const Vec3> ncontact_set);

// sum |f_A| + |f_B| over the intersecting set.
PairLossTerms intersection_loss(const LatentField& field_a, const LatentVector& za,
                                const LatentField& field_b, const LatentVector& zb,
                                std::span<const Vec3> intersecting_set);

// sum |f(z,x) - s_x| over the samples. Throws PreconditionError when empty.
ComponentLossTerms data_loss(const LatentField& field, const LatentVector& z,
                             std::span<const DataSample> samples);

// Points with f_A + f_B < d (strict).
std::vector<Vec3> min_distance_violations(std::span<const Vec3> points,
                                          std::span<const double> values_a,
                                          std::span<const double> values_b, double d);

// Hinge sum lambda1 * sum max(0, d - (f_A + f_B)) over the violation set plus
// lambda2 * (data_a + data_b). Gradients combine both parts.
struct MinDistanceLoss {
    double hinge = 0.0;  // unweighted hinge sum
    double value = 0.0;  // lambda1 * hinge + lambda2 * data
    std::vector<double> grad_a;
    std::vector<double> grad_b;
};
MinDistanceLoss min_distance_loss(const LatentField& field_a, const LatentVector& za,
                                  const LatentField& field_b, const LatentVector& zb,
                                  std::span<const Vec3> violation_set, double d,
                                  double lambda1, const ComponentLossTerms& data_a,
                                  const ComponentLossTerms& data_b, double lambda2);

// Per-pair state refreshed at each resample: mined sets for contact-ratio
// pairs, violation points for min-gap pairs, plus the estimator value at
// mining time.
struct PairState {
    MinedSets sets;
    std::vector<Vec3> violations;
    double mining_ratio = 0.0;
};

struct LossReport {
    double intersecting = 0.0;
    double contact = 0.0;
    double ncontact = 0.0;
    double data = 0.0;
    double min_distance = 0.0;  // hinge sum over min-gap pairs
    double total = 0.0;
    std::vector<std::vector<double>> component_grads;  // aligned with scene.components
    std::vector<double> pair_ratios;                   // aligned with constraints
    bool finite() const;
};

// Weighted sum over all constrained pairs plus the per-component data terms.
// Gradient on each component latent is the sum of every term touching it.
LossReport composite_loss(const Scene& scene, std::span<const PairConstraint> constraints,
                          std::span<const PairState> pair_states,
                          std::span<const std::vector<DataSample>> data_per_component,
                          const LossWeights& weights);

} // namespace csdf
