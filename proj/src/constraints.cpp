#include "csdf/constraints.hpp"
#include "csdf/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csdf {

void PairConstraint::validate() const {
    if (component_a == component_b)
        throw ConfigurationError("constraint must reference two distinct components");
    if (kind == Kind::TargetContactRatio) {
        if (!(target_ratio > 0.0 && target_ratio <= 0.5))
            throw ConfigurationError("target contact ratio must be in (0, 0.5]");
        if (!(epsilon > 0.0))
            throw ConfigurationError("contact distance epsilon must be > 0");
    } else {
        if (!(min_gap > 0.0)) throw ConfigurationError("min gap d must be > 0");
    }
}

namespace {

void require_aligned(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw DimensionError(std::string(what) + ": value lists have lengths " +
                             std::to_string(a) + " and " + std::to_string(b));
}

std::int64_t band_count(std::span<const double> v, double eps) {
    std::int64_t c = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : c)
#endif
    for (std::int64_t i = 0; i < std::int64_t(v.size()); ++i)
        if (std::fabs(v[std::size_t(i)]) < eps) ++c;
    return c;
}

// |u| with subgradient 0 at u = 0.
double abs_subgrad(double u) { return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0); }

// One fused pass over a point set: buf[0] accumulates the loss, buf[1..Ka]
// grad_a, buf[Ka+1..] grad_b. PointTerm maps (fa, fb) to (term value,
// d term/d fa, d term/d fb).
template <typename PointTerm>
PairLossTerms pair_loss(const LatentField& field_a, const LatentVector& za,
                        const LatentField& field_b, const LatentVector& zb,
                        std::span<const Vec3> pts, const PointTerm& term) {
    field_a.check_latent(za);
    field_b.check_latent(zb);
    const std::size_t ka = std::size_t(field_a.latent_dim());
    const std::size_t kb = std::size_t(field_b.latent_dim());
    std::vector<double> acc(1 + ka + kb, 0.0);
    chunked_accumulate(pts.size(), acc.size(), acc, [&](std::size_t i, std::vector<double>& buf) {
        const Vec3& x = pts[i];
        const double fa = field_a.eval(za, x);
        const double fb = field_b.eval(zb, x);
        auto [v, dfa, dfb] = term(fa, fb);
        buf[0] += v;
        if (dfa != 0.0)
            field_a.accumulate_latent_grad(za, x, dfa, std::span<double>(buf).subspan(1, ka));
        if (dfb != 0.0)
            field_b.accumulate_latent_grad(zb, x, dfb, std::span<double>(buf).subspan(1 + ka, kb));
    });
    PairLossTerms out;
    out.value = acc[0];
    out.grad_a.assign(acc.begin() + 1, acc.begin() + 1 + std::ptrdiff_t(ka));
    out.grad_b.assign(acc.begin() + 1 + std::ptrdiff_t(ka), acc.end());
    return out;
}

} // namespace

double estimate_contact_ratio(std::span<const double> values_a,
                              std::span<const double> values_b, double eps) {
    require_aligned(values_a.size(), values_b.size(), "estimate_contact_ratio");
    std::int64_t both = 0, na = 0, nb = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : both, na, nb)
#endif
    for (std::int64_t i = 0; i < std::int64_t(values_a.size()); ++i) {
        const bool in_a = std::fabs(values_a[std::size_t(i)]) < eps;
        const bool in_b = std::fabs(values_b[std::size_t(i)]) < eps;
        na += in_a;
        nb += in_b;
        both += in_a && in_b;
    }
    const std::int64_t denom = na + nb;
    return denom == 0 ? 0.0 : double(both) / double(denom);
}

std::size_t expected_contact_count(double p, std::span<const double> values_a,
                                   std::span<const double> values_b, double eps) {
    require_aligned(values_a.size(), values_b.size(), "expected_contact_count");
    const std::int64_t denom = band_count(values_a, eps) + band_count(values_b, eps);
    return std::size_t(std::llround(p * double(denom)));
}

MinedSets mine_point_sets(std::span<const Vec3> points, std::span<const double> values_a,
                          std::span<const double> values_b, double eps,
                          std::size_t n_contact) {
    require_aligned(values_a.size(), values_b.size(), "mine_point_sets");
    require_aligned(points.size(), values_a.size(), "mine_point_sets");
    const std::size_t n = points.size();

    MinedSets out;
    const std::size_t keep = std::min(n_contact, n);
    std::vector<std::uint8_t> in_contact(n, 0);
    if (keep > 0) {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        auto summed = [&](std::uint32_t i) {
            return std::fabs(values_a[i]) + std::fabs(values_b[i]);
        };
        auto closer = [&](std::uint32_t i, std::uint32_t j) {
            const double si = summed(i), sj = summed(j);
            return si < sj || (si == sj && i < j);  // ties by ascending index
        };
        if (keep < n)
            std::nth_element(order.begin(), order.begin() + std::ptrdiff_t(keep) - 1,
                             order.end(), closer);
        for (std::size_t r = 0; r < keep; ++r) in_contact[order[r]] = 1;
    }

    out.contact.reserve(keep);
    for (std::size_t i = 0; i < n; ++i) {
        const bool band = std::fabs(values_a[i]) < eps && std::fabs(values_b[i]) < eps;
        if (in_contact[i])
            out.contact.push_back(points[i]);
        else if (band)
            out.ncontact.push_back(points[i]);
        if (values_a[i] < 0 && values_b[i] < 0) out.intersecting.push_back(points[i]);
    }
    return out;
}

PairLossTerms contact_loss(const LatentField& field_a, const LatentVector& za,
                           const LatentField& field_b, const LatentVector& zb,
                           std::span<const Vec3> contact_set) {
    return pair_loss(field_a, za, field_b, zb, contact_set, [](double fa, double fb) {
        const double u = fa + fb;
        const double s = abs_subgrad(u);
        return std::array<double, 3>{std::fabs(u), s, s};
    });
}

PairLossTerms ncontact_loss(const LatentField& field_a, const LatentVector& za,
                            const LatentField& field_b, const LatentVector& zb,
                            std::span<const Vec3> ncontact_set) {
    return pair_loss(field_a, za, field_b, zb, ncontact_set, [](double fa, double fb) {
        return std::array<double, 3>{-(fa + fb), -1.0, -1.0};
    });
}

PairLossTerms intersection_loss(const LatentField& field_a, const LatentVector& za,
                                const LatentField& field_b, const LatentVector& zb,
                                std::span<const Vec3> intersecting_set) {
    return pair_loss(field_a, za, field_b, zb, intersecting_set, [](double fa, double fb) {
        return std::array<double, 3>{std::fabs(fa) + std::fabs(fb), abs_subgrad(fa),
                                     abs_subgrad(fb)};
    });
}

ComponentLossTerms data_loss(const LatentField& field, const LatentVector& z,
                             std::span<const DataSample> samples) {
    if (samples.empty()) throw PreconditionError("data_loss: samples must be nonempty");
    field.check_latent(z);
    const std::size_t k = std::size_t(field.latent_dim());
    std::vector<double> acc(1 + k, 0.0);
    chunked_accumulate(samples.size(), acc.size(), acc,
                       [&](std::size_t i, std::vector<double>& buf) {
                           const DataSample& s = samples[i];
                           const double r = field.eval(z, s.point) - s.target_distance;
                           buf[0] += std::fabs(r);
                           const double g = abs_subgrad(r);
                           if (g != 0.0)
                               field.accumulate_latent_grad(
                                   z, s.point, g, std::span<double>(buf).subspan(1, k));
                       });
    ComponentLossTerms out;
    out.value = acc[0];
    out.grad.assign(acc.begin() + 1, acc.end());
    return out;
}

std::vector<Vec3> min_distance_violations(std::span<const Vec3> points,
                                          std::span<const double> values_a,
                                          std::span<const double> values_b, double d) {
    require_aligned(values_a.size(), values_b.size(), "min_distance_violations");
    require_aligned(points.size(), values_a.size(), "min_distance_violations");
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (values_a[i] + values_b[i] < d) out.push_back(points[i]);
    return out;
}

MinDistanceLoss min_distance_loss(const LatentField& field_a, const LatentVector& za,
                                  const LatentField& field_b, const LatentVector& zb,
                                  std::span<const Vec3> violation_set, double d,
                                  double lambda1, const ComponentLossTerms& data_a,
                                  const ComponentLossTerms& data_b, double lambda2) {
    PairLossTerms hinge =
        pair_loss(field_a, za, field_b, zb, violation_set, [d](double fa, double fb) {
            const double gap = fa + fb;
            if (gap >= d) return std::array<double, 3>{0.0, 0.0, 0.0};
            return std::array<double, 3>{d - gap, -1.0, -1.0};
        });
    MinDistanceLoss out;
    out.hinge = hinge.value;
    out.value = lambda1 * hinge.value + lambda2 * (data_a.value + data_b.value);
    out.grad_a.assign(std::size_t(field_a.latent_dim()), 0.0);
    out.grad_b.assign(std::size_t(field_b.latent_dim()), 0.0);
    for (std::size_t k = 0; k < out.grad_a.size(); ++k) {
        out.grad_a[k] = lambda1 * hinge.grad_a[k];
        if (!data_a.grad.empty()) out.grad_a[k] += lambda2 * data_a.grad[k];
    }
    for (std::size_t k = 0; k < out.grad_b.size(); ++k) {
        out.grad_b[k] = lambda1 * hinge.grad_b[k];
        if (!data_b.grad.empty()) out.grad_b[k] += lambda2 * data_b.grad[k];
    }
    return out;
}

bool LossReport::finite() const {
    auto ok = [](double v) { return std::isfinite(v); };
    if (!(ok(intersecting) && ok(contact) && ok(ncontact) && ok(data) &&
          ok(min_distance) && ok(total)))
        return false;
    for (const auto& g : component_grads)
        for (double v : g)
            if (!std::isfinite(v)) return false;
    return true;
}

LossReport composite_loss(const Scene& scene, std::span<const PairConstraint> constraints,
                          std::span<const PairState> pair_states,
                          std::span<const std::vector<DataSample>> data_per_component,
                          const LossWeights& weights) {
    if (pair_states.size() != constraints.size())
        throw DimensionError("composite_loss: one PairState per constraint required");
    if (!data_per_component.empty() && data_per_component.size() != scene.components.size())
        throw DimensionError("composite_loss: one data sample list per component required");

    LossReport report;
    report.component_grads.resize(scene.components.size());
    for (std::size_t c = 0; c < scene.components.size(); ++c)
        report.component_grads[c].assign(
            std::size_t(scene.components[c].field->latent_dim()), 0.0);

    auto add_scaled = [](std::vector<double>& dst, const std::vector<double>& src, double s) {
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += s * src[k];
    };

    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
        const PairConstraint& pc = constraints[ci];
        const int ia = scene.index_of(pc.component_a);
        const int ib = scene.index_of(pc.component_b);
        if (ia < 0 || ib < 0)
            throw ConfigurationError("constraint references unknown component '" +
                                     (ia < 0 ? pc.component_a : pc.component_b) + "'");
        const SceneComponent& A = scene.components[std::size_t(ia)];
        const SceneComponent& B = scene.components[std::size_t(ib)];
        const PairState& st = pair_states[ci];
        report.pair_ratios.push_back(st.mining_ratio);

        if (pc.kind == PairConstraint::Kind::TargetContactRatio) {
            PairLossTerms li = intersection_loss(*A.field, A.latent, *B.field, B.latent,
                                                 st.sets.intersecting);
            PairLossTerms lc =
                contact_loss(*A.field, A.latent, *B.field, B.latent, st.sets.contact);
            PairLossTerms ln =
                ncontact_loss(*A.field, A.latent, *B.field, B.latent, st.sets.ncontact);
            report.intersecting += li.value;
            report.contact += lc.value;
            report.ncontact += ln.value;
            add_scaled(report.component_grads[std::size_t(ia)], li.grad_a, weights.intersecting);
            add_scaled(report.component_grads[std::size_t(ib)], li.grad_b, weights.intersecting);
            add_scaled(report.component_grads[std::size_t(ia)], lc.grad_a, weights.contact);
            add_scaled(report.component_grads[std::size_t(ib)], lc.grad_b, weights.contact);
            add_scaled(report.component_grads[std::size_t(ia)], ln.grad_a, weights.ncontact);
            add_scaled(report.component_grads[std::size_t(ib)], ln.grad_b, weights.ncontact);
        } else {
            // Hinge shares lambda1 with the intersection term; the data term
            // below plays the formula's lambda2 role.
            const double d = pc.min_gap;
            PairLossTerms hinge = pair_loss(*A.field, A.latent, *B.field, B.latent,
                                            st.violations, [d](double fa, double fb) {
                                                const double gap = fa + fb;
                                                if (gap >= d)
                                                    return std::array<double, 3>{0.0, 0.0, 0.0};
                                                return std::array<double, 3>{d - gap, -1.0, -1.0};
                                            });
            report.min_distance += hinge.value;
            add_scaled(report.component_grads[std::size_t(ia)], hinge.grad_a,
                       weights.intersecting);
            add_scaled(report.component_grads[std::size_t(ib)], hinge.grad_b,
                       weights.intersecting);
        }
    }

    if (!data_per_component.empty()) {
        for (std::size_t c = 0; c < scene.components.size(); ++c) {
            if (data_per_component[c].empty()) continue;
            ComponentLossTerms ld = data_loss(*scene.components[c].field,
                                              scene.components[c].latent,
                                              data_per_component[c]);
            report.data += ld.value;
            add_scaled(report.component_grads[c], ld.grad, weights.data);
        }
    }

    report.total = weights.intersecting * report.intersecting +
                   weights.contact * report.contact + weights.ncontact * report.ncontact +
                   weights.data * report.data + weights.intersecting * report.min_distance;
    return report;
}

} // namespace csdf
