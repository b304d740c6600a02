#pragma once

#include "csdf/core.hpp"
#include "csdf/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace csdf {

using LatentVector = std::vector<double>;

// A parametric signed distance field f(z, x). Fields are immutable during
// evaluation; all const members are safe for concurrent use.
class LatentField {
public:
    virtual ~LatentField() = default;

    virtual int latent_dim() const = 0;

    // Signed distance: negative inside, positive outside, zero on the surface.
    virtual double eval(const LatentVector& z, const Vec3& x) const = 0;

    // out[k] = df/dz_k, analytic per family. out.size() == latent_dim().
    virtual void grad_latent(const LatentVector& z, const Vec3& x,
                             std::span<double> out) const = 0;

    // acc[k] += w * df/dz_k. Overridden where the latent gradient is sparse.
    virtual void accumulate_latent_grad(const LatentVector& z, const Vec3& x,
                                        double w, std::span<double> acc) const;

    virtual Vec3 grad_spatial(const LatentVector& z, const Vec3& x) const = 0;

    void check_latent(const LatentVector& z) const;

    LatentVector zero_latent() const { return LatentVector(latent_dim(), 0.0); }
};

std::vector<double> eval_batch(const LatentField& field, const LatentVector& z,
                               std::span<const Vec3> points);
// Serial reference: a plain loop of scalar eval. eval_batch must match it
// bitwise.
std::vector<double> eval_batch_serial(const LatentField& field, const LatentVector& z,
                                      std::span<const Vec3> points);

// --------------------------------------------------------------------------
// Analytic primitives: exact Euclidean SDFs for sphere and capsule,
// sign-exact approximations for ellipsoid; rounded-box is exact. A latent
// component adds an offset to one declared shape parameter.

enum class PrimitiveKind { Sphere, Ellipsoid, Capsule, RoundedBox };

// Shape parameter slots a latent component may bind to.
enum class ShapeParam {
    Radius,        // sphere, capsule
    SemiAxisX, SemiAxisY, SemiAxisZ,   // ellipsoid
    HalfLength,    // capsule (along local z)
    HalfExtentX, HalfExtentY, HalfExtentZ,  // rounded-box
    CornerRadius,  // rounded-box
};

ShapeParam shape_param_from_string(const std::string& s);
std::string to_string(ShapeParam p);

class AnalyticPrimitiveField final : public LatentField {
public:
    AnalyticPrimitiveField(PrimitiveKind kind, Vec3 center,
                           Vec3 size_params,      // radius in .x / semi-axes / half-extents
                           double aux_param,      // capsule half-length or corner radius
                           std::vector<ShapeParam> latent_map = {});

    // Optional rigid rotation, row-major 3x3 (world <- local).
    void set_rotation(const std::array<double, 9>& rot) { rot_ = rot; has_rot_ = true; }

    int latent_dim() const override { return int(latent_map_.size()); }
    double eval(const LatentVector& z, const Vec3& x) const override;
    void grad_latent(const LatentVector& z, const Vec3& x,
                     std::span<double> out) const override;
    Vec3 grad_spatial(const LatentVector& z, const Vec3& x) const override;

    PrimitiveKind kind() const { return kind_; }
    Vec3 center() const { return center_; }

private:
    struct Params {
        Vec3 size;
        double aux;
    };
    Params effective_params(const LatentVector& z) const;
    Vec3 to_local(const Vec3& x) const;
    Vec3 dir_to_world(const Vec3& g) const;

    double eval_local(const Params& p, const Vec3& q) const;
    Vec3 grad_local(const Params& p, const Vec3& q) const;
    double param_derivative(const Params& p, const Vec3& q, ShapeParam which) const;

    PrimitiveKind kind_;
    Vec3 center_;
    Vec3 size_;
    double aux_;
    std::vector<ShapeParam> latent_map_;
    std::array<double, 9> rot_{1, 0, 0, 0, 1, 0, 0, 0, 1};
    bool has_rot_ = false;
};

// --------------------------------------------------------------------------
// Latent-linear grid field: f(z,x) = trilerp(G0 + sum_k z_k B_k, x) on bbox.
// Outside the bbox the clamped boundary value plus the Euclidean distance to
// the bbox is returned, keeping the field a valid lower-bound distance.
//
// The basis is stored either densely (one grid per latent, e.g. a PCA shape
// space) or as a node basis where latent k offsets exactly one grid node
// (B_k = e_node). Both are latent-linear with exact gradients.

class LatentGridField final : public LatentField {
public:
    LatentGridField(int nx, int ny, int nz, BoundingBox bbox,
                    std::vector<double> base_grid);

    static LatentGridField with_dense_basis(int nx, int ny, int nz, BoundingBox bbox,
                                            std::vector<double> base_grid,
                                            std::vector<std::vector<double>> basis);
    // Node basis over every grid node i with |base[i]| < band_width.
    static LatentGridField with_node_band_basis(int nx, int ny, int nz, BoundingBox bbox,
                                                std::vector<double> base_grid,
                                                double band_width);

    int latent_dim() const override { return dense_basis_.empty() ? int(basis_nodes_.size()) : int(dense_basis_.size()); }
    double eval(const LatentVector& z, const Vec3& x) const override;
    void grad_latent(const LatentVector& z, const Vec3& x,
                     std::span<double> out) const override;
    void accumulate_latent_grad(const LatentVector& z, const Vec3& x, double w,
                                std::span<double> acc) const override;
    Vec3 grad_spatial(const LatentVector& z, const Vec3& x) const override;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    const BoundingBox& bbox() const { return bbox_; }
    const std::vector<double>& base_grid() const { return base_; }
    const std::vector<std::vector<double>>& dense_basis() const { return dense_basis_; }
    bool has_node_basis() const { return !basis_nodes_.empty(); }
    const std::vector<int>& basis_nodes() const { return basis_nodes_; }
    Vec3 spacing() const;

    std::size_t node_index(int i, int j, int k) const {
        return std::size_t(k) * std::size_t(ny_) * std::size_t(nx_) +
               std::size_t(j) * std::size_t(nx_) + std::size_t(i);
    }

    // Grid with latent folded in: G0 + sum z_k B_k. Used for meshing/export.
    std::vector<double> resolved_grid(const LatentVector& z) const;

private:
    struct CellWeights {
        int i0, j0, k0;
        double fx, fy, fz;
        double ramp;  // distance-to-bbox term added outside
    };
    CellWeights locate(const Vec3& x) const;
    double corner_value(const LatentVector& z, int i, int j, int k) const;

    int nx_, ny_, nz_;
    BoundingBox bbox_;
    std::vector<double> base_;
    std::vector<std::vector<double>> dense_basis_;
    std::vector<int> basis_nodes_;    // latent k -> node index
    std::vector<int> node_to_latent_; // node index -> latent k or -1
};

// --------------------------------------------------------------------------
// Small fully-connected field f(z,x) = net(concat(z,x)) with softplus hidden
// activations and a linear scalar output. Reverse-mode gradients with respect
// to latent, position, and weights are built in.

class MlpField final : public LatentField {
public:
    // widths: hidden layer widths; input is 3+K, output 1.
    MlpField(int latent_dim, std::vector<int> hidden_widths);

    static MlpField random_init(int latent_dim, std::vector<int> hidden_widths,
                                RngSeed seed, double weight_scale = 0.5);

    int latent_dim() const override { return latent_dim_; }
    double eval(const LatentVector& z, const Vec3& x) const override;
    void grad_latent(const LatentVector& z, const Vec3& x,
                     std::span<double> out) const override;
    Vec3 grad_spatial(const LatentVector& z, const Vec3& x) const override;

    // Single reverse pass producing both gradients.
    void grad_latent_spatial(const LatentVector& z, const Vec3& x,
                             std::span<double> dz, Vec3& dx) const;

    struct WeightGradients {
        std::vector<std::vector<double>> weights;  // same shapes as layers
        std::vector<std::vector<double>> biases;
    };
    WeightGradients grad_weights(const LatentVector& z, const Vec3& x) const;

    const std::vector<int>& layer_widths() const { return widths_; }
    std::vector<std::vector<double>>& weights() { return weights_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }

private:
    void forward(const LatentVector& z, const Vec3& x,
                 std::vector<std::vector<double>>& pre,
                 std::vector<std::vector<double>>& act) const;
    void backward(const std::vector<std::vector<double>>& pre,
                  const std::vector<std::vector<double>>& act,
                  std::vector<double>& input_grad,
                  WeightGradients* wgrads) const;

    int latent_dim_;
    std::vector<int> widths_;  // [3+K, h1, ..., hm, 1]
    std::vector<std::vector<double>> weights_;  // row-major (out x in) per layer
    std::vector<std::vector<double>> biases_;
};

} // namespace csdf
