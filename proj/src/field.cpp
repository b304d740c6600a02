#include "csdf/field.hpp"
#include "csdf/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace csdf {

void LatentField::check_latent(const LatentVector& z) const {
    if (int(z.size()) != latent_dim())
        throw DimensionError("latent dimension mismatch: field expects " +
                             std::to_string(latent_dim()) + ", got " +
                             std::to_string(z.size()));
}

void LatentField::accumulate_latent_grad(const LatentVector& z, const Vec3& x,
                                         double w, std::span<double> acc) const {
    const int k = latent_dim();
    std::vector<double> g(std::size_t(k));
    grad_latent(z, x, g);
    for (int i = 0; i < k; ++i) acc[std::size_t(i)] += w * g[std::size_t(i)];
}

std::vector<double> eval_batch(const LatentField& field, const LatentVector& z,
                               std::span<const Vec3> points) {
    field.check_latent(z);
    std::vector<double> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = field.eval(z, points[i]); });
    return out;
}

std::vector<double> eval_batch_serial(const LatentField& field, const LatentVector& z,
                                      std::span<const Vec3> points) {
    field.check_latent(z);
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = field.eval(z, points[i]);
    return out;
}

// ---------------------------------------------------------------------------
// AnalyticPrimitiveField

ShapeParam shape_param_from_string(const std::string& s) {
    if (s == "radius") return ShapeParam::Radius;
    if (s == "semi-x") return ShapeParam::SemiAxisX;
    if (s == "semi-y") return ShapeParam::SemiAxisY;
    if (s == "semi-z") return ShapeParam::SemiAxisZ;
    if (s == "half-length") return ShapeParam::HalfLength;
    if (s == "half-x") return ShapeParam::HalfExtentX;
    if (s == "half-y") return ShapeParam::HalfExtentY;
    if (s == "half-z") return ShapeParam::HalfExtentZ;
    if (s == "corner-radius") return ShapeParam::CornerRadius;
    throw ConfigurationError("unknown shape parameter '" + s + "'");
}

std::string to_string(ShapeParam p) {
    switch (p) {
        case ShapeParam::Radius: return "radius";
        case ShapeParam::SemiAxisX: return "semi-x";
        case ShapeParam::SemiAxisY: return "semi-y";
        case ShapeParam::SemiAxisZ: return "semi-z";
        case ShapeParam::HalfLength: return "half-length";
        case ShapeParam::HalfExtentX: return "half-x";
        case ShapeParam::HalfExtentY: return "half-y";
        case ShapeParam::HalfExtentZ: return "half-z";
        case ShapeParam::CornerRadius: return "corner-radius";
    }
    return "?";
}

AnalyticPrimitiveField::AnalyticPrimitiveField(PrimitiveKind kind, Vec3 center,
                                               Vec3 size_params, double aux_param,
                                               std::vector<ShapeParam> latent_map)
    : kind_(kind), center_(center), size_(size_params), aux_(aux_param),
      latent_map_(std::move(latent_map)) {
    if (size_.x <= 0 || ((kind == PrimitiveKind::Ellipsoid || kind == PrimitiveKind::RoundedBox) &&
                         (size_.y <= 0 || size_.z <= 0)))
        throw ConfigurationError("primitive size parameters must be positive");
}

Vec3 AnalyticPrimitiveField::to_local(const Vec3& x) const {
    Vec3 p = x - center_;
    if (!has_rot_) return p;
    // local = R^T p
    return {rot_[0] * p.x + rot_[3] * p.y + rot_[6] * p.z,
            rot_[1] * p.x + rot_[4] * p.y + rot_[7] * p.z,
            rot_[2] * p.x + rot_[5] * p.y + rot_[8] * p.z};
}

Vec3 AnalyticPrimitiveField::dir_to_world(const Vec3& g) const {
    if (!has_rot_) return g;
    return {rot_[0] * g.x + rot_[1] * g.y + rot_[2] * g.z,
            rot_[3] * g.x + rot_[4] * g.y + rot_[5] * g.z,
            rot_[6] * g.x + rot_[7] * g.y + rot_[8] * g.z};
}

AnalyticPrimitiveField::Params
AnalyticPrimitiveField::effective_params(const LatentVector& z) const {
    Params p{size_, aux_};
    for (std::size_t k = 0; k < latent_map_.size(); ++k) {
        const double dz = z[k];
        switch (latent_map_[k]) {
            case ShapeParam::Radius: p.size.x += dz; break;
            case ShapeParam::SemiAxisX: p.size.x += dz; break;
            case ShapeParam::SemiAxisY: p.size.y += dz; break;
            case ShapeParam::SemiAxisZ: p.size.z += dz; break;
            case ShapeParam::HalfLength: p.aux += dz; break;
            case ShapeParam::HalfExtentX: p.size.x += dz; break;
            case ShapeParam::HalfExtentY: p.size.y += dz; break;
            case ShapeParam::HalfExtentZ: p.size.z += dz; break;
            case ShapeParam::CornerRadius: p.aux += dz; break;
        }
    }
    return p;
}

double AnalyticPrimitiveField::eval_local(const Params& p, const Vec3& q) const {
    switch (kind_) {
        case PrimitiveKind::Sphere:
            return q.norm() - p.size.x;
        case PrimitiveKind::Ellipsoid: {
            // Sign-exact first-order estimate; exact on the surface.
            const Vec3 a = p.size;
            Vec3 u{q.x / a.x, q.y / a.y, q.z / a.z};
            Vec3 v{q.x / (a.x * a.x), q.y / (a.y * a.y), q.z / (a.z * a.z)};
            double k0 = u.norm();
            double k1 = v.norm();
            if (k1 == 0) return -std::min(a.x, std::min(a.y, a.z));  // center
            return k0 * (k0 - 1.0) / k1;
        }
        case PrimitiveKind::Capsule: {
            const double h = p.aux;
            const double cz = std::clamp(q.z, -h, h);
            Vec3 d{q.x, q.y, q.z - cz};
            return d.norm() - p.size.x;
        }
        case PrimitiveKind::RoundedBox: {
            const Vec3 b = p.size;
            const double r = p.aux;
            Vec3 d{std::fabs(q.x) - b.x, std::fabs(q.y) - b.y, std::fabs(q.z) - b.z};
            Vec3 dpos{std::max(d.x, 0.0), std::max(d.y, 0.0), std::max(d.z, 0.0)};
            double inside = std::min(std::max(d.x, std::max(d.y, d.z)), 0.0);
            return dpos.norm() + inside - r;
        }
    }
    return 0;
}

Vec3 AnalyticPrimitiveField::grad_local(const Params& p, const Vec3& q) const {
    switch (kind_) {
        case PrimitiveKind::Sphere: {
            double n = q.norm();
            return n > 0 ? q / n : Vec3{0, 0, 0};
        }
        case PrimitiveKind::Ellipsoid: {
            const Vec3 a = p.size;
            Vec3 u{q.x / a.x, q.y / a.y, q.z / a.z};
            Vec3 v{q.x / (a.x * a.x), q.y / (a.y * a.y), q.z / (a.z * a.z)};
            double k0 = u.norm();
            double k1 = v.norm();
            if (k0 == 0 || k1 == 0) return {0, 0, 0};
            // f = (k0^2 - k0)/k1
            Vec3 dk0{u.x / (a.x * k0), u.y / (a.y * k0), u.z / (a.z * k0)};
            Vec3 dk1{v.x / (a.x * a.x * k1), v.y / (a.y * a.y * k1), v.z / (a.z * a.z * k1)};
            double c0 = (2.0 * k0 - 1.0) / k1;
            double c1 = -(k0 * k0 - k0) / (k1 * k1);
            return dk0 * c0 + dk1 * c1;
        }
        case PrimitiveKind::Capsule: {
            const double h = p.aux;
            const double cz = std::clamp(q.z, -h, h);
            Vec3 d{q.x, q.y, q.z - cz};
            double n = d.norm();
            return n > 0 ? d / n : Vec3{0, 0, 0};
        }
        case PrimitiveKind::RoundedBox: {
            const Vec3 b = p.size;
            Vec3 d{std::fabs(q.x) - b.x, std::fabs(q.y) - b.y, std::fabs(q.z) - b.z};
            auto sgn = [](double v) { return v < 0 ? -1.0 : 1.0; };
            if (d.x > 0 || d.y > 0 || d.z > 0) {
                Vec3 dpos{std::max(d.x, 0.0), std::max(d.y, 0.0), std::max(d.z, 0.0)};
                double n = dpos.norm();
                if (n == 0) return {0, 0, 0};
                return {sgn(q.x) * dpos.x / n, sgn(q.y) * dpos.y / n, sgn(q.z) * dpos.z / n};
            }
            // Inside: gradient along the largest (least negative) face direction.
            if (d.x >= d.y && d.x >= d.z) return {sgn(q.x), 0, 0};
            if (d.y >= d.z) return {0, sgn(q.y), 0};
            return {0, 0, sgn(q.z)};
        }
    }
    return {0, 0, 0};
}

double AnalyticPrimitiveField::param_derivative(const Params& p, const Vec3& q,
                                                ShapeParam which) const {
    switch (kind_) {
        case PrimitiveKind::Sphere:
            return which == ShapeParam::Radius ? -1.0 : 0.0;
        case PrimitiveKind::Capsule: {
            if (which == ShapeParam::Radius) return -1.0;
            if (which == ShapeParam::HalfLength) {
                const double h = p.aux;
                if (std::fabs(q.z) <= h) return 0.0;
                const double cz = std::clamp(q.z, -h, h);
                Vec3 d{q.x, q.y, q.z - cz};
                double n = d.norm();
                if (n == 0) return 0.0;
                return d.z * (q.z > 0 ? -1.0 : 1.0) / n;
            }
            return 0.0;
        }
        case PrimitiveKind::Ellipsoid: {
            int axis;
            switch (which) {
                case ShapeParam::SemiAxisX: axis = 0; break;
                case ShapeParam::SemiAxisY: axis = 1; break;
                case ShapeParam::SemiAxisZ: axis = 2; break;
                default: return 0.0;
            }
            const Vec3 a = p.size;
            Vec3 u{q.x / a.x, q.y / a.y, q.z / a.z};
            Vec3 v{q.x / (a.x * a.x), q.y / (a.y * a.y), q.z / (a.z * a.z)};
            double k0 = u.norm();
            double k1 = v.norm();
            if (k0 == 0 || k1 == 0) return 0.0;
            double ai = a[axis], ui = u[axis], vi = v[axis];
            double dk0 = -ui * vi / k0;
            double dk1 = -2.0 * vi * vi / (ai * k1);
            return ((2.0 * k0 - 1.0) * dk0 * k1 - (k0 * k0 - k0) * dk1) / (k1 * k1);
        }
        case PrimitiveKind::RoundedBox: {
            if (which == ShapeParam::CornerRadius) return -1.0;
            int axis;
            switch (which) {
                case ShapeParam::HalfExtentX: axis = 0; break;
                case ShapeParam::HalfExtentY: axis = 1; break;
                case ShapeParam::HalfExtentZ: axis = 2; break;
                default: return 0.0;
            }
            const Vec3 b = p.size;
            Vec3 d{std::fabs(q.x) - b.x, std::fabs(q.y) - b.y, std::fabs(q.z) - b.z};
            if (d.x > 0 || d.y > 0 || d.z > 0) {
                Vec3 dpos{std::max(d.x, 0.0), std::max(d.y, 0.0), std::max(d.z, 0.0)};
                double n = dpos.norm();
                if (n == 0 || dpos[axis] == 0) return 0.0;
                return -dpos[axis] / n;
            }
            double m = std::max(d.x, std::max(d.y, d.z));
            return d[axis] == m ? -1.0 : 0.0;
        }
    }
    return 0.0;
}

double AnalyticPrimitiveField::eval(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    return eval_local(effective_params(z), to_local(x));
}

void AnalyticPrimitiveField::grad_latent(const LatentVector& z, const Vec3& x,
                                         std::span<double> out) const {
    check_latent(z);
    const Params p = effective_params(z);
    const Vec3 q = to_local(x);
    for (std::size_t k = 0; k < latent_map_.size(); ++k)
        out[k] = param_derivative(p, q, latent_map_[k]);
}

Vec3 AnalyticPrimitiveField::grad_spatial(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    return dir_to_world(grad_local(effective_params(z), to_local(x)));
}

// ---------------------------------------------------------------------------
// LatentGridField

LatentGridField::LatentGridField(int nx, int ny, int nz, BoundingBox bbox,
                                 std::vector<double> base_grid)
    : nx_(nx), ny_(ny), nz_(nz), bbox_(bbox), base_(std::move(base_grid)) {
    if (nx_ < 2 || ny_ < 2 || nz_ < 2)
        throw ConfigurationError("grid dimensions must be >= 2");
    if (!bbox_.valid()) throw ConfigurationError("grid bbox must satisfy min < max");
    if (base_.size() != std::size_t(nx_) * std::size_t(ny_) * std::size_t(nz_))
        throw DimensionError("grid payload size does not match dims");
}

LatentGridField LatentGridField::with_dense_basis(int nx, int ny, int nz, BoundingBox bbox,
                                                  std::vector<double> base_grid,
                                                  std::vector<std::vector<double>> basis) {
    LatentGridField f(nx, ny, nz, bbox, std::move(base_grid));
    for (const auto& b : basis)
        if (b.size() != f.base_.size())
            throw DimensionError("basis grid dims differ from base grid");
    f.dense_basis_ = std::move(basis);
    return f;
}

LatentGridField LatentGridField::with_node_band_basis(int nx, int ny, int nz,
                                                      BoundingBox bbox,
                                                      std::vector<double> base_grid,
                                                      double band_width) {
    LatentGridField f(nx, ny, nz, bbox, std::move(base_grid));
    f.node_to_latent_.assign(f.base_.size(), -1);
    for (std::size_t n = 0; n < f.base_.size(); ++n) {
        if (std::fabs(f.base_[n]) < band_width) {
            f.node_to_latent_[n] = int(f.basis_nodes_.size());
            f.basis_nodes_.push_back(int(n));
        }
    }
    return f;
}

Vec3 LatentGridField::spacing() const {
    Vec3 e = bbox_.extent();
    return {e.x / (nx_ - 1), e.y / (ny_ - 1), e.z / (nz_ - 1)};
}

LatentGridField::CellWeights LatentGridField::locate(const Vec3& x) const {
    CellWeights w;
    w.ramp = bbox_.distance(x);
    const Vec3 c = bbox_.clamp(x);
    const Vec3 e = bbox_.extent();
    double tx = (c.x - bbox_.min.x) / e.x * (nx_ - 1);
    double ty = (c.y - bbox_.min.y) / e.y * (ny_ - 1);
    double tz = (c.z - bbox_.min.z) / e.z * (nz_ - 1);
    w.i0 = std::min(int(tx), nx_ - 2);
    w.j0 = std::min(int(ty), ny_ - 2);
    w.k0 = std::min(int(tz), nz_ - 2);
    w.fx = tx - w.i0;
    w.fy = ty - w.j0;
    w.fz = tz - w.k0;
    return w;
}

double LatentGridField::corner_value(const LatentVector& z, int i, int j, int k) const {
    const std::size_t n = node_index(i, j, k);
    double v = base_[n];
    if (!dense_basis_.empty()) {
        for (std::size_t b = 0; b < dense_basis_.size(); ++b) v += z[b] * dense_basis_[b][n];
    } else if (!basis_nodes_.empty()) {
        const int l = node_to_latent_[n];
        if (l >= 0) v += z[std::size_t(l)];
    }
    return v;
}

double LatentGridField::eval(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    const CellWeights w = locate(x);
    auto cv = [&](int di, int dj, int dk) {
        return corner_value(z, w.i0 + di, w.j0 + dj, w.k0 + dk);
    };
    const double c00 = cv(0, 0, 0) * (1 - w.fx) + cv(1, 0, 0) * w.fx;
    const double c10 = cv(0, 1, 0) * (1 - w.fx) + cv(1, 1, 0) * w.fx;
    const double c01 = cv(0, 0, 1) * (1 - w.fx) + cv(1, 0, 1) * w.fx;
    const double c11 = cv(0, 1, 1) * (1 - w.fx) + cv(1, 1, 1) * w.fx;
    const double c0 = c00 * (1 - w.fy) + c10 * w.fy;
    const double c1 = c01 * (1 - w.fy) + c11 * w.fy;
    return c0 * (1 - w.fz) + c1 * w.fz + w.ramp;
}

void LatentGridField::grad_latent(const LatentVector& z, const Vec3& x,
                                  std::span<double> out) const {
    check_latent(z);
    std::fill(out.begin(), out.end(), 0.0);
    accumulate_latent_grad(z, x, 1.0, out);
}

void LatentGridField::accumulate_latent_grad(const LatentVector& z, const Vec3& x,
                                             double w, std::span<double> acc) const {
    const CellWeights cw = locate(x);
    const double wx[2] = {1 - cw.fx, cw.fx};
    const double wy[2] = {1 - cw.fy, cw.fy};
    const double wz[2] = {1 - cw.fz, cw.fz};
    if (!dense_basis_.empty()) {
        for (std::size_t b = 0; b < dense_basis_.size(); ++b) {
            const auto& grid = dense_basis_[b];
            double g = 0;
            for (int dk = 0; dk < 2; ++dk)
                for (int dj = 0; dj < 2; ++dj)
                    for (int di = 0; di < 2; ++di)
                        g += wx[di] * wy[dj] * wz[dk] *
                             grid[node_index(cw.i0 + di, cw.j0 + dj, cw.k0 + dk)];
            acc[b] += w * g;
        }
        return;
    }
    if (basis_nodes_.empty()) return;
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                const int l = node_to_latent_[node_index(cw.i0 + di, cw.j0 + dj, cw.k0 + dk)];
                if (l >= 0) acc[std::size_t(l)] += w * wx[di] * wy[dj] * wz[dk];
            }
    (void)z;
}

Vec3 LatentGridField::grad_spatial(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    // Central differences with half the grid spacing.
    const Vec3 h = spacing() * 0.5;
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        Vec3 xp = x, xm = x;
        xp[a] += h[a];
        xm[a] -= h[a];
        g[a] = (eval(z, xp) - eval(z, xm)) / (2.0 * h[a]);
    }
    return g;
}

std::vector<double> LatentGridField::resolved_grid(const LatentVector& z) const {
    check_latent(z);
    std::vector<double> g = base_;
    if (!dense_basis_.empty()) {
        for (std::size_t b = 0; b < dense_basis_.size(); ++b)
            for (std::size_t n = 0; n < g.size(); ++n) g[n] += z[b] * dense_basis_[b][n];
    } else {
        for (std::size_t k = 0; k < basis_nodes_.size(); ++k)
            g[std::size_t(basis_nodes_[k])] += z[k];
    }
    return g;
}

// ---------------------------------------------------------------------------
// MlpField

namespace {

double softplus(double t) {
    if (t > 30.0) return t;
    if (t < -30.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

double softplus_deriv(double t) {
    if (t > 30.0) return 1.0;
    if (t < -30.0) return std::exp(t);
    return 1.0 / (1.0 + std::exp(-t));
}

} // namespace

MlpField::MlpField(int latent_dim, std::vector<int> hidden_widths)
    : latent_dim_(latent_dim) {
    if (latent_dim_ < 0) throw ConfigurationError("latent dim must be >= 0");
    if (hidden_widths.empty()) throw ConfigurationError("mlp needs at least one hidden layer");
    widths_.push_back(3 + latent_dim_);
    for (int h : hidden_widths) {
        if (h < 1) throw ConfigurationError("hidden width must be >= 1");
        widths_.push_back(h);
    }
    widths_.push_back(1);
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
        weights_.emplace_back(std::size_t(widths_[l + 1]) * std::size_t(widths_[l]), 0.0);
        biases_.emplace_back(std::size_t(widths_[l + 1]), 0.0);
    }
}

MlpField MlpField::random_init(int latent_dim, std::vector<int> hidden_widths,
                               RngSeed seed, double weight_scale) {
    MlpField f(latent_dim, std::move(hidden_widths));
    for (std::size_t l = 0; l < f.weights_.size(); ++l) {
        const double s = weight_scale / std::sqrt(double(f.widths_[l]));
        StreamRng rng(seed, rng_tag::kMlpInit, l);
        for (auto& w : f.weights_[l]) w = rng.next_double(-s, s);
        for (auto& b : f.biases_[l]) b = rng.next_double(-s, s);
    }
    return f;
}

void MlpField::forward(const LatentVector& z, const Vec3& x,
                       std::vector<std::vector<double>>& pre,
                       std::vector<std::vector<double>>& act) const {
    const std::size_t L = weights_.size();
    pre.resize(L);
    act.resize(L + 1);
    act[0].resize(std::size_t(widths_[0]));
    for (int k = 0; k < latent_dim_; ++k) act[0][std::size_t(k)] = z[std::size_t(k)];
    act[0][std::size_t(latent_dim_)] = x.x;
    act[0][std::size_t(latent_dim_) + 1] = x.y;
    act[0][std::size_t(latent_dim_) + 2] = x.z;
    for (std::size_t l = 0; l < L; ++l) {
        const int nin = widths_[l], nout = widths_[l + 1];
        pre[l].assign(std::size_t(nout), 0.0);
        for (int o = 0; o < nout; ++o) {
            double s = biases_[l][std::size_t(o)];
            const double* wrow = &weights_[l][std::size_t(o) * std::size_t(nin)];
            for (int i = 0; i < nin; ++i) s += wrow[i] * act[l][std::size_t(i)];
            pre[l][std::size_t(o)] = s;
        }
        act[l + 1].resize(std::size_t(nout));
        const bool last = (l + 1 == L);
        for (int o = 0; o < nout; ++o)
            act[l + 1][std::size_t(o)] = last ? pre[l][std::size_t(o)] : softplus(pre[l][std::size_t(o)]);
    }
}

void MlpField::backward(const std::vector<std::vector<double>>& pre,
                        const std::vector<std::vector<double>>& act,
                        std::vector<double>& input_grad,
                        WeightGradients* wgrads) const {
    const std::size_t L = weights_.size();
    // d(output)/d(pre-activation of layer l), seeded with 1 at the scalar output.
    std::vector<double> delta{1.0};
    if (wgrads) {
        wgrads->weights.resize(L);
        wgrads->biases.resize(L);
    }
    for (std::size_t li = L; li-- > 0;) {
        const int nin = widths_[li], nout = widths_[li + 1];
        if (li + 1 != L) {
            for (int o = 0; o < nout; ++o) delta[std::size_t(o)] *= softplus_deriv(pre[li][std::size_t(o)]);
        }
        if (wgrads) {
            auto& gw = wgrads->weights[li];
            auto& gb = wgrads->biases[li];
            gw.assign(std::size_t(nout) * std::size_t(nin), 0.0);
            gb.assign(std::size_t(nout), 0.0);
            for (int o = 0; o < nout; ++o) {
                gb[std::size_t(o)] = delta[std::size_t(o)];
                for (int i = 0; i < nin; ++i)
                    gw[std::size_t(o) * std::size_t(nin) + std::size_t(i)] =
                        delta[std::size_t(o)] * act[li][std::size_t(i)];
            }
        }
        std::vector<double> prev(std::size_t(nin), 0.0);
        for (int o = 0; o < nout; ++o) {
            const double d = delta[std::size_t(o)];
            const double* wrow = &weights_[li][std::size_t(o) * std::size_t(nin)];
            for (int i = 0; i < nin; ++i) prev[std::size_t(i)] += d * wrow[i];
        }
        delta = std::move(prev);
    }
    input_grad = std::move(delta);
}

double MlpField::eval(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    std::vector<std::vector<double>> pre, act;
    forward(z, x, pre, act);
    return act.back()[0];
}

void MlpField::grad_latent_spatial(const LatentVector& z, const Vec3& x,
                                   std::span<double> dz, Vec3& dx) const {
    check_latent(z);
    std::vector<std::vector<double>> pre, act;
    forward(z, x, pre, act);
    std::vector<double> ig;
    backward(pre, act, ig, nullptr);
    for (int k = 0; k < latent_dim_; ++k) dz[std::size_t(k)] = ig[std::size_t(k)];
    dx = {ig[std::size_t(latent_dim_)], ig[std::size_t(latent_dim_) + 1],
          ig[std::size_t(latent_dim_) + 2]};
}

void MlpField::grad_latent(const LatentVector& z, const Vec3& x,
                           std::span<double> out) const {
    Vec3 dx;
    grad_latent_spatial(z, x, out, dx);
}

Vec3 MlpField::grad_spatial(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    std::vector<double> dz(std::size_t(latent_dim_));
    Vec3 dx;
    grad_latent_spatial(z, x, dz, dx);
    return dx;
}

MlpField::WeightGradients MlpField::grad_weights(const LatentVector& z, const Vec3& x) const {
    check_latent(z);
    std::vector<std::vector<double>> pre, act;
    forward(z, x, pre, act);
    WeightGradients wg;
    std::vector<double> ig;
    backward(pre, act, ig, &wg);
    return wg;
}

} // namespace csdf
