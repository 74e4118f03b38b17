#include "plap/flux.hpp"

#include <stdexcept>

#include "plap/error.hpp"
#include "plap/mesh.hpp"

namespace plap {

void FluxParams::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("flux exponent p must be > 1");
    }
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("flux shift kappa must be >= 0");
    }
}

Grad2 eval_S(const FluxParams& params, Grad2 xi) {
    const double r = norm(xi);
    if (r == 0.0) return {};
    return std::pow(params.kappa + r, params.p - 2.0) * xi;
}

Grad2 eval_V(const FluxParams& params, Grad2 xi) {
    const double r = norm(xi);
    if (r == 0.0) return {};
    return std::pow(params.kappa + r, 0.5 * (params.p - 2.0)) * xi;
}

double eval_phi(const FluxParams& params, double t) {
    const double p = params.p;
    const double k = params.kappa;
    if (t <= 0.0) return 0.0;
    if (k == 0.0) return std::pow(t, p) / p;
    const double value =
        (std::pow(k + t, p - 1.0) * ((p - 1.0) * t - k) + std::pow(k, p)) / (p * (p - 1.0));
    // cancellation for t << kappa can push the closed form a few ulps below zero
    return value > 0.0 ? value : 0.0;
}

Mat2 eval_DS(const FluxParams& params, Grad2 xi) {
    const double p = params.p;
    const double k = params.kappa;
    const double r = norm(xi);
    if (r == 0.0) {
        double diag = 0.0;
        if (k > 0.0) {
            diag = std::pow(k, p - 2.0);
        } else if (p == 2.0) {
            diag = 1.0;
        } else if (p < 2.0) {
            throw SingularPointError("DS is unbounded at xi = 0 for kappa = 0, p < 2");
        }
        return Mat2{{{diag, 0.0}, {0.0, diag}}};
    }
    const double a = std::pow(k + r, p - 2.0);
    const double b = (p - 2.0) * std::pow(k + r, p - 3.0) / r;
    return Mat2{{{a + b * xi.x * xi.x, b * xi.x * xi.y}, {b * xi.y * xi.x, a + b * xi.y * xi.y}}};
}

double energy(const FluxParams& params, const FeFunction& v) {
    const TriMesh& mesh = v.mesh();
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        total += mesh.area(t) * eval_phi(params, norm(v.gradient(t)));
    }
    return total;
}

}  // namespace plap
