#include "plap/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "plap/error.hpp"
#include "plap/noise.hpp"

namespace plap {

namespace {

enum class Operator { Mass, Stiffness };

SparseSpd assemble(const TriMesh& mesh, Operator op, std::shared_ptr<const SparsePattern> pattern) {
    SparseSpd a(std::move(pattern));
    auto& values = a.values();
    const auto& slots = a.pattern().slot;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const double area = mesh.area(t);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const int s = slots[t][i][j];
                if (s < 0) continue;
                if (op == Operator::Mass) {
                    values[s] += area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
                } else {
                    values[s] += area * dot(mesh.basis_gradient(t, i), mesh.basis_gradient(t, j));
                }
            }
        }
    }
    return a;
}

Point2 barycentric_point(const TriMesh& mesh, const Triangle& tri, const std::array<double, 3>& lambda) {
    Point2 x;
    for (int k = 0; k < 3; ++k) {
        x.x += lambda[k] * mesh.vertices()[tri[k]].x;
        x.y += lambda[k] * mesh.vertices()[tri[k]].y;
    }
    return x;
}

void check_same_mesh(const FeFunction& a, const FeFunction& b, const char* who) {
    if (a.mesh_ptr() != b.mesh_ptr()) {
        throw MeshMismatchError(std::string(who) + ": functions live on different meshes");
    }
}

}  // namespace

SparseSpd assemble_mass(const TriMesh& mesh) { return assemble(mesh, Operator::Mass, build_pattern(mesh, true)); }

SparseSpd assemble_stiffness(const TriMesh& mesh) {
    return assemble(mesh, Operator::Stiffness, build_pattern(mesh, true));
}

SparseSpd assemble_mass_unrestricted(const TriMesh& mesh) {
    return assemble(mesh, Operator::Mass, build_pattern(mesh, false));
}

SparseSpd assemble_stiffness_unrestricted(const TriMesh& mesh) {
    return assemble(mesh, Operator::Stiffness, build_pattern(mesh, false));
}

Discretization make_discretization(MeshPtr mesh) {
    Discretization d;
    d.pattern = build_pattern(*mesh, true);
    d.mass = assemble(*mesh, Operator::Mass, d.pattern);
    d.stiffness = assemble(*mesh, Operator::Stiffness, d.pattern);
    d.mesh = std::move(mesh);
    return d;
}

std::vector<double> load_vector(const TriMesh& mesh, const std::function<double(Point2)>& f) {
    std::vector<double> b(mesh.num_interior(), 0.0);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        const double w = QuadratureRule::weight_fraction * mesh.area(t);
        for (const auto& lambda : QuadratureRule::points) {
            const double fx = f(barycentric_point(mesh, tri, lambda));
            for (int k = 0; k < 3; ++k) {
                const int i = mesh.interior_index(tri[k]);
                if (i >= 0 && lambda[k] != 0.0) b[i] += w * fx * lambda[k];
            }
        }
    }
    return b;
}

FeFunction l2_project(const Discretization& disc, const std::function<double(Point2)>& f) {
    const std::vector<double> b = load_vector(*disc.mesh, f);
    return FeFunction::from_interior(disc.mesh, solve_spd(disc.mass, b));
}

FeFunction l2_project(const MeshPtr& mesh, const std::function<double(Point2)>& f) {
    const std::vector<double> b = load_vector(*mesh, f);
    return FeFunction::from_interior(mesh, solve_spd(assemble_mass(*mesh), b));
}

std::vector<double> p_laplace_residual(const FluxParams& params, const FeFunction& v) {
    const TriMesh& mesh = v.mesh();
    std::vector<double> r(mesh.num_interior(), 0.0);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        const Grad2 flux = eval_S(params, v.gradient(t));
        if (flux == Grad2{}) continue;
        for (int k = 0; k < 3; ++k) {
            const int i = mesh.interior_index(tri[k]);
            if (i >= 0) r[i] += mesh.area(t) * dot(flux, mesh.basis_gradient(t, k));
        }
    }
    return r;
}

SparseSpd p_laplace_jacobian(const FluxParams& params, const FeFunction& v,
                             const std::shared_ptr<const SparsePattern>& pattern) {
    const TriMesh& mesh = v.mesh();
    SparseSpd jac(pattern);
    auto& values = jac.values();
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto& slots = pattern->slot[t];
        if (slots[0][0] < 0 && slots[1][1] < 0 && slots[2][2] < 0) continue;
        const Mat2 ds = eval_DS(params, v.gradient(t));
        const double area = mesh.area(t);
        for (int a = 0; a < 3; ++a) {
            if (slots[a][a] < 0) continue;
            const Grad2 dsa = apply(ds, mesh.basis_gradient(t, a));
            for (int b = 0; b < 3; ++b) {
                const int s = slots[a][b];
                if (s >= 0) values[s] += area * dot(dsa, mesh.basis_gradient(t, b));
            }
        }
    }
    return jac;
}

SparseSpd p_laplace_jacobian(const FluxParams& params, const FeFunction& v) {
    return p_laplace_jacobian(params, v, build_pattern(v.mesh(), true));
}

std::vector<double> noise_load_vector(const TriMesh& mesh, const NoiseModel& model, const FeFunction& v,
                                      std::span<const double> weights) {
    if (weights.size() != static_cast<std::size_t>(model.modes())) {
        throw ShapeError("noise_load_vector: one weight per noise mode expected");
    }
    if (&v.mesh() != &mesh) throw MeshMismatchError("noise_load_vector: function lives on another mesh");
    std::vector<double> b(mesh.num_interior(), 0.0);
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) return b;

    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        const double w = QuadratureRule::weight_fraction * mesh.area(t);
        for (const auto& lambda : QuadratureRule::points) {
            const Point2 x = barycentric_point(mesh, tri, lambda);
            double u = 0.0;
            for (int k = 0; k < 3; ++k) u += lambda[k] * v[tri[k]];
            double g = 0.0;
            for (std::size_t j = 0; j < weights.size(); ++j) {
                if (weights[j] != 0.0) g += weights[j] * model.g(static_cast<int>(j), x, u);
            }
            for (int k = 0; k < 3; ++k) {
                const int i = mesh.interior_index(tri[k]);
                if (i >= 0 && lambda[k] != 0.0) b[i] += w * g * lambda[k];
            }
        }
    }
    return b;
}

NormPair norms(const FeFunction& a, const FeFunction& b) {
    check_same_mesh(a, b, "norms");
    const TriMesh& mesh = a.mesh();
    NormPair out;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double d = a[tri[k]] - b[tri[k]];
            sum += d;
            sum_sq += d * d;
        }
        out.l2_dist_sq += mesh.area(t) / 12.0 * (sum_sq + sum * sum);
        out.h1_semi_dist_sq += mesh.area(t) * norm_sq(a.gradient(t) - b.gradient(t));
    }
    return out;
}

double l2_norm_sq(const FeFunction& a) { return norms(a, FeFunction(a.mesh_ptr())).l2_dist_sq; }

double v_distance_sq(const FluxParams& params, const FeFunction& a, const FeFunction& b) {
    check_same_mesh(a, b, "v_distance_sq");
    const TriMesh& mesh = a.mesh();
    double total = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        total += mesh.area(t) * norm_sq(eval_V(params, a.gradient(t)) - eval_V(params, b.gradient(t)));
    }
    return total;
}

EigenPair min_eigenpair(const SparseSpd& stiffness, const SparseSpd& mass, const MeshPtr& mesh) {
    if (stiffness.dim() != mass.dim() || stiffness.dim() != mesh->num_interior()) {
        throw ShapeError("min_eigenpair: matrices do not match the mesh");
    }
    const double pi = std::numbers::pi;
    std::vector<double> x =
        FeFunction::interpolate(mesh, [pi](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); })
            .interior_values();

    auto m_normalize = [&](std::vector<double>& y) {
        const double s = std::sqrt(dot(y, mass * y));
        for (double& e : y) e /= s;
    };
    m_normalize(x);

    constexpr int max_iter = 500;
    double mu = dot(x, stiffness * x);
    for (int it = 1; it <= max_iter; ++it) {
        const std::vector<double> mx = mass * x;
        std::vector<double> y = solve_spd(stiffness, mx);
        m_normalize(y);
        x = std::move(y);
        const std::vector<double> sx = stiffness * x;
        const std::vector<double> mx_new = mass * x;
        const double mu_new = dot(x, sx);  // x is M-normalized
        std::vector<double> res(sx.size());
        for (std::size_t i = 0; i < res.size(); ++i) res[i] = sx[i] - mu_new * mx_new[i];
        const bool rq_converged = std::abs(mu_new - mu) <= 1e-10 * std::abs(mu_new);
        const bool residual_converged = norm2(res) <= 1e-10 * norm2(mx_new) * mu_new;
        mu = mu_new;
        if (rq_converged && residual_converged) {
            FeFunction u = FeFunction::from_interior(mesh, x);
            if (u[mesh->nearest_vertex({0.5, 0.5})] < 0.0) u *= -1.0;
            return {mu, std::move(u), it};
        }
    }
    throw ConvergenceError("min_eigenpair: inverse iteration did not converge");
}

EigenPair min_eigenpair(const Discretization& disc) { return min_eigenpair(disc.stiffness, disc.mass, disc.mesh); }

}  // namespace plap
