#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "plap/flux.hpp"
#include "plap/mesh.hpp"
#include "plap/sparse.hpp"

namespace plap {

class NoiseModel;

/// Edge-midpoint rule on a triangle: three points, weights |T|/3 each.
/// Exact for polynomials of total degree <= 2.
struct QuadratureRule {
    /// Barycentric coordinates of the three points.
    static constexpr std::array<std::array<double, 3>, 3> points{{
        {0.5, 0.5, 0.0},
        {0.0, 0.5, 0.5},
        {0.5, 0.0, 0.5},
    }};
    static constexpr double weight_fraction = 1.0 / 3.0;
};

SparseSpd assemble_mass(const TriMesh& mesh);
SparseSpd assemble_stiffness(const TriMesh& mesh);
/// Same matrices over every vertex (no boundary elimination).
SparseSpd assemble_mass_unrestricted(const TriMesh& mesh);
SparseSpd assemble_stiffness_unrestricted(const TriMesh& mesh);

/// Mesh plus the operators every time step reuses.
struct Discretization {
    MeshPtr mesh;
    std::shared_ptr<const SparsePattern> pattern;
    SparseSpd mass;
    SparseSpd stiffness;
};

Discretization make_discretization(MeshPtr mesh);

/// L2 projection onto the P1 space with zero trace; load integrals use the
/// edge-midpoint rule.
FeFunction l2_project(const MeshPtr& mesh, const std::function<double(Point2)>& f);
FeFunction l2_project(const Discretization& disc, const std::function<double(Point2)>& f);

/// Load vector b_i = int f xi_i by the edge-midpoint rule.
std::vector<double> load_vector(const TriMesh& mesh, const std::function<double(Point2)>& f);

/// Entry i: sum_T |T| S(grad v|_T) . grad xi_i|_T, over interior DOFs.
std::vector<double> p_laplace_residual(const FluxParams& params, const FeFunction& v);

/// Derivative of p_laplace_residual. Elements without interior vertices are
/// skipped; a flat element elsewhere forwards SingularPointError from eval_DS
/// when kappa = 0 and p < 2.
SparseSpd p_laplace_jacobian(const FluxParams& params, const FeFunction& v);
SparseSpd p_laplace_jacobian(const FluxParams& params, const FeFunction& v,
                             const std::shared_ptr<const SparsePattern>& pattern);

/// Entry i: sum_j weights[j] int g_j(x, v(x)) xi_i(x) dx by the edge-midpoint rule.
std::vector<double> noise_load_vector(const TriMesh& mesh, const NoiseModel& model, const FeFunction& v,
                                      std::span<const double> weights);

struct NormPair {
    double l2_dist_sq = 0.0;
    double h1_semi_dist_sq = 0.0;
};

/// Squared L2 and H1-seminorm distances; exact for P1.
NormPair norms(const FeFunction& a, const FeFunction& b);
double l2_norm_sq(const FeFunction& a);

/// sum_T |T| |V(grad a) - V(grad b)|^2.
double v_distance_sq(const FluxParams& params, const FeFunction& a, const FeFunction& b);

struct EigenPair {
    double mu_h = 0.0;
    FeFunction u_h;
    int iterations = 0;
};

/// Smallest eigenpair of S u = mu M u by inverse iteration, seeded with the
/// nodal interpolant of sin(pi x) sin(pi y). u is M-normalized and positive at
/// the vertex nearest to the centre.
EigenPair min_eigenpair(const SparseSpd& stiffness, const SparseSpd& mass, const MeshPtr& mesh);
EigenPair min_eigenpair(const Discretization& disc);

}  // namespace plap
