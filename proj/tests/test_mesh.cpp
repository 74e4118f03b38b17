#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plap/error.hpp"
#include "plap/fem.hpp"
#include "plap/mesh.hpp"

using namespace plap;

namespace {

double total_area(const TriMesh& m) {
    double a = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) a += m.area(t);
    return a;
}

}  // namespace

TEST(UnitSquareMesh, Counts) {
    const MeshPtr m1 = unit_square_mesh(1);
    EXPECT_EQ(m1->num_vertices(), 4u);
    EXPECT_EQ(m1->num_triangles(), 2u);
    EXPECT_DOUBLE_EQ(m1->h_max(), std::sqrt(2.0));

    const MeshPtr m2 = unit_square_mesh(2);
    EXPECT_EQ(m2->num_vertices(), 9u);
    EXPECT_EQ(m2->num_triangles(), 8u);
    EXPECT_NEAR(total_area(*m2), 1.0, 1e-15);

    const MeshPtr m10 = unit_square_mesh(10);
    EXPECT_EQ(m10->num_vertices(), 121u);
    EXPECT_NEAR(m10->h_max(), 0.1414, 1e-4);
}

TEST(UnitSquareMesh, LexicographicOrderAndDiagonal) {
    const MeshPtr m = unit_square_mesh(3);
    for (std::size_t v = 1; v < m->num_vertices(); ++v) {
        const Point2 a = m->vertices()[v - 1];
        const Point2 b = m->vertices()[v];
        EXPECT_TRUE(a.y < b.y || (a.y == b.y && a.x < b.x));
    }
    // every cell edge of length sqrt(2)/n runs from lower left to upper right
    for (const Triangle& t : m->triangles()) {
        for (int k = 0; k < 3; ++k) {
            const Point2 a = m->vertices()[t[k]];
            const Point2 b = m->vertices()[t[(k + 1) % 3]];
            if (a.x != b.x && a.y != b.y) EXPECT_GT((b.x - a.x) * (b.y - a.y), 0.0);
        }
    }
}

TEST(UnitSquareMesh, BoundaryMask) {
    const MeshPtr m = unit_square_mesh(5);
    for (std::size_t v = 0; v < m->num_vertices(); ++v) {
        const Point2 p = m->vertices()[v];
        const bool on = p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
        EXPECT_EQ(m->is_boundary(v), on);
        EXPECT_EQ(m->interior_index(v) < 0, on);
    }
    EXPECT_EQ(m->num_interior(), 16u);
}

TEST(RefineUniform, ThreeLevelsAboveTenByTen) {
    const auto levels = mesh_hierarchy(10, 3);
    EXPECT_EQ(levels[3]->num_vertices(), 6561u);
    EXPECT_EQ(levels[0]->num_triangles(), 200u);
    EXPECT_EQ(levels[1]->num_triangles(), 800u);
    for (std::size_t l = 1; l < levels.size(); ++l) {
        EXPECT_NEAR(levels[l]->h_max(), 0.5 * levels[l - 1]->h_max(), 1e-15);
        EXPECT_NEAR(total_area(*levels[l]), 1.0, 1e-12);
        EXPECT_EQ(levels[l]->level(), static_cast<int>(l));
    }
    EXPECT_NEAR(levels[3]->h_max(), 1.7e-2, 1e-3);
}

TEST(RefineUniform, KeepsParentVerticesAndShape) {
    const auto levels = mesh_hierarchy(4, 2);
    for (std::size_t l = 1; l < levels.size(); ++l) {
        const TriMesh& c = *levels[l - 1];
        const TriMesh& f = *levels[l];
        for (std::size_t v = 0; v < c.num_vertices(); ++v) {
            EXPECT_EQ(c.vertices()[v].x, f.vertices()[v].x);
            EXPECT_EQ(c.vertices()[v].y, f.vertices()[v].y);
        }
        double ratio_c = 0.0, ratio_f = 0.0;
        for (std::size_t t = 0; t < c.num_triangles(); ++t) ratio_c = std::max(ratio_c, c.shape_ratio(t));
        for (std::size_t t = 0; t < f.num_triangles(); ++t) ratio_f = std::max(ratio_f, f.shape_ratio(t));
        EXPECT_NEAR(ratio_c, ratio_f, 1e-12);
        // midpoints follow in sorted parent-edge order
        const auto& mids = f.midpoint_parents();
        for (std::size_t k = 1; k < mids.size(); ++k) EXPECT_LT(mids[k - 1], mids[k]);
    }
}

TEST(RefineUniform, QuasiUniform) {
    for (const MeshPtr& m : mesh_hierarchy(5, 2)) {
        double lo = INFINITY, hi = 0.0;
        for (std::size_t t = 0; t < m->num_triangles(); ++t) {
            lo = std::min(lo, m->diameter(t));
            hi = std::max(hi, m->diameter(t));
        }
        EXPECT_LE(hi / lo, std::sqrt(2.0) + 1e-12);
    }
}

TEST(Prolongate, IdentityAndMidpoints) {
    const auto levels = mesh_hierarchy(3, 2);
    const FeFunction v = FeFunction::interpolate(levels[0], [](Point2 x) { return x.x * (1 - x.x) * (1 + x.y) * x.y * (1 - x.y); });
    EXPECT_EQ(prolongate(v, levels[0]).coefficients(), v.coefficients());

    const FeFunction f = prolongate(v, levels[1]);
    const auto& mids = levels[1]->midpoint_parents();
    const std::size_t base = levels[0]->num_vertices();
    for (std::size_t k = 0; k < mids.size(); ++k) {
        EXPECT_DOUBLE_EQ(f[base + k], 0.5 * (v[mids[k].first] + v[mids[k].second]));
    }
}

TEST(Prolongate, NestednessAndNormInvariance) {
    const auto levels = mesh_hierarchy(4, 3);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(levels[0]->num_interior());
    for (double& e : x) e = u(gen);
    const FeFunction v = FeFunction::from_interior(levels[0], x);

    const SparseSpd mc = assemble_mass(*levels[0]);
    const double coarse_norm = dot(x, mc * x);
    for (std::size_t l = 1; l < levels.size(); ++l) {
        const FeFunction f = prolongate(v, levels[l]);
        for (std::size_t k = 0; k < levels[0]->num_vertices(); ++k) EXPECT_EQ(f[k], v[k]);
        const std::vector<double> xf = f.interior_values();
        const SparseSpd mf = assemble_mass(*levels[l]);
        EXPECT_NEAR(dot(xf, mf * xf), coarse_norm, 1e-12);
    }
}

TEST(Prolongate, RejectsForeignMesh) {
    const MeshPtr a = unit_square_mesh(4);
    const MeshPtr b = refine_uniform(unit_square_mesh(4));
    EXPECT_THROW(prolongate(FeFunction(a), b), MeshMismatchError);
    EXPECT_THROW(prolongate(FeFunction(b), a), MeshMismatchError);
    EXPECT_TRUE(descends_from(refine_uniform(a), a));
    EXPECT_FALSE(descends_from(b, a));
}

TEST(FeFunction, ZeroTrace) {
    const MeshPtr m = unit_square_mesh(2);
    std::vector<double> c(m->num_vertices(), 0.0);
    c[0] = 1.0;
    EXPECT_THROW(FeFunction(m, c), std::invalid_argument);
    const FeFunction v = FeFunction::interpolate(m, [](Point2) { return 3.0; });
    for (std::size_t k = 0; k < m->num_vertices(); ++k) EXPECT_EQ(v[k], m->is_boundary(k) ? 0.0 : 3.0);
}
