#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "plap/flux.hpp"

namespace plap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

using Triangle = std::array<int, 3>;

class TriMesh;
using MeshPtr = std::shared_ptr<const TriMesh>;

/// Conforming triangulation of the unit square.
///
/// Meshes are immutable once built. A refined mesh keeps a pointer to its
/// parent together with the parent-edge of every vertex it appended, which is
/// all that is needed to move P1 functions down the hierarchy.
class TriMesh {
public:
    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    bool is_boundary(std::size_t v) const { return boundary_[v] != 0; }
    const std::vector<char>& boundary_mask() const { return boundary_; }

    /// Interior DOF index of a vertex, or -1 on the boundary.
    int interior_index(std::size_t v) const { return interior_index_[v]; }
    const std::vector<int>& interior_vertices() const { return interior_vertices_; }
    std::size_t num_interior() const { return interior_vertices_.size(); }

    int level() const { return level_; }
    /// Cells per side of the level-0 lattice this mesh descends from.
    int base_cells() const { return base_cells_; }
    double h_max() const { return h_max_; }

    double area(std::size_t t) const { return area_[t]; }
    /// Gradient of the barycentric coordinate of local vertex k on triangle t.
    Grad2 basis_gradient(std::size_t t, int k) const { return basis_grad_[t][k]; }
    double diameter(std::size_t t) const { return diameter_[t]; }
    /// Ratio of diameter to inscribed-circle diameter of triangle t.
    double shape_ratio(std::size_t t) const;

    const MeshPtr& parent() const { return parent_; }
    /// Parent-edge endpoints of vertex num_vertices_of_parent + k.
    const std::vector<std::pair<int, int>>& midpoint_parents() const { return midpoint_parents_; }

    /// Vertex index closest to a point (ties broken by lowest index).
    std::size_t nearest_vertex(Point2 p) const;

private:
    friend MeshPtr unit_square_mesh(int n);
    friend MeshPtr refine_uniform(const MeshPtr& mesh);

    TriMesh() = default;
    void finalize();

    std::vector<Point2> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<char> boundary_;
    std::vector<int> interior_index_;
    std::vector<int> interior_vertices_;
    std::vector<double> area_;
    std::vector<double> diameter_;
    std::vector<std::array<Grad2, 3>> basis_grad_;
    double h_max_ = 0.0;
    int level_ = 0;
    int base_cells_ = 0;
    MeshPtr parent_;
    std::vector<std::pair<int, int>> midpoint_parents_;
};

/// Uniform n x n lattice, each cell cut along its lower-left to upper-right
/// diagonal. Vertices are numbered lexicographically by (y, x).
MeshPtr unit_square_mesh(int n);

/// Red refinement: every triangle splits into four congruent children.
/// Parent vertices keep their indices; midpoints follow in order of the
/// sorted parent-edge pair.
MeshPtr refine_uniform(const MeshPtr& mesh);

/// unit_square_mesh(n) refined `levels` times; every level is returned.
std::vector<MeshPtr> mesh_hierarchy(int n, int levels);

/// Continuous piecewise-linear function with zero boundary trace.
class FeFunction {
public:
    FeFunction() = default;
    /// Zero function on `mesh`.
    explicit FeFunction(MeshPtr mesh);
    /// Throws std::invalid_argument when a boundary coefficient is nonzero.
    FeFunction(MeshPtr mesh, std::vector<double> coefficients);

    static FeFunction from_interior(MeshPtr mesh, std::span<const double> values);
    /// Nodal interpolant; boundary values are dropped.
    static FeFunction interpolate(MeshPtr mesh, const std::function<double(Point2)>& f);

    const TriMesh& mesh() const { return *mesh_; }
    const MeshPtr& mesh_ptr() const { return mesh_; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    double operator[](std::size_t v) const { return coeffs_[v]; }

    std::vector<double> interior_values() const;
    Grad2 gradient(std::size_t t) const;
    /// Value at the midpoint of the edge (a, b).
    double edge_midpoint_value(int a, int b) const { return 0.5 * (coeffs_[a] + coeffs_[b]); }

    FeFunction& operator+=(const FeFunction& other);
    FeFunction& operator*=(double s);
    friend FeFunction operator-(const FeFunction& a, const FeFunction& b);

private:
    MeshPtr mesh_;
    std::vector<double> coeffs_;
};

/// Represents a coarse P1 function exactly on a nested refinement.
/// Throws MeshMismatchError when fine_mesh does not descend from the
/// function's mesh.
FeFunction prolongate(const FeFunction& coarse, const MeshPtr& fine_mesh);

/// True when `fine` is `coarse` or one of its uniform refinements.
bool descends_from(const MeshPtr& fine, const MeshPtr& coarse);

}  // namespace plap
