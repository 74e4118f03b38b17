#include "plap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plap/error.hpp"

namespace plap {

namespace {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool on_unit_square_boundary(Point2 p) {
    return p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
}

}  // namespace

void TriMesh::finalize() {
    const std::size_t nv = vertices_.size();
    boundary_.assign(nv, 0);
    interior_index_.assign(nv, -1);
    interior_vertices_.clear();
    for (std::size_t v = 0; v < nv; ++v) {
        if (on_unit_square_boundary(vertices_[v])) {
            boundary_[v] = 1;
        } else {
            interior_index_[v] = static_cast<int>(interior_vertices_.size());
            interior_vertices_.push_back(static_cast<int>(v));
        }
    }

    const std::size_t nt = triangles_.size();
    area_.resize(nt);
    diameter_.resize(nt);
    basis_grad_.resize(nt);
    h_max_ = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
        const Point2 p0 = vertices_[triangles_[t][0]];
        const Point2 p1 = vertices_[triangles_[t][1]];
        const Point2 p2 = vertices_[triangles_[t][2]];
        const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
        if (!(det > 0.0)) throw std::logic_error("triangle with non-positive orientation");
        area_[t] = 0.5 * det;
        basis_grad_[t][0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
        basis_grad_[t][1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
        basis_grad_[t][2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
        diameter_[t] = std::max({distance(p0, p1), distance(p1, p2), distance(p2, p0)});
        h_max_ = std::max(h_max_, diameter_[t]);
    }
}

double TriMesh::shape_ratio(std::size_t t) const {
    const Point2 p0 = vertices_[triangles_[t][0]];
    const Point2 p1 = vertices_[triangles_[t][1]];
    const Point2 p2 = vertices_[triangles_[t][2]];
    const double perimeter = distance(p0, p1) + distance(p1, p2) + distance(p2, p0);
    const double inradius = 2.0 * area_[t] / perimeter;
    return diameter_[t] / (2.0 * inradius);
}

std::size_t TriMesh::nearest_vertex(Point2 p) const {
    std::size_t best = 0;
    double best_d = distance(vertices_[0], p);
    for (std::size_t v = 1; v < vertices_.size(); ++v) {
        const double d = distance(vertices_[v], p);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

MeshPtr unit_square_mesh(int n) {
    if (n < 1) throw std::invalid_argument("unit_square_mesh: n must be >= 1");
    auto mesh = std::shared_ptr<TriMesh>(new TriMesh());
    mesh->base_cells_ = n;
    mesh->level_ = 0;
    const int side = n + 1;
    mesh->vertices_.reserve(static_cast<std::size_t>(side) * side);
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            mesh->vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
        }
    }
    mesh->triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * side + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + side;
            const int v11 = v01 + 1;
            mesh->triangles_.push_back({v00, v10, v11});
            mesh->triangles_.push_back({v00, v11, v01});
        }
    }
    mesh->finalize();
    return mesh;
}

MeshPtr refine_uniform(const MeshPtr& parent) {
    if (!parent) throw std::invalid_argument("refine_uniform: null mesh");
    auto mesh = std::shared_ptr<TriMesh>(new TriMesh());
    mesh->base_cells_ = parent->base_cells_;
    mesh->level_ = parent->level_ + 1;
    mesh->parent_ = parent;

    std::vector<std::pair<int, int>> edges;
    edges.reserve(3 * parent->num_triangles());
    for (const Triangle& tri : parent->triangles_) {
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k];
            const int b = tri[(k + 1) % 3];
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const int nv_parent = static_cast<int>(parent->num_vertices());
    mesh->vertices_ = parent->vertices_;
    mesh->vertices_.reserve(nv_parent + edges.size());
    for (const auto& [a, b] : edges) {
        const Point2 pa = parent->vertices_[a];
        const Point2 pb = parent->vertices_[b];
        mesh->vertices_.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    }
    mesh->midpoint_parents_ = edges;

    auto midpoint = [&](int a, int b) {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        const auto it = std::lower_bound(edges.begin(), edges.end(), key);
        return nv_parent + static_cast<int>(it - edges.begin());
    };

    mesh->triangles_.reserve(4 * parent->num_triangles());
    for (const Triangle& tri : parent->triangles_) {
        const int a = tri[0];
        const int b = tri[1];
        const int c = tri[2];
        const int ab = midpoint(a, b);
        const int bc = midpoint(b, c);
        const int ca = midpoint(c, a);
        mesh->triangles_.push_back({a, ab, ca});
        mesh->triangles_.push_back({ab, b, bc});
        mesh->triangles_.push_back({ca, bc, c});
        mesh->triangles_.push_back({ab, bc, ca});
    }
    mesh->finalize();
    return mesh;
}

std::vector<MeshPtr> mesh_hierarchy(int n, int levels) {
    if (levels < 0) throw std::invalid_argument("mesh_hierarchy: levels must be >= 0");
    std::vector<MeshPtr> out{unit_square_mesh(n)};
    for (int l = 0; l < levels; ++l) out.push_back(refine_uniform(out.back()));
    return out;
}

FeFunction::FeFunction(MeshPtr mesh) : mesh_(std::move(mesh)), coeffs_(mesh_->num_vertices(), 0.0) {}

FeFunction::FeFunction(MeshPtr mesh, std::vector<double> coefficients)
    : mesh_(std::move(mesh)), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != mesh_->num_vertices()) {
        throw std::invalid_argument("FeFunction: coefficient count does not match mesh");
    }
    for (std::size_t v = 0; v < coeffs_.size(); ++v) {
        if (mesh_->is_boundary(v) && coeffs_[v] != 0.0) {
            throw std::invalid_argument("FeFunction: nonzero boundary coefficient");
        }
    }
}

FeFunction FeFunction::from_interior(MeshPtr mesh, std::span<const double> values) {
    if (values.size() != mesh->num_interior()) {
        throw std::invalid_argument("FeFunction::from_interior: size mismatch");
    }
    FeFunction f(std::move(mesh));
    const auto& interior = f.mesh_->interior_vertices();
    for (std::size_t i = 0; i < interior.size(); ++i) f.coeffs_[interior[i]] = values[i];
    return f;
}

FeFunction FeFunction::interpolate(MeshPtr mesh, const std::function<double(Point2)>& f) {
    FeFunction out(std::move(mesh));
    for (int v : out.mesh_->interior_vertices()) out.coeffs_[v] = f(out.mesh_->vertices()[v]);
    return out;
}

std::vector<double> FeFunction::interior_values() const {
    const auto& interior = mesh_->interior_vertices();
    std::vector<double> out(interior.size());
    for (std::size_t i = 0; i < interior.size(); ++i) out[i] = coeffs_[interior[i]];
    return out;
}

Grad2 FeFunction::gradient(std::size_t t) const {
    const Triangle& tri = mesh_->triangles()[t];
    Grad2 g;
    for (int k = 0; k < 3; ++k) g += coeffs_[tri[k]] * mesh_->basis_gradient(t, k);
    return g;
}

FeFunction& FeFunction::operator+=(const FeFunction& other) {
    if (other.mesh_ != mesh_) throw MeshMismatchError("FeFunction +=: different meshes");
    for (std::size_t v = 0; v < coeffs_.size(); ++v) coeffs_[v] += other.coeffs_[v];
    return *this;
}

FeFunction& FeFunction::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

FeFunction operator-(const FeFunction& a, const FeFunction& b) {
    if (a.mesh_ != b.mesh_) throw MeshMismatchError("FeFunction -: different meshes");
    FeFunction out = a;
    for (std::size_t v = 0; v < out.coeffs_.size(); ++v) out.coeffs_[v] -= b.coeffs_[v];
    return out;
}

bool descends_from(const MeshPtr& fine, const MeshPtr& coarse) {
    for (const TriMesh* m = fine.get(); m != nullptr; m = m->parent().get()) {
        if (m == coarse.get()) return true;
    }
    return false;
}

FeFunction prolongate(const FeFunction& coarse, const MeshPtr& fine_mesh) {
    std::vector<const TriMesh*> chain;
    const TriMesh* m = fine_mesh.get();
    while (m != nullptr && m != &coarse.mesh()) {
        chain.push_back(m);
        m = m->parent().get();
    }
    if (m == nullptr) {
        throw MeshMismatchError("prolongate: target mesh is not a refinement of the source mesh");
    }
    std::vector<double> c = coarse.coefficients();
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const auto& parents = (*it)->midpoint_parents();
        const std::size_t base = c.size();
        c.resize(base + parents.size());
        for (std::size_t k = 0; k < parents.size(); ++k) {
            c[base + k] = 0.5 * (c[parents[k].first] + c[parents[k].second]);
        }
    }
    return FeFunction(fine_mesh, std::move(c));
}

}  // namespace plap
