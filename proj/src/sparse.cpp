#include "plap/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plap/error.hpp"

namespace plap {

std::shared_ptr<const SparsePattern> build_pattern(const TriMesh& mesh, bool interior_only) {
    auto pattern = std::make_shared<SparsePattern>();
    const std::size_t nv = mesh.num_vertices();
    pattern->dof.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        pattern->dof[v] = interior_only ? mesh.interior_index(v) : static_cast<int>(v);
    }
    pattern->dim = interior_only ? mesh.num_interior() : nv;

    std::vector<std::vector<int>> rows(pattern->dim);
    for (const Triangle& tri : mesh.triangles()) {
        for (int a = 0; a < 3; ++a) {
            const int i = pattern->dof[tri[a]];
            if (i < 0) continue;
            for (int b = 0; b < 3; ++b) {
                const int j = pattern->dof[tri[b]];
                if (j >= 0) rows[i].push_back(j);
            }
        }
    }
    pattern->row_ptr.assign(pattern->dim + 1, 0);
    for (std::size_t i = 0; i < pattern->dim; ++i) {
        auto& r = rows[i];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        pattern->row_ptr[i + 1] = pattern->row_ptr[i] + r.size();
    }
    pattern->col.reserve(pattern->row_ptr.back());
    for (const auto& r : rows) pattern->col.insert(pattern->col.end(), r.begin(), r.end());

    pattern->slot.resize(mesh.num_triangles());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const int i = pattern->dof[tri[a]];
                const int j = pattern->dof[tri[b]];
                int s = -1;
                if (i >= 0 && j >= 0) {
                    const auto first = pattern->col.begin() + static_cast<std::ptrdiff_t>(pattern->row_ptr[i]);
                    const auto last = pattern->col.begin() + static_cast<std::ptrdiff_t>(pattern->row_ptr[i + 1]);
                    s = static_cast<int>(std::lower_bound(first, last, j) - pattern->col.begin());
                }
                pattern->slot[t][a][b] = s;
            }
        }
    }
    return pattern;
}

SparseSpd::SparseSpd(std::shared_ptr<const SparsePattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->col.size(), 0.0) {}

double SparseSpd::at(std::size_t i, std::size_t j) const {
    const auto first = pattern_->col.begin() + static_cast<std::ptrdiff_t>(pattern_->row_ptr[i]);
    const auto last = pattern_->col.begin() + static_cast<std::ptrdiff_t>(pattern_->row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<int>(j));
    if (it == last || *it != static_cast<int>(j)) return 0.0;
    return values_[static_cast<std::size_t>(it - pattern_->col.begin())];
}

void SparseSpd::multiply(std::span<const double> x, std::span<double> y) const {
    const auto& rp = pattern_->row_ptr;
    const auto& col = pattern_->col;
    for (std::size_t i = 0; i < pattern_->dim; ++i) {
        double s = 0.0;
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += values_[k] * x[col[k]];
        y[i] = s;
    }
}

std::vector<double> SparseSpd::operator*(std::span<const double> x) const {
    std::vector<double> y(dim());
    multiply(x, y);
    return y;
}

std::vector<double> SparseSpd::diagonal() const {
    std::vector<double> d(dim());
    for (std::size_t i = 0; i < dim(); ++i) d[i] = at(i, i);
    return d;
}

double SparseSpd::asymmetry() const {
    double worst = 0.0;
    double scale = 0.0;
    const auto& rp = pattern_->row_ptr;
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            const std::size_t j = static_cast<std::size_t>(pattern_->col[k]);
            worst = std::max(worst, std::abs(values_[k] - at(j, i)));
            scale = std::max(scale, std::abs(values_[k]));
        }
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

SparseSpd SparseSpd::plus_scaled(double s, const SparseSpd& other) const {
    if (other.pattern_ != pattern_) throw std::invalid_argument("plus_scaled: patterns differ");
    SparseSpd out = *this;
    for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] += s * other.values_[k];
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::vector<double> solve_spd(const SparseSpd& a, std::span<const double> b, CgReport* report) {
    const std::size_t n = a.dim();
    if (b.size() != n) throw ShapeError("solve_spd: right-hand side has wrong size");
    std::vector<double> x(n, 0.0);
    const double b_norm = norm2(b);
    if (b_norm == 0.0) {
        if (report) *report = {0, 0.0};
        return x;
    }

    std::vector<double> inv_diag = a.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) throw std::invalid_argument("solve_spd: non-positive diagonal entry");
        d = 1.0 / d;
    }

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> z(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    const std::size_t max_iter = 10 * std::max<std::size_t>(n, 1);
    double r_norm = b_norm;
    for (std::size_t it = 0; it < max_iter; ++it) {
        a.multiply(p, q);
        const double alpha = rz / dot(p, q);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        r_norm = norm2(r);
        if (r_norm <= 1e-12 * b_norm || r_norm <= 1e-14) {
            if (report) *report = {static_cast<int>(it + 1), r_norm};
            return x;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw ConvergenceError("solve_spd: CG did not converge, residual " + std::to_string(r_norm));
}

}  // namespace plap
