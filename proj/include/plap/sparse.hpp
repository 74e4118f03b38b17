#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "plap/mesh.hpp"

namespace plap {

/// CSR sparsity of a P1 operator together with the scatter map from element
/// matrices into it.
struct SparsePattern {
    std::size_t dim = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<int> col;
    /// slot[t][a][b]: position in the value array of the (a, b) entry of the
    /// element matrix of triangle t, or -1 when the pair is not assembled.
    std::vector<std::array<std::array<int, 3>, 3>> slot;
    /// DOF of every vertex (-1 when eliminated).
    std::vector<int> dof;
};

/// Builds the pattern over interior vertices only, or over all vertices.
std::shared_ptr<const SparsePattern> build_pattern(const TriMesh& mesh, bool interior_only = true);

/// Symmetric sparse matrix sharing an immutable pattern.
class SparseSpd {
public:
    SparseSpd() = default;
    explicit SparseSpd(std::shared_ptr<const SparsePattern> pattern);

    std::size_t dim() const { return pattern_->dim; }
    const SparsePattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const SparsePattern>& pattern_ptr() const { return pattern_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Entry (i, j); zero outside the pattern.
    double at(std::size_t i, std::size_t j) const;
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator*(std::span<const double> x) const;
    std::vector<double> diagonal() const;
    /// max |A_ij - A_ji| / max |A_ij|.
    double asymmetry() const;

    /// this + s * other; both must share the same pattern object.
    SparseSpd plus_scaled(double s, const SparseSpd& other) const;

private:
    std::shared_ptr<const SparsePattern> pattern_;
    std::vector<double> values_;
};

struct CgReport {
    int iterations = 0;
    double residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Stops at relative residual
/// 1e-12 or absolute residual 1e-14; throws ConvergenceError after 10*dim
/// iterations.
std::vector<double> solve_spd(const SparseSpd& a, std::span<const double> b, CgReport* report = nullptr);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace plap
