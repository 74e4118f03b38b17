#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "plap/mesh.hpp"
#include "plap/rng.hpp"

namespace plap {

/// Uniform time grid t_m = m T / M on [0, T].
class TimeGrid {
public:
    TimeGrid(double final_time, int steps);

    double final_time() const { return final_time_; }
    int steps() const { return steps_; }
    double tau() const { return final_time_ / steps_; }
    double t(int m) const { return final_time_ * m / steps_; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double final_time_;
    int steps_;
};

/// Truncated multiplicative noise G(u) dW = sum_j g_j(x, u) d beta^j.
class NoiseModel {
public:
    enum class Kind { Linear, Trace };

    /// J = 1, g_1(x, u) = lambda u.
    static NoiseModel linear(double lambda);
    /// J = 2, g_1 = sin(pi x) y u, g_2 = sin(pi y) x u.
    static NoiseModel trace();

    Kind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    int modes() const { return kind_ == Kind::Linear ? 1 : 2; }
    double g(int mode, Point2 x, double u) const;
    std::string describe() const;

private:
    NoiseModel(Kind kind, double lambda) : kind_(kind), lambda_(lambda) {}

    Kind kind_;
    double lambda_;
};

/// Standard increments Delta_m W and averaged increments Delta_m 𝕎 per mode.
///
/// Rows are indexed m = 1..M (row m belongs to the interval [t_{m-1}, t_m]),
/// modes j = 0..J-1.
class IncrementTable {
public:
    IncrementTable(TimeGrid grid, int modes);

    const TimeGrid& grid() const { return grid_; }
    int steps() const { return grid_.steps(); }
    int modes() const { return modes_; }

    double std_inc(int m, int j) const { return std_[index(m, j)]; }
    double avg_inc(int m, int j) const { return avg_[index(m, j)]; }
    double& std_inc(int m, int j) { return std_[index(m, j)]; }
    double& avg_inc(int m, int j) { return avg_[index(m, j)]; }

    std::span<const double> std_row(int m) const { return {std_.data() + index(m, 0), static_cast<std::size_t>(modes_)}; }
    std::span<const double> avg_row(int m) const { return {avg_.data() + index(m, 0), static_cast<std::size_t>(modes_)}; }

    friend bool operator==(const IncrementTable&, const IncrementTable&) = default;

private:
    std::size_t index(int m, int j) const {
        return static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(j);
    }

    TimeGrid grid_;
    int modes_;
    std::vector<double> std_;
    std::vector<double> avg_;
};

/// Builds a table from given standard normals: zeta[m-1][j] drives the
/// increment, eta[m-1][j] the bridge average.
IncrementTable increments_from_normals(const TimeGrid& grid, const std::vector<std::vector<double>>& zeta,
                                       const std::vector<std::vector<double>>& eta);

/// Joint sample of (Delta_m W, Delta_m 𝕎) for m = 1..M, J modes.
IncrementTable sample_increment_table(const TimeGrid& grid, int modes, const NormalStream& stream);

struct CovarianceEstimate {
    int steps = 0;
    /// Unbiased sample covariance of the averaged increments, row-major M x M.
    std::vector<double> avg_cov;
    /// Standard error of each avg_cov entry.
    std::vector<double> avg_cov_se;
    /// Cov(std[m], avg[m]) and its standard error, m = 1..M.
    std::vector<double> std_avg_same;
    std::vector<double> std_avg_same_se;
    /// Cov(std[m], avg[m+1]) and its standard error, m = 1..M-1.
    std::vector<double> std_avg_next;
    std::vector<double> std_avg_next_se;

    double cov(int m, int l) const { return avg_cov[static_cast<std::size_t>((m - 1) * steps + (l - 1))]; }
    double cov_se(int m, int l) const { return avg_cov_se[static_cast<std::size_t>((m - 1) * steps + (l - 1))]; }
};

/// Sample covariances of one mode over a set of tables (at least two).
CovarianceEstimate empirical_covariance(std::span<const IncrementTable> samples, int mode);

/// Sample covariance between averaged increments of two different modes,
/// row-major M x M.
std::vector<double> empirical_cross_mode_covariance(std::span<const IncrementTable> samples, int mode_a,
                                                    int mode_b);

/// Closed-form covariance of averaged increments on a uniform grid.
double averaged_increment_covariance(double tau, int m, int l);

struct CoarsenSpec {
    int ratio = 1;
};

/// Exact coarse increments (standard and averaged) of the same Wiener path.
IncrementTable coarsen_increments(const IncrementTable& fine, CoarsenSpec spec);

/// Independent route to coarsen_increments through reconstructed mean values.
IncrementTable coarse_oracle(const IncrementTable& fine, CoarsenSpec spec);

/// beta^j(t_m) for m = 0..M.
std::vector<double> path_points(const IncrementTable& table, int mode);

}  // namespace plap
