#include "plap/noise.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "plap/error.hpp"

namespace plap {

TimeGrid::TimeGrid(double final_time, int steps) : final_time_(final_time), steps_(steps) {
    if (!(final_time > 0.0)) throw std::invalid_argument("TimeGrid: T must be positive");
    if (steps < 1) throw std::invalid_argument("TimeGrid: M must be >= 1");
}

NoiseModel NoiseModel::linear(double lambda) { return NoiseModel(Kind::Linear, lambda); }

NoiseModel NoiseModel::trace() { return NoiseModel(Kind::Trace, 0.0); }

double NoiseModel::g(int mode, Point2 x, double u) const {
    if (kind_ == Kind::Linear) return lambda_ * u;
    const double pi = std::numbers::pi;
    return mode == 0 ? std::sin(pi * x.x) * x.y * u : std::sin(pi * x.y) * x.x * u;
}

std::string NoiseModel::describe() const {
    if (kind_ == Kind::Trace) return "trace";
    std::ostringstream os;
    os << "linear " << lambda_;
    return os.str();
}

IncrementTable::IncrementTable(TimeGrid grid, int modes)
    : grid_(grid),
      modes_(modes),
      std_(static_cast<std::size_t>(grid.steps()) * static_cast<std::size_t>(modes), 0.0),
      avg_(std_.size(), 0.0) {
    if (modes < 1) throw std::invalid_argument("IncrementTable: J must be >= 1");
}

IncrementTable increments_from_normals(const TimeGrid& grid, const std::vector<std::vector<double>>& zeta,
                                       const std::vector<std::vector<double>>& eta) {
    const int steps = grid.steps();
    if (zeta.size() != static_cast<std::size_t>(steps) || eta.size() != zeta.size() || zeta.front().empty()) {
        throw ShapeError("increments_from_normals: need one row of normals per step");
    }
    const int modes = static_cast<int>(zeta.front().size());
    IncrementTable table(grid, modes);
    const double root_tau = std::sqrt(grid.tau());
    const double root_bridge = std::sqrt(grid.tau() / 12.0);
    for (int j = 0; j < modes; ++j) {
        double prev_std = 0.0;
        double prev_bridge = 0.0;
        for (int m = 1; m <= steps; ++m) {
            const double s = root_tau * zeta[m - 1].at(j);
            const double b = root_bridge * eta[m - 1].at(j);
            table.std_inc(m, j) = s;
            table.avg_inc(m, j) = 0.5 * (s + prev_std) + b - prev_bridge;
            prev_std = s;
            prev_bridge = b;
        }
    }
    return table;
}

IncrementTable sample_increment_table(const TimeGrid& grid, int modes, const NormalStream& stream) {
    if (modes < 1) throw std::invalid_argument("sample_increment_table: J must be >= 1");
    std::vector<std::vector<double>> zeta(grid.steps(), std::vector<double>(modes));
    std::vector<std::vector<double>> eta = zeta;
    for (int m = 1; m <= grid.steps(); ++m) {
        for (int j = 0; j < modes; ++j) {
            zeta[m - 1][j] = stream.normal(static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(j), Variate::Zeta);
            eta[m - 1][j] = stream.normal(static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(j), Variate::Eta);
        }
    }
    return increments_from_normals(grid, zeta, eta);
}

namespace {

// Sample covariance of (x, y) and the standard error of that estimate,
// taken as the spread of the centred products.
std::pair<double, double> covariance_with_se(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double prod = (x[i] - mx) * (y[i] - my);
        sum += prod;
        sum_sq += prod * prod;
    }
    const double cov = sum / static_cast<double>(n - 1);
    const double mean_prod = sum / static_cast<double>(n);
    const double var_prod = std::max(0.0, (sum_sq - static_cast<double>(n) * mean_prod * mean_prod) /
                                              static_cast<double>(n - 1));
    return {cov, std::sqrt(var_prod / static_cast<double>(n))};
}

}  // namespace

CovarianceEstimate empirical_covariance(std::span<const IncrementTable> samples, int mode) {
    if (samples.size() < 2) throw std::invalid_argument("empirical_covariance: need at least two samples");
    const int steps = samples.front().steps();
    const std::size_t n = samples.size();
    std::vector<std::vector<double>> avg_cols(steps, std::vector<double>(n));
    std::vector<std::vector<double>> std_cols(steps, std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s) {
        if (samples[s].steps() != steps) throw ShapeError("empirical_covariance: tables differ in M");
        for (int m = 1; m <= steps; ++m) {
            avg_cols[m - 1][s] = samples[s].avg_inc(m, mode);
            std_cols[m - 1][s] = samples[s].std_inc(m, mode);
        }
    }
    CovarianceEstimate est;
    est.steps = steps;
    est.avg_cov.resize(static_cast<std::size_t>(steps) * steps);
    est.avg_cov_se.resize(est.avg_cov.size());
    for (int m = 0; m < steps; ++m) {
        for (int l = m; l < steps; ++l) {
            const auto [c, se] = covariance_with_se(avg_cols[m], avg_cols[l]);
            est.avg_cov[m * steps + l] = est.avg_cov[l * steps + m] = c;
            est.avg_cov_se[m * steps + l] = est.avg_cov_se[l * steps + m] = se;
        }
    }
    for (int m = 0; m < steps; ++m) {
        const auto [c, se] = covariance_with_se(std_cols[m], avg_cols[m]);
        est.std_avg_same.push_back(c);
        est.std_avg_same_se.push_back(se);
        if (m + 1 < steps) {
            const auto [cn, sen] = covariance_with_se(std_cols[m], avg_cols[m + 1]);
            est.std_avg_next.push_back(cn);
            est.std_avg_next_se.push_back(sen);
        }
    }
    return est;
}

std::vector<double> empirical_cross_mode_covariance(std::span<const IncrementTable> samples, int mode_a,
                                                    int mode_b) {
    if (samples.size() < 2) throw std::invalid_argument("empirical_cross_mode_covariance: need two samples");
    const int steps = samples.front().steps();
    const std::size_t n = samples.size();
    std::vector<double> out(static_cast<std::size_t>(steps) * steps);
    std::vector<double> a(n), b(n);
    for (int m = 1; m <= steps; ++m) {
        for (int l = 1; l <= steps; ++l) {
            for (std::size_t s = 0; s < n; ++s) {
                a[s] = samples[s].avg_inc(m, mode_a);
                b[s] = samples[s].avg_inc(l, mode_b);
            }
            out[(m - 1) * steps + (l - 1)] = covariance_with_se(a, b).first;
        }
    }
    return out;
}

double averaged_increment_covariance(double tau, int m, int l) {
    if (m == l) return m == 1 ? tau / 3.0 : 2.0 * tau / 3.0;
    if (std::abs(m - l) == 1) return tau / 6.0;
    return 0.0;
}

namespace {

void check_ratio(const IncrementTable& fine, CoarsenSpec spec) {
    if (spec.ratio < 1 || fine.steps() % spec.ratio != 0) {
        throw ShapeError("coarsening ratio " + std::to_string(spec.ratio) + " does not divide M = " +
                         std::to_string(fine.steps()));
    }
}

}  // namespace

IncrementTable coarsen_increments(const IncrementTable& fine, CoarsenSpec spec) {
    check_ratio(fine, spec);
    const int r = spec.ratio;
    const int coarse_steps = fine.steps() / r;
    IncrementTable coarse(TimeGrid(fine.grid().final_time(), coarse_steps), fine.modes());
    const double rr = static_cast<double>(r);
    for (int j = 0; j < fine.modes(); ++j) {
        for (int c = 1; c <= coarse_steps; ++c) {
            double s = 0.0;
            for (int k = 1; k <= r; ++k) s += fine.std_inc((c - 1) * r + k, j);
            coarse.std_inc(c, j) = s;
        }
        double first = 0.0;
        for (int l = 1; l <= r; ++l) first += (1.0 - (l - 1) / rr) * fine.avg_inc(l, j);
        coarse.avg_inc(1, j) = first;
        for (int c = 2; c <= coarse_steps; ++c) {
            double a = 0.0;
            for (int l = 0; l <= r - 1; ++l) a += ((l + 1) / rr) * fine.avg_inc(r * c - l, j);
            for (int l = 0; l <= r - 2; ++l) a += (1.0 - (l + 1) / rr) * fine.avg_inc(r * (c - 1) - l, j);
            coarse.avg_inc(c, j) = a;
        }
    }
    return coarse;
}

IncrementTable coarse_oracle(const IncrementTable& fine, CoarsenSpec spec) {
    check_ratio(fine, spec);
    const int r = spec.ratio;
    const int fine_steps = fine.steps();
    const int coarse_steps = fine_steps / r;
    IncrementTable coarse(TimeGrid(fine.grid().final_time(), coarse_steps), fine.modes());
    for (int j = 0; j < fine.modes(); ++j) {
        // mean value of W over fine interval m, with the convention <W>_0 = 0
        std::vector<double> fine_mean(fine_steps + 1, 0.0);
        for (int m = 1; m <= fine_steps; ++m) fine_mean[m] = fine_mean[m - 1] + fine.avg_inc(m, j);
        std::vector<double> coarse_mean(coarse_steps + 1, 0.0);
        for (int c = 1; c <= coarse_steps; ++c) {
            double s = 0.0;
            for (int k = 1; k <= r; ++k) s += fine_mean[(c - 1) * r + k];
            coarse_mean[c] = s / r;
        }
        std::vector<double> path = path_points(fine, j);
        for (int c = 1; c <= coarse_steps; ++c) {
            coarse.avg_inc(c, j) = coarse_mean[c] - coarse_mean[c - 1];
            coarse.std_inc(c, j) = path[c * r] - path[(c - 1) * r];
        }
    }
    return coarse;
}

std::vector<double> path_points(const IncrementTable& table, int mode) {
    std::vector<double> beta(table.steps() + 1, 0.0);
    for (int m = 1; m <= table.steps(); ++m) beta[m] = beta[m - 1] + table.std_inc(m, mode);
    return beta;
}

}  // namespace plap
