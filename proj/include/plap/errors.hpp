#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "plap/flux.hpp"
#include "plap/rng.hpp"
#include "plap/schemes.hpp"

namespace plap {

enum class MetricKind { LinfL2Aver, LinfL2Point, L2VClassic, L2VInner, L2VOuter, L2Grad };

inline constexpr std::array<MetricKind, 6> kAllMetrics{MetricKind::LinfL2Aver, MetricKind::LinfL2Point,
                                                       MetricKind::L2VClassic, MetricKind::L2VInner,
                                                       MetricKind::L2VOuter,   MetricKind::L2Grad};
/// The five distances used for fine-versus-coarse studies.
inline constexpr std::array<MetricKind, 5> kCoarseFineMetrics{MetricKind::LinfL2Aver, MetricKind::LinfL2Point,
                                                              MetricKind::L2VClassic, MetricKind::L2VInner,
                                                              MetricKind::L2VOuter};

std::string to_string(MetricKind kind);

/// Which fine quantity the gradient distance compares against v^c_m.
enum class Pairing { Average, Point };

/// All distances between a fine trajectory and a coarse one, with r fine
/// steps per coarse step. Coarse states are prolongated to the fine mesh.
struct DistanceSet {
    double linf_l2_aver = 0.0;
    double linf_l2_point = 0.0;
    double l2v_classic = 0.0;
    double l2v_inner = 0.0;
    double l2v_outer = 0.0;
    double l2_grad = 0.0;
    /// sum_m (tau_c/r) sum_k int |V(grad v^f_k) - <V(grad v^f)>_m|^2
    double oscillation = 0.0;

    double get(MetricKind kind) const;
};

DistanceSet trajectory_distances(const FluxParams& params, const Trajectory& fine, const Trajectory& coarse, int r,
                                 Pairing pairing = Pairing::Average);

double trajectory_distance(MetricKind kind, const FluxParams& params, const Trajectory& fine,
                           const Trajectory& coarse, int r, Pairing pairing = Pairing::Average);

/// Oscillation of V(grad v^f) around its block means.
double oscillation_term(const FluxParams& params, const Trajectory& fine, const Trajectory& coarse, int r);

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Monte Carlo means of a vector-valued per-sample quantity.
struct ErrorReport {
    std::vector<Estimate> estimates;
    int n_samples = 0;
    std::uint64_t master_seed = 0;
};

using SampleEvaluator = std::function<std::vector<double>(SampleKey)>;

/// Runs evaluator on samples 0..n-1 keyed by (master_seed, index) and
/// averages in index order. Failures are rethrown as SampleError with the
/// lowest failing index.
ErrorReport monte_carlo(const SampleEvaluator& evaluator, int n, std::uint64_t master_seed, int workers = 0);

/// Mean and standard error (n - 1 denominator; 0 when n = 1).
Estimate mean_and_stderr(const std::vector<double>& values);

}  // namespace plap
