#include "plap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "plap/error.hpp"
#include "plap/fem.hpp"
#include "plap/parallel.hpp"

namespace plap {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::LinfL2Aver: return "LINF_L2_AVER";
        case MetricKind::LinfL2Point: return "LINF_L2_POINT";
        case MetricKind::L2VClassic: return "L2V_CLASSIC";
        case MetricKind::L2VInner: return "L2V_INNER";
        case MetricKind::L2VOuter: return "L2V_OUTER";
        case MetricKind::L2Grad: return "L2_GRAD";
    }
    return "?";
}

double DistanceSet::get(MetricKind kind) const {
    switch (kind) {
        case MetricKind::LinfL2Aver: return linf_l2_aver;
        case MetricKind::LinfL2Point: return linf_l2_point;
        case MetricKind::L2VClassic: return l2v_classic;
        case MetricKind::L2VInner: return l2v_inner;
        case MetricKind::L2VOuter: return l2v_outer;
        case MetricKind::L2Grad: return l2_grad;
    }
    return 0.0;
}

DistanceSet trajectory_distances(const FluxParams& params, const Trajectory& fine, const Trajectory& coarse, int r,
                                 Pairing pairing) {
    if (r < 1 || fine.steps() != r * coarse.steps() ||
        fine.grid.final_time() != coarse.grid.final_time()) {
        throw ShapeError("trajectory_distances: fine grid must have r times the coarse steps");
    }
    const MeshPtr& mesh = fine.mesh();
    if (!descends_from(mesh, coarse.mesh())) {
        throw MeshMismatchError("trajectory_distances: fine mesh does not refine the coarse mesh");
    }
    const std::size_t nt = mesh->num_triangles();
    const double tau_c = coarse.grid.tau();

    DistanceSet d;
    std::vector<Grad2> v_mean(nt);
    std::vector<std::vector<Grad2>> v_fine(static_cast<std::size_t>(r), std::vector<Grad2>(nt));
    for (int m = 1; m <= coarse.steps(); ++m) {
        const FeFunction vc = prolongate(coarse[m], mesh);
        FeFunction mean(mesh);
        std::fill(v_mean.begin(), v_mean.end(), Grad2{});
        for (int k = 1; k <= r; ++k) {
            const FeFunction& vf = fine[(m - 1) * r + k];
            mean += vf;
            d.l2v_classic += tau_c / r * v_distance_sq(params, vf, vc);
            auto& vk = v_fine[static_cast<std::size_t>(k - 1)];
            for (std::size_t t = 0; t < nt; ++t) {
                vk[t] = eval_V(params, vf.gradient(t));
                v_mean[t] += (1.0 / r) * vk[t];
            }
        }
        mean *= 1.0 / r;

        const NormPair aver = norms(mean, vc);
        const NormPair point = norms(fine[m * r], vc);
        d.linf_l2_aver = std::max(d.linf_l2_aver, aver.l2_dist_sq);
        d.linf_l2_point = std::max(d.linf_l2_point, point.l2_dist_sq);
        d.l2v_inner += tau_c * v_distance_sq(params, mean, vc);
        d.l2_grad += tau_c * (pairing == Pairing::Average ? aver.h1_semi_dist_sq : point.h1_semi_dist_sq);

        double outer = 0.0;
        double osc = 0.0;
        for (std::size_t t = 0; t < nt; ++t) {
            const double a = mesh->area(t);
            outer += a * norm_sq(v_mean[t] - eval_V(params, vc.gradient(t)));
            for (const auto& vk : v_fine) osc += a * norm_sq(vk[t] - v_mean[t]);
        }
        d.l2v_outer += tau_c * outer;
        d.oscillation += tau_c / r * osc;
    }
    return d;
}

double trajectory_distance(MetricKind kind, const FluxParams& params, const Trajectory& fine,
                           const Trajectory& coarse, int r, Pairing pairing) {
    return trajectory_distances(params, fine, coarse, r, pairing).get(kind);
}

double oscillation_term(const FluxParams& params, const Trajectory& fine, const Trajectory& coarse, int r) {
    return trajectory_distances(params, fine, coarse, r).oscillation;
}

Estimate mean_and_stderr(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean_and_stderr: no values");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

ErrorReport monte_carlo(const SampleEvaluator& evaluator, int n, std::uint64_t master_seed, int workers) {
    if (n < 1) throw std::invalid_argument("monte_carlo: n must be >= 1");
    std::vector<std::vector<double>> results(static_cast<std::size_t>(n));
    parallel_for(
        results.size(),
        [&](std::size_t i) {
            try {
                results[i] = evaluator(SampleKey{master_seed, static_cast<std::uint32_t>(i)});
            } catch (const std::exception& e) {
                throw SampleError(i, e.what());
            }
        },
        workers);

    const std::size_t width = results.front().size();
    ErrorReport report;
    report.n_samples = n;
    report.master_seed = master_seed;
    std::vector<double> column(results.size());
    for (std::size_t q = 0; q < width; ++q) {
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].size() != width) throw ShapeError("monte_carlo: samples differ in length");
            column[i] = results[i][q];
        }
        report.estimates.push_back(mean_and_stderr(column));
    }
    return report;
}

}  // namespace plap
