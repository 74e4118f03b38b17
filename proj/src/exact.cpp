#include "plap/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "plap/error.hpp"

namespace plap {

void ExactParams::validate() const {
    if (!(mu > 0.0) || !(mu_h > mu)) throw std::invalid_argument("ExactParams: need mu_h > mu > 0");
    if (r_ref < 1) throw std::invalid_argument("ExactParams: r_ref must be >= 1");
    if (!u_h0.mesh_ptr()) throw std::invalid_argument("ExactParams: u_h0 is empty");
}

double scale_factor(const ExactParams& params, double t, double beta_t, bool discrete) {
    const double rate = 0.5 * params.lambda * params.lambda + (discrete ? params.mu_h : params.mu);
    return std::exp(-rate * t + params.lambda * beta_t);
}

ReferencePair build_references(const ExactParams& params, const IncrementTable& fine_table,
                               const TimeGrid& scheme_grid) {
    const int r = params.r_ref;
    if (r < 1 || fine_table.steps() != scheme_grid.steps() * r ||
        fine_table.grid().final_time() != scheme_grid.final_time()) {
        throw ShapeError("build_references: table has " + std::to_string(fine_table.steps()) +
                         " steps, expected " + std::to_string(scheme_grid.steps()) + " x " + std::to_string(r));
    }
    const std::vector<double> beta = path_points(fine_table, 0);
    const TimeGrid& fine = fine_table.grid();
    auto factor = [&](int k) { return scale_factor(params, fine.t(k), beta[k], true); };

    ReferencePair refs{Trajectory{scheme_grid, {}}, Trajectory{scheme_grid, {}}};
    refs.point.states.reserve(static_cast<std::size_t>(scheme_grid.steps()) + 1);
    refs.average.states.reserve(refs.point.states.capacity());
    for (int m = 0; m <= scheme_grid.steps(); ++m) {
        FeFunction pt = params.u_h0;
        pt *= factor(m * r);
        refs.point.states.push_back(std::move(pt));

        FeFunction avg = params.u_h0;
        if (m == 0) {
            avg *= factor(0);
        } else {
            double sum = 0.0;
            for (int k = 1; k <= r; ++k) sum += factor((m - 1) * r + k);
            avg *= sum / r;
        }
        refs.average.states.push_back(std::move(avg));
    }
    return refs;
}

}  // namespace plap
