#pragma once

#include <utility>

#include "plap/mesh.hpp"
#include "plap/noise.hpp"
#include "plap/schemes.hpp"

namespace plap {

/// Data of the closed-form solution u(t) = exp(-(lambda^2/2 + mu) t + lambda beta(t)) u0
/// of the linear equation with noise lambda u dbeta started in an eigenfunction.
struct ExactParams {
    double lambda = 1.0;
    double mu = 0.0;    ///< continuous eigenvalue
    double mu_h = 0.0;  ///< discrete eigenvalue
    FeFunction u_h0;    ///< discrete eigenvector
    int r_ref = 10;     ///< Riemann points per scheme interval

    void validate() const;
};

/// exp(-(lambda^2/2 + mu) t + lambda beta_t), with mu_h when `discrete`.
double scale_factor(const ExactParams& params, double t, double beta_t, bool discrete = true);

struct ReferencePair {
    Trajectory point;    ///< solution at t_m
    Trajectory average;  ///< right-endpoint Riemann mean over I_m
};

/// Point and averaged references on `scheme_grid`, evaluated along the path of
/// mode 0 of `fine_table`, whose grid must have scheme_grid.steps() * r_ref steps.
ReferencePair build_references(const ExactParams& params, const IncrementTable& fine_table,
                               const TimeGrid& scheme_grid);

}  // namespace plap
