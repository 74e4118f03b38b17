#pragma once

#include <span>
#include <string>
#include <vector>

#include "plap/fem.hpp"
#include "plap/flux.hpp"
#include "plap/noise.hpp"

namespace plap {

enum class SchemeKind {
    /// Euler-Maruyama: standard increments, noise coefficient at v_{m-1}.
    EM,
    /// Averaged increments, half step tau/2 for m = 1, coefficient at v_{m-2}.
    AvgHalf,
    /// Averaged increments with a full first step.
    AvgFull,
};

std::string to_string(SchemeKind kind);
SchemeKind scheme_from_string(const std::string& name);
inline constexpr SchemeKind kAllSchemes[] = {SchemeKind::EM, SchemeKind::AvgHalf, SchemeKind::AvgFull};

struct NewtonConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_iter = 50;
    double armijo = 1e-4;
    double backtrack = 0.5;

    void validate() const;
};

/// Per-iteration record of one implicit step, for diagnostics and tests.
struct NewtonTrace {
    std::vector<double> objective;        ///< Phi at the start of each iteration and at exit.
    std::vector<double> residual_norm;    ///< Residual at the same points.
    std::vector<double> increment_norm;   ///< Euclidean norm of each accepted update.
    std::vector<bool> gradient_fallback;  ///< True where the Jacobian was singular.
};

/// Minimizes Phi(v) = 1/2 v.Mv - v.M v_prev + tau_eff J(v) - v.load, i.e.
/// solves (v - v_prev, xi) + tau_eff (S(grad v), grad xi) = (load, xi),
/// by damped Newton with Armijo backtracking on Phi. `load` is indexed by
/// interior DOFs.
FeFunction implicit_step(const FluxParams& params, const Discretization& disc, double tau_eff,
                         const FeFunction& v_prev, std::span<const double> load, const NewtonConfig& cfg,
                         NewtonTrace* trace = nullptr);

struct Trajectory {
    TimeGrid grid;
    std::vector<FeFunction> states;  ///< m = 0..M, all on one mesh

    const FeFunction& operator[](int m) const { return states[static_cast<std::size_t>(m)]; }
    int steps() const { return grid.steps(); }
    const MeshPtr& mesh() const { return states.front().mesh_ptr(); }
};

/// Runs one of the three schemes driven by `table`, starting from u0 (already
/// projected onto the finite element space).
Trajectory run_scheme(SchemeKind kind, const FluxParams& params, const Discretization& disc, const FeFunction& u0,
                      const NoiseModel& noise, const IncrementTable& table, const NewtonConfig& cfg);

}  // namespace plap
