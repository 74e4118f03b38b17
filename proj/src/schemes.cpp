#include "plap/schemes.hpp"

#include <cmath>
#include <stdexcept>

#include "plap/error.hpp"

namespace plap {

std::string to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::EM: return "EM";
        case SchemeKind::AvgHalf: return "HALF";
        case SchemeKind::AvgFull: return "FULL";
    }
    return "?";
}

SchemeKind scheme_from_string(const std::string& name) {
    if (name == "EM") return SchemeKind::EM;
    if (name == "HALF") return SchemeKind::AvgHalf;
    if (name == "FULL") return SchemeKind::AvgFull;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

void NewtonConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("Newton tolerances must be positive");
    if (max_iter < 1) throw std::invalid_argument("Newton max_iter must be >= 1");
    if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("Armijo factor must lie in (0, 1)");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtrack ratio must lie in (0, 1)");
}

namespace {

struct StepState {
    std::vector<double> x;
    double objective = 0.0;
    double scale = 0.0;  // magnitude of the terms summed into objective
    std::vector<double> residual;
    double residual_norm = 0.0;
};

class StepProblem {
public:
    StepProblem(const FluxParams& params, const Discretization& disc, double tau, std::vector<double> rhs)
        : params_(params), disc_(disc), tau_(tau), rhs_(std::move(rhs)) {}

    StepState evaluate(std::vector<double> x) const {
        StepState s;
        const FeFunction v = FeFunction::from_interior(disc_.mesh, x);
        const std::vector<double> mx = disc_.mass * x;
        const double quad = 0.5 * dot(x, mx);
        const double nonlinear = tau_ * energy(params_, v);
        const double linear = dot(rhs_, x);
        s.objective = quad + nonlinear - linear;
        s.scale = std::abs(quad) + nonlinear + std::abs(linear);
        s.residual = p_laplace_residual(params_, v);
        for (std::size_t i = 0; i < x.size(); ++i) s.residual[i] = mx[i] + tau_ * s.residual[i] - rhs_[i];
        s.residual_norm = norm2(s.residual);
        s.x = std::move(x);
        return s;
    }

    /// Throws SingularPointError when the Jacobian is unbounded.
    std::vector<double> newton_direction(const StepState& s) const {
        const FeFunction v = FeFunction::from_interior(disc_.mesh, s.x);
        SparseSpd hessian = disc_.mass.plus_scaled(tau_, p_laplace_jacobian(params_, v, disc_.pattern));
        return solve_negated(hessian, s.residual);
    }

    /// Descent direction preconditioned by the linear (p = 2) operator.
    std::vector<double> fallback_direction(const StepState& s) const {
        return solve_negated(disc_.mass.plus_scaled(tau_, disc_.stiffness), s.residual);
    }

private:
    static std::vector<double> solve_negated(const SparseSpd& a, const std::vector<double>& g) {
        std::vector<double> d = solve_spd(a, g);
        for (double& e : d) e = -e;
        return d;
    }

    const FluxParams& params_;
    const Discretization& disc_;
    double tau_;
    std::vector<double> rhs_;
};

}  // namespace

FeFunction implicit_step(const FluxParams& params, const Discretization& disc, double tau_eff,
                         const FeFunction& v_prev, std::span<const double> load, const NewtonConfig& cfg,
                         NewtonTrace* trace) {
    if (v_prev.mesh_ptr() != disc.mesh) throw MeshMismatchError("implicit_step: v_prev lives on another mesh");
    if (load.size() != disc.mesh->num_interior()) throw ShapeError("implicit_step: load has wrong size");
    if (!(tau_eff >= 0.0)) throw std::invalid_argument("implicit_step: tau_eff must be >= 0");

    const std::vector<double> x_prev = v_prev.interior_values();
    const std::vector<double> m_prev = disc.mass * x_prev;
    std::vector<double> rhs(m_prev.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = m_prev[i] + load[i];

    if (tau_eff == 0.0) return FeFunction::from_interior(disc.mesh, solve_spd(disc.mass, rhs));
    if (norm2(rhs) == 0.0) return FeFunction(disc.mesh);

    const double tol = cfg.abs_tol + cfg.rel_tol * (norm2(m_prev) + norm2(load));
    const StepProblem problem(params, disc, tau_eff, std::move(rhs));
    StepState state = problem.evaluate(x_prev);

    auto record = [&](const StepState& s) {
        if (!trace) return;
        trace->objective.push_back(s.objective);
        trace->residual_norm.push_back(s.residual_norm);
    };
    record(state);

    for (int it = 0; it < cfg.max_iter; ++it) {
        if (state.residual_norm <= tol) return FeFunction::from_interior(disc.mesh, state.x);

        bool fallback = false;
        std::vector<double> dir;
        try {
            dir = problem.newton_direction(state);
        } catch (const SingularPointError&) {
            fallback = true;
            dir = problem.fallback_direction(state);
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            const double slope = dot(state.residual, dir);
            if (slope < 0.0) {
                double alpha = 1.0;
                for (int ls = 0; ls < 60; ++ls) {
                    std::vector<double> xt(state.x.size());
                    for (std::size_t i = 0; i < xt.size(); ++i) xt[i] = state.x[i] + alpha * dir[i];
                    StepState trial = problem.evaluate(std::move(xt));
                    const bool armijo = trial.objective <= state.objective + cfg.armijo * alpha * slope;
                    // below roundoff of Phi: judge the step by the residual instead
                    const bool unresolved = std::abs(alpha * slope) <= 1e-12 * state.scale &&
                                            trial.residual_norm < state.residual_norm;
                    if (armijo || unresolved) {
                        // keep shrinking while Phi still drops: a full step can overshoot
                        // to the mirror point when the energy dominates near zero
                        while (armijo) {
                            const double next = alpha * cfg.backtrack;
                            std::vector<double> xs(state.x.size());
                            for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = state.x[i] + next * dir[i];
                            StepState shorter = problem.evaluate(std::move(xs));
                            if (!(shorter.objective < trial.objective)) break;
                            trial = std::move(shorter);
                            alpha = next;
                        }
                        if (trace) {
                            trace->increment_norm.push_back(alpha * norm2(dir));
                            trace->gradient_fallback.push_back(fallback);
                        }
                        state = std::move(trial);
                        accepted = true;
                        break;
                    }
                    alpha *= cfg.backtrack;
                }
            }
            if (!accepted) {
                if (fallback) break;
                fallback = true;
                dir = problem.fallback_direction(state);
            }
        }
        if (!accepted) {
            throw ConvergenceError("implicit_step: no descent found, residual " + std::to_string(state.residual_norm));
        }
        record(state);
    }
    if (state.residual_norm <= tol) return FeFunction::from_interior(disc.mesh, state.x);
    throw ConvergenceError("implicit_step: Newton exceeded " + std::to_string(cfg.max_iter) +
                           " iterations, residual " + std::to_string(state.residual_norm) + " > " +
                           std::to_string(tol));
}

Trajectory run_scheme(SchemeKind kind, const FluxParams& params, const Discretization& disc, const FeFunction& u0,
                      const NoiseModel& noise, const IncrementTable& table, const NewtonConfig& cfg) {
    if (table.modes() != noise.modes()) throw ShapeError("run_scheme: table and noise model differ in J");
    if (u0.mesh_ptr() != disc.mesh) throw MeshMismatchError("run_scheme: u0 lives on another mesh");

    const double tau = table.grid().tau();
    Trajectory traj{table.grid(), {}};
    traj.states.reserve(static_cast<std::size_t>(table.steps()) + 1);
    traj.states.push_back(u0);
    for (int m = 1; m <= table.steps(); ++m) {
        double tau_eff = tau;
        const FeFunction* coefficient_state = nullptr;
        std::span<const double> weights;
        if (kind == SchemeKind::EM) {
            coefficient_state = &traj.states[m - 1];
            weights = table.std_row(m);
        } else {
            coefficient_state = &traj.states[m >= 2 ? m - 2 : 0];
            weights = table.avg_row(m);
            if (m == 1 && kind == SchemeKind::AvgHalf) tau_eff = 0.5 * tau;
        }
        const std::vector<double> load = noise_load_vector(*disc.mesh, noise, *coefficient_state, weights);
        traj.states.push_back(implicit_step(params, disc, tau_eff, traj.states[m - 1], load, cfg));
    }
    return traj;
}

}  // namespace plap
