#include "plap/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "plap/errors.hpp"
#include "plap/fem.hpp"
#include "plap/flux.hpp"
#include "plap/mesh.hpp"
#include "plap/noise.hpp"
#include "plap/rng.hpp"
#include "plap/schemes.hpp"

namespace plap {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

SelfCheck flux_jacobian() {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double worst = 0.0;
    for (const FluxParams fp : {FluxParams{3.0, 0.0}, FluxParams{1.5, 1.0}, FluxParams{1.5, 0.0}}) {
        for (int i = 0; i < 20; ++i) {
            const Grad2 xi{coord(gen), coord(gen)};
            if (norm(xi) < 0.1) continue;
            const Mat2 ds = eval_DS(fp, xi);
            const double h = 1e-6;
            for (int c = 0; c < 2; ++c) {
                const Grad2 e = c == 0 ? Grad2{h, 0.0} : Grad2{0.0, h};
                const Grad2 fd = (1.0 / (2 * h)) * (eval_S(fp, xi + e) - eval_S(fp, xi - e));
                const Grad2 col{ds[0][c], ds[1][c]};
                worst = std::max(worst, norm(fd - col) / norm(col));
            }
        }
    }
    return {"flux_jacobian_fd", worst < 1e-6, "max rel err " + num(worst)};
}

SelfCheck flux_coercivity() {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    double lo = INFINITY;
    for (const double p : {1.5, 2.0, 3.0}) {
        const FluxParams fp{p, 0.0};
        for (int i = 0; i < 500; ++i) {
            const Grad2 a{coord(gen), coord(gen)};
            const Grad2 b{coord(gen), coord(gen)};
            const double den = norm_sq(eval_V(fp, a) - eval_V(fp, b));
            if (den < 1e-24) continue;
            lo = std::min(lo, dot(eval_S(fp, a) - eval_S(fp, b), a - b) / den);
        }
    }
    return {"flux_v_coercivity", lo > 0.0, "min ratio " + num(lo)};
}

SelfCheck mesh_prolongation() {
    const auto meshes = mesh_hierarchy(4, 2);
    const FeFunction v = FeFunction::interpolate(meshes[0], [](Point2 x) { return x.x * (1 - x.x) * x.y; });
    const double diff = std::abs(l2_norm_sq(v) - l2_norm_sq(prolongate(v, meshes[2])));
    return {"mesh_prolongation_l2", diff < 1e-12, "norm change " + num(diff)};
}

SelfCheck energy_gradient() {
    const MeshPtr mesh = unit_square_mesh(6);
    const FluxParams fp{3.0, 0.5};
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(mesh->num_interior()), d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = u(gen);
        d[i] = u(gen);
    }
    const FeFunction v = FeFunction::from_interior(mesh, x);
    const double analytic = dot(p_laplace_residual(fp, v), d);
    const double h = 1e-6;
    std::vector<double> xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] += h * d[i];
        xm[i] -= h * d[i];
    }
    const double fd = (energy(fp, FeFunction::from_interior(mesh, xp)) - energy(fp, FeFunction::from_interior(mesh, xm))) / (2 * h);
    const double rel = std::abs(fd - analytic) / std::abs(analytic);
    return {"fem_energy_gradient", rel < 1e-5, "rel err " + num(rel)};
}

SelfCheck philox_known_answer() {
    const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    const bool ok = out == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
    return {"rng_philox_kat", ok, ok ? "zero block matches" : "zero block differs"};
}

SelfCheck coarsening() {
    const IncrementTable fine =
        sample_increment_table(TimeGrid(1.0, 64), 2, NormalStream(SampleKey{7, 0}));
    double worst = 0.0;
    for (int r : {2, 4, 8, 32}) {
        const IncrementTable a = coarsen_increments(fine, {r});
        const IncrementTable b = coarse_oracle(fine, {r});
        for (int m = 1; m <= a.steps(); ++m) {
            for (int j = 0; j < 2; ++j) {
                worst = std::max({worst, std::abs(a.avg_inc(m, j) - b.avg_inc(m, j)),
                                  std::abs(a.std_inc(m, j) - b.std_inc(m, j))});
            }
        }
    }
    return {"noise_coarsening", worst < 1e-12, "max diff " + num(worst)};
}

SelfCheck linear_step() {
    const Discretization disc = make_discretization(unit_square_mesh(8));
    const FeFunction v0 = l2_project(disc, [](Point2 x) { return std::sin(std::numbers::pi * x.x) * x.y * (1 - x.y); });
    const double tau = 0.05;
    std::vector<double> load(disc.mass.dim(), 1e-3);
    const FeFunction v = implicit_step(FluxParams{2.0, 0.0}, disc, tau, v0, load, NewtonConfig{});
    std::vector<double> rhs = disc.mass * v0.interior_values();
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += load[i];
    const std::vector<double> direct = solve_spd(disc.mass.plus_scaled(tau, disc.stiffness), rhs);
    const std::vector<double> got = v.interior_values();
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - direct[i]));
    return {"schemes_linear_step", worst < 1e-9, "max diff " + num(worst)};
}

SelfCheck eigenvalue() {
    const double mu = 2.0 * std::numbers::pi * std::numbers::pi;
    const double mu_h = min_eigenpair(make_discretization(unit_square_mesh(16))).mu_h;
    return {"fem_eigenvalue", mu_h > mu && mu_h < 1.05 * mu, "mu_h " + num(mu_h)};
}

SelfCheck pythagoras() {
    const auto meshes = mesh_hierarchy(3, 1);
    const FluxParams fp{1.5, 0.0};
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_traj = [&](const MeshPtr& mesh, int steps) {
        Trajectory t{TimeGrid(1.0, steps), {}};
        for (int m = 0; m <= steps; ++m) {
            std::vector<double> x(mesh->num_interior());
            for (double& e : x) e = u(gen);
            t.states.push_back(FeFunction::from_interior(mesh, x));
        }
        return t;
    };
    const Trajectory fine = random_traj(meshes[1], 8);
    const Trajectory coarse = random_traj(meshes[0], 2);
    const DistanceSet d = trajectory_distances(fp, fine, coarse, 4);
    const double rel = std::abs(d.l2v_classic - d.l2v_outer - d.oscillation) / d.l2v_classic;
    return {"errors_pythagoras", rel < 1e-10, "rel defect " + num(rel)};
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
    const std::vector<std::function<SelfCheck()>> checks{flux_jacobian, flux_coercivity, mesh_prolongation,
                                                         energy_gradient, philox_known_answer, coarsening,
                                                         linear_step, eigenvalue, pythagoras};
    std::vector<SelfCheck> out;
    for (const auto& check : checks) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({"exception", false, e.what()});
        }
    }
    return out;
}

}  // namespace plap
