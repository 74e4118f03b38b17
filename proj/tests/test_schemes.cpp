#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plap/error.hpp"
#include "plap/schemes.hpp"

using namespace plap;

namespace {

const double kPi = std::acos(-1.0);

IncrementTable zero_table(double T, int steps, int modes) { return IncrementTable(TimeGrid(T, steps), modes); }

IncrementTable sampled(double T, int steps, int modes, std::uint32_t index) {
    return sample_increment_table(TimeGrid(T, steps), modes, NormalStream({77, index}));
}

}  // namespace

TEST(SchemeKind, Names) {
    for (SchemeKind k : kAllSchemes) EXPECT_EQ(scheme_from_string(to_string(k)), k);
    EXPECT_THROW((void)scheme_from_string("CN"), std::invalid_argument);
}

TEST(NewtonConfig, Validation) {
    EXPECT_NO_THROW(NewtonConfig{}.validate());
    NewtonConfig bad;
    bad.abs_tol = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = {};
    bad.backtrack = 1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(ImplicitStep, TrivialCases) {
    const Discretization disc = make_discretization(unit_square_mesh(5));
    std::mt19937_64 gen(1);
    const FeFunction prev = FeFunction::from_interior(disc.mesh, oracle::random_vector(disc.mesh->num_interior(), gen));
    const std::vector<double> load = oracle::random_vector(disc.mesh->num_interior(), gen);

    const FeFunction v0 = implicit_step({3.0, 0.0}, disc, 0.0, prev, load, {});
    std::vector<double> want = solve_spd(disc.mass, load);
    for (std::size_t i = 0; i < want.size(); ++i) want[i] += prev.interior_values()[i];
    EXPECT_LT(oracle::max_abs_diff(v0.interior_values(), want), 1e-10);

    const std::vector<double> zero(disc.mesh->num_interior(), 0.0);
    const FeFunction z = implicit_step({1.5, 0.0}, disc, 0.1, FeFunction(disc.mesh), zero, {});
    for (double c : z.coefficients()) EXPECT_EQ(c, 0.0);

    EXPECT_THROW((void)implicit_step({2.0, 0.0}, disc, 0.1, prev, std::vector<double>(3), {}), ShapeError);
    EXPECT_THROW((void)implicit_step({2.0, 0.0}, disc, 0.1, FeFunction(unit_square_mesh(5)), load, {}),
                 MeshMismatchError);
}

TEST(ImplicitStep, LinearCaseMatchesDirectSolve) {
    const Discretization disc = make_discretization(unit_square_mesh(8));
    std::mt19937_64 gen(2);
    const FeFunction prev = FeFunction::from_interior(disc.mesh, oracle::random_vector(disc.mesh->num_interior(), gen));
    const std::vector<double> load = oracle::random_vector(disc.mesh->num_interior(), gen, -0.01, 0.01);
    const double tau = 0.05;
    const FeFunction v = implicit_step({2.0, 0.0}, disc, tau, prev, load, {});
    std::vector<double> rhs = disc.mass * prev.interior_values();
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += load[i];
    const std::vector<double> want =
        oracle::dense_solve(oracle::to_dense(disc.mass.plus_scaled(tau, disc.stiffness)), rhs);
    EXPECT_LT(oracle::max_abs_diff(v.interior_values(), want), 1e-9);
}

TEST(ImplicitStep, NonlinearResidualAndMonotoneObjective) {
    const Discretization disc = make_discretization(unit_square_mesh(8));
    std::mt19937_64 gen(3);
    for (const FluxParams params : {FluxParams{1.5, 0.0}, FluxParams{3.0, 0.0}, FluxParams{1.5, 1.0}}) {
        const FeFunction prev = FeFunction::from_interior(disc.mesh, oracle::random_vector(disc.mesh->num_interior(), gen));
        const std::vector<double> load = oracle::random_vector(disc.mesh->num_interior(), gen, -0.01, 0.01);
        const double tau = 0.02;
        NewtonTrace trace;
        const NewtonConfig cfg;
        const FeFunction v = implicit_step(params, disc, tau, prev, load, cfg, &trace);

        const std::vector<double> mv = disc.mass * v.interior_values();
        const std::vector<double> mp = disc.mass * prev.interior_values();
        const std::vector<double> pr = p_laplace_residual(params, v);
        std::vector<double> res(mv.size());
        for (std::size_t i = 0; i < res.size(); ++i) res[i] = mv[i] - mp[i] + tau * pr[i] - load[i];
        EXPECT_LE(norm2(res), cfg.abs_tol + cfg.rel_tol * (norm2(mp) + norm2(load))) << "p=" << params.p;
        for (std::size_t k = 1; k < trace.objective.size(); ++k) EXPECT_LE(trace.objective[k], trace.objective[k - 1]);
    }
}

TEST(ImplicitStep, SmoothCaseConvergesSuperlinearly) {
    const Discretization disc = make_discretization(unit_square_mesh(8));
    std::mt19937_64 gen(4);
    const FeFunction prev = FeFunction::from_interior(disc.mesh, oracle::random_vector(disc.mesh->num_interior(), gen));
    const std::vector<double> load(disc.mesh->num_interior(), 0.0);
    NewtonConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-13;
    NewtonTrace trace;
    (void)implicit_step({3.0, 1.0}, disc, 0.05, prev, load, cfg, &trace);
    const auto& inc = trace.increment_norm;
    ASSERT_GE(inc.size(), 2u);
    const double last = inc[inc.size() - 1], before = inc[inc.size() - 2];
    if (before < 1.0) EXPECT_LT(last, std::pow(before, 1.5));
}

TEST(RunScheme, ZeroNoiseScalarRecursion) {
    const Discretization disc = make_discretization(unit_square_mesh(8));
    const EigenPair eig = min_eigenpair(disc);
    const double T = 0.5;
    const int steps = 10;
    const double tau = T / steps;
    const IncrementTable table = zero_table(T, steps, 1);
    const NoiseModel noise = NoiseModel::linear(1.0);
    for (SchemeKind kind : kAllSchemes) {
        const Trajectory traj = run_scheme(kind, {2.0, 0.0}, disc, eig.u_h, noise, table, {});
        double factor = 1.0;
        for (int m = 1; m <= steps; ++m) {
            const double step_tau = (m == 1 && kind == SchemeKind::AvgHalf) ? tau / 2 : tau;
            factor /= 1.0 + step_tau * eig.mu_h;
            std::vector<double> want = eig.u_h.coefficients();
            for (double& c : want) c *= factor;
            EXPECT_LT(oracle::max_abs_diff(traj[m].coefficients(), want), 1e-8) << to_string(kind) << " m=" << m;
        }
    }
}

TEST(RunScheme, LinearTrajectoryMatchesRecursion) {
    const Discretization disc = make_discretization(unit_square_mesh(6));
    const FeFunction u0 = l2_project(disc, [](Point2 x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); });
    const IncrementTable table = sampled(1.0, 8, 1, 0);
    const NoiseModel noise = NoiseModel::linear(1.0);
    const double tau = table.grid().tau();
    const SparseSpd lhs = disc.mass.plus_scaled(tau, disc.stiffness);
    const SparseSpd lhs_half = disc.mass.plus_scaled(tau / 2, disc.stiffness);
    for (SchemeKind kind : kAllSchemes) {
        const Trajectory traj = run_scheme(kind, {2.0, 0.0}, disc, u0, noise, table, {});
        std::vector<std::vector<double>> x{u0.interior_values()};
        for (int m = 1; m <= 8; ++m) {
            const bool em = kind == SchemeKind::EM;
            const std::vector<double>& coef = em ? x[m - 1] : x[m >= 2 ? m - 2 : 0];
            const double w = em ? table.std_inc(m, 0) : table.avg_inc(m, 0);
            std::vector<double> rhs = disc.mass * x[m - 1];
            const std::vector<double> mc = disc.mass * coef;
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += w * mc[i];
            const bool half = m == 1 && kind == SchemeKind::AvgHalf;
            x.push_back(oracle::dense_solve(oracle::to_dense(half ? lhs_half : lhs), rhs));
            EXPECT_LT(oracle::max_abs_diff(traj[m].interior_values(), x.back()), 1e-8) << to_string(kind);
        }
    }
}

TEST(RunScheme, Adaptedness) {
    const Discretization disc = make_discretization(unit_square_mesh(5));
    const FeFunction u0 = l2_project(disc, [](Point2 x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); });
    const IncrementTable a = sampled(1.0, 8, 2, 1);
    IncrementTable b = a;
    const IncrementTable other = sampled(1.0, 8, 2, 2);
    const int cut = 4;
    for (int m = cut + 1; m <= 8; ++m) {
        for (int j = 0; j < 2; ++j) {
            b.std_inc(m, j) = other.std_inc(m, j);
            b.avg_inc(m, j) = other.avg_inc(m, j);
        }
    }
    for (SchemeKind kind : kAllSchemes) {
        const Trajectory ta = run_scheme(kind, {3.0, 0.0}, disc, u0, NoiseModel::trace(), a, {});
        const Trajectory tb = run_scheme(kind, {3.0, 0.0}, disc, u0, NoiseModel::trace(), b, {});
        for (int m = 0; m <= cut; ++m) EXPECT_EQ(ta[m].coefficients(), tb[m].coefficients());
        EXPECT_NE(ta[8].coefficients(), tb[8].coefficients());
    }
}

TEST(RunScheme, ZeroNoiseEnergyStability) {
    const Discretization disc = make_discretization(unit_square_mesh(8));
    const FeFunction u0 = l2_project(disc, [](Point2 x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); });
    const IncrementTable table = zero_table(0.5, 20, 2);
    for (double p : {1.5, 3.0}) {
        const FluxParams params{p, 0.0};
        const Trajectory traj = run_scheme(SchemeKind::AvgFull, params, disc, u0, NoiseModel::trace(), table, {});
        const double tau = table.grid().tau();
        for (int m = 1; m <= 20; ++m) {
            const double jm = energy(params, traj[m]);
            const double jp = energy(params, traj[m - 1]);
            const double jump = norms(traj[m], traj[m - 1]).l2_dist_sq;
            EXPECT_LE(jm, jp + 1e-12);
            EXPECT_LE(jm + jump / (2 * tau), jp * (1 + 1e-10) + 1e-14) << "p=" << p << " m=" << m;
        }
    }
}

TEST(RunScheme, HalfAndFullDifferOnlyInFirstStep) {
    const Discretization disc = make_discretization(unit_square_mesh(5));
    const FeFunction u0 = l2_project(disc, [](Point2 x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); });
    const IncrementTable table = sampled(0.3, 1, 2, 3);
    const Trajectory half = run_scheme(SchemeKind::AvgHalf, {1.5, 0.0}, disc, u0, NoiseModel::trace(), table, {});
    const Trajectory full = run_scheme(SchemeKind::AvgFull, {1.5, 0.0}, disc, u0, NoiseModel::trace(), table, {});
    const std::vector<double> load = noise_load_vector(*disc.mesh, NoiseModel::trace(), u0, table.avg_row(1));
    const double tau = table.grid().tau();
    EXPECT_EQ(half[1].coefficients(), implicit_step({1.5, 0.0}, disc, tau / 2, u0, load, {}).coefficients());
    EXPECT_EQ(full[1].coefficients(), implicit_step({1.5, 0.0}, disc, tau, u0, load, {}).coefficients());
}

TEST(RunScheme, RejectsMismatchedInputs) {
    const Discretization disc = make_discretization(unit_square_mesh(4));
    const FeFunction u0(disc.mesh);
    EXPECT_THROW((void)run_scheme(SchemeKind::EM, {2.0, 0.0}, disc, u0, NoiseModel::trace(), zero_table(1.0, 2, 1), {}),
                 ShapeError);
    EXPECT_THROW((void)run_scheme(SchemeKind::EM, {2.0, 0.0}, disc, FeFunction(unit_square_mesh(4)),
                                  NoiseModel::linear(1.0), zero_table(1.0, 2, 1), {}),
                 MeshMismatchError);
}
