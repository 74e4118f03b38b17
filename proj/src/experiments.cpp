#include "plap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "plap/error.hpp"
#include "plap/errors.hpp"
#include "plap/exact.hpp"
#include "plap/fem.hpp"
#include "plap/mesh.hpp"
#include "plap/noise.hpp"
#include "plap/parallel.hpp"
#include "plap/schemes.hpp"
#include "plap/selftest.hpp"

namespace plap {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", x);
    return buf;
}

double sin_sin(Point2 x) { return std::sin(std::numbers::pi * x.x) * std::sin(std::numbers::pi * x.y); }

CsvRow base_row(const ExperimentConfig& cfg, double p) {
    CsvRow row;
    row.experiment = cfg.experiment;
    row.p = p;
    row.kappa = cfg.kappa;
    row.n_samples = cfg.n_samples;
    row.seed = cfg.master_seed;
    return row;
}

std::vector<IncrementTable> sample_tables(const ExperimentConfig& cfg, const TimeGrid& grid, int modes,
                                          int workers) {
    std::vector<IncrementTable> tables(static_cast<std::size_t>(cfg.n_samples), IncrementTable(grid, modes));
    parallel_for(
        tables.size(),
        [&](std::size_t i) {
            const NormalStream stream(SampleKey{cfg.master_seed, static_cast<std::uint32_t>(i)});
            tables[i] = sample_increment_table(grid, modes, stream);
        },
        workers);
    return tables;
}

}  // namespace

std::vector<CsvRow> run_verify_law(const ExperimentConfig& cfg, int workers) {
    const TimeGrid grid(cfg.T, cfg.M.front());
    const int modes = cfg.noise_model().modes();
    const std::vector<IncrementTable> tables = sample_tables(cfg, grid, modes, workers);
    const double tau = grid.tau();
    const int steps = grid.steps();

    std::vector<CsvRow> rows;
    double max_dev = 0.0;
    auto emit = [&](const std::string& metric, double empirical, double se, double theory) {
        CsvRow row = base_row(cfg, cfg.p.front());
        row.tau_c = row.tau_f = tau;
        row.metric = metric;
        row.scheme = "empirical";
        row.mean = empirical;
        row.stderr_ = se;
        rows.push_back(row);
        row.scheme = "theory";
        row.mean = theory;
        row.stderr_ = 0.0;
        rows.push_back(row);
        if (se > 0.0) max_dev = std::max(max_dev, std::abs(empirical - theory) / se);
    };

    for (int j = 0; j < modes; ++j) {
        const std::string suffix = "_j" + std::to_string(j);
        if (tables.size() == 1) {
            // one sample: the raw products are the only available estimate
            const IncrementTable& t = tables.front();
            for (int m = 1; m <= steps; ++m) {
                for (int l = m; l <= steps; ++l) {
                    emit("cov_avg_" + std::to_string(m) + "_" + std::to_string(l) + suffix,
                         t.avg_inc(m, j) * t.avg_inc(l, j), 0.0, averaged_increment_covariance(tau, m, l));
                }
            }
            continue;
        }
        const CovarianceEstimate est = empirical_covariance(tables, j);
        for (int m = 1; m <= steps; ++m) {
            for (int l = m; l <= steps; ++l) {
                emit("cov_avg_" + std::to_string(m) + "_" + std::to_string(l) + suffix, est.cov(m, l),
                     est.cov_se(m, l), averaged_increment_covariance(tau, m, l));
            }
        }
        for (int m = 1; m <= steps; ++m) {
            emit("cov_std_avg_same_" + std::to_string(m) + suffix, est.std_avg_same[m - 1],
                 est.std_avg_same_se[m - 1], 0.5 * tau);
            if (m < steps) {
                emit("cov_std_avg_next_" + std::to_string(m) + suffix, est.std_avg_next[m - 1],
                     est.std_avg_next_se[m - 1], 0.5 * tau);
            }
        }
    }
    CsvRow summary = base_row(cfg, cfg.p.front());
    summary.tau_c = summary.tau_f = tau;
    summary.scheme = "empirical";
    summary.metric = "max_dev_in_se";
    summary.mean = max_dev;
    rows.push_back(summary);
    return rows;
}

std::vector<CsvRow> run_explicit(const ExperimentConfig& cfg, int workers) {
    const FluxParams flux{2.0, cfg.kappa};
    const NoiseModel noise = cfg.noise_model();
    const MeshPtr mesh = mesh_hierarchy(cfg.mesh_n0, cfg.levels).back();
    const Discretization disc = make_discretization(mesh);
    const EigenPair eig = min_eigenpair(disc);
    ExactParams exact{noise.lambda(), 2.0 * std::numbers::pi * std::numbers::pi, eig.mu_h, eig.u_h, cfg.r_ref};
    exact.validate();

    const int m_max = cfg.M.back();
    const int finest_steps = m_max * cfg.r_ref;
    const TimeGrid finest(cfg.T, finest_steps);
    static const char* kNames[] = {"E_point", "E_aver", "V_point", "V_aver"};

    auto evaluate = [&](SampleKey key) {
        const IncrementTable table = sample_increment_table(finest, 1, NormalStream(key));
        std::vector<double> out;
        for (int steps : cfg.M) {
            const TimeGrid grid(cfg.T, steps);
            const IncrementTable scheme_table = coarsen_increments(table, {finest_steps / steps});
            const ReferencePair refs = build_references(exact, coarsen_increments(table, {m_max / steps}), grid);
            for (SchemeKind kind : kAllSchemes) {
                const Trajectory v = run_scheme(kind, flux, disc, eig.u_h, noise, scheme_table, cfg.newton);
                const DistanceSet point = trajectory_distances(flux, refs.point, v, 1);
                const DistanceSet aver = trajectory_distances(flux, refs.average, v, 1);
                out.insert(out.end(), {point.linf_l2_point, aver.linf_l2_point, point.l2_grad, aver.l2_grad});
            }
        }
        return out;
    };
    const ErrorReport report = monte_carlo(evaluate, cfg.n_samples, cfg.master_seed, workers);

    std::vector<CsvRow> rows;
    std::size_t idx = 0;
    std::map<std::tuple<int, int, int>, CsvRow> ordered;  // (scheme, metric, M)
    for (std::size_t mi = 0; mi < cfg.M.size(); ++mi) {
        for (int s = 0; s < 3; ++s) {
            for (int q = 0; q < 4; ++q) {
                CsvRow row = base_row(cfg, 2.0);
                row.scheme = to_string(kAllSchemes[s]);
                row.metric = kNames[q];
                row.tau_c = cfg.T / cfg.M[mi];
                row.tau_f = row.tau_c / cfg.r_ref;
                row.h_c = row.h_f = mesh->h_max();
                row.mean = report.estimates[idx].mean;
                row.stderr_ = report.estimates[idx].stderr_;
                ++idx;
                ordered.emplace(std::tuple{s, q, static_cast<int>(mi)}, row);
            }
        }
    }
    for (auto& [k, row] : ordered) rows.push_back(std::move(row));
    return rows;
}

std::vector<CsvRow> run_converge(const ExperimentConfig& cfg, int workers) {
    const NoiseModel noise = cfg.noise_model();
    const std::vector<MeshPtr> meshes = mesh_hierarchy(cfg.mesh_n0, cfg.levels);
    std::vector<Discretization> discs;
    std::vector<FeFunction> u0;
    for (const MeshPtr& m : meshes) {
        discs.push_back(make_discretization(m));
        u0.push_back(l2_project(discs.back(), sin_sin));
    }
    const Discretization& fine_disc = discs.back();
    const FeFunction& fine_u0 = u0.back();
    const TimeGrid fine_grid(cfg.T, cfg.M_f);
    const std::size_t cells = cfg.M_c.size();

    std::vector<CsvRow> rows;
    for (double p : cfg.p) {
        const FluxParams flux{p, cfg.kappa};
        auto evaluate = [&](SampleKey key) {
            const IncrementTable table = sample_increment_table(fine_grid, noise.modes(), NormalStream(key));
            std::vector<double> out;
            for (SchemeKind kind : kAllSchemes) {
                const Trajectory fine = run_scheme(kind, flux, fine_disc, fine_u0, noise, table, cfg.newton);
                for (std::size_t c = 0; c < cells; ++c) {
                    const int r = cfg.M_f / cfg.M_c[c];
                    const Trajectory coarse = run_scheme(kind, flux, discs[c], u0[c], noise,
                                                         coarsen_increments(table, {r}), cfg.newton);
                    const DistanceSet d = trajectory_distances(flux, fine, coarse, r);
                    for (MetricKind metric : kCoarseFineMetrics) out.push_back(d.get(metric));
                }
            }
            return out;
        };
        const ErrorReport report = monte_carlo(evaluate, cfg.n_samples, cfg.master_seed, workers);

        std::size_t idx = 0;
        std::vector<CsvRow> block;
        for (SchemeKind kind : kAllSchemes) {
            for (std::size_t c = 0; c < cells; ++c) {
                for (MetricKind metric : kCoarseFineMetrics) {
                    CsvRow row = base_row(cfg, p);
                    row.scheme = to_string(kind);
                    row.metric = to_string(metric);
                    row.tau_c = cfg.T / cfg.M_c[c];
                    row.h_c = meshes[c]->h_max();
                    row.tau_f = fine_grid.tau();
                    row.h_f = fine_disc.mesh->h_max();
                    row.mean = report.estimates[idx].mean;
                    row.stderr_ = report.estimates[idx].stderr_;
                    ++idx;
                    block.push_back(row);
                }
            }
        }
        // group by (scheme, metric) with cells ascending
        for (std::size_t s = 0; s < 3; ++s) {
            for (std::size_t q = 0; q < kCoarseFineMetrics.size(); ++q) {
                for (std::size_t c = 0; c < cells; ++c) {
                    rows.push_back(block[(s * cells + c) * kCoarseFineMetrics.size() + q]);
                }
            }
        }
    }
    return rows;
}

std::string sample_noise_csv(const ExperimentConfig& cfg) {
    const TimeGrid grid(cfg.T, cfg.M.front());
    const int modes = cfg.noise_model().modes();
    std::ostringstream os;
    os << "sample,m,j,std,avg\n";
    for (int s = 0; s < cfg.n_samples; ++s) {
        const IncrementTable t =
            sample_increment_table(grid, modes, NormalStream(SampleKey{cfg.master_seed, static_cast<std::uint32_t>(s)}));
        for (int m = 1; m <= grid.steps(); ++m) {
            for (int j = 0; j < modes; ++j) {
                os << s << ',' << m << ',' << j << ',' << fmt(t.std_inc(m, j)) << ',' << fmt(t.avg_inc(m, j)) << '\n';
            }
        }
    }
    return os.str();
}

std::string csv_header() {
    return "experiment,scheme,metric,p,kappa,tau_c,h_c,tau_f,h_f,n_samples,mean,stderr,seed\n";
}

std::string to_csv(const std::vector<CsvRow>& rows) {
    std::ostringstream os;
    os << csv_header();
    for (const CsvRow& r : rows) {
        os << r.experiment << ',' << r.scheme << ',' << r.metric << ',' << fmt(r.p) << ',' << fmt(r.kappa) << ','
           << fmt(r.tau_c) << ',' << fmt(r.h_c) << ',' << fmt(r.tau_f) << ',' << fmt(r.h_f) << ',' << r.n_samples
           << ',' << fmt(r.mean) << ',' << fmt(r.stderr_) << ',' << r.seed << '\n';
    }
    return os.str();
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int workers) {
    cfg.validate();
    ExperimentOutput out;
    if (cfg.experiment == "sample-noise") {
        out.csv = sample_noise_csv(cfg);
        return out;
    }
    if (cfg.experiment == "verify-law") {
        out.rows = run_verify_law(cfg, workers);
    } else if (cfg.experiment == "explicit") {
        out.rows = run_explicit(cfg, workers);
    } else if (cfg.experiment == "converge") {
        out.rows = run_converge(cfg, workers);
    } else {
        for (const SelfCheck& check : run_selftest()) {
            CsvRow row = base_row(cfg, 0.0);
            row.scheme = "-";
            row.metric = check.name;
            row.n_samples = 1;
            row.mean = check.passed ? 1.0 : 0.0;
            out.rows.push_back(row);
            if (!check.passed) out.status = 1;
        }
    }
    out.csv = to_csv(out.rows);
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string gnuplot_script(const std::vector<CsvRow>& rows, const std::string& csv_name) {
    std::map<std::string, std::vector<std::string>> series;  // metric -> schemes (first-seen order)
    std::vector<std::string> metrics;
    for (const CsvRow& r : rows) {
        if (!series.count(r.metric)) metrics.push_back(r.metric);
        auto& schemes = series[r.metric];
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) schemes.push_back(r.scheme);
    }
    std::ostringstream os;
    os << "set datafile separator ','\nset logscale xy\nset key left top\nset xlabel 'tau_c'\n"
       << "set terminal pngcairo size 800,600\n";
    for (const std::string& metric : metrics) {
        os << "set output '" << metric << ".png'\nset ylabel '" << metric << "'\nplot ";
        const auto& schemes = series[metric];
        for (std::size_t i = 0; i < schemes.size(); ++i) {
            if (i) os << ", ";
            os << "'" << csv_name << "' using (strcol(3) eq '" << metric << "' && strcol(2) eq '" << schemes[i]
               << "' ? $6 : 1/0):11 with linespoints title '" << schemes[i] << "'";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace plap
