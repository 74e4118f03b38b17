#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plap/config.hpp"

namespace plap {

struct CsvRow {
    std::string experiment;
    std::string scheme;
    std::string metric;
    double p = 0.0;
    double kappa = 0.0;
    double tau_c = 0.0;
    double h_c = 0.0;
    double tau_f = 0.0;
    double h_f = 0.0;
    int n_samples = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t seed = 0;
};

struct ExperimentOutput {
    std::vector<CsvRow> rows;
    /// Full CSV text including the header.
    std::string csv;
    /// 0 on success; selftest reports failed checks through it.
    int status = 0;
};

/// Empirical against closed-form covariances of sampled increment tables.
std::vector<CsvRow> run_verify_law(const ExperimentConfig& cfg, int workers = 0);
/// Linear equation with known solution: schemes against point and averaged references.
std::vector<CsvRow> run_explicit(const ExperimentConfig& cfg, int workers = 0);
/// Nonlinear equation: coarse cells against the fine run of the same scheme.
std::vector<CsvRow> run_converge(const ExperimentConfig& cfg, int workers = 0);
/// Raw increment tables as CSV (sample, m, j, std, avg).
std::string sample_noise_csv(const ExperimentConfig& cfg);

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int workers = 0);

std::string csv_header();
std::string to_csv(const std::vector<CsvRow>& rows);

/// Writes to a sibling temporary file first, then renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Gnuplot commands drawing every (scheme, metric) series of `csv_name`
/// against tau_c on log-log axes.
std::string gnuplot_script(const std::vector<CsvRow>& rows, const std::string& csv_name);

}  // namespace plap
