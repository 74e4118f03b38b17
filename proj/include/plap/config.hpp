#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plap/noise.hpp"
#include "plap/schemes.hpp"

namespace plap {

enum class Coupling { TauH, TauH2 };

struct ExperimentConfig {
    std::string experiment;  ///< verify-law | explicit | converge | sample-noise | selftest
    std::vector<double> p{2.0};
    double kappa = 0.0;
    /// "trace" or "linear <lambda>"
    std::string noise = "linear 1";
    double T = 1.0;
    int mesh_n0 = 10;
    int levels = 0;
    std::vector<int> M{5};
    int M_f = 256;
    std::vector<int> M_c{32, 64, 128};
    Coupling coupling = Coupling::TauH;
    int r_ref = 10;
    int n_samples = 20;
    std::uint64_t master_seed = 0;
    NewtonConfig newton;
    std::string output;

    NoiseModel noise_model() const;
    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment; lists are comma or
/// whitespace separated. Unknown or repeated keys are rejected. The
/// experiment key may be omitted when a default is given.
ExperimentConfig parse_config(const std::string& text, const std::string& default_experiment = {});
ExperimentConfig load_config(const std::string& path, const std::string& default_experiment = {});

std::string to_string(Coupling c);

}  // namespace plap
