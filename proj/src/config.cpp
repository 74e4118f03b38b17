#include "plap/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "plap/error.hpp"

namespace plap {

namespace {

const std::set<std::string> kExperiments{"verify-law", "explicit", "converge", "sample-noise", "selftest"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::string s = value;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

template <class T>
T parse_number(const std::string& tok, int line, const std::string& key) {
    T value{};
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError("bad value '" + tok + "' for " + key, line, key);
    return value;
}

template <class T>
T parse_scalar(const std::string& value, int line, const std::string& key) {
    const auto toks = split_list(value);
    if (toks.size() != 1) throw ConfigError(key + " takes a single value", line, key);
    return parse_number<T>(toks.front(), line, key);
}

template <class T>
std::vector<T> parse_vector(const std::string& value, int line, const std::string& key) {
    std::vector<T> out;
    for (const auto& tok : split_list(value)) out.push_back(parse_number<T>(tok, line, key));
    if (out.empty()) throw ConfigError(key + " needs at least one value", line, key);
    return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key + ": " + what, 0, key);
}

bool ascending(const std::vector<int>& v) { return std::is_sorted(v.begin(), v.end()) && std::adjacent_find(v.begin(), v.end()) == v.end(); }

}  // namespace

std::string to_string(Coupling c) { return c == Coupling::TauH ? "tau~h" : "tau~h2"; }

NoiseModel ExperimentConfig::noise_model() const {
    const auto toks = split_list(noise);
    if (toks.size() == 1 && toks[0] == "trace") return NoiseModel::trace();
    if (toks.size() == 2 && toks[0] == "linear") return NoiseModel::linear(parse_number<double>(toks[1], 0, "noise"));
    throw ConfigError("noise must be 'trace' or 'linear <lambda>'", 0, "noise");
}

void ExperimentConfig::validate() const {
    require(kExperiments.count(experiment) == 1, "experiment", "unknown experiment '" + experiment + "'");
    require(!p.empty(), "p", "missing");
    for (double q : p) require(q > 1.0, "p", "must be > 1");
    require(kappa >= 0.0, "kappa", "must be >= 0");
    (void)noise_model();
    require(T > 0.0, "T", "must be positive");
    require(mesh_n0 >= 1, "mesh_n0", "must be positive");
    require(levels >= 0, "levels", "must be >= 0");
    require(!M.empty() && M.front() >= 1 && ascending(M), "M", "must be positive and strictly ascending");
    require(M_f >= 1, "M_f", "must be positive");
    require(!M_c.empty() && M_c.front() >= 1 && ascending(M_c), "M_c", "must be positive and strictly ascending");
    for (int m : M_c) require(M_f % m == 0, "M_c", std::to_string(m) + " does not divide M_f = " + std::to_string(M_f));
    require(r_ref >= 1, "r_ref", "must be positive");
    require(n_samples >= 1, "n_samples", "must be positive");
    require(newton.abs_tol > 0.0, "newton_abs_tol", "must be positive");
    require(newton.rel_tol > 0.0, "newton_rel_tol", "must be positive");
    require(newton.max_iter >= 1, "newton_max_iter", "must be positive");

    if (experiment == "explicit") {
        require(p.size() == 1 && p.front() == 2.0, "p", "explicit experiment needs p = 2");
        require(noise_model().kind() == NoiseModel::Kind::Linear, "noise", "explicit experiment needs linear noise");
        for (int m : M) require(M.back() % m == 0, "M", "every M must divide the largest");
    }
    if (experiment == "converge") {
        require(M_c.size() <= static_cast<std::size_t>(levels) + 1, "M_c",
                "needs one mesh level per coarse step count (levels + 1 >= " + std::to_string(M_c.size()) + ")");
        require(M_c.back() <= M_f, "M_c", "coarse steps exceed M_f");
        const int factor = coupling == Coupling::TauH ? 2 : 4;
        for (std::size_t i = 1; i < M_c.size(); ++i) {
            require(M_c[i] == factor * M_c[i - 1], "coupling",
                    "consecutive M_c must differ by " + std::to_string(factor) + " under " + to_string(coupling));
        }
    }
}

ExperimentConfig parse_config(const std::string& text, const std::string& default_experiment) {
    ExperimentConfig cfg;
    cfg.experiment = default_experiment;
    std::set<std::string> seen;
    std::istringstream is(text);
    int line_no = 0;
    for (std::string raw; std::getline(is, raw);) {
        ++line_no;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("missing value for " + key, line_no, key);
        if (!seen.insert(key).second) throw ConfigError("duplicate key " + key, line_no, key);

        if (key == "experiment") cfg.experiment = value;
        else if (key == "p") cfg.p = parse_vector<double>(value, line_no, key);
        else if (key == "kappa") cfg.kappa = parse_scalar<double>(value, line_no, key);
        else if (key == "noise") cfg.noise = value;
        else if (key == "T") cfg.T = parse_scalar<double>(value, line_no, key);
        else if (key == "mesh_n0") cfg.mesh_n0 = parse_scalar<int>(value, line_no, key);
        else if (key == "levels") cfg.levels = parse_scalar<int>(value, line_no, key);
        else if (key == "M") cfg.M = parse_vector<int>(value, line_no, key);
        else if (key == "M_f") cfg.M_f = parse_scalar<int>(value, line_no, key);
        else if (key == "M_c") cfg.M_c = parse_vector<int>(value, line_no, key);
        else if (key == "coupling") {
            if (value == "tau~h") cfg.coupling = Coupling::TauH;
            else if (value == "tau~h2") cfg.coupling = Coupling::TauH2;
            else throw ConfigError("coupling must be tau~h or tau~h2", line_no, key);
        }
        else if (key == "r_ref") cfg.r_ref = parse_scalar<int>(value, line_no, key);
        else if (key == "n_samples") cfg.n_samples = parse_scalar<int>(value, line_no, key);
        else if (key == "master_seed") cfg.master_seed = parse_scalar<std::uint64_t>(value, line_no, key);
        else if (key == "newton_abs_tol") cfg.newton.abs_tol = parse_scalar<double>(value, line_no, key);
        else if (key == "newton_rel_tol") cfg.newton.rel_tol = parse_scalar<double>(value, line_no, key);
        else if (key == "newton_max_iter") cfg.newton.max_iter = parse_scalar<int>(value, line_no, key);
        else if (key == "output") cfg.output = value;
        else throw ConfigError("unknown key " + key, line_no, key);
    }
    if (cfg.experiment.empty()) throw ConfigError("experiment is required", 0, "experiment");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& default_experiment) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), default_experiment);
}

}  // namespace plap
