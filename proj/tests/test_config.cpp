#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plap/config.hpp"
#include "plap/error.hpp"
#include "plap/experiments.hpp"

using namespace plap;

namespace {

ConfigError config_error(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << text;
    return ConfigError("none");
}

}  // namespace

TEST(ParseConfig, Defaults) {
    const ExperimentConfig cfg = parse_config("experiment = selftest\n");
    EXPECT_EQ(cfg.experiment, "selftest");
    EXPECT_EQ(cfg.T, 1.0);
    EXPECT_EQ(cfg.kappa, 0.0);
    EXPECT_EQ(cfg.r_ref, 10);
    EXPECT_EQ(cfg.n_samples, 20);
    EXPECT_EQ(cfg.newton.abs_tol, NewtonConfig{}.abs_tol);
    EXPECT_EQ(cfg.newton.max_iter, NewtonConfig{}.max_iter);
    EXPECT_EQ(parse_config("", "selftest").experiment, "selftest");
}

TEST(ParseConfig, FullScaleSetup) {
    const ExperimentConfig cfg = parse_config(
        "experiment = converge   # nonlinear\n"
        "p = 1.5, 3\n"
        "noise = trace\n"
        "n_samples = 20\n"
        "levels = 3\n"
        "M_f = 1280\n"
        "M_c = 40 80 160 320\n");
    EXPECT_EQ(cfg.p, (std::vector<double>{1.5, 3.0}));
    EXPECT_EQ(cfg.noise_model().kind(), NoiseModel::Kind::Trace);
    EXPECT_EQ(cfg.n_samples, 20);
    EXPECT_EQ(cfg.M_c, (std::vector<int>{40, 80, 160, 320}));
}

TEST(ParseConfig, Errors) {
    ConfigError e = config_error("experiment = converge\nM_f = 1280\nM_c = 7\n");
    EXPECT_EQ(e.key(), "M_c");

    e = config_error("experiment = selftest\n\nbogus = 1\n");
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.key(), "bogus");

    e = config_error("experiment = selftest\np = 2\np = 3\n");
    EXPECT_EQ(e.line(), 3);

    e = config_error("experiment = selftest\nn_samples = many\n");
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.key(), "n_samples");

    EXPECT_EQ(config_error("experiment = selftest\nkappa = -1\n").key(), "kappa");
    EXPECT_EQ(config_error("experiment = selftest\nnoise = cubic\n").key(), "noise");
    EXPECT_EQ(config_error("experiment = selftest\nM = 8, 4\n").key(), "M");
    EXPECT_EQ(config_error("experiment = explicit\np = 3\n").key(), "p");
    EXPECT_EQ(config_error("experiment = explicit\nM = 16, 24\n").key(), "M");
    EXPECT_EQ(config_error("experiment = converge\nlevels = 2\nM_c = 32, 128\n").key(), "coupling");
    EXPECT_EQ(config_error("experiment = dance\n").key(), "experiment");
    EXPECT_EQ(config_error("p = 2\n").key(), "experiment");
    EXPECT_EQ(config_error("experiment selftest\n").line(), 1);
}

TEST(LoadConfig, ShippedConfigsAreValid) {
    for (const auto& entry : std::filesystem::directory_iterator(PLAP_CONFIG_DIR)) {
        EXPECT_NO_THROW((void)load_config(entry.path().string())) << entry.path();
    }
    EXPECT_THROW((void)load_config("/nonexistent/plap.cfg"), Error);
}

TEST(Csv, HeaderAndFormat) {
    EXPECT_EQ(csv_header(), "experiment,scheme,metric,p,kappa,tau_c,h_c,tau_f,h_f,n_samples,mean,stderr,seed\n");
    CsvRow row{"explicit", "EM", "E_point", 2.0, 0.0, 1.0 / 3, 0.1, 0.01, 0.1, 20, 1.234567890123456e-3, 0.0, 7};
    const std::string csv = to_csv({row});
    std::istringstream is(csv);
    std::string header, line;
    std::getline(is, header);
    std::getline(is, line);
    EXPECT_EQ(header + "\n", csv_header());
    EXPECT_NE(line.find("3.333333333333333e-01"), std::string::npos) << line;
    EXPECT_NE(line.find(",20,"), std::string::npos);
}

TEST(WriteFileAtomic, ReplacesContent) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "plap_atomic_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.csv").string();
    write_file_atomic(path, "old\n");
    write_file_atomic(path, "new\n");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "new\n");
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove_all(dir);
}

TEST(Experiments, SingleSampleRunsReportZeroStderr) {
    ExperimentConfig cfg = parse_config("experiment = explicit\nM = 2, 4\nmesh_n0 = 4\nn_samples = 1\n");
    const ExperimentOutput out = run_experiment(cfg, 1);
    EXPECT_EQ(out.status, 0);
    EXPECT_EQ(out.rows.size(), 3u * 4u * 2u);
    for (const CsvRow& r : out.rows) {
        EXPECT_EQ(r.stderr_, 0.0);
        EXPECT_GE(r.mean, 0.0);
    }

    cfg = parse_config("experiment = converge\np = 3\nnoise = trace\nmesh_n0 = 3\nlevels = 1\nM_f = 8\nM_c = 2, 4\nn_samples = 1\n");
    const ExperimentOutput conv = run_experiment(cfg, 1);
    EXPECT_EQ(conv.rows.size(), 3u * 5u * 2u);
    for (const CsvRow& r : conv.rows) EXPECT_EQ(r.stderr_, 0.0);
}

TEST(Experiments, VerifyLawSmallRun) {
    const ExperimentConfig cfg = parse_config("experiment = verify-law\nT = 0.3\nM = 3\nn_samples = 2000\n");
    const std::vector<CsvRow> rows = run_verify_law(cfg, 1);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows.back().metric, "max_dev_in_se");
    EXPECT_LT(rows.back().mean, 5.0);
}

TEST(Experiments, SampleNoiseCsv) {
    const ExperimentConfig cfg = parse_config("experiment = sample-noise\nM = 4\nnoise = trace\nn_samples = 2\n");
    const std::string csv = sample_noise_csv(cfg);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "sample,m,j,std,avg");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 2 * 4 * 2);
    EXPECT_EQ(csv, sample_noise_csv(cfg));
}

TEST(Experiments, GnuplotScriptNamesSeries) {
    CsvRow row{"explicit", "HALF", "E_aver", 2.0, 0.0, 0.1, 0.1, 0.01, 0.1, 20, 1.0, 0.1, 7};
    const std::string gp = gnuplot_script({row}, "explicit.csv");
    EXPECT_NE(gp.find("explicit.csv"), std::string::npos);
    EXPECT_NE(gp.find("HALF"), std::string::npos);
    EXPECT_NE(gp.find("logscale"), std::string::npos);
}
