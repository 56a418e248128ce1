#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rgpucb/harness.hpp"

using namespace rgpucb;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("rgpucb_test_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

RunConfig tiny_config() {
    RunConfig config;
    config.problem = "sphere";
    config.methods = {"rgp-ucb"};
    config.theta = 1.0;
    config.iterations = 6;
    config.initial_points = 5;
    config.repeats = 2;
    config.seed = 7;
    return config;
}

}  // namespace

TEST_CASE("config text parses keys, comments and blank lines") {
    const std::string text =
        "# benchmark setup\n"
        "problem = dropwave\n"
        "method = rgp-ucb, ei\n"
        "\n"
        "theta = 8\n"
        "iterations = 20   # short run\n"
        "seed = 99\n";
    const RunConfig config = parse_config_text(text, "cfg");
    CHECK(config.problem == "dropwave");
    CHECK(config.methods == std::vector<std::string>{"rgp-ucb", "ei"});
    CHECK(config.theta == 8.0);
    CHECK(config.iterations == 20);
    CHECK(config.seed == 99);
}

TEST_CASE("config errors carry file and line context") {
    CHECK_THROWS_WITH_AS(parse_config_text("wibble = 3\n", "cfg"),
                         doctest::Contains("cfg:1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("problem = sphere\ntheta == 2\n", "cfg"),
                         doctest::Contains("cfg:2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("theta = abc\n", "cfg"),
                         doctest::Contains("abc"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("no_equals_here\n", "cfg"),
                         doctest::Contains("key = value"), ConfigError);
}

TEST_CASE("validation names the offending key") {
    RunConfig config = tiny_config();
    config.theta = -1.0;
    CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("theta"), ConfigError);

    config = tiny_config();
    config.problem = "unknown";
    CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("problem"), ConfigError);

    config = tiny_config();
    config.methods = {"sgd"};
    CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("method"), ConfigError);

    config = tiny_config();
    config.repeats = 0;
    CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("repeats"), ConfigError);
}

TEST_CASE("overrides reuse the config key parser") {
    RunConfig config = tiny_config();
    apply_override(config, "theta=2.5");
    CHECK(config.theta == 2.5);
    apply_override(config, "method=ei");
    CHECK(config.methods == std::vector<std::string>{"ei"});
    CHECK_THROWS_AS(apply_override(config, "theta"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_override(config, "zeta=1"), doctest::Contains("zeta"),
                         ConfigError);
}

TEST_CASE("format_g17 round-trips doubles at full precision") {
    RngStream rng(1);
    for (int i = 0; i < 100000; ++i) {
        double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        const double back = std::stod(format_g17(v));
        CHECK(back == v);
    }
    CHECK(std::stod(format_g17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("run_experiments writes the three outputs deterministically") {
    const RunConfig config = tiny_config();
    TempDir dir_a("run_a");
    TempDir dir_b("run_b");

    const auto out_a = run_experiments(config, dir_a.str(), 1);
    const auto out_b = run_experiments(config, dir_b.str(), 4);

    CHECK(fs::exists(out_a.trace_path));
    CHECK(fs::exists(out_a.aggregate_path));
    CHECK(fs::exists(out_a.manifest_path));

    // byte-identical regardless of the worker count
    CHECK(read_file(out_a.trace_path) == read_file(out_b.trace_path));
    CHECK(read_file(out_a.aggregate_path) == read_file(out_b.aggregate_path));

    const std::string header = read_file(out_a.trace_path).substr(0, 200);
    CHECK(header.rfind("problem,method,theta,repeat,iteration,best_so_far,y,beta,kappa,"
                       "sigma_at_choice,x0,x1,x2,x3",
                       0) == 0);
}

TEST_CASE("trace CSV cells round-trip to the in-memory records") {
    const RunConfig config = tiny_config();
    TempDir dir("roundtrip");
    run_experiments(config, dir.str(), 1);

    const ExperimentConfig ec = make_experiment_config(config, "rgp-ucb");
    const auto records = bo_loop(ec, 0);

    std::ifstream in(dir.path / "traces.csv");
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);  // first record of repeat 0
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    REQUIRE(cells.size() == 14);
    CHECK(std::stod(cells[5]) == records[0].best_so_far);
    CHECK(std::stod(cells[6]) == records[0].y);
    CHECK(std::stod(cells[7]) == *records[0].beta);
    CHECK(std::stod(cells[8]) == *records[0].kappa);
    CHECK(std::stod(cells[9]) == records[0].sigma_at_choice);
    for (int j = 0; j < 4; ++j) {
        CHECK(std::stod(cells[10 + j]) == records[0].x[j]);
    }
}

TEST_CASE("manifest re-runs reproduce identical traces") {
    const RunConfig config = tiny_config();
    TempDir first("manifest_src");
    TempDir second("manifest_rerun");
    const auto out = run_experiments(config, first.str(), 2);

    const RunConfig replayed = parse_config_file(out.manifest_path);
    const auto rerun = run_experiments(replayed, second.str(), 1);
    CHECK(read_file(out.trace_path) == read_file(rerun.trace_path));
}

TEST_CASE("non-applicable trace cells stay empty") {
    RunConfig config = tiny_config();
    config.methods = {"ei"};
    config.iterations = 3;
    TempDir dir("ei_cells");
    const auto out = run_experiments(config, dir.str(), 1);
    std::ifstream in(out.trace_path);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    CHECK(cells[1] == "ei");
    CHECK(cells[2].empty());  // theta
    CHECK(cells[7].empty());  // beta
    CHECK(cells[8].empty());  // kappa
}

TEST_CASE("sweep_theta writes one row per theta consistent with run") {
    RunConfig config = tiny_config();
    TempDir dir("sweep");
    sweep_theta(config, {0.5, 1.0, 2.0}, dir.str(), 2);

    std::ifstream in(dir.path / "sweep.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,final_best_mean,final_best_std");
    int rows = 0;
    std::vector<std::string> row_lines;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            row_lines.push_back(line);
            ++rows;
        }
    }
    CHECK(rows == 3);

    // middle row equals a plain run's summary at theta = 1
    TempDir run_dir("sweep_check");
    const auto outcome = run_experiments(config, run_dir.str(), 1);
    std::stringstream ss(row_lines[1]);
    std::string cell;
    std::getline(ss, cell, ',');
    CHECK(cell == "1");
    std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == outcome.summaries[0].final_mean);
    std::getline(ss, cell, ',');
    CHECK(std::stod(cell) == outcome.summaries[0].final_std);

    CHECK_THROWS_AS(sweep_theta(config, {}, dir.str(), 1), ConfigError);
    CHECK_THROWS_AS(sweep_theta(config, {-1.0}, dir.str(), 1), ConfigError);
}

TEST_CASE("export_plot_data recomputes the aggregate from traces") {
    RunConfig config = tiny_config();
    TempDir dir("export");
    const auto out = run_experiments(config, dir.str(), 1);
    export_plot_data(dir.str());

    const std::string plot_path =
        (dir.path / "plot_sphere_rgp-ucb_theta1.csv").string();
    REQUIRE(fs::exists(plot_path));
    std::ifstream plot(plot_path);
    std::string line;
    std::getline(plot, line);
    CHECK(line == "iteration,mean_best,std_best");
    int rows = 0;
    std::vector<std::string> plot_rows;
    while (std::getline(plot, line)) {
        if (!line.empty()) {
            plot_rows.push_back(line);
            ++rows;
        }
    }
    CHECK(rows == config.iterations);

    // values agree with aggregate.csv
    std::ifstream agg(out.aggregate_path);
    std::getline(agg, line);  // header
    std::getline(agg, line);  // iteration 1 row
    std::stringstream agg_ss(line);
    std::string cell;
    for (int skip = 0; skip < 4; ++skip) {
        std::getline(agg_ss, cell, ',');
    }
    std::string mean_cell;
    std::getline(agg_ss, mean_cell, ',');
    std::stringstream plot_ss(plot_rows[0]);
    std::getline(plot_ss, cell, ',');
    std::getline(plot_ss, cell, ',');
    CHECK(cell == mean_cell);
}

TEST_CASE("export_plot_data fails loudly on missing or corrupt traces") {
    TempDir dir("export_missing");
    CHECK_THROWS_WITH_AS(export_plot_data(dir.str()), doctest::Contains("traces.csv"),
                         RunError);

    std::ofstream bad(dir.path / "traces.csv", std::ios::binary);
    bad << "not,a,trace\n";
    bad.close();
    CHECK_THROWS_WITH_AS(export_plot_data(dir.str()), doctest::Contains("header"), RunError);
}

TEST_CASE("manifest echoes every resolved default") {
    const RunConfig config = tiny_config();
    TempDir dir("manifest_echo");
    const auto out = run_experiments(config, dir.str(), 1);
    const std::string manifest = read_file(out.manifest_path);
    for (const char* key : {"problem", "method", "theta", "delta", "a", "b", "r",
                            "iterations", "initial_points", "repeats", "lengthscale",
                            "noise_std", "seed", "version", "timestamp"}) {
        CHECK(manifest.find(key) != std::string::npos);
    }
}
