#include "rgpucb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace rgpucb {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        parts.push_back(trim(item));
    }
    return parts;
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse '" + value + "' as a number");
    }
}

int parse_int(const std::string& value, const std::string& where) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse '" + value + "' as an integer");
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": cannot parse '" + value + "' as an unsigned integer");
    }
}

void set_key(RunConfig& config, const std::string& key, const std::string& value,
             const std::string& where) {
    if (key == "problem") {
        config.problem = value;
    } else if (key == "method") {
        config.methods = split(value, ',');
        config.methods.erase(std::remove(config.methods.begin(), config.methods.end(), ""),
                             config.methods.end());
    } else if (key == "theta") {
        config.theta = parse_double(value, where);
    } else if (key == "delta") {
        config.delta = parse_double(value, where);
    } else if (key == "a") {
        config.a = parse_double(value, where);
    } else if (key == "b") {
        config.b = parse_double(value, where);
    } else if (key == "r") {
        config.r = parse_double(value, where);
    } else if (key == "iterations") {
        config.iterations = parse_int(value, where);
    } else if (key == "initial_points") {
        config.initial_points = parse_int(value, where);
    } else if (key == "repeats") {
        config.repeats = parse_int(value, where);
    } else if (key == "lengthscale") {
        config.lengthscale = parse_double(value, where);
    } else if (key == "noise_std") {
        config.noise_std = parse_double(value, where);
    } else if (key == "seed") {
        config.seed = parse_u64(value, where);
    } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

RunConfig parse_manifest_json(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(source + ": invalid JSON: " + e.what());
    }
    if (!doc.contains("config")) {
        throw ConfigError(source + ": manifest has no 'config' object");
    }
    const json& c = doc["config"];
    RunConfig config;
    config.problem = c.value("problem", config.problem);
    if (c.contains("method")) {
        config.methods.clear();
        for (const auto& m : c["method"]) {
            config.methods.push_back(m.get<std::string>());
        }
    }
    config.theta = c.value("theta", config.theta);
    config.delta = c.value("delta", config.delta);
    config.a = c.value("a", config.a);
    config.b = c.value("b", config.b);
    config.r = c.value("r", config.r);
    config.iterations = c.value("iterations", config.iterations);
    config.initial_points = c.value("initial_points", config.initial_points);
    config.repeats = c.value("repeats", config.repeats);
    config.lengthscale = c.value("lengthscale", config.lengthscale);
    config.noise_std = c.value("noise_std", config.noise_std);
    config.seed = c.value("seed", config.seed);
    return config;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return parse_manifest_json(text, source);
    }
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        set_key(config, key, value, where);
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

void apply_override(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    }
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    set_key(config, key, value, "--set " + key);
}

void validate_config(const RunConfig& config) {
    const auto& names = benchmark_names();
    if (std::find(names.begin(), names.end(), config.problem) == names.end()) {
        throw ConfigError("key 'problem': unknown benchmark '" + config.problem + "'");
    }
    if (config.methods.empty()) {
        throw ConfigError("key 'method': at least one method is required");
    }
    for (const auto& m : config.methods) {
        try {
            MethodSpec::parse(m);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("key 'method': ") + e.what());
        }
    }
    if (!(config.theta > 0.0)) {
        throw ConfigError("key 'theta': must be positive, got " + format_g17(config.theta));
    }
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw ConfigError("key 'delta': must lie in (0, 1)");
    }
    if (!(config.a > 0.0)) throw ConfigError("key 'a': must be positive");
    if (!(config.b > 0.0)) throw ConfigError("key 'b': must be positive");
    if (config.r < 0.0) throw ConfigError("key 'r': must be >= 0 (0 = box side)");
    if (config.iterations < 0) throw ConfigError("key 'iterations': must be >= 1 (0 = default)");
    if (config.initial_points < 0) {
        throw ConfigError("key 'initial_points': must be >= 1 (0 = default)");
    }
    if (config.repeats < 1) throw ConfigError("key 'repeats': must be >= 1");
    if (config.lengthscale < 0.0) {
        throw ConfigError("key 'lengthscale': must be positive (0 = default)");
    }
}

ExperimentConfig make_experiment_config(const RunConfig& config, const std::string& method) {
    ExperimentConfig ec;
    ec.problem = make_problem(config.problem);
    ec.method = MethodSpec::parse(method);
    ec.method.gamma.theta = config.theta;
    ec.method.srinivas.delta = config.delta;
    ec.method.srinivas.a = config.a;
    ec.method.srinivas.b = config.b;
    ec.method.srinivas.r = config.r;
    ec.iterations = config.iterations;
    ec.initial_points = config.initial_points;
    ec.repeats = config.repeats;
    ec.lengthscale = config.lengthscale;
    ec.noise_std = config.noise_std;
    ec.base_seed = config.seed;
    ec.resolve_defaults();
    return ec;
}

namespace {

// Run tasks 0..n-1 on up to `jobs` threads. The first failure (by task
// index, not completion time) is rethrown so errors are deterministic too.
void run_pool(int jobs, int n_tasks, const std::function<void(int)>& task) {
    jobs = std::max(1, std::min(jobs, n_tasks));
    if (jobs == 1) {
        for (int i = 0; i < n_tasks; ++i) {
            task(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(n_tasks);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_tasks) {
                return;
            }
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (int i = 0; i < jobs; ++i) {
        threads.emplace_back(worker);
    }
    for (auto& t : threads) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

bool method_uses_theta(const MethodSpec& spec) {
    return spec.kind == AcquisitionKind::RgpUcb;
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct MethodRuns {
    std::string method;
    ExperimentConfig config;
    std::vector<std::vector<IterationRecord>> traces;  // per repeat
};

std::vector<MethodRuns> execute_all(const RunConfig& config, int jobs) {
    std::vector<MethodRuns> runs;
    runs.reserve(config.methods.size());
    for (const auto& m : config.methods) {
        MethodRuns mr;
        mr.method = m;
        mr.config = make_experiment_config(config, m);
        mr.traces.resize(mr.config.repeats);
        runs.push_back(std::move(mr));
    }
    const int repeats = runs.empty() ? 0 : runs.front().config.repeats;
    const int n_tasks = static_cast<int>(runs.size()) * repeats;
    run_pool(jobs, n_tasks, [&](int task) {
        const int mi = task / repeats;
        const int rep = task % repeats;
        try {
            runs[mi].traces[rep] = bo_loop(runs[mi].config, rep);
        } catch (const std::exception& e) {
            throw RunError("method " + runs[mi].method + ", repeat " +
                           std::to_string(rep) + ": " + e.what());
        }
    });
    return runs;
}

void write_trace_csv(const std::string& path, const RunConfig& config,
                     const std::vector<MethodRuns>& runs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw RunError("cannot write '" + path + "'");
    }
    const int d = runs.front().config.problem.dimension;
    out << "problem,method,theta,repeat,iteration,best_so_far,y,beta,kappa,sigma_at_choice";
    for (int j = 0; j < d; ++j) {
        out << ",x" << j;
    }
    out << "\n";
    for (const auto& mr : runs) {
        const bool with_theta = method_uses_theta(mr.config.method);
        for (std::size_t rep = 0; rep < mr.traces.size(); ++rep) {
            const auto& records = mr.traces[rep];
            for (std::size_t i = 0; i < records.size(); ++i) {
                const auto& rec = records[i];
                out << config.problem << ',' << mr.method << ',';
                if (with_theta) {
                    out << format_g17(mr.config.method.gamma.theta);
                }
                out << ',' << rep << ',' << (i + 1) << ','
                    << format_g17(rec.best_so_far) << ',' << format_g17(rec.y) << ',';
                if (rec.beta) {
                    out << format_g17(*rec.beta);
                }
                out << ',';
                if (rec.kappa) {
                    out << format_g17(*rec.kappa);
                }
                out << ',' << format_g17(rec.sigma_at_choice);
                for (int j = 0; j < d; ++j) {
                    out << ',' << format_g17(rec.x[j]);
                }
                out << "\n";
            }
        }
    }
}

std::vector<std::vector<double>> best_traces(const MethodRuns& mr) {
    std::vector<std::vector<double>> traces;
    traces.reserve(mr.traces.size());
    for (const auto& records : mr.traces) {
        std::vector<double> best;
        best.reserve(records.size());
        for (const auto& rec : records) {
            best.push_back(rec.best_so_far);
        }
        traces.push_back(std::move(best));
    }
    return traces;
}

void write_aggregate_csv(const std::string& path, const RunConfig& config,
                         const std::vector<MethodRuns>& runs,
                         const std::vector<AggregateSummary>& summaries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw RunError("cannot write '" + path + "'");
    }
    out << "problem,method,theta,iteration,mean_best,std_best\n";
    for (std::size_t mi = 0; mi < runs.size(); ++mi) {
        const bool with_theta = method_uses_theta(runs[mi].config.method);
        const auto& s = summaries[mi];
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            out << config.problem << ',' << runs[mi].method << ',';
            if (with_theta) {
                out << format_g17(runs[mi].config.method.gamma.theta);
            }
            out << ',' << (i + 1) << ',' << format_g17(s.mean[i]) << ','
                << format_g17(s.std[i]) << "\n";
        }
    }
}

json config_echo(const RunConfig& config, const ExperimentConfig& resolved) {
    json c;
    c["problem"] = config.problem;
    c["method"] = config.methods;
    c["theta"] = config.theta;
    c["delta"] = config.delta;
    c["a"] = config.a;
    c["b"] = config.b;
    c["r"] = resolved.method.srinivas.r;
    c["iterations"] = resolved.iterations;
    c["initial_points"] = resolved.initial_points;
    c["repeats"] = resolved.repeats;
    c["lengthscale"] = resolved.lengthscale;
    c["noise_std"] = resolved.noise_std;
    c["seed"] = config.seed;
    return c;
}

}  // namespace

RunOutcome run_experiments(const RunConfig& config, const std::string& out_dir, int jobs) {
    validate_config(config);
    fs::create_directories(out_dir);

    const auto runs = execute_all(config, jobs);

    RunOutcome outcome;
    outcome.trace_path = (fs::path(out_dir) / "traces.csv").string();
    outcome.aggregate_path = (fs::path(out_dir) / "aggregate.csv").string();
    outcome.manifest_path = (fs::path(out_dir) / "manifest.json").string();

    write_trace_csv(outcome.trace_path, config, runs);

    std::vector<AggregateSummary> summaries;
    summaries.reserve(runs.size());
    for (const auto& mr : runs) {
        summaries.push_back(aggregate(best_traces(mr)));
    }
    write_aggregate_csv(outcome.aggregate_path, config, runs, summaries);

    json manifest;
    manifest["tool"] = "rgpucb";
    manifest["version"] = RGPUCB_VERSION;
    manifest["timestamp"] = iso8601_utc_now();
    manifest["base_seed"] = config.seed;
    manifest["config"] = config_echo(config, runs.front().config);
    json summary = json::array();
    for (std::size_t mi = 0; mi < runs.size(); ++mi) {
        json s;
        s["method"] = runs[mi].method;
        if (method_uses_theta(runs[mi].config.method)) {
            s["theta"] = runs[mi].config.method.gamma.theta;
        }
        s["final_best_mean"] = summaries[mi].final_mean;
        s["final_best_std"] = summaries[mi].final_std;
        summary.push_back(s);

        MethodSummary ms;
        ms.method = runs[mi].method;
        ms.theta = method_uses_theta(runs[mi].config.method)
                       ? runs[mi].config.method.gamma.theta
                       : std::numeric_limits<double>::quiet_NaN();
        ms.final_mean = summaries[mi].final_mean;
        ms.final_std = summaries[mi].final_std;
        outcome.summaries.push_back(ms);
    }
    manifest["summary"] = summary;

    std::ofstream mout(outcome.manifest_path, std::ios::binary);
    if (!mout) {
        throw RunError("cannot write '" + outcome.manifest_path + "'");
    }
    mout << manifest.dump(2) << "\n";
    return outcome;
}

void sweep_theta(const RunConfig& config, const std::vector<double>& thetas,
                 const std::string& out_dir, int jobs) {
    if (thetas.empty()) {
        throw ConfigError("sweep-theta: at least one theta value is required");
    }
    for (double theta : thetas) {
        if (!(theta > 0.0)) {
            throw ConfigError("sweep-theta: key 'theta': must be positive, got " +
                              format_g17(theta));
        }
    }
    RunConfig base = config;
    base.methods = {"rgp-ucb"};
    validate_config(base);
    fs::create_directories(out_dir);

    std::vector<AggregateSummary> summaries(thetas.size());
    for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
        RunConfig c = base;
        c.theta = thetas[ti];
        const auto runs = execute_all(c, jobs);
        summaries[ti] = aggregate(best_traces(runs.front()));
    }

    const std::string path = (fs::path(out_dir) / "sweep.csv").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw RunError("cannot write '" + path + "'");
    }
    out << "theta,final_best_mean,final_best_std\n";
    for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
        out << format_g17(thetas[ti]) << ',' << format_g17(summaries[ti].final_mean) << ','
            << format_g17(summaries[ti].final_std) << "\n";
    }
}

void verify_bounds(const VerifyBoundsOptions& options, const std::string& out_path) {
    if (options.thetas.empty()) {
        throw ConfigError("verify-bounds: at least one theta value is required");
    }
    json reports = json::array();
    for (std::size_t i = 0; i < options.thetas.size(); ++i) {
        RngStream rng = RngStream::for_repeat(options.seed, i);
        const BoundReport r =
            prior_function_check(options.lengthscale, options.grid_size, options.T,
                                 options.thetas[i], options.repeats, rng,
                                 options.dimension, options.noise_std);
        json j;
        j["theta"] = r.theta;
        j["T"] = r.T;
        j["kappa_used"] = r.kappa_used;
        j["empirical_bayes_regret"] = r.empirical_bayes_regret;
        j["bound_value"] = r.bound_value;
        j["r1_term"] = r.r1_term;
        j["r2_term"] = r.r2_term;
        j["r34_term"] = r.r34_term;
        j["expected_max_beta_approx"] = r.expected_max_beta_approx;
        j["mgf_audit"] = {
            {"mc_exp_half_beta", r.mgf_mc_exp_half_beta},
            {"mc_exp_half_sqrt_beta", r.mgf_mc_exp_half_sqrt_beta},
            {"closed_form", r.mgf_closed_form},
        };
        reports.push_back(j);
    }
    json doc;
    doc["grid_size"] = options.grid_size;
    doc["dimension"] = options.dimension;
    doc["T"] = options.T;
    doc["repeats"] = options.repeats;
    doc["lengthscale"] = options.lengthscale;
    doc["noise_std"] = options.noise_std;
    doc["seed"] = options.seed;
    doc["reports"] = reports;

    if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw RunError("cannot write '" + out_path + "'");
    }
    out << doc.dump(2) << "\n";
}

void export_plot_data(const std::string& run_dir) {
    const std::string trace_path = (fs::path(run_dir) / "traces.csv").string();
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) {
        throw RunError("missing or unreadable trace file '" + trace_path + "'");
    }
    std::string header;
    if (!std::getline(in, header) || header.rfind("problem,method,theta,repeat,iteration", 0) != 0) {
        throw RunError("corrupt trace file '" + trace_path + "': unexpected header");
    }

    struct Series {
        // best_so_far per repeat, per iteration (iterations arrive in order)
        std::vector<std::vector<double>> repeats;
    };
    std::vector<std::pair<std::string, Series>> series;  // key -> data, in file order
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() < 10) {
            throw RunError("corrupt trace file '" + trace_path + "' at line " +
                           std::to_string(lineno));
        }
        const std::string& problem = cells[0];
        const std::string& method = cells[1];
        const std::string& theta = cells[2];
        std::string key = problem + "_" + method;
        if (!theta.empty()) {
            key += "_theta" + theta;
        }
        const int rep = parse_int(cells[3], trace_path + ":" + std::to_string(lineno));
        const double best = parse_double(cells[5], trace_path + ":" + std::to_string(lineno));
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const auto& kv) { return kv.first == key; });
        if (it == series.end()) {
            series.push_back({key, {}});
            it = std::prev(series.end());
        }
        auto& reps = it->second.repeats;
        if (rep >= static_cast<int>(reps.size())) {
            reps.resize(rep + 1);
        }
        reps[rep].push_back(best);
    }
    if (series.empty()) {
        throw RunError("trace file '" + trace_path + "' contains no data rows");
    }

    for (const auto& [key, data] : series) {
        AggregateSummary s;
        try {
            s = aggregate(data.repeats);
        } catch (const std::invalid_argument& e) {
            throw RunError("corrupt trace file '" + trace_path + "' (" + key + "): " + e.what());
        }
        const std::string path = (fs::path(run_dir) / ("plot_" + key + ".csv")).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw RunError("cannot write '" + path + "'");
        }
        out << "iteration,mean_best,std_best\n";
        for (std::size_t i = 0; i < s.mean.size(); ++i) {
            out << (i + 1) << ',' << format_g17(s.mean[i]) << ',' << format_g17(s.std[i]) << "\n";
        }
    }
}

}  // namespace rgpucb
