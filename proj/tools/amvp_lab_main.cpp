// amvp-lab: adaptive minimum-variance / minimum-CVaR portfolio toolkit.
//
// Subcommands map one-to-one onto the library pipeline:
//   summary   per-asset return statistics
//   frontier  efficient frontier of the input universe
//   amvp      adaptive minimum-variance loop + trace export
//   amcvar    adaptive minimum-CVaR loop over scenarios
//   simulate  ARFIMA-FIGARCH + NIG forward-looking scenario panel
//   amrr      rolling-window adaptive minimum-risk rate series
//   chow      structural-break scan of a rate series
//   lrd       long-range-dependence estimate of a rate series
//   report    per-iteration frontiers + capital market line of an amvp run
//
// Every run writes its files atomically into --out plus a manifest.json with
// the effective config, seed and output digests. Exit codes: 1 config errors,
// 2 data errors, 3 numerical failures.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "amvp/adaptive.hpp"
#include "amvp/chow.hpp"
#include "amvp/csv.hpp"
#include "amvp/errors.hpp"
#include "amvp/frontier.hpp"
#include "amvp/io.hpp"
#include "amvp/lrd.hpp"
#include "amvp/moments.hpp"
#include "amvp/panel.hpp"
#include "amvp/rolling.hpp"
#include "amvp/scenario_panel.hpp"
#include "amvp/sha256.hpp"
#include "amvp/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace amvp;

namespace {

struct RunConfig {
    std::string input;
    std::string out;
    std::string run_dir;  // report only
    int calendar = 252;
    double epsilon = 0.0;  // 0 = pick by input kind (1e-20 historical, 1e-6 scenarios)
    int max_iterations = 50;
    double alpha = 0.99;
    int window = 252;
    std::uint64_t seed = 42;
    std::size_t t_len = 0;  // 0 = historical length
    std::size_t paths = 1;
    int n_points = 50;
    std::size_t min_segment = 0;  // 0 = max(30, ceil(0.1 n))
    bool single_shot = false;
    bool bonferroni = false;
    bool serial = false;
};

Exec exec_of(const RunConfig& config) { return config.serial ? Exec::serial : Exec::parallel; }

void apply_config_file(const std::string& path, RunConfig& config) {
    json j;
    try {
        j = json::parse(io::read_text(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    static const std::map<std::string, int> known = {
        {"input", 0},         {"out", 1},        {"run_dir", 2},   {"calendar", 3},
        {"epsilon", 4},       {"max_iterations", 5}, {"alpha", 6}, {"window", 7},
        {"seed", 8},          {"t_len", 9},      {"paths", 10},    {"n_points", 11},
        {"min_segment", 12},  {"single_shot", 13}, {"bonferroni", 14}, {"serial", 15},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = known.find(key);
        if (it == known.end()) throw ConfigError("config file: unknown key '" + key + "'");
        try {
            switch (it->second) {
                case 0: config.input = value.get<std::string>(); break;
                case 1: config.out = value.get<std::string>(); break;
                case 2: config.run_dir = value.get<std::string>(); break;
                case 3: config.calendar = value.get<int>(); break;
                case 4: config.epsilon = value.get<double>(); break;
                case 5: config.max_iterations = value.get<int>(); break;
                case 6: config.alpha = value.get<double>(); break;
                case 7: config.window = value.get<int>(); break;
                case 8: config.seed = value.get<std::uint64_t>(); break;
                case 9: config.t_len = value.get<std::size_t>(); break;
                case 10: config.paths = value.get<std::size_t>(); break;
                case 11: config.n_points = value.get<int>(); break;
                case 12: config.min_segment = value.get<std::size_t>(); break;
                case 13: config.single_shot = value.get<bool>(); break;
                case 14: config.bonferroni = value.get<bool>(); break;
                case 15: config.serial = value.get<bool>(); break;
            }
        } catch (const json::exception& e) {
            throw ConfigError("config file: bad value for '" + key + "': " + e.what());
        }
    }
}

json config_json(const RunConfig& config) {
    return json{{"input", config.input},
                {"out", config.out},
                {"run_dir", config.run_dir},
                {"calendar", config.calendar},
                {"epsilon", config.epsilon},
                {"max_iterations", config.max_iterations},
                {"alpha", config.alpha},
                {"window", config.window},
                {"seed", config.seed},
                {"t_len", config.t_len},
                {"paths", config.paths},
                {"n_points", config.n_points},
                {"min_segment", config.min_segment},
                {"single_shot", config.single_shot},
                {"bonferroni", config.bonferroni},
                {"serial", config.serial}};
}

// Collects output files, writes them atomically, then seals the manifest.
class RunOutput {
public:
    RunOutput(std::string command, const RunConfig& config)
        : command_(std::move(command)), config_(config) {}

    void emit(const std::string& name, const std::string& content) {
        io::write_text_atomic(fs::path(config_.out) / name, content);
        digests_[name] = sha256_hex(content);
    }

    void finish() const {
        json manifest;
        manifest["command"] = command_;
        manifest["version"] = kVersion;
        manifest["seed"] = config_.seed;
        manifest["config"] = config_json(config_);
        manifest["outputs"] = digests_;
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        manifest["created_utc"] = stamp;
        io::write_text_atomic(fs::path(config_.out) / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    std::string command_;
    const RunConfig& config_;
    std::map<std::string, std::string> digests_;
};

struct LoadedInput {
    bool is_scenarios = false;
    data::ReturnPanel panel;          // historical path
    Eigen::MatrixXd scenarios;        // scenario path
    std::vector<std::string> assets;  // scenario labels
};

// Price CSVs become historical return panels; scenario CSVs (from `simulate`)
// are consumed as-is. Rate-series CSVs belong to chow/lrd only.
LoadedInput load_input(const RunConfig& config) {
    LoadedInput out;
    const auto kind = io::detect_csv_kind(config.input);
    if (kind == io::CsvKind::scenario_set) {
        const auto set = io::load_scenarios_csv(config.input);
        out.is_scenarios = true;
        out.scenarios = set.returns;
        out.assets = set.assets;
        return out;
    }
    if (kind == io::CsvKind::price_panel) {
        const auto prices =
            data::load_price_panel_file(config.input, data::calendar_from_factor(config.calendar));
        out.panel = data::compute_returns(prices);
        return out;
    }
    throw DataError("input '" + config.input + "' is neither a price panel nor a scenario set");
}

// Scenario rows carry no calendar; rolling/chow outputs use ordinal
// weekday-agnostic dates so downstream tooling still parses them.
data::ReturnPanel panel_from_scenarios(const LoadedInput& input, data::Calendar calendar) {
    data::ReturnPanel panel;
    panel.assets = input.assets;
    panel.calendar = calendar;
    panel.returns = input.scenarios;
    const auto base = data::Date::parse("2000-01-01").serial();
    for (Eigen::Index t = 0; t < input.scenarios.rows(); ++t) {
        panel.dates.push_back(data::Date::from_serial(base + t));
    }
    return panel;
}

adaptive::AdaptiveConfig adaptive_config(const RunConfig& config, bool forward_looking) {
    adaptive::AdaptiveConfig out;
    out.epsilon = config.epsilon > 0.0 ? config.epsilon : (forward_looking ? 1e-6 : 1e-20);
    out.max_iterations = config.max_iterations;
    out.alpha = config.alpha;
    out.annualization_factor = config.calendar;
    return out;
}

void emit_trace_outputs(RunOutput& output, const adaptive::AdaptiveTrace& trace,
                        const RunConfig& config) {
    output.emit("trace.csv", io::trace_csv(trace));
    for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
        output.emit("weights_iter_" + std::to_string(k + 1) + ".csv", io::weights_csv(trace, k));
    }
    const double per_period = trace.final_record().rate;
    json rate;
    rate["per_period_rate"] = per_period;
    rate["annualization_factor"] = config.calendar;
    rate["annualized_rate"] = adaptive::static_rate(trace, config.calendar);
    rate["synthetic_assets"] = trace.synthetic_count;
    rate["converged"] = trace.converged;
    rate["risk_measure"] = trace.measure == adaptive::RiskMeasure::variance ? "variance" : "cvar";
    output.emit("static_rate.json", rate.dump(2) + "\n");
}

int run_summary(const RunConfig& config) {
    const auto input = load_input(config);
    if (input.is_scenarios) throw DataError("summary expects a price panel input");
    RunOutput output("summary", config);
    output.emit("summary.csv", io::summary_csv(data::summary_stats(input.panel)));
    output.finish();
    return 0;
}

int run_frontier(const RunConfig& config) {
    const auto input = load_input(config);
    const auto moments = input.is_scenarios
                             ? optimize::estimate_moments(input.scenarios, input.assets)
                             : optimize::estimate_moments(input.panel);
    const auto points = optimize::efficient_frontier(moments, config.n_points, exec_of(config));
    RunOutput output("frontier", config);
    output.emit("frontier.csv", io::frontier_csv(points, moments.assets));
    output.finish();
    return 0;
}

int run_amvp(const RunConfig& config) {
    const auto input = load_input(config);
    const data::ReturnPanel panel =
        input.is_scenarios ? panel_from_scenarios(input, data::calendar_from_factor(config.calendar))
                           : input.panel;
    const auto trace = adaptive::amvp_run(panel, adaptive_config(config, input.is_scenarios));
    RunOutput output("amvp", config);
    emit_trace_outputs(output, trace, config);
    output.finish();
    return 0;
}

int run_amcvar(const RunConfig& config) {
    const auto input = load_input(config);
    Eigen::MatrixXd scenarios = input.is_scenarios ? input.scenarios : input.panel.returns;
    std::vector<std::string> assets = input.is_scenarios ? input.assets : input.panel.assets;
    const auto trace =
        adaptive::amcvarp_run(scenarios, std::move(assets), adaptive_config(config, input.is_scenarios));
    RunOutput output("amcvar", config);
    emit_trace_outputs(output, trace, config);
    output.finish();
    return 0;
}

int run_simulate(const RunConfig& config) {
    const auto input = load_input(config);
    if (input.is_scenarios) throw DataError("simulate expects a price panel input");
    const std::size_t t_len = config.t_len > 0 ? config.t_len : input.panel.n_rows();
    const auto set =
        scenarios::build_scenario_panel(input.panel, t_len, config.seed, exec_of(config));
    RunOutput output("simulate", config);
    output.emit("scenarios.csv", io::scenarios_csv(set));
    output.emit("provenance.json", io::provenance_json(set));
    output.finish();
    return 0;
}

int run_amrr(const RunConfig& config) {
    const auto input = load_input(config);
    const bool forward = input.is_scenarios;
    const data::ReturnPanel panel =
        forward ? panel_from_scenarios(input, data::calendar_from_factor(config.calendar))
                : input.panel;
    auto rolled = analysis::rolling_amrr(panel, config.window, adaptive_config(config, forward),
                                         config.single_shot, exec_of(config));
    rolled.series.source = forward ? "forward-looking" : "historical";
    RunOutput output("amrr", config);
    output.emit("amrr.csv", io::rate_series_csv(rolled.series));
    if (!rolled.failures.empty()) {
        json gaps = json::array();
        for (const auto& f : rolled.failures) {
            gaps.push_back({{"window_index", f.window_index}, {"reason", f.reason}});
        }
        output.emit("amrr_gaps.json", gaps.dump(2) + "\n");
    }
    output.finish();
    return 0;
}

int run_chow(const RunConfig& config) {
    const auto series = io::load_rate_series_csv(config.input);
    const std::size_t min_segment =
        config.min_segment > 0 ? config.min_segment : analysis::default_min_segment(series.values.size());
    std::vector<analysis::SkippedBreakpoint> skipped;
    const auto results =
        analysis::chow_scan(series, min_segment, config.bonferroni, &skipped, exec_of(config));
    RunOutput output("chow", config);
    output.emit("chow.csv", io::chow_csv(results));
    if (!skipped.empty()) {
        json j = json::array();
        for (const auto& s : skipped) j.push_back({{"index", s.index}, {"reason", s.reason}});
        output.emit("chow_skipped.json", j.dump(2) + "\n");
    }
    output.finish();
    return 0;
}

int run_lrd(const RunConfig& config) {
    const auto series = io::load_rate_series_csv(config.input);
    const auto transformed = analysis::log_transform(series.values);
    const auto estimate = analysis::estimate_dv(transformed);
    RunOutput output("lrd", config);
    output.emit("lrd.json", io::lrd_json(estimate, fs::path(config.input).stem().string()));
    output.finish();
    return 0;
}

int run_report(const RunConfig& config) {
    if (config.run_dir.empty()) throw ConfigError("report requires --run <dir of an amvp run>");
    const fs::path run_dir(config.run_dir);
    if (!fs::exists(run_dir / "trace.csv")) {
        throw DataError("report: missing artifact '" + (run_dir / "trace.csv").string() + "'");
    }
    const auto trace = io::load_trace_csv(run_dir / "trace.csv");

    const auto input = load_input(config);
    data::ReturnPanel panel =
        input.is_scenarios ? panel_from_scenarios(input, data::calendar_from_factor(config.calendar))
                           : input.panel;

    RunOutput output("report", config);
    double final_rate = trace.iterations.back().rate;
    for (std::size_t k = 0; k < trace.iterations.size(); ++k) {
        const auto moments = optimize::estimate_moments(panel);
        const auto frontier = optimize::efficient_frontier(moments, config.n_points, exec_of(config));
        output.emit("frontier_iter_" + std::to_string(k + 1) + ".csv",
                    io::frontier_csv(frontier, moments.assets));
        if (k + 1 == trace.iterations.size()) {
            output.emit("cml.csv", io::cml_csv(frontier, final_rate, config.n_points));
            break;
        }
        const fs::path weights_file = run_dir / ("weights_iter_" + std::to_string(k + 1) + ".csv");
        if (!fs::exists(weights_file)) {
            throw DataError("report: missing artifact '" + weights_file.string() + "'");
        }
        const auto weights = io::load_weights_csv(weights_file);
        panel = adaptive::append_synthetic(panel, weights,
                                           adaptive::synthetic_label(static_cast<int>(k) + 1));
    }
    output.finish();
    return 0;
}

void validate_common(const RunConfig& config, bool needs_input, bool needs_out) {
    if (needs_input && config.input.empty()) throw ConfigError("missing --input");
    if (needs_out && config.out.empty()) throw ConfigError("missing --out");
    data::calendar_from_factor(config.calendar);
    if (config.epsilon < 0.0) throw ConfigError("epsilon must be > 0");
    if (config.epsilon == 0.0) {
        // 0 means "default by input kind"; an explicit non-positive value is caught below.
    }
    if (config.max_iterations < 1) throw ConfigError("max-iterations must be >= 1");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
    if (config.window < 2) throw ConfigError("window must be >= 2");
    if (config.n_points < 2) throw ConfigError("n-points must be >= 2");
    if (config.paths < 1) throw ConfigError("paths must be >= 1");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive minimum-variance / minimum-CVaR portfolio toolkit"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_path;
    bool epsilon_given = false;
    double epsilon_flag = 0.0;

    auto add_common = [&](CLI::App* sub, bool with_input = true) {
        if (with_input) sub->add_option("--input", config.input, "input CSV");
        sub->add_option("--out", config.out, "output directory");
        sub->add_option("--calendar", config.calendar, "annualization calendar: 252 or 365");
        sub->add_option("--epsilon", epsilon_flag, "adaptive convergence tolerance")
            ->each([&](const std::string&) { epsilon_given = true; });
        sub->add_option("--max-iterations", config.max_iterations, "adaptive iteration cap");
        sub->add_option("--alpha", config.alpha, "CVaR confidence level");
        sub->add_option("--window", config.window, "rolling window length");
        sub->add_option("--seed", config.seed, "master RNG seed");
        sub->add_option("--t-len", config.t_len, "simulated scenario rows (0 = historical length)");
        sub->add_option("--paths", config.paths, "independent simulated paths per asset");
        sub->add_option("--n-points", config.n_points, "frontier grid points");
        sub->add_option("--min-segment", config.min_segment, "Chow minimum segment (0 = auto)");
        sub->add_option("--config", config_path, "JSON config file (flags take precedence)");
        sub->add_flag("--single-shot", config.single_shot,
                      "rolling windows solve one MVP instead of the adaptive loop");
        sub->add_flag("--bonferroni", config.bonferroni, "Bonferroni-correct Chow p-values");
        sub->add_flag("--serial", config.serial, "disable parallel execution");
    };

    auto* summary = app.add_subcommand("summary", "per-asset return statistics");
    auto* frontier = app.add_subcommand("frontier", "efficient frontier export");
    auto* amvp = app.add_subcommand("amvp", "adaptive minimum-variance run");
    auto* amcvar = app.add_subcommand("amcvar", "adaptive minimum-CVaR run");
    auto* simulate = app.add_subcommand("simulate", "forward-looking scenario generation");
    auto* amrr = app.add_subcommand("amrr", "rolling adaptive minimum-risk rate");
    auto* chow = app.add_subcommand("chow", "structural-break scan of a rate series");
    auto* lrd = app.add_subcommand("lrd", "long-range dependence of a rate series");
    auto* report = app.add_subcommand("report", "frontier/CML report of a completed amvp run");
    for (auto* sub : {summary, frontier, amvp, amcvar, simulate, amrr, chow, lrd, report}) {
        add_common(sub);
    }
    report->add_option("--run", config.run_dir, "directory holding trace.csv and weights files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        // Precedence: defaults < config file < flags. Flags were already
        // parsed into `config`, so re-apply them over the file values.
        if (!config_path.empty()) {
            RunConfig file_config = config;
            apply_config_file(config_path, file_config);
            // Values given on the command line win; CLI11 already stored them
            // in `config`, so copy over only keys the CLI left untouched.
            RunConfig merged = file_config;
            for (auto* sub : {summary, frontier, amvp, amcvar, simulate, amrr, chow, lrd, report}) {
                if (!sub->parsed()) continue;
                auto taken = [&](const std::string& flag) { return sub->count(flag) > 0; };
                if (taken("--input")) merged.input = config.input;
                if (taken("--out")) merged.out = config.out;
                if (taken("--calendar")) merged.calendar = config.calendar;
                if (taken("--max-iterations")) merged.max_iterations = config.max_iterations;
                if (taken("--alpha")) merged.alpha = config.alpha;
                if (taken("--window")) merged.window = config.window;
                if (taken("--seed")) merged.seed = config.seed;
                if (taken("--t-len")) merged.t_len = config.t_len;
                if (taken("--paths")) merged.paths = config.paths;
                if (taken("--n-points")) merged.n_points = config.n_points;
                if (taken("--min-segment")) merged.min_segment = config.min_segment;
                if (taken("--single-shot")) merged.single_shot = config.single_shot;
                if (taken("--bonferroni")) merged.bonferroni = config.bonferroni;
                if (taken("--serial")) merged.serial = config.serial;
                if (sub->get_name() == "report" && taken("--run")) merged.run_dir = config.run_dir;
            }
            config = merged;
        }
        if (epsilon_given) {
            if (!(epsilon_flag > 0.0)) throw ConfigError("epsilon must be > 0");
            config.epsilon = epsilon_flag;
        }
        if (config.epsilon < 0.0) throw ConfigError("epsilon must be > 0");

        if (summary->parsed()) {
            validate_common(config, true, true);
            return run_summary(config);
        }
        if (frontier->parsed()) {
            validate_common(config, true, true);
            return run_frontier(config);
        }
        if (amvp->parsed()) {
            validate_common(config, true, true);
            return run_amvp(config);
        }
        if (amcvar->parsed()) {
            validate_common(config, true, true);
            return run_amcvar(config);
        }
        if (simulate->parsed()) {
            validate_common(config, true, true);
            return run_simulate(config);
        }
        if (amrr->parsed()) {
            validate_common(config, true, true);
            return run_amrr(config);
        }
        if (chow->parsed()) {
            validate_common(config, true, true);
            return run_chow(config);
        }
        if (lrd->parsed()) {
            validate_common(config, true, true);
            return run_lrd(config);
        }
        if (report->parsed()) {
            validate_common(config, true, true);
            return run_report(config);
        }
        std::cerr << "config error: no subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
