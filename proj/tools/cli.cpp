#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "caid/config.hpp"
#include "caid/error_measures.hpp"
#include "caid/errors.hpp"
#include "caid/experiment.hpp"
#include "caid/ga_solver.hpp"
#include "caid/observation_io.hpp"
#include "caid/oracle.hpp"

namespace caid::cli {

namespace {

using nlohmann::json;
using Paths = std::map<std::string, std::string>;

constexpr const char* kToolName = "caid";
constexpr const char* kVersion = "0.1.0";

// Optional flag values; unset flags leave the config file / defaults alone.
struct Flags {
    std::optional<std::string> config;
    std::optional<int> radius;
    std::optional<std::size_t> population;
    std::optional<std::size_t> elite;
    std::optional<double> flip_probability;
    std::optional<std::uint32_t> gap_bound;
    std::optional<std::size_t> max_generations;
    std::optional<std::size_t> subset_size;
    std::optional<std::uint32_t> resamples;
    std::optional<std::uint32_t> confirm_resamples;
    std::optional<std::size_t> elite_off_after;
    std::optional<std::size_t> elite_on_after;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> rule;
    std::optional<int> rule_radius;
    std::optional<std::size_t> observations;
    std::optional<std::size_t> rows;
    std::optional<std::size_t> cols;
    std::optional<std::uint64_t> removal;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> repetitions;
    std::optional<std::uint64_t> max_rules;
    std::optional<std::uint64_t> max_gap_sequences;
    std::optional<std::uint64_t> max_completions;
    bool timing = false;
};

template <class T, class U>
void override_with(const std::optional<T>& flag, U& target) {
    if (flag) target = static_cast<U>(*flag);
}

ToolConfig resolve(const Flags& f) {
    ToolConfig c = f.config ? load_config(*f.config) : ToolConfig{};
    auto& s = c.solver;
    override_with(f.radius, s.radius);
    override_with(f.population, s.population);
    override_with(f.elite, s.elite);
    override_with(f.flip_probability, s.flip_probability);
    override_with(f.gap_bound, s.gap_bound);
    override_with(f.max_generations, s.max_generations);
    override_with(f.subset_size, s.subset_size);
    override_with(f.resamples, s.resamples);
    override_with(f.confirm_resamples, s.confirm_resamples);
    override_with(f.elite_off_after, s.elite_off_after);
    override_with(f.elite_on_after, s.elite_on_after);
    override_with(f.seed, s.seed);
    override_with(f.threads, s.threads);
    override_with(f.rule, c.rule);
    override_with(f.rule_radius, c.rule_radius);
    override_with(f.observations, c.observations);
    override_with(f.rows, c.rows);
    override_with(f.cols, c.cols);
    override_with(f.removal, c.removal);
    override_with(f.k_max, c.k_max);
    override_with(f.repetitions, c.repetitions);
    override_with(f.max_rules, c.budget.max_rules);
    override_with(f.max_gap_sequences, c.budget.max_gap_sequences);
    override_with(f.max_completions, c.budget.max_completions);
    if (f.timing) c.timing = true;
    return c;
}

unsigned worker_count(const ToolConfig& c) {
    if (c.solver.threads != 0) return c.solver.threads;
    return std::max(1U, std::thread::hardware_concurrency());
}

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON config file (or run manifest)");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--threads", f.threads, "Worker threads (0: hardware concurrency)");
}

void add_solver(CLI::App* app, Flags& f) {
    app->add_option("-r,--radius", f.radius, "Radius of the searched rules [2]");
    app->add_option("-P,--population", f.population, "Population size [512]");
    app->add_option("--elite", f.elite, "Elite size [32]");
    app->add_option("--flip-probability", f.flip_probability, "Per-bit mutation probability [0.01]");
    app->add_option("-T,--gap-bound", f.gap_bound, "Upper bound on time gaps [10]");
    app->add_option("--max-generations", f.max_generations, "Generation limit [5000]");
    app->add_option("-s,--subset-size", f.subset_size, "Observations in the fitness subset [8]");
    app->add_option("--resamples", f.resamples, "Sampled error estimates per observation [1]");
    app->add_option("--confirm-resamples", f.confirm_resamples, "Resamples for the full-set check [8]");
    app->add_option("--elite-off-after", f.elite_off_after, "Stagnant generations before elite survival stops [50]");
    app->add_option("--elite-on-after", f.elite_on_after, "Generations before elite survival resumes [20]");
}

void add_generator(CLI::App* app, Flags& f) {
    app->add_option("--rule", f.rule, "Generating rule number [150]");
    app->add_option("--rule-radius", f.rule_radius, "Radius of the generating rule [1]");
    app->add_option("--observations", f.observations, "Observations per set [64]");
    app->add_option("--rows", f.rows, "Rows per observation [69]");
    app->add_option("--cols", f.cols, "Columns per observation [69]");
}

void add_budget(CLI::App* app, Flags& f) {
    app->add_option("--max-rules", f.max_rules, "Most rules the oracle may enumerate");
    app->add_option("--max-gap-sequences", f.max_gap_sequences, "Most gap sequences per observation");
    app->add_option("--max-completions", f.max_completions, "Most completions per observation");
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void write_manifest(const std::string& path, const std::string& subcommand, const ToolConfig& config,
                    const Paths& paths, const std::string& started) {
    json manifest{
        {"tool", kToolName},
        {"version", kVersion},
        {"subcommand", subcommand},
        {"paths", paths},
        {"config", to_json(config)},
        {"seed", config.solver.seed},
        {"started", started},
        {"finished", timestamp()},
    };
    write_file(path, manifest.dump(2) + "\n");
}

std::string manifest_path(const Paths& paths, const std::string& fallback_key) {
    if (auto it = paths.find("manifest"); it != paths.end() && !it->second.empty()) return it->second;
    if (auto it = paths.find(fallback_key); it != paths.end() && !it->second.empty() && it->second != "-") {
        return it->second + ".manifest.json";
    }
    return {};
}

std::string path_of(const Paths& paths, const std::string& key) {
    auto it = paths.find(key);
    return it == paths.end() ? std::string{} : it->second;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

std::string serialize_for(const std::string& path, const ObservationSet& set) {
    return std::filesystem::path(path).extension() == ".json" ? serialize_json(set) : serialize_text(set);
}

// --- subcommands -----------------------------------------------------------

int cmd_gen(const ToolConfig& c, const Paths& paths, std::ostream& out) {
    const std::string started = timestamp();
    Rng rng = make_rng(c.solver.seed, {0});
    auto set = generate_set(lut_from_number(c.rule, c.rule_radius), c.observations, c.rows, c.cols,
                            c.solver.gap_bound, rng);
    set.metadata().seed = c.solver.seed;
    const std::string output = path_of(paths, "output");
    emit(output, serialize_for(output, set), out);
    if (auto m = manifest_path(paths, "output"); !m.empty()) write_manifest(m, "gen", c, paths, started);
    return kOk;
}

int cmd_degrade(const ToolConfig& c, const Paths& paths, std::ostream& out) {
    const std::string started = timestamp();
    const auto input = load_observations(path_of(paths, "input"));
    Rng rng = make_rng(c.solver.seed, {0});
    const auto series = degrade_series(input, c.removal, c.k_max, rng);
    const std::string output = path_of(paths, "output");
    emit(output, serialize_for(output, series.back()), out);
    if (const auto prefix = path_of(paths, "series_prefix"); !prefix.empty()) {
        const std::string ext = std::filesystem::path(output).extension() == ".json" ? ".json" : ".txt";
        for (std::size_t k = 0; k < series.size(); ++k) {
            write_file(prefix + std::to_string(k) + ext,
                       ext == ".json" ? serialize_json(series[k]) : serialize_text(series[k]));
        }
    }
    if (auto m = manifest_path(paths, "output"); !m.empty()) write_manifest(m, "degrade", c, paths, started);
    return kOk;
}

json report_json(const RunReport& report, const SetCounts& counts, bool timing) {
    json j{
        {"best_rule", report.best_rule},
        {"best_lut", report.best_lut.to_string()},
        {"radius", report.best_lut.radius()},
        {"best_fitness", report.best_fitness},
        {"max_fitness", report.max_fitness},
        {"known_cells", counts.known},
        {"columns", counts.columns},
        {"generations", report.generations},
        {"halt_reason", to_string(report.halt)},
        {"seed", report.seed},
    };
    if (timing) j["wall_ms"] = report.wall_time.count();
    return j;
}

std::string history_csv(const RunReport& report) {
    std::ostringstream os;
    os << "generation,max_subset_fitness,mean_subset_fitness,best_rule_number,elite_active\n";
    for (const auto& g : report.history) {
        os << g.generation << ',' << g.max_fitness << ',' << format_number(g.mean_fitness) << ',' << g.best_rule << ','
           << (g.elite_active ? 1 : 0) << '\n';
    }
    return os.str();
}

int cmd_identify(const ToolConfig& c, const Paths& paths, std::ostream& out, std::ostream& err) {
    const std::string started = timestamp();
    const auto set = load_observations(path_of(paths, "input"));
    const auto counts = set_counts(set);
    if (counts.known <= counts.columns) {
        err << "warning: no known cells below the first rows; every rule fits this set\n";
    }
    SolverConfig solver = c.solver;
    solver.threads = worker_count(c);
    const auto report = run(set, solver);
    emit(path_of(paths, "output"), report_json(report, counts, c.timing).dump(2) + "\n", out);
    if (const auto csv = path_of(paths, "csv"); !csv.empty()) write_file(csv, history_csv(report));
    std::string manifest = manifest_path(paths, "output");
    if (manifest.empty()) manifest = manifest_path(paths, "csv");
    if (!manifest.empty()) write_manifest(manifest, "identify", c, paths, started);
    return kOk;
}

int cmd_sweep(const ToolConfig& c, const Paths& paths, std::ostream&, std::ostream& err) {
    const std::string started = timestamp();
    SweepConfig cfg = c.sweep_config();
    cfg.threads = worker_count(c);
    const auto dir = std::filesystem::path(path_of(paths, "out_dir"));
    std::filesystem::create_directories(dir);
    const bool verbose = path_of(paths, "verbose") == "1";
    const auto result = sweep(cfg, [&](const SweepRun& r) {
        if (!r.error.empty()) err << "run k=" << r.k << " rep=" << r.rep << " failed: " << r.error << '\n';
        if (verbose) err << "k=" << r.k << " rep=" << r.rep << " solved=" << r.solved << " gen=" << r.generations << '\n';
    });
    std::ostringstream runs;
    std::ostringstream summary;
    write_runs_csv(runs, result, c.timing);
    write_summary_csv(summary, result);
    write_file((dir / "runs.csv").string(), runs.str());
    write_file((dir / "summary.csv").string(), summary.str());
    Paths recorded = paths;
    recorded.erase("verbose");
    write_manifest((dir / "manifest.json").string(), "sweep", c, recorded, started);
    return kOk;
}

int cmd_eval(const ToolConfig& c, const Paths& paths, std::ostream& out) {
    const std::string started = timestamp();
    const auto set = load_observations(path_of(paths, "input"));
    const auto lut = lut_from_number(c.rule, c.rule_radius);
    const auto est = min_error_set(lut, set, c.solver.gap_bound, c.solver.seed, c.solver.resamples);
    const auto counts = set_counts(set);
    std::ostringstream os;
    os << "value: " << est.value << '\n';
    os << "exact: " << (est.exact ? "true" : "false") << '\n';
    os << "fitness: " << static_cast<std::int64_t>(counts.known - counts.columns) - static_cast<std::int64_t>(est.value)
       << " / " << counts.known - counts.columns << '\n';
    os << "gaps:\n";
    for (std::size_t i = 0; i < est.gaps.size(); ++i) {
        os << "  " << i + 1 << ':';
        for (auto g : est.gaps[i].values()) os << ' ' << g;
        os << '\n';
    }
    emit(path_of(paths, "output"), os.str(), out);
    if (auto m = manifest_path(paths, "output"); !m.empty()) write_manifest(m, "eval", c, paths, started);
    return kOk;
}

int cmd_oracle(const ToolConfig& c, const Paths& paths, std::ostream& out) {
    const std::string started = timestamp();
    if (c.solver.radius >= 2) {
        throw CapacityError("rule enumeration at radius " + std::to_string(c.solver.radius) + " is infeasible");
    }
    const std::string input = path_of(paths, "input");
    if (input.empty()) throw CLI::RequiredError("--input");
    const auto set = load_observations(input);
    const auto rules = enumerate_fitting_rules(set, c.solver.radius, c.solver.gap_bound, c.budget, worker_count(c));
    std::ostringstream os;
    for (std::size_t i = 0; i < rules.size(); ++i) os << (i ? " " : "") << rules[i];
    os << '\n';
    emit(path_of(paths, "output"), os.str(), out);
    if (auto m = manifest_path(paths, "output"); !m.empty()) write_manifest(m, "oracle", c, paths, started);
    return kOk;
}

int dispatch(const std::string& name, const ToolConfig& c, const Paths& paths, std::ostream& out, std::ostream& err) {
    if (name == "gen") return cmd_gen(c, paths, out);
    if (name == "degrade") return cmd_degrade(c, paths, out);
    if (name == "identify") return cmd_identify(c, paths, out, err);
    if (name == "sweep") return cmd_sweep(c, paths, out, err);
    if (name == "eval") return cmd_eval(c, paths, out);
    if (name == "oracle") return cmd_oracle(c, paths, out);
    throw ConfigError("unknown subcommand \"" + name + "\"");
}

int cmd_replay(const std::string& manifest_file, std::ostream& out, std::ostream& err) {
    std::ifstream in(manifest_file);
    if (!in) throw ConfigError("cannot open manifest " + manifest_file);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("manifest " + manifest_file + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("subcommand") || !doc.contains("config") || !doc.contains("paths")) {
        throw ConfigError("manifest " + manifest_file + " lacks subcommand, config or paths");
    }
    ToolConfig config;
    apply_config(doc["config"], config);
    const auto paths = doc["paths"].get<Paths>();
    return dispatch(doc["subcommand"].get<std::string>(), config, paths, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Identify one-dimensional binary cellular automata from partial observations", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Flags flags;
    Paths paths;
    std::string input, output, csv, manifest, series_prefix, out_dir, replay_manifest;
    bool verbose = false;

    auto* gen = app.add_subcommand("gen", "Generate a spatially complete synthetic observation set");
    add_common(gen, flags);
    add_generator(gen, flags);
    gen->add_option("-T,--gap-bound", flags.gap_bound, "Upper bound on time gaps [10]");
    gen->add_option("-o,--output", output, "Output file (.json for JSON, '-' for stdout)")->required();
    gen->add_option("--manifest", manifest, "Manifest path [<output>.manifest.json]");

    auto* degrade = app.add_subcommand("degrade", "Mask random known cells, level by level");
    add_common(degrade, flags);
    degrade->add_option("-i,--input", input, "Observation file")->required();
    degrade->add_option("--removal", flags.removal, "Cells masked per level [2000]");
    degrade->add_option("-k,--k-max", flags.k_max, "Number of levels [150]");
    degrade->add_option("-o,--output", output, "Output file for the last level")->required();
    degrade->add_option("--series-prefix", series_prefix, "Also write every level to <prefix><k>.txt|.json");
    degrade->add_option("--manifest", manifest, "Manifest path [<output>.manifest.json]");

    auto* identify = app.add_subcommand("identify", "Search for a rule fitting an observation set");
    add_common(identify, flags);
    add_solver(identify, flags);
    identify->add_option("-i,--input,--rule-file", input, "Observation file")->required();
    identify->add_option("-o,--output", output, "Report file [stdout]");
    identify->add_option("--csv", csv, "Per-generation statistics CSV");
    identify->add_option("--manifest", manifest, "Manifest path [<output|csv>.manifest.json]");
    identify->add_flag("--timing", flags.timing, "Include wall-clock time in the report");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run the solver over a degradation series");
    add_common(sweep_cmd, flags);
    add_solver(sweep_cmd, flags);
    add_generator(sweep_cmd, flags);
    sweep_cmd->add_option("--removal", flags.removal, "Cells masked per level [2000]");
    sweep_cmd->add_option("-k,--k-max", flags.k_max, "Highest degradation level [150]");
    sweep_cmd->add_option("-L,--repetitions", flags.repetitions, "Runs per level [20]");
    sweep_cmd->add_option("--out-dir", out_dir, "Directory for runs.csv, summary.csv, manifest.json")->required();
    sweep_cmd->add_flag("--timing", flags.timing, "Record wall-clock times in runs.csv");
    sweep_cmd->add_flag("-v,--verbose", verbose, "Log every finished run");

    auto* eval = app.add_subcommand("eval", "Sampled gap-minimised error of one rule");
    add_common(eval, flags);
    eval->add_option("--rule", flags.rule, "Rule number")->required();
    eval->add_option("-r,--radius", flags.rule_radius, "Radius of the rule [1]");
    eval->add_option("-i,--input", input, "Observation file")->required();
    eval->add_option("-T,--gap-bound", flags.gap_bound, "Upper bound on time gaps [10]");
    eval->add_option("--resamples", flags.resamples, "Sampled estimates per observation [1]");
    eval->add_option("-o,--output", output, "Output file [stdout]");
    eval->add_option("--manifest", manifest, "Manifest path [<output>.manifest.json]");

    auto* oracle = app.add_subcommand("oracle", "List every rule of radius 0 or 1 fitting a set");
    add_common(oracle, flags);
    add_budget(oracle, flags);
    oracle->add_option("-i,--input", input, "Observation file");
    oracle->add_option("-r,--radius", flags.radius, "Rule radius [required, 0 or 1]")->required();
    oracle->add_option("-T,--gap-bound", flags.gap_bound, "Upper bound on time gaps [10]");
    oracle->add_option("-o,--output", output, "Output file [stdout]");
    oracle->add_option("--manifest", manifest, "Manifest path [<output>.manifest.json]");

    auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", replay_manifest, "Manifest file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    const auto* sub = app.get_subcommands().front();
    try {
        if (sub == replay) return cmd_replay(replay_manifest, out, err);

        ToolConfig config = resolve(flags);
        if (sub == eval && flags.rule_radius) config.rule_radius = *flags.rule_radius;
        auto set_path = [&](const char* key, const std::string& value) {
            if (!value.empty()) paths[key] = value;
        };
        set_path("input", input);
        set_path("output", output);
        set_path("csv", csv);
        set_path("manifest", manifest);
        set_path("series_prefix", series_prefix);
        set_path("out_dir", out_dir);
        if (verbose) paths["verbose"] = "1";
        if (sub == sweep_cmd) config.sweep_config().validate();
        return dispatch(sub->get_name(), config, paths, out, err);
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kCapacityError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kDataError;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const RangeError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ArgumentError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace caid::cli
