#include "caid/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "caid/errors.hpp"

namespace caid {

namespace {

using nlohmann::json;

template <class T>
T read_value(const json& value, const std::string& key) {
    auto mismatch = [&](const char* expected) {
        return ConfigError("config key \"" + key + "\": expected " + expected + ", got " + value.dump());
    };
    if constexpr (std::is_same_v<T, bool>) {
        if (!value.is_boolean()) throw mismatch("a boolean");
        return value.get<bool>();
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!value.is_number()) throw mismatch("a number");
        return value.get<T>();
    } else if constexpr (std::is_signed_v<T>) {
        if (!value.is_number_integer()) throw mismatch("an integer");
        return value.get<T>();
    } else {
        if (!value.is_number_unsigned()) throw mismatch("a non-negative integer");
        const auto v = value.get<std::uint64_t>();
        if (v > std::numeric_limits<T>::max()) throw mismatch("a smaller integer");
        return static_cast<T>(v);
    }
}

using Setter = std::function<void(const json&, ToolConfig&)>;

template <class T>
std::pair<const std::string, Setter> field(const std::string& key, T ToolConfig::*member) {
    return {key, [key, member](const json& v, ToolConfig& c) { c.*member = read_value<T>(v, key); }};
}

template <class T>
std::pair<const std::string, Setter> solver_field(const std::string& key, T SolverConfig::*member) {
    return {key, [key, member](const json& v, ToolConfig& c) { c.solver.*member = read_value<T>(v, key); }};
}

template <class T>
std::pair<const std::string, Setter> budget_field(const std::string& key, T OracleBudget::*member) {
    return {key, [key, member](const json& v, ToolConfig& c) { c.budget.*member = read_value<T>(v, key); }};
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        solver_field("radius", &SolverConfig::radius),
        solver_field("population", &SolverConfig::population),
        solver_field("elite", &SolverConfig::elite),
        solver_field("flip_probability", &SolverConfig::flip_probability),
        solver_field("gap_bound", &SolverConfig::gap_bound),
        solver_field("max_generations", &SolverConfig::max_generations),
        solver_field("subset_size", &SolverConfig::subset_size),
        solver_field("resamples", &SolverConfig::resamples),
        solver_field("confirm_resamples", &SolverConfig::confirm_resamples),
        solver_field("elite_off_after", &SolverConfig::elite_off_after),
        solver_field("elite_on_after", &SolverConfig::elite_on_after),
        solver_field("seed", &SolverConfig::seed),
        solver_field("threads", &SolverConfig::threads),
        field("rule", &ToolConfig::rule),
        field("rule_radius", &ToolConfig::rule_radius),
        field("observations", &ToolConfig::observations),
        field("rows", &ToolConfig::rows),
        field("cols", &ToolConfig::cols),
        field("removal", &ToolConfig::removal),
        field("k_max", &ToolConfig::k_max),
        field("repetitions", &ToolConfig::repetitions),
        field("timing", &ToolConfig::timing),
        budget_field("max_rules", &OracleBudget::max_rules),
        budget_field("max_gap_sequences", &OracleBudget::max_gap_sequences),
        budget_field("max_completions", &OracleBudget::max_completions),
    };
    return table;
}

}  // namespace

SweepConfig ToolConfig::sweep_config() const {
    SweepConfig cfg;
    cfg.rule = rule;
    cfg.rule_radius = rule_radius;
    cfg.observations = observations;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.removal = removal;
    cfg.k_max = k_max;
    cfg.repetitions = repetitions;
    cfg.solver = solver;
    cfg.seed = solver.seed;
    cfg.threads = solver.threads;
    return cfg;
}

void apply_config(const json& doc, ToolConfig& config) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    const auto& table = setters();
    for (const auto& [key, value] : doc.items()) {
        auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key \"" + key + "\"");
        it->second(value, config);
    }
}

json to_json(const ToolConfig& c) {
    const auto& s = c.solver;
    return json{
        {"radius", s.radius},
        {"population", s.population},
        {"elite", s.elite},
        {"flip_probability", s.flip_probability},
        {"gap_bound", s.gap_bound},
        {"max_generations", s.max_generations},
        {"subset_size", s.subset_size},
        {"resamples", s.resamples},
        {"confirm_resamples", s.confirm_resamples},
        {"elite_off_after", s.elite_off_after},
        {"elite_on_after", s.elite_on_after},
        {"seed", s.seed},
        {"threads", s.threads},
        {"rule", c.rule},
        {"rule_radius", c.rule_radius},
        {"observations", c.observations},
        {"rows", c.rows},
        {"cols", c.cols},
        {"removal", c.removal},
        {"k_max", c.k_max},
        {"repetitions", c.repetitions},
        {"timing", c.timing},
        {"max_rules", c.budget.max_rules},
        {"max_gap_sequences", c.budget.max_gap_sequences},
        {"max_completions", c.budget.max_completions},
    };
}

ToolConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("tool") && doc.contains("config")) doc = doc["config"];
    ToolConfig config;
    apply_config(doc, config);
    return config;
}

}  // namespace caid
