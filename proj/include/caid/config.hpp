#pragma once

// Resolved tool configuration: defaults, overridden by a JSON config file,
// overridden by command-line flags.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "caid/experiment.hpp"
#include "caid/ga_solver.hpp"
#include "caid/oracle.hpp"

namespace caid {

struct ToolConfig {
    ToolConfig() { solver.threads = 0; }  // 0: one worker per hardware thread

    SolverConfig solver;  // defaults: P=512, P_E=32, p_f=0.01, T=10, 5000 generations, s=8, r=2
    std::uint64_t rule = 150;
    int rule_radius = 1;
    std::size_t observations = 64;
    std::size_t rows = 69;
    std::size_t cols = 69;
    std::uint64_t removal = 2000;
    std::size_t k_max = 150;
    std::size_t repetitions = 20;
    OracleBudget budget;
    bool timing = false;

    SweepConfig sweep_config() const;
};

// Keys of the JSON config object, one per field above (solver fields are
// flattened): radius, population, elite, flip_probability, gap_bound,
// max_generations, subset_size, resamples, confirm_resamples,
// elite_off_after, elite_on_after, seed, threads, rule, rule_radius,
// observations, rows, cols, removal, k_max, repetitions, max_rules,
// max_gap_sequences, max_completions, timing.
//
// Throws ConfigError naming the key on unknown keys or type mismatches.
void apply_config(const nlohmann::json& doc, ToolConfig& config);
nlohmann::json to_json(const ToolConfig& config);

// Reads a config file over the defaults. A run manifest is accepted as
// well; its "config" object is used.
ToolConfig load_config(const std::filesystem::path& path);

}  // namespace caid
