#pragma once

// Synthetic observation sets, their degradation into increasingly partial
// sets, and sweeps of solver runs over the degradation levels.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "caid/ca_core.hpp"
#include "caid/ga_solver.hpp"
#include "caid/observation.hpp"
#include "caid/random.hpp"

namespace caid {

// `count` observations, each from a uniform random initial configuration of
// `cols` cells, followed by `rows - 1` configurations reached after uniform
// random gaps in [1, T]. The result is spatially complete.
ObservationSet generate_set(const LookupTable& rule, std::size_t count, std::size_t rows, std::size_t cols,
                            std::uint32_t gap_bound, Rng& rng);

// Levels 0..k_max; level k masks `removal` further known cells of level k-1.
// Throws CapacityError up front when removal * k_max exceeds the maskable cells.
std::vector<ObservationSet> degrade_series(const ObservationSet& set, std::uint64_t removal, std::size_t k_max,
                                           Rng& rng);

struct SweepConfig {
    std::uint64_t rule = 180;
    int rule_radius = 1;
    std::size_t observations = 64;
    std::size_t rows = 69;
    std::size_t cols = 69;
    std::uint64_t removal = 2000;
    std::size_t k_max = 150;
    std::size_t repetitions = 20;
    SolverConfig solver;  // solver.gap_bound also bounds the generated gaps
    std::uint64_t seed = 0;
    unsigned threads = 1;  // concurrent solver runs

    // Throws ConfigError.
    void validate() const;
};

struct SweepRun {
    std::size_t k = 0;
    std::size_t rep = 0;  // 1-based
    bool solved = false;
    std::size_t generations = 0;
    std::string best_rule;
    std::int64_t wall_ms = 0;
    std::string error;  // non-empty when the run threw

    bool operator==(const SweepRun&) const = default;
};

struct SweepLevel {
    std::size_t k = 0;
    std::size_t successes = 0;
    std::optional<std::size_t> min_generations;
    std::optional<double> avg_generations;
    std::optional<std::size_t> max_generations;

    bool operator==(const SweepLevel&) const = default;
};

struct SweepResult {
    std::vector<SweepRun> runs;  // ordered by (k, rep)
    std::vector<SweepLevel> levels;
};

// Seed for the solver run at level k, repetition rep.
std::uint64_t sweep_run_seed(std::uint64_t master, std::size_t k, std::size_t rep);
// The level-0 set of repetition rep; shared by every rule swept with the same master seed.
ObservationSet sweep_base_set(const SweepConfig& cfg, std::size_t rep);

using SweepObserver = std::function<void(const SweepRun&)>;

SweepResult sweep(const SweepConfig& cfg, const SweepObserver& observer = {});

// Aggregates runs into per-level statistics over successful runs.
std::vector<SweepLevel> summarize(const std::vector<SweepRun>& runs, std::size_t k_max);

// Header: k,rep,solved,generations,best_rule,wall_ms
void write_runs_csv(std::ostream& out, const SweepResult& result, bool timing = true);
// Header: k,successes,min_gen,avg_gen,max_gen (empty cells when nothing succeeded)
void write_summary_csv(std::ostream& out, const SweepResult& result);

// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_number(double value);

}  // namespace caid
