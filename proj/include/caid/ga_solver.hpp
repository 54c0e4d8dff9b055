#pragma once

// Genetic algorithm searching lookup tables of a fixed radius for a rule
// that fits an observation set.
//
// Fitness is C - M - E, where E is the sampled gap-minimised error, evaluated
// on a rotating subset of the observations. Parents are drawn by roulette
// wheel, combined by uniform crossover and mutated bit by bit. The fittest
// individuals of the previous generation replace random offspring while
// elite survival is active; it switches off after a run of generations with
// no improvement of the maximum and back on after a delay or on improvement. Each
// generation, the subset-best individual is scored on the whole set and the
// run stops as soon as it reaches the maximum C - M.

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "caid/ca_core.hpp"
#include "caid/observation.hpp"
#include "caid/random.hpp"

namespace caid {

struct SolverConfig {
    int radius = 2;
    std::size_t population = 512;
    std::size_t elite = 32;
    double flip_probability = 0.01;
    std::uint32_t gap_bound = 10;
    std::size_t max_generations = 5000;
    std::size_t subset_size = 8;
    std::uint32_t resamples = 1;
    // Resamples used when scoring the subset-best individual on the full set.
    std::uint32_t confirm_resamples = 8;
    // Generations without a rise in maximum fitness before elite survival stops.
    std::size_t elite_off_after = 50;
    // Generations elite survival stays off unless fitness improves first.
    std::size_t elite_on_after = 20;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    // Throws ConfigError.
    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

struct Individual {
    LookupTable lut;
    std::int64_t fitness = 0;
};

enum class HaltReason { solved, generation_limit };

const char* to_string(HaltReason reason) noexcept;

struct GenerationStats {
    std::size_t generation = 0;
    std::int64_t max_fitness = 0;
    double mean_fitness = 0.0;
    std::string best_rule;
    bool elite_active = true;

    bool operator==(const GenerationStats&) const = default;
};

struct RunReport {
    LookupTable best_lut;
    std::string best_rule;          // decimal rule number of best_lut
    std::int64_t best_fitness = 0;  // on the full set
    std::int64_t max_fitness = 0;   // C - M of the full set
    std::size_t generations = 0;
    HaltReason halt = HaltReason::generation_limit;
    std::vector<GenerationStats> history;
    std::uint64_t seed = 0;
    std::chrono::milliseconds wall_time{0};

    // Everything except wall_time.
    bool same_outcome(const RunReport& other) const;
};

// C - M - min_error_set(...).
std::int64_t fitness(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound, std::uint64_t seed,
                     std::uint32_t resamples);

// Roulette wheel over the cached fitness values; uniform when all are zero.
const Individual& select_parent(std::span<const Individual> population, Rng& rng);

// Each bit taken from either parent with probability 1/2.
LookupTable crossover(const LookupTable& a, const LookupTable& b, Rng& rng);

// Each bit flipped independently with probability p.
LookupTable mutate(LookupTable lut, double flip_probability, Rng& rng);

// P offspring by selection, crossover and mutation. With elite survival
// active, the config.elite fittest parents (ties by lower rule number)
// overwrite that many distinct, uniformly chosen offspring. Offspring carry
// fitness 0 until evaluated.
std::vector<Individual> evolve_generation(std::span<const Individual> population, const SolverConfig& config,
                                          bool elite_active, Rng& rng);

// Subset fitness of every individual; the stream for individual i is keyed
// by (seed, i), so results do not depend on the thread count.
void evaluate_population(std::span<Individual> population, const ObservationSet& set,
                         std::span<const std::size_t> subset, std::uint32_t gap_bound, std::uint32_t resamples,
                         std::uint64_t seed, unsigned threads);

using GenerationObserver = std::function<void(const GenerationStats&)>;

RunReport run(const ObservationSet& set, const SolverConfig& config, const GenerationObserver& observer = {});

}  // namespace caid
