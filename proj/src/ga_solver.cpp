#include "caid/ga_solver.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "caid/error_measures.hpp"
#include "caid/errors.hpp"

namespace caid {

namespace {

// Stream roles within one run.
enum : std::uint64_t { kInit = 1, kSubset, kFitness, kConfirm, kEvolve, kRotate };

class RouletteWheel {
public:
    explicit RouletteWheel(std::span<const Individual> population) : cumulative_(population.size()) {
        std::int64_t total = 0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            total += std::max<std::int64_t>(population[i].fitness, 0);
            cumulative_[i] = total;
        }
    }

    std::size_t draw(Rng& rng) const {
        const std::int64_t total = cumulative_.empty() ? 0 : cumulative_.back();
        if (total == 0) return uniform_int<std::size_t>(rng, 0, cumulative_.size() - 1);
        const auto x = uniform_int<std::int64_t>(rng, 0, total - 1);
        return static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), x) -
                                        cumulative_.begin());
    }

private:
    std::vector<std::int64_t> cumulative_;
};

bool fitter(const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.lut < b.lut;
}

// Uniform sample of `count` distinct values from [0, n), in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(idx[i], idx[uniform_int<std::size_t>(rng, i, n - 1)]);
    }
    idx.resize(count);
    return idx;
}

}  // namespace

void SolverConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError(what); };
    if (radius < 0 || radius > kMaxRadius) fail("radius must lie in [0, " + std::to_string(kMaxRadius) + "]");
    if (population == 0) fail("population must be positive");
    if (elite > population / 4) fail("elite size must not exceed a quarter of the population");
    if (!(flip_probability > 0.0 && flip_probability < 1.0)) fail("flip probability must lie in (0, 1)");
    if (gap_bound == 0) fail("gap bound must be positive");
    if (max_generations == 0) fail("max generations must be positive");
    if (subset_size == 0) fail("subset size must be positive");
    if (resamples == 0) fail("resamples must be positive");
    if (confirm_resamples == 0) fail("confirm resamples must be positive");
    if (elite_off_after == 0) fail("elite-off trigger must be positive");
    if (elite_on_after == 0) fail("elite-on delay must be positive");
}

const char* to_string(HaltReason reason) noexcept {
    return reason == HaltReason::solved ? "solved" : "generation-limit";
}

bool RunReport::same_outcome(const RunReport& other) const {
    return best_lut == other.best_lut && best_rule == other.best_rule && best_fitness == other.best_fitness &&
           max_fitness == other.max_fitness && generations == other.generations && halt == other.halt &&
           history == other.history && seed == other.seed;
}

std::int64_t fitness(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound, std::uint64_t seed,
                     std::uint32_t resamples) {
    const auto counts = set_counts(set);
    const auto err = ErrorEvaluator(lut).set_estimate(set, {}, gap_bound, seed, resamples, false);
    return static_cast<std::int64_t>(counts.known - counts.columns) - static_cast<std::int64_t>(err.value);
}

const Individual& select_parent(std::span<const Individual> population, Rng& rng) {
    if (population.empty()) throw ArgumentError("cannot select from an empty population");
    return population[RouletteWheel(population).draw(rng)];
}

LookupTable crossover(const LookupTable& a, const LookupTable& b, Rng& rng) {
    if (a.radius() != b.radius()) throw ArgumentError("crossover of chromosomes with different lengths");
    LookupTable child(a.radius());
    auto out = child.words();
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t w = 0; w < out.size(); ++w) {
        const Word pick_a = rng();
        out[w] = (wa[w] & pick_a) | (wb[w] & ~pick_a);
    }
    out.back() &= tail_mask(child.size());
    return child;
}

LookupTable mutate(LookupTable lut, double flip_probability, Rng& rng) {
    std::bernoulli_distribution flip(flip_probability);
    for (std::size_t v = 0; v < lut.size(); ++v) {
        if (flip(rng)) lut.set_output(v, !lut.output(v));
    }
    return lut;
}

std::vector<Individual> evolve_generation(std::span<const Individual> population, const SolverConfig& config,
                                          bool elite_active, Rng& rng) {
    if (population.empty()) throw ArgumentError("cannot evolve an empty population");
    const RouletteWheel wheel(population);
    std::vector<Individual> next;
    next.reserve(config.population);
    for (std::size_t i = 0; i < config.population; ++i) {
        const auto& a = population[wheel.draw(rng)];
        const auto& b = population[wheel.draw(rng)];
        next.push_back({mutate(crossover(a.lut, b.lut, rng), config.flip_probability, rng), 0});
    }
    const std::size_t elite = std::min({config.elite, population.size(), next.size()});
    if (elite_active && elite > 0) {
        std::vector<std::size_t> order(population.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(elite), order.end(),
                          [&](std::size_t i, std::size_t j) { return fitter(population[i], population[j]); });
        const auto slots = sample_indices(next.size(), elite, rng);
        for (std::size_t e = 0; e < elite; ++e) next[slots[e]] = population[order[e]];
    }
    return next;
}

void evaluate_population(std::span<Individual> population, const ObservationSet& set,
                         std::span<const std::size_t> subset, std::uint32_t gap_bound, std::uint32_t resamples,
                         std::uint64_t seed, unsigned threads) {
    std::int64_t max_fit = 0;
    for (auto i : subset) max_fit += static_cast<std::int64_t>(count_known(set[i]) - set[i].cols());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < population.size(); i = next++) {
            ErrorEvaluator eval(population[i].lut);
            const auto err = eval.set_estimate(set, subset, gap_bound, derive_seed(seed, {i}), resamples, false);
            population[i].fitness = max_fit - static_cast<std::int64_t>(err.value);
        }
    };
    const unsigned n = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(population.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
}

RunReport run(const ObservationSet& set, const SolverConfig& config, const GenerationObserver& observer) {
    config.validate();
    if (set.size() == 0) throw ArgumentError("empty observation set");
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t seed = config.seed;

    const auto counts = set_counts(set);
    const auto max_fitness = static_cast<std::int64_t>(counts.known - counts.columns);

    Rng subset_rng = make_rng(seed, {kSubset});
    std::vector<std::size_t> subset =
        sample_indices(set.size(), std::min(config.subset_size, set.size()), subset_rng);

    Rng init_rng = make_rng(seed, {kInit});
    std::vector<Individual> population;
    population.reserve(config.population);
    for (std::size_t i = 0; i < config.population; ++i) {
        population.push_back({LookupTable::random(config.radius, init_rng), 0});
    }

    const std::uint32_t confirm = std::max(config.confirm_resamples, config.resamples);
    RunReport report;
    report.seed = seed;
    report.max_fitness = max_fitness;
    report.best_fitness = -1;

    bool elite_active = true;
    std::size_t stagnant = 0;
    std::size_t off_for = 0;
    std::int64_t prev_max = 0;

    for (std::size_t g = 1; g <= config.max_generations; ++g) {
        evaluate_population(population, set, subset, config.gap_bound, config.resamples,
                            derive_seed(seed, {kFitness, g}), config.threads);

        const auto best_it = std::min_element(population.begin(), population.end(), fitter);
        std::int64_t sum = 0;
        for (const auto& ind : population) sum += ind.fitness;

        GenerationStats stats;
        stats.generation = g;
        stats.max_fitness = best_it->fitness;
        stats.mean_fitness = static_cast<double>(sum) / static_cast<double>(population.size());
        stats.best_rule = best_it->lut.rule_number_string();

        const auto full_error =
            ErrorEvaluator(best_it->lut).set_estimate(set, {}, config.gap_bound, derive_seed(seed, {kConfirm, g}),
                                                      confirm, false);
        const std::int64_t full = max_fitness - static_cast<std::int64_t>(full_error.value);
        if (full > report.best_fitness) {
            report.best_fitness = full;
            report.best_lut = best_it->lut;
        }
        report.generations = g;

        if (full == max_fitness) {
            report.halt = HaltReason::solved;
            stats.elite_active = elite_active;
            report.history.push_back(stats);
            if (observer) observer(stats);
            break;
        }

        if (g > 1) {
            if (stats.max_fitness > prev_max) {
                elite_active = true;
                stagnant = 0;
                off_for = 0;
            } else {
                ++stagnant;
            }
        }
        if (elite_active && stagnant >= config.elite_off_after) {
            elite_active = false;
            stagnant = 0;
            off_for = 0;
        } else if (!elite_active && ++off_for >= config.elite_on_after) {
            elite_active = true;
            stagnant = 0;
        }
        prev_max = stats.max_fitness;

        stats.elite_active = elite_active;
        report.history.push_back(stats);
        if (observer) observer(stats);

        Rng evolve_rng = make_rng(seed, {kEvolve, g});
        population = evolve_generation(population, config, elite_active, evolve_rng);

        // Swap one subset slot for an observation not already in the subset
        // (or the slot's own observation, which leaves the subset unchanged).
        Rng rotate_rng = make_rng(seed, {kRotate, g});
        const auto slot = uniform_int<std::size_t>(rotate_rng, 0, subset.size() - 1);
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (i == subset[slot] || std::find(subset.begin(), subset.end(), i) == subset.end()) {
                candidates.push_back(i);
            }
        }
        subset[slot] = candidates[uniform_int<std::size_t>(rotate_rng, 0, candidates.size() - 1)];
    }
    report.best_rule = report.best_lut.rule_number_string();
    report.wall_time =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return report;
}

}  // namespace caid
