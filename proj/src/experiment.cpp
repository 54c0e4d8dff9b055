#include "caid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <mutex>
#include <thread>

#include "caid/errors.hpp"

namespace caid {

namespace {

enum : std::uint64_t { kSet = 11, kMask, kSolve };

std::uint64_t maskable_cells(const ObservationSet& set) {
    std::uint64_t count = 0;
    for (const auto& obs : set) count += count_known(obs) - obs.cols();
    return count;
}

}  // namespace

ObservationSet generate_set(const LookupTable& rule, std::size_t count, std::size_t rows, std::size_t cols,
                            std::uint32_t gap_bound, Rng& rng) {
    if (count == 0) throw ArgumentError("need at least one observation");
    if (rows < 2) throw ArgumentError("observations need at least two rows");
    if (cols == 0) throw ArgumentError("observations need at least one column");
    if (gap_bound == 0) throw ArgumentError("gap bound must be positive");
    Stepper stepper(rule, cols);
    std::vector<Observation> observations;
    observations.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<Configuration> recorded;
        recorded.reserve(rows);
        recorded.push_back(Configuration::random(cols, rng));
        for (std::size_t n = 1; n < rows; ++n) {
            Configuration next = recorded.back();
            const auto gap = uniform_int<std::uint32_t>(rng, 1, gap_bound);
            for (std::uint32_t t = 0; t < gap; ++t) stepper.step(next.words(), next.words());
            recorded.push_back(std::move(next));
        }
        observations.emplace_back(recorded);
    }
    SetMetadata meta;
    if (rule.size() <= kWordBits) meta.rule = rule.rule_number();
    meta.gap_bound = gap_bound;
    meta.k = 0;
    return ObservationSet(std::move(observations), meta);
}

std::vector<ObservationSet> degrade_series(const ObservationSet& set, std::uint64_t removal, std::size_t k_max,
                                           Rng& rng) {
    const std::uint64_t available = maskable_cells(set);
    if (k_max > 0 && removal > available / k_max) {
        throw CapacityError(std::to_string(k_max) + " levels of " + std::to_string(removal) +
                            " removals exceed the " + std::to_string(available) + " maskable cells");
    }
    std::vector<ObservationSet> series;
    series.reserve(k_max + 1);
    series.push_back(set);
    for (std::size_t k = 1; k <= k_max; ++k) {
        series.push_back(mask_random(series.back(), removal, rng));
        series.back().metadata().k = k;
    }
    return series;
}

void SweepConfig::validate() const {
    solver.validate();
    if (observations == 0) throw ConfigError("observations must be positive");
    if (rows < 2) throw ConfigError("rows must be at least 2");
    if (cols == 0) throw ConfigError("cols must be positive");
    if (repetitions == 0) throw ConfigError("repetitions must be positive");
    const std::uint64_t maskable = observations * (rows - 1) * cols;
    if (k_max > 0 && removal > maskable / k_max) {
        throw ConfigError("removal * k_max = " + std::to_string(removal) + " * " + std::to_string(k_max) +
                          " exceeds the " + std::to_string(maskable) + " maskable cells");
    }
}

std::uint64_t sweep_run_seed(std::uint64_t master, std::size_t k, std::size_t rep) {
    return derive_seed(master, {kSolve, k, rep});
}

ObservationSet sweep_base_set(const SweepConfig& cfg, std::size_t rep) {
    Rng rng = make_rng(cfg.seed, {kSet, rep});
    auto set = generate_set(lut_from_number(cfg.rule, cfg.rule_radius), cfg.observations, cfg.rows, cfg.cols,
                            cfg.solver.gap_bound, rng);
    set.metadata().seed = cfg.seed;
    return set;
}

SweepResult sweep(const SweepConfig& cfg, const SweepObserver& observer) {
    cfg.validate();
    SweepResult result;
    result.runs.resize((cfg.k_max + 1) * cfg.repetitions);
    std::mutex observer_mutex;

    // One repetition at a time keeps only one degradation series in memory.
    for (std::size_t rep = 1; rep <= cfg.repetitions; ++rep) {
        Rng mask_rng = make_rng(cfg.seed, {kMask, rep});
        const auto series = degrade_series(sweep_base_set(cfg, rep), cfg.removal, cfg.k_max, mask_rng);

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t k = next++; k <= cfg.k_max; k = next++) {
                SweepRun record;
                record.k = k;
                record.rep = rep;
                try {
                    SolverConfig solver = cfg.solver;
                    solver.seed = sweep_run_seed(cfg.seed, k, rep);
                    solver.threads = 1;
                    const auto report = run(series[k], solver);
                    record.solved = report.halt == HaltReason::solved;
                    record.generations = report.generations;
                    record.best_rule = report.best_rule;
                    record.wall_ms = report.wall_time.count();
                } catch (const std::exception& e) {
                    record.error = e.what();
                }
                result.runs[k * cfg.repetitions + (rep - 1)] = record;
                if (observer) {
                    std::lock_guard lock(observer_mutex);
                    observer(record);
                }
            }
        };
        const unsigned n = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.k_max + 1)));
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
    }
    result.levels = summarize(result.runs, cfg.k_max);
    return result;
}

std::vector<SweepLevel> summarize(const std::vector<SweepRun>& runs, std::size_t k_max) {
    std::vector<SweepLevel> levels(k_max + 1);
    std::vector<std::size_t> total(k_max + 1, 0);
    for (std::size_t k = 0; k <= k_max; ++k) levels[k].k = k;
    for (const auto& r : runs) {
        if (r.k > k_max || !r.solved) continue;
        auto& level = levels[r.k];
        ++level.successes;
        total[r.k] += r.generations;
        level.min_generations = std::min(level.min_generations.value_or(r.generations), r.generations);
        level.max_generations = std::max(level.max_generations.value_or(r.generations), r.generations);
    }
    for (std::size_t k = 0; k <= k_max; ++k) {
        if (levels[k].successes > 0) {
            levels[k].avg_generations = static_cast<double>(total[k]) / static_cast<double>(levels[k].successes);
        }
    }
    return levels;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_runs_csv(std::ostream& out, const SweepResult& result, bool timing) {
    out << "k,rep,solved,generations,best_rule,wall_ms\n";
    for (const auto& r : result.runs) {
        out << r.k << ',' << r.rep << ',' << (r.solved ? 1 : 0) << ',' << r.generations << ',' << r.best_rule << ','
            << (timing ? r.wall_ms : 0) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const SweepResult& result) {
    out << "k,successes,min_gen,avg_gen,max_gen\n";
    for (const auto& l : result.levels) {
        out << l.k << ',' << l.successes << ',';
        if (l.min_generations) out << *l.min_generations;
        out << ',';
        if (l.avg_generations) out << format_number(*l.avg_generations);
        out << ',';
        if (l.max_generations) out << *l.max_generations;
        out << '\n';
    }
}

}  // namespace caid
