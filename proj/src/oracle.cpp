#include "caid/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "caid/error_measures.hpp"
#include "caid/errors.hpp"

namespace caid {

namespace {

// Forward evolutions of rows, memoized by row content.
class EvolutionCache {
public:
    EvolutionCache(const LookupTable& lut, std::size_t width, std::uint32_t gap_bound)
        : stepper_(lut, width), words_(words_for(width)), bound_(gap_bound) {}

    // Rows A^1(row) .. A^T(row), concatenated.
    const std::vector<Word>& evolutions(std::span<const Word> row) {
        std::vector<Word> key(row.begin(), row.end());
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<Word> out(static_cast<std::size_t>(bound_) * words_);
        std::span<const Word> prev = row;
        for (std::uint32_t t = 0; t < bound_; ++t) {
            std::span<Word> dst(out.data() + t * words_, words_);
            stepper_.step(prev, dst);
            prev = dst;
        }
        return memo_.emplace(std::move(key), std::move(out)).first->second;
    }

private:
    Stepper stepper_;
    std::size_t words_;
    std::uint32_t bound_;
    std::map<std::vector<Word>, std::vector<Word>> memo_;
};

bool row_matches(std::span<const Word> evolved, std::span<const Word> values, std::span<const Word> known) {
    for (std::size_t w = 0; w < evolved.size(); ++w) {
        if ((evolved[w] ^ values[w]) & known[w]) return false;
    }
    return true;
}

bool search(const Observation& obs, EvolutionCache& cache, std::size_t row, std::vector<Word> current) {
    if (row + 1 == obs.rows()) return true;
    const std::size_t words = obs.words_per_row();
    const auto values = obs.row_values(row + 1);
    const auto known = obs.row_known(row + 1);
    // std::map nodes stay put while deeper calls insert
    const std::vector<Word>& evolved = cache.evolutions(current);
    const std::size_t bound = evolved.size() / words;
    for (std::size_t t = 0; t < bound; ++t) {
        std::span<const Word> e(evolved.data() + t * words, words);
        if (!row_matches(e, values, known)) continue;
        std::vector<Word> next(words);
        for (std::size_t w = 0; w < words; ++w) next[w] = (values[w] & known[w]) | (e[w] & ~known[w]);
        if (search(obs, cache, row + 1, std::move(next))) return true;
    }
    return false;
}

void check_gap_budget(const ObservationSet& set, std::uint32_t gap_bound, const OracleBudget& budget) {
    if (gap_bound == 0) throw ArgumentError("gap bound must be positive");
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto count = gap_sequence_count(gap_bound, set[i].rows());
        if (count > budget.max_gap_sequences) {
            throw CapacityError("observation " + std::to_string(i + 1) + " needs " + std::to_string(gap_bound) + "^" +
                                std::to_string(set[i].rows() - 1) + " gap sequences, over the budget of " +
                                std::to_string(budget.max_gap_sequences));
        }
    }
}

bool fits_unchecked(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound) {
    for (const auto& obs : set) {
        EvolutionCache cache(lut, obs.cols(), gap_bound);
        const auto first = obs.row_values(0);
        if (!search(obs, cache, 0, std::vector<Word>(first.begin(), first.end()))) return false;
    }
    return true;
}

}  // namespace

bool verify_fit(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound,
                const OracleBudget& budget) {
    check_gap_budget(set, gap_bound, budget);
    return fits_unchecked(lut, set, gap_bound);
}

bool fits_by_definition(const LookupTable& lut, const Observation& obs, std::uint32_t gap_bound,
                        const OracleBudget& budget) {
    if (gap_bound == 0) throw ArgumentError("gap bound must be positive");
    const std::size_t rows = obs.rows();
    const std::size_t horizon = (rows - 1) * gap_bound;
    const auto trajectory = diagram(lut, obs.configuration(0), horizon + 1);
    for (const auto& candidate : completions(obs, budget.max_completions)) {
        // reachable[tau]: rows 2..n+1 matched with the last one at time tau
        std::vector<bool> reachable(horizon + 1, false);
        reachable[0] = true;
        for (std::size_t n = 1; n < rows; ++n) {
            const Configuration target = candidate.configuration(n);
            std::vector<bool> next(horizon + 1, false);
            for (std::size_t tau = 0; tau <= horizon; ++tau) {
                if (!reachable[tau]) continue;
                for (std::size_t t = 1; t <= gap_bound && tau + t <= horizon; ++t) {
                    if (trajectory[tau + t] == target) next[tau + t] = true;
                }
            }
            reachable = std::move(next);
        }
        if (std::find(reachable.begin(), reachable.end(), true) != reachable.end()) return true;
    }
    return false;
}

std::vector<std::uint64_t> enumerate_fitting_rules(const ObservationSet& set, int radius, std::uint32_t gap_bound,
                                                   const OracleBudget& budget, unsigned threads) {
    if (radius < 0) throw RangeError("radius must be non-negative");
    if (radius >= 2) {
        throw CapacityError("rule enumeration at radius " + std::to_string(radius) + " is infeasible (2^" +
                            std::to_string(1ULL << (2 * radius + 1)) + " rules)");
    }
    const std::uint64_t rule_count = std::uint64_t{1} << (std::uint64_t{1} << (2 * radius + 1));
    if (rule_count > budget.max_rules) {
        throw CapacityError(std::to_string(rule_count) + " rules exceed the budget of " +
                            std::to_string(budget.max_rules));
    }
    check_gap_budget(set, gap_bound, budget);

    std::vector<std::uint8_t> fits(rule_count, 0);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t r = next++; r < rule_count; r = next++) {
            fits[r] = fits_unchecked(lut_from_number(r, radius), set, gap_bound);
        }
    };
    const unsigned n = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(rule_count)));
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    pool.clear();

    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < rule_count; ++r) {
        if (fits[r]) out.push_back(r);
    }
    return out;
}

}  // namespace caid
