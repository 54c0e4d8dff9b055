#pragma once

// Error of a candidate rule against partial observations with unknown time
// gaps.
//
// Three measures are provided:
//  * error_with_timesteps: rows compared against a single forward run from
//    the first row at absolute time steps;
//  * error_with_gaps: rows compared pairwise along the rule's completion of
//    the observation for a fixed gap sequence;
//  * the minimum of error_with_gaps over all gap sequences bounded by T,
//    computed exactly (min_error_exact, exponential in the row count) or
//    estimated row by row (min_error_sampled). The estimate picks, for each
//    row, a gap minimising that row's error alone, breaking ties at random.
//    It never undercuts the exact minimum, and equals it when the
//    observation has no unknown cells.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "caid/ca_core.hpp"
#include "caid/gaps.hpp"
#include "caid/observation.hpp"
#include "caid/random.hpp"

namespace caid {

struct ErrorEstimate {
    std::uint64_t value = 0;
    std::vector<GapSequence> gaps;  // one per observation
    bool exact = false;

    bool operator==(const ErrorEstimate&) const = default;
};

// Positions where both rows are known and differ.
std::uint64_t dist(std::span<const Cell> a, std::span<const Cell> b);
std::vector<Cell> partial_row(std::string_view cells);

std::uint64_t error_with_timesteps(const LookupTable& lut, const Observation& obs,
                                   const std::vector<std::uint64_t>& timesteps);
std::uint64_t error_with_gaps(const LookupTable& lut, const Observation& obs, const GapSequence& gaps);

// Throws CapacityError when T^(N-1) > budget.
ErrorEstimate min_error_exact(const LookupTable& lut, const Observation& obs, std::uint32_t gap_bound,
                              std::uint64_t budget);
ErrorEstimate min_error_sampled(const LookupTable& lut, const Observation& obs, std::uint32_t gap_bound, Rng& rng);

// Sum over observations of the best of `resamples` sampled estimates. The
// stream for observation i, resample j is derived from (seed, i, j).
ErrorEstimate min_error_set(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound,
                            std::uint64_t seed, std::uint32_t resamples);

// Reusable evaluation state for one rule: steppers per row width plus row
// buffers. The free functions above construct one per call; hot loops keep
// one per worker. Not thread-safe.
class ErrorEvaluator {
public:
    explicit ErrorEvaluator(const LookupTable& lut);

    const LookupTable& lut() const noexcept { return lut_; }

    ErrorEstimate sampled(const Observation& obs, std::uint32_t gap_bound, Rng& rng);
    // Value only; skips recording the chosen gaps.
    std::uint64_t sampled_value(const Observation& obs, std::uint32_t gap_bound, Rng& rng);
    ErrorEstimate exact(const Observation& obs, std::uint32_t gap_bound, std::uint64_t budget);
    std::uint64_t with_gaps(const Observation& obs, const GapSequence& gaps);

    // Best of `resamples` sampled runs over observations obs_indices (all when empty).
    ErrorEstimate set_estimate(const ObservationSet& set, std::span<const std::size_t> obs_indices,
                               std::uint32_t gap_bound, std::uint64_t seed, std::uint32_t resamples,
                               bool record_gaps = true);

private:
    Stepper& stepper(std::size_t width);
    std::uint64_t sample(const Observation& obs, std::uint32_t gap_bound, Rng& rng, std::vector<std::uint32_t>* chosen);
    void exact_search(const Observation& obs, std::size_t row, std::uint64_t acc);

    LookupTable lut_;
    std::map<std::size_t, Stepper> steppers_;
    std::vector<Word> current_;
    std::vector<Word> evolved_;
    std::vector<std::uint64_t> row_errors_;
    std::vector<std::uint32_t> ties_;

    // exact search state
    std::uint32_t bound_ = 0;
    std::uint64_t best_ = 0;
    std::vector<std::uint32_t> path_;
    std::vector<std::uint32_t> best_path_;
    std::vector<Word> exact_rows_;
};

// Number of gap sequences T^(N-1) for an N-row observation, saturating at UINT64_MAX.
std::uint64_t gap_sequence_count(std::uint32_t gap_bound, std::size_t rows);

}  // namespace caid
