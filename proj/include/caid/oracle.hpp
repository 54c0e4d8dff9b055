#pragma once

// Exhaustive ground truth for small instances.

#include <cstdint>
#include <vector>

#include "caid/ca_core.hpp"
#include "caid/observation.hpp"

namespace caid {

struct OracleBudget {
    std::uint64_t max_rules = 1ULL << 16;
    std::uint64_t max_gap_sequences = 1ULL << 20;  // bound on T^(N-1) per observation
    std::uint64_t max_completions = 1ULL << 16;    // bound on 2^unknowns per observation
};

// True iff every observation admits a gap sequence in [1, T] along which the
// rule's completion reproduces every known cell. Depth-first over gaps,
// pruned at the first mismatching row. Throws CapacityError when some
// observation needs more than budget.max_gap_sequences sequences.
bool verify_fit(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound,
                const OracleBudget& budget = {});

// The same question answered from the definition of fitting: some spatially
// complete filling of the observation is hit by the forward trajectory of its
// first row at strictly increasing time steps whose differences lie in
// [1, T]. Enumerates completions, so it is limited by budget.max_completions.
bool fits_by_definition(const LookupTable& lut, const Observation& obs, std::uint32_t gap_bound,
                        const OracleBudget& budget = {});

// Ascending rule numbers of every radius-r rule fitting the set. Radius 2
// and above is refused with CapacityError.
std::vector<std::uint64_t> enumerate_fitting_rules(const ObservationSet& set, int radius, std::uint32_t gap_bound,
                                                   const OracleBudget& budget = {}, unsigned threads = 1);

}  // namespace caid
