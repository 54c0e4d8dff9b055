#pragma once

// Partial space-time observations and observation sets.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "caid/ca_core.hpp"
#include "caid/gaps.hpp"
#include "caid/random.hpp"

namespace caid {

enum class Cell : std::uint8_t { zero = 0, one = 1, unknown = 2 };

char to_char(Cell cell) noexcept;

// An N x M grid over {0, 1, ?} whose first row is fully known. Row n > 0 is
// the configuration at some unknown later time step. Indices are 0-based.
class Observation {
public:
    Observation() = default;
    // Rows as strings over {0, 1, ?}; throws ArgumentError on ragged rows,
    // other characters, or unknowns in the first row.
    explicit Observation(const std::vector<std::string>& rows);
    // A spatially complete observation made of the given configurations.
    explicit Observation(const std::vector<Configuration>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t words_per_row() const noexcept { return words_per_row_; }

    Cell at(std::size_t n, std::size_t m) const noexcept;
    // Throws ArgumentError when marking a first-row cell unknown.
    void set(std::size_t n, std::size_t m, Cell cell);

    bool known(std::size_t n, std::size_t m) const noexcept {
        return (known_[n * words_per_row_ + m / kWordBits] >> (m % kWordBits)) & 1U;
    }

    // Packed cell values (unknown cells read as 0) and known-cell mask of row n.
    std::span<const Word> row_values(std::size_t n) const noexcept {
        return {values_.data() + n * words_per_row_, words_per_row_};
    }
    std::span<const Word> row_known(std::size_t n) const noexcept {
        return {known_.data() + n * words_per_row_, words_per_row_};
    }
    bool row_complete(std::size_t n) const noexcept;

    std::size_t unknown_count() const noexcept;
    bool spatially_complete() const noexcept { return unknown_count() == 0; }

    // Row n as a configuration; only meaningful for complete rows.
    Configuration configuration(std::size_t n) const;
    std::vector<std::string> to_strings() const;

    bool operator==(const Observation&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<Word> values_;
    std::vector<Word> known_;
};

// Provenance carried along with synthetic sets.
struct SetMetadata {
    std::optional<std::uint64_t> rule;
    std::optional<std::uint32_t> gap_bound;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> k;

    bool operator==(const SetMetadata&) const = default;
};

class ObservationSet {
public:
    ObservationSet() = default;
    // Throws ArgumentError when `observations` is empty.
    explicit ObservationSet(std::vector<Observation> observations, SetMetadata metadata = {});

    std::size_t size() const noexcept { return observations_.size(); }
    const Observation& operator[](std::size_t i) const noexcept { return observations_[i]; }
    Observation& operator[](std::size_t i) noexcept { return observations_[i]; }
    auto begin() const noexcept { return observations_.begin(); }
    auto end() const noexcept { return observations_.end(); }

    const std::vector<Observation>& observations() const noexcept { return observations_; }
    const SetMetadata& metadata() const noexcept { return metadata_; }
    SetMetadata& metadata() noexcept { return metadata_; }

    bool operator==(const ObservationSet&) const = default;

private:
    std::vector<Observation> observations_;
    SetMetadata metadata_;
};

struct SetCounts {
    std::uint64_t known = 0;    // C: observed states over the whole set
    std::uint64_t columns = 0;  // M: total number of columns

    bool operator==(const SetCounts&) const = default;
};

std::uint64_t count_known(const Observation& obs);
SetCounts set_counts(const ObservationSet& set);

// Every spatially complete observation agreeing with `obs` on its known
// cells. Unknowns are filled in row-major order, the first unknown being the
// most significant digit. Throws CapacityError when 2^unknowns > limit.
std::vector<Observation> completions(const Observation& obs, std::uint64_t limit);

// Fills each unknown cell of row n+1 from the rule evolved gaps[n] steps
// from the already completed row n.
Observation a_completion(const Observation& obs, const LookupTable& lut, const GapSequence& gaps);

// Replaces `count` uniformly chosen known cells outside first rows with
// unknowns. Throws CapacityError when fewer maskable cells exist.
ObservationSet mask_random(const ObservationSet& set, std::uint64_t count, Rng& rng);

}  // namespace caid
