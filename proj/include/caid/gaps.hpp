#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace caid {

// Numbers of rule applications between consecutive recorded rows of one
// observation: entry n is the gap between rows n and n+1 (0-based).
class GapSequence {
public:
    GapSequence() = default;
    GapSequence(std::initializer_list<std::uint32_t> gaps);
    explicit GapSequence(std::vector<std::uint32_t> gaps);

    std::size_t size() const noexcept { return gaps_.size(); }
    bool empty() const noexcept { return gaps_.empty(); }
    std::uint32_t operator[](std::size_t n) const noexcept { return gaps_[n]; }
    const std::vector<std::uint32_t>& values() const noexcept { return gaps_; }

    // Throws ArgumentError unless every gap lies in [1, bound].
    void check_bound(std::uint32_t bound) const;

    // Cumulative sums: the time step at which each row after the first was recorded.
    std::vector<std::uint64_t> timesteps() const;

    bool operator==(const GapSequence&) const = default;

private:
    std::vector<std::uint32_t> gaps_;
};

// Inverse of GapSequence::timesteps(); throws ArgumentError unless strictly increasing and positive.
GapSequence gaps_from_timesteps(const std::vector<std::uint64_t>& timesteps);

}  // namespace caid
