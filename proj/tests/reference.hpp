#pragma once

// Slow, direct implementations over '0'/'1'/'?' strings, used as
// independent oracles by the tests.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ref {

using Grid = std::vector<std::string>;

// Rule number bit v holds the output for neighborhood value v, leftmost cell most significant.
inline std::string step(std::uint64_t rule, int radius, const std::string& row) {
    const long n = static_cast<long>(row.size());
    std::string out(row.size(), '0');
    for (long m = 0; m < n; ++m) {
        unsigned v = 0;
        for (long d = -radius; d <= radius; ++d) v = (v << 1) | (row[static_cast<std::size_t>(((m + d) % n + n) % n)] == '1');
        out[static_cast<std::size_t>(m)] = ((rule >> v) & 1U) ? '1' : '0';
    }
    return out;
}

inline std::string iterate(std::uint64_t rule, int radius, std::string row, unsigned steps) {
    for (unsigned t = 0; t < steps; ++t) row = step(rule, radius, row);
    return row;
}

inline unsigned mismatches(const std::string& evolved, const std::string& observed) {
    unsigned d = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) d += observed[i] != '?' && observed[i] != evolved[i];
    return d;
}

inline std::string fill(const std::string& observed, const std::string& evolved) {
    std::string out = observed;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] == '?') out[i] = evolved[i];
    return out;
}

inline unsigned error_with_gaps(std::uint64_t rule, int radius, const Grid& obs, const std::vector<unsigned>& gaps) {
    std::string cur = obs[0];
    unsigned e = 0;
    for (std::size_t n = 1; n < obs.size(); ++n) {
        const std::string ev = iterate(rule, radius, cur, gaps[n - 1]);
        e += mismatches(ev, obs[n]);
        cur = fill(obs[n], ev);
    }
    return e;
}

// Minimum over every gap tuple in [1, T]^(N-1), enumerated as an odometer.
inline unsigned min_error(std::uint64_t rule, int radius, const Grid& obs, unsigned bound) {
    std::vector<unsigned> gaps(obs.size() - 1, 1);
    unsigned best = std::numeric_limits<unsigned>::max();
    while (true) {
        best = std::min(best, error_with_gaps(rule, radius, obs, gaps));
        std::size_t i = 0;
        while (i < gaps.size() && gaps[i] == bound) gaps[i++] = 1;
        if (i == gaps.size()) break;
        ++gaps[i];
    }
    return best;
}

inline bool fits(std::uint64_t rule, int radius, const std::vector<Grid>& set, unsigned bound) {
    for (const auto& obs : set)
        if (min_error(rule, radius, obs, bound) != 0) return false;
    return true;
}

inline unsigned count_known(const Grid& obs) {
    unsigned c = 0;
    for (const auto& row : obs)
        for (char ch : row) c += ch != '?';
    return c;
}

}  // namespace ref
