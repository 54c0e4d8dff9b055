#pragma once

// One-dimensional binary cellular automata with symmetric neighborhoods and
// periodic boundary conditions.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "caid/random.hpp"

namespace caid {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept {
    return (bits + kWordBits - 1) / kWordBits;
}

// Mask of the valid bits in the last word of a `bits`-long packed vector.
constexpr Word tail_mask(std::size_t bits) noexcept {
    const std::size_t rem = bits % kWordBits;
    return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

inline constexpr int kMaxRadius = 10;

// Local rule of radius r as a lookup table over the 2^(2r+1) neighborhoods.
//
// A neighborhood (s_{m-r}, ..., s_{m+r}) is read as a binary number with
// s_{m-r} as the most significant digit; output(v) is the rule's value for
// the neighborhood numbered v, which is also digit v of the rule number.
// bit(i) / bits() / to_string() list outputs in the conventional table
// order, neighborhood 11..1 first and 00..0 last.
class LookupTable {
public:
    LookupTable() : LookupTable(0) {}
    // The all-zero rule of the given radius.
    explicit LookupTable(int radius);

    // Table order, as printed by to_string(): bits[0] belongs to 11..1.
    static LookupTable from_bits(std::span<const std::uint8_t> table_order, int radius);
    static LookupTable from_string(std::string_view table_order, int radius);
    static LookupTable random(int radius, Rng& rng);

    int radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return size_; }
    std::size_t neighborhood_width() const noexcept { return 2 * static_cast<std::size_t>(radius_) + 1; }

    bool output(std::size_t neighborhood) const noexcept {
        return (words_[neighborhood / kWordBits] >> (neighborhood % kWordBits)) & 1U;
    }
    void set_output(std::size_t neighborhood, bool value) noexcept;

    bool bit(std::size_t i) const noexcept { return output(size_ - 1 - i); }
    void set_bit(std::size_t i, bool value) noexcept { set_output(size_ - 1 - i, value); }
    std::vector<std::uint8_t> bits() const;
    std::string to_string() const;

    // Throws RangeError when the table has more than 64 entries (r >= 3).
    std::uint64_t rule_number() const;
    // Decimal rule number of any size.
    std::string rule_number_string() const;

    std::span<const Word> words() const noexcept { return words_; }
    std::span<Word> words() noexcept { return words_; }

    bool operator==(const LookupTable&) const = default;
    // Orders by radius, then by rule number.
    std::strong_ordering operator<=>(const LookupTable& other) const noexcept;

private:
    int radius_;
    std::size_t size_;
    std::vector<Word> words_;
};

// A binary configuration of N cells, bit-packed.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::size_t size) : size_(size), words_(words_for(size), 0) {}
    Configuration(std::initializer_list<int> cells);
    Configuration(std::size_t size, std::vector<Word> words);

    static Configuration from_string(std::string_view cells);
    static Configuration random(std::size_t size, Rng& rng);

    std::size_t size() const noexcept { return size_; }
    bool operator[](std::size_t m) const noexcept {
        return (words_[m / kWordBits] >> (m % kWordBits)) & 1U;
    }
    void set(std::size_t m, bool value) noexcept;

    std::span<const Word> words() const noexcept { return words_; }
    std::span<Word> words() noexcept { return words_; }

    std::string to_string() const;
    std::vector<std::uint8_t> cells() const;

    bool operator==(const Configuration&) const = default;

private:
    std::size_t size_ = 0;
    std::vector<Word> words_;
};

// out[m] = in[(m + shift) mod N] on packed words; `out` must not alias `in`.
void rotate_words(std::span<const Word> in, std::size_t size, std::size_t shift, std::span<Word> out);

Configuration rotated(const Configuration& config, std::size_t shift);

// Applies a fixed rule to packed rows of a fixed width. Holds its own
// scratch space, so one instance must not be shared between threads.
class Stepper {
public:
    Stepper(const LookupTable& lut, std::size_t width);

    std::size_t width() const noexcept { return width_; }
    std::size_t words_per_row() const noexcept { return words_per_row_; }

    // `out` may alias `in`.
    void step(std::span<const Word> in, std::span<Word> out);

private:
    std::size_t width_;
    std::size_t words_per_row_;
    int radius_;
    std::vector<Word> leaves_;     // one constant word per neighborhood
    std::vector<Word> neighbors_;  // (2r+1) rotated copies of the input
    std::vector<Word> level_;
    std::vector<std::size_t> shifts_;
};

LookupTable lut_from_number(std::uint64_t rule_number, int radius);
std::uint64_t rule_number(const LookupTable& lut);

Configuration step(const LookupTable& lut, const Configuration& config);
Configuration iterate(const LookupTable& lut, const Configuration& config, std::uint64_t steps);
// (c, A(c), ..., A^(steps-1)(c)); steps >= 1.
std::vector<Configuration> diagram(const LookupTable& lut, const Configuration& config, std::size_t steps);

// Same global rule expressed at a larger radius: the outer cells of each
// wider neighborhood are ignored.
LookupTable embed(const LookupTable& lut, int target_radius);

}  // namespace caid
