#include "caid/ca_core.hpp"

#include <algorithm>

#include "caid/errors.hpp"

namespace caid {

namespace {

void check_radius(int radius) {
    if (radius < 0 || radius > kMaxRadius) {
        throw RangeError("radius " + std::to_string(radius) + " outside [0, " +
                         std::to_string(kMaxRadius) + "]");
    }
}

// `len` bits starting at `pos`, pos + len <= size of the packed vector.
Word read_bits(std::span<const Word> in, std::size_t pos, std::size_t len) {
    if (len == 0) return 0;
    const std::size_t idx = pos / kWordBits;
    const std::size_t off = pos % kWordBits;
    Word v = in[idx] >> off;
    if (off != 0 && off + len > kWordBits) {
        v |= in[idx + 1] << (kWordBits - off);
    }
    return len == kWordBits ? v : v & ((Word{1} << len) - 1);
}

}  // namespace

LookupTable::LookupTable(int radius) : radius_(radius), size_(0) {
    check_radius(radius);
    size_ = std::size_t{1} << (2 * radius + 1);
    words_.assign(words_for(size_), 0);
}

LookupTable LookupTable::from_bits(std::span<const std::uint8_t> table_order, int radius) {
    LookupTable lut(radius);
    if (table_order.size() != lut.size_) {
        throw ArgumentError("lookup table of radius " + std::to_string(radius) + " needs " +
                            std::to_string(lut.size_) + " bits, got " +
                            std::to_string(table_order.size()));
    }
    for (std::size_t i = 0; i < table_order.size(); ++i) {
        if (table_order[i] > 1) throw ArgumentError("lookup table bits must be 0 or 1");
        lut.set_bit(i, table_order[i] != 0);
    }
    return lut;
}

LookupTable LookupTable::from_string(std::string_view table_order, int radius) {
    std::vector<std::uint8_t> bits;
    bits.reserve(table_order.size());
    for (char c : table_order) {
        if (c != '0' && c != '1') throw ArgumentError("lookup table string must contain only 0 and 1");
        bits.push_back(c == '1');
    }
    return from_bits(bits, radius);
}

LookupTable LookupTable::random(int radius, Rng& rng) {
    LookupTable lut(radius);
    for (auto& w : lut.words_) w = rng();
    lut.words_.back() &= tail_mask(lut.size_);
    return lut;
}

void LookupTable::set_output(std::size_t neighborhood, bool value) noexcept {
    const Word bit = Word{1} << (neighborhood % kWordBits);
    auto& w = words_[neighborhood / kWordBits];
    w = value ? (w | bit) : (w & ~bit);
}

std::vector<std::uint8_t> LookupTable::bits() const {
    std::vector<std::uint8_t> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = bit(i);
    return out;
}

std::string LookupTable::to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) out[i] = bit(i) ? '1' : '0';
    return out;
}

std::uint64_t LookupTable::rule_number() const {
    if (size_ > kWordBits) {
        throw RangeError("rule number of a radius-" + std::to_string(radius_) +
                         " table does not fit in 64 bits");
    }
    return words_[0];
}

std::string LookupTable::rule_number_string() const {
    std::vector<Word> n(words_);
    std::string digits;
    auto is_zero = [&] { return std::all_of(n.begin(), n.end(), [](Word w) { return w == 0; }); };
    do {
        // long division by 10 over 32-bit halves
        std::uint64_t rem = 0;
        for (std::size_t i = n.size(); i-- > 0;) {
            const std::uint64_t hi = (rem << 32) | (n[i] >> 32);
            const std::uint64_t qhi = hi / 10;
            rem = hi % 10;
            const std::uint64_t lo = (rem << 32) | (n[i] & 0xffffffffULL);
            const std::uint64_t qlo = lo / 10;
            rem = lo % 10;
            n[i] = (qhi << 32) | qlo;
        }
        digits.push_back(static_cast<char>('0' + rem));
    } while (!is_zero());
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::strong_ordering LookupTable::operator<=>(const LookupTable& other) const noexcept {
    if (auto c = radius_ <=> other.radius_; c != 0) return c;
    for (std::size_t i = words_.size(); i-- > 0;) {
        if (auto c = words_[i] <=> other.words_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

Configuration::Configuration(std::initializer_list<int> cells) : Configuration(cells.size()) {
    std::size_t m = 0;
    for (int c : cells) {
        if (c != 0 && c != 1) throw ArgumentError("configuration cells must be 0 or 1");
        set(m++, c == 1);
    }
}

Configuration::Configuration(std::size_t size, std::vector<Word> words)
    : size_(size), words_(std::move(words)) {
    if (words_.size() != words_for(size_)) throw ArgumentError("packed word count does not match size");
    if (!words_.empty()) words_.back() &= tail_mask(size_);
}

Configuration Configuration::from_string(std::string_view cells) {
    Configuration out(cells.size());
    for (std::size_t m = 0; m < cells.size(); ++m) {
        if (cells[m] != '0' && cells[m] != '1') {
            throw ArgumentError("configuration string must contain only 0 and 1");
        }
        out.set(m, cells[m] == '1');
    }
    return out;
}

Configuration Configuration::random(std::size_t size, Rng& rng) {
    Configuration out(size);
    for (auto& w : out.words_) w = rng();
    if (!out.words_.empty()) out.words_.back() &= tail_mask(size);
    return out;
}

void Configuration::set(std::size_t m, bool value) noexcept {
    const Word bit = Word{1} << (m % kWordBits);
    auto& w = words_[m / kWordBits];
    w = value ? (w | bit) : (w & ~bit);
}

std::string Configuration::to_string() const {
    std::string out(size_, '0');
    for (std::size_t m = 0; m < size_; ++m) out[m] = (*this)[m] ? '1' : '0';
    return out;
}

std::vector<std::uint8_t> Configuration::cells() const {
    std::vector<std::uint8_t> out(size_);
    for (std::size_t m = 0; m < size_; ++m) out[m] = (*this)[m];
    return out;
}

void rotate_words(std::span<const Word> in, std::size_t size, std::size_t shift, std::span<Word> out) {
    shift %= size;
    for (std::size_t w = 0; w < out.size(); ++w) {
        const std::size_t start = w * kWordBits;
        const std::size_t len = std::min(kWordBits, size - start);
        const std::size_t src = (start + shift) % size;
        if (src + len <= size) {
            out[w] = read_bits(in, src, len);
        } else {
            const std::size_t first = size - src;
            out[w] = read_bits(in, src, first) | (read_bits(in, 0, len - first) << first);
        }
    }
}

Configuration rotated(const Configuration& config, std::size_t shift) {
    Configuration out(config.size());
    if (config.size() > 0) rotate_words(config.words(), config.size(), shift, out.words());
    return out;
}

Stepper::Stepper(const LookupTable& lut, std::size_t width)
    : width_(width), words_per_row_(words_for(width)), radius_(lut.radius()) {
    if (width == 0) throw ArgumentError("configuration must have at least one cell");
    leaves_.resize(lut.size());
    for (std::size_t v = 0; v < lut.size(); ++v) leaves_[v] = lut.output(v) ? ~Word{0} : Word{0};
    neighbors_.resize(lut.neighborhood_width() * words_per_row_);
    level_.resize(lut.size() / 2);
    // neighbor j sits at offset j - r; its rotation amount is that offset mod N
    const auto n = static_cast<long long>(width);
    for (std::size_t j = 0; j < lut.neighborhood_width(); ++j) {
        const long long offset = static_cast<long long>(j) - radius_;
        shifts_.push_back(static_cast<std::size_t>(((offset % n) + n) % n));
    }
}

void Stepper::step(std::span<const Word> in, std::span<Word> out) {
    const auto width = static_cast<std::size_t>(2 * radius_ + 1);
    if (words_per_row_ == 1) {
        const Word x = in[0];
        const Word mask = tail_mask(width_);
        for (std::size_t j = 0; j < width; ++j) {
            const std::size_t k = shifts_[j];
            neighbors_[j] = k == 0 ? x : ((x >> k) | (x << (width_ - k))) & mask;
        }
    } else {
        for (std::size_t j = 0; j < width; ++j) {
            rotate_words(in, width_, shifts_[j], std::span<Word>(neighbors_).subspan(j * words_per_row_, words_per_row_));
        }
    }
    // Multiplexer tree: resolve the least significant neighborhood digit
    // (rightmost cell) first, halving the candidate set at every level.
    for (std::size_t w = 0; w < words_per_row_; ++w) {
        std::size_t count = leaves_.size();
        const Word* src = leaves_.data();
        for (std::size_t j = width; j-- > 0;) {
            const Word x = neighbors_[j * words_per_row_ + w];
            count /= 2;
            for (std::size_t k = 0; k < count; ++k) {
                const Word lo = src[2 * k];
                const Word hi = src[2 * k + 1];
                level_[k] = lo ^ (x & (lo ^ hi));
            }
            src = level_.data();
        }
        out[w] = src[0];
    }
    out[words_per_row_ - 1] &= tail_mask(width_);
}

LookupTable lut_from_number(std::uint64_t rule_number, int radius) {
    LookupTable lut(radius);
    if (lut.size() < kWordBits && (rule_number >> lut.size()) != 0) {
        const std::uint64_t max = (std::uint64_t{1} << lut.size()) - 1;
        throw RangeError("rule number " + std::to_string(rule_number) + " exceeds maximum " +
                         std::to_string(max) + " for radius " + std::to_string(radius));
    }
    lut.words()[0] = rule_number;
    return lut;
}

std::uint64_t rule_number(const LookupTable& lut) { return lut.rule_number(); }

Configuration step(const LookupTable& lut, const Configuration& config) {
    return iterate(lut, config, 1);
}

Configuration iterate(const LookupTable& lut, const Configuration& config, std::uint64_t steps) {
    if (steps == 0 || config.size() == 0) return config;
    Configuration out = config;
    Stepper stepper(lut, config.size());
    for (std::uint64_t t = 0; t < steps; ++t) stepper.step(out.words(), out.words());
    return out;
}

std::vector<Configuration> diagram(const LookupTable& lut, const Configuration& config, std::size_t steps) {
    if (steps == 0) throw ArgumentError("a space-time diagram needs at least one time step");
    std::vector<Configuration> rows;
    rows.reserve(steps);
    rows.push_back(config);
    if (config.size() == 0) {
        rows.resize(steps, config);
        return rows;
    }
    Stepper stepper(lut, config.size());
    for (std::size_t t = 1; t < steps; ++t) {
        Configuration next(config.size());
        stepper.step(rows.back().words(), next.words());
        rows.push_back(std::move(next));
    }
    return rows;
}

LookupTable embed(const LookupTable& lut, int target_radius) {
    const int inner = lut.radius();
    if (target_radius < inner) {
        throw RangeError("cannot embed a radius-" + std::to_string(inner) + " rule at radius " +
                         std::to_string(target_radius));
    }
    LookupTable out(target_radius);
    const auto drop = static_cast<unsigned>(target_radius - inner);
    const std::size_t inner_mask = lut.size() - 1;
    for (std::size_t v = 0; v < out.size(); ++v) {
        out.set_output(v, lut.output((v >> drop) & inner_mask));
    }
    return out;
}

}  // namespace caid
