#include "caid/observation.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "caid/errors.hpp"

namespace caid {

GapSequence::GapSequence(std::initializer_list<std::uint32_t> gaps)
    : GapSequence(std::vector<std::uint32_t>(gaps)) {}

GapSequence::GapSequence(std::vector<std::uint32_t> gaps) : gaps_(std::move(gaps)) {
    for (auto g : gaps_) {
        if (g == 0) throw ArgumentError("time gaps must be positive");
    }
}

void GapSequence::check_bound(std::uint32_t bound) const {
    for (auto g : gaps_) {
        if (g > bound) {
            throw ArgumentError("time gap " + std::to_string(g) + " exceeds bound " + std::to_string(bound));
        }
    }
}

std::vector<std::uint64_t> GapSequence::timesteps() const {
    std::vector<std::uint64_t> out(gaps_.size());
    std::uint64_t tau = 0;
    for (std::size_t n = 0; n < gaps_.size(); ++n) out[n] = tau += gaps_[n];
    return out;
}

GapSequence gaps_from_timesteps(const std::vector<std::uint64_t>& timesteps) {
    std::vector<std::uint32_t> gaps(timesteps.size());
    std::uint64_t prev = 0;
    for (std::size_t n = 0; n < timesteps.size(); ++n) {
        if (timesteps[n] <= prev) throw ArgumentError("time steps must be positive and strictly increasing");
        gaps[n] = static_cast<std::uint32_t>(timesteps[n] - prev);
        prev = timesteps[n];
    }
    return GapSequence(std::move(gaps));
}

char to_char(Cell cell) noexcept {
    switch (cell) {
        case Cell::zero: return '0';
        case Cell::one: return '1';
        case Cell::unknown: break;
    }
    return '?';
}

Observation::Observation(const std::vector<std::string>& rows) {
    if (rows.empty()) throw ArgumentError("an observation needs at least one row");
    rows_ = rows.size();
    cols_ = rows.front().size();
    if (cols_ == 0) throw ArgumentError("an observation needs at least one column");
    words_per_row_ = words_for(cols_);
    values_.assign(rows_ * words_per_row_, 0);
    known_.assign(rows_ * words_per_row_, 0);
    for (std::size_t n = 0; n < rows_; ++n) {
        if (rows[n].size() != cols_) {
            throw ArgumentError("row " + std::to_string(n + 1) + " has " + std::to_string(rows[n].size()) +
                                " cells, expected " + std::to_string(cols_));
        }
        for (std::size_t m = 0; m < cols_; ++m) {
            switch (rows[n][m]) {
                case '0': set(n, m, Cell::zero); break;
                case '1': set(n, m, Cell::one); break;
                case '?': set(n, m, Cell::unknown); break;
                default:
                    throw ArgumentError(std::string("invalid cell symbol '") + rows[n][m] + "' in row " +
                                        std::to_string(n + 1));
            }
        }
    }
}

Observation::Observation(const std::vector<Configuration>& rows) {
    if (rows.empty()) throw ArgumentError("an observation needs at least one row");
    rows_ = rows.size();
    cols_ = rows.front().size();
    if (cols_ == 0) throw ArgumentError("an observation needs at least one column");
    words_per_row_ = words_for(cols_);
    values_.reserve(rows_ * words_per_row_);
    known_.assign(rows_ * words_per_row_, ~Word{0});
    for (const auto& row : rows) {
        if (row.size() != cols_) throw ArgumentError("configurations of an observation must share one width");
        values_.insert(values_.end(), row.words().begin(), row.words().end());
    }
    for (std::size_t n = 0; n < rows_; ++n) known_[(n + 1) * words_per_row_ - 1] = tail_mask(cols_);
}

Cell Observation::at(std::size_t n, std::size_t m) const noexcept {
    if (!known(n, m)) return Cell::unknown;
    const bool v = (values_[n * words_per_row_ + m / kWordBits] >> (m % kWordBits)) & 1U;
    return v ? Cell::one : Cell::zero;
}

void Observation::set(std::size_t n, std::size_t m, Cell cell) {
    if (n == 0 && cell == Cell::unknown) {
        throw ArgumentError("the first row of an observation must be fully known");
    }
    const std::size_t idx = n * words_per_row_ + m / kWordBits;
    const Word bit = Word{1} << (m % kWordBits);
    if (cell == Cell::unknown) {
        known_[idx] &= ~bit;
        values_[idx] &= ~bit;
    } else {
        known_[idx] |= bit;
        values_[idx] = cell == Cell::one ? (values_[idx] | bit) : (values_[idx] & ~bit);
    }
}

bool Observation::row_complete(std::size_t n) const noexcept {
    const auto k = row_known(n);
    for (std::size_t w = 0; w + 1 < k.size(); ++w) {
        if (k[w] != ~Word{0}) return false;
    }
    return k.back() == tail_mask(cols_);
}

std::size_t Observation::unknown_count() const noexcept {
    std::size_t known_cells = 0;
    for (auto w : known_) known_cells += static_cast<std::size_t>(std::popcount(w));
    return rows_ * cols_ - known_cells;
}

Configuration Observation::configuration(std::size_t n) const {
    const auto v = row_values(n);
    return Configuration(cols_, std::vector<Word>(v.begin(), v.end()));
}

std::vector<std::string> Observation::to_strings() const {
    std::vector<std::string> out(rows_, std::string(cols_, '?'));
    for (std::size_t n = 0; n < rows_; ++n) {
        for (std::size_t m = 0; m < cols_; ++m) out[n][m] = to_char(at(n, m));
    }
    return out;
}

ObservationSet::ObservationSet(std::vector<Observation> observations, SetMetadata metadata)
    : observations_(std::move(observations)), metadata_(metadata) {
    if (observations_.empty()) throw ArgumentError("an observation set must not be empty");
}

std::uint64_t count_known(const Observation& obs) {
    return obs.rows() * obs.cols() - obs.unknown_count();
}

SetCounts set_counts(const ObservationSet& set) {
    SetCounts counts;
    for (const auto& obs : set) {
        counts.known += count_known(obs);
        counts.columns += obs.cols();
    }
    return counts;
}

std::vector<Observation> completions(const Observation& obs, std::uint64_t limit) {
    std::vector<std::pair<std::size_t, std::size_t>> unknown;
    for (std::size_t n = 1; n < obs.rows(); ++n) {
        for (std::size_t m = 0; m < obs.cols(); ++m) {
            if (!obs.known(n, m)) unknown.emplace_back(n, m);
        }
    }
    const std::size_t u = unknown.size();
    if (u >= 63 || (std::uint64_t{1} << u) > limit) {
        throw CapacityError("observation has " + std::to_string(u) + " unknown cells; 2^" + std::to_string(u) +
                            " completions exceed the limit of " + std::to_string(limit));
    }
    const std::uint64_t total = std::uint64_t{1} << u;
    std::vector<Observation> out;
    out.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code) {
        Observation filled = obs;
        for (std::size_t i = 0; i < u; ++i) {
            const bool v = (code >> (u - 1 - i)) & 1U;
            filled.set(unknown[i].first, unknown[i].second, v ? Cell::one : Cell::zero);
        }
        out.push_back(std::move(filled));
    }
    return out;
}

Observation a_completion(const Observation& obs, const LookupTable& lut, const GapSequence& gaps) {
    if (gaps.size() + 1 != obs.rows()) {
        throw ArgumentError("gap sequence of length " + std::to_string(gaps.size()) + " for an observation with " +
                            std::to_string(obs.rows()) + " rows");
    }
    Observation out = obs;
    if (obs.spatially_complete()) return out;
    Stepper stepper(lut, obs.cols());
    Configuration current = obs.configuration(0);
    for (std::size_t n = 1; n < obs.rows(); ++n) {
        for (std::uint32_t t = 0; t < gaps[n - 1]; ++t) stepper.step(current.words(), current.words());
        for (std::size_t m = 0; m < obs.cols(); ++m) {
            if (!obs.known(n, m)) {
                out.set(n, m, current[m] ? Cell::one : Cell::zero);
            } else {
                current.set(m, obs.at(n, m) == Cell::one);
            }
        }
    }
    return out;
}

ObservationSet mask_random(const ObservationSet& set, std::uint64_t count, Rng& rng) {
    struct Position {
        std::size_t obs, row, col;
    };
    std::vector<Position> maskable;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& obs = set[i];
        for (std::size_t n = 1; n < obs.rows(); ++n) {
            for (std::size_t m = 0; m < obs.cols(); ++m) {
                if (obs.known(n, m)) maskable.push_back({i, n, m});
            }
        }
    }
    if (count > maskable.size()) {
        throw CapacityError("cannot mask " + std::to_string(count) + " cells; only " +
                            std::to_string(maskable.size()) + " known cells lie outside first rows");
    }
    ObservationSet out = set;
    // partial Fisher-Yates: the first `count` slots become a uniform sample
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto j = uniform_int<std::size_t>(rng, i, maskable.size() - 1);
        std::swap(maskable[i], maskable[j]);
        const auto& p = maskable[i];
        out[p.obs].set(p.row, p.col, Cell::unknown);
    }
    return out;
}

}  // namespace caid
