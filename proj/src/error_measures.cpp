#include "caid/error_measures.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "caid/errors.hpp"

namespace caid {

namespace {

std::uint64_t masked_mismatches(std::span<const Word> a, std::span<const Word> b, std::span<const Word> mask) {
    std::uint64_t count = 0;
    for (std::size_t w = 0; w < a.size(); ++w) count += static_cast<std::uint64_t>(std::popcount((a[w] ^ b[w]) & mask[w]));
    return count;
}

// dst = known cells of the observed row, evolved cells elsewhere.
void complete_row(std::span<const Word> observed, std::span<const Word> known, std::span<const Word> evolved,
                  std::span<Word> dst) {
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] = (observed[w] & known[w]) | (evolved[w] & ~known[w]);
}

void check_rows(const Observation& obs) {
    if (obs.rows() == 0) throw ArgumentError("empty observation");
}

}  // namespace

std::uint64_t dist(std::span<const Cell> a, std::span<const Cell> b) {
    if (a.size() != b.size()) {
        throw ArgumentError("dist of rows with lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != Cell::unknown && b[i] != Cell::unknown && a[i] != b[i]) ++d;
    }
    return d;
}

std::vector<Cell> partial_row(std::string_view cells) {
    std::vector<Cell> out;
    out.reserve(cells.size());
    for (char c : cells) {
        switch (c) {
            case '0': out.push_back(Cell::zero); break;
            case '1': out.push_back(Cell::one); break;
            case '?': out.push_back(Cell::unknown); break;
            default: throw ArgumentError(std::string("invalid cell symbol '") + c + "'");
        }
    }
    return out;
}

std::uint64_t gap_sequence_count(std::uint32_t gap_bound, std::size_t rows) {
    std::uint64_t count = 1;
    for (std::size_t n = 1; n < rows; ++n) {
        if (gap_bound != 0 && count > std::numeric_limits<std::uint64_t>::max() / gap_bound) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        count *= gap_bound;
    }
    return count;
}

std::uint64_t error_with_timesteps(const LookupTable& lut, const Observation& obs,
                                   const std::vector<std::uint64_t>& timesteps) {
    check_rows(obs);
    if (timesteps.size() + 1 != obs.rows()) {
        throw ArgumentError(std::to_string(timesteps.size()) + " time steps for an observation with " +
                            std::to_string(obs.rows()) + " rows");
    }
    std::uint64_t prev = 0;
    for (auto tau : timesteps) {
        if (tau <= prev) throw ArgumentError("time steps must be positive and strictly increasing");
        prev = tau;
    }
    Stepper stepper(lut, obs.cols());
    std::vector<Word> row(obs.row_values(0).begin(), obs.row_values(0).end());
    std::uint64_t now = 0;
    std::uint64_t error = 0;
    for (std::size_t n = 1; n < obs.rows(); ++n) {
        for (; now < timesteps[n - 1]; ++now) stepper.step(row, row);
        error += masked_mismatches(row, obs.row_values(n), obs.row_known(n));
    }
    return error;
}

std::uint64_t error_with_gaps(const LookupTable& lut, const Observation& obs, const GapSequence& gaps) {
    return ErrorEvaluator(lut).with_gaps(obs, gaps);
}

ErrorEstimate min_error_exact(const LookupTable& lut, const Observation& obs, std::uint32_t gap_bound,
                              std::uint64_t budget) {
    return ErrorEvaluator(lut).exact(obs, gap_bound, budget);
}

ErrorEstimate min_error_sampled(const LookupTable& lut, const Observation& obs, std::uint32_t gap_bound, Rng& rng) {
    return ErrorEvaluator(lut).sampled(obs, gap_bound, rng);
}

ErrorEstimate min_error_set(const LookupTable& lut, const ObservationSet& set, std::uint32_t gap_bound,
                            std::uint64_t seed, std::uint32_t resamples) {
    return ErrorEvaluator(lut).set_estimate(set, {}, gap_bound, seed, resamples);
}

ErrorEvaluator::ErrorEvaluator(const LookupTable& lut) : lut_(lut) {}

Stepper& ErrorEvaluator::stepper(std::size_t width) {
    auto it = steppers_.find(width);
    if (it == steppers_.end()) it = steppers_.emplace(width, Stepper(lut_, width)).first;
    return it->second;
}

std::uint64_t ErrorEvaluator::with_gaps(const Observation& obs, const GapSequence& gaps) {
    check_rows(obs);
    if (gaps.size() + 1 != obs.rows()) {
        throw ArgumentError("gap sequence of length " + std::to_string(gaps.size()) + " for an observation with " +
                            std::to_string(obs.rows()) + " rows");
    }
    auto& st = stepper(obs.cols());
    const std::size_t words = obs.words_per_row();
    current_.assign(obs.row_values(0).begin(), obs.row_values(0).end());
    evolved_.resize(words);
    std::uint64_t error = 0;
    for (std::size_t n = 1; n < obs.rows(); ++n) {
        std::copy(current_.begin(), current_.end(), evolved_.begin());
        for (std::uint32_t t = 0; t < gaps[n - 1]; ++t) st.step(evolved_, evolved_);
        error += masked_mismatches(evolved_, obs.row_values(n), obs.row_known(n));
        complete_row(obs.row_values(n), obs.row_known(n), evolved_, current_);
    }
    return error;
}

std::uint64_t ErrorEvaluator::sample(const Observation& obs, std::uint32_t gap_bound, Rng& rng,
                                     std::vector<std::uint32_t>* chosen) {
    check_rows(obs);
    if (gap_bound == 0) throw ArgumentError("gap bound must be positive");
    auto& st = stepper(obs.cols());
    const std::size_t words = obs.words_per_row();
    current_.assign(obs.row_values(0).begin(), obs.row_values(0).end());
    evolved_.resize(static_cast<std::size_t>(gap_bound) * words);
    row_errors_.resize(gap_bound);
    if (chosen) chosen->clear();

    std::uint64_t total = 0;
    for (std::size_t n = 1; n < obs.rows(); ++n) {
        const auto values = obs.row_values(n);
        const auto known = obs.row_known(n);
        std::span<const Word> prev = current_;
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::uint32_t t = 0; t < gap_bound; ++t) {
            std::span<Word> out(evolved_.data() + t * words, words);
            st.step(prev, out);
            prev = out;
            row_errors_[t] = masked_mismatches(out, values, known);
            best = std::min(best, row_errors_[t]);
        }
        std::uint32_t pick = 0;
        if (obs.row_complete(n)) {
            // every tied gap yields the same completed row; take the smallest
            while (row_errors_[pick] != best) ++pick;
        } else {
            ties_.clear();
            for (std::uint32_t t = 0; t < gap_bound; ++t) {
                if (row_errors_[t] == best) ties_.push_back(t);
            }
            pick = ties_.size() == 1 ? ties_[0] : ties_[uniform_int<std::size_t>(rng, 0, ties_.size() - 1)];
        }
        total += best;
        if (chosen) chosen->push_back(pick + 1);
        complete_row(values, known, std::span<const Word>(evolved_.data() + pick * words, words), current_);
    }
    return total;
}

std::uint64_t ErrorEvaluator::sampled_value(const Observation& obs, std::uint32_t gap_bound, Rng& rng) {
    return sample(obs, gap_bound, rng, nullptr);
}

ErrorEstimate ErrorEvaluator::sampled(const Observation& obs, std::uint32_t gap_bound, Rng& rng) {
    std::vector<std::uint32_t> chosen;
    ErrorEstimate est;
    est.value = sample(obs, gap_bound, rng, &chosen);
    est.gaps.emplace_back(std::move(chosen));
    est.exact = obs.spatially_complete() || est.value == 0;
    return est;
}

ErrorEstimate ErrorEvaluator::exact(const Observation& obs, std::uint32_t gap_bound, std::uint64_t budget) {
    check_rows(obs);
    if (gap_bound == 0) throw ArgumentError("gap bound must be positive");
    const std::uint64_t count = gap_sequence_count(gap_bound, obs.rows());
    if (count > budget) {
        throw CapacityError("exact error needs " + std::to_string(gap_bound) + "^" + std::to_string(obs.rows() - 1) +
                            " gap sequences, over the budget of " + std::to_string(budget));
    }
    bound_ = gap_bound;
    best_ = std::numeric_limits<std::uint64_t>::max();
    path_.assign(obs.rows() - 1, 0);
    best_path_.clear();
    const std::size_t words = obs.words_per_row();
    exact_rows_.assign(obs.rows() * (static_cast<std::size_t>(gap_bound) + 1) * words, 0);
    std::copy(obs.row_values(0).begin(), obs.row_values(0).end(), exact_rows_.begin());
    exact_search(obs, 0, 0);

    ErrorEstimate est;
    est.value = best_;
    est.gaps.emplace_back(best_path_);
    est.exact = true;
    return est;
}

// Depth-first over gap choices; slot 0 of each level holds the completed row,
// slots 1..T its evolutions.
void ErrorEvaluator::exact_search(const Observation& obs, std::size_t row, std::uint64_t acc) {
    if (row + 1 == obs.rows()) {
        if (acc < best_) {
            best_ = acc;
            best_path_ = path_;
        }
        return;
    }
    const std::size_t words = obs.words_per_row();
    const std::size_t level = (static_cast<std::size_t>(bound_) + 1) * words;
    Word* base = exact_rows_.data() + row * level;
    Word* next = base + level;
    auto& st = stepper(obs.cols());
    for (std::uint32_t t = 1; t <= bound_; ++t) {
        st.step(std::span<const Word>(base + (t - 1) * words, words), std::span<Word>(base + t * words, words));
    }
    const auto values = obs.row_values(row + 1);
    const auto known = obs.row_known(row + 1);
    for (std::uint32_t t = 1; t <= bound_; ++t) {
        std::span<const Word> evolved(base + t * words, words);
        const std::uint64_t err = acc + masked_mismatches(evolved, values, known);
        if (err >= best_) continue;
        complete_row(values, known, evolved, std::span<Word>(next, words));
        path_[row] = t;
        exact_search(obs, row + 1, err);
    }
}

ErrorEstimate ErrorEvaluator::set_estimate(const ObservationSet& set, std::span<const std::size_t> obs_indices,
                                           std::uint32_t gap_bound, std::uint64_t seed, std::uint32_t resamples,
                                           bool record_gaps) {
    if (resamples == 0) throw ArgumentError("resamples must be at least 1");
    ErrorEstimate total;
    total.exact = true;
    const std::size_t count = obs_indices.empty() ? set.size() : obs_indices.size();
    std::vector<std::uint32_t> chosen;
    std::vector<std::uint32_t> best_chosen;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = obs_indices.empty() ? k : obs_indices[k];
        const auto& obs = set[i];
        const std::uint32_t runs = obs.spatially_complete() ? 1 : resamples;
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::uint32_t j = 0; j < runs && best > 0; ++j) {
            Rng rng = make_rng(seed, {i, j});
            const std::uint64_t v = sample(obs, gap_bound, rng, record_gaps ? &chosen : nullptr);
            if (v < best) {
                best = v;
                if (record_gaps) best_chosen = chosen;
            }
        }
        total.value += best;
        total.exact = total.exact && (obs.spatially_complete() || best == 0);
        if (record_gaps) total.gaps.emplace_back(best_chosen);
    }
    return total;
}

}  // namespace caid
