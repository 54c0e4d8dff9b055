#include "caid/observation.hpp"

#include <set>

#include <gtest/gtest.h>

#include "caid/errors.hpp"
#include "reference.hpp"

using namespace caid;

namespace {

const std::vector<std::string> kExample{"010", "0?1", "11?"};

Observation random_partial(Rng& rng, std::size_t rows, std::size_t cols, double unknown_density) {
    std::vector<std::string> grid(rows, std::string(cols, '0'));
    std::bernoulli_distribution bit(0.5), hide(unknown_density);
    for (std::size_t n = 0; n < rows; ++n)
        for (auto& c : grid[n]) c = (n > 0 && hide(rng)) ? '?' : (bit(rng) ? '1' : '0');
    return Observation(grid);
}

}  // namespace

TEST(Observation, ParsesRowsAndReportsCells) {
    const Observation obs(kExample);
    EXPECT_EQ(obs.rows(), 3U);
    EXPECT_EQ(obs.cols(), 3U);
    EXPECT_EQ(obs.at(1, 1), Cell::unknown);
    EXPECT_EQ(obs.at(2, 0), Cell::one);
    EXPECT_EQ(obs.at(0, 0), Cell::zero);
    EXPECT_FALSE(obs.row_complete(1));
    EXPECT_TRUE(obs.row_complete(0));
    EXPECT_EQ(obs.unknown_count(), 2U);
    EXPECT_FALSE(obs.spatially_complete());
    EXPECT_EQ(obs.to_strings(), kExample);
}

TEST(Observation, RejectsMalformedGrids) {
    EXPECT_THROW(Observation(std::vector<std::string>{"010", "01"}), ArgumentError);
    EXPECT_THROW(Observation(std::vector<std::string>{"010", "0x1"}), ArgumentError);
    EXPECT_THROW(Observation(std::vector<std::string>{"0?0", "011"}), ArgumentError);
    Observation obs(kExample);
    EXPECT_THROW(obs.set(0, 1, Cell::unknown), ArgumentError);
    obs.set(2, 2, Cell::zero);
    EXPECT_EQ(obs.unknown_count(), 1U);
}

TEST(Observation, FromConfigurations) {
    const Observation obs(std::vector<Configuration>{Configuration{0, 1}, Configuration{1, 1}});
    EXPECT_TRUE(obs.spatially_complete());
    EXPECT_EQ(obs.configuration(1), (Configuration{1, 1}));
}

TEST(CountKnown, Examples) {
    EXPECT_EQ(count_known(Observation(kExample)), 7U);
    EXPECT_EQ(count_known(Observation(std::vector<std::string>(4, "10110"))), 20U);
    EXPECT_EQ(count_known(Observation(std::vector<std::string>{"101", "???"})), 3U);
}

TEST(CountKnown, AtLeastColumnsAndMatchesReference) {
    Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto obs = random_partial(rng, 1 + rng() % 6, 1 + rng() % 70, 0.5);
        EXPECT_GE(count_known(obs), obs.cols());
        EXPECT_EQ(count_known(obs), ref::count_known(obs.to_strings()));
    }
}

TEST(SetCounts, Examples) {
    const Observation ex(kExample);
    EXPECT_EQ(set_counts(ObservationSet({ex})), (SetCounts{7, 3}));
    EXPECT_EQ(set_counts(ObservationSet({ex, ex})), (SetCounts{14, 6}));
    const ObservationSet trivial({Observation(std::vector<std::string>{"0110", "????", "????"}),
                                  Observation(std::vector<std::string>{"11", "??"})});
    const auto counts = set_counts(trivial);
    EXPECT_EQ(counts.known, counts.columns);
}

TEST(ObservationSet, RejectsEmpty) {
    EXPECT_THROW(ObservationSet(std::vector<Observation>{}), ArgumentError);
}

TEST(Completions, ExampleHasFourGrids) {
    const auto all = completions(Observation(kExample), 1000);
    ASSERT_EQ(all.size(), 4U);
    std::vector<std::vector<std::string>> grids;
    for (const auto& c : all) grids.push_back(c.to_strings());
    const std::vector<std::vector<std::string>> expected{
        {"010", "001", "110"}, {"010", "001", "111"}, {"010", "011", "110"}, {"010", "011", "111"}};
    EXPECT_EQ(grids, expected);
}

TEST(Completions, TrivialCases) {
    const Observation complete(std::vector<std::string>{"01", "10"});
    EXPECT_EQ(completions(complete, 1), std::vector<Observation>{complete});
    const Observation single(std::vector<std::string>{"10"});
    EXPECT_EQ(completions(single, 1), std::vector<Observation>{single});
}

TEST(Completions, LimitIsEnforced) {
    EXPECT_THROW(completions(Observation(kExample), 3), CapacityError);
}

TEST(Completions, CardinalityAndDistinctness) {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto obs = random_partial(rng, 1 + rng() % 4, 1 + rng() % 5, 0.4);
        const auto all = completions(obs, 1U << 20);
        EXPECT_EQ(all.size(), std::size_t{1} << obs.unknown_count());
        std::set<std::vector<std::string>> distinct;
        for (const auto& c : all) {
            EXPECT_TRUE(c.spatially_complete());
            for (std::size_t n = 0; n < obs.rows(); ++n)
                for (std::size_t m = 0; m < obs.cols(); ++m)
                    if (obs.known(n, m)) EXPECT_EQ(c.at(n, m), obs.at(n, m));
            distinct.insert(c.to_strings());
        }
        EXPECT_EQ(distinct.size(), all.size());
    }
}

TEST(ACompletion, Eca150WithGaps12) {
    const auto filled = a_completion(Observation(kExample), lut_from_number(150, 1), GapSequence{1, 2});
    EXPECT_EQ(filled.to_strings(), (std::vector<std::string>{"010", "011", "110"}));
}

TEST(ACompletion, ZeroRuleFillsZeros) {
    const auto filled = a_completion(Observation(kExample), lut_from_number(0, 1), GapSequence{1, 1});
    EXPECT_EQ(filled.to_strings(), (std::vector<std::string>{"010", "001", "110"}));
}

TEST(ACompletion, CompleteObservationUnchanged) {
    const Observation obs(std::vector<std::string>{"0110", "1001", "1111"});
    EXPECT_EQ(a_completion(obs, lut_from_number(30, 1), GapSequence{3, 1}), obs);
}

TEST(ACompletion, WrongGapCount) {
    EXPECT_THROW(a_completion(Observation(kExample), lut_from_number(150, 1), GapSequence{1}), ArgumentError);
}

TEST(ACompletion, IsAmongCompletionsAndMatchesReference) {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto obs = random_partial(rng, 2 + rng() % 3, 1 + rng() % 6, 0.5);
        const std::uint64_t rule = rng() % 256;
        std::vector<std::uint32_t> g;
        for (std::size_t n = 1; n < obs.rows(); ++n) g.push_back(1 + static_cast<std::uint32_t>(rng() % 3));
        const auto filled = a_completion(obs, lut_from_number(rule, 1), GapSequence(g));

        auto grid = obs.to_strings();
        for (std::size_t n = 1; n < grid.size(); ++n)
            grid[n] = ref::fill(grid[n], ref::iterate(rule, 1, grid[n - 1], g[n - 1]));
        EXPECT_EQ(filled.to_strings(), grid);

        const auto all = completions(obs, 1U << 20);
        EXPECT_NE(std::find(all.begin(), all.end(), filled), all.end());
    }
}

TEST(MaskRandom, ZeroIsNoOp) {
    const ObservationSet set({Observation(std::vector<std::string>{"010", "011", "110"})});
    Rng rng(1);
    EXPECT_EQ(mask_random(set, 0, rng), set);
}

TEST(MaskRandom, EverythingButFirstRow) {
    const ObservationSet set({Observation(std::vector<std::string>{"010", "011", "110"})});
    Rng rng(1);
    const auto masked = mask_random(set, 6, rng);
    EXPECT_EQ(set_counts(masked).known, 3U);
    EXPECT_EQ(masked[0].to_strings(), (std::vector<std::string>{"010", "???", "???"}));
    EXPECT_THROW(mask_random(set, 7, rng), CapacityError);
}

TEST(MaskRandom, PinnedSeedReproducesExample) {
    const ObservationSet set({Observation(std::vector<std::string>{"010", "011", "110"})});
    EXPECT_EQ(set_counts(set).known, 9U);
    Rng rng(16);
    const auto masked = mask_random(set, 2, rng);
    EXPECT_EQ(masked[0].to_strings(), kExample);
    EXPECT_EQ(set_counts(masked).known, 7U);
}

TEST(MaskRandom, DecreasesKnownByCountAndSparesFirstRows) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Observation> obs;
        const std::size_t count = 1 + rng() % 4;
        for (std::size_t i = 0; i < count; ++i) obs.push_back(random_partial(rng, 1 + rng() % 5, 1 + rng() % 80, 0.3));
        const ObservationSet set(obs);
        const auto before = set_counts(set);
        const std::uint64_t maskable = before.known - before.columns;
        const std::uint64_t k = maskable == 0 ? 0 : rng() % (maskable + 1);
        const auto masked = mask_random(set, k, rng);
        EXPECT_EQ(set_counts(masked).known, before.known - k);
        for (std::size_t i = 0; i < set.size(); ++i) {
            for (std::size_t m = 0; m < set[i].cols(); ++m) EXPECT_EQ(masked[i].at(0, m), set[i].at(0, m));
            for (std::size_t n = 0; n < set[i].rows(); ++n)
                for (std::size_t m = 0; m < set[i].cols(); ++m)
                    if (masked[i].known(n, m)) EXPECT_EQ(masked[i].at(n, m), set[i].at(n, m));
        }
    }
}

TEST(GapSequence, TimestepsAndBack) {
    const GapSequence gaps{1, 2, 3};
    EXPECT_EQ(gaps.timesteps(), (std::vector<std::uint64_t>{1, 3, 6}));
    EXPECT_EQ(gaps_from_timesteps({1, 3, 6}), gaps);
    EXPECT_THROW(gaps_from_timesteps({2, 2}), ArgumentError);
    EXPECT_THROW(gaps_from_timesteps({0}), ArgumentError);
}

TEST(GapSequence, Bounds) {
    EXPECT_THROW((GapSequence{1, 0}), ArgumentError);
    EXPECT_NO_THROW((GapSequence{1, 3}.check_bound(3)));
    EXPECT_THROW((GapSequence{1, 4}.check_bound(3)), ArgumentError);
}
