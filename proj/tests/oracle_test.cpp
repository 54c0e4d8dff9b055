#include "caid/oracle.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "caid/error_measures.hpp"
#include "caid/errors.hpp"
#include "caid/experiment.hpp"
#include "reference.hpp"

using namespace caid;

namespace {

std::vector<ref::Grid> grids(const ObservationSet& set) {
    std::vector<ref::Grid> out;
    for (const auto& obs : set) out.push_back(obs.to_strings());
    return out;
}

ObservationSet small_set(Rng& rng, std::uint64_t rule, std::uint32_t bound) {
    auto set = generate_set(lut_from_number(rule, 1), 1 + rng() % 3, 2 + rng() % 3, 1 + rng() % 6, bound, rng);
    const auto counts = set_counts(set);
    return mask_random(set, rng() % (counts.known - counts.columns + 1), rng);
}

}  // namespace

TEST(VerifyFit, TrueRuleFitsItsSet) {
    Rng rng(1);
    for (std::uint64_t rule : {30U, 110U, 150U, 180U}) {
        const auto set = generate_set(lut_from_number(rule, 1), 3, 5, 10, 3, rng);
        EXPECT_TRUE(verify_fit(lut_from_number(rule, 1), set, 3));
        EXPECT_TRUE(verify_fit(embed(lut_from_number(rule, 1), 2), set, 3));
    }
}

TEST(VerifyFit, ZeroRuleCannotProduceOnes) {
    const ObservationSet set({Observation(std::vector<std::string>{"010", "111"})});
    EXPECT_FALSE(verify_fit(lut_from_number(0, 1), set, 2));
    EXPECT_FALSE(ref::fits(0, 1, grids(set), 2));
    EXPECT_TRUE(verify_fit(lut_from_number(150, 1), set, 2));
}

TEST(VerifyFit, AnyRuleFitsWhenOnlyFirstRowsAreKnown) {
    const ObservationSet set({Observation(std::vector<std::string>{"0110", "????", "????"}),
                              Observation(std::vector<std::string>{"101", "???"})});
    for (std::uint64_t rule = 0; rule < 256; ++rule) EXPECT_TRUE(verify_fit(lut_from_number(rule, 1), set, 2));
}

TEST(VerifyFit, BudgetIsEnforced) {
    Rng rng(2);
    const auto set = generate_set(lut_from_number(90, 1), 1, 6, 5, 4, rng);
    OracleBudget budget;
    budget.max_gap_sequences = 1000;
    EXPECT_THROW(verify_fit(lut_from_number(90, 1), set, 4, budget), CapacityError);
    budget.max_gap_sequences = 1024;
    EXPECT_TRUE(verify_fit(lut_from_number(90, 1), set, 4, budget));
}

TEST(VerifyFit, AgreesWithExactErrorDefinitionAndReference) {
    Rng rng(3);
    int fits = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint64_t gen = rng() % 256;
        const std::uint32_t bound = 1 + static_cast<std::uint32_t>(rng() % 3);
        const auto set = small_set(rng, gen, bound);
        const std::uint64_t rule = rng() % 2 == 0 ? gen : rng() % 256;
        const auto lut = lut_from_number(rule, 1);

        const bool fast = verify_fit(lut, set, bound);
        bool by_error = true;
        bool by_definition = true;
        OracleBudget wide;
        wide.max_completions = 1U << 18;
        for (const auto& obs : set) {
            by_error = by_error && min_error_exact(lut, obs, bound, 1U << 20).value == 0;
            by_definition = by_definition && fits_by_definition(lut, obs, bound, wide);
        }
        EXPECT_EQ(fast, by_error);
        EXPECT_EQ(fast, by_definition);
        EXPECT_EQ(fast, ref::fits(rule, 1, grids(set), bound));
        fits += fast;
    }
    EXPECT_GT(fits, 100);
}

TEST(VerifyFit, SubsetMonotone) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t gen = rng() % 256;
        auto set = generate_set(lut_from_number(gen, 1), 4, 3, 5, 2, rng);
        set = mask_random(set, rng() % 30, rng);
        const auto lut = lut_from_number(rng() % 4 == 0 ? gen : rng() % 256, 1);
        if (!verify_fit(lut, set, 2)) continue;
        for (unsigned mask = 1; mask < 16; ++mask) {
            std::vector<Observation> part;
            for (std::size_t i = 0; i < 4; ++i)
                if ((mask >> i) & 1U) part.push_back(set[i]);
            EXPECT_TRUE(verify_fit(lut, ObservationSet(part), 2));
        }
    }
}

TEST(EnumerateFittingRules, ContainsGenerator110) {
    Rng rng(5);
    const auto set = generate_set(lut_from_number(110, 1), 2, 3, 8, 2, rng);
    const auto rules = enumerate_fitting_rules(set, 1, 2);
    EXPECT_TRUE(std::binary_search(rules.begin(), rules.end(), 110U));
    EXPECT_TRUE(std::is_sorted(rules.begin(), rules.end()));
}

TEST(EnumerateFittingRules, TrivialSetAdmitsEveryRule) {
    const ObservationSet set({Observation(std::vector<std::string>{"0110", "????", "????"})});
    EXPECT_EQ(enumerate_fitting_rules(set, 1, 3).size(), 256U);
    EXPECT_EQ(enumerate_fitting_rules(set, 0, 3), (std::vector<std::uint64_t>{0, 1, 2, 3}));
}

TEST(EnumerateFittingRules, MatchesReferenceScan) {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint64_t gen = rng() % 256;
        const auto set = small_set(rng, gen, 2);
        std::vector<std::uint64_t> expected;
        for (std::uint64_t rule = 0; rule < 256; ++rule)
            if (ref::fits(rule, 1, grids(set), 2)) expected.push_back(rule);
        EXPECT_EQ(enumerate_fitting_rules(set, 1, 2), expected);
    }
}

TEST(EnumerateFittingRules, ThreadCountDoesNotMatter) {
    Rng rng(7);
    const auto set = small_set(rng, 54, 3);
    EXPECT_EQ(enumerate_fitting_rules(set, 1, 3, {}, 1), enumerate_fitting_rules(set, 1, 3, {}, 3));
}

TEST(EnumerateFittingRules, Refusals) {
    const ObservationSet set({Observation(std::vector<std::string>{"01", "10"})});
    EXPECT_THROW(enumerate_fitting_rules(set, 2, 2), CapacityError);
    OracleBudget budget;
    budget.max_rules = 100;
    EXPECT_THROW(enumerate_fitting_rules(set, 1, 2, budget), CapacityError);
    EXPECT_THROW(enumerate_fitting_rules(set, -1, 2), RangeError);
}

TEST(FitsByDefinition, CompletionLimit) {
    const Observation obs(std::vector<std::string>{"0110", "????", "????"});
    OracleBudget budget;
    budget.max_completions = 128;
    EXPECT_THROW(fits_by_definition(lut_from_number(0, 1), obs, 2, budget), CapacityError);
    budget.max_completions = 256;
    EXPECT_TRUE(fits_by_definition(lut_from_number(0, 1), obs, 2, budget));
}
