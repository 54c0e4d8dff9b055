#include "caid/observation_io.hpp"

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "caid/errors.hpp"
#include "caid/experiment.hpp"

using namespace caid;

namespace {

std::size_t parse_error_line(std::string_view text) {
    try {
        parse_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

ObservationSet synthetic(std::size_t count) {
    Rng rng(21);
    auto set = generate_set(lut_from_number(110, 1), count, 6, 9, 3, rng);
    return mask_random(set, 40, rng);
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("caid_io_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(TextFormat, ParsesExample) {
    const auto set = parse_text("010\n0?1\n11?");
    ASSERT_EQ(set.size(), 1U);
    EXPECT_EQ(set[0], Observation(std::vector<std::string>{"010", "0?1", "11?"}));
}

TEST(TextFormat, BlankLinesSeparateObservations) {
    const auto set = parse_text("\n01\n10\n\n\n111\n1?1\n0?0\n");
    ASSERT_EQ(set.size(), 2U);
    EXPECT_EQ(set[0].rows(), 2U);
    EXPECT_EQ(set[1].cols(), 3U);
    EXPECT_EQ(parse_text("01\r\n10\r\n")[0].to_strings(), (std::vector<std::string>{"01", "10"}));
}

TEST(TextFormat, EmptyInputIsAnError) {
    EXPECT_THROW(parse_text(""), ParseError);
    EXPECT_THROW(parse_text("\n\n  \n"), ParseError);
}

TEST(TextFormat, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("010\n01\n"), 2U);
    EXPECT_EQ(parse_error_line("010\n011\n\n01a\n"), 4U);
    EXPECT_EQ(parse_error_line("01\n\n?1\n"), 3U);
    try {
        parse_text("010\n0101\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("line 2: ", 0), 0U);
    }
}

TEST(TextFormat, RoundTripOfLargeSet) {
    const auto set = synthetic(64);
    const auto back = parse_text(serialize_text(set));
    EXPECT_EQ(back.observations(), set.observations());
}

TEST(JsonFormat, RoundTripWithMetadata) {
    auto set = synthetic(64);
    set.metadata() = SetMetadata{150, 3, 99, 4};
    EXPECT_EQ(parse_json(serialize_json(set)), set);
}

TEST(JsonFormat, MetadataIsOptional) {
    const auto set = parse_json(R"({"observations": [["01", "1?"]]})");
    EXPECT_EQ(set.metadata(), SetMetadata{});
    EXPECT_EQ(set[0].unknown_count(), 1U);
}

TEST(JsonFormat, Rejections) {
    EXPECT_THROW(parse_json("{"), ParseError);
    EXPECT_THROW(parse_json(R"({"observations": []})"), ParseError);
    EXPECT_THROW(parse_json(R"({"observations": [["01"]], "extra": 1})"), ParseError);
    EXPECT_THROW(parse_json(R"({"observations": [["01"]], "metadata": {"rulee": 1}})"), ParseError);
    EXPECT_THROW(parse_json(R"({"observations": [["01"]], "metadata": {"rule": -1}})"), ParseError);
    EXPECT_THROW(parse_json(R"({"observations": [["0?"]]})"), ParseError);
    EXPECT_THROW(parse_json(R"({"observations": [["01", "0"]]})"), ParseError);
}

TEST(Files, FormatChosenByExtensionOrContent) {
    auto set = synthetic(3);
    set.metadata().rule = 110;
    const auto json_path = temp_path("set.json");
    const auto text_path = temp_path("set.txt");
    save_observations(json_path, set);
    save_observations(text_path, set);
    EXPECT_EQ(load_observations(json_path), set);
    EXPECT_EQ(load_observations(text_path).observations(), set.observations());

    const auto sniffed = temp_path("set.dat");
    std::filesystem::copy_file(json_path, sniffed, std::filesystem::copy_options::overwrite_existing);
    EXPECT_EQ(load_observations(sniffed), set);

    for (const auto& p : {json_path, text_path, sniffed}) std::filesystem::remove(p);
    EXPECT_THROW(load_observations(temp_path("missing.txt")), ParseError);
}
