#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "auglang/codec/augmented.hpp"
#include "auglang/genfilter/filter.hpp"
#include "../support/filter_corpus.hpp"

namespace auglang::genfilter {
namespace {

codec::SlotSchema schema() {
  return codec::SlotSchema({"PlayMusic", "BookFlight"}, {"artist", "service", "city"});
}

TEST(FilterGenerations, SingleValidLine) {
  const std::vector<std::string> lines = {"intent : play music ; play [ muse : artist ]"};
  const auto report = filter_generations(lines, schema());
  EXPECT_EQ(report.accepted.size(), 1u);
  EXPECT_EQ(report.rejected(), 0u);
  EXPECT_EQ(report.total, 1u);
  EXPECT_EQ(report.accepted[0].tags, (std::vector<std::string>{"O", "B-artist"}));
}

TEST(FilterGenerations, SingleMalformedLine) {
  const std::vector<std::string> lines = {"intent : play music ; play [ muse artist ]"};
  const auto report = filter_generations(lines, schema());
  EXPECT_TRUE(report.accepted.empty());
  EXPECT_EQ(report.rejected_counts, (std::map<std::string, std::size_t>{{"malformed_span", 1}}));
}

TEST(FilterGenerations, ConstructedCorpusCounts) {
  const auto gen = testing::construct_generations(schema(), 70, 10, 3);
  ASSERT_EQ(gen.lines.size(), 100u);
  const auto report = filter_generations(gen.lines, schema());
  EXPECT_EQ(report.accepted.size(), 70u);
  EXPECT_EQ(report.accepted, gen.valid);
  EXPECT_EQ(report.rejected_counts,
            (std::map<std::string, std::size_t>{
                {"malformed_span", 10}, {"unknown_slot_type", 10}, {"unknown_intent", 10}}));
  EXPECT_EQ(report.accepted.size() + report.rejected(), report.total);
  for (std::size_t i = 0; i < report.accepted.size(); ++i) {
    EXPECT_EQ(codec::decode({gen.lines[report.accepted_lines[i]]}, schema()), report.accepted[i]);
  }
}

TEST(FilterGenerations, IdempotentOnAcceptedSet) {
  auto gen = testing::construct_generations(schema(), 50, 5, 9);
  gen.lines.push_back("garbage");
  gen.lines.push_back("");
  const auto first = filter_generations(gen.lines, schema());
  std::vector<std::string> again;
  for (const auto& ex : first.accepted) {
    const auto aug = codec::encode(ex, schema());
    EXPECT_EQ(codec::decode(aug, schema()), ex);
    again.push_back(aug.text);
  }
  const auto second = filter_generations(again, schema());
  EXPECT_EQ(second.rejected(), 0u);
  EXPECT_EQ(second.accepted, first.accepted);
  EXPECT_EQ(first.rejected_counts.at("missing_intent_header"), 2u);
}

TEST(FilterGenerations, Deduplication) {
  const std::vector<codec::LabeledExample> training = {
      {{"play", "muse"}, {"O", "B-artist"}, "PlayMusic"}};
  const std::vector<std::string> lines = {
      "intent : play music ; play [ muse : artist ]",
      "intent : play music ; play [ adele : artist ]",
      "intent : play music ;   play [ adele : artist ]",
      "intent : book flight ; to [ paris : city ]",
  };
  const auto off = filter_generations(lines, schema());
  EXPECT_EQ(off.accepted.size(), 4u);

  FilterOptions opts;
  opts.training = training;
  opts.dedup_training = true;
  opts.dedup_exact = true;
  const auto on = filter_generations(lines, schema(), opts);
  EXPECT_EQ(on.accepted_lines, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(on.rejected_counts, (std::map<std::string, std::size_t>{
                                    {kDuplicateOfTraining, 1}, {kExactDuplicate, 1}}));
}

TEST(FilterGenerations, MergeMatchesWholeRun) {
  const auto gen = testing::construct_generations(schema(), 40, 4, 11);
  const std::span<const std::string> all(gen.lines);
  const auto whole = filter_generations(all, schema());
  const auto a = filter_generations(all.subspan(0, 17), schema());
  const auto b = filter_generations(all.subspan(17, 20), schema());
  const auto c = filter_generations(all.subspan(37), schema());
  const auto left = merge_reports(merge_reports(a, b), c);
  const auto right = merge_reports(a, merge_reports(b, c));
  for (const auto& merged : {left, right}) {
    EXPECT_EQ(merged.accepted, whole.accepted);
    EXPECT_EQ(merged.accepted_lines, whole.accepted_lines);
    EXPECT_EQ(merged.rejected_counts, whole.rejected_counts);
    EXPECT_EQ(merged.total, whole.total);
  }
}

TEST(FilterGenerations, SummaryJson) {
  const std::vector<std::string> lines = {"intent : play music ; play [ muse artist ]",
                                          "intent : play music ; play"};
  EXPECT_EQ(filter_generations(lines, schema()).summary_json().dump(),
            R"({"total":2,"accepted":1,"rejected":{"malformed_span":1}})");
}

TEST(ReadGenerationLines, TrailingNewlineAndCrlf) {
  const auto path = std::filesystem::temp_directory_path() / "auglang_gen_lines.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "a\r\nb\n\nc\n";
  }
  EXPECT_EQ(read_generation_lines(path), (std::vector<std::string>{"a", "b", "", "c"}));
  std::filesystem::remove(path);
  EXPECT_THROW(read_generation_lines(path), Error);
}

}  // namespace
}  // namespace auglang::genfilter
