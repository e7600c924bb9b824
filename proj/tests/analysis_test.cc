#include "daseg/analysis.h"

#include <gtest/gtest.h>

#include "daseg/error.h"
#include "generators.h"

namespace daseg {
namespace {

Corpus Single(const LabelSet& ls, std::vector<Turn> turns, Segmentation ref) {
  Corpus c;
  c.name = "t";
  c.label_set = ls;
  Dialog d;
  d.id = "d0";
  d.turns = std::move(turns);
  d.reference = std::move(ref);
  c.dialogs.push_back(std::move(d));
  return c;
}

TEST(AnalysisTest, DerPerActCanExceedHundred) {
  const Corpus c = Single(LabelSet::MrdaBasic(), {{"A", {"a", "b", "c", "d"}}},
                          {{0, 3, "Statement"}});
  const Predictions hyp = testing::PredictionsFromSegmentations(
      c, {{{0, 0, "Statement"}, {1, 1, "Statement"}, {2, 3, "Statement"}}});
  const auto rows = PerActRates(c, hyp);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].act, "Statement");
  EXPECT_EQ(rows[0].count, 1);
  EXPECT_EQ(rows[0].dser, 100.0);
  EXPECT_EQ(rows[0].label_errors, 3);
  EXPECT_EQ(rows[0].der, 300.0);
  EXPECT_EQ(PerActRates(c, hyp, Execution::kSerial)[0].der, 300.0);
}

TEST(AnalysisTest, InsertionsChargedToHypothesisAct) {
  const Corpus c = Single(LabelSet::MrdaBasic(), {{"A", {"a", "b", "c"}}},
                          {{0, 0, "Question"}, {1, 2, "Statement"}});
  // Question correct; Statement split into Backchannel + Statement.
  const Predictions hyp = testing::PredictionsFromSegmentations(
      c, {{{0, 0, "Question"}, {1, 1, "Backchannel"}, {2, 2, "Statement"}}});
  const auto rows = PerActRates(c, hyp);
  ASSERT_EQ(rows.size(), 2u);  // Backchannel has no reference support
  EXPECT_EQ(rows[0].act, "Statement");
  EXPECT_EQ(rows[0].der, 100.0);
  EXPECT_EQ(rows[1].act, "Question");
  EXPECT_EQ(rows[1].der, 0.0);
  EXPECT_EQ(rows[1].labeled_matches, 1);
}

TEST(AnalysisTest, CompareModelsSortsByGain) {
  const Corpus c = Single(LabelSet::MrdaBasic(),
                          {{"A", {"a", "b", "c", "d"}}, {"B", {"e", "f"}}},
                          {{0, 1, "Statement"}, {2, 3, "Question"},
                           {4, 4, "Backchannel"}, {5, 5, "Statement"}});
  const Predictions a = ReferencePredictions(c, "a");
  const Predictions b = testing::PredictionsFromSegmentations(
      c, {{{0, 1, "Statement"}, {2, 2, "Question"}, {3, 3, "Question"},
           {4, 5, "Backchannel"}}});
  const ActGainTable t = CompareModels(c, a, b, RateKind::kDser, 0);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].act, "Statement");
  EXPECT_EQ(t.rows[0].abs_gain, 50.0);
  EXPECT_EQ(t.rows[1].act, "Question");
  EXPECT_EQ(t.rows[1].abs_gain, 100.0);
  EXPECT_EQ(t.rows[2].act, "Backchannel");
  EXPECT_TRUE(t.never_recognized_a.empty());
  EXPECT_EQ(t.never_recognized_b,
            (std::vector<std::string>{"Question", "Backchannel"}));
  EXPECT_EQ(CompareModels(c, a, b, RateKind::kDser, 2).rows.size(), 1u);
  EXPECT_EQ(ParseRateKind("DER"), RateKind::kDer);
  EXPECT_THROW(ParseRateKind("WER"), Error);
}

TEST(AnalysisTest, FinalPunctuationClasses) {
  EXPECT_EQ(ClassifyFinalPunctuation("so."), FinalPunct::kFullStop);
  EXPECT_EQ(ClassifyFinalPunctuation("so.\""), FinalPunct::kFullStop);
  EXPECT_EQ(ClassifyFinalPunctuation("what?)"), FinalPunct::kQuestion);
  EXPECT_EQ(ClassifyFinalPunctuation("wow!"), FinalPunct::kExclamation);
  EXPECT_EQ(ClassifyFinalPunctuation("well,"), FinalPunct::kNone);
  EXPECT_EQ(ClassifyFinalPunctuation("so"), FinalPunct::kNone);
  EXPECT_EQ(ClassifyFinalPunctuation("a.b"), FinalPunct::kNone);
}

Corpus PunctCorpus() {
  return Single(LabelSet::MrdaBasic(),
                {{"A", {"Okay.", "so", "what?"}}, {"B", {"Yes,", "right.", "Wow!"}}},
                {{0, 0, "Statement"}, {1, 2, "Question"}, {3, 4, "Statement"},
                 {5, 5, "Backchannel"}});
}

TEST(AnalysisTest, PunctuationByAct) {
  const Corpus c = PunctCorpus();
  const FinalPunctuationTable counts = PunctuationByAct(c, nullptr);
  EXPECT_FALSE(counts.has_errors);
  ASSERT_EQ(counts.rows.size(), 3u);
  EXPECT_EQ(counts.rows[0].act, "Statement");
  EXPECT_EQ(counts.rows[0].counts, (std::array<int64_t, 4>{2, 0, 0, 0}));
  EXPECT_EQ(counts.rows[1].counts, (std::array<int64_t, 4>{0, 0, 1, 0}));
  EXPECT_EQ(counts.rows[2].counts, (std::array<int64_t, 4>{0, 1, 0, 0}));

  const Predictions hyp = testing::PredictionsFromSegmentations(
      c, {{{0, 0, "Statement"}, {1, 2, "Statement"}, {3, 5, "Statement"}}});
  const FinalPunctuationTable errors = PunctuationByAct(c, &hyp);
  EXPECT_TRUE(errors.has_errors);
  EXPECT_EQ(FinalPunctuationTable::ErrorPercent(errors.rows[0], 0), 50.0);
  EXPECT_EQ(FinalPunctuationTable::ErrorPercent(errors.rows[1], 2), 100.0);
  EXPECT_EQ(FinalPunctuationTable::ErrorPercent(errors.rows[2], 1), 100.0);
  EXPECT_EQ(FinalPunctuationTable::ErrorPercent(errors.rows[2], 0), 0.0);
}

TEST(AnalysisTest, MidSegmentPunctuation) {
  const Corpus c = PunctCorpus();
  EXPECT_EQ(MidSegmentPunctuation(c, nullptr), (MidPunctuationCounts{0, 1, 0, 4}));
  const Predictions hyp = testing::PredictionsFromSegmentations(
      c, {{{0, 0, "Statement"}, {1, 2, "Statement"}, {3, 5, "Statement"}}});
  EXPECT_EQ(MidSegmentPunctuation(c, &hyp), (MidPunctuationCounts{1, 1, 0, 3}));
}

TEST(AnalysisTest, PunctuationNeedsNolower) {
  const Corpus lower = Normalize(PunctCorpus(), Variant::kLower);
  EXPECT_THROW(PunctuationByAct(lower, nullptr), Error);
  EXPECT_THROW(MidSegmentPunctuation(lower, nullptr), Error);
}

}  // namespace
}  // namespace daseg
