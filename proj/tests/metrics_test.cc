#include "daseg/metrics.h"

#include <gtest/gtest.h>

#include "daseg/coding.h"
#include "daseg/error.h"
#include "generators.h"
#include "oracles.h"

namespace daseg {
namespace {

using testing::Rng;

Corpus OneDialogCorpus(const LabelSet& ls, int words, Segmentation ref) {
  Corpus c;
  c.label_set = ls;
  Dialog d;
  d.id = "d0";
  d.turns.push_back({"A", {}});
  for (int i = 0; i < words; ++i) d.turns[0].words.push_back("w");
  d.reference = std::move(ref);
  c.dialogs.push_back(std::move(d));
  return c;
}

TEST(MetricsTest, WorkedExample) {
  const LabelSet ls(Granularity::kCustom, {"Statement", "Acknowledgment"},
                    "Statement");
  const Corpus ref = OneDialogCorpus(ls, 3, {{0, 2, "Statement"}});
  const Predictions hyp = testing::PredictionsFromSegmentations(
      ref, {{{0, 0, "Acknowledgment"}, {1, 2, "Statement"}}});
  const MetricsReport r = EvaluateCorpus(ref, hyp);
  EXPECT_NEAR(r.micro_f1, 200.0 / 3, 1e-9);
  EXPECT_NEAR(r.macro_f1, 500.0 / 9, 1e-9);
  EXPECT_EQ(r.dser, 100.0);
  EXPECT_EQ(r.segwer, 100.0);
  EXPECT_EQ(r.der, 100.0);
  EXPECT_EQ(r.jointwer, 100.0);
  EXPECT_EQ(r.denominators, (Denominators{1, 3, 3}));
  ASSERT_EQ(r.per_class.size(), 3u);
  EXPECT_EQ(r.per_class[0].first, "I");
  EXPECT_EQ(r.per_class[1].first, "E_Statement");
  EXPECT_EQ(r.per_class[2].first, "E_Acknowledgment");
  EXPECT_NEAR(r.per_class[0].second.f1, 200.0 / 3, 1e-9);
  EXPECT_EQ(r.per_class[0].second.support, 2);
  // The reference segment is substituted by the hypothesis Statement; the
  // Acknowledgment is an insertion and has no confusion cell.
  EXPECT_EQ(r.confusion.at("Statement").at("Statement"), 1);
  EXPECT_EQ(r.confusion.at("Statement").count("Acknowledgment"), 0u);
}

TEST(MetricsTest, PerfectPredictionsScoreZeroErrors) {
  Rng rng(1);
  Corpus c;
  c.label_set = testing::SyntheticLabelSet(42);
  for (int k = 0; k < 20; ++k) {
    c.dialogs.push_back(testing::RandomDialog(rng, c.label_set, {8, 20, 0.3},
                                              "d" + std::to_string(k)));
  }
  const MetricsReport r = EvaluateCorpus(c, ReferencePredictions(c, "oracle"));
  EXPECT_EQ(r.micro_f1, 100.0);
  EXPECT_EQ(r.macro_f1, 100.0);
  EXPECT_EQ(r.dser, 0.0);
  EXPECT_EQ(r.segwer, 0.0);
  EXPECT_EQ(r.der, 0.0);
  EXPECT_EQ(r.jointwer, 0.0);
}

TEST(MetricsTest, TokenF1MatchesNaiveOracle) {
  Rng rng(4);
  const LabelSet ls = testing::SyntheticLabelSet(5);
  for (int k = 0; k < 200; ++k) {
    const int n = testing::Uniform(rng, 1, 30);
    const Segmentation ref = testing::RandomPartition(rng, n, ls);
    const Segmentation hyp = testing::PerturbPartition(rng, ref, n, ls);
    const LabelSequence lr = EncodeJoint(ref, ls), lh = EncodeJoint(hyp, ls);
    std::vector<std::string> nr, nh;
    for (auto l : lr.labels) nr.push_back(ls.JointName(l));
    for (auto l : lh.labels) nh.push_back(ls.JointName(l));
    double micro = 0, macro = 0;
    testing::NaiveTokenF1(nr, nh, &micro, &macro);
    const TokenF1 f = ComputeTokenF1(lr, lh, ls);
    EXPECT_NEAR(f.micro, micro, 1e-9);
    EXPECT_NEAR(f.macro, macro, 1e-9);
  }
}

TEST(MetricsTest, SegmentRatesMatchBruteForce) {
  Rng rng(6);
  for (int size : {1, 5, 42}) {
    const LabelSet ls = testing::SyntheticLabelSet(size);
    for (int k = 0; k < 300; ++k) {
      const int n = testing::Uniform(rng, 1, 50);
      const Segmentation ref = testing::RandomPartition(rng, n, ls);
      const Segmentation hyp = testing::PerturbPartition(rng, ref, n, ls);
      const testing::BruteRates b = testing::BruteForceRates(ref, hyp);
      const SegmentCounts c = CountSegmentErrors(ref, hyp);
      EXPECT_EQ(c.ref_segments, b.segments);
      EXPECT_EQ(c.ref_words, b.words);
      EXPECT_EQ(c.boundary_errors, b.boundary_errors);
      EXPECT_EQ(c.boundary_error_words, b.boundary_error_words);
      EXPECT_EQ(c.label_errors, b.label_errors);
      EXPECT_EQ(c.label_error_words, b.label_error_words);
      const SegmentRates r = SegmentErrorRates(ref, hyp);
      EXPECT_GE(r.der, r.dser);
      EXPECT_GE(r.jointwer, r.segwer);
      if (size == 1) {
        EXPECT_EQ(r.der, r.dser);
        EXPECT_EQ(r.jointwer, r.segwer);
      }
    }
  }
}

TEST(MetricsTest, CorpusRatesArePooled) {
  Rng rng(8);
  Corpus c;
  c.label_set = testing::SyntheticLabelSet(5);
  std::vector<Segmentation> hyps;
  testing::BruteRates total;
  for (int k = 0; k < 30; ++k) {
    Dialog d = testing::RandomDialog(rng, c.label_set, {6, 12, 0.0},
                                     "d" + std::to_string(k));
    const Segmentation hyp =
        testing::PerturbPartition(rng, *d.reference, d.word_count(), c.label_set);
    const testing::BruteRates b = testing::BruteForceRates(*d.reference, hyp);
    total.segments += b.segments;
    total.words += b.words;
    total.boundary_errors += b.boundary_errors;
    total.boundary_error_words += b.boundary_error_words;
    total.label_errors += b.label_errors;
    total.label_error_words += b.label_error_words;
    hyps.push_back(hyp);
    c.dialogs.push_back(std::move(d));
  }
  const Predictions p = testing::PredictionsFromSegmentations(c, hyps);
  const MetricsReport r = EvaluateCorpus(c, p);
  EXPECT_DOUBLE_EQ(r.dser, total.dser());
  EXPECT_DOUBLE_EQ(r.segwer, total.segwer());
  EXPECT_DOUBLE_EQ(*r.der, total.der());
  EXPECT_DOUBLE_EQ(*r.jointwer, total.jointwer());
  EXPECT_EQ(EvaluateCorpus(c, p, Execution::kSerial), r);
}

TEST(MetricsTest, ContinuationsAreScoredInCanonicalSpace) {
  const LabelSet ls = LabelSet::MrdaBasic();
  Corpus c;
  c.label_set = ls;
  Dialog d;
  d.id = "c";
  d.turns = {{"A", {"i", "was"}}, {"B", {"yeah"}}, {"A", {"going"}}};
  d.reference = Segmentation{
      {0, 1, "Statement", true}, {2, 2, "Backchannel"}, {3, 3, "Statement"}};
  c.dialogs.push_back(d);
  const MetricsReport r = EvaluateCorpus(c, ReferencePredictions(c, "ref"));
  EXPECT_EQ(r.dser, 0.0);
  EXPECT_EQ(r.denominators.ref_segments, 2);
}

TEST(MetricsTest, PureSetHasNoLabeledRates) {
  Rng rng(10);
  Corpus c;
  c.label_set = LabelSet::Pure();
  std::vector<Segmentation> hyps;
  for (int k = 0; k < 10; ++k) {
    Dialog d = testing::RandomDialog(rng, c.label_set, {6, 12, 0.0},
                                     "d" + std::to_string(k));
    hyps.push_back(testing::PerturbPartition(rng, *d.reference, d.word_count(),
                                             c.label_set));
    c.dialogs.push_back(std::move(d));
  }
  const MetricsReport r =
      EvaluateCorpus(c, testing::PredictionsFromSegmentations(c, hyps));
  EXPECT_FALSE(r.der.has_value());
  EXPECT_FALSE(r.jointwer.has_value());
}

TEST(MetricsTest, IncompatiblePredictionsAreRejected) {
  const LabelSet ls = LabelSet::MrdaBasic();
  const Corpus c = OneDialogCorpus(ls, 3, {{0, 2, "Statement"}});
  Predictions p = ReferencePredictions(c, "x");
  p.dialogs[0].labels.pop_back();
  EXPECT_THROW(EvaluateCorpus(c, p), Error);
  p = ReferencePredictions(c, "x");
  p.dialogs[0].dialog_id = "other";
  EXPECT_THROW(EvaluateCorpus(c, p), Error);
  p = ReferencePredictions(c, "x");
  p.variant = Variant::kLower;
  EXPECT_THROW(EvaluateCorpus(c, p), Error);
}

}  // namespace
}  // namespace daseg
