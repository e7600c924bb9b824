#include "daseg/tagger.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "daseg/error.h"
#include "daseg/metrics.h"
#include "generators.h"
#include "oracles.h"

namespace daseg {
namespace {

using testing::Rng;
using testing::Uniform;

ScoreLattice ToLattice(const testing::IntChain& c) {
  ScoreLattice lat;
  lat.length = c.length;
  lat.labels = c.labels;
  lat.emissions.assign(c.emission.begin(), c.emission.end());
  lat.transitions.assign(c.transition.begin(), c.transition.end());
  lat.start.assign(c.start.begin(), c.start.end());
  lat.stop.assign(c.stop.begin(), c.stop.end());
  return lat;
}

testing::IntChain RandomChain(Rng& rng, int length, int labels, int range) {
  testing::IntChain c;
  c.length = length;
  c.labels = labels;
  auto fill = [&](std::vector<int64_t>& v, size_t n) {
    v.resize(n);
    for (auto& x : v) x = Uniform(rng, -range, range);
  };
  fill(c.emission, static_cast<size_t>(length) * labels);
  fill(c.transition, static_cast<size_t>(labels) * labels);
  fill(c.start, labels);
  fill(c.stop, labels);
  return c;
}

TEST(ViterbiTest, MatchesExhaustiveSearchIncludingTies) {
  Rng rng(31);
  for (int k = 0; k < 300; ++k) {
    // Small weight ranges make ties frequent.
    const auto chain = RandomChain(rng, Uniform(rng, 1, 6), Uniform(rng, 1, 6),
                                   k % 2 == 0 ? 1 : 5);
    int64_t best = 0;
    const std::vector<int> expected = testing::ExhaustiveDecode(chain, &best);
    const ScoreLattice lat = ToLattice(chain);
    const std::vector<int> got = ViterbiDecode(lat);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(SequenceScore(lat, got), static_cast<double>(best));
    EXPECT_EQ(chain.Score(got), best);
  }
}

TEST(ViterbiTest, AllZeroScoresPickLabelZero) {
  testing::IntChain c;
  c.length = 4;
  c.labels = 3;
  c.emission.assign(12, 0);
  c.transition.assign(9, 0);
  c.start.assign(3, 0);
  c.stop.assign(3, 0);
  EXPECT_EQ(ViterbiDecode(ToLattice(c)), (std::vector<int>{0, 0, 0, 0}));
  ScoreLattice empty;
  empty.labels = 3;
  EXPECT_TRUE(ViterbiDecode(empty).empty());
}

TEST(FeatureTest, WordShape) {
  EXPECT_EQ(WordShape("Okay."), "Xx.");
  EXPECT_EQ(WordShape("1990s"), "dx");
  EXPECT_EQ(WordShape("uh-huh"), "x-x");
  EXPECT_EQ(WordShape("USA"), "X");
}

TEST(FeatureTest, ContextsSkipSentinels) {
  Dialog d;
  d.id = "d";
  d.turns = {{"A", {"Hi", "there."}}, {"B", {"Yes?"}}};
  const auto ctx = BuildContexts(Serialize(d));
  ASSERT_EQ(ctx.size(), 3u);
  EXPECT_EQ(ctx[0].window,
            (std::array<std::string, 5>{"<BOS>", "<BOS>", "Hi", "there.", "<TURN>"}));
  EXPECT_EQ(ctx[2].window,
            (std::array<std::string, 5>{"there.", "<TURN>", "Yes?", "<EOS>", "<EOS>"}));
  EXPECT_TRUE(ctx[0].first_in_turn);
  EXPECT_FALSE(ctx[0].speaker_change);
  EXPECT_TRUE(ctx[1].last_in_turn);
  EXPECT_TRUE(ctx[2].speaker_change);
  EXPECT_TRUE(ctx[2].first_in_turn);

  const FeatureVector f = ExtractFeatures(ctx[2]);
  EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
  for (const char* want : {"bias", "w0=yes", "prev=<TURN>", "w-2=there",
                           "next=<EOS>", "ends-with-?", "shape=Xx?",
                           "speaker-change", "first-in-turn", "last-in-turn"}) {
    EXPECT_NE(std::find(f.begin(), f.end(), want), f.end()) << want;
  }
}

TEST(TaggerTest, LearnsPunctuationCorpus) {
  Rng rng(42);
  const Corpus train = testing::PunctuationCorpus(rng, 120, "train");
  const Corpus test = testing::PunctuationCorpus(rng, 20, "test");
  TrainConfig config;
  config.epochs = 5;
  std::vector<double> history;
  const TaggerModel model = Train(train, test, config, [&](int, double f1) {
    history.push_back(f1);
  });
  EXPECT_EQ(history.size(), 5u);
  EXPECT_EQ(model.metadata.dev_macro_f1,
            *std::max_element(history.begin(), history.end()));
  const MetricsReport r = EvaluateCorpus(test, Predict(model, test, config.unit));
  EXPECT_LE(r.dser, 2.0);
  EXPECT_LE(*r.der, 5.0);
}

TEST(TaggerTest, TrainingIsDeterministic) {
  Rng rng(1);
  const Corpus train = testing::PunctuationCorpus(rng, 40, "train");
  const Corpus dev = testing::PunctuationCorpus(rng, 5, "dev");
  TrainConfig config;
  config.epochs = 3;
  const TaggerModel a = Train(train, dev, config);
  const TaggerModel b = Train(train, dev, config);
  EXPECT_EQ(SerializeModel(a), SerializeModel(b));
  config.seed = 7;
  EXPECT_NE(SerializeModel(Train(train, dev, config)), SerializeModel(a));
}

TEST(TaggerTest, TurnAndDialogUnitsAndExecutionsAgree) {
  Rng rng(3);
  const Corpus train = testing::PunctuationCorpus(rng, 30, "train");
  for (DecodeUnit unit : {DecodeUnit::kTurn, DecodeUnit::kDialog}) {
    TrainConfig config;
    config.epochs = 2;
    config.unit = unit;
    const TaggerModel m = Train(train, train, config);
    const Predictions p = Predict(m, train, unit);
    const Predictions s = Predict(m, train, unit, Execution::kSerial);
    EXPECT_EQ(p.dialogs, s.dialogs);
    EXPECT_TRUE(ValidateAgainst(p, train).ok());
  }
}

TEST(TaggerTest, AveragingMatchesManualAverage) {
  // Two single-word steps with a zero start: the first update happens at
  // step 1 and the second step changes nothing, so the averaged weight is
  // half the raw weight.
  const LabelSet ls(Granularity::kCustom, {"A", "B"}, "A");
  TaggerModel zero(ls, Variant::kNolower);
  PerceptronTrainer trainer(zero);
  Dialog d;
  d.id = "x";
  d.turns = {{"A", {"w"}}};
  const auto ctx = BuildContexts(Serialize(d));
  const std::vector<JointLabel> gold = {JointLabel::End(1)};
  EXPECT_TRUE(trainer.Step(ctx, gold));
  EXPECT_FALSE(trainer.Step(ctx, gold));
  const TaggerModel m = trainer.Snapshot();
  const auto* bias = m.Emission("bias");
  ASSERT_NE(bias, nullptr);
  // Raw weights after the update: I = -1, E_B = +1. Accumulated = step 1.
  // Average over 3 steps: w - acc / 3.
  EXPECT_DOUBLE_EQ((*bias)[2], 1.0 - 1.0 / 3.0);
  EXPECT_DOUBLE_EQ((*bias)[0], -1.0 + 1.0 / 3.0);
  EXPECT_EQ(m.metadata.updates, 1);
  EXPECT_THROW(trainer.Step(ctx, {}), Error);
}

TEST(TaggerTest, RejectsMismatchedCorpora) {
  Rng rng(5);
  const Corpus train = testing::PunctuationCorpus(rng, 5, "t");
  TrainConfig config;
  config.epochs = 1;
  const TaggerModel m = Train(train, train, config);
  Corpus lower = Normalize(train, Variant::kLower);
  EXPECT_THROW(Predict(m, lower, DecodeUnit::kDialog), Error);
  Corpus other = train;
  other.label_set = LabelSet::MrdaBasic();
  EXPECT_THROW(Train(train, other, config), Error);
  config.epochs = 0;
  EXPECT_THROW(Train(train, train, config), Error);
}

TaggerModel SmallModel() {
  Rng rng(9);
  const Corpus train = testing::PunctuationCorpus(rng, 10, "t");
  TrainConfig config;
  config.epochs = 2;
  config.averaging = false;
  config.unit = DecodeUnit::kTurn;
  return Train(train, train, config);
}

TEST(ModelFileTest, RoundTrip) {
  const TaggerModel m = SmallModel();
  const std::string bytes = SerializeModel(m);
  EXPECT_EQ(bytes.substr(0, 8), "DASEGTAG");
  const TaggerModel back = DeserializeModel(bytes);
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.config.unit, DecodeUnit::kTurn);
  EXPECT_FALSE(back.config.averaging);

  const auto path = std::filesystem::path(::testing::TempDir()) / "m.bin";
  SaveModel(m, path);
  EXPECT_TRUE(LoadModel(path) == m);
  EXPECT_THROW(LoadModel(path.string() + ".missing"), Error);
}

TEST(ModelFileTest, DetectsCorruption) {
  const std::string bytes = SerializeModel(SmallModel());
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(DeserializeModel(bad), Error);  // magic
  bad = bytes;
  bad[8] = 2;
  EXPECT_THROW(DeserializeModel(bad), Error);  // version
  bad = bytes;
  bad[bad.size() - 5] ^= 0x40;
  EXPECT_THROW(DeserializeModel(bad), Error);  // checksum
  EXPECT_THROW(DeserializeModel(bytes.substr(0, bytes.size() - 3)), Error);
  EXPECT_THROW(DeserializeModel(bytes + "x"), Error);
  EXPECT_THROW(DeserializeModel(""), Error);
}

}  // namespace
}  // namespace daseg
