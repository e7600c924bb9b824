#include "daseg/corpus.h"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "daseg/error.h"
#include "generators.h"

namespace daseg {
namespace {

namespace fs = std::filesystem;
using testing::Rng;
using testing::Uniform;

fs::path TempPath(const std::string& name) {
  return fs::path(::testing::TempDir()) / name;
}

Dialog SmallDialog() {
  Dialog d;
  d.id = "d1";
  d.turns = {{"A", {"Okay,", "uh,", "I", "think", "so."}},
             {"B", {"Uh-huh."}},
             {"A", {"...", "Really?"}}};
  d.reference = Segmentation{{0, 1, "Statement"},
                             {2, 4, "Statement"},
                             {5, 5, "Backchannel"},
                             {6, 6, "Disruption"},
                             {7, 7, "Question"}};
  return d;
}

Corpus SmallCorpus() {
  Corpus c;
  c.name = "small";
  c.label_set = LabelSet::MrdaBasic();
  c.dialogs.push_back(SmallDialog());
  return c;
}

TEST(CorpusTest, PartitionCheck) {
  EXPECT_TRUE(IsPartition({{0, 1, "a"}, {2, 2, "a"}}, 3));
  EXPECT_FALSE(IsPartition({{0, 1, "a"}, {3, 3, "a"}}, 4));   // gap
  EXPECT_FALSE(IsPartition({{0, 1, "a"}, {1, 2, "a"}}, 3));   // overlap
  EXPECT_FALSE(IsPartition({{0, 1, "a"}}, 3));                // short
  EXPECT_FALSE(IsPartition({{1, 0, "a"}}, 1));                // inverted
  EXPECT_TRUE(IsPartition({}, 0));
  EXPECT_THROW(CheckPartition({{0, 1, "a"}}, 3, "x"), Error);
}

TEST(CorpusTest, DialogAccessors) {
  const Dialog d = SmallDialog();
  EXPECT_EQ(d.word_count(), 8);
  EXPECT_EQ(d.Words()[5], "Uh-huh.");
  EXPECT_EQ(d.TurnOfWord(), (std::vector<int>{0, 0, 0, 0, 0, 1, 2, 2}));
}

TEST(CorpusTest, PunctuationHelpers) {
  EXPECT_EQ(StripPunctuation("\"Well,\""), "Well");
  EXPECT_EQ(StripPunctuation("uh-huh."), "uh-huh");
  EXPECT_EQ(StripPunctuation("(?)"), "");
  EXPECT_EQ(LowercaseAscii("It's OK"), "it's ok");
  for (char c : kPunctuation) EXPECT_TRUE(IsPunctuation(c));
  EXPECT_FALSE(IsPunctuation('-'));
}

TEST(CorpusTest, NormalizeLowerDropsEmptyWordsAndSegments) {
  const Corpus lower = Normalize(SmallCorpus(), Variant::kLower);
  ASSERT_EQ(lower.dialogs.size(), 1u);
  const Dialog& d = lower.dialogs[0];
  EXPECT_EQ(lower.variant, Variant::kLower);
  EXPECT_EQ(d.turns[0].words,
            (std::vector<std::string>{"okay", "uh", "i", "think", "so"}));
  EXPECT_EQ(d.turns[1].words, (std::vector<std::string>{"uh-huh"}));
  EXPECT_EQ(d.turns[2].words, (std::vector<std::string>{"really"}));
  const Segmentation expected{{0, 1, "Statement"},
                              {2, 4, "Statement"},
                              {5, 5, "Backchannel"},
                              {6, 6, "Question"}};
  EXPECT_EQ(*d.reference, expected);
  EXPECT_EQ(lower.metadata.dropped_words, 1);
  EXPECT_EQ(lower.metadata.dropped_segments, 1);
}

TEST(CorpusTest, NormalizeNolowerIsIdentity) {
  const Corpus c = SmallCorpus();
  const Corpus n = Normalize(c, Variant::kNolower);
  EXPECT_EQ(n.dialogs, c.dialogs);
  EXPECT_THROW(Normalize(Normalize(c, Variant::kLower), Variant::kNolower),
               Error);
}

std::string NoisyWord(Rng& rng) {
  static const std::vector<std::string> kBases = {"Okay", "uh-huh", "I",
                                                  "it's", "WELL", "so"};
  static const std::vector<std::string> kPunct = {"", "", ".", ",", "?", "!",
                                                  "\"", "(", ")", ";"};
  std::string w = kPunct[Uniform(rng, 0, 9)];
  if (Uniform(rng, 0, 5) > 0) w += kBases[Uniform(rng, 0, 5)];
  w += kPunct[Uniform(rng, 0, 9)];
  return w.empty() ? "x" : w;
}

Corpus NoisyCorpus(Rng& rng, int dialogs) {
  Corpus c;
  c.name = "noisy";
  c.label_set = testing::SyntheticLabelSet(5);
  for (int k = 0; k < dialogs; ++k) {
    Dialog d = testing::RandomDialog(rng, c.label_set, {4, 8, 0.3},
                                     "n" + std::to_string(k));
    for (auto& t : d.turns) {
      for (auto& w : t.words) w = NoisyWord(rng);
    }
    c.dialogs.push_back(std::move(d));
  }
  return c;
}

TEST(CorpusTest, NormalizePropertiesOnRandomCorpora) {
  Rng rng(7);
  for (int round = 0; round < 50; ++round) {
    const Corpus c = NoisyCorpus(rng, 5);
    ValidateCorpus(c);
    const Corpus once = Normalize(c, Variant::kLower);
    ValidateCorpus(once);
    const Corpus twice = Normalize(once, Variant::kLower);
    EXPECT_EQ(twice.dialogs, once.dialogs);
    const CorpusStats before = ComputeStats(c);
    const CorpusStats after = ComputeStats(once);
    EXPECT_LE(after.words, before.words);
    EXPECT_LE(after.segments, before.segments);
    for (const auto& d : once.dialogs) {
      for (const auto& w : d.Words()) {
        EXPECT_EQ(w, LowercaseAscii(StripPunctuation(w)));
        EXPECT_FALSE(w.empty());
      }
    }
  }
}

TEST(CorpusTest, StatsMatchNaiveTraversal) {
  Rng rng(11);
  Corpus c;
  c.label_set = testing::SyntheticLabelSet(5);
  for (int k = 0; k < 40; ++k) {
    c.dialogs.push_back(testing::RandomDialog(rng, c.label_set, {8, 20, 0.3},
                                              "s" + std::to_string(k)));
  }
  int turns = 0, words = 0, segments = 0, continued = 0, max_words = 0;
  std::map<std::string, int> per_act;
  for (const auto& d : c.dialogs) {
    int dialog_words = 0;
    for (const auto& t : d.turns) {
      ++turns;
      dialog_words += static_cast<int>(t.words.size());
    }
    words += dialog_words;
    max_words = std::max(max_words, dialog_words);
    for (const auto& s : *d.reference) {
      if (s.continued) {
        ++continued;
      } else {
        ++segments;
        ++per_act[s.act];
      }
    }
  }
  const CorpusStats stats = ComputeStats(c);
  EXPECT_EQ(stats.dialogs, 40);
  EXPECT_EQ(stats.turns, turns);
  EXPECT_EQ(stats.words, words);
  EXPECT_EQ(stats.segments, segments);
  EXPECT_EQ(stats.continued_segments, continued);
  EXPECT_EQ(stats.segments_per_act, per_act);
  EXPECT_EQ(stats.max_words_per_dialog, max_words);
  EXPECT_DOUBLE_EQ(stats.mean_words_per_dialog, words / 40.0);
}

TEST(CorpusTest, ValidateRejectsBrokenCorpora) {
  Corpus c = SmallCorpus();
  c.dialogs.push_back(SmallDialog());
  EXPECT_THROW(ValidateCorpus(c), Error);  // duplicate id

  c = SmallCorpus();
  (*c.dialogs[0].reference)[0].act = "Nope";
  EXPECT_THROW(ValidateCorpus(c), Error);

  c = SmallCorpus();
  c.dialogs[0].turns[0].words[0] = "two words";
  EXPECT_THROW(ValidateCorpus(c), Error);

  c = SmallCorpus();
  c.dialogs[0].reference->pop_back();
  EXPECT_THROW(ValidateCorpus(c), Error);
}

TEST(CorpusTest, FormatRoundTrip) {
  Rng rng(3);
  Corpus c;
  c.name = "rt";
  c.label_set = LabelSet::MrdaBasic();
  c.dialogs.push_back(SmallDialog());
  Dialog cont = testing::RandomDialog(rng, c.label_set, {6, 5, 1.0}, "d2");
  c.dialogs.push_back(cont);
  const fs::path path = TempPath("roundtrip.corpus");
  WriteCorpus(c, path);
  const Corpus back = ReadCorpus(path, "rt", LabelSet::MrdaBasic());
  EXPECT_EQ(back.dialogs, c.dialogs);
  EXPECT_EQ(back.variant, Variant::kNolower);
}

TEST(CorpusTest, RecordFieldOrder) {
  Dialog d;
  d.id = "x";
  d.turns = {{"A", {"hi"}}};
  d.reference = Segmentation{{0, 0, "Statement"}};
  EXPECT_EQ(DialogToRecord(d, Variant::kLower),
            R"({"id":"x","variant":"lower","turns":[{"speaker":"A","words":["hi"]}],)"
            R"("segments":[{"start":0,"end":0,"act":"Statement"}]})");
}

TEST(CorpusTest, PureLoadMapsEveryAct) {
  const fs::path path = TempPath("pure.corpus");
  WriteCorpus(SmallCorpus(), path);
  const Corpus pure = ReadCorpus(path, "p", LabelSet::Pure());
  for (const auto& s : *pure.dialogs[0].reference) EXPECT_EQ(s.act, kPureAct);
  EXPECT_EQ(ToPureSegmentation(SmallCorpus()).dialogs, pure.dialogs);
}

void WriteFile(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST(CorpusTest, ReadErrorsNameTheLine) {
  const fs::path path = TempPath("bad.corpus");
  WriteFile(path, DialogToRecord(SmallDialog(), Variant::kNolower) +
                      "\n{not json\n");
  try {
    ReadCorpus(path, "bad", LabelSet::MrdaBasic());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  // Act outside the supplied label set.
  WriteFile(path, DialogToRecord(SmallDialog(), Variant::kNolower) + "\n");
  EXPECT_THROW(ReadCorpus(path, "bad", LabelSet::Swda42()), Error);
  EXPECT_THROW(ReadCorpus(TempPath("missing.corpus"), "x", LabelSet::Pure()),
               Error);
}

TEST(CorpusTest, SplitFollowsManifestOrder) {
  Corpus c;
  c.label_set = LabelSet::MrdaBasic();
  for (const char* id : {"a", "b", "c", "d"}) {
    Dialog d = SmallDialog();
    d.id = id;
    c.dialogs.push_back(d);
  }
  const SplitManifest m{{"c", "a"}, {"d"}, {"b"}};
  const CorpusSplits s = Split(c, m);
  ASSERT_EQ(s.train.dialogs.size(), 2u);
  EXPECT_EQ(s.train.dialogs[0].id, "c");
  EXPECT_EQ(s.train.dialogs[1].id, "a");
  EXPECT_EQ(s.validation.dialogs[0].id, "d");
  EXPECT_EQ(s.test.dialogs[0].id, "b");
  EXPECT_THROW(Split(c, {{"a"}, {"a"}, {}}), Error);
  EXPECT_THROW(Split(c, {{"zz"}, {}, {}}), Error);

  const fs::path path = TempPath("manifest.json");
  WriteSplitManifest(m, path);
  const SplitManifest back = ReadSplitManifest(path);
  EXPECT_EQ(back.train, m.train);
  EXPECT_EQ(back.validation, m.validation);
  EXPECT_EQ(back.test, m.test);
}

}  // namespace
}  // namespace daseg
