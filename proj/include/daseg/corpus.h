#ifndef DASEG_CORPUS_H_
#define DASEG_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daseg/label_set.h"

namespace daseg {

enum class Variant { kLower, kNolower };

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);

struct Turn {
  std::string speaker;
  std::vector<std::string> words;

  friend bool operator==(const Turn&, const Turn&) = default;
};

// A labeled span [start, end] (inclusive, global word indices). A segment
// with `continued` set is an interrupted part whose act resumes in a later
// `+` utterance of the same speaker; its last word is coded I, not E.
struct FunctionalSegment {
  int start = 0;
  int end = 0;
  std::string act;
  bool continued = false;

  int length() const { return end - start + 1; }
  friend bool operator==(const FunctionalSegment&,
                         const FunctionalSegment&) = default;
};

using Segmentation = std::vector<FunctionalSegment>;

// True iff the segments are sorted, non-overlapping and tile [0, word_count).
bool IsPartition(const Segmentation& segments, int word_count);
// Throws daseg::Error with `context` in the message if not a partition.
void CheckPartition(const Segmentation& segments, int word_count,
                    std::string_view context);

struct Dialog {
  std::string id;
  std::vector<Turn> turns;
  std::optional<Segmentation> reference;

  int word_count() const;
  // Flattened word texts in temporal order.
  std::vector<std::string> Words() const;
  // Index of the turn owning each flattened word.
  std::vector<int> TurnOfWord() const;

  friend bool operator==(const Dialog&, const Dialog&) = default;
};

struct CorpusMetadata {
  int dropped_words = 0;
  int dropped_segments = 0;
  int dropped_utterances = 0;
};

struct Corpus {
  std::string name;
  Variant variant = Variant::kNolower;
  LabelSet label_set = LabelSet::Pure();
  std::vector<Dialog> dialogs;
  CorpusMetadata metadata;

  const Dialog* Find(std::string_view id) const;
};

struct CorpusStats {
  int dialogs = 0;
  int turns = 0;
  int words = 0;
  int segments = 0;
  int continued_segments = 0;
  std::map<std::string, int> segments_per_act;
  double mean_words_per_dialog = 0.0;
  int max_words_per_dialog = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// Characters removed from word texts by the `lower` variant.
inline constexpr std::string_view kPunctuation = ".,?!;:\"'()";

bool IsPunctuation(char c);
std::string StripPunctuation(std::string_view word);
std::string LowercaseAscii(std::string_view text);

// Checks every corpus invariant: partition of each reference, acts in the
// label set, non-empty whitespace-free words, unique dialog ids.
void ValidateCorpus(const Corpus& corpus);

// `nolower` -> `nolower` is the identity. `lower` lowercases, strips
// kPunctuation, drops empty words and empty segments, recomputing indices.
Corpus Normalize(const Corpus& corpus, Variant target);

// Segment counts are taken in the joint-coded space: each run of continued
// parts closed by its final part counts once.
CorpusStats ComputeStats(const Corpus& corpus);

// Replaces every reference act with the single pure-segmentation act.
Corpus ToPureSegmentation(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Splits.

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

struct CorpusSplits {
  Corpus train;
  Corpus validation;
  Corpus test;
};

SplitManifest ReadSplitManifest(const std::filesystem::path& path);
void WriteSplitManifest(const SplitManifest& manifest,
                        const std::filesystem::path& path);
CorpusSplits Split(const Corpus& corpus, const SplitManifest& manifest);

// ---------------------------------------------------------------------------
// Normalized corpus format: one JSON record per line per dialog,
// {"id", "variant", "turns":[{"speaker","words"}], "segments":[{"start",
// "end","act"[,"continued"]}]} in that field order.

std::string DialogToRecord(const Dialog& dialog, Variant variant);
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path);
// The label set is not stored in the file; the caller supplies it and every
// act is validated against it. With the pure-segmentation label set every
// act is read as the single pure act, so any corpus file can be scored in
// pure-segmentation mode.
Corpus ReadCorpus(const std::filesystem::path& path, std::string name,
                  const LabelSet& label_set);

// ---------------------------------------------------------------------------
// Native importers.

struct ImportOptions {
  // Drop utterances left without words after markup stripping instead of
  // failing. Always true for real distributions.
  bool drop_empty_utterances = true;
};

// Strips SWDA transcription markup and annotator comments from an
// utterance, returning the remaining whitespace-separated words.
std::vector<std::string> CleanSwdaText(std::string_view text);
// Maps a raw SWDA act tag to its clustered SWBD-DAMSL tag ("+" stays "+").
std::string SwdaClusterTag(std::string_view raw_tag);

Corpus ImportSwda(const std::filesystem::path& root,
                  const LabelSet& label_set, const ImportOptions& options = {});
Corpus ImportMrda(const std::filesystem::path& root, Granularity granularity,
                  const ImportOptions& options = {});
// Derives a manifest from an MRDA tree laid out as {train,val,test}/*.txt.
std::optional<SplitManifest> MrdaLayoutManifest(
    const std::filesystem::path& root);

}  // namespace daseg

#endif  // DASEG_CORPUS_H_
