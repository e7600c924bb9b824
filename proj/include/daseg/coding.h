#ifndef DASEG_CODING_H_
#define DASEG_CODING_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "daseg/corpus.h"
#include "daseg/label_set.h"

namespace daseg {

// Surface form of the speaker-change sentinel. Imported words equal to it
// are escaped with a leading backslash.
inline constexpr std::string_view kTurnToken = "TURN";
std::string EscapeReservedWord(std::string word);

struct LabelSequence {
  std::string dialog_id;
  std::vector<JointLabel> labels;

  friend bool operator==(const LabelSequence&, const LabelSequence&) = default;
};

// A dialog serialized in temporal order, one TURN sentinel between
// consecutive turns. word_index[i] is the global word index of item i, or
// -1 for a sentinel.
struct TokenView {
  std::string dialog_id;
  std::vector<std::string> items;
  std::vector<int> word_index;

  bool is_sentinel(size_t i) const { return word_index[i] < 0; }
  int size() const { return static_cast<int>(items.size()); }
  int word_count() const;
};

// [begin, end) over the items of a TokenView.
struct Window {
  std::string dialog_id;
  int begin = 0;
  int end = 0;
  int ordinal = 0;

  int size() const { return end - begin; }
  friend bool operator==(const Window&, const Window&) = default;
};

TokenView Serialize(const Dialog& dialog);

// Word at each segment end gets E_act, every other word I. A continued
// part's last word gets I so the act closes only at its final part.
LabelSequence EncodeJoint(const Segmentation& segmentation,
                          const LabelSet& label_set,
                          std::string dialog_id = {});

// Greedy inverse: a segment ends at every E; a trailing run of I without a
// closing E is closed at the last word with the label set's fallback act.
Segmentation DecodeJoint(std::span<const JointLabel> labels,
                         const LabelSet& label_set);
inline Segmentation DecodeJoint(const LabelSequence& labels,
                                const LabelSet& label_set) {
  return DecodeJoint(labels.labels, label_set);
}

// The serialized-order form of a segmentation: continued parts merge
// forward into the next closing segment. Equals DecodeJoint(EncodeJoint(s)).
Segmentation Canonicalize(const Segmentation& segmentation,
                          const LabelSet& label_set);

// Non-overlapping windows of `window_size` items; the last may be shorter.
std::vector<Window> Chunk(const TokenView& view, int window_size);

// Per-item labels of one window: the window's slice of the dialog labels
// with sentinel items carrying I. This is what a window-level model emits.
struct WindowLabels {
  Window window;
  std::vector<JointLabel> item_labels;
};

WindowLabels SliceWindow(const TokenView& view, const LabelSequence& labels,
                         const Window& window);
// Concatenates window fragments in order, dropping sentinel positions.
// Throws daseg::Error on gaps, overlaps or size mismatches.
LabelSequence Stitch(const TokenView& view,
                     std::span<const WindowLabels> fragments);

// ---------------------------------------------------------------------------
// Subword projection.

class SubwordTokenizer {
 public:
  virtual ~SubwordTokenizer() = default;
  virtual std::vector<std::string> Tokenize(std::string_view word) const = 0;
};

// Every word is one subword.
class WhitespaceTokenizer : public SubwordTokenizer {
 public:
  std::vector<std::string> Tokenize(std::string_view word) const override;
};

// Splits words longer than six characters into six-character pieces.
class ChunkingTestTokenizer : public SubwordTokenizer {
 public:
  static constexpr size_t kPieceLength = 6;
  std::vector<std::string> Tokenize(std::string_view word) const override;
};

// counts[i] is the number of subwords produced by item i (>= 1). When
// `sentinel` is non-empty it flags items that carry no word label.
struct SubwordProjection {
  std::vector<int> counts;
  std::vector<bool> sentinel;

  int total() const;
  int word_count() const;
  bool is_sentinel(size_t i) const {
    return !sentinel.empty() && sentinel[i];
  }
};

SubwordProjection BuildProjection(const TokenView& view,
                                  const SubwordTokenizer& tokenizer);

struct SubwordTarget {
  JointLabel label;
  bool active = false;

  friend bool operator==(const SubwordTarget&, const SubwordTarget&) = default;
};

// First subword of each word carries the word label and is active;
// continuation subwords and sentinels are ignored.
std::vector<SubwordTarget> ProjectToSubwords(const LabelSequence& labels,
                                             const SubwordProjection& proj);
// Reads the label at each word's first subword.
LabelSequence CollapseFromSubwords(std::span<const JointLabel> subword_labels,
                                   const SubwordProjection& proj,
                                   std::string dialog_id = {});

}  // namespace daseg

#endif  // DASEG_CODING_H_
