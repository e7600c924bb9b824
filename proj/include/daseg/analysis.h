#ifndef DASEG_ANALYSIS_H_
#define DASEG_ANALYSIS_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "daseg/corpus.h"
#include "daseg/parallel.h"
#include "daseg/predio.h"

namespace daseg {

// Per-act error attribution. DSER counts reference segments of the act
// without an exact-boundary hypothesis segment. DER follows the labeled
// alignment: substitutions and deletions are charged to the reference act,
// insertions to the hypothesized act, so it can exceed 100%.
struct ActRate {
  std::string act;
  int64_t count = 0;
  int64_t boundary_errors = 0;
  int64_t label_errors = 0;
  int64_t labeled_matches = 0;
  double dser = 0.0;
  double der = 0.0;
};

// Rows in label-set order, for acts with reference support.
std::vector<ActRate> PerActRates(const Corpus& ref, const Predictions& hyp,
                                 Execution execution = Execution::kParallel);

enum class RateKind { kDser, kDer };
std::string_view RateKindName(RateKind kind);
RateKind ParseRateKind(std::string_view name);

struct GainRow {
  std::string act;
  int64_t count = 0;
  double rate_a = 0.0;
  double rate_b = 0.0;
  double abs_gain = 0.0;  // rate_b - rate_a
};

struct ActGainTable {
  RateKind rate = RateKind::kDser;
  std::vector<GainRow> rows;  // ascending abs_gain
  // Acts with reference support that a model never recognized with correct
  // boundaries and act.
  std::vector<std::string> never_recognized_a;
  std::vector<std::string> never_recognized_b;
};

ActGainTable CompareModels(const Corpus& ref, const Predictions& hyp_a,
                           const Predictions& hyp_b, RateKind rate,
                           int64_t min_count,
                           Execution execution = Execution::kParallel);

// ---------------------------------------------------------------------------
// Punctuation analyses; they require the nolower variant.

enum class FinalPunct { kFullStop = 0, kExclamation, kQuestion, kNone };
inline constexpr int kFinalPunctClasses = 4;
std::string_view FinalPunctName(FinalPunct p);

// The last of . ! ? within the word's trailing punctuation run.
FinalPunct ClassifyFinalPunctuation(std::string_view word);

struct FinalPunctuationRow {
  std::string act;
  std::array<int64_t, kFinalPunctClasses> counts{};
  // Segments of the cell without a labeled-mode match in the hypothesis.
  std::array<int64_t, kFinalPunctClasses> errors{};
};

struct FinalPunctuationTable {
  bool has_errors = false;
  std::vector<FinalPunctuationRow> rows;  // label-set order, acts with support

  static double ErrorPercent(const FinalPunctuationRow& row, int cell);
};

// Pass hyp = nullptr for counts only.
FinalPunctuationTable PunctuationByAct(const Corpus& corpus,
                                       const Predictions* hyp);

struct MidPunctuationCounts {
  int64_t full_stop = 0;
  int64_t comma = 0;
  int64_t question = 0;
  int64_t segments = 0;

  friend bool operator==(const MidPunctuationCounts&,
                         const MidPunctuationCounts&) = default;
};

// Counts '.', ',' and '?' characters on the non-final words of every
// segment. Segments come from the reference, or from hyp when given.
MidPunctuationCounts MidSegmentPunctuation(const Corpus& corpus,
                                           const Predictions* hyp);

}  // namespace daseg

#endif  // DASEG_ANALYSIS_H_
