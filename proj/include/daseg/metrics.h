#ifndef DASEG_METRICS_H_
#define DASEG_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daseg/coding.h"
#include "daseg/corpus.h"
#include "daseg/parallel.h"
#include "daseg/predio.h"

namespace daseg {

struct ClassScores {
  double precision = 0.0;  // percentages
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;     // reference count

  friend bool operator==(const ClassScores&, const ClassScores&) = default;
};

// Integer accumulators for token-level scores, indexed by joint label.
struct TokenCounts {
  std::vector<int64_t> true_positive;
  std::vector<int64_t> reference;
  std::vector<int64_t> hypothesis;
  int64_t correct = 0;
  int64_t total = 0;

  explicit TokenCounts(int joint_size = 0)
      : true_positive(joint_size), reference(joint_size), hypothesis(joint_size) {}
  void Add(std::span<const JointLabel> ref, std::span<const JointLabel> hyp);
  TokenCounts& operator+=(const TokenCounts& other);
};

struct TokenF1 {
  double micro = 0.0;
  double macro = 0.0;
  // Joint label name -> scores, for every label present in ref or hyp, in
  // joint-label order.
  std::vector<std::pair<std::string, ClassScores>> per_class;
};

TokenF1 ScoreTokens(const TokenCounts& counts, const LabelSet& label_set);
// micro = accuracy over words; macro = mean F1 over labels in ref ∪ hyp.
TokenF1 ComputeTokenF1(const LabelSequence& ref, const LabelSequence& hyp,
                       const LabelSet& label_set);

// Numerators and denominators of the four segment error rates.
struct SegmentCounts {
  int64_t ref_segments = 0;
  int64_t ref_words = 0;
  int64_t boundary_errors = 0;       // DSER numerator
  int64_t boundary_error_words = 0;  // SegWER numerator
  int64_t label_errors = 0;          // DER numerator
  int64_t label_error_words = 0;     // JointWER numerator

  SegmentCounts& operator+=(const SegmentCounts& other);
  friend bool operator==(const SegmentCounts&, const SegmentCounts&) = default;
};

struct SegmentRates {
  double dser = 0.0;
  double segwer = 0.0;
  double der = 0.0;
  double jointwer = 0.0;

  static SegmentRates From(const SegmentCounts& counts);
  friend bool operator==(const SegmentRates&, const SegmentRates&) = default;
};

// A reference segment is boundary-correct iff some hypothesis segment has
// the same (start, end); label-correct iff that segment also has its act.
SegmentCounts CountSegmentErrors(const Segmentation& ref,
                                 const Segmentation& hyp);
SegmentRates SegmentErrorRates(const Segmentation& ref,
                               const Segmentation& hyp);

// One dialog of a (reference corpus, predictions) pair, both decoded from
// joint labels in serialized order.
struct ScoredDialog {
  const Dialog* dialog = nullptr;
  std::vector<JointLabel> ref_labels;
  std::vector<JointLabel> hyp_labels;
  Segmentation ref;
  Segmentation hyp;
};

// Validates the pair (throws daseg::Error naming the first offending dialog)
// and decodes every dialog, in corpus order.
std::vector<ScoredDialog> PairDialogs(const Corpus& ref, const Predictions& hyp,
                                      Execution execution = Execution::kParallel);

struct Denominators {
  int64_t ref_segments = 0;
  int64_t ref_words = 0;
  int64_t tokens = 0;

  friend bool operator==(const Denominators&, const Denominators&) = default;
};

// Headline metrics of a corpus evaluation. DER and JointWER are absent
// under the pure-segmentation label set.
struct MetricsReport {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double dser = 0.0;
  double segwer = 0.0;
  std::optional<double> der;
  std::optional<double> jointwer;
  std::vector<std::pair<std::string, ClassScores>> per_class;
  std::map<std::string, std::map<std::string, int64_t>> confusion;
  Denominators denominators;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Pools token and segment counts over all dialogs. The confusion matrix
// counts (reference act, hypothesis act) over labeled-mode alignment matches
// and substitutions.
MetricsReport EvaluateCorpus(const Corpus& ref, const Predictions& hyp,
                             Execution execution = Execution::kParallel);

}  // namespace daseg

#endif  // DASEG_METRICS_H_
