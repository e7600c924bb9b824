#ifndef DASEG_PREDIO_H_
#define DASEG_PREDIO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "daseg/coding.h"
#include "daseg/corpus.h"
#include "daseg/label_set.h"

namespace daseg {

// Per-word hypothesis labels for a set of dialogs. Joint labels index into
// `acts`, which must equal the act list of the corpus they are scored
// against.
struct Predictions {
  std::string label_set_name;
  std::vector<std::string> acts;
  Variant variant = Variant::kNolower;
  std::string producer;
  std::vector<LabelSequence> dialogs;

  const LabelSequence* Find(std::string_view dialog_id) const;
  // A LabelSet view of the header, for label name formatting and parsing.
  LabelSet HeaderLabelSet() const;
};

// The corpus' own reference labels, coded jointly. Used as an oracle
// hypothesis and by tests.
Predictions ReferencePredictions(const Corpus& corpus, std::string producer);

// Newline-delimited JSON: a header record
//   {"label_set":{"name":...,"acts":[...]},"variant":...,"producer":...}
// followed by one {"dialog_id":...,"labels":[...]} record per dialog.
void WritePredictions(const Predictions& preds,
                      const std::filesystem::path& path);
std::string PredictionsToString(const Predictions& preds);
Predictions ReadPredictions(const std::filesystem::path& path);
Predictions PredictionsFromString(std::string_view text,
                                  std::string_view source = "<string>");

// Maps every E_<act> to the single pure-segmentation act, so predictions
// from any label set can be scored as pure segmentation.
Predictions ToPureSegmentation(const Predictions& preds);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Lists every incompatibility between the predictions and the corpus:
// label set, variant, dialog id sets and per-dialog label counts.
ValidationReport ValidateAgainst(const Predictions& preds,
                                 const Corpus& corpus);

}  // namespace daseg

#endif  // DASEG_PREDIO_H_
