#ifndef DASEG_TAGGER_H_
#define DASEG_TAGGER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "daseg/coding.h"
#include "daseg/corpus.h"
#include "daseg/parallel.h"
#include "daseg/predio.h"

namespace daseg {

// Surface context of one word in a serialized view. Neighbor slots hold raw
// item texts, "<BOS>"/"<EOS>" past the edges, or "<TURN>" for a sentinel.
struct TokenContext {
  static constexpr int kRadius = 2;
  std::array<std::string, 2 * kRadius + 1> window;  // window[kRadius] = word
  bool first_in_turn = false;
  bool last_in_turn = false;
  bool speaker_change = false;  // a TURN sentinel precedes the word

  const std::string& word() const { return window[kRadius]; }
};

std::vector<TokenContext> BuildContexts(const TokenView& view);

// Case/digit pattern with runs collapsed: "Okay." -> "Xx.", "1990s" -> "dx".
std::string WordShape(std::string_view word);

// Sorted, duplicate-free binary feature identifiers.
using FeatureVector = std::vector<std::string>;
FeatureVector ExtractFeatures(const TokenContext& context);

enum class DecodeUnit { kTurn, kDialog };
std::string_view DecodeUnitName(DecodeUnit unit);
DecodeUnit ParseDecodeUnit(std::string_view name);

struct TrainConfig {
  int epochs = 10;
  uint64_t seed = 42;
  bool averaging = true;
  DecodeUnit unit = DecodeUnit::kDialog;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainingMetadata {
  int best_epoch = 0;
  double dev_macro_f1 = 0.0;
  int64_t updates = 0;

  friend bool operator==(const TrainingMetadata&,
                         const TrainingMetadata&) = default;
};

// Linear-chain model over the joint labels of a label set: per-feature
// emission weights, label-to-label transitions and start/stop weights.
class TaggerModel {
 public:
  TaggerModel(LabelSet label_set, Variant variant);

  const LabelSet& label_set() const { return label_set_; }
  Variant variant() const { return variant_; }
  int labels() const { return label_set_.joint_size(); }

  // Emission weights of `feature`, or nullptr if the feature is unknown.
  const std::vector<double>* Emission(const std::string& feature) const;
  std::vector<double>& MutableEmission(const std::string& feature);
  const std::map<std::string, std::vector<double>>& emissions() const {
    return emissions_;
  }

  double& transition(int from, int to) { return transitions_[from * labels() + to]; }
  double transition(int from, int to) const {
    return transitions_[from * labels() + to];
  }
  std::vector<double>& start() { return start_; }
  const std::vector<double>& start() const { return start_; }
  std::vector<double>& stop() { return stop_; }
  const std::vector<double>& stop() const { return stop_; }
  std::vector<double>& transitions() { return transitions_; }
  const std::vector<double>& transitions() const { return transitions_; }

  TrainConfig config;
  TrainingMetadata metadata;

  friend bool operator==(const TaggerModel&, const TaggerModel&) = default;

 private:
  LabelSet label_set_;
  Variant variant_;
  std::map<std::string, std::vector<double>> emissions_;
  std::vector<double> transitions_;
  std::vector<double> start_;
  std::vector<double> stop_;
};

// Dense scores for one sequence: emissions[i * labels + y].
struct ScoreLattice {
  int length = 0;
  int labels = 0;
  std::vector<double> emissions;
  std::vector<double> transitions;  // labels x labels, row = previous label
  std::vector<double> start;
  std::vector<double> stop;

  double emission(int i, int y) const { return emissions[i * labels + y]; }
  double transition(int from, int to) const {
    return transitions[from * labels + to];
  }
};

ScoreLattice BuildLattice(const TaggerModel& model,
                          std::span<const TokenContext> contexts);

// Total score of a label index sequence: start + emissions + transitions +
// stop, summed left to right.
double SequenceScore(const ScoreLattice& lattice, std::span<const int> labels);

// Highest-scoring label index sequence. Ties go to the lower label index at
// every backtrace decision, starting from the final position.
std::vector<int> ViterbiDecode(const ScoreLattice& lattice);
LabelSequence Viterbi(const TaggerModel& model,
                      std::span<const TokenContext> contexts);

// Decodes every dialog of the corpus, either turn by turn or as one
// serialized sequence per dialog.
Predictions Predict(const TaggerModel& model, const Corpus& corpus,
                    DecodeUnit unit,
                    Execution execution = Execution::kParallel);

// Averaged structured perceptron. Exposed so callers can drive single
// updates; Train() is the normal entry point.
class PerceptronTrainer {
 public:
  // Starts from `initial` weights (zero model for a fresh start).
  explicit PerceptronTrainer(TaggerModel initial);

  // Decodes one instance and updates on mismatch. Returns true if weights
  // changed.
  bool Step(std::span<const TokenContext> contexts,
            std::span<const JointLabel> gold);

  int64_t updates() const { return updates_; }
  // Current weights, averaged over all steps if averaging is enabled.
  TaggerModel Snapshot() const;

 private:
  int FeatureId(const std::string& feature);
  void Bump(double& weight, double& accumulated, double delta);

  TaggerModel base_;  // label set, variant, config
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, int> feature_ids_;
  std::vector<double> weights_;        // feature id * labels + label
  std::vector<double> accumulated_;    // sum of step * delta
  std::vector<double> transitions_, transitions_acc_;
  std::vector<double> start_, start_acc_, stop_, stop_acc_;
  int64_t steps_ = 1;
  int64_t updates_ = 0;
};

// One training instance per dialog (or per turn when config.unit is turn).
// Dialog order is shuffled every epoch by a generator seeded with
// config.seed; the epoch with the best dev macro-F1 is returned.
TaggerModel Train(const Corpus& train, const Corpus& dev,
                  const TrainConfig& config,
                  const std::function<void(int, double)>& on_epoch = {});

// Versioned binary format with a CRC-32 over the payload; see
// docs/formats.md for the byte layout.
void SaveModel(const TaggerModel& model, const std::filesystem::path& path);
TaggerModel LoadModel(const std::filesystem::path& path);
std::string SerializeModel(const TaggerModel& model);
TaggerModel DeserializeModel(std::string_view bytes);

}  // namespace daseg

#endif  // DASEG_TAGGER_H_
