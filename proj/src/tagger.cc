#include "daseg/tagger.h"

#include <algorithm>
#include <cctype>
#include <random>

#include "daseg/error.h"
#include "daseg/metrics.h"

namespace daseg {
namespace {

constexpr std::string_view kBos = "<BOS>";
constexpr std::string_view kEos = "<EOS>";
constexpr std::string_view kTurnSlot = "<TURN>";

bool IsMarker(std::string_view s) {
  return s == kBos || s == kEos || s == kTurnSlot;
}

std::string NormalizeForFeature(std::string_view word) {
  if (IsMarker(word)) return std::string(word);
  std::string lower = LowercaseAscii(word);
  std::string stripped = StripPunctuation(lower);
  return stripped.empty() ? lower : stripped;
}

// Single-turn view: the unit of decoding when turns are processed alone.
TokenView TurnView(const std::string& dialog_id, const Turn& turn) {
  TokenView view;
  view.dialog_id = dialog_id;
  view.items = turn.words;
  for (int i = 0; i < static_cast<int>(turn.words.size()); ++i) {
    view.word_index.push_back(i);
  }
  return view;
}

struct Instance {
  std::vector<TokenContext> contexts;
  std::vector<JointLabel> gold;
};

std::vector<Instance> BuildInstances(const Corpus& corpus, DecodeUnit unit) {
  std::vector<Instance> out;
  for (const auto& d : corpus.dialogs) {
    if (!d.reference) {
      throw Error("dialog '" + d.id + "' has no reference segmentation");
    }
    const auto gold = EncodeJoint(*d.reference, corpus.label_set, d.id).labels;
    if (unit == DecodeUnit::kDialog) {
      out.push_back({BuildContexts(Serialize(d)), gold});
      continue;
    }
    size_t offset = 0;
    for (const auto& turn : d.turns) {
      Instance inst{BuildContexts(TurnView(d.id, turn)), {}};
      inst.gold.assign(gold.begin() + offset,
                       gold.begin() + offset + turn.words.size());
      offset += turn.words.size();
      out.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace

std::vector<TokenContext> BuildContexts(const TokenView& view) {
  std::vector<TokenContext> out;
  out.reserve(view.items.size());
  const int n = view.size();
  for (int i = 0; i < n; ++i) {
    if (view.is_sentinel(i)) continue;
    TokenContext ctx;
    for (int k = -TokenContext::kRadius; k <= TokenContext::kRadius; ++k) {
      const int j = i + k;
      std::string& slot = ctx.window[k + TokenContext::kRadius];
      if (j < 0) {
        slot = kBos;
      } else if (j >= n) {
        slot = kEos;
      } else if (view.is_sentinel(j)) {
        slot = kTurnSlot;
      } else {
        slot = view.items[j];
      }
    }
    ctx.first_in_turn = i == 0 || view.is_sentinel(i - 1);
    ctx.last_in_turn = i == n - 1 || view.is_sentinel(i + 1);
    ctx.speaker_change = i > 0 && view.is_sentinel(i - 1);
    out.push_back(std::move(ctx));
  }
  return out;
}

std::string WordShape(std::string_view word) {
  std::string shape;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    char s = std::isupper(u) ? 'X' : std::islower(u) ? 'x' : std::isdigit(u) ? 'd' : c;
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

FeatureVector ExtractFeatures(const TokenContext& ctx) {
  static constexpr std::array<std::string_view, 5> kSlots = {
      "w-2=", "prev=", "w0=", "next=", "w+2="};
  FeatureVector f;
  f.reserve(16);
  f.emplace_back("bias");
  for (size_t k = 0; k < ctx.window.size(); ++k) {
    f.push_back(std::string(kSlots[k]) + NormalizeForFeature(ctx.window[k]));
  }
  const std::string& w = ctx.word();
  f.push_back("shape=" + WordShape(w));
  if (!w.empty()) {
    if (w.back() == '.') f.emplace_back("ends-with-.");
    if (w.back() == '?') f.emplace_back("ends-with-?");
    if (w.back() == '!') f.emplace_back("ends-with-!");
  }
  if (w.find(',') != std::string::npos) f.emplace_back("contains-comma");
  if (ctx.first_in_turn) f.emplace_back("first-in-turn");
  if (ctx.last_in_turn) f.emplace_back("last-in-turn");
  if (ctx.speaker_change) f.emplace_back("speaker-change");
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::string_view DecodeUnitName(DecodeUnit unit) {
  return unit == DecodeUnit::kTurn ? "turn" : "dialog";
}

DecodeUnit ParseDecodeUnit(std::string_view name) {
  if (name == "turn") return DecodeUnit::kTurn;
  if (name == "dialog") return DecodeUnit::kDialog;
  throw Error("unknown decode unit '" + std::string(name) +
              "' (expected turn or dialog)");
}

// ---------------------------------------------------------------------------

TaggerModel::TaggerModel(LabelSet label_set, Variant variant)
    : label_set_(std::move(label_set)), variant_(variant) {
  const int l = labels();
  transitions_.assign(static_cast<size_t>(l) * l, 0.0);
  start_.assign(l, 0.0);
  stop_.assign(l, 0.0);
}

const std::vector<double>* TaggerModel::Emission(
    const std::string& feature) const {
  auto it = emissions_.find(feature);
  return it == emissions_.end() ? nullptr : &it->second;
}

std::vector<double>& TaggerModel::MutableEmission(const std::string& feature) {
  auto [it, fresh] = emissions_.try_emplace(feature);
  if (fresh) it->second.assign(labels(), 0.0);
  return it->second;
}

ScoreLattice BuildLattice(const TaggerModel& model,
                          std::span<const TokenContext> contexts) {
  ScoreLattice lat;
  lat.length = static_cast<int>(contexts.size());
  lat.labels = model.labels();
  lat.emissions.assign(static_cast<size_t>(lat.length) * lat.labels, 0.0);
  for (int i = 0; i < lat.length; ++i) {
    double* row = &lat.emissions[static_cast<size_t>(i) * lat.labels];
    for (const auto& f : ExtractFeatures(contexts[i])) {
      if (const auto* w = model.Emission(f)) {
        for (int y = 0; y < lat.labels; ++y) row[y] += (*w)[y];
      }
    }
  }
  lat.transitions = model.transitions();
  lat.start = model.start();
  lat.stop = model.stop();
  return lat;
}

double SequenceScore(const ScoreLattice& lat, std::span<const int> labels) {
  if (labels.empty()) return 0.0;
  double score = lat.start[labels[0]] + lat.emission(0, labels[0]);
  for (size_t i = 1; i < labels.size(); ++i) {
    score += lat.transition(labels[i - 1], labels[i]) +
             lat.emission(static_cast<int>(i), labels[i]);
  }
  return score + lat.stop[labels.back()];
}

std::vector<int> ViterbiDecode(const ScoreLattice& lat) {
  const int n = lat.length, l = lat.labels;
  if (n == 0) return {};
  std::vector<double> best(static_cast<size_t>(n) * l);
  std::vector<int> back(static_cast<size_t>(n) * l, 0);
  for (int y = 0; y < l; ++y) best[y] = lat.start[y] + lat.emission(0, y);
  for (int i = 1; i < n; ++i) {
    const double* prev = &best[static_cast<size_t>(i - 1) * l];
    for (int y = 0; y < l; ++y) {
      int arg = 0;
      double top = prev[0] + lat.transition(0, y);
      for (int p = 1; p < l; ++p) {
        const double s = prev[p] + lat.transition(p, y);
        if (s > top) {  // strict: ties keep the lower index
          top = s;
          arg = p;
        }
      }
      best[static_cast<size_t>(i) * l + y] = top + lat.emission(i, y);
      back[static_cast<size_t>(i) * l + y] = arg;
    }
  }
  const double* last = &best[static_cast<size_t>(n - 1) * l];
  int y = 0;
  double top = last[0] + lat.stop[0];
  for (int k = 1; k < l; ++k) {
    if (last[k] + lat.stop[k] > top) {
      top = last[k] + lat.stop[k];
      y = k;
    }
  }
  std::vector<int> path(n);
  for (int i = n - 1; i >= 0; --i) {
    path[i] = y;
    y = back[static_cast<size_t>(i) * l + y];
  }
  return path;
}

LabelSequence Viterbi(const TaggerModel& model,
                      std::span<const TokenContext> contexts) {
  LabelSequence out;
  for (int y : ViterbiDecode(BuildLattice(model, contexts))) {
    out.labels.push_back(JointLabel::FromIndex(y));
  }
  return out;
}

Predictions Predict(const TaggerModel& model, const Corpus& corpus,
                    DecodeUnit unit, Execution execution) {
  if (corpus.variant != model.variant()) {
    throw Error("model was trained on the " +
                std::string(VariantName(model.variant())) +
                " variant, corpus is " +
                std::string(VariantName(corpus.variant)));
  }
  if (!(corpus.label_set.acts() == model.label_set().acts())) {
    throw Error("model label set " + std::string(model.label_set().name()) +
                " does not match corpus label set " +
                std::string(corpus.label_set.name()));
  }
  Predictions preds;
  preds.label_set_name = std::string(corpus.label_set.name());
  preds.acts = corpus.label_set.acts();
  preds.variant = corpus.variant;
  preds.producer = "daseg-tagger unit=" + std::string(DecodeUnitName(unit));
  preds.dialogs.resize(corpus.dialogs.size());
  ParallelFor(static_cast<int>(corpus.dialogs.size()), [&](int i) {
    const Dialog& d = corpus.dialogs[i];
    LabelSequence& out = preds.dialogs[i];
    out.dialog_id = d.id;
    if (unit == DecodeUnit::kDialog) {
      if (!d.turns.empty()) out.labels = Viterbi(model, BuildContexts(Serialize(d))).labels;
      return;
    }
    for (const auto& turn : d.turns) {
      auto part = Viterbi(model, BuildContexts(TurnView(d.id, turn))).labels;
      out.labels.insert(out.labels.end(), part.begin(), part.end());
    }
  }, execution);
  return preds;
}

// ---------------------------------------------------------------------------

PerceptronTrainer::PerceptronTrainer(TaggerModel initial)
    : base_(initial.label_set(), initial.variant()) {
  base_.config = initial.config;
  const int l = base_.labels();
  for (const auto& [name, w] : initial.emissions()) {
    const int id = FeatureId(name);
    std::copy(w.begin(), w.end(), weights_.begin() + static_cast<size_t>(id) * l);
  }
  transitions_ = initial.transitions();
  start_ = initial.start();
  stop_ = initial.stop();
  transitions_acc_.assign(transitions_.size(), 0.0);
  start_acc_.assign(l, 0.0);
  stop_acc_.assign(l, 0.0);
}

int PerceptronTrainer::FeatureId(const std::string& feature) {
  auto [it, fresh] =
      feature_ids_.try_emplace(feature, static_cast<int>(feature_names_.size()));
  if (fresh) {
    feature_names_.push_back(feature);
    weights_.resize(weights_.size() + base_.labels(), 0.0);
    accumulated_.resize(accumulated_.size() + base_.labels(), 0.0);
  }
  return it->second;
}

void PerceptronTrainer::Bump(double& weight, double& accumulated,
                             double delta) {
  weight += delta;
  accumulated += static_cast<double>(steps_) * delta;
}

bool PerceptronTrainer::Step(std::span<const TokenContext> contexts,
                             std::span<const JointLabel> gold) {
  if (contexts.size() != gold.size()) {
    throw Error("training instance has mismatched context and label counts");
  }
  const int n = static_cast<int>(contexts.size());
  const int l = base_.labels();
  std::vector<std::vector<int>> features(n);
  ScoreLattice lat;
  lat.length = n;
  lat.labels = l;
  lat.emissions.assign(static_cast<size_t>(n) * l, 0.0);
  for (int i = 0; i < n; ++i) {
    for (const auto& f : ExtractFeatures(contexts[i])) {
      const int id = FeatureId(f);
      features[i].push_back(id);
      for (int y = 0; y < l; ++y) {
        lat.emissions[static_cast<size_t>(i) * l + y] +=
            weights_[static_cast<size_t>(id) * l + y];
      }
    }
  }
  lat.transitions = transitions_;
  lat.start = start_;
  lat.stop = stop_;
  const std::vector<int> pred = ViterbiDecode(lat);

  bool changed = false;
  for (int i = 0; i < n; ++i) {
    const int g = gold[i].index(), p = pred[i];
    if (g != p) {
      changed = true;
      for (int id : features[i]) {
        const size_t base = static_cast<size_t>(id) * l;
        Bump(weights_[base + g], accumulated_[base + g], 1.0);
        Bump(weights_[base + p], accumulated_[base + p], -1.0);
      }
    }
    if (i > 0) {
      const int gp = gold[i - 1].index(), pp = pred[i - 1];
      if (gp != pp || g != p) {
        Bump(transitions_[gp * l + g], transitions_acc_[gp * l + g], 1.0);
        Bump(transitions_[pp * l + p], transitions_acc_[pp * l + p], -1.0);
      }
    }
  }
  if (n > 0) {
    const int g0 = gold[0].index(), p0 = pred[0];
    if (g0 != p0) {
      Bump(start_[g0], start_acc_[g0], 1.0);
      Bump(start_[p0], start_acc_[p0], -1.0);
    }
    const int gn = gold[n - 1].index(), pn = pred[n - 1];
    if (gn != pn) {
      Bump(stop_[gn], stop_acc_[gn], 1.0);
      Bump(stop_[pn], stop_acc_[pn], -1.0);
    }
  }
  if (changed) ++updates_;
  ++steps_;
  return changed;
}

TaggerModel PerceptronTrainer::Snapshot() const {
  TaggerModel model(base_.label_set(), base_.variant());
  model.config = base_.config;
  const int l = base_.labels();
  const bool avg = base_.config.averaging;
  const double c = static_cast<double>(steps_);
  auto value = [&](double w, double acc) { return avg ? w - acc / c : w; };
  for (size_t id = 0; id < feature_names_.size(); ++id) {
    std::vector<double> w(l);
    bool nonzero = false;
    for (int y = 0; y < l; ++y) {
      const size_t k = id * l + y;
      w[y] = value(weights_[k], accumulated_[k]);
      nonzero |= w[y] != 0.0;
    }
    if (nonzero) model.MutableEmission(feature_names_[id]) = std::move(w);
  }
  for (size_t k = 0; k < transitions_.size(); ++k) {
    model.transitions()[k] = value(transitions_[k], transitions_acc_[k]);
  }
  for (int y = 0; y < l; ++y) {
    model.start()[y] = value(start_[y], start_acc_[y]);
    model.stop()[y] = value(stop_[y], stop_acc_[y]);
  }
  model.metadata.updates = updates_;
  return model;
}

TaggerModel Train(const Corpus& train, const Corpus& dev,
                  const TrainConfig& config,
                  const std::function<void(int, double)>& on_epoch) {
  if (!(train.label_set == dev.label_set)) {
    throw Error("train and dev corpora use different label sets");
  }
  if (train.variant != dev.variant) {
    throw Error("train and dev corpora use different variants");
  }
  if (config.epochs < 1) throw Error("epochs must be positive");

  const auto instances = BuildInstances(train, config.unit);
  TaggerModel zero(train.label_set, train.variant);
  zero.config = config;
  PerceptronTrainer trainer(std::move(zero));

  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(instances.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::optional<TaggerModel> best;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    for (size_t k : order) {
      trainer.Step(instances[k].contexts, instances[k].gold);
    }
    TaggerModel snapshot = trainer.Snapshot();
    double dev_f1 = 0.0;
    if (!dev.dialogs.empty()) {
      const auto preds = Predict(snapshot, dev, config.unit);
      TokenCounts counts(dev.label_set.joint_size());
      for (size_t i = 0; i < dev.dialogs.size(); ++i) {
        counts.Add(
            EncodeJoint(*dev.dialogs[i].reference, dev.label_set).labels,
            preds.dialogs[i].labels);
      }
      dev_f1 = ScoreTokens(counts, dev.label_set).macro;
    }
    if (on_epoch) on_epoch(epoch, dev_f1);
    if (!best || dev_f1 > best->metadata.dev_macro_f1 || dev.dialogs.empty()) {
      snapshot.metadata.best_epoch = epoch;
      snapshot.metadata.dev_macro_f1 = dev_f1;
      best = std::move(snapshot);
    }
  }
  return std::move(*best);
}

}  // namespace daseg
