#include "daseg/coding.h"

#include <algorithm>

#include "daseg/error.h"

namespace daseg {

std::string EscapeReservedWord(std::string word) {
  if (word == kTurnToken) return "\\" + word;
  return word;
}

int TokenView::word_count() const {
  return static_cast<int>(
      std::count_if(word_index.begin(), word_index.end(),
                    [](int w) { return w >= 0; }));
}

TokenView Serialize(const Dialog& dialog) {
  if (dialog.turns.empty()) {
    throw Error("dialog '" + dialog.id + "' has no turns to serialize");
  }
  TokenView view;
  view.dialog_id = dialog.id;
  int word = 0;
  for (size_t t = 0; t < dialog.turns.size(); ++t) {
    if (t > 0) {
      view.items.emplace_back(kTurnToken);
      view.word_index.push_back(-1);
    }
    for (const auto& w : dialog.turns[t].words) {
      view.items.push_back(w);
      view.word_index.push_back(word++);
    }
  }
  return view;
}

LabelSequence EncodeJoint(const Segmentation& segmentation,
                          const LabelSet& label_set, std::string dialog_id) {
  LabelSequence out;
  out.dialog_id = std::move(dialog_id);
  const int n = segmentation.empty() ? 0 : segmentation.back().end + 1;
  CheckPartition(segmentation, n, out.dialog_id);
  out.labels.assign(n, JointLabel::Inside());
  for (const auto& seg : segmentation) {
    const int act = label_set.IndexOf(seg.act);
    if (!seg.continued) out.labels[seg.end] = JointLabel::End(act);
  }
  return out;
}

Segmentation DecodeJoint(std::span<const JointLabel> labels,
                         const LabelSet& label_set) {
  Segmentation out;
  int start = 0;
  const int n = static_cast<int>(labels.size());
  for (int i = 0; i < n; ++i) {
    if (!labels[i].is_end()) continue;
    out.push_back({start, i, label_set.acts().at(labels[i].act()), false});
    start = i + 1;
  }
  if (start < n) out.push_back({start, n - 1, label_set.fallback_act(), false});
  return out;
}

Segmentation Canonicalize(const Segmentation& segmentation,
                          const LabelSet& label_set) {
  Segmentation out;
  int pending = -1;
  for (const auto& seg : segmentation) {
    if (pending < 0) pending = seg.start;
    if (seg.continued) continue;
    out.push_back({pending, seg.end, seg.act, false});
    pending = -1;
  }
  if (pending >= 0) {
    out.push_back(
        {pending, segmentation.back().end, label_set.fallback_act(), false});
  }
  return out;
}

std::vector<Window> Chunk(const TokenView& view, int window_size) {
  if (window_size < 1) throw Error("window size must be positive");
  std::vector<Window> windows;
  for (int begin = 0, k = 0; begin < view.size(); begin += window_size, ++k) {
    windows.push_back({view.dialog_id, begin,
                       std::min(begin + window_size, view.size()), k});
  }
  return windows;
}

WindowLabels SliceWindow(const TokenView& view, const LabelSequence& labels,
                         const Window& window) {
  WindowLabels out{window, {}};
  out.item_labels.reserve(window.size());
  for (int i = window.begin; i < window.end; ++i) {
    const int w = view.word_index.at(i);
    out.item_labels.push_back(w < 0 ? JointLabel::Inside()
                                    : labels.labels.at(w));
  }
  return out;
}

LabelSequence Stitch(const TokenView& view,
                     std::span<const WindowLabels> fragments) {
  LabelSequence out;
  out.dialog_id = view.dialog_id;
  int expected = 0;
  for (const auto& frag : fragments) {
    const Window& w = frag.window;
    if (w.begin != expected) {
      throw Error("window " + std::to_string(w.ordinal) + " of dialog '" +
                  view.dialog_id + "' starts at item " +
                  std::to_string(w.begin) + ", expected " +
                  std::to_string(expected) + " (gap or overlap)");
    }
    if (w.end > view.size() || w.end < w.begin ||
        static_cast<int>(frag.item_labels.size()) != w.size()) {
      throw Error("window " + std::to_string(w.ordinal) + " of dialog '" +
                  view.dialog_id + "' has inconsistent extent");
    }
    for (int i = w.begin; i < w.end; ++i) {
      if (!view.is_sentinel(i)) {
        out.labels.push_back(frag.item_labels[i - w.begin]);
      }
    }
    expected = w.end;
  }
  if (expected != view.size()) {
    throw Error("windows of dialog '" + view.dialog_id + "' cover " +
                std::to_string(expected) + " of " +
                std::to_string(view.size()) + " items");
  }
  return out;
}

std::vector<std::string> WhitespaceTokenizer::Tokenize(
    std::string_view word) const {
  return {std::string(word)};
}

std::vector<std::string> ChunkingTestTokenizer::Tokenize(
    std::string_view word) const {
  std::vector<std::string> pieces;
  for (size_t i = 0; i < word.size(); i += kPieceLength) {
    pieces.emplace_back(word.substr(i, kPieceLength));
  }
  if (pieces.empty()) pieces.emplace_back();
  return pieces;
}

int SubwordProjection::total() const {
  int sum = 0;
  for (int c : counts) sum += c;
  return sum;
}

int SubwordProjection::word_count() const {
  int n = 0;
  for (size_t i = 0; i < counts.size(); ++i) n += is_sentinel(i) ? 0 : 1;
  return n;
}

SubwordProjection BuildProjection(const TokenView& view,
                                  const SubwordTokenizer& tokenizer) {
  SubwordProjection proj;
  proj.counts.reserve(view.items.size());
  proj.sentinel.reserve(view.items.size());
  for (int i = 0; i < view.size(); ++i) {
    const bool sentinel = view.is_sentinel(i);
    proj.counts.push_back(
        sentinel ? 1 : static_cast<int>(tokenizer.Tokenize(view.items[i]).size()));
    proj.sentinel.push_back(sentinel);
  }
  return proj;
}

namespace {

void CheckProjection(const SubwordProjection& proj, size_t word_count) {
  if (!proj.sentinel.empty() && proj.sentinel.size() != proj.counts.size()) {
    throw Error("subword projection sentinel mask has wrong length");
  }
  for (int c : proj.counts) {
    if (c < 1) throw Error("subword counts must be positive");
  }
  if (static_cast<size_t>(proj.word_count()) != word_count) {
    throw Error("subword projection covers " +
                std::to_string(proj.word_count()) + " words, labels have " +
                std::to_string(word_count));
  }
}

}  // namespace

std::vector<SubwordTarget> ProjectToSubwords(const LabelSequence& labels,
                                             const SubwordProjection& proj) {
  CheckProjection(proj, labels.labels.size());
  std::vector<SubwordTarget> out;
  out.reserve(proj.total());
  size_t word = 0;
  for (size_t i = 0; i < proj.counts.size(); ++i) {
    int rest = proj.counts[i];
    if (!proj.is_sentinel(i)) {
      out.push_back({labels.labels[word++], true});
      --rest;
    }
    out.insert(out.end(), rest, SubwordTarget{});
  }
  return out;
}

LabelSequence CollapseFromSubwords(std::span<const JointLabel> subword_labels,
                                   const SubwordProjection& proj,
                                   std::string dialog_id) {
  CheckProjection(proj, proj.word_count());
  if (static_cast<int>(subword_labels.size()) != proj.total()) {
    throw Error("got " + std::to_string(subword_labels.size()) +
                " subword labels, projection expects " +
                std::to_string(proj.total()));
  }
  LabelSequence out;
  out.dialog_id = std::move(dialog_id);
  size_t pos = 0;
  for (size_t i = 0; i < proj.counts.size(); ++i) {
    if (!proj.is_sentinel(i)) out.labels.push_back(subword_labels[pos]);
    pos += proj.counts[i];
  }
  return out;
}

}  // namespace daseg
