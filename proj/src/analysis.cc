#include "daseg/analysis.h"

#include <algorithm>

#include "daseg/align.h"
#include "daseg/error.h"
#include "daseg/metrics.h"

namespace daseg {
namespace {

double Percent(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / den;
}

void RequirePunctuation(const Corpus& corpus) {
  if (corpus.variant != Variant::kNolower) {
    throw Error("punctuation analyses need a nolower corpus; '" + corpus.name +
                "' is lower");
  }
}

// Reference segmentations decoded in serialized order, for corpora scored
// without predictions.
std::vector<ScoredDialog> ReferenceOnly(const Corpus& corpus) {
  return PairDialogs(corpus, ReferencePredictions(corpus, "reference"));
}

}  // namespace

std::vector<ActRate> PerActRates(const Corpus& ref, const Predictions& hyp,
                                 Execution execution) {
  const auto dialogs = PairDialogs(ref, hyp, execution);
  const int acts = ref.label_set.size();
  struct Partial {
    std::vector<int64_t> count, boundary, label, matches;
  };
  std::vector<Partial> partial(dialogs.size());
  ParallelFor(static_cast<int>(dialogs.size()), [&](int i) {
    const ScoredDialog& d = dialogs[i];
    Partial& p = partial[i];
    p.count.assign(acts, 0);
    p.boundary.assign(acts, 0);
    p.label.assign(acts, 0);
    p.matches.assign(acts, 0);
    size_t j = 0;
    for (const auto& r : d.ref) {
      const int a = ref.label_set.IndexOf(r.act);
      ++p.count[a];
      while (j < d.hyp.size() && d.hyp[j].start < r.start) ++j;
      if (j == d.hyp.size() || d.hyp[j].start != r.start ||
          d.hyp[j].end != r.end) {
        ++p.boundary[a];
      }
    }
    const auto alignment = AlignSegments(d.ref, d.hyp, AlignMode::kLabeled);
    for (const auto& op : alignment.ops) {
      switch (op.op) {
        case EditOp::kMatch:
          ++p.matches[ref.label_set.IndexOf(d.ref[op.ref].act)];
          break;
        case EditOp::kSubstitute:
        case EditOp::kDelete:
          ++p.label[ref.label_set.IndexOf(d.ref[op.ref].act)];
          break;
        case EditOp::kInsert:
          ++p.label[ref.label_set.IndexOf(d.hyp[op.hyp].act)];
          break;
      }
    }
  }, execution);

  std::vector<ActRate> rows;
  for (int a = 0; a < acts; ++a) {
    ActRate row;
    row.act = ref.label_set.acts()[a];
    for (const auto& p : partial) {
      row.count += p.count[a];
      row.boundary_errors += p.boundary[a];
      row.label_errors += p.label[a];
      row.labeled_matches += p.matches[a];
    }
    if (row.count == 0) continue;
    row.dser = Percent(row.boundary_errors, row.count);
    row.der = Percent(row.label_errors, row.count);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view RateKindName(RateKind kind) {
  return kind == RateKind::kDser ? "DSER" : "DER";
}

RateKind ParseRateKind(std::string_view name) {
  if (name == "DSER" || name == "dser") return RateKind::kDser;
  if (name == "DER" || name == "der") return RateKind::kDer;
  throw Error("unknown rate '" + std::string(name) + "' (expected DSER or DER)");
}

ActGainTable CompareModels(const Corpus& ref, const Predictions& hyp_a,
                           const Predictions& hyp_b, RateKind rate,
                           int64_t min_count, Execution execution) {
  const auto rows_a = PerActRates(ref, hyp_a, execution);
  const auto rows_b = PerActRates(ref, hyp_b, execution);
  ActGainTable table;
  table.rate = rate;
  for (size_t i = 0; i < rows_a.size(); ++i) {
    const ActRate& a = rows_a[i];
    const ActRate& b = rows_b[i];
    if (a.labeled_matches == 0) table.never_recognized_a.push_back(a.act);
    if (b.labeled_matches == 0) table.never_recognized_b.push_back(b.act);
    if (a.count < min_count) continue;
    GainRow row;
    row.act = a.act;
    row.count = a.count;
    row.rate_a = rate == RateKind::kDser ? a.dser : a.der;
    row.rate_b = rate == RateKind::kDser ? b.dser : b.der;
    row.abs_gain = row.rate_b - row.rate_a;
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(
      table.rows.begin(), table.rows.end(),
      [](const GainRow& x, const GainRow& y) { return x.abs_gain < y.abs_gain; });
  return table;
}

std::string_view FinalPunctName(FinalPunct p) {
  switch (p) {
    case FinalPunct::kFullStop: return "Full stop";
    case FinalPunct::kExclamation: return "Excl. mark";
    case FinalPunct::kQuestion: return "Q. mark";
    case FinalPunct::kNone: return "None";
  }
  return "None";
}

FinalPunct ClassifyFinalPunctuation(std::string_view word) {
  for (size_t i = word.size(); i > 0 && IsPunctuation(word[i - 1]); --i) {
    switch (word[i - 1]) {
      case '.': return FinalPunct::kFullStop;
      case '!': return FinalPunct::kExclamation;
      case '?': return FinalPunct::kQuestion;
      default: break;
    }
  }
  return FinalPunct::kNone;
}

double FinalPunctuationTable::ErrorPercent(const FinalPunctuationRow& row,
                                           int cell) {
  return Percent(row.errors[cell], row.counts[cell]);
}

FinalPunctuationTable PunctuationByAct(const Corpus& corpus,
                                       const Predictions* hyp) {
  RequirePunctuation(corpus);
  const auto dialogs = hyp ? PairDialogs(corpus, *hyp) : ReferenceOnly(corpus);
  const int acts = corpus.label_set.size();
  std::vector<FinalPunctuationRow> rows(acts);
  for (const auto& d : dialogs) {
    const auto words = d.dialog->Words();
    size_t j = 0;
    for (const auto& r : d.ref) {
      const int a = corpus.label_set.IndexOf(r.act);
      const int cell = static_cast<int>(ClassifyFinalPunctuation(words[r.end]));
      ++rows[a].counts[cell];
      if (!hyp) continue;
      while (j < d.hyp.size() && d.hyp[j].start < r.start) ++j;
      const bool matched = j < d.hyp.size() && d.hyp[j].start == r.start &&
                           d.hyp[j].end == r.end && d.hyp[j].act == r.act;
      if (!matched) ++rows[a].errors[cell];
    }
  }
  FinalPunctuationTable table;
  table.has_errors = hyp != nullptr;
  for (int a = 0; a < acts; ++a) {
    int64_t total = 0;
    for (int64_t c : rows[a].counts) total += c;
    if (total == 0) continue;
    rows[a].act = corpus.label_set.acts()[a];
    table.rows.push_back(std::move(rows[a]));
  }
  return table;
}

MidPunctuationCounts MidSegmentPunctuation(const Corpus& corpus,
                                           const Predictions* hyp) {
  RequirePunctuation(corpus);
  const auto dialogs = hyp ? PairDialogs(corpus, *hyp) : ReferenceOnly(corpus);
  MidPunctuationCounts out;
  for (const auto& d : dialogs) {
    const auto words = d.dialog->Words();
    const Segmentation& segs = hyp ? d.hyp : d.ref;
    for (const auto& s : segs) {
      ++out.segments;
      for (int w = s.start; w < s.end; ++w) {
        for (char c : words[w]) {
          if (c == '.') ++out.full_stop;
          if (c == ',') ++out.comma;
          if (c == '?') ++out.question;
        }
      }
    }
  }
  return out;
}

}  // namespace daseg
