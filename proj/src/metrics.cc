#include "daseg/metrics.h"

#include "daseg/align.h"
#include "daseg/error.h"

namespace daseg {
namespace {

double Percent(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / den;
}

}  // namespace

void TokenCounts::Add(std::span<const JointLabel> ref,
                      std::span<const JointLabel> hyp) {
  if (ref.size() != hyp.size()) {
    throw Error("label sequences differ in length: " +
                std::to_string(ref.size()) + " vs " +
                std::to_string(hyp.size()));
  }
  for (size_t i = 0; i < ref.size(); ++i) {
    const int r = ref[i].index(), h = hyp[i].index();
    ++reference.at(r);
    ++hypothesis.at(h);
    if (r == h) {
      ++true_positive[r];
      ++correct;
    }
  }
  total += static_cast<int64_t>(ref.size());
}

TokenCounts& TokenCounts::operator+=(const TokenCounts& other) {
  for (size_t c = 0; c < true_positive.size(); ++c) {
    true_positive[c] += other.true_positive[c];
    reference[c] += other.reference[c];
    hypothesis[c] += other.hypothesis[c];
  }
  correct += other.correct;
  total += other.total;
  return *this;
}

TokenF1 ScoreTokens(const TokenCounts& counts, const LabelSet& label_set) {
  TokenF1 out;
  out.micro = Percent(counts.correct, counts.total);
  double f1_sum = 0.0;
  for (int c = 0; c < static_cast<int>(counts.reference.size()); ++c) {
    const int64_t ref = counts.reference[c], hyp = counts.hypothesis[c];
    if (ref + hyp == 0) continue;
    ClassScores s;
    s.support = ref;
    const double p = hyp == 0 ? 0.0 : double(counts.true_positive[c]) / hyp;
    const double r = ref == 0 ? 0.0 : double(counts.true_positive[c]) / ref;
    s.precision = 100.0 * p;
    s.recall = 100.0 * r;
    s.f1 = p + r == 0.0 ? 0.0 : 100.0 * 2.0 * p * r / (p + r);
    f1_sum += s.f1;
    out.per_class.emplace_back(label_set.JointName(JointLabel::FromIndex(c)), s);
  }
  if (!out.per_class.empty()) out.macro = f1_sum / out.per_class.size();
  return out;
}

TokenF1 ComputeTokenF1(const LabelSequence& ref, const LabelSequence& hyp,
                       const LabelSet& label_set) {
  TokenCounts counts(label_set.joint_size());
  counts.Add(ref.labels, hyp.labels);
  return ScoreTokens(counts, label_set);
}

SegmentCounts& SegmentCounts::operator+=(const SegmentCounts& other) {
  ref_segments += other.ref_segments;
  ref_words += other.ref_words;
  boundary_errors += other.boundary_errors;
  boundary_error_words += other.boundary_error_words;
  label_errors += other.label_errors;
  label_error_words += other.label_error_words;
  return *this;
}

SegmentRates SegmentRates::From(const SegmentCounts& c) {
  return {Percent(c.boundary_errors, c.ref_segments),
          Percent(c.boundary_error_words, c.ref_words),
          Percent(c.label_errors, c.ref_segments),
          Percent(c.label_error_words, c.ref_words)};
}

SegmentCounts CountSegmentErrors(const Segmentation& ref,
                                 const Segmentation& hyp) {
  const int ref_words = ref.empty() ? 0 : ref.back().end + 1;
  const int hyp_words = hyp.empty() ? 0 : hyp.back().end + 1;
  if (ref_words != hyp_words) {
    throw Error("reference covers " + std::to_string(ref_words) +
                " words, hypothesis covers " + std::to_string(hyp_words));
  }
  SegmentCounts c;
  size_t j = 0;
  for (const auto& r : ref) {
    while (j < hyp.size() && hyp[j].start < r.start) ++j;
    const bool boundary_ok =
        j < hyp.size() && hyp[j].start == r.start && hyp[j].end == r.end;
    const bool label_ok = boundary_ok && hyp[j].act == r.act;
    ++c.ref_segments;
    c.ref_words += r.length();
    if (!boundary_ok) {
      ++c.boundary_errors;
      c.boundary_error_words += r.length();
    }
    if (!label_ok) {
      ++c.label_errors;
      c.label_error_words += r.length();
    }
  }
  return c;
}

SegmentRates SegmentErrorRates(const Segmentation& ref,
                               const Segmentation& hyp) {
  return SegmentRates::From(CountSegmentErrors(ref, hyp));
}

std::vector<ScoredDialog> PairDialogs(const Corpus& ref, const Predictions& hyp,
                                      Execution execution) {
  ValidationReport report = ValidateAgainst(hyp, ref);
  if (!report.ok()) throw Error(report.violations.front());
  std::vector<ScoredDialog> out(ref.dialogs.size());
  ParallelFor(static_cast<int>(out.size()), [&](int i) {
    const Dialog& d = ref.dialogs[i];
    if (!d.reference) {
      throw Error("dialog '" + d.id + "' has no reference segmentation");
    }
    ScoredDialog& s = out[i];
    s.dialog = &d;
    s.ref_labels = EncodeJoint(*d.reference, ref.label_set).labels;
    s.hyp_labels = hyp.Find(d.id)->labels;
    s.ref = DecodeJoint(s.ref_labels, ref.label_set);
    s.hyp = DecodeJoint(s.hyp_labels, ref.label_set);
  }, execution);
  return out;
}

MetricsReport EvaluateCorpus(const Corpus& ref, const Predictions& hyp,
                             Execution execution) {
  const auto dialogs = PairDialogs(ref, hyp, execution);
  const int joint = ref.label_set.joint_size();
  const int acts = ref.label_set.size();

  struct Partial {
    TokenCounts tokens;
    SegmentCounts segments;
    std::vector<int64_t> confusion;  // acts x acts, row = reference
  };
  std::vector<Partial> partial(dialogs.size());
  ParallelFor(static_cast<int>(dialogs.size()), [&](int i) {
    const ScoredDialog& d = dialogs[i];
    Partial& p = partial[i];
    p.tokens = TokenCounts(joint);
    p.tokens.Add(d.ref_labels, d.hyp_labels);
    p.segments = CountSegmentErrors(d.ref, d.hyp);
    p.confusion.assign(static_cast<size_t>(acts) * acts, 0);
    const auto alignment = AlignSegments(d.ref, d.hyp, AlignMode::kLabeled);
    for (const auto& op : alignment.ops) {
      if (op.op != EditOp::kMatch && op.op != EditOp::kSubstitute) continue;
      const int r = ref.label_set.IndexOf(d.ref[op.ref].act);
      const int h = ref.label_set.IndexOf(d.hyp[op.hyp].act);
      ++p.confusion[static_cast<size_t>(r) * acts + h];
    }
  }, execution);

  TokenCounts tokens(joint);
  SegmentCounts segments;
  std::vector<int64_t> confusion(static_cast<size_t>(acts) * acts, 0);
  for (const auto& p : partial) {
    tokens += p.tokens;
    segments += p.segments;
    for (size_t k = 0; k < confusion.size(); ++k) confusion[k] += p.confusion[k];
  }

  MetricsReport report;
  TokenF1 f1 = ScoreTokens(tokens, ref.label_set);
  report.micro_f1 = f1.micro;
  report.macro_f1 = f1.macro;
  report.per_class = std::move(f1.per_class);
  const SegmentRates rates = SegmentRates::From(segments);
  report.dser = rates.dser;
  report.segwer = rates.segwer;
  if (ref.label_set.granularity() != Granularity::kPure1) {
    report.der = rates.der;
    report.jointwer = rates.jointwer;
  }
  for (int r = 0; r < acts; ++r) {
    for (int h = 0; h < acts; ++h) {
      const int64_t n = confusion[static_cast<size_t>(r) * acts + h];
      if (n > 0) {
        report.confusion[ref.label_set.acts()[r]][ref.label_set.acts()[h]] = n;
      }
    }
  }
  report.denominators = {segments.ref_segments, segments.ref_words,
                         tokens.total};
  return report;
}

}  // namespace daseg
