#include "daseg/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "daseg/error.h"

namespace daseg {

std::string FormatPercent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

TextTable::TextTable(std::vector<std::string> header) {
  rows_.push_back(std::move(header));
}

void TextTable::AddRow(std::vector<std::string> row) {
  row.resize(rows_.front().size());
  rows_.push_back(std::move(row));
}

std::string TextTable::Render() const {
  const size_t cols = rows_.front().size();
  std::vector<size_t> width(cols, 0);
  for (const auto& r : rows_) {
    for (size_t c = 0; c < cols; ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  for (size_t i = 0; i < rows_.size(); ++i) {
    for (size_t c = 0; c < cols; ++c) {
      const std::string& cell = rows_[i][c];
      const std::string pad(width[c] - cell.size(), ' ');
      if (c > 0) out << "  ";
      // First column left-aligned, the rest right-aligned.
      if (c == 0) {
        out << cell << (cols > 1 ? pad : "");
      } else {
        out << pad << cell;
      }
    }
    out << '\n';
    if (i == 0) {
      size_t total = 0;
      for (size_t c = 0; c < cols; ++c) total += width[c] + (c ? 2 : 0);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

ordered_json MetricsToJson(const MetricsReport& r) {
  ordered_json j;
  j["micro_f1"] = r.micro_f1;
  j["macro_f1"] = r.macro_f1;
  j["DSER"] = r.dser;
  j["SegWER"] = r.segwer;
  j["DER"] = r.der ? ordered_json(*r.der) : ordered_json(nullptr);
  j["JointWER"] = r.jointwer ? ordered_json(*r.jointwer) : ordered_json(nullptr);
  ordered_json per_class = ordered_json::object();
  for (const auto& [label, s] : r.per_class) {
    ordered_json c;
    c["precision"] = s.precision;
    c["recall"] = s.recall;
    c["f1"] = s.f1;
    c["support"] = s.support;
    per_class[label] = std::move(c);
  }
  j["per_class"] = std::move(per_class);
  ordered_json confusion = ordered_json::object();
  for (const auto& [ref, row] : r.confusion) {
    ordered_json jr = ordered_json::object();
    for (const auto& [hyp, n] : row) jr[hyp] = n;
    confusion[ref] = std::move(jr);
  }
  j["confusion"] = std::move(confusion);
  j["denominators"] = {{"ref_segments", r.denominators.ref_segments},
                       {"ref_words", r.denominators.ref_words},
                       {"tokens", r.denominators.tokens}};
  return j;
}

MetricsReport MetricsFromJson(const ordered_json& j) {
  MetricsReport r;
  try {
    r.micro_f1 = j.at("micro_f1").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.dser = j.at("DSER").get<double>();
    r.segwer = j.at("SegWER").get<double>();
    if (!j.at("DER").is_null()) r.der = j.at("DER").get<double>();
    if (!j.at("JointWER").is_null()) r.jointwer = j.at("JointWER").get<double>();
    for (const auto& [label, c] : j.at("per_class").items()) {
      ClassScores s;
      s.precision = c.at("precision").get<double>();
      s.recall = c.at("recall").get<double>();
      s.f1 = c.at("f1").get<double>();
      s.support = c.at("support").get<int64_t>();
      r.per_class.emplace_back(label, s);
    }
    for (const auto& [ref, row] : j.at("confusion").items()) {
      for (const auto& [hyp, n] : row.items()) {
        r.confusion[ref][hyp] = n.get<int64_t>();
      }
    }
    const auto& d = j.at("denominators");
    r.denominators = {d.at("ref_segments").get<int64_t>(),
                      d.at("ref_words").get<int64_t>(),
                      d.at("tokens").get<int64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed metrics report: ") + e.what());
  }
  return r;
}

std::string RenderMetricsText(const MetricsReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatPercent(*v) : std::string("-");
  };
  TextTable headline(
      {"micro_f1", "macro_f1", "DSER", "SegWER", "DER", "JointWER"});
  headline.AddRow({FormatPercent(r.micro_f1), FormatPercent(r.macro_f1),
                   FormatPercent(r.dser), FormatPercent(r.segwer), opt(r.der),
                   opt(r.jointwer)});
  std::string out = headline.Render();
  if (!r.per_class.empty()) {
    TextTable classes({"label", "precision", "recall", "f1", "support"});
    for (const auto& [label, s] : r.per_class) {
      classes.AddRow({label, FormatPercent(s.precision),
                      FormatPercent(s.recall), FormatPercent(s.f1),
                      std::to_string(s.support)});
    }
    out += "\n" + classes.Render();
  }
  return out;
}

ordered_json StatsToJson(const CorpusStats& s) {
  ordered_json j;
  j["dialogs"] = s.dialogs;
  j["turns"] = s.turns;
  j["words"] = s.words;
  j["segments"] = s.segments;
  j["continued_segments"] = s.continued_segments;
  j["mean_words_per_dialog"] = s.mean_words_per_dialog;
  j["max_words_per_dialog"] = s.max_words_per_dialog;
  ordered_json acts = ordered_json::object();
  for (const auto& [act, n] : s.segments_per_act) acts[act] = n;
  j["segments_per_act"] = std::move(acts);
  return j;
}

std::string RenderStatsText(const CorpusStats& s, const std::string& title) {
  TextTable summary({title, "dialogs", "turns", "words", "segments",
                     "continued", "mean words", "max words"});
  char mean[32];
  std::snprintf(mean, sizeof(mean), "%.1f", s.mean_words_per_dialog);
  summary.AddRow({"", std::to_string(s.dialogs), std::to_string(s.turns),
                  std::to_string(s.words), std::to_string(s.segments),
                  std::to_string(s.continued_segments), mean,
                  std::to_string(s.max_words_per_dialog)});
  std::string out = summary.Render();
  if (!s.segments_per_act.empty()) {
    std::vector<std::pair<std::string, int>> acts(s.segments_per_act.begin(),
                                                  s.segments_per_act.end());
    std::stable_sort(acts.begin(), acts.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;
    });
    TextTable per_act({"act", "segments"});
    for (const auto& [act, n] : acts) per_act.AddRow({act, std::to_string(n)});
    out += "\n" + per_act.Render();
  }
  return out;
}

ordered_json GainTableToJson(const ActGainTable& t) {
  ordered_json j;
  j["rate"] = RateKindName(t.rate);
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"act", r.act},
                    {"count", r.count},
                    {"rate_a", r.rate_a},
                    {"rate_b", r.rate_b},
                    {"abs_gain", r.abs_gain}});
  }
  j["rows"] = std::move(rows);
  j["never_recognized_a"] = t.never_recognized_a;
  j["never_recognized_b"] = t.never_recognized_b;
  return j;
}

std::string RenderGainTableText(const ActGainTable& t,
                                const std::string& label_a,
                                const std::string& label_b, size_t top) {
  const std::string rate(RateKindName(t.rate));
  TextTable table({t.rate == RateKind::kDser ? "Mis-segmented dialog acts"
                                             : "Mis-classified dialog acts",
                   "Count", rate + " (" + label_a + ") [%]",
                   rate + " (" + label_b + ") [%]", "Abs. gain [%]"});
  for (size_t i = 0; i < t.rows.size() && (top == 0 || i < top); ++i) {
    const auto& r = t.rows[i];
    table.AddRow({r.act, std::to_string(r.count), FormatPercent(r.rate_a),
                  FormatPercent(r.rate_b), FormatPercent(r.abs_gain)});
  }
  std::ostringstream out;
  out << table.Render();
  auto list = [&](const std::string& who, const std::vector<std::string>& acts) {
    out << "\nNever recognized by " << who << " (" << acts.size() << "):";
    for (const auto& a : acts) out << ' ' << a;
    out << '\n';
  };
  list(label_a, t.never_recognized_a);
  list(label_b, t.never_recognized_b);
  return out.str();
}

ordered_json FinalPunctuationToJson(const FinalPunctuationTable& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    ordered_json row;
    row["act"] = r.act;
    for (int c = 0; c < kFinalPunctClasses; ++c) {
      ordered_json cell;
      cell["count"] = r.counts[c];
      if (t.has_errors) {
        cell["errors"] = r.errors[c];
        cell["error_percent"] = FinalPunctuationTable::ErrorPercent(r, c);
      }
      row[std::string(FinalPunctName(static_cast<FinalPunct>(c)))] =
          std::move(cell);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string RenderFinalPunctuationText(const FinalPunctuationTable& t) {
  std::vector<std::string> header{""};
  for (int c = 0; c < kFinalPunctClasses; ++c) {
    header.emplace_back(FinalPunctName(static_cast<FinalPunct>(c)));
  }
  TextTable table(header);
  for (const auto& r : t.rows) {
    std::vector<std::string> row{r.act};
    for (int c = 0; c < kFinalPunctClasses; ++c) {
      std::string cell = std::to_string(r.counts[c]);
      if (t.has_errors) {
        cell += " (" + FormatPercent(FinalPunctuationTable::ErrorPercent(r, c)) +
                ")";
      }
      row.push_back(std::move(cell));
    }
    table.AddRow(std::move(row));
  }
  return table.Render();
}

ordered_json MidPunctuationToJson(const MidPunctuationCounts& c) {
  ordered_json j;
  j["full_stop"] = c.full_stop;
  j["comma"] = c.comma;
  j["question_mark"] = c.question;
  j["segments"] = c.segments;
  return j;
}

std::string RenderMidPunctuationText(const MidPunctuationCounts& c,
                                     const std::string& row_label) {
  TextTable table({"Segmentation", "Full stop", "Comma", "Q. mark", "Segments"});
  table.AddRow({row_label, std::to_string(c.full_stop),
                std::to_string(c.comma), std::to_string(c.question),
                std::to_string(c.segments)});
  return table.Render();
}

}  // namespace daseg
