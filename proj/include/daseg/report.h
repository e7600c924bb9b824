#ifndef DASEG_REPORT_H_
#define DASEG_REPORT_H_

#include <string>

#include "daseg/analysis.h"
#include "daseg/corpus.h"
#include "daseg/metrics.h"
#include "json.hpp"

namespace daseg {

using ordered_json = nlohmann::ordered_json;

// Formats a percentage with two decimals ("100.00").
std::string FormatPercent(double value);

// Machine style: keys micro_f1, macro_f1, DSER, SegWER, DER, JointWER,
// per_class, confusion, then denominators. DER/JointWER are null when
// absent.
ordered_json MetricsToJson(const MetricsReport& report);
MetricsReport MetricsFromJson(const ordered_json& json);
// Text style: the headline row in the column order above, then the
// per-class table when it has rows.
std::string RenderMetricsText(const MetricsReport& report);

ordered_json StatsToJson(const CorpusStats& stats);
std::string RenderStatsText(const CorpusStats& stats, const std::string& title);

ordered_json GainTableToJson(const ActGainTable& table);
std::string RenderGainTableText(const ActGainTable& table,
                                const std::string& label_a,
                                const std::string& label_b, size_t top);

ordered_json FinalPunctuationToJson(const FinalPunctuationTable& table);
std::string RenderFinalPunctuationText(const FinalPunctuationTable& table);
ordered_json MidPunctuationToJson(const MidPunctuationCounts& counts);
std::string RenderMidPunctuationText(const MidPunctuationCounts& counts,
                                     const std::string& row_label);

// Plain-text table with right-aligned numeric columns.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);
  void AddRow(std::vector<std::string> row);
  std::string Render() const;

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace daseg

#endif  // DASEG_REPORT_H_
