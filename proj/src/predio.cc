#include "daseg/predio.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "daseg/error.h"
#include "json.hpp"

namespace daseg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const LabelSequence* Predictions::Find(std::string_view dialog_id) const {
  for (const auto& d : dialogs) {
    if (d.dialog_id == dialog_id) return &d;
  }
  return nullptr;
}

LabelSet Predictions::HeaderLabelSet() const {
  if (acts.empty()) throw Error("predictions header has an empty act list");
  return LabelSet(Granularity::kCustom, acts, acts.front());
}

Predictions ReferencePredictions(const Corpus& corpus, std::string producer) {
  Predictions preds;
  preds.label_set_name = std::string(corpus.label_set.name());
  preds.acts = corpus.label_set.acts();
  preds.variant = corpus.variant;
  preds.producer = std::move(producer);
  for (const auto& d : corpus.dialogs) {
    if (!d.reference) {
      throw Error("dialog '" + d.id + "' has no reference segmentation");
    }
    preds.dialogs.push_back(EncodeJoint(*d.reference, corpus.label_set, d.id));
  }
  return preds;
}

std::string PredictionsToString(const Predictions& preds) {
  const LabelSet labels = preds.HeaderLabelSet();
  std::ostringstream out;
  ordered_json header;
  header["label_set"]["name"] = preds.label_set_name;
  header["label_set"]["acts"] = preds.acts;
  header["variant"] = VariantName(preds.variant);
  header["producer"] = preds.producer;
  out << header.dump(-1, ' ', false, ordered_json::error_handler_t::replace)
      << '\n';
  for (const auto& d : preds.dialogs) {
    ordered_json rec;
    rec["dialog_id"] = d.dialog_id;
    ordered_json names = ordered_json::array();
    for (JointLabel l : d.labels) names.push_back(labels.JointName(l));
    rec["labels"] = std::move(names);
    out << rec.dump(-1, ' ', false, ordered_json::error_handler_t::replace)
        << '\n';
  }
  return out.str();
}

void WritePredictions(const Predictions& preds,
                      const std::filesystem::path& path) {
  const std::string text = PredictionsToString(preds);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write predictions file " + path.string());
  out << text;
  if (!out) throw Error("I/O error writing " + path.string());
}

Predictions PredictionsFromString(std::string_view text,
                                  std::string_view source) {
  Predictions preds;
  std::optional<LabelSet> labels;
  std::unordered_set<std::string> ids;
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    const bool terminated = nl != std::string_view::npos;
    std::string_view line =
        text.substr(pos, terminated ? nl - pos : std::string_view::npos);
    pos = terminated ? nl + 1 : text.size();
    ++line_no;
    const std::string where =
        std::string(source) + ":" + std::to_string(line_no);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (line_no == 1) throw Error(where + ": missing header record");
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(where + ": malformed record: " + e.what());
    }
    try {
      if (!labels) {
        const auto& ls = j.at("label_set");
        preds.label_set_name = ls.at("name").get<std::string>();
        preds.acts = ls.at("acts").get<std::vector<std::string>>();
        preds.variant = ParseVariant(j.at("variant").get<std::string>());
        preds.producer = j.value("producer", std::string());
        labels = preds.HeaderLabelSet();
        continue;
      }
      LabelSequence seq;
      seq.dialog_id = j.at("dialog_id").get<std::string>();
      if (!ids.insert(seq.dialog_id).second) {
        throw Error("duplicate dialog id '" + seq.dialog_id + "'");
      }
      for (const auto& l : j.at("labels")) {
        seq.labels.push_back(labels->ParseJoint(l.get<std::string>()));
      }
      // "confidence" is reserved and ignored.
      preds.dialogs.push_back(std::move(seq));
    } catch (const json::exception& e) {
      throw Error(where + ": malformed record: " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  if (!labels) {
    throw Error(std::string(source) + ": missing header record");
  }
  return preds;
}

Predictions ReadPredictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open predictions file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return PredictionsFromString(buf.str(), path.string());
}

Predictions ToPureSegmentation(const Predictions& preds) {
  const LabelSet pure = LabelSet::Pure();
  Predictions out = preds;
  out.label_set_name = std::string(pure.name());
  out.acts = pure.acts();
  for (auto& d : out.dialogs) {
    for (auto& l : d.labels) {
      if (l.is_end()) l = JointLabel::End(0);
    }
  }
  return out;
}

ValidationReport ValidateAgainst(const Predictions& preds,
                                 const Corpus& corpus) {
  ValidationReport report;
  auto& v = report.violations;
  if (preds.label_set_name != corpus.label_set.name() ||
      preds.acts != corpus.label_set.acts()) {
    v.push_back("label set mismatch: predictions use '" +
                preds.label_set_name + "' (" +
                std::to_string(preds.acts.size()) + " acts), corpus uses '" +
                std::string(corpus.label_set.name()) + "' (" +
                std::to_string(corpus.label_set.size()) + " acts)");
  }
  if (preds.variant != corpus.variant) {
    v.push_back("variant mismatch: predictions are " +
                std::string(VariantName(preds.variant)) + ", corpus is " +
                std::string(VariantName(corpus.variant)));
  }
  std::unordered_map<std::string, const LabelSequence*> by_id;
  for (const auto& d : preds.dialogs) by_id.emplace(d.dialog_id, &d);
  std::unordered_set<std::string> corpus_ids;
  for (const auto& d : corpus.dialogs) {
    corpus_ids.insert(d.id);
    auto it = by_id.find(d.id);
    if (it == by_id.end()) {
      v.push_back("dialog '" + d.id + "' is missing from the predictions");
      continue;
    }
    const int n = d.word_count();
    const int got = static_cast<int>(it->second->labels.size());
    if (got != n) {
      v.push_back("dialog '" + d.id + "' has " + std::to_string(got) +
                  " labels, corpus has " + std::to_string(n) + " words");
    }
  }
  for (const auto& d : preds.dialogs) {
    if (!corpus_ids.count(d.dialog_id)) {
      v.push_back("dialog '" + d.dialog_id + "' is not in the corpus");
    }
  }
  return report;
}

}  // namespace daseg
