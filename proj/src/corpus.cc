#include "daseg/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "daseg/coding.h"
#include "daseg/error.h"
#include "json.hpp"

namespace daseg {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view VariantName(Variant v) {
  return v == Variant::kLower ? "lower" : "nolower";
}

Variant ParseVariant(std::string_view name) {
  if (name == "lower") return Variant::kLower;
  if (name == "nolower") return Variant::kNolower;
  throw Error("unknown corpus variant '" + std::string(name) +
              "' (expected lower or nolower)");
}

bool IsPartition(const Segmentation& segments, int word_count) {
  int next = 0;
  for (const auto& s : segments) {
    if (s.start != next || s.end < s.start) return false;
    next = s.end + 1;
  }
  return next == word_count;
}

void CheckPartition(const Segmentation& segments, int word_count,
                    std::string_view context) {
  int next = 0;
  for (size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.start != next || s.end < s.start) {
      throw Error("segmentation of '" + std::string(context) +
                  "' is not a partition: segment " + std::to_string(i) +
                  " spans [" + std::to_string(s.start) + ", " +
                  std::to_string(s.end) + "], expected start " +
                  std::to_string(next));
    }
    next = s.end + 1;
  }
  if (next != word_count) {
    throw Error("segmentation of '" + std::string(context) + "' covers " +
                std::to_string(next) + " words, dialog has " +
                std::to_string(word_count));
  }
}

int Dialog::word_count() const {
  int n = 0;
  for (const auto& t : turns) n += static_cast<int>(t.words.size());
  return n;
}

std::vector<std::string> Dialog::Words() const {
  std::vector<std::string> words;
  words.reserve(word_count());
  for (const auto& t : turns) {
    words.insert(words.end(), t.words.begin(), t.words.end());
  }
  return words;
}

std::vector<int> Dialog::TurnOfWord() const {
  std::vector<int> owner;
  owner.reserve(word_count());
  for (size_t t = 0; t < turns.size(); ++t) {
    owner.insert(owner.end(), turns[t].words.size(), static_cast<int>(t));
  }
  return owner;
}

const Dialog* Corpus::Find(std::string_view id) const {
  for (const auto& d : dialogs) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

bool IsPunctuation(char c) {
  return kPunctuation.find(c) != std::string_view::npos;
}

std::string StripPunctuation(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    if (!IsPunctuation(c)) out.push_back(c);
  }
  return out;
}

std::string LowercaseAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

void ValidateCorpus(const Corpus& corpus) {
  std::unordered_set<std::string> ids;
  for (const auto& d : corpus.dialogs) {
    if (!ids.insert(d.id).second) {
      throw Error("duplicate dialog id '" + d.id + "'");
    }
    for (const auto& t : d.turns) {
      if (t.words.empty()) {
        throw Error("dialog '" + d.id + "' has an empty turn");
      }
      for (const auto& w : t.words) {
        if (w.empty() || std::any_of(w.begin(), w.end(), [](char c) {
              return std::isspace(static_cast<unsigned char>(c));
            })) {
          throw Error("dialog '" + d.id + "' has an invalid word '" + w + "'");
        }
      }
    }
    if (!d.reference) continue;
    CheckPartition(*d.reference, d.word_count(), d.id);
    for (const auto& s : *d.reference) {
      if (!corpus.label_set.Contains(s.act)) {
        throw Error("dialog '" + d.id + "' uses act '" + s.act +
                    "' outside label set " +
                    std::string(corpus.label_set.name()));
      }
    }
  }
}

Corpus Normalize(const Corpus& corpus, Variant target) {
  if (target == Variant::kNolower) {
    if (corpus.variant == Variant::kLower) {
      throw Error("cannot restore a nolower corpus from a lower one");
    }
    return corpus;
  }

  Corpus out;
  out.name = corpus.name;
  out.variant = Variant::kLower;
  out.label_set = corpus.label_set;
  out.metadata = corpus.metadata;
  int dropped_segments = 0;
  for (const auto& dialog : corpus.dialogs) {
    Dialog nd;
    nd.id = dialog.id;
    std::vector<int> new_index;  // old global word index -> new, or -1
    new_index.reserve(dialog.word_count());
    int next = 0;
    for (const auto& turn : dialog.turns) {
      Turn nt{turn.speaker, {}};
      for (const auto& w : turn.words) {
        std::string lw = StripPunctuation(LowercaseAscii(w));
        if (lw.empty()) {
          new_index.push_back(-1);
          ++out.metadata.dropped_words;
        } else {
          nt.words.push_back(std::move(lw));
          new_index.push_back(next++);
        }
      }
      if (!nt.words.empty()) nd.turns.push_back(std::move(nt));
    }
    if (dialog.reference) {
      Segmentation seg;
      for (const auto& s : *dialog.reference) {
        int first = -1, last = -1;
        for (int i = s.start; i <= s.end; ++i) {
          if (new_index[i] < 0) continue;
          if (first < 0) first = new_index[i];
          last = new_index[i];
        }
        if (first < 0) {
          ++dropped_segments;
          continue;
        }
        seg.push_back({first, last, s.act, s.continued});
      }
      CheckPartition(seg, next, nd.id);
      nd.reference = std::move(seg);
    }
    if (nd.turns.empty()) {
      std::clog << "WARNING: dialog '" << nd.id
                << "' is empty after normalization and was dropped\n";
      continue;
    }
    out.dialogs.push_back(std::move(nd));
  }
  if (dropped_segments > 0) {
    std::clog << "WARNING: " << dropped_segments
              << " segment(s) became empty under the lower variant and were "
                 "dropped\n";
  }
  out.metadata.dropped_segments += dropped_segments;
  return out;
}

CorpusStats ComputeStats(const Corpus& corpus) {
  CorpusStats stats;
  for (const auto& d : corpus.dialogs) {
    if (!d.reference) {
      throw Error("dialog '" + d.id + "' has no reference segmentation");
    }
    ++stats.dialogs;
    stats.turns += static_cast<int>(d.turns.size());
    const int words = d.word_count();
    stats.words += words;
    stats.max_words_per_dialog = std::max(stats.max_words_per_dialog, words);
    for (const auto& s : *d.reference) {
      if (s.continued) ++stats.continued_segments;
    }
    for (const auto& s : Canonicalize(*d.reference, corpus.label_set)) {
      ++stats.segments;
      ++stats.segments_per_act[s.act];
    }
  }
  if (stats.dialogs > 0) {
    stats.mean_words_per_dialog =
        static_cast<double>(stats.words) / stats.dialogs;
  }
  return stats;
}

Corpus ToPureSegmentation(const Corpus& corpus) {
  Corpus out = corpus;
  out.label_set = LabelSet::Pure();
  for (auto& d : out.dialogs) {
    if (!d.reference) continue;
    for (auto& s : *d.reference) s.act = std::string(kPureAct);
  }
  return out;
}

// ---------------------------------------------------------------------------

SplitManifest ReadSplitManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open split manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed split manifest " + path.string() + ": " + e.what());
  }
  SplitManifest m;
  try {
    m.train = j.at("train").get<std::vector<std::string>>();
    m.validation = j.at("validation").get<std::vector<std::string>>();
    m.test = j.at("test").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error("split manifest " + path.string() +
                " must have train/validation/test id lists: " + e.what());
  }
  return m;
}

void WriteSplitManifest(const SplitManifest& manifest,
                        const std::filesystem::path& path) {
  ordered_json j;
  j["train"] = manifest.train;
  j["validation"] = manifest.validation;
  j["test"] = manifest.test;
  std::ofstream out(path);
  if (!out) throw Error("cannot write split manifest " + path.string());
  out << j.dump(1) << '\n';
}

CorpusSplits Split(const Corpus& corpus, const SplitManifest& manifest) {
  std::unordered_map<std::string, const Dialog*> by_id;
  for (const auto& d : corpus.dialogs) by_id.emplace(d.id, &d);

  std::unordered_map<std::string, std::string> seen;
  auto take = [&](const std::vector<std::string>& ids,
                  const std::string& split) {
    Corpus part;
    part.name = corpus.name;
    part.variant = corpus.variant;
    part.label_set = corpus.label_set;
    for (const auto& id : ids) {
      auto [it, fresh] = seen.emplace(id, split);
      if (!fresh) {
        throw Error("dialog id '" + id + "' listed in both " + it->second +
                    " and " + split);
      }
      auto d = by_id.find(id);
      if (d == by_id.end()) {
        throw Error("split manifest names unknown dialog id '" + id + "'");
      }
      part.dialogs.push_back(*d->second);
    }
    return part;
  };
  CorpusSplits out{take(manifest.train, "train"),
                   take(manifest.validation, "validation"),
                   take(manifest.test, "test")};
  return out;
}

// ---------------------------------------------------------------------------

std::string DialogToRecord(const Dialog& dialog, Variant variant) {
  ordered_json j;
  j["id"] = dialog.id;
  j["variant"] = VariantName(variant);
  ordered_json turns = ordered_json::array();
  for (const auto& t : dialog.turns) {
    ordered_json jt;
    jt["speaker"] = t.speaker;
    jt["words"] = t.words;
    turns.push_back(std::move(jt));
  }
  j["turns"] = std::move(turns);
  ordered_json segs = ordered_json::array();
  if (dialog.reference) {
    for (const auto& s : *dialog.reference) {
      ordered_json js;
      js["start"] = s.start;
      js["end"] = s.end;
      js["act"] = s.act;
      if (s.continued) js["continued"] = true;
      segs.push_back(std::move(js));
    }
  }
  j["segments"] = std::move(segs);
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path.string());
  for (const auto& d : corpus.dialogs) {
    out << DialogToRecord(d, corpus.variant) << '\n';
  }
  if (!out) throw Error("I/O error writing " + path.string());
}

Corpus ReadCorpus(const std::filesystem::path& path, std::string name,
                  const LabelSet& label_set) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.label_set = label_set;
  std::string line;
  int line_no = 0;
  bool have_variant = false;
  const bool pure = label_set.granularity() == Granularity::kPure1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    try {
      json j = json::parse(line);
      Dialog d;
      d.id = j.at("id").get<std::string>();
      Variant v = ParseVariant(j.at("variant").get<std::string>());
      if (!have_variant) {
        corpus.variant = v;
        have_variant = true;
      } else if (v != corpus.variant) {
        throw Error("mixed corpus variants");
      }
      for (const auto& jt : j.at("turns")) {
        d.turns.push_back({jt.at("speaker").get<std::string>(),
                           jt.at("words").get<std::vector<std::string>>()});
      }
      const auto& js = j.at("segments");
      if (!js.empty()) {
        Segmentation seg;
        for (const auto& s : js) {
          seg.push_back({s.at("start").get<int>(), s.at("end").get<int>(),
                         pure ? std::string(kPureAct)
                              : s.at("act").get<std::string>(),
                         s.value("continued", false)});
        }
        d.reference = std::move(seg);
      }
      corpus.dialogs.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw Error(where + ": malformed dialog record: " + e.what());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  ValidateCorpus(corpus);
  return corpus;
}

}  // namespace daseg
