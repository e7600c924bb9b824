#include <algorithm>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "daseg/coding.h"
#include "daseg/corpus.h"
#include "daseg/error.h"
#include "daseg/parallel.h"

namespace daseg {
namespace {

namespace fs = std::filesystem;

std::vector<fs::path> FilesWithSuffix(const fs::path& root,
                                      std::string_view suffix) {
  if (!fs::is_directory(root)) {
    throw Error("corpus root " + root.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() >= suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// RFC 4180 record reader: quoted fields may contain separators, doubled
// quotes and newlines.
bool ReadCsvRecord(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (!any) return false;
  if (quoted) throw Error("unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

struct Utterance {
  std::string speaker;
  std::vector<std::string> words;
  std::string act;  // empty for a `+` continuation
  bool continuation = false;
};

struct ParsedDialog {
  Dialog dialog;
  int dropped_utterances = 0;
};

// Groups utterances into turns (maximal same-speaker runs) and builds the
// reference segmentation. A continuation takes the act of the speaker's most
// recent segment and marks that segment as continued.
ParsedDialog AssembleDialog(std::string id, std::vector<Utterance> utts,
                            const LabelSet& label_set) {
  ParsedDialog out;
  out.dialog.id = std::move(id);
  Segmentation seg;
  std::vector<std::string> seg_speaker;
  int word = 0;
  for (auto& u : utts) {
    if (u.words.empty()) {
      ++out.dropped_utterances;
      continue;
    }
    auto& turns = out.dialog.turns;
    if (turns.empty() || turns.back().speaker != u.speaker) {
      turns.push_back({u.speaker, {}});
    }
    std::string act = u.act;
    if (u.continuation) {
      auto prior = std::find(seg_speaker.rbegin(), seg_speaker.rend(),
                             u.speaker);
      if (prior != seg_speaker.rend()) {
        auto& target = seg[seg_speaker.rend() - prior - 1];
        target.continued = true;
        act = target.act;
      } else {
        act = label_set.fallback_act();
      }
    }
    const int n = static_cast<int>(u.words.size());
    auto& words = turns.back().words;
    words.insert(words.end(), std::make_move_iterator(u.words.begin()),
                 std::make_move_iterator(u.words.end()));
    seg.push_back({word, word + n - 1, std::move(act), false});
    seg_speaker.push_back(u.speaker);
    word += n;
  }
  out.dialog.reference = std::move(seg);
  return out;
}

template <typename Parse>
Corpus ParseFiles(const std::vector<fs::path>& files, Parse parse) {
  std::vector<ParsedDialog> parsed(files.size());
  ParallelFor(static_cast<int>(files.size()),
              [&](int i) { parsed[i] = parse(files[i]); });
  Corpus corpus;
  for (auto& p : parsed) {
    corpus.metadata.dropped_utterances += p.dropped_utterances;
    if (p.dialog.turns.empty()) continue;
    corpus.dialogs.push_back(std::move(p.dialog));
  }
  std::stable_sort(corpus.dialogs.begin(), corpus.dialogs.end(),
                   [](const Dialog& a, const Dialog& b) { return a.id < b.id; });
  return corpus;
}

}  // namespace

std::vector<std::string> CleanSwdaText(std::string_view text) {
  static const std::regex kComments(R"(<<[^>]*>>|<[^>]*>|\*\[\[[^\]]*\]\])");
  static const std::regex kDisfluencyOpen(R"(\{[A-Za-z]+)");
  static const std::regex kMarkupChars(R"([{}\[\]#]|\(\(|\)\))");
  std::string s(text);
  s = std::regex_replace(s, kComments, " ");
  s = std::regex_replace(s, kDisfluencyOpen, " ");
  s = std::regex_replace(s, kMarkupChars, " ");

  std::vector<std::string> words;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok == "/" || tok == "-/" || tok == "--" || tok == "+" || tok == "-" ||
        tok == "=") {
      continue;
    }
    // Slash-unit markers glued to a word ("okay./").
    while (!tok.empty() && tok.back() == '/') tok.pop_back();
    if (tok.empty()) continue;
    words.push_back(EscapeReservedWord(std::move(tok)));
  }
  return words;
}

std::string SwdaClusterTag(std::string_view raw_tag) {
  static const std::regex kSplit(R"(\s*[,;]\s*)");
  std::string raw(raw_tag);
  // Leading/trailing whitespace never carries a tag.
  raw.erase(0, raw.find_first_not_of(" \t"));
  raw.erase(raw.find_last_not_of(" \t") + 1);
  std::sregex_token_iterator it(raw.begin(), raw.end(), kSplit, -1);
  std::string tag = it == std::sregex_token_iterator() ? raw : it->str();

  if (tag == "qy^d" || tag == "qw^d" || tag == "b^m") return tag;
  if (tag == "nn^e") return "ng";
  if (tag == "ny^e") return "na";
  if (size_t caret = tag.find('^', 1); caret != std::string::npos) {
    tag.resize(caret);
  }
  std::erase_if(tag, [](char c) {
    return c == '(' || c == ')' || c == '@' || c == '*';
  });
  if (tag == "qr" || tag == "qy") return "qy";
  if (tag == "fe" || tag == "ba") return "ba";
  if (tag == "oo" || tag == "co" || tag == "cc") return "oo_co_cc";
  if (tag == "fx" || tag == "sv") return "sv";
  if (tag == "aap" || tag == "am") return "aap_am";
  if (tag == "arp" || tag == "nd") return "arp_nd";
  if (tag == "fo" || tag == "o" || tag == "fw" || tag == "\"" || tag == "by" ||
      tag == "bc") {
    return "fo_o_fw_\"_by_bc";
  }
  // Abandoned-or-Turn-Exit is merged into Uninterpretable.
  if (tag == "%-") return "%";
  return tag;
}

Corpus ImportSwda(const fs::path& root, const LabelSet& label_set,
                  const ImportOptions& options) {
  std::unordered_map<std::string, std::string> tag_to_act;
  for (const auto& [tag, act] : SwdaDamslTags()) tag_to_act.emplace(tag, act);

  auto files = FilesWithSuffix(root, ".utt.csv");
  if (files.empty()) {
    throw Error("no *.utt.csv files found under " + root.string());
  }
  auto parse = [&](const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    std::vector<std::string> header, row;
    if (!ReadCsvRecord(in, header)) {
      throw Error(file.string() + ": empty file");
    }
    auto column = [&](std::string_view name) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) {
        throw Error(file.string() + ": missing column '" + std::string(name) +
                    "'");
      }
      return static_cast<size_t>(it - header.begin());
    };
    const size_t c_conv = column("conversation_no");
    const size_t c_tag = column("act_tag");
    const size_t c_caller = column("caller");
    const size_t c_text = column("text");

    std::string id;
    std::vector<Utterance> utts;
    int line = 1;
    try {
      while (ReadCsvRecord(in, row)) {
        ++line;
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != header.size()) {
          throw Error("record has " + std::to_string(row.size()) +
                      " fields, header has " + std::to_string(header.size()));
        }
        if (id.empty()) id = "sw" + row[c_conv];
        Utterance u;
        u.speaker = row[c_caller];
        u.words = CleanSwdaText(row[c_text]);
        const std::string cluster = SwdaClusterTag(row[c_tag]);
        if (cluster == "+") {
          u.continuation = true;
        } else {
          auto it = tag_to_act.find(cluster);
          if (it == tag_to_act.end() || !label_set.Contains(it->second)) {
            throw Error("act tag '" + row[c_tag] + "' (cluster '" + cluster +
                        "') is outside label set " +
                        std::string(label_set.name()));
          }
          u.act = it->second;
        }
        if (u.words.empty() && !options.drop_empty_utterances) {
          throw Error("utterance has no words after markup stripping");
        }
        utts.push_back(std::move(u));
      }
    } catch (const Error& e) {
      throw Error(file.string() + ":" + std::to_string(line) + ": " +
                  e.what());
    }
    if (id.empty()) throw Error(file.string() + ": no utterances");
    return AssembleDialog(id, std::move(utts), label_set);
  };

  Corpus corpus = ParseFiles(files, parse);
  corpus.name = "swda";
  corpus.variant = Variant::kNolower;
  corpus.label_set = label_set;
  ValidateCorpus(corpus);
  return corpus;
}

Corpus ImportMrda(const fs::path& root, Granularity granularity,
                  const ImportOptions& options) {
  const std::vector<std::pair<std::string, std::string>>* table = nullptr;
  size_t column = 0;
  switch (granularity) {
    case Granularity::kMrdaBasic5:
    case Granularity::kPure1:
      table = &MrdaBasicTags();
      column = 2;
      break;
    case Granularity::kMrdaGeneral12:
      table = &MrdaGeneralTags();
      column = 3;
      break;
    case Granularity::kMrdaFull51:
      table = &MrdaFullTags();
      column = 4;
      break;
    default:
      throw Error("granularity " + std::string(GranularityName(granularity)) +
                  " is not available for MRDA");
  }
  const LabelSet tag_set = granularity == Granularity::kPure1
                               ? LabelSet::MrdaBasic()
                               : LabelSet::ForGranularity(granularity);
  std::unordered_map<std::string, std::string> tag_to_act(table->begin(),
                                                          table->end());

  auto files = FilesWithSuffix(root, ".txt");
  std::erase_if(files, [](const fs::path& p) {
    const auto name = p.filename().string();
    return name.find("label") != std::string::npos ||
           name.find("split") != std::string::npos ||
           name.find("README") != std::string::npos;
  });
  if (files.empty()) throw Error("no meeting files found under " + root.string());

  auto parse = [&](const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    std::vector<Utterance> utts;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> fields;
      std::string field;
      std::istringstream fs(line);
      while (std::getline(fs, field, '|')) fields.push_back(field);
      const std::string where = file.string() + ":" + std::to_string(line_no);
      if (fields.size() != 5) {
        throw Error(where + ": expected 5 '|'-separated fields, got " +
                    std::to_string(fields.size()));
      }
      Utterance u;
      u.speaker = fields[0];
      std::istringstream ws(fields[1]);
      std::string w;
      while (ws >> w) u.words.push_back(EscapeReservedWord(std::move(w)));
      auto it = tag_to_act.find(fields[column]);
      if (it == tag_to_act.end()) {
        throw Error(where + ": tag '" + fields[column] + "' is not in the " +
                    std::string(GranularityName(tag_set.granularity())) +
                    " inventory");
      }
      u.act = granularity == Granularity::kPure1 ? std::string(kPureAct)
                                                 : it->second;
      if (u.words.empty() && !options.drop_empty_utterances) {
        throw Error(where + ": utterance has no words");
      }
      utts.push_back(std::move(u));
    }
    const LabelSet& target =
        granularity == Granularity::kPure1 ? LabelSet::Pure() : tag_set;
    return AssembleDialog(file.stem().string(), std::move(utts), target);
  };

  Corpus corpus = ParseFiles(files, parse);
  corpus.name = "mrda";
  corpus.variant = Variant::kNolower;
  corpus.label_set = granularity == Granularity::kPure1 ? LabelSet::Pure()
                                                         : tag_set;
  ValidateCorpus(corpus);
  return corpus;
}

std::optional<SplitManifest> MrdaLayoutManifest(const fs::path& root) {
  auto stems = [&](std::initializer_list<const char*> names)
      -> std::optional<std::vector<std::string>> {
    for (const char* name : names) {
      fs::path dir = root / name;
      if (!fs::is_directory(dir)) continue;
      std::vector<std::string> ids;
      for (const auto& f : FilesWithSuffix(dir, ".txt")) {
        ids.push_back(f.stem().string());
      }
      return ids;
    }
    return std::nullopt;
  };
  auto train = stems({"train"});
  auto val = stems({"val", "validation", "dev"});
  auto test = stems({"test"});
  if (!train || !val || !test) return std::nullopt;
  return SplitManifest{*train, *val, *test};
}

}  // namespace daseg
