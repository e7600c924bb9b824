#include "daseg/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "daseg/analysis.h"
#include "daseg/coding.h"
#include "daseg/corpus.h"
#include "daseg/error.h"
#include "daseg/metrics.h"
#include "daseg/predio.h"
#include "daseg/report.h"
#include "daseg/tagger.h"

namespace daseg {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Granularity GranularityFor(const RunConfig& c) {
  if (c.corpus == "swda") {
    if (c.labelset.empty() || c.labelset == "42") return Granularity::kSwda42;
    if (c.labelset == "1") return Granularity::kPure1;
  } else if (c.corpus == "mrda") {
    if (c.labelset.empty() || c.labelset == "basic") {
      return Granularity::kMrdaBasic5;
    }
    if (c.labelset == "general") return Granularity::kMrdaGeneral12;
    if (c.labelset == "full") return Granularity::kMrdaFull51;
    if (c.labelset == "1") return Granularity::kPure1;
  } else {
    throw UsageError("--corpus must be swda or mrda");
  }
  throw UsageError("label set '" + c.labelset + "' is not valid for " +
                   c.corpus + " (swda: 42|1, mrda: basic|general|full|1)");
}

Corpus LoadCorpus(const std::string& path, const RunConfig& c) {
  if (path.empty()) throw UsageError("missing corpus path");
  return ReadCorpus(path, c.corpus, LabelSet::ForGranularity(GranularityFor(c)));
}

// Pure-segmentation scoring accepts predictions from any label set.
Predictions LoadPredictions(const std::string& path, const Corpus& ref) {
  if (path.empty()) throw UsageError("missing predictions path");
  Predictions preds = ReadPredictions(path);
  if (ref.label_set.granularity() == Granularity::kPure1) {
    return ToPureSegmentation(preds);
  }
  return preds;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("I/O error writing " + path.string());
}

// Writes <report> (machine style, with the run config) and the same path
// with a .txt extension (text style).
void WriteReport(const RunConfig& c, ordered_json body, const std::string& text) {
  if (c.report.empty()) return;
  ordered_json doc = std::move(body);
  doc["config"] = RunConfigToJson(c);
  WriteText(c.report, doc.dump(2) + "\n");
  fs::path txt(c.report);
  txt.replace_extension(".txt");
  if (txt != fs::path(c.report)) WriteText(txt, text);
}

int RunImport(const RunConfig& c, std::ostream& out) {
  if (c.input.empty() || c.output_dir.empty()) {
    throw UsageError("import needs --input and --output-dir");
  }
  const Granularity g = GranularityFor(c);
  const Variant variant = ParseVariant(c.variant);
  Corpus corpus;
  std::optional<SplitManifest> manifest;
  if (c.corpus == "swda") {
    corpus = ImportSwda(c.input, LabelSet::Swda42());
    if (g == Granularity::kPure1) corpus = ToPureSegmentation(corpus);
  } else {
    corpus = ImportMrda(c.input, g);
    manifest = MrdaLayoutManifest(c.input);
  }
  if (!c.split_manifest.empty()) manifest = ReadSplitManifest(c.split_manifest);

  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);
  std::vector<std::pair<std::string, Corpus>> parts;
  if (manifest) {
    CorpusSplits splits = Split(corpus, *manifest);
    parts.emplace_back("train", std::move(splits.train));
    parts.emplace_back("validation", std::move(splits.validation));
    parts.emplace_back("test", std::move(splits.test));
    WriteSplitManifest(*manifest, dir / "manifest.json");
  } else {
    parts.emplace_back("all", std::move(corpus));
  }
  ordered_json stats_json = ordered_json::object();
  std::string stats_text;
  for (auto& [name, part] : parts) {
    Corpus normalized = Normalize(part, variant);
    WriteCorpus(normalized, dir / (name + ".corpus"));
    const CorpusStats stats = ComputeStats(normalized);
    stats_json[name] = StatsToJson(stats);
    stats_json[name]["dropped_segments"] = normalized.metadata.dropped_segments;
    stats_json[name]["dropped_utterances"] =
        normalized.metadata.dropped_utterances;
    stats_text += RenderStatsText(stats, name) + "\n";
  }
  ordered_json doc;
  doc["stats"] = std::move(stats_json);
  doc["config"] = RunConfigToJson(c);
  WriteText(dir / "stats.json", doc.dump(2) + "\n");
  WriteText(dir / "stats.txt", stats_text);
  out << stats_text;
  return kExitOk;
}

int RunStats(const RunConfig& c, std::ostream& out) {
  const Corpus corpus = LoadCorpus(c.input, c);
  const CorpusStats stats = ComputeStats(corpus);
  const std::string text = RenderStatsText(stats, fs::path(c.input).filename().string());
  out << text;
  ordered_json body;
  body["stats"] = StatsToJson(stats);
  WriteReport(c, std::move(body), text);
  return kExitOk;
}

int RunEncode(const RunConfig& c, std::ostream& out) {
  const Corpus corpus = LoadCorpus(c.input, c);
  if (corpus.dialogs.empty()) throw Error("corpus has no dialogs");
  const Dialog* dialog =
      c.dialog.empty() ? &corpus.dialogs.front() : corpus.Find(c.dialog);
  if (!dialog) throw Error("dialog '" + c.dialog + "' not found");
  if (!dialog->reference) throw Error("dialog has no reference segmentation");

  const TokenView view = Serialize(*dialog);
  const LabelSequence labels =
      EncodeJoint(*dialog->reference, corpus.label_set, dialog->id);
  const auto windows = Chunk(view, c.window_size);
  std::unique_ptr<SubwordTokenizer> tokenizer;
  if (c.tokenizer == "whitespace") {
    tokenizer = std::make_unique<WhitespaceTokenizer>();
  } else if (c.tokenizer == "test") {
    tokenizer = std::make_unique<ChunkingTestTokenizer>();
  } else {
    throw UsageError("--tokenizer must be whitespace or test");
  }
  const SubwordProjection proj = BuildProjection(view, *tokenizer);

  std::ostringstream text;
  text << "dialog " << dialog->id << ": " << view.word_count() << " words, "
       << view.size() - view.word_count() << " TURN sentinels, "
       << windows.size() << " window(s) of " << c.window_size << ", "
       << proj.total() << " subwords\n";
  ordered_json items = ordered_json::array();
  int window = 0;
  for (int i = 0; i < view.size(); ++i) {
    if (window < static_cast<int>(windows.size()) && windows[window].begin == i) {
      text << "--- window " << window << " [" << windows[window].begin << ", "
           << windows[window].end << ")\n";
      ++window;
    }
    const int w = view.word_index[i];
    const std::string label =
        w < 0 ? "-" : corpus.label_set.JointName(labels.labels[w]);
    text << view.items[i] << '\t' << label << '\t' << proj.counts[i] << '\n';
    items.push_back({{"item", view.items[i]},
                     {"label", w < 0 ? ordered_json(nullptr) : ordered_json(label)},
                     {"subwords", proj.counts[i]}});
  }
  out << text.str();
  ordered_json body;
  body["dialog_id"] = dialog->id;
  body["items"] = std::move(items);
  ordered_json jw = ordered_json::array();
  for (const auto& w : windows) jw.push_back({w.begin, w.end});
  body["windows"] = std::move(jw);
  WriteReport(c, std::move(body), text.str());
  return kExitOk;
}

int RunTrain(const RunConfig& c, std::ostream& out) {
  if (c.model.empty()) throw UsageError("train needs --model");
  const Corpus train = LoadCorpus(c.train, c);
  const Corpus dev = LoadCorpus(c.dev, c);
  TrainConfig config;
  config.epochs = c.epochs;
  config.seed = c.seed;
  config.averaging = !c.no_averaging;
  config.unit = ParseDecodeUnit(c.unit);
  std::ostringstream log;
  ordered_json epochs = ordered_json::array();
  const TaggerModel model = Train(train, dev, config, [&](int epoch, double f1) {
    log << "epoch " << epoch << " dev macro_f1 " << FormatPercent(f1) << '\n';
    epochs.push_back({{"epoch", epoch}, {"dev_macro_f1", f1}});
  });
  SaveModel(model, c.model);
  log << "selected epoch " << model.metadata.best_epoch << " (dev macro_f1 "
      << FormatPercent(model.metadata.dev_macro_f1) << "), "
      << model.emissions().size() << " features\n";
  out << log.str();
  ordered_json body;
  body["epochs"] = std::move(epochs);
  body["best_epoch"] = model.metadata.best_epoch;
  body["dev_macro_f1"] = model.metadata.dev_macro_f1;
  body["features"] = model.emissions().size();
  WriteReport(c, std::move(body), log.str());
  return kExitOk;
}

int RunPredict(const RunConfig& c, std::ostream& out) {
  if (c.model.empty() || c.output.empty()) {
    throw UsageError("predict needs --model and --output");
  }
  const TaggerModel model = LoadModel(c.model);
  const Corpus corpus = LoadCorpus(c.input, c);
  const Predictions preds = Predict(model, corpus, ParseDecodeUnit(c.unit));
  WritePredictions(preds, c.output);
  out << "wrote predictions for " << preds.dialogs.size() << " dialog(s) to "
      << c.output << '\n';
  return kExitOk;
}

int RunEvaluate(const RunConfig& c, std::ostream& out) {
  const Corpus ref = LoadCorpus(c.ref, c);
  const Predictions hyp = LoadPredictions(c.hyp, ref);
  const MetricsReport report = EvaluateCorpus(ref, hyp);
  const std::string text = RenderMetricsText(report);
  out << text;
  WriteReport(c, MetricsToJson(report), text);
  return kExitOk;
}

int RunValidate(const RunConfig& c, std::ostream& out) {
  const Corpus ref = LoadCorpus(c.ref, c);
  const Predictions hyp = LoadPredictions(c.hyp, ref);
  const ValidationReport report = ValidateAgainst(hyp, ref);
  for (const auto& v : report.violations) out << v << '\n';
  if (report.ok()) out << "ok\n";
  return report.ok() ? kExitOk : kExitDomainError;
}

int RunCompare(const RunConfig& c, std::ostream& out) {
  const Corpus ref = LoadCorpus(c.ref, c);
  const Predictions a = LoadPredictions(c.hyp_a, ref);
  const Predictions b = LoadPredictions(c.hyp_b, ref);
  const ActGainTable table =
      CompareModels(ref, a, b, ParseRateKind(c.rate), c.min_count);
  const std::string text =
      RenderGainTableText(table, c.label_a, c.label_b, static_cast<size_t>(c.top));
  out << text;
  WriteReport(c, GainTableToJson(table), text);
  return kExitOk;
}

int RunAnalyzePunct(const RunConfig& c, std::ostream& out) {
  const Corpus ref = LoadCorpus(c.ref, c);
  std::optional<Predictions> hyp;
  if (!c.hyp.empty()) hyp = LoadPredictions(c.hyp, ref);
  const Predictions* hp = hyp ? &*hyp : nullptr;
  const FinalPunctuationTable final_table = PunctuationByAct(ref, hp);
  const MidPunctuationCounts ground = MidSegmentPunctuation(ref, nullptr);
  std::string text = RenderFinalPunctuationText(final_table) + "\n";
  ordered_json body;
  body["final"] = FinalPunctuationToJson(final_table);
  body["mid"]["ground_truth"] = MidPunctuationToJson(ground);
  TextTable mid({"Segmentation", "Full stop", "Comma", "Q. mark", "Segments"});
  mid.AddRow({"ground truth", std::to_string(ground.full_stop),
              std::to_string(ground.comma), std::to_string(ground.question),
              std::to_string(ground.segments)});
  if (hp) {
    const MidPunctuationCounts predicted = MidSegmentPunctuation(ref, hp);
    body["mid"]["hypothesis"] = MidPunctuationToJson(predicted);
    mid.AddRow({hp->producer.empty() ? "hypothesis" : hp->producer,
                std::to_string(predicted.full_stop),
                std::to_string(predicted.comma),
                std::to_string(predicted.question),
                std::to_string(predicted.segments)});
  }
  text += mid.Render();
  out << text;
  WriteReport(c, std::move(body), text);
  return kExitOk;
}

}  // namespace

nlohmann::ordered_json RunConfigToJson(const RunConfig& c) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  j["corpus"] = c.corpus;
  j["labelset"] = c.labelset;
  j["variant"] = c.variant;
  j["input"] = c.input;
  j["output"] = c.output;
  j["output_dir"] = c.output_dir;
  j["split_manifest"] = c.split_manifest;
  j["ref"] = c.ref;
  j["hyp"] = c.hyp;
  j["hyp_a"] = c.hyp_a;
  j["hyp_b"] = c.hyp_b;
  j["train"] = c.train;
  j["dev"] = c.dev;
  j["model"] = c.model;
  j["dialog"] = c.dialog;
  j["tokenizer"] = c.tokenizer;
  j["rate"] = c.rate;
  j["unit"] = c.unit;
  j["window_size"] = c.window_size;
  j["seed"] = c.seed;
  j["epochs"] = c.epochs;
  j["min_count"] = c.min_count;
  j["top"] = c.top;
  j["averaging"] = !c.no_averaging;
  return j;
}

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  RunConfig c;
  CLI::App app{"Dialog act segmentation toolkit", "daseg"};
  app.require_subcommand(1, 1);

  auto flavor = [&](CLI::App* sub) {
    sub->add_option("--corpus", c.corpus, "Corpus flavor")
        ->check(CLI::IsMember({"swda", "mrda"}));
    sub->add_option("--labelset", c.labelset,
                    "Label set: 42|1 (swda), basic|general|full|1 (mrda)")
        ->check(CLI::IsMember({"42", "basic", "general", "full", "1"}));
  };
  auto report = [&](CLI::App* sub) {
    sub->add_option("--report", c.report,
                    "Machine-readable report path (a .txt twin is written too)");
  };

  auto* import = app.add_subcommand("import", "Import a native distribution");
  flavor(import);
  import->add_option("--variant", c.variant)->check(CLI::IsMember({"lower", "nolower"}));
  import->add_option("--input", c.input, "Distribution root")->required();
  import->add_option("--output-dir", c.output_dir)->required();
  import->add_option("--split-manifest", c.split_manifest);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  flavor(stats);
  stats->add_option("--input", c.input)->required();
  report(stats);

  auto* encode = app.add_subcommand("encode", "Preview serialization and coding");
  flavor(encode);
  encode->add_option("--input", c.input)->required();
  encode->add_option("--dialog", c.dialog);
  encode->add_option("--window-size", c.window_size)->check(CLI::PositiveNumber);
  encode->add_option("--tokenizer", c.tokenizer)
      ->check(CLI::IsMember({"whitespace", "test"}));
  report(encode);

  auto* train = app.add_subcommand("train", "Train the baseline tagger");
  flavor(train);
  train->add_option("--train", c.train)->required();
  train->add_option("--dev", c.dev)->required();
  train->add_option("--model", c.model)->required();
  train->add_option("--epochs", c.epochs)->check(CLI::PositiveNumber);
  train->add_option("--seed", c.seed);
  train->add_option("--unit", c.unit)->check(CLI::IsMember({"turn", "dialog"}));
  train->add_flag("--no-averaging", c.no_averaging);
  report(train);

  auto* predict = app.add_subcommand("predict", "Label a corpus with a model");
  flavor(predict);
  predict->add_option("--model", c.model)->required();
  predict->add_option("--input", c.input)->required();
  predict->add_option("--output", c.output)->required();
  predict->add_option("--unit", c.unit)->check(CLI::IsMember({"turn", "dialog"}));

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  flavor(evaluate);
  evaluate->add_option("--ref", c.ref)->required();
  evaluate->add_option("--hyp", c.hyp)->required();
  report(evaluate);

  auto* validate = app.add_subcommand("validate", "Check predictions against a corpus");
  flavor(validate);
  validate->add_option("--ref", c.ref)->required();
  validate->add_option("--hyp", c.hyp)->required();

  auto* compare = app.add_subcommand("compare", "Per-act gain table of two models");
  flavor(compare);
  compare->add_option("--ref", c.ref)->required();
  compare->add_option("--hyp-a", c.hyp_a)->required();
  compare->add_option("--hyp-b", c.hyp_b)->required();
  compare->add_option("--rate", c.rate)->check(CLI::IsMember({"DSER", "DER"}));
  compare->add_option("--min-count", c.min_count)->check(CLI::NonNegativeNumber);
  compare->add_option("--top", c.top, "Rows shown in the text table (0 = all)")
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--label-a", c.label_a);
  compare->add_option("--label-b", c.label_b);
  report(compare);

  auto* punct = app.add_subcommand("analyze-punct", "Punctuation vs act tables");
  flavor(punct);
  punct->add_option("--ref", c.ref)->required();
  punct->add_option("--hyp", c.hyp);
  report(punct);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsageError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  c.subcommand = sub->get_name();
  try {
    GranularityFor(c);
    if (c.subcommand == "import") return RunImport(c, out);
    if (c.subcommand == "stats") return RunStats(c, out);
    if (c.subcommand == "encode") return RunEncode(c, out);
    if (c.subcommand == "train") return RunTrain(c, out);
    if (c.subcommand == "predict") return RunPredict(c, out);
    if (c.subcommand == "evaluate") return RunEvaluate(c, out);
    if (c.subcommand == "validate") return RunValidate(c, out);
    if (c.subcommand == "compare") return RunCompare(c, out);
    if (c.subcommand == "analyze-punct") return RunAnalyzePunct(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << sub->help();
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace daseg
