#ifndef DASEG_CLI_H_
#define DASEG_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace daseg {

// Everything a subcommand was invoked with; embedded in every report.
struct RunConfig {
  std::string subcommand;
  std::string corpus = "swda";    // swda | mrda
  std::string labelset;           // 42 | basic | general | full | 1
  std::string variant = "nolower";
  std::string input;
  std::string output;
  std::string output_dir;
  std::string split_manifest;
  std::string ref;
  std::string hyp;
  std::string hyp_a;
  std::string hyp_b;
  std::string train;
  std::string dev;
  std::string model;
  std::string report;
  std::string dialog;
  std::string tokenizer = "whitespace";
  std::string label_a = "a";
  std::string label_b = "b";
  std::string rate = "DSER";
  std::string unit = "dialog";
  int window_size = 512;
  uint64_t seed = 42;
  int epochs = 10;
  int64_t min_count = 10;
  int top = 0;
  bool no_averaging = false;
};

nlohmann::ordered_json RunConfigToJson(const RunConfig& config);

enum ExitCode { kExitOk = 0, kExitDomainError = 1, kExitUsageError = 2 };

// Parses args (args[0] is the program name) and runs one subcommand.
int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace daseg

#endif  // DASEG_CLI_H_
