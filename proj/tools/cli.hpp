#pragma once

// Command table, parameter resolution (flag > config file > default) and
// output plumbing shared by the subcommands.

#include <CLI11.hpp>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "abdirac/io.hpp"

namespace cli {

using abdirac::json;

enum class Kind { real, integer, seed, real_list, int_list, text, choice, boolean };

struct Param {
  std::string name;  // flag without dashes; also the config-file key
  Kind kind;
  json def;
  std::string help;
  std::vector<std::string> choices{};
};

// Where results go: a file or stdout.
class Output {
 public:
  explicit Output(const std::string& path);
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ostream> file_;
  std::ostream* os_;
};

struct Command {
  std::string name;
  std::string summary;
  std::string footer;  // documents outputs and columns
  std::vector<Param> params;
  // Receives the resolved configuration; returns the exit code.
  std::function<int(const json& cfg, Output& out)> run;
};

std::vector<Command> commands();

// Common preamble of every output document.
json envelope(const std::string& command, const json& cfg);

// Preamble lines for CSV output.
void csv_preamble(abdirac::CsvWriter& w, const std::string& command, const json& cfg);

abdirac::GridSpec grid_from(const json& cfg, const std::string& prefix = "");

}  // namespace cli
