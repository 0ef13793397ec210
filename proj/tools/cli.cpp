#include "cli.hpp"

#include <fstream>
#include <iostream>

#include "abdirac/errors.hpp"
#include "abdirac/version.hpp"

namespace cli {

Output::Output(const std::string& path) : os_(&std::cout) {
  if (path != "-") {
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw abdirac::UsageError("cannot open output file '" + path + "'");
    os_ = f.get();
    file_ = std::move(f);
  }
}

json envelope(const std::string& command, const json& cfg) {
  return json{{"program", "abdirac"}, {"version", abdirac::kVersion}, {"command", command}, {"config", cfg}};
}

void csv_preamble(abdirac::CsvWriter& w, const std::string& command, const json& cfg) {
  w.comment(std::string("program abdirac version ") + abdirac::kVersion + " command " + command);
  w.comment("config " + cfg.dump());
}

abdirac::GridSpec grid_from(const json& cfg, const std::string& prefix) {
  abdirac::GridSpec g;
  g.r_max = cfg.at(prefix + "rmax").get<double>();
  g.n_r = cfg.at(prefix + "nr").get<int>();
  g.e_max = cfg.at(prefix + "emax").get<double>();
  g.n_e = cfg.at(prefix + "ne").get<int>();
  return g;
}

}  // namespace cli
