#include <fstream>
#include <iostream>
#include <sstream>

#include "abdirac/errors.hpp"
#include "abdirac/version.hpp"
#include "cli.hpp"

using abdirac::json;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

double to_real(const std::string& name, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw abdirac::UsageError("--" + name + ": not a number: '" + s + "'");
  }
  if (pos != s.size()) throw abdirac::UsageError("--" + name + ": not a number: '" + s + "'");
  return v;
}

long long to_int(const std::string& name, const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw abdirac::UsageError("--" + name + ": not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw abdirac::UsageError("--" + name + ": not an integer: '" + s + "'");
  return v;
}

// Value given on the command line.
json from_flag(const cli::Param& p, const std::string& raw) {
  switch (p.kind) {
    case cli::Kind::real: return to_real(p.name, raw);
    case cli::Kind::integer: return to_int(p.name, raw);
    case cli::Kind::seed: {
      const long long v = to_int(p.name, raw);
      if (v < 0) throw abdirac::UsageError("--" + p.name + ": must be nonnegative");
      return static_cast<std::uint64_t>(v);
    }
    case cli::Kind::real_list: {
      json a = json::array();
      for (const auto& s : split(raw)) a.push_back(to_real(p.name, s));
      return a;
    }
    case cli::Kind::int_list: {
      json a = json::array();
      for (const auto& s : split(raw)) a.push_back(to_int(p.name, s));
      return a;
    }
    case cli::Kind::boolean:
      if (raw == "true" || raw == "1") return true;
      if (raw == "false" || raw == "0") return false;
      throw abdirac::UsageError("--" + p.name + ": expected true or false");
    case cli::Kind::text:
    case cli::Kind::choice: return raw;
  }
  return raw;
}

// Value taken from the config file; checked against the parameter kind.
json from_config(const cli::Param& p, const json& v) {
  auto bad = [&] { return abdirac::UsageError("config key '" + p.name + "': wrong type"); };
  switch (p.kind) {
    case cli::Kind::real:
      if (!v.is_number()) throw bad();
      return v.get<double>();
    case cli::Kind::integer:
      if (!v.is_number_integer()) throw bad();
      return v.get<long long>();
    case cli::Kind::seed:
      if (!v.is_number_unsigned()) throw bad();
      return v.get<std::uint64_t>();
    case cli::Kind::real_list: {
      json a = json::array();
      const json items = v.is_array() ? v : json::array({v});
      for (const auto& e : items) {
        if (!e.is_number()) throw bad();
        a.push_back(e.get<double>());
      }
      return a;
    }
    case cli::Kind::int_list: {
      json a = json::array();
      const json items = v.is_array() ? v : json::array({v});
      for (const auto& e : items) {
        if (!e.is_number_integer()) throw bad();
        a.push_back(e.get<long long>());
      }
      return a;
    }
    case cli::Kind::boolean:
      if (!v.is_boolean()) throw bad();
      return v;
    case cli::Kind::text:
    case cli::Kind::choice:
      if (!v.is_string()) throw bad();
      return v;
  }
  return v;
}

std::string describe_default(const json& d) {
  if (d.is_string()) return d.get<std::string>();
  if (d.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + d[i].dump();
    return s;
  }
  return d.dump();
}

json resolve(const cli::Command& cmd, const std::map<std::string, std::string>& raw,
             const std::map<std::string, CLI::Option*>& opts, const std::string& config_path) {
  json file = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw abdirac::UsageError("cannot open config file '" + config_path + "'");
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw abdirac::UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!file.is_object()) throw abdirac::UsageError("config file must hold a JSON object");
    for (const auto& [key, v] : file.items()) {
      (void)v;
      bool known = false;
      for (const auto& p : cmd.params) known = known || p.name == key;
      if (!known) throw abdirac::UsageError("config file: unknown key '" + key + "' for " + cmd.name);
    }
  }
  json cfg = json::object();
  for (const auto& p : cmd.params) {
    json v;
    if (opts.at(p.name)->count() > 0)
      v = from_flag(p, raw.at(p.name));
    else if (file.contains(p.name))
      v = from_config(p, file[p.name]);
    else
      v = p.def;
    if (p.kind == cli::Kind::choice) {
      const auto s = v.get<std::string>();
      if (std::find(p.choices.begin(), p.choices.end(), s) == p.choices.end())
        throw abdirac::UsageError("--" + p.name + ": invalid choice '" + s + "'");
    }
    if ((p.kind == cli::Kind::real_list || p.kind == cli::Kind::int_list) && v.empty())
      throw abdirac::UsageError("--" + p.name + ": list must not be empty");
    cfg[p.name] = v;
  }
  return cfg;
}

int failure(const std::string& command, const std::string& type, const std::string& message, int code) {
  json d{{"program", "abdirac"}, {"version", abdirac::kVersion}, {"command", command},
         {"error", type}, {"message", message}, {"exit_code", code}};
  std::cerr << d.dump(2) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral methods for the 2D massless Dirac operator with an Aharonov-Bohm field"};
  app.set_version_flag("--version", std::string("abdirac ") + abdirac::kVersion);
  app.require_subcommand(1);
  const auto table = cli::commands();
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  std::map<std::string, std::string> config_path, output_path;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : table) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.summary);
    sub->footer(cmd.footer);
    subs[cmd.name] = sub;
    sub->add_option("--config", config_path[cmd.name],
                    "JSON file with parameter values (keys are flag names); flags override it")
        ->type_name("PATH");
    output_path[cmd.name] = "-";
    sub->add_option("--output", output_path[cmd.name], "Output file, '-' for stdout (default: -)")->type_name("PATH");
    for (const auto& p : cmd.params) {
      std::string help = p.help + " (default: " + describe_default(p.def) + ")";
      if (!p.choices.empty()) {
        help += " [";
        for (std::size_t i = 0; i < p.choices.size(); ++i) help += (i ? "|" : "") + p.choices[i];
        help += "]";
      }
      static const std::map<cli::Kind, std::string> type_names{
          {cli::Kind::real, "REAL"},        {cli::Kind::integer, "INT"},   {cli::Kind::seed, "UINT"},
          {cli::Kind::real_list, "REAL,..."}, {cli::Kind::int_list, "INT,..."}, {cli::Kind::text, "TEXT"},
          {cli::Kind::choice, "CHOICE"},    {cli::Kind::boolean, "BOOL"}};
      opts[cmd.name][p.name] =
          sub->add_option("--" + p.name, raw[cmd.name][p.name], help)->type_name(type_names.at(p.kind));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& cmd : table) {
    if (!subs[cmd.name]->parsed()) continue;
    json cfg;
    try {
      cfg = resolve(cmd, raw[cmd.name], opts[cmd.name], config_path[cmd.name]);
    } catch (const abdirac::Error& e) {
      std::cerr << "abdirac " << cmd.name << ": " << e.what() << "\n";
      return 2;
    }
    try {
      cli::Output out(output_path[cmd.name]);
      return cmd.run(cfg, out);
    } catch (const abdirac::InvalidParameter& e) {
      std::cerr << "abdirac " << cmd.name << ": " << e.what() << "\n";
      return 2;
    } catch (const abdirac::RangeError& e) {
      std::cerr << "abdirac " << cmd.name << ": " << e.what() << "\n";
      return 2;
    } catch (const abdirac::Error& e) {
      return failure(cmd.name, "numerical", e.what(), 1);
    } catch (const std::exception& e) {
      return failure(cmd.name, "internal", e.what(), 1);
    }
  }
  return 2;
}
