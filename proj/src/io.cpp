#include "abdirac/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "abdirac/errors.hpp"

namespace abdirac {

namespace {

template <class G>
json grid_json(const G& g) {
  return json{{"extent", g.extent()}, {"n", g.size()}, {"scheme", to_string(g.scheme())}};
}

}  // namespace

json to_json(const RadialGrid& g) { return grid_json(g); }
json to_json(const EnergyGrid& g) { return grid_json(g); }

RadialGrid radial_grid_from_json(const json& j) {
  try {
    return make_radial_grid(j.at("extent").get<double>(), j.at("n").get<int>(),
                            scheme_from_string(j.at("scheme").get<std::string>()));
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("radial grid JSON: ") + e.what());
  }
}

json to_json(const cvec& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(json::array({z.real(), z.imag()}));
  return a;
}

cvec cvec_from_json(const json& j) {
  if (!j.is_array()) throw InvalidParameter("complex array JSON: expected an array");
  cvec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (e.is_number())
      v.emplace_back(e.get<double>(), 0.0);
    else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
      v.emplace_back(e[0].get<double>(), e[1].get<double>());
    else
      throw InvalidParameter("complex array JSON: entries must be numbers or [re, im]");
  }
  return v;
}

json to_json(const RadialSpinor& s) {
  return json{{"grid", to_json(s.grid())}, {"f", to_json(s.f())}, {"g", to_json(s.g())}};
}

RadialSpinor radial_spinor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("f") || !j.contains("g"))
    throw InvalidParameter("spinor JSON: needs grid, f and g");
  return RadialSpinor(radial_grid_from_json(j["grid"]), cvec_from_json(j["f"]), cvec_from_json(j["g"]));
}

json to_json(const ChannelSet& c) {
  json ch = json::object();
  for (const auto& [l, s] : c) ch[std::to_string(l)] = json{{"f", to_json(s.f())}, {"g", to_json(s.g())}};
  return json{{"grid", to_json(c.grid())}, {"l_min", c.l_min()}, {"l_max", c.l_max()}, {"channels", ch}};
}

ChannelSet channel_set_from_json(const json& j) {
  try {
    const RadialGrid g = radial_grid_from_json(j.at("grid"));
    ChannelSet set(g, j.at("l_min").get<int>(), j.at("l_max").get<int>());
    for (const auto& [key, v] : j.at("channels").items())
      set.set(std::stoi(key), RadialSpinor(g, cvec_from_json(v.at("f")), cvec_from_json(v.at("g"))));
    return set;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("channel set JSON: ") + e.what());
  }
}

json to_json(const SpinorField& f) {
  return json{{"grid", to_json(f.grid())}, {"angular_count", f.angular_count()},
              {"phi1", to_json(f.phi1())}, {"phi2", to_json(f.phi2())}};
}

json to_json(const NormRecord& n) {
  return json{{"kind", to_string(n.kind)}, {"weight", n.weight}, {"q", n.q},
              {"window", {n.t_begin, n.t_end}}, {"value", n.value}};
}

json to_json(const Trajectory& t, bool with_states) {
  json snaps = json::array();
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    json s{{"t", t.times[i]}, {"norm", l2_norm(t.states[i])}};
    if (with_states) s["state"] = to_json(t.states[i]);
    snaps.push_back(std::move(s));
  }
  return json{{"alpha", t.alpha}, {"times", t.times}, {"snapshots", snaps}};
}

void write_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> columns) : os_(os), columns_(std::move(columns)) {}

void CsvWriter::comment(const std::string& line) { os_ << "# " << line << '\n'; }

void CsvWriter::header() {
  for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<json>& cells) {
  if (cells.size() != columns_.size()) throw InvalidParameter("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    const json& c = cells[i];
    if (c.is_number_float())
      os_ << format_number(c.get<double>());
    else if (c.is_number_integer())
      os_ << c.get<long long>();
    else if (c.is_boolean())
      os_ << (c.get<bool>() ? "true" : "false");
    else if (c.is_null())
      os_ << "nan";
    else
      os_ << c.get<std::string>();
  }
  os_ << '\n';
}

}  // namespace abdirac
