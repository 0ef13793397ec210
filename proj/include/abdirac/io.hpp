#pragma once

// JSON and CSV serialisation of grids, fields, trajectories and sweeps.

#include <iosfwd>
#include <string>
#include <vector>

#include "abdirac/estimates.hpp"
#include "abdirac/partialwave.hpp"
#include "abdirac/propagator.hpp"

namespace abdirac {

json to_json(const RadialGrid& g);
json to_json(const EnergyGrid& g);
RadialGrid radial_grid_from_json(const json& j);

// Complex arrays are written as [[re, im], ...].
json to_json(const cvec& v);
cvec cvec_from_json(const json& j);

json to_json(const RadialSpinor& s);
RadialSpinor radial_spinor_from_json(const json& j);

json to_json(const ChannelSet& c);
ChannelSet channel_set_from_json(const json& j);

json to_json(const SpinorField& f);

json to_json(const NormRecord& n);

// Times, channel norms per snapshot and, when with_states is set, the
// snapshots themselves.
json to_json(const Trajectory& t, bool with_states);

// Writes JSON with a fixed indentation and a trailing newline.
void write_json(std::ostream& os, const json& j);

// CSV with '#'-prefixed preamble lines, a header row and numbers in
// scientific notation with 15 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> columns);
  void comment(const std::string& line);
  void header();
  // Cells are either numbers or strings; strings must not contain commas.
  void row(const std::vector<json>& cells);

 private:
  std::ostream& os_;
  std::vector<std::string> columns_;
};

std::string format_number(double x);

}  // namespace abdirac
