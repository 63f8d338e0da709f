#pragma once

// Experiment commands behind the `eplt` executable. Each command takes a
// JSON config and returns tables plus a pass/fail verdict.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "eplt/serialize.hpp"

namespace eplt::cli {

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CommandReport {
  std::string command;
  bool passed = true;
  std::vector<Table> tables;
  Json summary = Json::object();
};

CommandReport cmd_thermal(const Json& config);
CommandReport cmd_eplt_verify(const Json& config);
CommandReport cmd_race(const Json& config);
CommandReport cmd_dilation(const Json& config);
CommandReport cmd_twirl_sample(const Json& config);

/// 12 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);

/// First line is a "# " header carrying `timestamp`; tables follow, each
/// introduced by a "# table: <name>" line.
std::string render_csv(const CommandReport& report, const std::string& timestamp);
Json render_json(const CommandReport& report, const std::string& timestamp);

/// Exit status: 0 when every certification passed, 1 when one failed, 2 for
/// usage or configuration errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eplt::cli
