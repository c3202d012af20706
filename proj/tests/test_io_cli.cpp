#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "xxzdm/cli.hpp"
#include "xxzdm/io.hpp"

using namespace xxzdm;

namespace {

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args)
{
  std::ostringstream out, err;
  CliRun run;
  run.status = run_cli(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

// header and first data row of a CSV document
std::pair<std::vector<std::string>, std::vector<std::string>> first_row(const std::string& doc)
{
  std::istringstream is(doc);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    if (line.rfind("#", 0) == 0)
      continue;
    if (header.empty()) {
      header = split_csv_line(line);
      continue;
    }
    return {header, split_csv_line(line)};
  }
  return {header, {}};
}

Real cell_value(const std::pair<std::vector<std::string>, std::vector<std::string>>& row,
                const std::string& column)
{
  for (std::size_t i = 0; i < row.first.size(); ++i)
    if (row.first[i] == column)
      return std::stod(row.second[i]);
  REQUIRE(false);
  return 0;
}

} // namespace

TEST_CASE("format_real emits shortest round-trip decimals")
{
  CHECK(format_real(3.0) == "3");
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.02) == "0.02");
  CHECK(format_real(std::sqrt(0.21)) == "0.458257569495584");
  CHECK(format_real(-1.5) == "-1.5");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(std::stod(format_real(M_PI)) == M_PI);
}

TEST_CASE("csv writer layout")
{
  SweepTable t;
  t.meta = {{"tool", "xxzdm"}, {"note", "demo"}};
  t.columns = {"x", "y"};
  t.rows = {{0.5, 1.0}, {1.5, std::nan("")}};
  t.flags = {"", "DegenerateLevel"};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() ==
        "# tool: xxzdm\n# note: demo\nx,y,flag\n0.5,1,\n1.5,nan,DegenerateLevel\n");
}

TEST_CASE("json writer emits null for nan and omits empty flags")
{
  SweepTable t;
  t.meta = {{"tool", "xxzdm"}};
  t.columns = {"x"};
  t.rows = {{0.25}, {std::nan("")}};
  t.flags = {"", "NumericalFailure"};
  std::ostringstream os;
  write_json(os, t);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc["meta"]["tool"] == "xxzdm");
  CHECK(doc["rows"][0]["x"] == 0.25);
  CHECK(doc["rows"][0].contains("flag") == false);
  CHECK(doc["rows"][1]["x"].is_null());
  CHECK(doc["rows"][1]["flag"] == "NumericalFailure");
}

TEST_CASE("spectrum subcommand reproduces the zero-field levels")
{
  const CliRun run = cli({"spectrum", "--j", "1", "--jz", "1", "--d", "0", "--b", "0", "--theta",
                          "0.7853981633974483"});
  REQUIRE(run.status == 0);
  const auto row = first_row(run.out);
  CHECK(cell_value(row, "e0") == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(cell_value(row, "e1") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cell_value(row, "e2") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cell_value(row, "e3") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("critical subcommand emits the closed-form value in json")
{
  const CliRun run = cli({"critical", "--j", "1", "--jz", "1.1", "--format", "json"});
  REQUIRE(run.status == 0);
  const auto doc = nlohmann::json::parse(run.out);
  CHECK(std::abs(doc["rows"][0]["critical_d"].get<double>() - std::sqrt(0.21)) <= 1e-15);

  const CliRun none = cli({"critical", "--j", "1", "--jz", "0.9", "--format", "json"});
  REQUIRE(none.status == 0);
  CHECK(nlohmann::json::parse(none.out)["rows"][0]["critical_d"].is_null());
}

TEST_CASE("berry subcommand vanishes on the equator")
{
  const CliRun run = cli({"berry", "--j", "1", "--jz", "1.1", "--d", "0.5", "--b", "1", "--theta",
                          "1.5707963267948966", "--level", "0", "--method", "closed"});
  REQUIRE(run.status == 0);
  const auto row = first_row(run.out);
  CHECK(std::abs(cell_value(row, "phase")) <= 1e-8);
}

TEST_CASE("the three berry methods agree through the cli")
{
  const std::vector<std::string> base{"berry", "--j",     "1",   "--jz",    "1.1",
                                      "--d",   "0.5",     "--b", "1",       "--theta",
                                      "0.7853981633974483", "--level", "0"};
  auto with_method = [&base](std::initializer_list<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra);
    return cli(args);
  };
  const CliRun closed = with_method({"--method", "closed"});
  const CliRun wilson = with_method({"--method", "wilson", "--grid", "512"});
  const CliRun adiabatic =
      with_method({"--method", "adiabatic", "--period", "500", "--steps", "100000"});
  REQUIRE(closed.status == 0);
  REQUIRE(wilson.status == 0);
  REQUIRE(adiabatic.status == 0);
  const Real closed_phase = cell_value(first_row(closed.out), "phase");
  const Real wilson_phase = cell_value(first_row(wilson.out), "phase");
  const Real adiabatic_phase = cell_value(first_row(adiabatic.out), "phase");
  CHECK(phase_distance(closed_phase, wilson_phase) <= 1e-4);
  CHECK(phase_distance(closed_phase, adiabatic_phase) <= 0.1);
  CHECK(cell_value(first_row(adiabatic.out), "warning") == 0);
}

TEST_CASE("eigenstate subcommand emits a normalized state")
{
  const CliRun run = cli({"eigenstate", "--j", "1", "--jz", "1.1", "--d", "0.5", "--b", "1",
                          "--theta", "0.7853981633974483", "--phi", "0.4", "--level", "1"});
  REQUIRE(run.status == 0);
  const auto row = first_row(run.out);
  Real norm = 0;
  for (const std::string& basis : {"11", "10", "01", "00"}) {
    const Real re = cell_value(row, "re_" + basis);
    const Real im = cell_value(row, "im_" + basis);
    norm += re * re + im * im;
  }
  CHECK(std::abs(norm - 1) <= 1e-10);
  CHECK(run.out.find("# gauge: paper") != std::string::npos);
}

TEST_CASE("theta-pi flag mirrors theta in radians")
{
  const CliRun pi_units = cli({"berry", "--j", "1", "--jz", "1.1", "--d", "0.5", "--b", "1",
                               "--theta-pi", "0.5", "--level", "0", "--method", "closed"});
  const CliRun radians = cli({"berry", "--j", "1", "--jz", "1.1", "--d", "0.5", "--b", "1",
                              "--theta", format_real(M_PI / 2), "--level", "0", "--method",
                              "closed"});
  REQUIRE(pi_units.status == 0);
  REQUIRE(radians.status == 0);
  CHECK(cell_value(first_row(pi_units.out), "phase") ==
        cell_value(first_row(radians.out), "phase"));
}

TEST_CASE("usage errors exit with status 2")
{
  CHECK(cli({"spectrum", "--bogus", "1"}).status == 2);
  CHECK(cli({"spectrum", "--j", "1", "--theta", "4"}).status == 2);
  CHECK(cli({"spectrum", "--b", "-1"}).status == 2);
  CHECK(cli({"berry", "--method", "nonsense"}).status == 2);
  CHECK(cli({"berry", "--level", "7"}).status == 2);
  CHECK(cli({"scan", "--axis", "d"}).status == 2);
  CHECK(cli({"scan", "--axis", "q", "--range", "0:1:5"}).status == 2);
  CHECK(cli({"scan", "--axis", "d", "--range", "0:1"}).status == 2);
  CHECK(cli({"scan", "--figure", "9"}).status == 2);
  CHECK(cli({"scan", "--figure", "1", "--d", "0.3"}).status == 2);
  CHECK(cli({"spectrum", "--theta", "1", "--theta-pi", "0.5"}).status == 2);
  CHECK(cli({}).status == 2);
  const CliRun run = cli({"spectrum", "--b", "-2"});
  CHECK(run.err.find("error:") != std::string::npos);
  CHECK(run.out.empty());
}

TEST_CASE("numerical failures exit with status 1 and name the error")
{
  const CliRun run = cli({"berry", "--j", "1", "--jz", "1", "--d", "0", "--b", "0", "--theta",
                          "0.7853981633974483", "--level", "1", "--method", "closed"});
  CHECK(run.status == 1);
  CHECK(run.err.find("DegenerateLevel") != std::string::npos);
}

TEST_CASE("documents reproduce byte-for-byte from their meta command")
{
  const std::vector<std::vector<std::string>> commands{
      {"spectrum", "--j", "1", "--jz", "1.1", "--d", "0.3", "--b", "0.7", "--theta", "0.9"},
      {"critical", "--j", "1", "--jz", "1.1", "--format", "json"},
      {"berry", "--j", "1", "--jz", "1.1", "--d", "0.5", "--b", "1", "--theta", "0.5", "--level",
       "2", "--method", "wilson", "--grid", "128"},
      {"scan", "--j", "1", "--jz", "1.1", "--d", "0", "--b", "1", "--theta", "0.9", "--axis", "d",
       "--range", "0:1:11", "--method", "closed"},
  };
  for (const auto& args : commands) {
    const CliRun original = cli(args);
    REQUIRE(original.status == 0);

    std::string command_line;
    std::istringstream is(original.out);
    std::string line;
    while (std::getline(is, line)) {
      const std::string csv_key = "# command: ";
      if (line.rfind(csv_key, 0) == 0) {
        command_line = line.substr(csv_key.size());
        break;
      }
      const std::string json_key = "    \"command\": \"";
      if (line.rfind(json_key, 0) == 0) {
        command_line = line.substr(json_key.size(), line.size() - json_key.size() - 2);
        break;
      }
    }
    REQUIRE(!command_line.empty());

    std::vector<std::string> replay;
    std::istringstream tokens(command_line);
    std::string token;
    while (tokens >> token)
      replay.push_back(token);
    REQUIRE(replay.front() == "xxzdm");
    replay.erase(replay.begin());

    const CliRun rerun = cli(replay);
    REQUIRE(rerun.status == 0);
    CHECK(rerun.out == original.out);
  }
}

TEST_CASE("scan documents are identical across thread counts")
{
  const std::vector<std::string> base{"scan", "--j",     "1",      "--jz",  "1.1",  "--d", "0",
                                      "--b",  "1",       "--theta", "0.9",  "--axis", "d",
                                      "--range", "0:1:41", "--method", "closed"};
  auto with_threads = [&base](const std::string& n) {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--threads", n});
    return cli(args).out;
  };
  const std::string serial = with_threads("1");
  CHECK(with_threads("3") == serial);
}

TEST_CASE("out flag writes the document to a file")
{
  const std::string path = "cli_out_test.csv";
  const CliRun run = cli({"critical", "--j", "1", "--jz", "1.1", "--out", path});
  REQUIRE(run.status == 0);
  CHECK(run.out.empty());
  std::ifstream file(path);
  REQUIRE(file.good());
  std::stringstream content;
  content << file.rdbuf();
  CHECK(content.str().find("critical_d") != std::string::npos);
  const auto row = first_row(content.str());
  CHECK(std::abs(cell_value(row, "critical_d") - std::sqrt(0.21)) <= 1e-15);
  file.close();
  std::remove(path.c_str());
}

TEST_CASE("figure presets produce tables of the expected shape")
{
  const CliRun fig5 = cli({"scan", "--figure", "5"});
  REQUIRE(fig5.status == 0);
  const auto row = first_row(fig5.out);
  CHECK(cell_value(row, "d") == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(std::count(fig5.out.begin(), fig5.out.end(), '\n') > 201);
  for (const std::string& column : {"e0", "e3", "min_gap", "branch0", "branch3"}) {
    CAPTURE(column);
    CHECK(std::find(row.first.begin(), row.first.end(), column) != row.first.end());
  }
}
