#include "doctest.h"

#include <filesystem>

#include "cyclegame/errors.hpp"
#include "cyclegame/io.hpp"

using namespace cyclegame;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cyclegame_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t error_line(const std::string& text) {
  try {
    io::parse_session_csv(text, 4.0);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678, 0.0}) {
    CHECK(std::stod(io::format_number(v)) == doctest::Approx(v).epsilon(1e-14));
  }
  CHECK(io::format_number(4.0) == "4");
}

TEST_CASE("trajectory csv round trip with sidecar") {
  const GameSpec g = make_game(4);
  const Trajectory t = integrate(DynamicsModel::replicator(), g, SimplexState(0.4, 0.3, 0.2, 0.1), 0.05, 40);
  const fs::path p = scratch("traj.csv");
  io::write_trajectory(p, t);
  const std::string text = io::read_text(p);
  CHECK(text.rfind("# schema=cyclegame.trajectory/1\n", 0) == 0);
  const TimeSeries back = io::read_trajectory(p);
  REQUIRE(back.size() == t.size());
  CHECK(back.dt == doctest::Approx(0.05));
  for (std::size_t i = 0; i < back.size(); ++i) CHECK((back.samples[i] - t.samples()[i]).norm() < 1e-14);
  const auto meta = nlohmann::json::parse(io::read_text(fs::path(p).replace_extension(".json")));
  CHECK(meta["a"] == 4.0);
  CHECK(meta["source"] == "ode");
}

TEST_CASE("trajectory parse errors carry line numbers") {
  const std::string bad = "t,x1,x2,x3,x4\n0,0.25,0.25,0.25,0.25\n1,0.25,oops,0.25,0.25\n";
  try {
    io::parse_trajectory_csv(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(io::parse_trajectory_csv("a,b\n"), ValidationError);
  CHECK_THROWS_AS(io::read_text(scratch("does_not_exist.csv")), ValidationError);
}

TEST_CASE("session csv round trip") {
  SessionConfig c;
  c.periods = 50;
  c.seed = 3;
  const std::vector<SessionRecord> records{simulate_session(make_game(4), c, "one"),
                                           simulate_session(make_game(4), c, "two")};
  const std::string text = io::session_csv(records);
  CHECK(text.find("# a=4\n") != std::string::npos);
  const auto back = io::parse_session_csv(text, std::nan(""));
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].session_id == records[i].session_id);
    CHECK(back[i].periods == records[i].periods);
    CHECK(back[i].population_size == 6);
    CHECK(back[i].a == 4.0);
  }
  CHECK(io::session_csv(back) == text);
}

TEST_CASE("session csv validation") {
  const std::string header = "session_id,period,n1,n2,n3,n4\n";
  CHECK(error_line(header + "s,1,1,2,3,0\ns,2,1,1,1,2\n") == 3);
  CHECK(error_line(header + "s,1,1,2,3,0\ns,1,1,2,3,0\n") == 3);
  CHECK(error_line(header + "s,1,1,2,3\n") == 2);
  CHECK(error_line(header + "s,1,1,-2,3,4\n") == 2);
  CHECK(error_line(header + "s,x,1,2,3,0\n") == 2);
  CHECK(error_line("# a=4\nsession,period\n") == 2);
  CHECK_THROWS_AS(io::parse_session_csv(header + "s,1,1,2,3,0\n", std::nan("")), ValidationError);
  CHECK(io::parse_session_csv(header + "s,1,1,2,3,0\n", 0.25).front().a == 0.25);
}

TEST_CASE("report csv round trip") {
  std::vector<io::ReportRow> rows{{"T1", 0.25, {1, 2, 3, 4, 5, 6}, {{7, 8, 9}}, 0},
                                  {"E:s1", 4, {-1e-5, 2e-7, 0, 0, 0, 1}, {{0, 0, 1}}, 1000}};
  const auto back = io::parse_report_csv(io::report_csv(rows));
  REQUIRE(back.size() == 2);
  CHECK(back[1].source == "E:s1");
  CHECK(back[1].values[1] == 2e-7);
  CHECK(back[1].n_samples == 1000);
  CHECK(back[0].axis[2] == 9.0);
  rows[0].source = "a,b";
  CHECK_THROWS_AS(io::report_csv(rows), ValidationError);
}

TEST_CASE("eigencycle csv and json payloads") {
  const auto th = theory_eigencycles(DynamicsModel::replicator(), make_game(4));
  const std::string csv = io::eigencycle_csv({{4.0, th.raw}});
  CHECK(csv.find("a,s12,s13,s14,s23,s24,s34\n") != std::string::npos);
  const auto spec = io::spectrum_json(th.spectrum);
  CHECK(spec["eigenvalues"].size() == 4);
  CHECK(spec[io::kJsonSchemaKey].is_string());
  const auto ell = io::ellipses_json(lissajous_geometry(th.mode, 16), 4.0);
  CHECK(ell["subspaces"].size() == 6);
}

TEST_CASE("key value parsing") {
  const auto kv = io::parse_key_values("# comment\na = 0.25, 4\n\nseed=7\n");
  CHECK(kv.at("a") == "0.25, 4");
  CHECK(kv.at("seed") == "7");
  try {
    io::parse_key_values("a=1\nbroken\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}
