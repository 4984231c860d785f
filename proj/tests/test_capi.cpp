#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "aqmsim/aqmsim.h"

namespace fs = std::filesystem;

namespace {

std::string emit(const aqmsim_scenario* s) {
  size_t needed = 0;
  REQUIRE(aqmsim_scenario_emit(s, nullptr, 0, &needed) == AQMSIM_OK);
  std::string text(needed, '\0');
  REQUIRE(aqmsim_scenario_emit(s, text.data(), text.size(), &needed) == AQMSIM_OK);
  text.resize(needed - 1);
  return text;
}

aqmsim_scenario* parse(const char* text) {
  aqmsim_scenario* s = nullptr;
  REQUIRE(aqmsim_scenario_parse(text, &s) == AQMSIM_OK);
  return s;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(AQMSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(aqmsim_version()) == "0.1.0");
  CHECK(std::string(aqmsim_status_name(AQMSIM_E_PARSE)) == "parse error");
}

TEST_CASE("null arguments are rejected") {
  aqmsim_scenario* s = nullptr;
  CHECK(aqmsim_scenario_parse(nullptr, &s) == AQMSIM_E_INVALID_ARG);
  CHECK(aqmsim_scenario_parse("discipline = red", nullptr) == AQMSIM_E_INVALID_ARG);
  CHECK(std::string(aqmsim_last_error()).size() > 0);
  CHECK(aqmsim_run(nullptr, nullptr) == AQMSIM_E_INVALID_ARG);
  aqmsim_scenario_free(nullptr);
  aqmsim_report_free(nullptr);
  aqmsim_sweep_free(nullptr);
}

TEST_CASE("parse errors and validation errors are distinguished") {
  aqmsim_scenario* s = nullptr;
  CHECK(aqmsim_scenario_parse("discipline = red\nmaxq_typo = 1\n", &s) == AQMSIM_E_PARSE);
  CHECK(s == nullptr);
  CHECK(std::string(aqmsim_last_error()).find("maxq_typo") != std::string::npos);
  CHECK(aqmsim_scenario_parse("udp.flows = 1\n", &s) == AQMSIM_E_PARSE);
  CHECK(aqmsim_scenario_parse(
            "discipline = red\ndiscipline.red.min_th = 100\ndiscipline.red.max_th = 50\n", &s) ==
        AQMSIM_E_VALIDATION);
  CHECK(std::string(aqmsim_last_error()).find("min_th < max_th required") != std::string::npos);
}

TEST_CASE("load reports missing files as I/O errors") {
  aqmsim_scenario* s = nullptr;
  CHECK(aqmsim_scenario_load("/nonexistent/dir/x.conf", &s) == AQMSIM_E_IO);
}

TEST_CASE("emit truncates safely and reports the needed size") {
  aqmsim_scenario* s = parse("discipline = choke\n");
  const std::string full = emit(s);
  CHECK(full.find("discipline = choke") != std::string::npos);
  char small[8];
  size_t needed = 0;
  CHECK(aqmsim_scenario_emit(s, small, sizeof small, &needed) == AQMSIM_OK);
  CHECK(needed == full.size() + 1);
  CHECK(std::string(small) == full.substr(0, 7));

  aqmsim_scenario* again = parse(full.c_str());
  CHECK(emit(again) == full);
  aqmsim_scenario_free(again);
  aqmsim_scenario_free(s);
}

TEST_CASE("set validates and leaves the scenario untouched on failure") {
  aqmsim_scenario* s = parse("discipline = red\n");
  const std::string before = emit(s);
  CHECK(aqmsim_scenario_set(s, "discipline.red.min_th", "120") == AQMSIM_E_VALIDATION);
  CHECK(aqmsim_scenario_set(s, "no.such.key", "1") == AQMSIM_E_PARSE);
  CHECK(aqmsim_scenario_set(s, "tcp.flows", "many") == AQMSIM_E_VALIDATION);
  CHECK(emit(s) == before);
  CHECK(aqmsim_scenario_set(s, "tcp.flows", "4") == AQMSIM_OK);
  CHECK(emit(s).find("tcp.flows = 4") != std::string::npos);
  aqmsim_scenario_free(s);
}

TEST_CASE("presets are enumerable") {
  const size_t n = aqmsim_preset_count();
  REQUIRE(n > 0);
  bool has_baseline = false;
  for (size_t i = 0; i < n; ++i) has_baseline |= std::string(aqmsim_preset_name(i)) == "baseline";
  CHECK(has_baseline);
  CHECK(aqmsim_preset_name(n) == nullptr);
  aqmsim_scenario* s = nullptr;
  CHECK(aqmsim_scenario_from_preset("nonexistent", &s) == AQMSIM_E_UNKNOWN_PRESET);
  CHECK(std::string(aqmsim_last_error()).find("baseline") != std::string::npos);
  REQUIRE(aqmsim_scenario_from_preset("table1-fred", &s) == AQMSIM_OK);
  CHECK(aqmsim_scenario_is_sweep(s) == 1);
  aqmsim_scenario_free(s);
}

TEST_CASE("run and inspect a report") {
  aqmsim_scenario* s = parse("discipline = fred\nduration_s = 10\nwarmup_s = 1\n");
  aqmsim_report* r = nullptr;
  REQUIRE(aqmsim_run(s, &r) == AQMSIM_OK);
  aqmsim_summary sum{};
  REQUIRE(aqmsim_report_summary(r, &sum) == AQMSIM_OK);
  CHECK(sum.utilization > 0.5);
  CHECK(sum.tcp_share + sum.udp_share == doctest::Approx(1.0));
  CHECK(sum.window_s == 9);
  CHECK(sum.buffer_packets == 150);
  REQUIRE(aqmsim_report_flow_count(r) == 11);
  aqmsim_flow_stats f{};
  REQUIRE(aqmsim_report_flow(r, 0, &f) == AQMSIM_OK);
  CHECK(f.kind == AQMSIM_FLOW_UDP);
  REQUIRE(aqmsim_report_flow(r, 10, &f) == AQMSIM_OK);
  CHECK(f.kind == AQMSIM_FLOW_TCP);
  CHECK(f.flow_id == 10);
  CHECK(aqmsim_report_flow(r, 11, &f) == AQMSIM_E_INVALID_ARG);

  const auto dir = fs::temp_directory_path() / "aqmsim_capi_run";
  fs::remove_all(dir);
  CHECK(aqmsim_report_write_csv(r, dir.c_str()) == AQMSIM_OK);
  CHECK(fs::exists(dir / "summary.csv"));
  // A regular file where a directory should be.
  CHECK(aqmsim_report_write_csv(r, (dir / "summary.csv" / "x").c_str()) == AQMSIM_E_IO);
  fs::remove_all(dir);

  aqmsim_sweep* sw = nullptr;
  CHECK(aqmsim_sweep_run(s, 1, &sw) == AQMSIM_E_NO_SWEEP);
  aqmsim_report_free(r);
  aqmsim_scenario_free(s);
}

TEST_CASE("sweeps through the C API") {
  aqmsim_scenario* s = parse(
      "discipline = choke\nduration_s = 5\nwarmup_s = 1\n"
      "sweep.parameter = udp.rate_bps\nsweep.values = 1e6, 4e6\nsweep.repetitions = 2\n");
  aqmsim_sweep* sw = nullptr;
  REQUIRE(aqmsim_sweep_run(s, 2, &sw) == AQMSIM_OK);
  REQUIRE(aqmsim_sweep_row_count(sw) == 4);
  CHECK(std::string(aqmsim_sweep_row_label(sw, 2)) == "4e6");
  CHECK(aqmsim_sweep_row_seed(sw, 3) == 2);
  CHECK(aqmsim_sweep_row_label(sw, 4) == nullptr);
  const aqmsim_report* r = aqmsim_sweep_row_report(sw, 1);
  REQUIRE(r != nullptr);
  CHECK(aqmsim_report_flow_count(r) == 11);
  const auto dir = fs::temp_directory_path() / "aqmsim_capi_sweep";
  fs::remove_all(dir);
  CHECK(aqmsim_sweep_write_csv(sw, dir.c_str()) == AQMSIM_OK);
  CHECK(fs::exists(dir / "sweep.csv"));
  fs::remove_all(dir);
  aqmsim_sweep_free(sw);
  aqmsim_scenario_free(s);
}

TEST_CASE("command-line front end") {
  const auto dir = fs::temp_directory_path() / "aqmsim_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto conf = (dir / "fred.conf").string();

  CHECK(cli("presets") == 0);
  const std::string emit_cmd =
      std::string(AQMSIM_CLI_PATH) + " preset baseline-fred --emit-config --duration 5 > " + conf;
  CHECK(std::system(emit_cmd.c_str()) == 0);
  CHECK(slurp(conf).find("duration_s = 5") != std::string::npos);
  CHECK(slurp(conf).find("warmup_s = 0.5") != std::string::npos);

  CHECK(cli("run " + conf + " --out-dir " + (dir / "a").string()) == 0);
  CHECK(cli("run " + conf + " --out-dir " + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "flows.csv") == slurp(dir / "b" / "flows.csv"));
  CHECK(slurp(dir / "a" / "queue.csv") == slurp(dir / "b" / "queue.csv"));
  CHECK(cli("run " + conf + " --seed 9 --set tcp.flows=3 --out-dir " + (dir / "c").string()) == 0);
  CHECK(slurp(dir / "c" / "flows.csv").find("\n3,tcp,") != std::string::npos);
  CHECK(slurp(dir / "c" / "flows.csv").find("\n4,tcp,") == std::string::npos);

  std::ofstream(dir / "bad.conf") << "discipline = red\nmaxq_typo = 2\n";
  CHECK(cli("run " + (dir / "bad.conf").string()) != 0);
  CHECK(cli("run " + (dir / "missing.conf").string()) != 0);
  CHECK(cli("sweep " + conf) != 0);
  CHECK(cli("preset nonexistent") != 0);
  CHECK(cli("frobnicate") != 0);

  CHECK(cli("preset choke-flow-mix --duration 3 --jobs 2 --out-dir " + (dir / "mix").string()) == 0);
  CHECK(fs::exists(dir / "mix" / "sweep_aggregate.csv"));
  fs::remove_all(dir);
}
