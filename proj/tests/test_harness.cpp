#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "harness/config.hpp"
#include "harness/csv.hpp"
#include "harness/presets.hpp"
#include "harness/runner.hpp"
#include "sim/rng.hpp"

using namespace aqmsim;
using namespace aqmsim::harness;

namespace {

bool mentions(const ConfigError& e, std::string_view needle) {
  for (const auto& p : e.problems())
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> problems_of(std::string_view text) {
  try {
    parse_document(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

ScenarioConfig quick(aqm::DisciplineKind kind) {
  ScenarioConfig c;
  c.discipline.kind = kind;
  c.duration_s = 10;
  c.warmup_s = 1;
  return c;
}

}  // namespace

TEST_CASE("a minimal document gets every default") {
  const auto c = parse_scenario("discipline = red\n");
  CHECK(c.discipline.kind == aqm::DisciplineKind::red);
  CHECK(c.discipline.red.min_th == 50);
  CHECK(c.discipline.red.max_th == 100);
  CHECK(c.discipline.red.max_p == 0.02);
  CHECK(c.discipline.red.w_q == 0.002);
  CHECK(c.buffer == aqm::Capacity::packets(150));
  CHECK(c.packet_size == 1000);
  CHECK(c.tcp.flows == 10);
  CHECK(c.tcp.max_window == 50);
  CHECK(c.udp.flows == 1);
  CHECK(c.duration_s == 100);
  CHECK(c.warmup_s == 10);
  CHECK(c == [] {
    ScenarioConfig d;
    d.discipline.kind = aqm::DisciplineKind::red;
    return d;
  }());
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
  const auto c = parse_scenario(
      "# scenario\n\n  discipline=fred   # trailing\n\ttcp.flows =  3\r\nudp.rate_bps=2e6\n");
  CHECK(c.discipline.kind == aqm::DisciplineKind::fred);
  CHECK(c.tcp.flows == 3);
  CHECK(c.udp.rate_bps == 2e6);
}

TEST_CASE("inverted thresholds are rejected") {
  const auto p = problems_of("discipline = red\ndiscipline.red.min_th = 100\ndiscipline.red.max_th = 50\n");
  REQUIRE_FALSE(p.empty());
  bool found = false;
  for (const auto& s : p) found |= s.find("min_th < max_th required") != std::string::npos;
  CHECK(found);
}

TEST_CASE("unknown keys are named") {
  try {
    parse_document("discipline = red\nmaxq_typo = 3\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "maxq_typo"));
    CHECK(mentions(e, "unknown key"));
    CHECK(mentions(e, "line 2"));
  }
}

TEST_CASE("every problem is reported, each with key and reason") {
  const auto p = problems_of("tcp.flows = lots\nbuffer.unit = litres\nnot a pair\ndiscipline.red.w_q = x\n");
  CHECK(p.size() == 5);  // four bad lines plus the missing discipline
  const std::string all = [&] {
    std::string s;
    for (const auto& x : p) s += x + "\n";
    return s;
  }();
  CHECK(all.find("tcp.flows") != std::string::npos);
  CHECK(all.find("buffer.unit") != std::string::npos);
  CHECK(all.find("line 3") != std::string::npos);
  CHECK(all.find("discipline.red.w_q") != std::string::npos);
  CHECK(all.find("discipline: required key missing") != std::string::npos);
}

TEST_CASE("range and cross-field violations") {
  CHECK_FALSE(problems_of("discipline = blue\ndiscipline.blue.d1 = 2\n").empty());
  CHECK_FALSE(problems_of("discipline = sfb\ndiscipline.sfb.levels = 0\n").empty());
  CHECK_FALSE(problems_of("discipline = choke\ndiscipline.choke.cand_num = 0\n").empty());
  CHECK_FALSE(problems_of("discipline = fred\ndiscipline.fred.min_q = 0\n").empty());
  CHECK_FALSE(problems_of("discipline = red\nwarmup_s = 200\n").empty());
  CHECK_FALSE(problems_of("discipline = red\nudp.rate_bps = 40e6\n").empty());
  CHECK_FALSE(problems_of("discipline = red\ntopology.bottleneck_bandwidth_bps = 0\n").empty());
  CHECK_FALSE(problems_of("discipline = red\ndiscipline.red.max_th = 200\n").empty());
  CHECK_FALSE(problems_of("discipline = red\ntcp.flows = 0\nudp.flows = 0\n").empty());
  CHECK_FALSE(problems_of("discipline = red\ndiscipline = fred\n").empty());
  CHECK_FALSE(problems_of("discipline = wfq\n").empty());
  CHECK(problems_of("discipline = red\nduration_s = 0\n").empty());
}

TEST_CASE("emit then parse reproduces the document (random configs)") {
  sim::Rng rng(12);
  const auto keys = field_names();
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    ScenarioConfig c;
    c.discipline.kind = aqm::all_disciplines()[rng.below(6)];
    c.seed = rng.next_u64();
    c.duration_s = rng.uniform(1, 500);
    c.warmup_s = c.duration_s * rng.uniform();
    c.topology.bottleneck_bandwidth_bps = rng.uniform(1e4, 1e8);
    c.topology.access_bandwidth_bps = rng.uniform(1e7, 1e9);
    c.udp.rate_bps = rng.uniform(1, 1e7);
    c.discipline.red.min_th = rng.uniform(1, 60);
    c.discipline.red.max_th = c.discipline.red.min_th + rng.uniform(0.5, 80);
    c.discipline.red.max_p = rng.uniform(0.001, 1);
    c.discipline.red.w_q = rng.uniform(1e-4, 0.5);
    c.discipline.red.count_spread = rng.bernoulli(0.5);
    c.discipline.blue.d1 = rng.uniform(0.001, 0.1);
    c.discipline.blue.freeze_time = sim::SimTime::from_ns(static_cast<std::int64_t>(rng.below(1'000'000'000)));
    c.discipline.sfb.bins = 1 + static_cast<std::uint32_t>(rng.below(64));
    c.discipline.sfb.boxtime_jitter = rng.uniform(0, 0.9);
    c.discipline.choke_adaptive = rng.bernoulli(0.5);
    c.tcp.variant = rng.bernoulli(0.5) ? traffic::TcpVariant::reno : traffic::TcpVariant::tahoe;
    c.out_dir = rng.bernoulli(0.5) ? "" : "results/run " + std::to_string(trial);
    if (!c.validate().empty()) continue;
    ScenarioDocument doc{c, {}};
    if (rng.bernoulli(0.3))
      doc.sweep = SweepSpec{{"udp.rate_bps", "tcp.flows"}, {{"1000", "2"}, {"2000", "3"}}, 2};
    const auto text = emit_document(doc);
    const auto back = parse_document(text);
    CHECK(back == doc);
    CHECK(emit_document(back) == text);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("set_field and get_field agree on every key") {
  ScenarioConfig c;
  for (const auto& key : field_names()) {
    const auto value = get_field(c, key);
    ScenarioConfig d = c;
    set_field(d, key, value);
    CHECK(d == c);
  }
  CHECK_THROWS_AS(set_field(c, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(set_field(c, "tcp.flows", "-1"), ConfigError);
}

TEST_CASE("sweep documents parse, label and validate each point") {
  const auto doc = parse_document(
      "discipline = fred\nsweep.parameter = buffer.capacity:discipline.red.min_th:discipline.red.max_th\n"
      "sweep.values = 30:10:20, 60:20:40\nsweep.repetitions = 3\n");
  REQUIRE(doc.sweep);
  CHECK(doc.sweep->parameters.size() == 3);
  CHECK(doc.sweep->points.size() == 2);
  CHECK(doc.sweep->label(1) == "60:20:40");
  CHECK(doc.sweep->repetitions == 3);
  const auto cfg = sweep_point_config(doc.config, *doc.sweep, 1, 2);
  CHECK(cfg.buffer.value == 60);
  CHECK(cfg.discipline.red.min_th == 20);
  CHECK(cfg.seed == doc.config.seed + 2);

  CHECK_FALSE(problems_of("discipline = red\nsweep.parameter = bogus\nsweep.values = 1\n").empty());
  CHECK_FALSE(problems_of("discipline = red\nsweep.parameter = tcp.flows\n").empty());
  CHECK_FALSE(problems_of("discipline = red\nsweep.parameter = tcp.flows:udp.flows\nsweep.values = 1\n").empty());
  // Point 10 breaks max_th <= buffer.
  CHECK_FALSE(problems_of("discipline = red\nsweep.parameter = buffer.capacity\nsweep.values = 150, 10\n").empty());
}

TEST_CASE("presets") {
  const auto base = preset("baseline").config;
  CHECK(base.tcp.flows == 10);
  CHECK(base.udp.flows == 1);
  CHECK(base.udp.rate_bps == 8e6);
  CHECK(base.buffer == aqm::Capacity::packets(150));
  CHECK(base.discipline.red.min_th == 50);
  CHECK(base.discipline.red.max_th == 100);
  CHECK(base.packet_size == 1000);
  CHECK(base.tcp.max_window == 50);

  const auto blue = preset("blue-49tcp").config;
  CHECK(blue.tcp.flows == 49);
  CHECK(blue.tcp.max_window * blue.packet_size == 300000);
  CHECK(blue.buffer == aqm::Capacity::bytes(300000));
  CHECK(blue.discipline.kind == aqm::DisciplineKind::blue);

  const auto sfb = preset("sfb-49tcp-1udp").config;
  CHECK(sfb.buffer == aqm::Capacity::bytes(150000));
  CHECK(sfb.udp.rate_bps == 40e6);

  const auto mix = preset("choke-flow-mix");
  REQUIRE(mix.sweep);
  CHECK(mix.sweep->points.size() == 3);

  try {
    preset("nonexistent");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "nonexistent"));
    CHECK(mentions(e, "baseline-fred"));
  }
}

TEST_CASE("every preset validates and survives an emit/parse round trip") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto doc = preset(name);
    CHECK(doc.config.validate().empty());
    const auto back = parse_document(emit_document(doc));
    CHECK(back == doc);
  }
  CHECK(preset_names().size() >= 20);
}

TEST_CASE("run_scenario refuses invalid configs") {
  ScenarioConfig c;
  c.discipline.red.min_th = 120;
  c.discipline.kind = aqm::DisciplineKind::red;
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("same config and seed give byte-identical CSV") {
  for (auto kind : aqm::all_disciplines()) {
    CAPTURE(aqm::to_string(kind));
    const auto a = run_scenario(quick(kind));
    const auto b = run_scenario(quick(kind));
    CHECK(flows_csv(a) == flows_csv(b));
    CHECK(queue_csv(a) == queue_csv(b));
    CHECK(summary_csv(a) == summary_csv(b));
    CHECK(a.trace_digest == b.trace_digest);
  }
  auto other = quick(aqm::DisciplineKind::choke);
  other.seed = 2;
  CHECK(run_scenario(other).trace_digest != run_scenario(quick(aqm::DisciplineKind::choke)).trace_digest);
}

TEST_CASE("a single-point sweep equals run_scenario") {
  const auto base = quick(aqm::DisciplineKind::sfb);
  const SweepSpec spec{{"udp.rate_bps"}, {{"8000000"}}, 1};
  const auto sweep = run_sweep(base, spec);
  REQUIRE(sweep.rows.size() == 1);
  const auto direct = run_scenario(base);
  CHECK(flows_csv(sweep.rows[0].report) == flows_csv(direct));
  CHECK(queue_csv(sweep.rows[0].report) == queue_csv(direct));
}

TEST_CASE("parallel sweeps order rows by point and match serial results") {
  const auto base = quick(aqm::DisciplineKind::choke);
  const SweepSpec spec{{"udp.rate_bps"}, {{"500000"}, {"2000000"}, {"8000000"}}, 2};
  const auto serial = run_sweep(base, spec, 1);
  const auto parallel = run_sweep(base, spec, 4);
  REQUIRE(serial.rows.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(serial.rows[i].point == i / 2);
    CHECK(serial.rows[i].seed == base.seed + i % 2);
  }
  CHECK(sweep_csv(serial) == sweep_csv(parallel));
  CHECK(sweep_flows_csv(serial) == sweep_flows_csv(parallel));
  const auto agg = serial.aggregates();
  REQUIRE(agg.size() == 3);
  CHECK(agg[1].runs == 2);
  CHECK(agg[1].utilization ==
        doctest::Approx((serial.rows[2].report.utilization + serial.rows[3].report.utilization) / 2));
}

TEST_CASE("CSV files carry the fixed schemas") {
  const auto dir = std::filesystem::temp_directory_path() / "aqmsim_test_csv";
  std::filesystem::remove_all(dir);
  const auto r = run_scenario(quick(aqm::DisciplineKind::red));
  write_run_csv(r, dir);
  CHECK(first_line(slurp(dir / "flows.csv")) == "flow_id,kind,delivered_bytes,dropped_packets,throughput_bps");
  CHECK(first_line(slurp(dir / "queue.csv")) == "time_s,total_qlen,tcp_qlen,udp_qlen,ewma_qlen");
  CHECK(first_line(slurp(dir / "summary.csv")) == "utilization,jain_index,tcp_share,udp_share");
  CHECK(first_line(slurp(dir / "series" / "ewma_tcp.csv")) == "time_s,ewma_tcp");
  const auto flows = slurp(dir / "flows.csv");
  CHECK(std::count(flows.begin(), flows.end(), '\n') == 12);
  CHECK(flows.find("\n0,udp,") != std::string::npos);
  CHECK(flows.find("\n1,tcp,") != std::string::npos);

  const SweepSpec spec{{"discipline"}, {{"red"}, {"choke"}}, 1};
  const auto sweep = run_sweep(quick(aqm::DisciplineKind::red), spec);
  write_sweep_csv(sweep, dir / "sweep");
  CHECK(std::filesystem::exists(dir / "sweep" / "sweep_aggregate.csv"));
  CHECK(std::filesystem::exists(dir / "sweep" / "runs" / "p1_s1" / "queue.csv"));
  const auto table = slurp(dir / "sweep" / "sweep.csv");
  CHECK(table.find("\n1,choke,1,") != std::string::npos);
  std::filesystem::remove_all(dir);
}
