#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "photocorr/cli.hpp"
#include "photocorr/config.hpp"
#include "photocorr/errors.hpp"
#include "photocorr/text.hpp"
#include "test_util.hpp"

using namespace photocorr;
using doctest::Approx;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "photocorr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(slurp(p)); }

std::string config_error(std::string_view text) {
  try {
    parse_config(text, "exp.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config_cli") {

TEST_CASE("config round trip") {
  ExperimentConfig c;
  CHECK(parse_config(emit_config(c)) == c);
  c.state = "mix:0.3*thermal:1+0.7*fock:2";
  c.mode = "hg:2:0.7e-9";
  c.detector.efficiency = 0.37;
  c.detector.timing_jitter_sigma = 2.5e-11;
  c.detector.dead_time = 3e-8;
  c.run = RunKind::stationary;
  c.pulses = 12345;
  c.period = 1.0 / 3.0 * 1e-7;
  c.source = StationarySource::poisson;
  c.rate = 2.5e6;
  c.bandwidth = 3.3e6;
  c.duration = 0.125;
  c.timestep = 1.1e-8;
  c.lineshape = Lineshape::lorentzian;
  c.bin_width = 1e-10;
  c.max_tau = 4e-9;
  c.start_stop = true;
  c.sidepeak_window = 5e-9;
  c.side_peaks = 5;
  c.seed = 987654321987ULL;
  c.threads = 3;
  c.out = "results/run one";
  c.format = StreamFormat::binary;
  const auto text = emit_config(c);
  CHECK(parse_config(text) == c);
  CHECK(emit_config(parse_config(text)) == text);
}

TEST_CASE("config errors name the line") {
  CHECK(config_error("[state]\nspec = thermal:1\n[run]\npulses = many\n").find("exp.ini:4:") == 0);
  CHECK(config_error("[run]\nkind = pulsed\ncolour = blue\n").find("exp.ini:3:") == 0);
  CHECK(config_error("pulses = 3\n").find("exp.ini:1:") == 0);
  CHECK(config_error("[run\n").find("exp.ini:1:") == 0);
  CHECK(config_error("# comment\n\n[detector]\nefficiency\n").find("exp.ini:4:") == 0);
  CHECK(config_error("[output]\nformat = xml\n").find("exp.ini:2:") == 0);
  CHECK(config_error("[general]\nseed = -1\n").find("exp.ini:2:") == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/exp.ini"), IoError);
}

TEST_CASE("config validation and defaults") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.effective_bin_width() == Approx(1e-9 / 20.0));
  CHECK(c.effective_max_tau() == Approx(std::min(8e-9, 6.25e-9)));
  CHECK(c.effective_sidepeak_window() == Approx(6.25e-9));
  c.run = RunKind::stationary;
  CHECK(c.effective_bin_width() == Approx(1.0 / 50e6));
  CHECK(c.effective_max_tau() == Approx(1e-5));
  c = ExperimentConfig{};
  c.detector.efficiency = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.mode = "gauss:5e-9";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.state = "squeezed:1";
  CHECK_THROWS(c.validate());
}

TEST_CASE("simulate writes a coherent stream") {
  const auto dir = test_util::scratch_dir("cli_simulate");
  const std::uint64_t n = 100000;
  const double s = 0.4, mu = 1.5;
  {
    std::ofstream cfg(dir / "exp.ini");
    cfg << "[state]\nspec = coherent:" << mu << "\n[detector]\nefficiency = " << s << "\n[run]\npulses = " << n
        << "\n";
  }
  const auto out1 = (dir / "a").string();
  const auto r = cli({"simulate", "--config", (dir / "exp.ini").string(), "--out", out1, "--seed", "5"});
  REQUIRE(r.code == 0);
  const auto text = slurp(out1 + ".csv");
  const auto rows = lines(text);
  REQUIRE_FALSE(rows.empty());
  CHECK(rows.front() == "pulse_index,time_seconds");
  const double expected = n * s * mu;
  CHECK(std::fabs(static_cast<double>(rows.size() - 1) - expected) < 5.0 * std::sqrt(expected));
  CHECK(std::filesystem::exists(out1 + ".csv.json"));

  const auto out2 = (dir / "b").string();
  REQUIRE(cli({"simulate", "--config", (dir / "exp.ini").string(), "--out", out2, "--seed", "5", "--threads", "3"})
              .code == 0);
  CHECK(slurp(out2 + ".csv") == text);
  CHECK(slurp(out2 + ".csv.json") == slurp(out1 + ".csv.json"));

  const auto out3 = (dir / "c").string();
  REQUIRE(cli({"simulate", "--config", (dir / "exp.ini").string(), "--out", out3, "--seed", "6"}).code == 0);
  CHECK(slurp(out3 + ".csv") != text);

  const auto bin = (dir / "d").string();
  REQUIRE(cli({"simulate", "--config", (dir / "exp.ini").string(), "--out", bin, "--seed", "5", "--format",
               "binary"})
              .code == 0);
  CHECK(std::filesystem::file_size(bin + ".bin") == 16 * (rows.size() - 1));
}

TEST_CASE("zero efficiency gives a header-only stream") {
  const auto dir = test_util::scratch_dir("cli_zero");
  {
    std::ofstream cfg(dir / "exp.ini");
    cfg << "[detector]\nefficiency = 0\n";
  }
  const auto out = (dir / "z").string();
  REQUIRE(cli({"simulate", "--config", (dir / "exp.ini").string(), "--out", out, "--pulses", "1000"}).code == 0);
  CHECK(slurp(out + ".csv") == "pulse_index,time_seconds\n");

  const auto r = cli({"analyze", out + ".csv", "--out", out});
  CHECK(r.code == 0);
  const auto j = read_json(out + ".report.json");
  const auto flags = j["flags"].get<std::vector<std::string>>();
  CHECK(std::find(flags.begin(), flags.end(), "empty_stream") != flags.end());
  CHECK(j["N"].get<std::uint64_t>() == 1000);
}

TEST_CASE("invalid input maps to exit codes") {
  const auto dir = test_util::scratch_dir("cli_errors");
  {
    std::ofstream cfg(dir / "bad.ini");
    cfg << "[detector]\nefficiency = 2\n";
  }
  auto r = cli({"simulate", "--config", (dir / "bad.ini").string(), "--out", (dir / "x").string()});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  CHECK(cli({"simulate", "--state", "thermal:-1", "--out", (dir / "x").string()}).code == 1);
  CHECK(cli({"simulate", "--mode", "gauss:5e-9", "--out", (dir / "x").string()}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"figure", "7", "--out", (dir / "f").string()}).code == 1);
  CHECK(cli({"analyze", (dir / "missing.csv").string()}).code == 2);
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "pulse_index,time_seconds\n0,1e-9\n1,oops\n";
  }
  r = cli({"analyze", (dir / "bad.csv").string(), "--out", (dir / "bad").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("record 1") != std::string::npos);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("analyze recovers thermal statistics") {
  const auto dir = test_util::scratch_dir("cli_analyze");
  const auto out = (dir / "th").string();
  REQUIRE(cli({"simulate", "--state", "thermal:1", "--pulses", "300000", "--out", out, "--seed", "3"}).code == 0);
  const auto r = cli({"analyze", out + ".csv", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  const auto j = read_json(out + ".report.json");
  const double g = j["g2q_eta"].get<double>();
  const double sg = j["g2q_eta_sigma"].get<double>();
  CHECK(std::fabs(g - 2.0) < 3.0 * sg);
  CHECK(std::fabs(j["g2q_pn"].get<double>() - 2.0) < 3.0 * j["g2q_pn_sigma"].get<double>());
  CHECK(j["g2q_analytic"].get<double>() == Approx(2.0));
  CHECK(j["N"].get<std::uint64_t>() == 300000);
  CHECK(j["flags"].empty());

  const auto rows = lines(slurp(out + ".hist.csv"));
  REQUIRE(rows.size() > 10);
  CHECK(rows.front() == "tau_seconds,count,expected_analytic");
  const auto first = text::split(rows[1], ',');
  REQUIRE(first.size() == 3);
  const double count = text::parse_double(first[1], "count");
  const double expected = text::parse_double(first[2], "expected");
  CHECK(std::fabs(count - expected) < 5.0 * std::sqrt(expected));
}

TEST_CASE("a wrong mode hint is reported") {
  const auto dir = test_util::scratch_dir("cli_hint");
  const auto out = (dir / "th").string();
  REQUIRE(cli({"simulate", "--state", "thermal:1", "--pulses", "200000", "--out", out, "--seed", "4"}).code == 0);
  REQUIRE(cli({"analyze", out + ".csv", "--out", out + ".right"}).code == 0);
  const auto r = cli({"analyze", out + ".csv", "--out", out + ".wrong", "--mode", "gauss:2e-9"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  const auto right = read_json(out + ".right.report.json");
  const auto wrong = read_json(out + ".wrong.report.json");
  const auto flags = wrong["flags"].get<std::vector<std::string>>();
  CHECK(std::find(flags.begin(), flags.end(), "width_mismatch") != flags.end());
  // The hinted shape sets the fitted central density, so D(0) and g2p follow
  // the hint while the pair total behind g2q_eta does not.
  const double ratio = wrong["D0_per_second"].get<double>() / right["D0_per_second"].get<double>();
  CHECK(ratio == Approx(0.5).epsilon(0.05));
  CHECK(wrong["g2p"].get<double>() / right["g2p"].get<double>() == Approx(0.5).epsilon(0.05));
}

TEST_CASE("stationary analysis writes a curve") {
  const auto dir = test_util::scratch_dir("cli_stationary");
  {
    std::ofstream cfg(dir / "st.ini");
    cfg << "[run]\nkind = stationary\nsource = thermal\nrate = 1e6\nbandwidth = 1e6\nduration = 0.3\n";
  }
  const auto out = (dir / "st").string();
  REQUIRE(cli({"simulate", "--config", (dir / "st.ini").string(), "--out", out}).code == 0);
  REQUIRE(cli({"analyze", out + ".csv", "--config", (dir / "st.ini").string(), "--out", out}).code == 0);
  const auto j = read_json(out + ".report.json");
  CHECK(std::fabs(j["peak_ratio"].get<double>() - 2.0) < 0.15);
  CHECK(std::fabs(j["tail_ratio"].get<double>() - 1.0) < 0.05);
  const auto rows = lines(slurp(out + ".curve.csv"));
  CHECK(rows.front() == "tau_seconds,pc_per_second,g2,pairs");
  CHECK(rows.size() == 501);
}

TEST_CASE("figure datasets") {
  const auto dir = test_util::scratch_dir("cli_figures");
  const auto out = (dir / "f").string();

  REQUIRE(cli({"figure", "3", "--out", out, "--pulses", "100000"}).code == 0);
  auto rows = lines(slurp(out + ".fig3.csv"));
  CHECK(rows.front() == "tau_seconds,count,expected_analytic");
  // Analytic column: Gaussian of s.d. equal to the pulse width.
  std::vector<double> tau, model;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = text::split(rows[i], ',');
    tau.push_back(text::parse_double(f[0], "tau"));
    model.push_back(text::parse_double(f[2], "model"));
  }
  REQUIRE(tau.size() > 10);
  for (std::size_t i = 1; i < tau.size(); ++i) {
    const double ratio = model[i] / model[0];
    CHECK(ratio == Approx(std::exp(-(tau[i] * tau[i] - tau[0] * tau[0]) / (2.0 * 1e-18))).epsilon(1e-9));
  }

  REQUIRE(cli({"figure", "4", "--out", out}).code == 0);
  rows = lines(slurp(out + ".fig4.csv"));
  CHECK(rows.front() == "delta_tp_seconds,N,g2p_over_g2q_per_second");
  REQUIRE(rows.size() > 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = text::split(rows[i], ',');
    const double dt = text::parse_double(f[0], "dt");
    const double n = text::parse_double(f[1], "N");
    const double v = text::parse_double(f[2], "v");
    CHECK(v == Approx(1.0 / (std::sqrt(2.0 * std::numbers::pi) * dt * n)).epsilon(1e-12));
  }

  REQUIRE(cli({"figure", "1", "--out", out, "--pulses", "1000"}).code == 0);
  rows = lines(slurp(out + ".fig1.csv"));
  CHECK(rows.front() == "pulse_index,slot_start_seconds,thermal,coherent");
  CHECK(rows.size() == 1001);
}

TEST_CASE("figure 2 has a flat baseline and a bunching peak") {
  const auto dir = test_util::scratch_dir("cli_fig2");
  const auto out = (dir / "f").string();
  {
    std::ofstream cfg(dir / "st.ini");
    cfg << "[run]\nkind = stationary\nrate = 1e6\nbandwidth = 1e6\nduration = 0.5\n";
  }
  REQUIRE(cli({"figure", "2", "--config", (dir / "st.ini").string(), "--out", out}).code == 0);
  const auto rows = lines(slurp(out + ".fig2.csv"));
  CHECK(rows.front() == "tau_seconds,pc_per_second,g2,siegert_g2,baseline_per_second");
  REQUIRE(rows.size() > 100);
  const auto first = text::split(rows[1], ',');
  const double baseline = text::parse_double(first[4], "baseline");
  CHECK(baseline == Approx(1e6).epsilon(0.05));
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(text::parse_double(text::split(rows[i], ',')[4], "baseline") == baseline);
  }
  CHECK(text::parse_double(first[2], "g2") == Approx(2.0).epsilon(0.1));
  const auto last = text::split(rows.back(), ',');
  CHECK(text::parse_double(last[2], "g2") == Approx(1.0).epsilon(0.05));
}

}  // TEST_SUITE
