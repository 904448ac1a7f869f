#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "photocorr/errors.hpp"
#include "photocorr/simulate.hpp"
#include "test_util.hpp"

using namespace photocorr;

namespace {

std::string io_error_message(const std::string& csv) {
  std::istringstream in(csv);
  try {
    read_stream_csv(in);
  } catch (const IoError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("click_stream") {

TEST_CASE("CSV and binary round trips") {
  DetectorModel d;
  d.efficiency = 0.5;
  const auto s = simulate_pulse_train(QuantumState::thermal(1.0), d, {2000, 12.5e-9, TemporalMode::gaussian(1e-9)}, 5);
  REQUIRE_FALSE(s.empty());
  const auto dir = test_util::scratch_dir("click_stream");
  save_stream(s, dir / "a.csv", StreamFormat::csv);
  save_stream(s, dir / "a.bin", StreamFormat::binary);
  CHECK(std::filesystem::exists(dir / "a.csv.json"));
  const auto c = load_stream(dir / "a.csv");
  const auto b = load_stream(dir / "a.bin");
  CHECK(c.records == s.records);
  CHECK(b.records == s.records);
  CHECK(c.metadata == s.metadata);
  CHECK(b.metadata == s.metadata);
  CHECK(std::filesystem::file_size(dir / "a.bin") == 16 * s.size());
  CHECK(c.num_pulses() == 2000);
}

TEST_CASE("stationary records use NA") {
  const auto s = simulate_stationary_poisson(1e4, 0.01, DetectorModel{}, 3);
  std::ostringstream out;
  write_stream_csv(s, out);
  const auto text = out.str();
  CHECK(text.rfind("pulse_index,time_seconds\n", 0) == 0);
  CHECK(text.find("\nNA,") != std::string::npos);
  std::istringstream in(text);
  CHECK(read_stream_csv(in) == s.records);
}

TEST_CASE("metadata JSON round trip") {
  StreamMetadata m;
  m.seed = 99;
  m.state_spec = "thermal:0.5";
  m.mode_spec = "gauss:1e-09";
  m.detector.efficiency = 0.25;
  m.detector.dead_time = 2e-9;
  m.pulsed = PulsedRunInfo{1000, 12.5e-9};
  CHECK(metadata_from_json(metadata_to_json(m, 10)) == m);
  StreamMetadata st;
  st.stationary = StationaryRunInfo{"thermal", 1e5, 1e6, 2.0, 5e-8, "gaussian"};
  CHECK(metadata_from_json(metadata_to_json(st, 0)) == st);
  CHECK_THROWS_AS(metadata_from_json("{not json"), IoError);
}

TEST_CASE("malformed records name their index") {
  CHECK(io_error_message("pulse_index,time_seconds\n0,1e-9\n1,abc\n").find("record 1") != std::string::npos);
  CHECK(io_error_message("pulse_index,time_seconds\n0,1e-9\n0,2e-9\n5\n").find("record 2") != std::string::npos);
  CHECK(io_error_message("0,1e-9,7\n").find("record 0") != std::string::npos);

  const auto dir = test_util::scratch_dir("click_stream_bad");
  {
    std::ofstream out(dir / "bad.csv");
    out << "pulse_index,time_seconds\n0,2e-9\n0,1e-9\n";
  }
  try {
    load_stream(dir / "bad.csv");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
  }
  {
    std::ofstream out(dir / "short.bin", std::ios::binary);
    out.write("\0\0\0\0\0\0\0\0\0\0\0\0", 12);
  }
  CHECK_THROWS_AS(load_stream(dir / "short.bin"), IoError);
  CHECK_THROWS_AS(load_stream(dir / "missing.csv"), IoError);
}

TEST_CASE("detector validation") {
  DetectorModel d;
  CHECK_NOTHROW(d.validate());
  d.efficiency = -0.1;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.efficiency = 1.0;
  d.dead_time = -1.0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

}  // TEST_SUITE
