#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "cohercause/error.hpp"
#include "cohercause/io.hpp"

namespace cc = cohercause;

TEST(SequenceCsv, RoundTripsExactly) {
  cc::SequencePair data{{0.1, -2.5e-300, 1.0 / 3.0}, {std::numeric_limits<double>::max(), 0.0, -7.0}};
  std::istringstream in(cc::sequence_csv(data));
  const auto back = cc::read_sequence_csv(in);
  EXPECT_EQ(back.x, data.x);
  EXPECT_EQ(back.y, data.y);
}

TEST(SequenceCsv, AcceptsExtraColumnsAndCrlf) {
  std::istringstream in("t,y,extra,x\r\n0, 2 ,9,1\r\n1,4,9,3\r\n\n");
  const auto d = cc::read_sequence_csv(in);
  EXPECT_EQ(d.x, (std::vector<double>{1, 3}));
  EXPECT_EQ(d.y, (std::vector<double>{2, 4}));
}

TEST(SequenceCsv, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      cc::read_sequence_csv(in);
    } catch (const cc::ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("t,x,y\n0,1,2\n1,1,2\n2,oops,2\n"), 4u);
  EXPECT_EQ(line_of("t,x,y\n0,1\n"), 2u);
  EXPECT_EQ(line_of("t,x\n0,1\n"), 1u);
  EXPECT_EQ(line_of(""), 1u);
  EXPECT_EQ(line_of("t,x,y\n0,1,2e\n"), 2u);
}

TEST(Json, TestOutcomeKeysInOrder) {
  cc::TestOutcome o;
  o.dims = {10, 1, 10};
  o.M = 990;
  o.seed = 42;
  const auto j = cc::to_json(o);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"statistic", "threshold", "p_value", "alpha", "method",
                                            "reject_null", "p", "q", "r", "M", "seed"}));
  EXPECT_EQ(j["method"], "wilks-mc");
}

TEST(CurvesCsv, HeadersAndRows) {
  cc::CoherenceMap map;
  map.s_range = {0, 1};
  map.t_range = {5, 5};
  map.values = {0.0, 0.25};
  EXPECT_EQ(cc::coherence_map_csv(map), "s,t,rho2\n0,5,0\n1,5,0.25\n");
  const auto roc = cc::roc_curve_csv({{0.05, 0.04, 0.5, 0.01}});
  EXPECT_EQ(roc, "nominal_size,size,power,power_se\n0.05,0.04,0.5,0.01\n");
}

TEST(Names, RoundTrip) {
  EXPECT_EQ(cc::parse_window_mode(cc::to_string(cc::WindowMode::independent)), cc::WindowMode::independent);
  EXPECT_EQ(cc::parse_conditioning(cc::to_string(cc::Conditioning::past_of_y)), cc::Conditioning::past_of_y);
  EXPECT_THROW(cc::parse_window_mode("sliding"), cc::InvalidArgument);
}

TEST(AtomicWrite, ReplacesFileWithoutLeftovers) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cohercause_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = dir / "out.csv";
  cc::write_file_atomic(path, "first\n");
  cc::write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "second\n");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator()), 1);
  EXPECT_THROW(cc::write_file_atomic(dir / "missing" / "x.csv", "x"), cc::Error);
  fs::remove_all(dir);
}
