#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "smm/matrix_io.hpp"
#include "smm/random.hpp"
#include "smm/run_config.hpp"

using namespace smm;

TEST_CASE("matrix csv round trip") {
  std::mt19937_64 eng(3);
  for (bool sgn : {true, false}) {
    for (int width : {1, 5, 16, 30}) {
      const Matrix m = random_matrix(eng, 7, 5, width, sgn);
      std::stringstream buf;
      write_matrix_csv(buf, m);
      const Matrix back = read_matrix_csv(buf);
      CHECK(back.rows == m.rows);
      CHECK(back.cols == m.cols);
      CHECK(back.elem_width == m.elem_width);
      CHECK(back.is_signed == m.is_signed);
      CHECK(same_values(back, m));
    }
  }
}

TEST_CASE("matrix csv reader accepts comments and blank lines") {
  std::istringstream in(
      "# rows,cols,width,signed\n"
      "\n"
      "2,3,8,1\n"
      "# row one\n"
      "1,-2,3\n"
      "4,5,-6\r\n");
  const Matrix m = read_matrix_csv(in);
  CHECK(m.rows == 2);
  CHECK(m.cols == 3);
  CHECK(m.elem_width == 8);
  CHECK(m.is_signed);
  CHECK(m.value_at(0, 1) == -2);
  CHECK(m.value_at(1, 2) == -6);
}

TEST_CASE("matrix csv reader rejects malformed input") {
  auto read = [](const char* text) {
    std::istringstream in(text);
    return read_matrix_csv(in);
  };
  // No data at all.
  CHECK_THROWS_AS(read("# nothing\n"), std::invalid_argument);
  // Metadata line with the wrong field count.
  CHECK_THROWS_AS(read("2,3,8\n1,2,3\n4,5,6\n"), std::invalid_argument);
  // Too few rows.
  CHECK_THROWS_AS(read("2,3,8,1\n1,2,3\n"), std::invalid_argument);
  // Extra rows after the declared shape.
  CHECK_THROWS_AS(read("1,2,8,1\n1,2\n3,4\n"), std::invalid_argument);
  // Row with the wrong element count.
  CHECK_THROWS_AS(read("2,2,8,1\n1,2\n3\n"), std::invalid_argument);
  // Non-integer element.
  CHECK_THROWS_AS(read("1,2,8,1\n1,2x\n"), std::invalid_argument);
  // Value outside the declared width (8-bit signed tops out at 127).
  CHECK_THROWS_AS(read("1,1,8,1\n128\n"), std::invalid_argument);
  // Negative value in an unsigned matrix.
  CHECK_THROWS_AS(read("1,1,8,0\n-1\n"), std::invalid_argument);
  // Width outside [1, 62].
  CHECK_THROWS_AS(read("1,1,63,1\n0\n"), std::invalid_argument);
  // Signed flag that is neither 0 nor 1.
  CHECK_THROWS_AS(read("1,1,8,2\n0\n"), std::invalid_argument);
}

TEST_CASE("run config json round trip is stable") {
  RunConfig cfg;
  cfg.arch = "smm";
  cfg.r = 2;
  cfg.leaf_x = 6;
  cfg.leaf_y = 6;
  cfg.width = 16;
  cfg.is_signed = true;
  cfg.q_add_pipeline = true;
  cfg.freq_mhz = 291.0;
  cfg.seed = 42;
  cfg.trials = 10;

  const std::string text = run_config_to_json(cfg);
  const RunConfig back = run_config_from_json(text);
  CHECK(back.arch == cfg.arch);
  CHECK(back.r == cfg.r);
  CHECK(back.leaf_x == cfg.leaf_x);
  CHECK(back.leaf_y == cfg.leaf_y);
  CHECK(back.width == cfg.width);
  CHECK(back.is_signed == cfg.is_signed);
  CHECK(back.q_add_pipeline == cfg.q_add_pipeline);
  REQUIRE(back.freq_mhz.has_value());
  CHECK(*back.freq_mhz == doctest::Approx(291.0));
  CHECK(back.seed == cfg.seed);
  CHECK(back.trials == cfg.trials);
  // Serializing again reproduces the same bytes.
  CHECK(run_config_to_json(back) == text);
}

TEST_CASE("run config json validation") {
  // Partial configs keep defaults for absent keys.
  const RunConfig c = run_config_from_json(R"({"arch":"mm","r":0})");
  CHECK(c.arch == "mm");
  CHECK(c.r == 0);
  CHECK(c.leaf_x == 16);
  CHECK(c.trials == 100);

  // freq_mhz may be null.
  CHECK_FALSE(run_config_from_json(R"({"freq_mhz":null})").freq_mhz.has_value());

  CHECK_THROWS_AS(run_config_from_json(R"({"archh":"smm"})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"r":"two"})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"leaf":"16by16"})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"arch":"systolic"})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"width":0})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"trials":0})"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_json(R"({"freq_mhz":-5})"), std::invalid_argument);
}

TEST_CASE("leaf geometry parsing") {
  CHECK(parse_leaf("16x16") == std::pair<int, int>{16, 16});
  CHECK(parse_leaf("3x5") == std::pair<int, int>{3, 5});
  CHECK_THROWS_AS(parse_leaf("16"), std::invalid_argument);
  CHECK_THROWS_AS(parse_leaf("16x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_leaf("x16"), std::invalid_argument);
  CHECK_THROWS_AS(parse_leaf("16x16x16"), std::invalid_argument);
  CHECK_THROWS_AS(parse_leaf("-2x4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_leaf("0x4"), std::invalid_argument);
}

TEST_CASE("unsigned operands widen the array input by one bit") {
  RunConfig cfg;
  cfg.width = 8;
  cfg.is_signed = false;
  CHECK(cfg.mxu().input_width == 9);
  cfg.is_signed = true;
  CHECK(cfg.mxu().input_width == 8);
}
