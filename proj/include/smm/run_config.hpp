#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "smm/mxu.hpp"

namespace smm {

// A complete description of one run, as accepted on the command line or in a
// JSON config file.  The JSON form uses exactly the long-option names:
//
//   {
//     "arch": "smm",            // "mm" or "smm"
//     "r": 2,                   // recursion levels
//     "leaf": "16x16",          // leaf array geometry, XxY
//     "width": 8,               // element width of the run's operands
//     "signed": true,           // operand signedness
//     "q_add_pipeline": false,  // extra register stage in each combine
//     "freq_mhz": 250.0,        // optional; enables throughput roofs
//     "seed": 1,                // PRNG seed for generated operands
//     "trials": 100             // repetitions for verify-style runs
//   }
//
// Unknown keys are rejected so that a typo cannot silently fall back to a
// default.  `freq_mhz` may be null or absent.
struct RunConfig {
  std::string arch = "smm";
  int r = 1;
  int leaf_x = 16;
  int leaf_y = 16;
  int width = 8;
  bool is_signed = true;
  bool q_add_pipeline = false;
  std::optional<double> freq_mhz;
  uint64_t seed = 1;
  int trials = 100;

  // Throws std::invalid_argument on any out-of-range or malformed field.
  void validate() const;

  // The hardware configuration this run drives.  Unsigned operands enter the
  // array as signed values one bit wider, so the array's input width is
  // width + 1 when `signed` is false.
  MxuConfig mxu() const;
};

// "16x16" -> {16, 16}.  Throws std::invalid_argument when malformed.
std::pair<int, int> parse_leaf(const std::string& text);

// JSON round trip.  `run_config_from_json` throws std::invalid_argument on
// unknown keys, wrong types, or out-of-range values.
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace smm
