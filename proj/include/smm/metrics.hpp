#pragma once
// Analytical resource and efficiency model, kept deliberately separate from
// the simulator so the two can cross-check each other: the closed-form
// counts here must match what a built instance reports structurally, and the
// efficiency roofs here bound what measured runs approach.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smm/mxu.hpp"

namespace smm {

/// Multipliers per Intel-style DSP block at <= 18-bit operands.
inline constexpr int kMultsPerDsp = 2;
/// DSP blocks on the reference device; estimates beyond this spill to soft
/// logic and are flagged in the report warnings.
inline constexpr int64_t kDeviceDsps = 1518;

/// 7^r (Strassen) or 8^r (conventional) times leaf_x * leaf_y.
int64_t multiplier_count(const MxuConfig& cfg);

/// Scalar adders across all quadrant addition banks: per level, ten input
/// vectors (five per operand side) plus eight output vectors for the
/// Strassen family, four output vectors for the conventional one, each as
/// wide as the quadrant slice at that level. Zero at r = 0.
int64_t adder_count(const MxuConfig& cfg);
/// Alternative reading with one-sub-block-wide vectors; reported alongside.
int64_t adder_count_block_phrasing(const MxuConfig& cfg);

/// DSP blocks needed: two multipliers per DSP up to 18-bit inputs, one above.
int64_t dsp_estimate(int64_t multipliers, int mult_input_width);

/// Conventional-equivalent peak throughput in GOPS (multiply and add both
/// count): 2 * 8^r * X * Y * f. Credits the Strassen family with the
/// conventional work it replaces, which is what makes the families
/// comparable at equal tile sizes.
double throughput_roof_gops(const MxuConfig& cfg, double freq_mhz);

/// Multiplier-core efficiency ceiling: useful conventional multiplications
/// per physical multiplier per cycle. 1 for MM, (8/7)^r for SMM.
double mce_roof(const MxuConfig& cfg);

/// Matrix-size efficiency ceiling: full tiles finished per tile_side cycles,
/// relative to a single array of the same leaf throughput. 2^r for SMM-style
/// recursion depth r (one n x n tile every n / 2^r cycles), 1 at r = 0.
int64_t mse_roof(const MxuConfig& cfg);

/// Smallest (rows, cols) operands that reach the roofs.
std::pair<int, int> min_matrix_size(const MxuConfig& cfg);

double mce_measured(const CycleReport& rep, int64_t multipliers);
double utilization_measured(const CycleReport& rep, int64_t multipliers);

struct ResourceReport {
  int64_t multipliers = 0;
  int64_t adders = 0;
  int64_t adders_block_phrasing = 0;
  int64_t dsp_estimate = 0;
  int mult_input_width = 0;
  int min_matrix_h = 0;
  int min_matrix_w = 0;
  double mce_roof = 1.0;
  int64_t mse_roof = 1;
  std::optional<double> throughput_roof_gops;
  std::vector<std::string> warnings;
};

ResourceReport resource_report(const MxuConfig& cfg,
                               std::optional<double> freq_mhz = std::nullopt);

/// Stable-order JSON / CSV serializations of a report.
std::string report_json(const ResourceReport& rep);
std::string report_csv(const ResourceReport& rep);

struct SweepPoint {
  int n = 0;
  int reps = 0;
  uint64_t cycles = 0;
  uint64_t mult_activations = 0;
  uint64_t useful_mults = 0;
  double mce = 0.0;
  double utilization = 0.0;
};

/// Repetitions needed for a steady-state measurement at size n: enough
/// back-to-back products that the one-time startup (fill latency plus the
/// first operand-tile load) is under 0.5% of the run, capped at 20000.
int steady_reps_for(const MxuConfig& cfg, int n);

/// Measured efficiency across square sizes: for each n, multiplies seeded
/// random n x n operands (drawn at gen_width / gen_signed) back-to-back
/// steady_reps_for(n) times and reports the totals. Deterministic for a
/// given seed; each point draws from its own generator seeded seed + n.
std::vector<SweepPoint> utilization_sweep(const MxuConfig& cfg,
                                          const std::vector<int>& sizes,
                                          uint64_t seed, int gen_width,
                                          bool gen_signed);

}  // namespace smm
