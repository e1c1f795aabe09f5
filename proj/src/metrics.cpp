#include "smm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "smm/gemm.hpp"
#include "smm/random.hpp"

namespace smm {

int64_t multiplier_count(const MxuConfig& cfg) {
  cfg.validate();
  return int64_t(cfg.leaf_count()) * cfg.leaf_x * cfg.leaf_y;
}

namespace {

// Both adder counts share the recursion shape; only the per-level vector
// width differs (full quadrant slice vs one sub-block row/column).
int64_t adders_recursive(const MxuConfig& cfg, bool block_phrasing) {
  const int64_t children = cfg.strassen() ? 7 : 8;
  const int64_t in_vectors = cfg.strassen() ? 10 : 0;
  const int64_t out_vectors = cfg.strassen() ? 8 : 4;
  int64_t total = 0;
  int64_t instances = 1;  // nodes at the current level
  for (int level = cfg.r; level >= 1; --level) {
    const int64_t chunk = block_phrasing ? (int64_t{1} << (level - 1))
                                         : (int64_t{1} << (2 * (level - 1)));
    total += instances * (in_vectors * chunk * cfg.leaf_x +
                          out_vectors * chunk * cfg.leaf_y);
    instances *= children;
  }
  return total;
}

}  // namespace

int64_t adder_count(const MxuConfig& cfg) {
  cfg.validate();
  return adders_recursive(cfg, false);
}

int64_t adder_count_block_phrasing(const MxuConfig& cfg) {
  cfg.validate();
  return adders_recursive(cfg, true);
}

int64_t dsp_estimate(int64_t multipliers, int mult_input_width) {
  if (multipliers < 0 || mult_input_width < 1) {
    throw std::invalid_argument("dsp_estimate needs a real design point");
  }
  if (mult_input_width <= 18) return (multipliers + kMultsPerDsp - 1) / kMultsPerDsp;
  return multipliers;
}

double throughput_roof_gops(const MxuConfig& cfg, double freq_mhz) {
  cfg.validate();
  if (!(freq_mhz > 0)) throw std::invalid_argument("frequency must be positive");
  double slots = 1.0;
  for (int i = 0; i < cfg.r; ++i) slots *= 8.0;
  slots *= double(cfg.leaf_x) * cfg.leaf_y;
  return 2.0 * slots * freq_mhz / 1000.0;
}

double mce_roof(const MxuConfig& cfg) {
  cfg.validate();
  return cfg.strassen() ? std::pow(8.0 / 7.0, cfg.r) : 1.0;
}

int64_t mse_roof(const MxuConfig& cfg) {
  cfg.validate();
  return cfg.strassen() ? (int64_t{1} << cfg.r) : 1;
}

std::pair<int, int> min_matrix_size(const MxuConfig& cfg) {
  cfg.validate();
  return {cfg.min_rows(), cfg.min_cols()};
}

double mce_measured(const CycleReport& rep, int64_t multipliers) {
  if (multipliers < 1 || rep.cycles_total == 0) return 0.0;
  return double(rep.useful_conventional_mults) /
         (double(multipliers) * double(rep.cycles_total));
}

double utilization_measured(const CycleReport& rep, int64_t multipliers) {
  if (multipliers < 1 || rep.cycles_total == 0) return 0.0;
  return double(rep.mult_activations) /
         (double(multipliers) * double(rep.cycles_total));
}

ResourceReport resource_report(const MxuConfig& cfg,
                               std::optional<double> freq_mhz) {
  cfg.validate();
  ResourceReport rep;
  rep.multipliers = multiplier_count(cfg);
  rep.adders = adder_count(cfg);
  rep.adders_block_phrasing = adder_count_block_phrasing(cfg);
  rep.mult_input_width = cfg.leaf_input_width();
  rep.dsp_estimate = dsp_estimate(rep.multipliers, rep.mult_input_width);
  rep.min_matrix_h = cfg.min_rows();
  rep.min_matrix_w = cfg.min_cols();
  rep.mce_roof = mce_roof(cfg);
  rep.mse_roof = mse_roof(cfg);
  if (freq_mhz) rep.throughput_roof_gops = throughput_roof_gops(cfg, *freq_mhz);
  if (rep.mult_input_width > 18) {
    rep.warnings.push_back("multiplier inputs exceed 18 bits; one per DSP");
  }
  if (rep.dsp_estimate > kDeviceDsps) {
    rep.warnings.push_back(
        std::to_string((rep.dsp_estimate - kDeviceDsps) * kMultsPerDsp) +
        " multipliers spill to soft logic on a " + std::to_string(kDeviceDsps) +
        "-DSP device");
  }
  return rep;
}

std::string report_json(const ResourceReport& rep) {
  nlohmann::ordered_json j;
  j["multipliers"] = rep.multipliers;
  j["adders"] = rep.adders;
  j["adders_block_phrasing"] = rep.adders_block_phrasing;
  j["dsp_estimate"] = rep.dsp_estimate;
  j["mult_input_width"] = rep.mult_input_width;
  j["min_matrix_h"] = rep.min_matrix_h;
  j["min_matrix_w"] = rep.min_matrix_w;
  j["mce_roof"] = rep.mce_roof;
  j["mse_roof"] = rep.mse_roof;
  if (rep.throughput_roof_gops) {
    j["throughput_roof_gops"] = *rep.throughput_roof_gops;
  } else {
    j["throughput_roof_gops"] = nullptr;
  }
  if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

std::string report_csv(const ResourceReport& rep) {
  std::ostringstream out;
  out << "multipliers,adders,adders_block_phrasing,dsp_estimate,"
         "mult_input_width,min_matrix_h,min_matrix_w,mce_roof,mse_roof,"
         "throughput_roof_gops\n";
  out << rep.multipliers << "," << rep.adders << ","
      << rep.adders_block_phrasing << "," << rep.dsp_estimate << ","
      << rep.mult_input_width << "," << rep.min_matrix_h << ","
      << rep.min_matrix_w << ",";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", rep.mce_roof);
  out << buf << "," << rep.mse_roof << ",";
  if (rep.throughput_roof_gops) {
    std::snprintf(buf, sizeof buf, "%.3f", *rep.throughput_roof_gops);
    out << buf;
  }
  out << "\n";
  return out.str();
}

int steady_reps_for(const MxuConfig& cfg, int n) {
  const TilePlan plan = plan_tiles(n, n, n, cfg);
  const int64_t per_product = int64_t(plan.grid_m) * plan.grid_n * plan.grid_k *
                              (plan.tile_m >> cfg.r);
  const int64_t overhead = cfg.fill_latency() + (plan.tile_n >> cfg.r);
  const int64_t reps = (200 * overhead + per_product - 1) / per_product;
  return int(std::clamp<int64_t>(reps, 1, 20000));
}

std::vector<SweepPoint> utilization_sweep(const MxuConfig& cfg,
                                          const std::vector<int>& sizes,
                                          uint64_t seed, int gen_width,
                                          bool gen_signed) {
  cfg.validate();
  const int64_t mults = multiplier_count(cfg);
  std::vector<SweepPoint> points;
  points.reserve(sizes.size());
  for (int n : sizes) {
    std::mt19937_64 eng(seed + uint64_t(n));
    const Matrix a = random_matrix(eng, n, n, gen_width, gen_signed);
    const Matrix b = random_matrix(eng, n, n, gen_width, gen_signed);
    const int reps = steady_reps_for(cfg, n);
    const GemmResult res = run_gemm(a, b, cfg, reps);
    SweepPoint p;
    p.n = n;
    p.reps = reps;
    p.cycles = res.report.cycles_total;
    p.mult_activations = res.report.mult_activations;
    p.useful_mults = res.report.useful_conventional_mults;
    p.mce = mce_measured(res.report, mults);
    p.utilization = utilization_measured(res.report, mults);
    points.push_back(p);
  }
  return points;
}

}  // namespace smm
