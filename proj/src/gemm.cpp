#include "smm/gemm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "smm/layout.hpp"

namespace smm {

namespace {

int div_round_up(int a, int b) { return (a + b - 1) / b; }

Matrix extract_tile(const Matrix& padded, int row0, int col0, int rows, int cols) {
  Matrix t(rows, cols, padded.elem_width, padded.is_signed);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) t.at(i, j) = padded.at(row0 + i, col0 + j);
  }
  return t;
}

}  // namespace

TilePlan plan_tiles(int m, int k, int n, const MxuConfig& cfg) {
  cfg.validate();
  if (m < 1 || k < 1 || n < 1) {
    throw std::invalid_argument("product dimensions must be positive");
  }
  TilePlan p;
  p.tile_m = cfg.min_rows();
  p.tile_k = cfg.min_cols();
  p.tile_n = cfg.min_rows();
  p.grid_m = div_round_up(m, p.tile_m);
  p.grid_k = div_round_up(k, p.tile_k);
  p.grid_n = div_round_up(n, p.tile_n);
  p.pad_m = p.grid_m * p.tile_m - m;
  p.pad_k = p.grid_k * p.tile_k - k;
  p.pad_n = p.grid_n * p.tile_n - n;
  return p;
}

GemmResult run_gemm(const Matrix& a, const Matrix& b, const MxuConfig& cfg,
                    const GemmOptions& opt) {
  const int reps = opt.reps;
  std::ostream* const trace = opt.trace;
  if (a.cols != b.rows) {
    throw std::invalid_argument("GEMM inner dimensions disagree");
  }
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");

  Matrix as = a.as_signed();
  Matrix bs = b.as_signed();
  if (as.elem_width > cfg.input_width || bs.elem_width > cfg.input_width) {
    throw std::invalid_argument("operand width exceeds the configured port width");
  }

  const TilePlan plan = plan_tiles(a.rows, a.cols, b.cols, cfg);
  const Matrix ap = as.padded(plan.grid_m * plan.tile_m, plan.grid_k * plan.tile_k)
                        .promoted(cfg.input_width);
  const Matrix bp = bs.padded(plan.grid_k * plan.tile_k, plan.grid_n * plan.tile_n)
                        .promoted(cfg.input_width);

  // External accumulators across the k grid axis. Wide enough for any dot
  // product the padded problem can produce; still a checked register.
  const int64_t k_total = int64_t(plan.grid_k) * plan.tile_k;
  const int acc_width = 2 * cfg.leaf_input_width() + ceil_log2(k_total);
  if (acc_width > kMaxWidth) {
    throw std::invalid_argument("accumulator width for this k exceeds supported max");
  }
  const int64_t acc_min = fxp_min_value(acc_width, true);
  const int64_t acc_max = fxp_max_value(acc_width, true);

  std::vector<PackedStream> a_tiles;
  a_tiles.reserve(size_t(plan.grid_m) * plan.grid_k);
  for (int mi = 0; mi < plan.grid_m; ++mi) {
    for (int ki = 0; ki < plan.grid_k; ++ki) {
      a_tiles.push_back(pack_a(
          extract_tile(ap, mi * plan.tile_m, ki * plan.tile_k, plan.tile_m, plan.tile_k),
          cfg.r));
    }
  }
  std::vector<PackedStream> b_tiles;
  b_tiles.reserve(size_t(plan.grid_k) * plan.grid_n);
  for (int ki = 0; ki < plan.grid_k; ++ki) {
    for (int ni = 0; ni < plan.grid_n; ++ni) {
      b_tiles.push_back(pack_b(
          extract_tile(bp, ki * plan.tile_k, ni * plan.tile_n, plan.tile_k, plan.tile_n),
          cfg.r));
    }
  }

  Mxu mxu = build_mxu(cfg);
  mxu.set_trace(trace);
  mxu.set_output_fault(opt.output_fault);

  const int m_addr = plan.tile_m >> cfg.r;
  const int n_addr = plan.tile_n >> cfg.r;
  const uint64_t passes_per_rep =
      uint64_t(plan.grid_m) * plan.grid_n * plan.grid_k;
  const uint64_t total_passes = passes_per_rep * uint64_t(reps);

  // M-outer, N-middle, K-inner pass order; accumulation over k is ascending.
  auto pass_a = [&](uint64_t p) -> const PackedStream& {
    const uint64_t q = p % passes_per_rep;
    const int mi = int(q / (uint64_t(plan.grid_n) * plan.grid_k));
    const int ki = int(q % plan.grid_k);
    return a_tiles[size_t(mi) * plan.grid_k + ki];
  };
  auto pass_b = [&](uint64_t p) -> const PackedStream& {
    const uint64_t q = p % passes_per_rep;
    const uint64_t rem = q % (uint64_t(plan.grid_n) * plan.grid_k);
    const int ni = int(rem / plan.grid_k);
    const int ki = int(rem % plan.grid_k);
    return b_tiles[size_t(ki) * plan.grid_n + ni];
  };

  // Keep the first repetition's output vectors; later ones are only counted.
  const uint64_t keep_limit = passes_per_rep * uint64_t(m_addr);
  std::vector<Vec> kept;
  kept.reserve(size_t(std::min<uint64_t>(keep_limit, uint64_t(1) << 20)));
  uint64_t out_count = 0;
  auto take = [&](std::optional<Vec> c) {
    if (!c) return;
    if (out_count < keep_limit) kept.push_back(std::move(*c));
    ++out_count;
  };

  // First operand tile loads on its own; every later one streams behind the
  // previous pass's a vectors, so the double-buffered swap hides it.
  for (int j = 0; j < n_addr; ++j) {
    take(mxu.step(std::nullopt, false, std::pair{j, pass_b(0).addresses[size_t(j)]}));
  }
  for (uint64_t p = 0; p < total_passes; ++p) {
    const PackedStream& at = pass_a(p);
    const PackedStream* bt = p + 1 < total_passes ? &pass_b(p + 1) : nullptr;
    const int steps = std::max(m_addr, bt ? n_addr : 0);
    for (int t = 0; t < steps; ++t) {
      std::optional<Vec> av;
      if (t < m_addr) av = at.addresses[size_t(t)];
      std::optional<std::pair<int, Vec>> bv;
      if (bt && t < n_addr) bv = std::pair{t, bt->addresses[size_t(t)]};
      take(mxu.step(av, t == 0 && av.has_value(), bv));
    }
  }
  const uint64_t expect = total_passes * uint64_t(m_addr);
  const uint64_t guard = uint64_t(cfg.fill_latency()) + 4;
  for (uint64_t spin = 0; out_count < expect; ++spin) {
    if (spin > guard) throw std::logic_error("GEMM drain exceeded fill latency");
    take(mxu.step(std::nullopt, false, std::nullopt));
  }

  // Unpack the kept repetition and accumulate each tile product into its
  // (mi, ni) block of the padded result.
  Matrix cp(plan.grid_m * plan.tile_m, plan.grid_n * plan.tile_n, acc_width, true);
  std::vector<int64_t> acc_values(cp.elems.size(), 0);
  for (uint64_t q = 0; q < passes_per_rep; ++q) {
    const int mi = int(q / (uint64_t(plan.grid_n) * plan.grid_k));
    const uint64_t rem = q % (uint64_t(plan.grid_n) * plan.grid_k);
    const int ni = int(rem / plan.grid_k);
    PackedStream cs{StreamSide::C, cfg.r,           plan.tile_m,
                    plan.tile_n,   cfg.c_vec_len(), cfg.output_width(),
                    true,          {}};
    cs.addresses.assign(kept.begin() + long(q) * m_addr,
                        kept.begin() + long(q + 1) * m_addr);
    const Matrix tile = unpack_c(cs);
    for (int i = 0; i < plan.tile_m; ++i) {
      for (int j = 0; j < plan.tile_n; ++j) {
        int64_t& slot = acc_values[size_t(mi * plan.tile_m + i) * cp.cols +
                                   size_t(ni * plan.tile_n + j)];
        slot += tile.value_at(i, j);
        fxp_check_range(slot, acc_min, acc_max, "gemm accumulator");
      }
    }
  }
  for (size_t i = 0; i < acc_values.size(); ++i) {
    cp.elems[i] = FxpScalar(acc_values[i], acc_width, true);
  }

  GemmResult result{cp.cropped(a.rows, b.cols), CycleReport{}};
  result.report.cycles_total = mxu.cycles();
  result.report.fill_latency = uint64_t(cfg.fill_latency());
  result.report.mult_activations = mxu.mult_activations();
  result.report.useful_conventional_mults =
      uint64_t(reps) * uint64_t(a.rows) * uint64_t(a.cols) * uint64_t(b.cols);
  result.report.a_vectors_in = mxu.a_vectors_in();
  result.report.c_vectors_out = mxu.c_vectors_out();
  return result;
}

GemmResult run_gemm(const Matrix& a, const Matrix& b, const MxuConfig& cfg,
                    int reps, std::ostream* trace) {
  GemmOptions opt;
  opt.reps = reps;
  opt.trace = trace;
  return run_gemm(a, b, cfg, opt);
}

}  // namespace smm
