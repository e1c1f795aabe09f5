#include "smm/mxu.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace smm {

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void MxuConfig::validate() const {
  if (r < 0 || r > 6) {
    throw std::invalid_argument("recursion depth must be in [0, 6]");
  }
  if (leaf_x < 1 || leaf_y < 1 || leaf_x > 1024 || leaf_y > 1024) {
    throw std::invalid_argument("leaf dimensions must be in [1, 1024]");
  }
  if (input_width < 1) {
    throw std::invalid_argument("input width must be positive");
  }
  if (output_width() > kMaxWidth) {
    throw std::invalid_argument(
        "datapath would need " + std::to_string(output_width()) +
        " bits; widths above " + std::to_string(kMaxWidth) +
        " are not supported");
  }
}

int MxuConfig::leaf_count() const {
  int n = 1;
  for (int i = 0; i < r; ++i) n *= strassen() ? 7 : 8;
  return n;
}

// ---------------------------------------------------------------------------
// Skew buffer
// ---------------------------------------------------------------------------

SkewBuffer::SkewBuffer(std::vector<int> depths, FxpScalar fill) {
  lanes_.resize(depths.size());
  for (size_t k = 0; k < depths.size(); ++k) {
    if (depths[k] < 0) throw std::invalid_argument("lane depth must be >= 0");
    lanes_[k].assign(size_t(depths[k]), fill);
  }
}

Vec SkewBuffer::shift(const Vec& in) {
  if (in.size() != lanes_.size()) {
    throw std::invalid_argument("skew buffer lane count mismatch");
  }
  Vec out(in.size());
  for (size_t k = 0; k < lanes_.size(); ++k) {
    auto& lane = lanes_[k];
    if (lane.empty()) {
      out[k] = in[k];
    } else {
      lane.push_back(in[k]);
      out[k] = lane.front();
      lane.pop_front();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Leaf array
// ---------------------------------------------------------------------------

LeafArray::LeafArray(int x, int y, int input_width, SimCounters* counters)
    : x_(x),
      y_(y),
      input_width_(input_width),
      acc_width_(2 * input_width + ceil_log2(x)),
      counters_(counters ? counters : &own_) {
  if (x < 1 || y < 1) throw std::invalid_argument("leaf dimensions must be positive");
  if (acc_width_ > kMaxWidth) {
    throw std::invalid_argument("leaf accumulator width exceeds supported max");
  }
  in_min_ = fxp_min_value(input_width_, true);
  in_max_ = fxp_max_value(input_width_, true);
  acc_min_ = fxp_min_value(acc_width_, true);
  acc_max_ = fxp_max_value(acc_width_, true);
  b_active_.assign(size_t(x_) * y_, 0);
  b_shadow_.assign(size_t(x_) * y_, 0);
  out_pipe_.assign(size_t(latency()), std::nullopt);
}

void LeafArray::load_b_column(int col, const Vec& column) {
  if (col < 0 || col >= y_) throw std::invalid_argument("b column index out of range");
  if (int(column.size()) != x_) {
    throw std::invalid_argument("b column length must equal leaf x");
  }
  for (int i = 0; i < x_; ++i) {
    const FxpScalar& e = column[i];
    if (!e.is_signed || e.width > input_width_) {
      throw std::invalid_argument("b element format exceeds leaf input width");
    }
    b_shadow_[size_t(i) * y_ + col] = e.value;
  }
}

void LeafArray::load_b(const Matrix& b_tile) {
  if (b_tile.rows != x_ || b_tile.cols != y_) {
    throw std::invalid_argument("b tile must be leaf_x x leaf_y");
  }
  Vec column(static_cast<size_t>(x_));
  for (int j = 0; j < y_; ++j) {
    for (int i = 0; i < x_; ++i) column[size_t(i)] = b_tile.at(i, j);
    load_b_column(j, column);
  }
}

std::optional<Vec> LeafArray::step(const std::optional<Vec>& a,
                                   bool tile_start) {
  std::optional<Vec> produced;
  if (a) {
    if (tile_start) b_active_ = b_shadow_;
    if (int(a->size()) != x_) {
      throw std::invalid_argument("a vector length must equal leaf x");
    }
    // The MAC plane runs on raw values; the ingress checks below plus the
    // per-step accumulator range checks are the per-PE width contracts.
    std::vector<int64_t> acc(size_t(y_), 0);
    for (int i = 0; i < x_; ++i) {
      const FxpScalar& e = (*a)[size_t(i)];
      if (!e.is_signed || e.width != input_width_) {
        throw std::invalid_argument("a element width must match leaf input width");
      }
      fxp_check_range(e.value, in_min_, in_max_, "leaf a ingress");
      const int64_t av = e.value;
      const int64_t* brow = &b_active_[size_t(i) * y_];
      for (int j = 0; j < y_; ++j) {
        acc[size_t(j)] += av * brow[j];
        fxp_check_range(acc[size_t(j)], acc_min_, acc_max_, "leaf accumulator");
      }
    }
    counters_->mult_activations += uint64_t(x_) * y_;
    Vec c(static_cast<size_t>(y_));
    for (int j = 0; j < y_; ++j) c[size_t(j)] = FxpScalar(acc[size_t(j)], acc_width_);
    produced = std::move(c);
  }
  out_pipe_.push_back(std::move(produced));
  std::optional<Vec> out = std::move(out_pipe_.front());
  out_pipe_.pop_front();
  return out;
}

// ---------------------------------------------------------------------------
// Addition banks
// ---------------------------------------------------------------------------

namespace {

Vec add_slices(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("quadrant slice length mismatch");
  }
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = fxp_add(a[i], b[i]);
  return out;
}

Vec sub_slices(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("quadrant slice length mismatch");
  }
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = fxp_sub(a[i], b[i]);
  return out;
}

Vec promote_slice(const Vec& a, int width) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = fxp_promote(a[i], width);
  return out;
}

int bank_input_width(const QuadrantSlices& q) {
  if (q.q11.empty() || q.q11.size() != q.q12.size() ||
      q.q11.size() != q.q21.size() || q.q11.size() != q.q22.size()) {
    throw std::invalid_argument("quadrant slices must be equal-length and non-empty");
  }
  return q.q11[0].width;
}

}  // namespace

std::array<Vec, 7> a_addition_bank(const QuadrantSlices& q) {
  const int w = bank_input_width(q) + 1;
  return {add_slices(q.q11, q.q22), add_slices(q.q21, q.q22),
          promote_slice(q.q11, w),  promote_slice(q.q22, w),
          add_slices(q.q11, q.q12), sub_slices(q.q21, q.q11),
          sub_slices(q.q12, q.q22)};
}

std::array<Vec, 7> b_addition_bank(const QuadrantSlices& q) {
  const int w = bank_input_width(q) + 1;
  return {add_slices(q.q11, q.q22), promote_slice(q.q11, w),
          sub_slices(q.q12, q.q22), sub_slices(q.q21, q.q11),
          promote_slice(q.q22, w),  add_slices(q.q11, q.q12),
          add_slices(q.q21, q.q22)};
}

std::array<Vec, 4> q_addition_bank(const std::array<Vec, 7>& q) {
  for (const Vec& v : q) {
    if (v.empty() || v.size() != q[0].size()) {
      throw std::invalid_argument("child products must be equal-length and non-empty");
    }
  }
  const int w = q[0][0].width + 2;
  // Three-term quadrants use balanced trees so everything lands at the same
  // width; spelled out, that is still eight elementwise adder vectors.
  return {add_slices(add_slices(q[0], q[3]), sub_slices(q[6], q[4])),
          promote_slice(add_slices(q[2], q[4]), w),
          promote_slice(add_slices(q[1], q[3]), w),
          add_slices(sub_slices(q[0], q[1]), add_slices(q[2], q[5]))};
}

// ---------------------------------------------------------------------------
// Node tree
// ---------------------------------------------------------------------------

namespace detail {

struct ABundle {
  Vec data;
  bool tile_start = false;
};

class Node {
 public:
  virtual ~Node() = default;
  virtual std::optional<Vec> step_a(std::optional<ABundle> in) = 0;
  virtual void apply_b(int col, const Vec& v) = 0;
  virtual void collect(MxuStructure& s) const = 0;
  virtual void set_output_fault(bool on) { fault_ = on; }

 protected:
  bool fault_ = false;
};

namespace {

std::unique_ptr<Node> make_node(const MxuConfig& cfg, int level,
                                SimCounters* counters);

// Flipping the low bit moves any representable value by +-1 and never leaves
// the declared range, so an injected fault shows up as a value mismatch, not
// as a width violation.
void corrupt_first(Vec& v) {
  if (!v.empty()) v[0] = FxpScalar(v[0].value ^ 1, v[0].width, v[0].is_signed);
}

/// Shared shape of both inner-node families: a one-cycle input register in
/// front of the children and a small output pipe behind the combine bank.
template <int kKids>
class InnerBase : public Node {
 public:
  InnerBase(const MxuConfig& cfg, int level, SimCounters* counters)
      : level_(level), out_pipe_depth_(1 + (cfg.q_add_pipeline ? 1 : 0)) {
    const int chunk = 1 << (2 * (level - 1));
    a_slice_len_ = chunk * cfg.leaf_x;
    c_slice_len_ = chunk * cfg.leaf_y;
    for (auto& kid : kids_) kid = make_node(cfg, level - 1, counters);
    out_pipe_.assign(size_t(out_pipe_depth_), std::nullopt);
  }

  std::optional<Vec> step_a(std::optional<ABundle> in) final {
    std::optional<std::array<ABundle, kKids>> fan;
    if (in) {
      if (int(in->data.size()) != 4 * a_slice_len_) {
        throw std::invalid_argument("node a vector length mismatch");
      }
      fan = fan_out(split_quadrants(in->data, level_, StreamSide::A),
                    in->tile_start);
    }
    // One register stage between the input bank and the children.
    std::optional<std::array<ABundle, kKids>> due = std::move(in_reg_);
    in_reg_ = std::move(fan);

    std::array<std::optional<Vec>, kKids> produced;
    int valued = 0;
    for (int i = 0; i < kKids; ++i) {
      produced[size_t(i)] = kids_[size_t(i)]->step_a(
          due ? std::optional<ABundle>(std::move((*due)[size_t(i)]))
              : std::nullopt);
      if (produced[size_t(i)]) ++valued;
    }
    if (valued != 0 && valued != kKids) {
      throw std::logic_error("children fell out of lockstep");
    }

    std::optional<Vec> combined;
    if (valued) {
      if (fault_) corrupt_first(*produced[0]);
      combined = combine(produced);
    }
    out_pipe_.push_back(std::move(combined));
    std::optional<Vec> out = std::move(out_pipe_.front());
    out_pipe_.pop_front();
    return out;
  }

  void collect(MxuStructure& s) const final {
    collect_own(s);
    for (const auto& kid : kids_) kid->collect(s);
  }

 protected:
  virtual std::array<ABundle, kKids> fan_out(QuadrantSlices q, bool start) = 0;
  virtual Vec combine(std::array<std::optional<Vec>, kKids>& p) = 0;
  virtual void collect_own(MxuStructure& s) const = 0;

  int level_;
  int a_slice_len_ = 0, c_slice_len_ = 0;
  int out_pipe_depth_;
  std::array<std::unique_ptr<Node>, kKids> kids_;
  std::optional<std::array<ABundle, kKids>> in_reg_;
  std::deque<std::optional<Vec>> out_pipe_;
};

class SmmInner final : public InnerBase<7> {
 public:
  SmmInner(const MxuConfig& cfg, int level, SimCounters* counters)
      : InnerBase(cfg, level, counters), leaf_y_(cfg.leaf_y), leaf_x_(cfg.leaf_x) {}

  void apply_b(int col, const Vec& v) final {
    const std::array<Vec, 7> s =
        b_addition_bank(split_quadrants(v, level_, StreamSide::B));
    for (size_t i = 0; i < 7; ++i) kids_[i]->apply_b(col, s[i]);
  }

 private:
  std::array<ABundle, 7> fan_out(QuadrantSlices q, bool start) final {
    std::array<Vec, 7> t = a_addition_bank(q);
    std::array<ABundle, 7> out;
    for (size_t i = 0; i < 7; ++i) out[i] = ABundle{std::move(t[i]), start};
    return out;
  }

  Vec combine(std::array<std::optional<Vec>, 7>& p) final {
    const std::array<Vec, 7> q{std::move(*p[0]), std::move(*p[1]),
                               std::move(*p[2]), std::move(*p[3]),
                               std::move(*p[4]), std::move(*p[5]),
                               std::move(*p[6])};
    std::array<Vec, 4> c = q_addition_bank(q);
    return merge_quadrants(c[0], c[1], c[2], c[3], level_);
  }

  void collect_own(MxuStructure& s) const final {
    // 5 input addition vectors per operand side plus 8 output addition
    // vectors, each as wide as the quadrant slice at this level; the
    // alternative count reads the widths as one sub-block row instead.
    s.adders += int64_t(10) * a_slice_len_ + int64_t(8) * c_slice_len_;
    const int64_t chunk = int64_t(1) << (level_ - 1);
    s.adders_block_phrasing += 10 * chunk * leaf_x_ + 8 * chunk * leaf_y_;
  }

  int leaf_y_, leaf_x_;
};

class MmInner final : public InnerBase<8> {
 public:
  MmInner(const MxuConfig& cfg, int level, SimCounters* counters)
      : InnerBase(cfg, level, counters), leaf_y_(cfg.leaf_y) {}

  void apply_b(int col, const Vec& v) final {
    QuadrantSlices b = split_quadrants(v, level_, StreamSide::B);
    kids_[0]->apply_b(col, b.q11);
    kids_[1]->apply_b(col, b.q21);
    kids_[2]->apply_b(col, b.q12);
    kids_[3]->apply_b(col, b.q22);
    kids_[4]->apply_b(col, b.q11);
    kids_[5]->apply_b(col, b.q21);
    kids_[6]->apply_b(col, b.q12);
    kids_[7]->apply_b(col, b.q22);
  }

 private:
  std::array<ABundle, 8> fan_out(QuadrantSlices q, bool start) final {
    return {ABundle{q.q11, start}, ABundle{q.q12, start},
            ABundle{q.q11, start}, ABundle{q.q12, start},
            ABundle{q.q21, start}, ABundle{q.q22, start},
            ABundle{q.q21, start}, ABundle{q.q22, start}};
  }

  Vec combine(std::array<std::optional<Vec>, 8>& p) final {
    Vec c11 = add_slices(*p[0], *p[1]);
    Vec c12 = add_slices(*p[2], *p[3]);
    Vec c21 = add_slices(*p[4], *p[5]);
    Vec c22 = add_slices(*p[6], *p[7]);
    return merge_quadrants(c11, c12, c21, c22, level_);
  }

  void collect_own(MxuStructure& s) const final {
    s.adders += int64_t(4) * c_slice_len_;
    s.adders_block_phrasing += 4 * (int64_t(1) << (level_ - 1)) * leaf_y_;
  }

  int leaf_y_;
};

class LeafNode final : public Node {
 public:
  LeafNode(const MxuConfig& cfg, SimCounters* counters)
      : leaf_(cfg.leaf_x, cfg.leaf_y, cfg.leaf_input_width(), counters) {}

  std::optional<Vec> step_a(std::optional<ABundle> in) final {
    if (!in) return leaf_.step(std::nullopt, false);
    std::optional<Vec> out = leaf_.step(std::move(in->data), in->tile_start);
    if (fault_ && out) corrupt_first(*out);
    return out;
  }

  void apply_b(int col, const Vec& v) final { leaf_.load_b_column(col, v); }

  void collect(MxuStructure& s) const final {
    s.leaves += 1;
    s.multipliers += int64_t(leaf_.x()) * leaf_.y();
  }

 private:
  LeafArray leaf_;
};

std::unique_ptr<Node> make_node(const MxuConfig& cfg, int level,
                                SimCounters* counters) {
  if (level == 0) return std::make_unique<LeafNode>(cfg, counters);
  if (cfg.strassen()) return std::make_unique<SmmInner>(cfg, level, counters);
  return std::make_unique<MmInner>(cfg, level, counters);
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// Top level
// ---------------------------------------------------------------------------

namespace {

std::vector<int> skew_depths(int lanes, int chunk, bool complement) {
  std::vector<int> d(static_cast<size_t>(lanes));
  for (int k = 0; k < lanes; ++k) {
    const int phase = k % chunk;
    d[size_t(k)] = complement ? (chunk - 1) - phase : phase;
  }
  return d;
}

}  // namespace

Mxu::Mxu(const MxuConfig& cfg)
    : cfg_(cfg),
      a_skew_(skew_depths(cfg.a_vec_len(), cfg.leaf_x, false),
              FxpScalar(0, cfg.input_width)),
      a_deskew_(skew_depths(cfg.a_vec_len(), cfg.leaf_x, true),
                FxpScalar(0, cfg.input_width)),
      a_flags_(size_t(cfg.leaf_x - 1), PortFlags{}),
      b_delay_(size_t(cfg.a_input_latency()), std::nullopt),
      c_delay_(size_t(cfg.leaf_y - 1), std::nullopt) {
  cfg_.validate();
  root_ = detail::make_node(cfg_, cfg_.r, &counters_);
}

Mxu::~Mxu() = default;
Mxu::Mxu(Mxu&&) noexcept = default;
Mxu& Mxu::operator=(Mxu&&) noexcept = default;

void Mxu::set_output_fault(bool on) { root_->set_output_fault(on); }

void Mxu::trace_vec(const char* port, const Vec& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    *trace_ << cycle_ << ",mxu," << port << "[" << i << "]," << v[i].value
            << "\n";
  }
}

std::optional<Vec> Mxu::step(const std::optional<Vec>& a, bool tile_start,
                             const std::optional<std::pair<int, Vec>>& b) {
  if (a) {
    if (int(a->size()) != cfg_.a_vec_len()) {
      throw std::invalid_argument("a vector length does not match config");
    }
    for (const auto& e : *a) {
      if (!e.is_signed || e.width != cfg_.input_width) {
        throw std::invalid_argument("a element width must equal input width");
      }
    }
    ++a_in_;
    if (trace_) trace_vec("a_in", *a);
  }

  // Boundary: triangular skew then its complement, a uniform leaf_x-1 delay
  // that exposes the physical edge wavefront in between. Bubbles shift
  // zeros through, like the real shift registers would.
  Vec in_vec;
  if (a) in_vec = *a;
  else in_vec.assign(size_t(cfg_.a_vec_len()), FxpScalar(0, cfg_.input_width));
  Vec skewed = a_skew_.shift(in_vec);
  if (trace_) trace_vec("a_skew", skewed);
  Vec aligned = a_deskew_.shift(std::move(skewed));
  PortFlags flags = a_flags_.shift(PortFlags{a.has_value(), tile_start});

  std::optional<Vec> c = root_->step_a(
      flags.valid ? std::optional<detail::ABundle>(
                        detail::ABundle{std::move(aligned), flags.tile_start})
                  : std::nullopt);
  std::optional<Vec> out = c_delay_.shift(std::move(c));

  // B columns land after the same input latency as the a path, and strictly
  // after this cycle's tile-boundary swap, mirroring wavefront order.
  if (b) {
    if (int(b->second.size()) != cfg_.b_vec_len()) {
      throw std::invalid_argument("b vector length does not match config");
    }
    for (const auto& e : b->second) {
      if (!e.is_signed || e.width != cfg_.input_width) {
        throw std::invalid_argument("b element width must equal input width");
      }
    }
    if (trace_) trace_vec("b_in", b->second);
  }
  std::optional<std::pair<int, Vec>> due = b_delay_.shift(b);
  if (due) root_->apply_b(due->first, due->second);

  if (out) {
    ++c_out_;
    if (trace_) trace_vec("c_out", *out);
  }
  ++cycle_;
  return out;
}

MxuStructure Mxu::structure() const {
  MxuStructure s;
  root_->collect(s);
  return s;
}

Mxu build_mxu(const MxuConfig& cfg) {
  cfg.validate();
  return Mxu(cfg);
}

std::pair<PackedStream, CycleReport> mxu_run_tile(Mxu& mxu,
                                                  const PackedStream& a,
                                                  const PackedStream& b) {
  const MxuConfig& cfg = mxu.config();
  if (a.r != cfg.r || b.r != cfg.r || a.side == StreamSide::B ||
      b.side != StreamSide::B) {
    throw std::invalid_argument("streams do not match the unit layout");
  }
  if (a.vec_len != cfg.a_vec_len() || b.vec_len != cfg.b_vec_len() ||
      a.tile_cols != b.tile_rows) {
    throw std::invalid_argument("stream shapes do not match the unit");
  }

  auto widen = [&](const Vec& v) {
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      out[i] = fxp_promote(fxp_to_signed(v[i]), cfg.input_width);
    }
    return out;
  };

  const uint64_t act0 = mxu.mult_activations();
  const uint64_t cyc0 = mxu.cycles();
  std::vector<Vec> outs;
  auto take = [&](std::optional<Vec> c) {
    if (c) outs.push_back(std::move(*c));
  };

  for (size_t j = 0; j < b.addresses.size(); ++j) {
    take(mxu.step(std::nullopt, false, std::pair{int(j), widen(b.addresses[j])}));
  }
  for (size_t i = 0; i < a.addresses.size(); ++i) {
    take(mxu.step(widen(a.addresses[i]), i == 0, std::nullopt));
  }
  const uint64_t guard = uint64_t(cfg.fill_latency()) + 4;
  for (uint64_t spin = 0; outs.size() < a.addresses.size(); ++spin) {
    if (spin > guard) throw std::logic_error("tile drain exceeded fill latency");
    take(mxu.step(std::nullopt, false, std::nullopt));
  }

  PackedStream c{StreamSide::C, cfg.r,          a.tile_rows,
                 b.tile_cols,   cfg.c_vec_len(), cfg.output_width(),
                 true,          std::move(outs)};
  CycleReport rep;
  rep.cycles_total = mxu.cycles() - cyc0;
  rep.fill_latency = uint64_t(cfg.fill_latency());
  rep.mult_activations = mxu.mult_activations() - act0;
  rep.useful_conventional_mults =
      uint64_t(a.tile_rows) * a.tile_cols * b.tile_cols;
  rep.a_vectors_in = a.addresses.size();
  rep.c_vectors_out = c.addresses.size();
  return {std::move(c), rep};
}

}  // namespace smm
