// smmsim: command-line front end for the simulator and resource model.
//
// Subcommands: verify | simulate | sweep | resources | opcount.
// Exit codes: 0 success, 1 verification/run failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smm/fxp.hpp"
#include "smm/gemm.hpp"
#include "smm/matrix_io.hpp"
#include "smm/metrics.hpp"
#include "smm/random.hpp"
#include "smm/reference.hpp"
#include "smm/run_config.hpp"

namespace {

using namespace smm;

// The architecture/run flags shared by the hardware-driving subcommands.
// Values are only applied over the config-file (or built-in) defaults when
// the flag was actually given, so flags override --config key by key.
struct ArchArgs {
  std::string arch;
  int r = 0;
  std::string leaf;
  int width = 0;
  bool sign = true;
  bool q_add_pipeline = false;
  double freq_mhz = 0.0;
  uint64_t seed = 0;
  int trials = 0;
  std::string config_path;

  CLI::Option* arch_o = nullptr;
  CLI::Option* r_o = nullptr;
  CLI::Option* leaf_o = nullptr;
  CLI::Option* width_o = nullptr;
  CLI::Option* signed_o = nullptr;
  CLI::Option* qp_o = nullptr;
  CLI::Option* freq_o = nullptr;
  CLI::Option* seed_o = nullptr;
  CLI::Option* trials_o = nullptr;
  CLI::Option* config_o = nullptr;
};

void add_arch_args(CLI::App* sub, ArchArgs& a) {
  a.arch_o = sub->add_option("--arch", a.arch,
                             "architecture family: mm (conventional blocked) "
                             "or smm (Strassen)");
  a.r_o = sub->add_option("--r", a.r, "recursion levels");
  a.leaf_o = sub->add_option("--leaf", a.leaf, "leaf array geometry, XxY");
  a.width_o =
      sub->add_option("--width", a.width, "operand element width in bits");
  a.signed_o = sub->add_option("--signed", a.sign,
                               "operands are signed (true/false)");
  a.qp_o = sub->add_option("--q-add-pipeline", a.q_add_pipeline,
                           "extra register stage in each combine level "
                           "(true/false)");
  a.freq_o = sub->add_option("--freq-mhz", a.freq_mhz,
                             "clock frequency, enables throughput roofs");
  a.seed_o = sub->add_option("--seed", a.seed, "PRNG seed for generated operands");
  a.trials_o = sub->add_option("--trials", a.trials,
                               "number of random products for verify");
  a.config_o = sub->add_option("--config", a.config_path,
                               "JSON run config; explicit flags override it");
}

RunConfig resolve(const ArchArgs& a) {
  RunConfig cfg;
  if (a.config_o->count()) {
    std::ifstream in(a.config_path);
    if (!in) {
      throw std::invalid_argument("cannot open \"" + a.config_path + "\"");
    }
    std::stringstream text;
    text << in.rdbuf();
    cfg = run_config_from_json(text.str());
  }
  if (a.arch_o->count()) cfg.arch = a.arch;
  if (a.r_o->count()) cfg.r = a.r;
  if (a.leaf_o->count()) {
    std::tie(cfg.leaf_x, cfg.leaf_y) = parse_leaf(a.leaf);
  }
  if (a.width_o->count()) cfg.width = a.width;
  if (a.signed_o->count()) cfg.is_signed = a.sign;
  if (a.qp_o->count()) cfg.q_add_pipeline = a.q_add_pipeline;
  if (a.freq_o->count()) cfg.freq_mhz = a.freq_mhz;
  if (a.seed_o->count()) cfg.seed = a.seed;
  if (a.trials_o->count()) cfg.trials = a.trials;
  cfg.validate();
  return cfg;
}

// "start:stop:step", stop inclusive; start > stop is an empty range.
std::vector<int> parse_range(const std::string& text) {
  const auto bad = [&text]() -> std::vector<int> {
    throw std::invalid_argument("range \"" + text +
                                "\" must look like start:stop:step");
  };
  int fields[3] = {0, 0, 0};
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const size_t end = (i < 2) ? text.find(':', pos) : text.size();
    if (end == std::string::npos || end == pos) return bad();
    size_t used = 0;
    try {
      fields[i] = std::stoi(text.substr(pos, end - pos), &used);
    } catch (const std::exception&) {
      return bad();
    }
    if (used != end - pos) return bad();
    pos = end + 1;
  }
  const int start = fields[0], stop = fields[1], step = fields[2];
  if (start < 1 || stop < 0 || step < 1 || stop > 65536) {
    throw std::invalid_argument(
        "range needs start >= 1, stop in [0, 65536], step >= 1");
  }
  std::vector<int> sizes;
  for (int n = start; n <= stop; n += step) sizes.push_back(n);
  return sizes;
}

std::string format4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int cmd_verify(const RunConfig& cfg, bool inject_fault) {
  const MxuConfig mxu = cfg.mxu();
  const auto [min_h, min_w] = min_matrix_size(mxu);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 eng(cfg.seed + uint64_t(trial));
    const int m = 1 + int(eng() % uint64_t(2 * min_h));
    const int k = 1 + int(eng() % uint64_t(2 * min_w));
    const int n = 1 + int(eng() % uint64_t(2 * min_h));
    const Matrix a = random_matrix(eng, m, k, cfg.width, cfg.is_signed);
    const Matrix b = random_matrix(eng, k, n, cfg.width, cfg.is_signed);
    GemmOptions opt;
    opt.output_fault = inject_fault;
    const GemmResult got = run_gemm(a, b, mxu, opt);
    const Matrix want = matmul_naive(a, b);
    if (!same_values(got.c, want)) {
      const auto where = first_value_mismatch(got.c, want);
      std::cout << "FAIL trial " << trial << ": " << m << "x" << k << " * "
                << k << "x" << n << ", first mismatch at ("
                << where->first << "," << where->second << "): got "
                << got.c.value_at(where->first, where->second)
                << ", expected "
                << want.value_at(where->first, where->second) << "\n";
      return 1;
    }
  }
  std::cout << "PASS " << cfg.trials << "/" << cfg.trials
            << " products exact (" << fxp_checks_performed()
            << " range checks, 0 violations)\n";
  return 0;
}

int cmd_simulate(const RunConfig& cfg, int n, const std::string& a_path,
                 const std::string& b_path, const std::string& c_path,
                 int reps, const std::string& trace_path) {
  const bool generated = n > 0;
  if (generated == (!a_path.empty() || !b_path.empty())) {
    throw std::invalid_argument(
        "give either --n, or both --a and --b, not a mixture");
  }
  if (!generated && (a_path.empty() || b_path.empty())) {
    throw std::invalid_argument("--a and --b must be given together");
  }

  Matrix a(1, 1, 1), b(1, 1, 1);
  if (generated) {
    std::mt19937_64 eng(cfg.seed);
    a = random_matrix(eng, n, n, cfg.width, cfg.is_signed);
    b = random_matrix(eng, n, n, cfg.width, cfg.is_signed);
  } else {
    a = read_matrix_csv_file(a_path);
    b = read_matrix_csv_file(b_path);
  }

  std::ofstream trace;
  GemmOptions opt;
  opt.reps = reps;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) {
      throw std::invalid_argument("cannot open \"" + trace_path + "\"");
    }
    opt.trace = &trace;
  }

  const MxuConfig mxu = cfg.mxu();
  const GemmResult res = run_gemm(a, b, mxu, opt);

  if (c_path.empty()) {
    write_matrix_csv(std::cout, res.c);
  } else {
    write_matrix_csv_file(c_path, res.c);
  }

  const int64_t mults = multiplier_count(mxu);
  std::cerr << "cycles " << res.report.cycles_total << "\n"
            << "fill_latency " << res.report.fill_latency << "\n"
            << "a_vectors_in " << res.report.a_vectors_in << "\n"
            << "c_vectors_out " << res.report.c_vectors_out << "\n"
            << "mult_activations " << res.report.mult_activations << "\n"
            << "useful_mults " << res.report.useful_conventional_mults << "\n"
            << "mce " << format4(mce_measured(res.report, mults)) << "\n"
            << "utilization "
            << format4(utilization_measured(res.report, mults)) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& range_text) {
  const std::vector<int> sizes = parse_range(range_text);
  const std::vector<SweepPoint> points =
      utilization_sweep(cfg.mxu(), sizes, cfg.seed, cfg.width, cfg.is_signed);
  std::cout << "n,cycles,mult_activations,useful_mults,mce,utilization\n";
  for (const SweepPoint& p : points) {
    std::cout << p.n << "," << p.cycles << "," << p.mult_activations << ","
              << p.useful_mults << "," << format4(p.mce) << ","
              << format4(p.utilization) << "\n";
  }
  return 0;
}

int cmd_resources(const RunConfig& cfg) {
  std::cout << report_json(resource_report(cfg.mxu(), cfg.freq_mhz));
  return 0;
}

int cmd_opcount(int n, const std::string& form) {
  OpCount counts;
  if (form == "conventional") {
    counts = ops_conventional(n);
  } else if (form == "strassen") {
    counts = ops_strassen_1(n);
  } else if (form == "winograd") {
    counts = ops_winograd_1(n);
  } else {
    throw std::invalid_argument(
        "form must be conventional, strassen, or winograd");
  }
  std::cout << "mults " << counts.mults << "\n"
            << "adds " << counts.adds << "\n"
            << "total " << counts.total << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bit-exact cycle-level simulator and resource model for conventional "
      "and Strassen multisystolic matrix units"};
  app.require_subcommand(1);

  ArchArgs verify_args, sim_args, sweep_args, res_args;
  bool inject_fault = false;
  int sim_n = 0;
  int sim_reps = 1;
  std::string a_path, b_path, c_path, trace_path, range_text, form;
  int op_n = 0;

  CLI::App* verify = app.add_subcommand(
      "verify", "run random products and compare against the exact reference");
  add_arch_args(verify, verify_args);
  verify->add_flag("--inject-q-fault", inject_fault)->group("");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run one product; result CSV to --c or stdout, "
                  "cycle report to stderr");
  add_arch_args(simulate, sim_args);
  simulate->add_option("--n", sim_n,
                       "generate random square n x n operands from --seed");
  simulate->add_option("--a", a_path, "left operand CSV file");
  simulate->add_option("--b", b_path, "right operand CSV file");
  simulate->add_option("--c", c_path, "write the product here, not stdout");
  simulate->add_option("--reps", sim_reps,
                       "stream the product back-to-back this many times");
  simulate->add_option("--trace", trace_path,
                       "write the per-cycle port log to this file");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "measure efficiency across square sizes, CSV to stdout");
  add_arch_args(sweep, sweep_args);
  sweep->add_option("--n-range", range_text, "sizes as start:stop:step")
      ->required();

  CLI::App* resources = app.add_subcommand(
      "resources", "print the analytical resource report as JSON");
  add_arch_args(resources, res_args);

  CLI::App* opcount = app.add_subcommand(
      "opcount", "scalar operation counts of one n x n product");
  opcount->add_option("--n", op_n, "matrix size")->required();
  opcount
      ->add_option("--form", form, "conventional, strassen, or winograd")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return cmd_verify(resolve(verify_args), inject_fault);
    if (*simulate) {
      return cmd_simulate(resolve(sim_args), sim_n, a_path, b_path, c_path,
                          sim_reps, trace_path);
    }
    if (*sweep) return cmd_sweep(resolve(sweep_args), range_text);
    if (*resources) return cmd_resources(resolve(res_args));
    if (*opcount) return cmd_opcount(op_n, form);
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
