#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "xylab/errors.hpp"
#include "xylab/gm_opt.hpp"
#include "xylab/model_core.hpp"
#include "xylab/parallel.hpp"
#include "xylab/sweep.hpp"
#include "xylab/thermal.hpp"
#include "xylab/verify.hpp"

namespace {

using namespace xylab;

struct Options {
  double h = 0.5;
  double eta = 0.5;
  int n = 12;
  std::string h_range = "0:2:21";
  std::string eta_range = "-1:1:21";
  double delta = 0.0;  // 0 selects a subcommand-specific default
  std::string kappa_range = "0.05:100:400";
  int m = 0;
  std::uint64_t seed = 1;
  int restarts = 16;
  double tol = 1e-10;
  double tol_deg = 0.0;
  std::string t_grid;
  std::string out;
  bool svg = false;
};

// Collects output text and writes it once, to --out or stdout.
class Sink {
 public:
  explicit Sink(std::string path) : path_(std::move(path)) {}
  std::ostream& stream() { return buf_; }
  void flush() {
    if (path_.empty()) {
      std::cout << buf_.str();
      std::cout.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw IoError("cannot open " + path_ + " for writing");
    f << buf_.str();
    if (!f) throw IoError("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

ModelParams params_of(const Options& o) { return ModelParams::make(o.h, o.eta, o.n); }

std::optional<double> tol_deg_of(const Options& o) {
  return o.tol_deg > 0.0 ? std::optional<double>(o.tol_deg) : std::nullopt;
}

GMOptions gm_options(const Options& o, int threads) {
  if (o.restarts < 1) throw ParameterError("--restarts must be >= 1");
  if (!(o.tol > 0.0)) throw ParameterError("--tol must be > 0");
  GMOptions g;
  g.restarts = o.restarts;
  g.tol = o.tol;
  g.seed = o.seed;
  g.threads = threads;
  return g;
}

std::string svg_path(const Options& o, const std::string& suffix) {
  if (o.out.empty()) throw ParameterError("--svg needs --out to name the plot files");
  std::filesystem::path p(o.out);
  p.replace_extension();
  return p.string() + suffix + ".svg";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("bad number in list: '" + item + "'");
    }
  }
  return v;
}

void cmd_spectrum(const Options& o) {
  const ModelParams p = params_of(o);
  const GapInfo g = gap_info(p, tol_deg_of(o));
  Sink sink(o.out);
  std::ostream& os = sink.stream();
  os << "# e0_plus=" << format_real(g.e0_plus) << "\n# e0_minus=" << format_real(g.e0_minus)
     << "\n# e0=" << format_real(g.e0) << "\n# delta=" << format_real(g.delta) << "\n# d0=" << g.d0
     << "\n# tol_deg=" << format_real(g.tol_deg) << "\n";
  os << "sector,k,theta,phi,epsilon\n";
  for (Parity s : {Parity::plus, Parity::minus}) {
    const SectorSpectrum sp = sector_spectrum(p, s);
    for (std::size_t k = 0; k < sp.thetas.size(); ++k) {
      os << to_string(s) << ',' << k + 1 << ',' << format_real(sp.thetas[k]) << ',' << format_real(sp.phis[k]) << ','
         << format_real(sp.epsilons[k]) << '\n';
    }
  }
  sink.flush();
}

void cmd_gm(const Options& o) {
  const ModelParams p = params_of(o);
  const GMResult r = gm_of_ground_state(p, tol_deg_of(o), gm_options(o, default_threads()));
  const RobustnessBound b = robustness_lower_bound(r.g_bits, r.d0);
  Sink sink(o.out);
  sink.stream() << "h,eta,n,d0,lambda_sq,g_bits,robustness_bound,restarts_used,sweeps,converged,seed,best_start\n"
                << format_real(p.h) << ',' << format_real(p.eta) << ',' << p.n << ',' << r.d0 << ','
                << format_real(r.lambda_sq) << ',' << format_real(r.g_bits) << ',' << format_real(b.value) << ','
                << r.restarts_used << ',' << r.sweeps << ',' << (r.converged ? 1 : 0) << ',' << r.seed << ','
                << r.best_start << '\n';
  sink.flush();
}

const char* const kThresholdHeader = "h,eta,n,d0,g_bits,kind,delta,t_th,target,residual,lo,hi,iterations,vacuous,separable";

void write_threshold_row(std::ostream& os, const ModelParams& p, const ThresholdResult& t) {
  os << format_real(p.h) << ',' << format_real(p.eta) << ',' << p.n << ',' << t.d0 << ',' << format_real(t.g_bits)
     << ',' << (t.kind == ThresholdKind::plain ? "plain" : "gapped") << ',' << format_real(t.delta) << ','
     << format_real(t.t_th) << ',' << format_real(t.target) << ',' << format_real(t.residual) << ','
     << format_real(t.lo) << ',' << format_real(t.hi) << ',' << t.iterations << ',' << (t.vacuous ? 1 : 0) << ','
     << (t.separable ? 1 : 0) << '\n';
}

void cmd_tth(const Options& o, bool gapped) {
  const ModelParams p = params_of(o);
  const GMResult g = gm_of_ground_state(p, tol_deg_of(o), gm_options(o, default_threads()));
  const PopulationModel model(p, PopulationMethod::free_fermion, tol_deg_of(o));
  Sink sink(o.out);
  sink.stream() << kThresholdHeader << '\n';
  write_threshold_row(sink.stream(), p, threshold_temperature(model, g.g_bits));
  if (gapped) {
    const double delta = o.delta > 0.0 ? o.delta : model.delta();
    write_threshold_row(sink.stream(), p, gapped_threshold(model, g.g_bits, delta));
  }
  sink.flush();
}

void cmd_sweep(const Options& o) {
  SweepConfig c;
  c.h_range = Range::parse(o.h_range);
  c.eta_range = Range::parse(o.eta_range);
  c.n = o.n;
  c.gm = gm_options(o, 1);
  c.tol_deg = tol_deg_of(o);
  c.out = o.out;
  c.emit_svg = o.svg;
  c.workers = default_threads();
  if (!o.t_grid.empty()) c.t_grid = parse_list(o.t_grid);
  if (c.emit_svg) svg_path(o, "");

  const std::vector<SweepRecord> records = run_sweep(c);
  Sink sink(o.out);
  write_sweep_csv(sink.stream(), records);
  sink.flush();

  if (!c.t_grid.empty()) {
    if (o.out.empty()) throw ParameterError("--t-grid needs --out for the population table");
    std::filesystem::path p(o.out);
    p.replace_extension();
    Sink pop(p.string() + "_population.csv");
    write_population_csv(pop.stream(), c);
    pop.flush();
  }
  if (c.emit_svg) {
    const std::vector<double> hs = c.h_range.values();
    const std::vector<double> etas = c.eta_range.values();
    std::vector<double> g, t;
    for (const SweepRecord& r : records) {
      g.push_back(r.g_bits);
      t.push_back(r.t_th);
    }
    write_heatmap_svg(svg_path(o, "_gbits"), "geometric measure G (bits), n=" + std::to_string(c.n), "h", "eta", hs,
                      etas, g);
    write_heatmap_svg(svg_path(o, "_tth"), "threshold temperature, n=" + std::to_string(c.n), "h", "eta", hs, etas,
                      t);
  }
}

void cmd_scan(const Options& o, bool h_given, bool eta_given) {
  if (h_given == eta_given) {
    throw ParameterError("scan needs exactly one of --h-range (at fixed --eta) or --eta-range (at fixed --h)");
  }
  ScanConfig c;
  c.axis = h_given ? ScanAxis::h : ScanAxis::eta;
  c.fixed = h_given ? o.eta : o.h;
  c.range = Range::parse(h_given ? o.h_range : o.eta_range);
  c.n = o.n;
  c.gm = gm_options(o, 1);
  c.tol_deg = tol_deg_of(o);
  c.workers = default_threads();
  if (o.svg) svg_path(o, "");

  const std::vector<ScanRow> rows = run_scan(c);
  Sink sink(o.out);
  write_scan_csv(sink.stream(), rows);
  sink.flush();

  if (o.svg) {
    Series g{"G (bits)", {}, {}};
    Series t{"T_th", {}, {}};
    for (const ScanRow& r : rows) {
      const double x = h_given ? r.record.h : r.record.eta;
      g.x.push_back(x);
      g.y.push_back(r.record.g_bits);
      t.x.push_back(x);
      t.y.push_back(r.record.t_th);
    }
    const std::string fixed = (h_given ? "eta=" : "h=") + format_real(c.fixed);
    write_line_svg(svg_path(o, "_gbits"), "geometric measure, " + fixed, h_given ? "h" : "eta", "G (bits)",
                   std::span<const Series>(&g, 1));
    write_line_svg(svg_path(o, "_tth"), "threshold temperature, " + fixed, h_given ? "h" : "eta", "T_th",
                   std::span<const Series>(&t, 1));
  }
}

void cmd_wstate(const Options& o) {
  const Range kr = Range::parse(o.kappa_range);
  if (!(kr.lo > 0.0)) throw ParameterError("--kappa-range must start above 0");
  const double delta = o.delta > 0.0 ? o.delta : 1.0;
  const double limit = delta / std::log(std::numbers::e / (std::numbers::e - 1.0));
  Sink sink(o.out);
  std::ostream& os = sink.stream();
  os << "kappa,t_bar,t_bar_over_delta,limit_over_delta\n";
  Series curve{o.m > 0 ? "m=" + std::to_string(o.m) : "m -> infinity", {}, {}};
  Series dashed{"limit", {}, {}};
  for (double kappa : kr.values()) {
    const double t = o.m > 0 ? wstate_gapped_threshold(WStateModel{o.m, delta, kappa})
                             : wstate_gapped_threshold_tdl(kappa, delta);
    os << format_real(kappa) << ',' << format_real(t) << ',' << format_real(t / delta) << ','
       << format_real(limit / delta) << '\n';
    curve.x.push_back(kappa);
    curve.y.push_back(t / delta);
    dashed.x.push_back(kappa);
    dashed.y.push_back(limit / delta);
  }
  if (o.svg) svg_path(o, "");
  sink.flush();
  if (o.svg) {
    const Series both[] = {curve, dashed};
    write_line_svg(svg_path(o, ""), "gapped threshold of the W-state model", "kappa", "T_bar / delta", both);
  }
}

void cmd_overlap(const Options& o) {
  const double dh = o.delta > 0.0 ? o.delta : 0.1;
  Sink sink(o.out);
  sink.stream() << "eta,dh,n,sector,overlap\n";
  for (Parity s : {Parity::plus, Parity::minus}) {
    sink.stream() << format_real(o.eta) << ',' << format_real(dh) << ',' << o.n << ',' << to_string(s) << ','
                  << format_real(vline_overlap(o.eta, dh, o.n, s)) << '\n';
  }
  sink.flush();
}

int cmd_verify(const Options& o) {
  const std::vector<CheckResult> results = run_verification(std::filesystem::temp_directory_path());
  Sink sink(o.out);
  print_report(sink.stream(), results);
  sink.flush();
  for (const CheckResult& r : results) {
    if (!r.passed) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"xylab: entanglement of the XY chain in a transverse field"};
  app.set_help_flag("--help", "print this help with all defaults and exit");
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file; command-line flags override it");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());

  app.add_option("--h", o.h, "transverse field h >= 0");
  app.add_option("--eta", o.eta, "anisotropy, -1 <= eta <= 1");
  app.add_option("--n", o.n, "number of sites (even, >= 4)");
  auto* h_range = app.add_option("--h-range", o.h_range, "h grid lo:hi:steps (sweep, scan)");
  auto* eta_range = app.add_option("--eta-range", o.eta_range, "eta grid lo:hi:steps (sweep, scan)");
  app.add_option("--delta", o.delta,
                 "gap for gapped-tth (default: model gap), level spacing for wstate (default 1), "
                 "field offset dh for overlap-vline (default 0.1)");
  app.add_option("--kappa-range", o.kappa_range, "gap ratio grid lo:hi:steps (wstate)");
  app.add_option("--m", o.m, "W-state parties; 0 means m -> infinity (wstate)");
  app.add_option("--seed", o.seed, "optimizer seed");
  app.add_option("--restarts", o.restarts, "random optimizer restarts");
  app.add_option("--tol", o.tol, "optimizer convergence tolerance per sweep");
  app.add_option("--tol-deg", o.tol_deg, "ground degeneracy tolerance; 0 means 1e-8 max(1, |E0|)");
  app.add_option("--t-grid", o.t_grid, "comma-separated temperatures for the sweep population table");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_flag("--svg", o.svg, "also write SVG plots next to --out");

  auto* spectrum = app.add_subcommand("spectrum", "quasiparticle spectrum of both parity sectors");
  auto* gm = app.add_subcommand("gm", "geometric measure of the ground support");
  auto* tth = app.add_subcommand("tth", "threshold temperature");
  auto* gtth = app.add_subcommand("gapped-tth", "threshold and gapped threshold temperature");
  auto* sweep = app.add_subcommand("sweep", "G and T_th over an (h, eta) grid");
  auto* scan = app.add_subcommand("scan", "G and T_th along a line, with second differences");
  auto* wstate = app.add_subcommand("wstate", "gapped threshold of the W-state model versus kappa");
  auto* overlap = app.add_subcommand("overlap-vline", "overlap of sector ground states across h = 1");
  auto* verify = app.add_subcommand("verify", "run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) cmd_spectrum(o);
    if (gm->parsed()) cmd_gm(o);
    if (tth->parsed()) cmd_tth(o, false);
    if (gtth->parsed()) cmd_tth(o, true);
    if (sweep->parsed()) cmd_sweep(o);
    if (scan->parsed()) cmd_scan(o, h_range->count() > 0, eta_range->count() > 0);
    if (wstate->parsed()) cmd_wstate(o);
    if (overlap->parsed()) cmd_overlap(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
