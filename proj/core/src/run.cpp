#include "evwg/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "evwg/ensemble.hpp"
#include "evwg/error.hpp"
#include "evwg/io.hpp"
#include "evwg/quantum.hpp"
#include "evwg/resonance.hpp"
#include "evwg/units.hpp"

namespace evwg {

namespace {

template <typename F>
auto guarded(const char* op, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(op, e.what());
  }
}

class Outputs {
 public:
  Outputs(std::filesystem::path dir, std::string stem) : dir_(std::move(dir)), stem_(std::move(stem)) {}

  void write(const std::string& suffix, const std::string& contents) {
    const auto path = dir_ / (stem_ + suffix);
    guarded("cli_io.write_output", [&] {
      write_file_atomic(path, contents);
      return 0;
    });
    files_.push_back({path, sha256_hex(contents), contents.size()});
  }
  void write_grid(const std::string& suffix, const Grid& g) { write(suffix, encode_grid(g)); }

  std::vector<OutputFile>& files() { return files_; }

 private:
  std::filesystem::path dir_;
  std::string stem_;
  std::vector<OutputFile> files_;
};

std::string strobe_tag(int s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_s%03d", s);
  return buf;
}

std::string radial_csv(const std::vector<RadialBin>& bins) {
  CsvWriter csv({"r_center", "count"});
  for (const auto& b : bins) {
    csv.field(b.r_center).field(static_cast<std::uint64_t>(b.count));
    csv.end_row();
  }
  return csv.str();
}

void quantity_row(CsvWriter& csv, const char* name, double v) {
  csv.field(name).field(v);
  csv.end_row();
}

void run_convert_units(const RunConfig& cfg, Outputs& out, std::ostringstream& note) {
  const PhysicalParams& p = *cfg.physical;
  const DimensionlessParams& dp = cfg.params;
  CsvWriter csv({"quantity", "value"});
  guarded("units_scaling.convert", [&] {
    const auto ec = evanescent_coefficients(p);
    quantity_row(csv, "alpha", ec.alpha);
    quantity_row(csv, "kappa", ec.kappa);
    quantity_row(csv, "wall_strength_J", wall_strength(p));
    quantity_row(csv, "xi", dp.xi);
    quantity_row(csv, "r1", dp.r1);
    quantity_row(csv, "kbar", dp.kbar);
    quantity_row(csv, "omega", dp.omega_mod);
    quantity_row(csv, "eps", dp.eps);
    quantity_row(csv, "axis_potential", dp.axis_potential());
    quantity_row(csv, "velocity_unit_m_per_s", momentum_to_velocity(1.0, p));
    quantity_row(csv, "sigma_p_x", momentum_variance_from_temperature(p.temperature_x, p));
    quantity_row(csv, "sigma_p_y", momentum_variance_from_temperature(p.temperature_y, p));
    quantity_row(csv, "rms_velocity_sigma_p_0.1_m_per_s", momentum_to_velocity(std::sqrt(0.1), p));
    return 0;
  });
  out.write("_units.csv", csv.str());
  note << "xi=" << format_double(dp.xi) << " r1=" << format_double(dp.r1) << " kbar=" << format_double(dp.kbar);
}

void run_freqmap(const RunConfig& cfg, Outputs& out, std::ostringstream& note) {
  const auto& fs = *cfg.freqmap;
  const DimensionlessParams& dp = cfg.params;
  const double s = dp.axis_potential();
  if (!(fs.h_max > s)) throw RunError("resonance_analysis.frequency_curve", "h_max must exceed the axis potential");
  std::vector<double> grid(fs.points);
  const double lo = std::max(fs.h_min, s * (1.0 + 1e-6));
  for (int i = 0; i < fs.points; ++i) {
    const double f = fs.points == 1 ? 0.0 : static_cast<double>(i) / (fs.points - 1);
    if (fs.log_spacing) {
      const double a = std::log(lo - s), b = std::log(fs.h_max - s);
      grid[i] = s + std::exp(a + f * (b - a));
    } else {
      grid[i] = lo + f * (fs.h_max - lo);
    }
  }
  const auto curve = guarded("resonance_analysis.frequency_curve",
                             [&] { return frequency_curve(dp, grid, fs.quad_points); });
  CsvWriter csv({"h0", "x_m", "omega0"});
  for (const auto& r : curve) {
    csv.field(r.h0).field(r.x_m).field(r.omega0);
    csv.end_row();
  }
  out.write("_freqmap.csv", csv.str());

  const auto radii = guarded("resonance_analysis.resonance_radii",
                             [&] { return resonance_radii(dp, fs.j_max, fs.h_max); });
  CsvWriter res({"j", "h0", "x_m"});
  for (const auto& r : radii) {
    res.field(r.j).field(r.h0).field(r.x_m);
    res.end_row();
  }
  out.write("_resonances.csv", res.str());
  note << "rows=" << curve.size() << " resonances=" << radii.size();
}

void run_portrait(const RunConfig& cfg, Outputs& out, std::ostringstream& note, int threads) {
  const auto& ps = *cfg.portrait;
  std::vector<PhaseState> seeds;
  for (int j = 0; j < ps.n_px; ++j) {
    const double px = ps.n_px == 1 ? ps.px_min : ps.px_min + (ps.px_max - ps.px_min) * j / (ps.n_px - 1);
    for (int i = 0; i < ps.n_x; ++i) {
      const double x = ps.n_x == 1 ? ps.x_min : ps.x_min + (ps.x_max - ps.x_min) * i / (ps.n_x - 1);
      seeds.push_back({x, 0.0, px, 0.0, 0.0});
    }
  }
  const auto records = guarded("classical_dynamics.portrait",
                               [&] { return portrait(seeds, ps.strobes, cfg.params, cfg.integrator, threads); });
  CsvWriter csv({"orbit", "strobe", "x", "px"});
  for (const auto& r : records) {
    csv.field(static_cast<std::uint64_t>(r.seed)).field(r.strobe).field(r.x).field(r.px);
    csv.end_row();
  }
  out.write("_portrait.csv", csv.str());
  note << "orbits=" << seeds.size() << " strobes=" << ps.strobes;
}

void run_fixedpoints(const RunConfig& cfg, Outputs& out, std::ostringstream& note, int threads) {
  const auto& fs = *cfg.fixedpoints;
  const DimensionlessParams& dp = cfg.params;
  SearchBox box = fs.box;
  if (!fs.box_set) {
    const double a = dp.r1 + 1.0;
    const double p = std::sqrt(2.0 * dp.xi);
    box = {-a, a, -p, p};
  }
  FixedPointSearch search = fs.search;
  search.threads = threads;
  CsvWriter csv({"x", "px", "residual", "stability", "period"});
  std::size_t elliptic = 0, total = 0;
  for (int period : fs.periods) {
    const auto points = guarded("resonance_analysis.find_fixed_points",
                                [&] { return find_fixed_points(dp, cfg.integrator, box, period, search); });
    for (const auto& fp : points) {
      csv.field(fp.x).field(fp.px).field(fp.residual).field(to_string(fp.stability)).field(fp.period);
      csv.end_row();
      ++total;
      if (fp.stability == Stability::elliptic) ++elliptic;
    }
  }
  out.write("_fixedpoints.csv", csv.str());

  DimensionlessParams unmodulated = dp;
  unmodulated.eps = 0.0;
  const double h_max = unmodulated.xi * std::exp(box.x_max - dp.r1) + 0.5 * box.px_max * box.px_max;
  const auto radii = guarded("resonance_analysis.resonance_radii",
                             [&] { return resonance_radii(unmodulated, fs.j_max, h_max); });
  CsvWriter res({"j", "h0", "x_m"});
  for (const auto& r : radii) {
    res.field(r.j).field(r.h0).field(r.x_m);
    res.end_row();
  }
  out.write("_resonances.csv", res.str());
  note << "fixed_points=" << total << " elliptic=" << elliptic;
}

void run_ensemble(const RunConfig& cfg, Outputs& out, std::ostringstream& note, std::uint64_t seed,
                  int threads) {
  const auto& es = *cfg.ensemble;
  EnsembleSpec spec = es.spec;
  spec.seed = seed;
  auto atoms = guarded("ensemble_sim.sample_initial", [&] { return sample_initial(spec, threads); });
  std::vector<int> strobes = es.snapshot_strobes;
  std::sort(strobes.begin(), strobes.end());
  strobes.erase(std::unique(strobes.begin(), strobes.end()), strobes.end());
  const Extent extent = default_extent(cfg.params);
  const double r_max = es.radial_max > 0.0 ? es.radial_max : cfg.params.r1 + 1.0;
  int at = 0;
  for (int s : strobes) {
    atoms = guarded("ensemble_sim.evolve_ensemble",
                    [&] { return evolve_ensemble(atoms, s - at, cfg.params, cfg.integrator, threads); });
    at = s;
    const auto tag = strobe_tag(s);
    if (es.write_atoms) {
      CsvWriter csv({"atom", "x", "y", "px", "py"});
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        csv.field(static_cast<std::uint64_t>(i)).field(atoms[i].x).field(atoms[i].y).field(atoms[i].px).field(atoms[i].py);
        csv.end_row();
      }
      out.write(tag + "_atoms.csv", csv.str());
    }
    const auto hist = guarded("ensemble_sim.histogram_xy",
                              [&] { return histogram_xy(atoms, es.hist_nx, es.hist_ny, extent); });
    Grid g = grid_from_histogram(hist);
    g.time = s * cfg.params.modulation_period();
    out.write_grid(tag + "_hist.ewg", g);
    out.write(tag + "_radial.csv", radial_csv(radial_profile(atoms, es.radial_bins, r_max)));
  }
  note << "atoms=" << spec.n_atoms << " snapshots=" << strobes.size();
}

void run_detect(const RunConfig& cfg, Outputs& out, std::ostringstream& note, std::uint64_t seed, int threads) {
  const auto& es = *cfg.ensemble;
  const auto& ds = *cfg.detect;
  EnsembleSpec spec = es.spec;
  spec.seed = seed;
  DetectOptions opt;
  opt.fresh_cohorts = ds.fresh_cohorts;
  opt.hist_nx = es.hist_nx;
  opt.hist_ny = es.hist_ny;
  opt.radial_bins = es.radial_bins;
  opt.radial_max = es.radial_max;
  opt.threads = threads;
  const auto result = guarded("ensemble_sim.detect_integrated", [&] {
    return detect_integrated(spec, cfg.params, cfg.integrator, ds.s_start, ds.s_end, ds.n_per_strobe, opt);
  });
  Grid g = grid_from_histogram(result.histogram);
  g.time = ds.s_end * cfg.params.modulation_period();
  out.write_grid("_hist.ewg", g);
  out.write("_radial.csv", radial_csv(result.radial));
  note << "counts=" << result.histogram.total() << " overflow=" << result.histogram.overflow
       << " total=" << result.histogram.total() + result.histogram.overflow;
}

void run_quantum(const RunConfig& cfg, Outputs& out, std::ostringstream& note) {
  const auto& qs = *cfg.quantum;
  const DimensionlessParams& dp = cfg.params;
  const double L = qs.half_width > 0.0 ? qs.half_width : dp.r1 + 4.0;
  auto w = guarded("quantum_propagator.init_min_uncertainty", [&] {
    return init_min_uncertainty(qs.n, L, dp.kbar, qs.x0, qs.y0, qs.p0x, qs.p0y, qs.sigma);
  });
  QuantumConfig qc = default_quantum_config(dp, qs.steps_per_strobe);
  qc.mask_at_r1 = qs.mask_at_r1;
  PropagationOptions po;
  po.record_asymmetry = qs.asymmetry;
  po.asymmetry_n_r = qs.n_r;
  po.asymmetry_n_theta = qs.n_theta;
  const auto series = guarded("quantum_propagator.propagate_strobes", [&] {
    return propagate_strobes(w, qs.strobes, dp, qc, qs.record_every_step, po);
  });
  CsvWriter csv({"t", "strobe", "mean_px", "var_x", "var_px", "norm", "energy", "asymmetry"});
  for (const auto& o : series) {
    csv.field(o.t).field(o.strobe).field(o.mean_px).field(o.var_x).field(o.var_px).field(o.norm).field(o.energy).field(
        o.asymmetry);
    csv.end_row();
  }
  out.write("_series.csv", csv.str());
  out.write_grid("_final_prob.ewg", grid_from_probability(w));
  out.write_grid("_final_psi.ewg", grid_from_wavefunction(w));

  CsvWriter slice({"x", "probability"});
  for (const auto& p : slice_probability(w, qs.slice_y)) {
    slice.field(p.x).field(p.probability);
    slice.end_row();
  }
  out.write("_slice.csv", slice.str());

  const auto pops = guarded("quantum_propagator.angular_decompose",
                            [&] { return angular_decompose(w, qs.n_r, qs.n_theta); });
  CsvWriter ang({"m", "population"});
  for (const auto& p : pops) {
    ang.field(p.m).field(p.population);
    ang.end_row();
  }
  out.write("_angular.csv", ang.str());
  note << "steps=" << static_cast<long>(qs.strobes) * qs.steps_per_strobe
       << " final_norm=" << format_double(series.back().norm)
       << " final_asymmetry=" << format_double(series.back().asymmetry);
}

void run_revival(const RunConfig& cfg, Outputs& out, std::ostringstream& note) {
  const auto& rs = *cfg.revival;
  const PhaseState center{rs.x0, rs.y0, rs.p0x, rs.p0y, 0.0};
  const auto est = guarded("resonance_analysis.revival_time",
                           [&] { return revival_time(cfg.params, rs.sigma, center, rs.model); });
  CsvWriter csv({"quantity", "value"});
  quantity_row(csv, "mean_energy", est.mean_energy);
  quantity_row(csv, "omega0", est.omega0);
  quantity_row(csv, "domega0_de", est.domega0_de);
  quantity_row(csv, "classical_period", est.classical_period);
  quantity_row(csv, "revival_time", est.revival_time);
  out.write("_revival.csv", csv.str());
  note << "revival_time=" << format_double(est.revival_time);
}

}  // namespace

RunResult run(const RunConfig& cfg, Mode mode, const RunOptions& options) {
  if (cfg.mode && *cfg.mode != mode) {
    throw ConfigError(std::string("config declares mode ") + to_string(*cfg.mode) + " but " + to_string(mode) +
                          " was requested",
                      0, "mode");
  }
  require_mode_sections(cfg, mode);
  const std::uint64_t seed = options.seed.value_or(cfg.seed);
  const int threads = options.threads.value_or(cfg.threads);
  if (threads < 1) throw ConfigError("threads must be >= 1", 0, "threads");

  guarded("cli_io.create_out_dir", [&] {
    std::filesystem::create_directories(options.out_dir);
    return 0;
  });
  Outputs out(options.out_dir, cfg.name.empty() ? to_string(mode) : cfg.name);
  std::ostringstream note;
  switch (mode) {
    case Mode::convert_units: run_convert_units(cfg, out, note); break;
    case Mode::freqmap: run_freqmap(cfg, out, note); break;
    case Mode::portrait: run_portrait(cfg, out, note, threads); break;
    case Mode::fixedpoints: run_fixedpoints(cfg, out, note, threads); break;
    case Mode::ensemble: run_ensemble(cfg, out, note, seed, threads); break;
    case Mode::detect: run_detect(cfg, out, note, seed, threads); break;
    case Mode::quantum: run_quantum(cfg, out, note); break;
    case Mode::revival: run_revival(cfg, out, note); break;
  }

  RunResult result;
  result.mode = mode;
  result.outputs = std::move(out.files());
  std::ostringstream line;
  line << "evwg " << to_string(mode) << ": " << note.str();
  for (const auto& f : result.outputs) line << " | " << f.path.string() << " sha256=" << f.sha256;
  result.summary = line.str();
  return result;
}

}  // namespace evwg
