#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polyrecon/estimator.hpp"
#include "polyrecon/io.hpp"
#include "polyrecon/sim.hpp"

using namespace polyrecon;

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kValidation = 3, kSolverLimit = 4, kInfeasiblePlan = 5 };

struct Failure {
  int code;
  std::string message;
};

std::string vec_text(const Vec& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_double(v(i));
  return out + ")";
}

SimplicialFan regular_polygon(int n) {
  if (n < 3) throw Failure{kParse, "--n must be at least 3"};
  SimplicialFan f;
  f.dim = 2;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    Vec v(2);
    v << std::cos(a), std::sin(a);
    f.rays.push_back(v);
    f.cells.push_back({k, (k + 1) % n});
  }
  return f;
}

Fan load_fan(const std::string& path, bool strict) {
  ValidationOptions opts;
  opts.strict = strict;
  return Fan::create(read_fan(path), opts);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

// --- fan-info ---------------------------------------------------------------

struct FanInfoArgs {
  std::string fan;
  bool strict = false;
};

int fan_info(const FanInfoArgs& a) {
  const SimplicialFan raw = read_fan(a.fan);
  ValidationOptions vopts;
  vopts.strict = a.strict;
  const ValidationReport report = validate(raw, vopts);
  std::cout << "fan " << a.fan << ": dimension " << raw.dim << ", " << raw.rays.size() << " rays, " << raw.cells.size()
            << " maximal cells\n";
  std::cout << "validation:\n" << report.summary();
  if (!report.ok()) {
    std::cout << "validation failed\n";
    return kValidation;
  }

  const Fan fan = Fan::create(raw, vopts);
  const WallCrossingSystem ws = wall_crossings(fan);
  std::cout << "wall-crossing inequalities (" << ws.walls.size() << " walls):\n";
  for (std::size_t k = 0; k < ws.walls.size(); ++k) {
    const Wall& w = ws.walls[k];
    std::cout << "  cells " << w.cell_a + 1 << "|" << w.cell_b + 1 << ": " << format_inequality(ws.B.row(k)) << "\n";
  }
  const std::vector<int> keep = irredundant_rows(ws.B);
  std::cout << "irredundant system (" << keep.size() << " inequalities):\n";
  for (int k : keep) std::cout << "  " << format_inequality(ws.B.row(k)) << "\n";

  const FanConstants& c = fan.constants();
  std::cout << "c_delta = " << format_double(c.c_delta) << "\n";
  std::cout << "ray norms: min " << format_double(c.min_ray_norm) << ", max " << format_double(c.max_ray_norm) << "\n";
  std::vector<int> adjacent(fan.num_cells(), 0);
  for (const Wall& w : ws.walls) {
    ++adjacent[w.cell_a];
    ++adjacent[w.cell_b];
  }
  std::cout << "cell adjacency:\n";
  for (int j = 0; j < fan.num_cells(); ++j) {
    std::cout << "  cell " << j + 1 << " {";
    for (std::size_t k = 0; k < fan.cell(j).size(); ++k) std::cout << (k ? ", " : "") << "v" << fan.cell(j)[k] + 1;
    std::cout << "}: " << adjacent[j] << " neighbours\n";
  }
  return kOk;
}

// --- reconstruct --------------------------------------------------------------

struct ReconstructArgs {
  std::vector<std::string> fans;
  std::string data;
  std::string out;
  bool strict = false;
  double kkt_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iterations = 0;
};

QPOptions qp_options(const ReconstructArgs& a) {
  QPOptions o;
  o.kkt_tol = a.kkt_tol;
  o.feas_tol = a.feas_tol;
  o.max_iterations = a.max_iterations;
  return o;
}

void print_result(std::ostream& os, const ReconstructionResult& r) {
  os << "  h_hat = " << vec_text(r.h_hat) << "\n";
  os << "  objective = " << format_double(r.objective) << "\n";
  os << "  rank " << r.uniqueness.numeric_rank << ", matching " << r.uniqueness.matching_size
     << ", unique for all y: " << (r.uniqueness.unique_for_all_y ? "yes" : "no") << "\n";
  const SolutionSetDescription& s = r.solution_set;
  os << "  solution set: dimension " << s.dimension << ", " << (s.bounded ? "bounded" : "unbounded") << "\n";
  if (s.segment_endpoints) {
    os << "  segment endpoint " << vec_text(s.segment_endpoints->first) << "\n";
    os << "  segment endpoint " << vec_text(s.segment_endpoints->second) << "\n";
  }
}

int reconstruct_cmd(const ReconstructArgs& a) {
  std::vector<Fan> fans;
  for (const std::string& path : a.fans) fans.push_back(load_fan(path, a.strict));
  const Dataset data = read_measurements(a.data, fans[0].dim());
  std::ostream& log = a.out.empty() ? std::cerr : std::cout;

  if (fans.size() == 1) {
    const ReconstructionResult r = reconstruct(fans[0], data, qp_options(a));
    log << "fan " << a.fans[0] << ", " << data.size() << " measurements\n";
    print_result(log, r);
    emit(a.out, result_to_json(fans[0], r));
    return kOk;
  }

  const MultiFanResult mr = reconstruct_multi(fans, data, qp_options(a));
  bool limit = false;
  for (std::size_t f = 0; f < fans.size(); ++f) {
    log << "fan " << f + 1 << " (" << a.fans[f] << "):\n";
    const MultiFanEntry& e = mr.per_fan[f];
    if (e.result)
      print_result(log, *e.result);
    else
      log << "  error: " << e.error << "\n";
    limit = limit || e.iteration_limit;
  }
  log << "minimum objective = " << format_double(mr.min_objective) << " (tie tolerance "
      << format_double(mr.tie_tol) << ")\n";
  if (mr.tie()) {
    log << "tie between fans";
    for (int f : mr.minimizers) log << " " << f + 1;
    log << "\n";
  } else if (!mr.minimizers.empty()) {
    log << "unique minimizer: fan " << mr.minimizers[0] + 1 << "\n";
  }
  emit(a.out, multi_result_to_json(fans, a.fans, mr));
  return limit ? kSolverLimit : kOk;
}

// --- uniqueness ---------------------------------------------------------------

struct UniquenessArgs {
  std::string fan;
  std::string data;
};

int uniqueness_cmd(const UniquenessArgs& a) {
  const Fan fan = load_fan(a.fan, false);
  const Dataset data = read_measurements(a.data, fan.dim());
  const UniquenessReport u = uniqueness_report(fan, build_design(fan, data.directions));
  const bool unique = u.unique_for_all_y;
  int covered = 0;
  for (bool c : u.cells_covered) covered += c;
  std::cout << "measurements " << data.size() << ", rays " << fan.num_rays() << "\n";
  std::cout << "cells with an interior sample: " << covered << " of " << fan.num_cells() << "\n";
  for (int j = 0; j < fan.num_cells(); ++j)
    std::cout << "  cell " << j + 1 << ": " << (u.cells_covered[j] ? "covered" : "not covered") << "\n";
  std::cout << "kernel dimension " << u.kernel_basis.cols() << "\n";
  std::cout << "matching " << u.matching_size << ", rank " << u.numeric_rank << ", unique: " << (unique ? "yes" : "no")
            << "\n";
  std::cout << "unique for all y: " << (unique ? "yes" : "no") << "\n";
  return kOk;
}

// --- simulate -----------------------------------------------------------------

struct SimulateArgs {
  std::string fan;
  int n = 0;
  double t = 0.0;
  std::optional<double> delta;
  std::string fill = "uniform";
  double sigma = 0.1;
  std::vector<int> m{100, 1000, 10000};
  int reps = 20;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> noise_seed;
  double eta = 0.05;
  std::vector<double> h0;
  std::string out;
  std::string plot;
  bool timing = false;
};

int simulate_cmd(const SimulateArgs& a) {
  if (a.fan.empty() == (a.n == 0)) throw Failure{kParse, "simulate: give exactly one of --fan and --n"};
  const std::string source = a.fan.empty() ? "regular " + std::to_string(a.n) + "-gon" : a.fan;
  const Fan fan = a.fan.empty() ? Fan::create(regular_polygon(a.n)) : load_fan(a.fan, false);

  Vec h0 = Vec::Ones(fan.num_rays());
  if (!a.h0.empty()) {
    if (static_cast<int>(a.h0.size()) != fan.num_rays())
      throw Failure{kParse, "--h0 needs " + std::to_string(fan.num_rays()) + " values"};
    h0 = Eigen::Map<const Vec>(a.h0.data(), static_cast<Eigen::Index>(a.h0.size()));
  }
  if (!DeformationCone(fan).contains(h0)) throw Failure{kValidation, "simulate: h0 is outside the deformation cone"};

  FillMode fill = FillMode::Uniform;
  if (a.fill == "facets")
    fill = FillMode::Facets;
  else if (a.fill != "uniform")
    throw Failure{kParse, "--fill must be uniform or facets"};
  if (a.t > 0.0 && !a.delta) throw Failure{kParse, "simulate: --t > 0 requires --delta"};

  PlanFactory plans;
  std::string plan_kind;
  if (!a.delta) {
    plan_kind = "balanced-facets";
    plans = [&](int m, std::uint64_t seed) { return balanced_facet_plan(fan, m, seed); };
  } else {
    plan_kind = "concentrated";
    const double t = a.t, delta = *a.delta;
    plans = [&fan, t, delta, fill](int m, std::uint64_t seed) { return make_plan(fan, t, delta, m, seed, fill); };
  }
  // surface infeasible hypotheses before any work is done
  for (int m : a.m) plans(m, a.seed);

  ConvergenceOptions opts;
  opts.m_schedule = a.m;
  opts.replicates = a.reps;
  opts.noise.sigma = a.sigma;
  opts.noise.seed = a.noise_seed.value_or(a.seed);
  opts.eta = a.eta;
  opts.seed = a.seed;
  const std::vector<ConvergenceRecord> records = run_convergence(fan, h0, plans, opts);
  const RateSummary s = summarize(records);

  std::ostringstream table;
  write_records(table, records, a.timing);
  emit(a.out, table.str());
  if (!a.out.empty() && a.out != "-") {
    RecordMetadata meta;
    meta.fan_source = source;
    meta.t = a.t;
    meta.delta = a.delta.value_or(0.0);
    meta.plan = plan_kind;
    meta.sigma = a.sigma;
    meta.eta = a.eta;
    meta.replicates = a.reps;
    meta.m_schedule = a.m;
    meta.seed = a.seed;
    meta.noise_seed = opts.noise.seed;
    meta.slope = s.slope;
    write_text_file(a.out + ".meta.json", metadata_to_json(meta));
  }
  if (!a.plot.empty()) write_text_file(a.plot, convergence_svg(records));

  std::ostream& log = a.out.empty() || a.out == "-" ? std::cerr : std::cout;
  for (std::size_t k = 0; k < s.m.size(); ++k)
    log << "m = " << s.m[k] << ": median error " << format_double(s.median_error[k]) << ", median bound "
        << format_double(s.median_bound[k]) << "\n";
  log << "slope " << format_double(s.slope) << "\n";
  log << "bound violations " << s.bound_violations << ", failed records " << s.failures << "\n";
  return kOk;
}

// --- make-fan -----------------------------------------------------------------

int make_fan_cmd(int n, const std::string& out) {
  emit(out, fan_to_json(regular_polygon(n)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytope reconstruction from noisy support function evaluations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FanInfoArgs info;
  auto* c_info = app.add_subcommand("fan-info", "Validate a fan and print its wall-crossing inequalities");
  c_info->add_option("fan", info.fan, "Fan file")->required();
  c_info->add_flag("--strict", info.strict, "Also check that cells meet in common faces");

  ReconstructArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "Least-squares reconstruction; repeat --fan for several fans");
  c_rec->add_option("--fan", rec.fans, "Fan file (repeatable)")->required();
  c_rec->add_option("--data", rec.data, "Measurement file")->required();
  c_rec->add_option("--out", rec.out, "Result JSON path (default: stdout)");
  c_rec->add_flag("--strict", rec.strict, "Strict fan validation");
  c_rec->add_option("--kkt-tol", rec.kkt_tol, "KKT tolerance")->check(CLI::PositiveNumber);
  c_rec->add_option("--feas-tol", rec.feas_tol, "Feasibility tolerance")->check(CLI::PositiveNumber);
  c_rec->add_option("--max-iter", rec.max_iterations, "Active-set iteration cap (0 = default)")
      ->check(CLI::NonNegativeNumber);

  UniquenessArgs uq;
  auto* c_uq = app.add_subcommand("uniqueness", "Rank and matching diagnostics for a design");
  c_uq->add_option("--fan", uq.fan, "Fan file")->required();
  c_uq->add_option("--data", uq.data, "Measurement file")->required();

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Convergence experiment with synthetic data");
  c_sim->add_option("--fan", sim.fan, "Fan file");
  c_sim->add_option("--n", sim.n, "Use the regular n-gon fan")->check(CLI::PositiveNumber);
  c_sim->add_option("--t", sim.t, "Concentration radius t");
  c_sim->add_option("--delta", sim.delta, "Concentration fraction delta (default: balanced facet plan)");
  c_sim->add_option("--fill", sim.fill, "Samples beyond the quotas: uniform or facets");
  c_sim->add_option("--sigma", sim.sigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  c_sim->add_option("--m", sim.m, "Sample sizes")->delimiter(',');
  c_sim->add_option("--reps", sim.reps, "Replicates per sample size")->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", sim.seed, "Base seed");
  c_sim->add_option("--noise-seed", sim.noise_seed, "Noise seed (default: --seed)");
  c_sim->add_option("--eta", sim.eta, "Failure probability for the bound column");
  c_sim->add_option("--h0", sim.h0, "True support vector (default: all ones)")->delimiter(',');
  c_sim->add_option("--out", sim.out, "Records path (default: stdout)");
  c_sim->add_option("--plot", sim.plot, "SVG plot path");
  c_sim->add_flag("--timing", sim.timing, "Write wall-clock times instead of 0");

  int make_n = 6;
  std::string make_out;
  auto* c_make = app.add_subcommand("make-fan", "Write the normal fan of a regular polygon");
  c_make->add_option("--n", make_n, "Number of rays")->check(CLI::PositiveNumber);
  c_make->add_option("--out", make_out, "Fan file path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*c_info) return fan_info(info);
    if (*c_rec) return reconstruct_cmd(rec);
    if (*c_uq) return uniqueness_cmd(uq);
    if (*c_sim) return simulate_cmd(sim);
    if (*c_make) return make_fan_cmd(make_n, make_out);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InvalidFan& e) {
    std::cerr << "invalid fan: " << e.what();
    return kValidation;
  } catch (const IterationLimit& e) {
    std::cerr << "solver: " << e.what() << "\n";
    return kSolverLimit;
  } catch (const QuotaInfeasible& e) {
    std::cerr << "infeasible plan: " << e.what() << "\n";
    return kInfeasiblePlan;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
