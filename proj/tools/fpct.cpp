// Batch front door: parses a config of named media and jobs, dispatches the
// jobs across the library modules, and emits machine-readable results plus a
// run manifest.  Exit codes: 0 all jobs and embedded assertions passed,
// 1 assertion or job failure, 2 configuration error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpct/cellproblem.hpp"
#include "fpct/distcompare.hpp"
#include "fpct/environment.hpp"
#include "fpct/fpp.hpp"
#include "fpct/io.hpp"
#include "fpct/norms.hpp"
#include "fpct/parallel.hpp"
#include "fpct/symmin.hpp"
#include "fpct/validation.hpp"

namespace {

using namespace fpct;

constexpr double kDefaultMesh = 3.14159265358979323846 / 256.0;

struct JobOutcome {
  bool ok = true;
  double seconds = 0;
  std::vector<std::string> outputs;
  std::vector<std::string> log;
  std::string error;
};

struct Lines {
  std::string text;
  void add(const JsonValue& v) {
    text += v.dump();
    text += '\n';
  }
  void row(const std::vector<std::string>& cells) { text += csv_row(cells); }
};

JsonValue job_header(const JobSpec& job) {
  JsonValue h = JsonValue::object();
  h.set("schema", 1);
  h.set("command", job.command);
  h.set("name", job.name);
  return h;
}

const EnvironmentSpec& need_medium(const ToolkitConfig& cfg, const JobSpec& job,
                                   const std::string& key = "medium") {
  const std::string name = job_string(job, key, "");
  if (name.empty())
    throw ConfigError("config error: job '" + job.name + "' needs parameter '" + key + "'");
  auto it = cfg.media.find(name);
  if (it == cfg.media.end())
    throw ConfigError("config error: job '" + job.name + "' references unknown medium '" + name +
                      "'");
  return it->second;
}

const MarginalSpec& need_marginal(const ToolkitConfig& cfg, const JobSpec& job,
                                  const std::string& key) {
  const std::string name = job_string(job, key, "");
  if (name.empty())
    throw ConfigError("config error: job '" + job.name + "' needs parameter '" + key + "'");
  auto it = cfg.marginals.find(name);
  if (it == cfg.marginals.end())
    throw ConfigError("config error: job '" + job.name + "' references unknown marginal '" +
                      name + "'");
  return it->second;
}

std::vector<double> unit_e1(int d) {
  std::vector<double> e(d, 0.0);
  e[0] = 1.0;
  return e;
}

EnvironmentWindow job_window(const EnvironmentSpec& spec, const JobSpec& job) {
  std::vector<int> extent;
  if (spec.kind == EnvironmentSpec::Kind::Periodic)
    extent = spec.period;
  else if (spec.kind == EnvironmentSpec::Kind::Explicit)
    extent = spec.table->box.extent;
  else
    extent = std::vector<int>(spec.d, 8);
  extent = job_integer_list(job, "extent", extent);
  const std::string topo = job_string(job, "topology", "torus");
  if (topo != "torus" && topo != "open-box")
    throw ConfigError("config error: job '" + job.name + "': topology must be torus or open-box");
  std::optional<std::vector<int>> lo;
  if (job_has(job, "lo")) lo = job_integer_list(job, "lo", {});
  else if (spec.kind == EnvironmentSpec::Kind::Explicit) lo = spec.table->box.lo;
  return sample_window(spec, extent, topo == "torus" ? Topology::Torus : Topology::OpenBox, lo);
}

AtomicMedium job_atomic(const EnvironmentSpec& spec, const JobSpec& job) {
  try {
    return atomic_from_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config error: job '" + job.name + "': " + e.what());
  }
}

NormEvaluator algorithm_norm(const AtomicMedium& medium) {
  return [medium](std::span<const double> p) {
    return run_algorithm(medium, p, 200000, 1e-12).hbar;
  };
}

std::string joined(const std::vector<double>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += format_double(xs[i]);
  }
  return s;
}

std::string out_path(const std::string& dir, const JobSpec& job, const char* ext) {
  return dir + "/" + job.name + ext;
}

void write_output(const std::string& path, const Lines& lines, JobOutcome& outcome) {
  write_file(path, lines.text);
  outcome.outputs.push_back(path);
}

// ---------------------------------------------------------------------------

void run_simulate_fpp(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                      JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  const std::vector<double> direction = job_number_list(job, "direction", unit_e1(spec.d));
  const std::vector<int> ns = job_integer_list(job, "n", {8, 16, 32});
  const int seeds = static_cast<int>(job_integer(job, "seeds", 4));
  EstimateOptions opts;
  opts.threads = static_cast<int>(job_integer(job, "threads", 1));
  TimeConstantEstimate est = estimate_time_constant(spec, direction, ns, seeds, opts);

  Lines lines;
  if (job.format == "csv") {
    lines.row({"n", "seed", "scaled_time"});
    for (size_t s = 0; s < est.scaled.size(); ++s)
      for (size_t k = 0; k < ns.size(); ++k)
        lines.row({std::to_string(ns[k]),
                   std::to_string(est.base_seed + s),
                   format_double(est.scaled[s][k])});
    write_output(out_path(dir, job, ".csv"), lines, out);
  } else {
    JsonValue h = job_header(job);
    h.set("direction", JsonValue::number_array(direction));
    h.set("n", JsonValue::integer_array(ns));
    h.set("seeds", seeds);
    lines.add(h);
    for (size_t s = 0; s < est.scaled.size(); ++s)
      for (size_t k = 0; k < ns.size(); ++k) {
        JsonValue r = JsonValue::object();
        r.set("direction", JsonValue::number_array(direction));
        r.set("n", ns[k]);
        r.set("seed", static_cast<int64_t>(est.base_seed + s));
        r.set("scaled_time", est.scaled[s][k]);
        lines.add(r);
      }
    write_output(out_path(dir, job, ".jsonl"), lines, out);
  }
  out.log.push_back("samples: " + std::to_string(est.scaled.size() * ns.size()));
}

void run_estimate_m(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                    JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  const std::vector<double> direction = job_number_list(job, "direction", unit_e1(spec.d));
  const std::vector<int> ns = job_integer_list(job, "n", {8, 16, 32});
  const int seeds = static_cast<int>(job_integer(job, "seeds", 4));
  EstimateOptions opts;
  opts.threads = static_cast<int>(job_integer(job, "threads", 1));
  TimeConstantEstimate est = estimate_time_constant(spec, direction, ns, seeds, opts);

  Lines lines;
  if (job.format == "csv") {
    lines.row({"direction", "n_max", "seeds", "estimate", "half_width"});
    lines.row({joined(direction), std::to_string(ns.back()), std::to_string(seeds),
               format_double(est.estimate), format_double(est.half_width)});
    write_output(out_path(dir, job, ".csv"), lines, out);
  } else {
    JsonValue h = job_header(job);
    h.set("direction", JsonValue::number_array(direction));
    h.set("n", JsonValue::integer_array(ns));
    h.set("seeds", seeds);
    h.set("estimate", est.estimate);
    h.set("half_width", est.half_width);
    lines.add(h);
    write_output(out_path(dir, job, ".jsonl"), lines, out);
  }
  out.log.push_back("estimate " + format_double(est.estimate) + " +/- " +
                    format_double(est.half_width));
}

void run_solve_stationary(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                          JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  EnvironmentWindow env = job_window(spec, job);
  const std::vector<double> p = job_number_list(job, "p", unit_e1(spec.d));
  const std::vector<double> eps = job_number_list(job, "epsilon", {0.2, 0.1, 0.05, 0.025});
  const double tol = job_number(job, "tol", 1e-10);
  StationaryLadderResult lad = estimate_Hbar_stationary(env, p, eps, tol);

  Lines lines;
  if (job.format == "csv") {
    lines.row({"epsilon", "value", "residual", "hjb_residual", "sweeps"});
    for (const StationaryLadderPoint& pt : lad.points)
      lines.row({format_double(pt.epsilon), format_double(pt.value), format_double(pt.residual),
                 format_double(pt.hjb_residual), std::to_string(pt.sweeps)});
    write_output(out_path(dir, job, ".csv"), lines, out);
  } else {
    JsonValue h = job_header(job);
    h.set("p", JsonValue::number_array(p));
    lines.add(h);
    for (const StationaryLadderPoint& pt : lad.points) {
      JsonValue r = JsonValue::object();
      r.set("p", JsonValue::number_array(p));
      r.set("epsilon", pt.epsilon);
      r.set("value", pt.value);
      r.set("residual", pt.residual);
      r.set("hjb_residual", pt.hjb_residual);
      r.set("sweeps", pt.sweeps);
      lines.add(r);
    }
    JsonValue fin = JsonValue::object();
    fin.set("extrapolated", lad.extrapolated);
    lines.add(fin);
    write_output(out_path(dir, job, ".jsonl"), lines, out);
  }
  out.log.push_back("extrapolated " + format_double(lad.extrapolated));
}

void run_solve_horizon(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                       JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  EnvironmentWindow env = job_window(spec, job);
  const std::vector<double> p = job_number_list(job, "p", unit_e1(spec.d));
  const std::vector<double> ts = job_number_list(job, "t", {25, 50, 100});
  HorizonLadderResult lad = estimate_Hbar_horizon(env, p, ts);

  Lines lines;
  if (job.format == "csv") {
    lines.row({"t", "value"});
    for (const HorizonLadderPoint& pt : lad.points)
      lines.row({format_double(pt.t), format_double(pt.value)});
    write_output(out_path(dir, job, ".csv"), lines, out);
  } else {
    JsonValue h = job_header(job);
    h.set("p", JsonValue::number_array(p));
    lines.add(h);
    for (const HorizonLadderPoint& pt : lad.points) {
      JsonValue r = JsonValue::object();
      r.set("p", JsonValue::number_array(p));
      r.set("t", pt.t);
      r.set("value", pt.value);
      lines.add(r);
    }
    JsonValue fin = JsonValue::object();
    fin.set("estimate", lad.estimate);
    lines.add(fin);
    write_output(out_path(dir, job, ".jsonl"), lines, out);
  }
  out.log.push_back("estimate " + format_double(lad.estimate));
}

void run_estimate_hbar(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                       JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  EnvironmentWindow env = job_window(spec, job);
  const std::vector<double> p = job_number_list(job, "p", unit_e1(spec.d));
  const std::string route = job_string(job, "route", "both");
  if (route != "stationary" && route != "horizon" && route != "both")
    throw ConfigError("config error: job '" + job.name +
                      "': route must be stationary, horizon, or both");

  Lines lines;
  JsonValue h = job_header(job);
  h.set("p", JsonValue::number_array(p));
  h.set("route", route);
  lines.add(h);
  std::string summary;
  if (route == "stationary" || route == "both") {
    const std::vector<double> eps = job_number_list(job, "epsilon", {0.2, 0.1, 0.05, 0.025});
    StationaryLadderResult lad =
        estimate_Hbar_stationary(env, p, eps, job_number(job, "tol", 1e-10));
    JsonValue r = JsonValue::object();
    r.set("route", "stationary");
    r.set("estimate", lad.extrapolated);
    lines.add(r);
    summary += "stationary " + format_double(lad.extrapolated);
  }
  if (route == "horizon" || route == "both") {
    const std::vector<double> ts = job_number_list(job, "t", {25, 50, 100});
    HorizonLadderResult lad = estimate_Hbar_horizon(env, p, ts);
    JsonValue r = JsonValue::object();
    r.set("route", "horizon");
    r.set("estimate", lad.estimate);
    lines.add(r);
    if (!summary.empty()) summary += ", ";
    summary += "horizon " + format_double(lad.estimate);
  }
  write_output(out_path(dir, job, ".jsonl"), lines, out);
  out.log.push_back(summary);
}

void run_sym_minimize(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                      JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  const AtomicMedium med = job_atomic(spec, job);
  const std::vector<double> p = job_number_list(job, "p", unit_e1(med.d));
  const double tol = job_number(job, "tol", 1e-10);
  const int cap = static_cast<int>(job_integer(job, "max_iter", 200000));
  AlgorithmResult res = run_algorithm(med, p, cap, tol);
  auto [lo, hi] = infsup_bounds(res.profile, med);

  Lines lines;
  if (job.format == "csv") {
    lines.row({"iter", "mu0", "d", "sup", "xi"});
    for (size_t i = 0; i < res.trace.size(); ++i) {
      const StepDiagnostics& t = res.trace[i];
      lines.row({std::to_string(i), format_double(t.mu0), format_double(t.gap),
                 format_double(t.sup_before), format_double(t.xi)});
    }
    write_output(out_path(dir, job, ".csv"), lines, out);
  } else {
    JsonValue h = job_header(job);
    h.set("p", JsonValue::number_array(p));
    lines.add(h);
    if (job_integer(job, "trace", 0) != 0)
      for (size_t i = 0; i < res.trace.size(); ++i) {
        const StepDiagnostics& t = res.trace[i];
        JsonValue r = JsonValue::object();
        r.set("iter", static_cast<int64_t>(i));
        r.set("mu0", t.mu0);
        r.set("d", t.gap);
        r.set("sup", t.sup_before);
        r.set("xi", t.xi);
        lines.add(r);
      }
    JsonValue fin = JsonValue::object();
    fin.set("hbar", res.hbar);
    fin.set("status", status_name(res.status));
    fin.set("iterations", static_cast<int64_t>(res.trace.size()));
    fin.set("f", JsonValue::number_array(res.profile.f));
    JsonValue bracket = JsonValue::array();
    bracket.push(JsonValue::number(lo));
    bracket.push(JsonValue::number(hi));
    fin.set("infsup_bounds", std::move(bracket));
    lines.add(fin);
    write_output(out_path(dir, job, ".jsonl"), lines, out);
  }
  out.log.push_back("hbar " + format_double(res.hbar) + " [" + status_name(res.status) + "]");
}

void run_dual_norm(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                   JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  const AtomicMedium med = job_atomic(spec, job);
  if (med.d != 2)
    throw ConfigError("config error: job '" + job.name + "': dual-norm needs a d=2 medium");
  const std::vector<double> x = job_number_list(job, "x", {1.0, 0.0});
  const double mesh = job_number(job, "mesh", kDefaultMesh);
  NormTable table = build_norm_table_2d(algorithm_norm(med), mesh, 1e-9, "sym-minimize");
  DualNormValue dv = dual_norm(table, x, med.bounds());

  Lines lines;
  if (job.format == "csv") {
    lines.row({"x", "value", "slack"});
    lines.row({joined(x), format_double(dv.value), format_double(dv.slack)});
    write_output(out_path(dir, job, ".csv"), lines, out);
  } else {
    JsonValue h = job_header(job);
    h.set("x", JsonValue::number_array(x));
    h.set("mesh", mesh);
    h.set("value", dv.value);
    h.set("slack", dv.slack);
    lines.add(h);
    write_output(out_path(dir, job, ".jsonl"), lines, out);
  }
  out.log.push_back("dual norm " + format_double(dv.value) + " (slack " +
                    format_double(dv.slack) + ")");
}

void run_limit_shape(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                     JobOutcome& out) {
  const EnvironmentSpec& spec = need_medium(cfg, job);
  const AtomicMedium med = job_atomic(spec, job);
  if (med.d != 2)
    throw ConfigError("config error: job '" + job.name + "': limit-shape needs a d=2 medium");
  const double mesh = job_number(job, "mesh", kDefaultMesh);
  NormTable table = build_norm_table_2d(algorithm_norm(med), mesh, 1e-9, "sym-minimize");
  std::vector<std::array<double, 2>> verts = limit_shape(table);

  // The polytope ships in both formats: CSV vertex list for plotting, JSON
  // record for downstream tools.
  Lines csv;
  csv.row({"x1", "x2"});
  for (const auto& v : verts) csv.row({format_double(v[0]), format_double(v[1])});
  write_output(out_path(dir, job, ".csv"), csv, out);

  Lines lines;
  JsonValue h = job_header(job);
  h.set("mesh", mesh);
  h.set("vertex_count", static_cast<int64_t>(verts.size()));
  JsonValue arr = JsonValue::array();
  for (const auto& v : verts) {
    JsonValue pt = JsonValue::array();
    pt.push(JsonValue::number(v[0]));
    pt.push(JsonValue::number(v[1]));
    arr.push(std::move(pt));
  }
  h.set("vertices", std::move(arr));
  lines.add(h);
  write_output(out_path(dir, job, ".jsonl"), lines, out);
  out.log.push_back(std::to_string(verts.size()) + " vertices");
}

void run_compare_distros(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir,
                         JobOutcome& out) {
  const MarginalSpec& m1 = need_marginal(cfg, job, "marginal1");
  const MarginalSpec& m2 = need_marginal(cfg, job, "marginal2");

  Lines lines;
  lines.add(job_header(job));
  const double ks = kolmogorov_distance(m1, m2);
  {
    JsonValue r = JsonValue::object();
    r.set("route", "ks-upper");
    r.set("bound", ks);
    r.set("measured", ks);
    r.set("ok", true);
    lines.add(r);
  }
  try {
    CouplingGapBound cg = coupling_gap_bound(m1, m2);
    JsonValue r = JsonValue::object();
    r.set("route", "coupling");
    r.set("bound", cg.sup_gap_bound);
    r.set("measured", cg.mesh_sup_gap);
    r.set("ok", cg.ok);
    lines.add(r);
    if (!cg.ok) out.ok = false;
  } catch (const std::domain_error& e) {
    JsonValue r = JsonValue::object();
    r.set("route", "coupling");
    r.set("available", false);
    r.set("reason", e.what());
    r.set("ok", true);
    lines.add(r);
  }
  const BoundsSpec b1(m1.support_lo(), m1.support_hi());
  const BoundsSpec b2(m2.support_lo(), m2.support_hi());
  GapBound primal = gap_bound_primal(b1, b2, ks);
  GapBound dual = gap_bound_dual(b1, b2, ks);

  std::optional<EmpiricalGapReport> emp;
  if (job_has(job, "medium1") && job_has(job, "medium2")) {
    const EnvironmentSpec& s1 = need_medium(cfg, job, "medium1");
    const EnvironmentSpec& s2 = need_medium(cfg, job, "medium2");
    const std::vector<double> x = job_number_list(job, "x", unit_e1(s1.d));
    const int n = static_cast<int>(job_integer(job, "n", 200));
    const int seeds = static_cast<int>(job_integer(job, "seeds", 8));
    const int threads = static_cast<int>(job_integer(job, "threads", 1));
    emp = empirical_gap_check(s1, s2, x, n, seeds, threads);
    if (!emp->ok) out.ok = false;
  }
  {
    JsonValue r = JsonValue::object();
    r.set("route", primal.route);
    r.set("bound", primal.value);
    if (emp) {
      r.set("measured", emp->measured_gap);
      r.set("ci", emp->ci);
      r.set("ok", emp->ok);
    } else {
      r.set("ok", true);
    }
    lines.add(r);
  }
  {
    JsonValue r = JsonValue::object();
    r.set("route", dual.route);
    r.set("bound", dual.value);
    r.set("weaker_than_primal", dual.value >= primal.value);
    r.set("ok", dual.value >= primal.value);
    lines.add(r);
    if (dual.value < primal.value) out.ok = false;
  }
  write_output(out_path(dir, job, ".jsonl"), lines, out);
  out.log.push_back("ks " + format_double(ks) + ", primal " + format_double(primal.value) +
                    ", dual " + format_double(dual.value) +
                    (emp ? ", measured " + format_double(emp->measured_gap) : ""));
  if (!out.ok) out.error = "comparison bound violated";
}

void run_validate(const JobSpec& job, const std::string& dir, JobOutcome& out) {
  std::vector<int> ids = job_integer_list(job, "criteria", {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const int threads =
      static_cast<int>(job_integer(job, "threads", default_thread_count()));
  Lines lines;
  lines.add(job_header(job));
  bool all_ok = true;
  for (int id : ids) {
    CriterionResult r = run_criterion(id, threads);
    all_ok = all_ok && r.passed;
    JsonValue rec = JsonValue::object();
    rec.set("id", r.id);
    rec.set("criterion", r.name);
    rec.set("passed", r.passed);
    rec.set("seconds", r.seconds);
    rec.set("detail", r.detail);
    lines.add(rec);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d %-24s %s (%.1fs)", r.id, r.name.c_str(),
                  r.passed ? "PASS" : "FAIL", r.seconds);
    out.log.push_back(buf);
    if (!r.passed) out.log.push_back("    " + r.detail);
  }
  write_output(out_path(dir, job, ".jsonl"), lines, out);
  if (!all_ok) {
    out.ok = false;
    out.error = "acceptance criteria failed";
  }
}

JobOutcome run_job(const ToolkitConfig& cfg, const JobSpec& job, const std::string& dir) {
  JobOutcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (job.command == "simulate-fpp") run_simulate_fpp(cfg, job, dir, out);
    else if (job.command == "estimate-m") run_estimate_m(cfg, job, dir, out);
    else if (job.command == "solve-stationary") run_solve_stationary(cfg, job, dir, out);
    else if (job.command == "solve-horizon") run_solve_horizon(cfg, job, dir, out);
    else if (job.command == "estimate-hbar") run_estimate_hbar(cfg, job, dir, out);
    else if (job.command == "sym-minimize") run_sym_minimize(cfg, job, dir, out);
    else if (job.command == "dual-norm") run_dual_norm(cfg, job, dir, out);
    else if (job.command == "limit-shape") run_limit_shape(cfg, job, dir, out);
    else if (job.command == "compare-distros") run_compare_distros(cfg, job, dir, out);
    else if (job.command == "validate") run_validate(job, dir, out);
    else
      throw ConfigError("config error: unknown command '" + job.command + "' in job '" +
                        job.name + "'");
  } catch (const ConfigError&) {
    throw;  // configuration problems abort the whole run with exit 2
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

int run_suite_standalone(int threads) {
  bool all_ok = true;
  std::printf("acceptance suite (%d threads)\n", threads);
  run_acceptance_suite(threads, [&](const CriterionResult& r) {
    all_ok = all_ok && r.passed;
    std::printf("%d %-24s %s (%.1fs)\n", r.id, r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.seconds);
    if (!r.passed) std::printf("    %s\n", r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("%s\n", all_ok ? "all criteria passed" : "ACCEPTANCE FAILURES");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-passage percolation and stochastic homogenization toolkit"};
  app.set_help_flag("--help,-h", "print usage");
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  int jobs = 1;
  uint64_t seed_value = 0;
  app.add_option("--config", config_path, "batch config file (JSON)");
  app.add_option("--set", overrides, "dotted-path override key=value (repeatable)");
  app.add_option("--jobs", jobs, "worker pool size for the job-level parallel map");
  app.add_option("--out", out_dir, "output directory");
  CLI::Option* seed_opt = app.add_option("--seed", seed_value, "override the config default seed");
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "run the built-in acceptance suite and print a table");
  validate_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (validate_cmd->parsed()) return run_suite_standalone(jobs > 1 ? jobs : default_thread_count());

  if (config_path.empty()) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 2;
  }

  ToolkitConfig cfg;
  try {
    std::string text = read_file(config_path);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      std::fprintf(stderr, "config error: empty config\n%s\n", app.help().c_str());
      return 2;
    }
    std::optional<uint64_t> seed_override;
    if (seed_opt->count() > 0) seed_override = seed_value;
    const std::string base_dir =
        std::filesystem::path(config_path).parent_path().string();
    cfg = parse_config(text, overrides, base_dir, seed_override);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "config error: cannot create output directory %s\n", out_dir.c_str());
    return 2;
  }

  std::vector<JobOutcome> outcomes(cfg.jobs.size());
  try {
    parallel_for(static_cast<int64_t>(cfg.jobs.size()), jobs > 0 ? jobs : 1,
                 [&](int64_t i) { outcomes[i] = run_job(cfg, cfg.jobs[i], out_dir); });
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  bool all_ok = true;
  JsonValue man = JsonValue::object();
  man.set("schema", 1);
  man.set("version", kToolkitVersion);
  man.set("config_digest", cfg.digest);
  man.set("seed", static_cast<int64_t>(cfg.seed));
  JsonValue seeds = JsonValue::object();
  for (const auto& [name, spec] : cfg.media) seeds.set(name, static_cast<int64_t>(spec.seed));
  man.set("media_seeds", std::move(seeds));
  JsonValue job_list = JsonValue::array();
  for (size_t i = 0; i < cfg.jobs.size(); ++i) {
    const JobSpec& job = cfg.jobs[i];
    const JobOutcome& out = outcomes[i];
    all_ok = all_ok && out.ok;
    std::printf("job %-20s %-16s %s (%.2fs)\n", job.name.c_str(), job.command.c_str(),
                out.ok ? "ok" : "FAILED", out.seconds);
    for (const std::string& line : out.log) std::printf("  %s\n", line.c_str());
    if (!out.ok && !out.error.empty()) std::printf("  error: %s\n", out.error.c_str());
    JsonValue j = JsonValue::object();
    j.set("name", job.name);
    j.set("command", job.command);
    j.set("status", out.ok ? "ok" : "failed");
    j.set("seconds", out.seconds);
    JsonValue outs = JsonValue::array();
    for (const std::string& path : out.outputs) outs.push(JsonValue::string(path));
    j.set("outputs", std::move(outs));
    if (!out.error.empty()) j.set("error", out.error);
    job_list.push(std::move(j));
  }
  man.set("jobs", std::move(job_list));
  write_file(out_dir + "/run-manifest.json", man.dump() + "\n");
  return all_ok ? 0 : 1;
}
