// yyshell: command-line driver for the Yin-Yang shell solver.
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "yinyang/driver.hpp"
#include "yinyang/error.hpp"
#include "yinyang/parallel.hpp"

using namespace yy;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  int threads = -1;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config, "key = value configuration file");
  app->add_option("-s,--set", c.sets, "override, key=value (repeatable)");
  app->add_option("-t,--threads", c.threads, "worker threads (0 = machine parallelism)");
  app->add_flag("-q,--quiet", c.quiet, "no progress output");
}

RunConfig load(const Common& c) {
  RunConfig cfg;
  if (!c.config.empty()) cfg = load_config(c.config, cfg);
  for (const auto& s : c.sets) apply_override(cfg, s);
  if (c.threads >= 0) cfg.threads = c.threads;
  cfg.validate();
  return cfg;
}

std::unique_ptr<WorkerPool> make_pool(const RunConfig& cfg) {
  const int n = cfg.threads > 0 ? cfg.threads : WorkerPool::hardware_workers();
  if (n <= 1) return nullptr;
  return std::make_unique<WorkerPool>(n);
}

// writes to the path, or stdout when empty
template <class F>
void with_output(const std::string& path, F&& f) {
  if (path.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  f(out);
}

json errors_json(const ErrorReport& e) {
  json j;
  for (int q = 0; q < kQuantityCount; ++q) j[quantity_name(q)] = e.combined(q);
  return j;
}

json slopes_json(const std::array<double, kQuantityCount>& s) {
  json j;
  for (int q = 0; q < kQuantityCount; ++q) j[quantity_name(q)] = std::isfinite(s[q]) ? json(s[q]) : json(nullptr);
  return j;
}

json study_json(const StudyResult& r) {
  json j;
  j["abscissa"] = r.abscissa;
  j["complete"] = r.complete;
  j["slopes"] = slopes_json(r.slopes);
  for (const auto& lv : r.levels) {
    json l;
    l["x"] = lv.x;
    l["ok"] = lv.ok;
    if (!lv.ok) l["failure"] = lv.failure;
    else l["errors"] = errors_json(lv.errors);
    l["max_iterations"] = lv.max_iterations;
    l["nonconverged_steps"] = lv.nonconverged;
    j["levels"].push_back(l);
  }
  return j;
}

void print_slopes(std::ostream& os, const StudyResult& r) {
  os << "# slopes:";
  for (int q = 0; q < kQuantityCount; ++q) os << " " << quantity_name(q) << "=" << r.slopes[q];
  os << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yin-Yang spherical shell Navier-Stokes-Boussinesq solver"};
  app.require_subcommand(1);

  Common run_c, time_c, space_c, landau_c, stab_c;
  std::string json_path;

  auto* run = app.add_subcommand("run", "time-step a configuration, CSV time series");
  add_common(run, run_c);

  auto* ct = app.add_subcommand("conv-time", "temporal convergence study (halving dt)");
  add_common(ct, time_c);
  int levels = 4;
  bool reference = false;
  std::string study_csv;
  ct->add_option("-l,--levels", levels, "number of levels (>= 3)");
  ct->add_flag("--reference", reference, "errors against a dt/4 reference run instead of the exact solution");
  ct->add_option("-o,--csv", study_csv, "table output (default stdout)");
  ct->add_option("--json", json_path, "JSON summary");

  auto* cs = app.add_subcommand("conv-space", "spatial convergence study (doubling cell counts)");
  add_common(cs, space_c);
  cs->add_option("-l,--levels", levels, "number of levels (>= 3)");
  cs->add_option("-o,--csv", study_csv, "table output (default stdout)");
  cs->add_option("--json", json_path, "JSON summary");

  auto* la = app.add_subcommand("landau", "Landau jet: spatial study plus overlap study");
  add_common(la, landau_c);
  std::vector<double> eps{0.05, 0.1, 0.2};
  la->add_option("-l,--levels", levels, "number of grid levels (>= 3)");
  la->add_option("--eps", eps, "overlap parameters of the overlap study");
  la->add_option("-o,--csv", study_csv, "table output (default stdout)");
  la->add_option("--json", json_path, "JSON summary");

  auto* st = app.add_subcommand("stability", "heat-scheme stability from random data on one chart");
  add_common(st, stab_c);
  std::vector<double> taus{0.1, 1, 10, 100};
  int steps = 200;
  st->add_option("--taus", taus, "time steps");
  st->add_option("--steps", steps, "steps per time step");
  st->add_option("-o,--csv", study_csv, "table output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const RunConfig cfg = load(run_c);
      auto pool = make_pool(cfg);
      const RunOutput out = run_simulation(cfg, pool.get(), run_c.quiet ? nullptr : &std::cerr);
      with_output(cfg.csv, [&](std::ostream& os) { write_csv(os, out.table); });
      if (out.nonconverged > 0) {
        std::cerr << out.nonconverged << " step(s) reached max_iters without converging\n";
        return 4;
      }
      return 0;
    }
    if (*ct || *cs) {
      const Common& c = *ct ? time_c : space_c;
      const RunConfig cfg = load(c);
      auto pool = make_pool(cfg);
      StudyOptions opt;
      opt.levels = levels;
      opt.reference = reference;
      const StudyResult r = convergence_study(*ct ? StudyKind::Time : StudyKind::Space, cfg, opt, pool.get(),
                                              c.quiet ? nullptr : &std::cerr);
      with_output(study_csv, [&](std::ostream& os) {
        write_csv(os, r.table());
        print_slopes(os, r);
      });
      if (!json_path.empty()) with_output(json_path, [&](std::ostream& os) { os << study_json(r).dump(2) << "\n"; });
      for (const auto& lv : r.levels)
        if (!lv.ok) std::cerr << "level failed: " << lv.failure << "\n";
      return r.complete ? 0 : 3;
    }
    if (*la) {
      RunConfig cfg = load(landau_c);
      cfg.problem = ProblemKind::Landau;
      if (cfg.Re <= 0 && cfg.nu <= 0) cfg.Re = 1.0;
      cfg.validate();
      auto pool = make_pool(cfg);
      std::ostream* log = landau_c.quiet ? nullptr : &std::cerr;
      StudyOptions opt;
      opt.levels = levels;
      const StudyResult r = convergence_study(StudyKind::Space, cfg, opt, pool.get(), log);
      const auto ov = overlap_study(cfg, eps, pool.get(), log);
      Table t;
      t.columns = {"epsilon", "ok", "err_u2", "err_p2"};
      for (const auto& p : ov)
        t.rows.push_back({p.epsilon, p.ok ? 1.0 : 0.0, p.ok ? p.errors.combined(kU2) : std::nan(""),
                          p.ok ? p.errors.combined(kP2) : std::nan("")});
      with_output(study_csv, [&](std::ostream& os) {
        write_csv(os, r.table());
        print_slopes(os, r);
        os << "\n";
        write_csv(os, t);
      });
      bool ok = r.complete;
      json j;
      j["spatial"] = study_json(r);
      for (const auto& p : ov) {
        json e;
        e["epsilon"] = p.epsilon;
        e["ok"] = p.ok;
        if (p.ok) e["errors"] = errors_json(p.errors);
        else e["failure"] = p.failure;
        j["overlap"].push_back(e);
        ok = ok && p.ok;
      }
      if (!json_path.empty()) with_output(json_path, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
      return ok ? 0 : 3;
    }
    if (*st) {
      const RunConfig cfg = load(stab_c);
      auto pool = make_pool(cfg);
      const auto runs = stability_study(cfg.extents, cfg.grid, taus, steps, cfg.seed, 1e-10, pool.get());
      Table t;
      t.columns = {"tau", "steps", "initial_max", "max_norm", "finite", "energy_monotone", "worst_energy_growth",
                   "final_energy"};
      bool ok = true;
      for (const auto& r : runs) {
        t.rows.push_back({r.tau, static_cast<double>(r.steps), r.initial_max, r.max_norm, r.finite ? 1.0 : 0.0,
                          r.energy_monotone ? 1.0 : 0.0, r.worst_energy_growth, r.energy.back()});
        ok = ok && r.finite && r.energy_monotone && r.max_norm <= 10 * r.initial_max;
      }
      with_output(study_csv, [&](std::ostream& os) { write_csv(os, t); });
      return ok ? 0 : 3;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
