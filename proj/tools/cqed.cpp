#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "cqed/cqed.hpp"

namespace {

using namespace cqed;
using namespace cqed::scenario;

constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

RunOptions oracle_options(const std::string& mode, bool strict, unsigned workers) {
  RunOptions o;
  o.strict = strict;
  o.workers = workers;
  if (mode == "markov") {
    o.markov = true;
  } else if (mode == "discretized") {
    o.discretized = true;
  } else if (mode == "both") {
    o.markov = true;
    o.discretized = true;
  }
  return o;
}

void print_summary(const Bundle& b) {
  std::printf("scenario %s: lambda %.6g MHz, zeta %.6g MHz, zeta^2/delta %.6g MHz, eta %.3g\n", b.config.name.c_str(),
              b.dc.lambda, b.dc.zeta, b.dc.stark(), b.dc.eta);
  const auto* n = b.find(CaseKind::N);
  for (const auto* c : b.selected()) {
    if (c->fit.peaks.size() < 2) {
      std::printf("  %s: %zu peak(s) resolved\n", case_label(c->kind), c->fit.peaks.size());
      continue;
    }
    std::printf("  %s: left %.6f  right %.6f  splitting %.6f MHz", case_label(c->kind), c->left(), c->right(),
                c->split());
    if (c->kind != CaseKind::N && n && n->fit.peaks.size() >= 2)
      std::printf("  (left shift %+.6f, increment %+.3e MHz)", c->left() - n->left(), c->split() - n->split());
    std::printf("\n");
  }
  for (const auto& o : b.oracle) {
    if (!o.supported) continue;
    std::printf("  oracle %-11s %s: L-inf %.4f  position error %.4g MHz  %s\n", o.method.c_str(), case_label(o.kind),
                o.linf, o.position_error, o.pass ? "ok" : "FAILED");
  }
  for (const auto& w : b.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& f : b.failures) std::fprintf(stderr, "failure: %s\n", f.c_str());
}

int cmd_scenario(const std::string& ref, const std::string& out, const RunOptions& opts) {
  const auto cfg = resolve_scenario(ref);
  const auto bundle = run_scenario(cfg, opts);
  const std::filesystem::path dir = out.empty() ? std::filesystem::path("out") / cfg.name : std::filesystem::path(out);
  write_bundle(bundle, dir);
  emit_plotdata(bundle, dir);
  print_summary(bundle);
  std::printf("wrote %s\n", dir.string().c_str());
  return bundle.ok() ? 0 : exit_failed;
}

int cmd_sweep(const std::string& file, const std::string& out, unsigned workers) {
  const auto spec = load_sweep_file(file);
  const auto result = run_sweep(spec, workers);
  const std::filesystem::path dir = out.empty() ? std::filesystem::path("out") / spec.base.name : std::filesystem::path(out);
  write_sweep(result, dir);
  std::size_t flagged = 0;
  for (const auto& r : result.rows)
    if (r.status != "ok") ++flagged;
  for (const auto& s : result.slopes)
    std::printf("  %s %s vs %s: log-log slope %.4f\n", case_label(s.kind), s.quantity.c_str(), s.abscissa.c_str(),
                s.slope);
  std::printf("%zu rows (%zu flagged), wrote %s\n", result.rows.size(), flagged, dir.string().c_str());
  return flagged ? exit_failed : 0;
}

int cmd_oracle_check(const std::string& ref, const std::string& mode, bool strict) {
  auto cfg = resolve_scenario(ref);
  RunOptions opts = oracle_options(mode, strict, 1);
  if (!opts.markov && !opts.discretized) {
    opts.markov = true;
  }
  cfg.grid.fine_fit = false;
  const auto b = run_scenario(cfg, opts);
  for (const auto& o : b.oracle) {
    if (!o.supported) {
      std::printf("%-11s %s: unsupported (%s)\n", o.method.c_str(), case_label(o.kind), o.note.c_str());
      continue;
    }
    std::printf("%-11s %s: L-inf %.6f (tol %.3g)  position error %.6f MHz (tol %.3g)", o.method.c_str(),
                case_label(o.kind), o.linf, cfg.oracle.linf_tolerance, o.position_error, cfg.oracle.position_tolerance);
    if (o.method == "discretized")
      std::printf("  bath/c1 L-inf %.6f  |c1| dev %.3e  drift %.3e  bath total %.8f", o.bath_linf, o.c1_deviation,
                  o.norm_drift, o.bath_total);
    std::printf("  %s\n", o.pass ? "PASS" : "FAIL");
  }
  for (const auto& w : b.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return b.ok() ? 0 : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TLR / Josephson qubit / NAMR voltage-fluctuation spectrum simulator"};
  app.set_version_flag("--version", std::string(cqed::version));
  app.require_subcommand(1);

  std::string out, oracle_mode, target;
  unsigned workers = 1;
  bool strict = false;

  auto* sc = app.add_subcommand("scenario", "run a preset or scenario file and write the output bundle");
  sc->add_option("name", target, "preset name or scenario file")->required();
  auto* sw = app.add_subcommand("sweep", "run a parameter sweep file");
  sw->add_option("file", target, "sweep file")->required()->check(CLI::ExistingFile);
  auto* oc = app.add_subcommand("oracle-check", "compare analytic spectra with the time-domain oracle");
  oc->add_option("name", target, "preset name or scenario file")->required();
  auto* ps = app.add_subcommand("presets", "list built-in scenarios");

  for (auto* s : {sc, sw, oc}) s->add_flag("--strict", strict, "treat warnings as failures");
  for (auto* s : {sc, sw}) s->add_option("--out", out, "output directory (default out/<name>)");
  sw->add_option("--workers", workers, "concurrent sweep points")->check(CLI::PositiveNumber);
  for (auto* s : {sc, oc})
    s->add_option("--oracle", oracle_mode, "time-domain oracle to run")
        ->check(CLI::IsMember({"markov", "discretized", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  try {
    if (*ps) {
      for (const auto& p : preset_list()) std::printf("%-18s %s\n", p.name, p.summary);
      return 0;
    }
    if (*sc) return cmd_scenario(target, out, oracle_options(oracle_mode, strict, workers));
    if (*sw) return cmd_sweep(target, out, workers);
    if (*oc) return cmd_oracle_check(target, oracle_mode, strict);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_usage;
  } catch (const RegimeError& e) {
    std::fprintf(stderr, "regime guard: %s\n", e.what());
    return exit_failed;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_failed;
  }
  return exit_usage;
}
