// Command-line front end. Parsing only; everything else lives in the library.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "doleans/cli.hpp"

namespace {

constexpr const char* kControlHelp =
    "Predictable control for theorem1: a constant in [0,1], 'indicator:<t0>' "
    "(0 on [0,t0], 1 after), or 'piecewise:v0|b1|v1|...|bk|vk' (left-continuous)";

}  // namespace

int main(int argc, char** argv) {
  using doleans::cli::RunConfig;

  CLI::App app{"Stochastic exponentials of jump martingales: sample paths, evaluate integrability conditions, "
               "reproduce the three counterexamples"};
  app.require_subcommand(1);
  app.footer("Exit status: 0 ok, 1 verdict mismatch or lemma violation, 2 usage error, 3 runtime error.\n"
             "DOLEANS_THREADS caps the Monte Carlo worker count.");

  RunConfig cfg;
  std::string levels;
  std::size_t n = 0;
  double eps = 0.0;
  std::string control;
  std::string kind;

  auto add_common = [&](CLI::App* sub, bool with_model) {
    if (with_model)
      sub->add_option("--model", cfg.model, "example1 | example2 | example3")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "64-bit seed")->capture_default_str();
  };
  auto add_n = [&](CLI::App* sub, const std::string& help) { return sub->add_option("--n", n, help); };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (directory for reproduce); stdout when omitted");
    sub->add_option("--format", cfg.format, "json | csv")->capture_default_str();
  };

  auto* sample = app.add_subcommand("sample", "Sample paths of a model as JSON or CSV");
  add_common(sample, true);
  auto* sample_n = add_n(sample, "number of paths (default 1)");
  add_output(sample);

  auto* expo = app.add_subcommand("exponential", "Evaluate E_T(M) on sampled paths and estimate its mean");
  add_common(expo, true);
  auto* expo_n = add_n(expo, "number of paths (default 100000)");
  add_output(expo);

  auto* cond = app.add_subcommand("condition", "Evaluate one integrability condition on a model");
  add_common(cond, true);
  auto* cond_kind = cond->add_option("--kind", kind, "jacod | protter-shimbo | lepingle-memin | theorem1 | lemma1");
  auto* cond_a = cond->add_option("--a", control, kControlHelp);
  auto* cond_eps = cond->add_option("--eps", eps, "epsilon in (0,1) for theorem1 (default 0.5)");
  auto* cond_n = add_n(cond, "Monte Carlo cross-check size, 0 disables (default 100000)");
  auto* cond_levels = cond->add_option("--levels", levels, "comma-separated truncation levels (>= 4)");
  add_output(cond);

  auto* repro = app.add_subcommand("reproduce", "Run the experiment suite of counterexample 1, 2 or 3");
  repro->add_option("which", cfg.which, "1 | 2 | 3")->required();
  add_common(repro, false);
  auto* repro_n = add_n(repro, "Monte Carlo size (default 100000)");
  auto* repro_levels = repro->add_option("--levels", levels, "comma-separated truncation levels (>= 4)");
  repro->add_option("--out", cfg.out, "output directory (default .)");

  auto* lemmas = app.add_subcommand("lemmas", "Grid and random property suites for the appendix inequalities");
  add_common(lemmas, false);
  lemmas->add_option("--mutant", cfg.mutant, "inject a known-wrong implementation: flip-indicator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : doleans::cli::kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  for (auto* opt : {sample_n, expo_n, cond_n, repro_n})
    if (opt->count() > 0) cfg.n = n;
  if (cond_kind->count() > 0) cfg.kind = kind;
  if (cond_a->count() > 0) cfg.control = control;
  if (cond_eps->count() > 0) cfg.eps = eps;
  if (cond_levels->count() > 0 || repro_levels->count() > 0) {
    try {
      cfg.levels = doleans::cli::parse_levels(levels);
    } catch (const doleans::cli::UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return doleans::cli::kExitUsage;
    }
  }
  return doleans::cli::run(cfg, std::cout, std::cerr);
}
