#include <iostream>

#include <CLI11.hpp>

#include "toric/cli.hpp"

int main(int argc, char** argv) {
  using toric::cli::Command;
  CLI::App app{"Labeled polyhedra, soliton vectors and shrinker potentials"};
  app.require_subcommand(1);

  toric::cli::RunConfig cfg;
  std::string input, potential, target, output;
  double tol = 0.0;

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"validate", "check that P is proper, rational and simple"},
      {"vertices", "list vertices with active facets and edge directions"},
      {"structure-group", "structure groups of facets and vertices (or of --face)"},
      {"delzant", "Delzant projection, kernel and offsets"},
      {"fan", "normal fan cones"},
      {"soliton-vector", "critical point of the weighted volume F(b)"},
      {"residual", "soliton equation residual of a potential"},
      {"solve", "solve for the shrinker potential (n <= 2)"},
      {"ding-scan", "Ding functional along a linear path of potentials (CSV t,D1,D)"},
      {"check-potential", "boundary conditions and admissibility of a potential"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("input", input, "polyhedron JSON file")->required();
    sub->add_option("--tol", tol, "solver tolerance");
    sub->add_option("--grid", cfg.grid, "Chebyshev nodes per axis (solve)");
    sub->add_option("--truncation", cfg.truncation, "truncation level T on unbounded axes (solve)");
    sub->add_flag("--allow-general-offsets", cfg.allow_general_offsets, "accept offsets other than 2");
    sub->add_option("--out", output, "artifact path (JSON, or CSV for ding-scan)");
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
    if (std::string(s.name) == "residual" || std::string(s.name) == "ding-scan" ||
        std::string(s.name) == "check-potential")
      sub->add_option("--potential", potential, "potential payload JSON (default: canonical potential)");
    if (std::string(s.name) == "ding-scan") {
      sub->add_option("--target", target, "second endpoint payload (default: first plus 0.3 x_1)");
      sub->add_option("--samples", cfg.samples, "number of t values");
    }
    if (std::string(s.name) == "structure-group") sub->add_option("--face", cfg.face, "facet indices of the face");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : toric::cli::kIoError;
  }

  cfg.command = *toric::cli::parse_command(app.get_subcommands().front()->get_name());
  cfg.input = input;
  if (!potential.empty()) cfg.potential = potential;
  if (!target.empty()) cfg.target = target;
  if (!output.empty()) cfg.output = output;
  if (tol != 0.0) cfg.tolerance = tol;
  return toric::cli::run(cfg, std::cout, std::cerr);
}
