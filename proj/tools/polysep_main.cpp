#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polysep/commands.hpp"

namespace {

struct Raw {
  std::string config, out, method, family;
  double tol = 0.0;
  std::size_t resolution = 0, size = 0;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Raw& raw) {
  sub->add_option("--config", raw.config, "Problem configuration (JSON)");
  sub->add_option("--out", raw.out, "Output path (report file, or stem for region)");
  sub->add_option("--method", raw.method, "Solver method");
  sub->add_option("--tol", raw.tol, "Tolerance");
  sub->add_option("--resolution", raw.resolution, "Grid resolution per axis");
  sub->add_option("--seed", raw.seed, "Seed for generators");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sylvester equation solvers by polynomial separation of spectra"};
  app.require_subcommand(1);
  Raw raw;
  const char* names[] = {"solve", "region", "search", "eta", "generate"};
  const char* help[] = {"Solve AX - XB = C", "Write lemniscate and pseudospectrum grids",
                        "Search for a separating polynomial", "Estimate eta(A, B) per degree",
                        "Generate a problem configuration"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    add_common(sub, raw);
    if (std::string(names[i]) == "generate") {
      sub->add_option("--family", raw.family, "Instance family");
      sub->add_option("--size", raw.size, "Matrix size");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : polysep::kExitFailure;
  }

  CLI::App* sub = app.get_subcommands().front();
  polysep::CommandOptions opts;
  if (sub->count("--config")) opts.config_path = raw.config;
  if (sub->count("--out")) opts.out = raw.out;
  if (sub->count("--method")) opts.method = raw.method;
  if (sub->count("--tol")) opts.tol = raw.tol;
  if (sub->count("--resolution")) opts.resolution = raw.resolution;
  if (sub->count("--seed")) opts.seed = raw.seed;
  if (sub->get_option_no_throw("--family") && sub->count("--family")) opts.family = raw.family;
  if (sub->get_option_no_throw("--size") && sub->count("--size")) opts.size = raw.size;
  return polysep::run_command(sub->get_name(), opts, std::cout, std::cerr);
}
