#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>

int main(int argc, char** argv) {
  using namespace sigmak::cli;
  CLI::App app{"sigmak: constant sigma_k spacelike hypersurfaces with prescribed lightlike directions"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out_dir, "output directory");
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--n", o.n, "dimension");
  app.add_option("--k", o.k, "curvature order");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"profile", "solve the rotational profile and check its bounds"},
      {"semitrough", "semitrough mesh and limit gaps"},
      {"barriers", "sub/supersolution ordering report"},
      {"calibrate", "cutoff constants on a box"},
      {"legendre", "Legendre transform on a dual grid"},
      {"moreau", "epsilon ladder and regularization checks"},
      {"dirichlet", "dual Dirichlet problems, n = 2"},
      {"verify-all", "every acceptance criterion"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->set_help_flag("--help", "print this help message and exit");  // frees -h for the grid spacing
    sub->callback([&chosen, name = name] { chosen = name; });
    if (name == "dirichlet") {
      sub->add_option("--J", o.J, "number of domains");
      sub->add_option("--h", o.h, "grid spacing");
    }
    if (name == "legendre" || name == "moreau" || name == "dirichlet")
      sub->add_option("--source", o.source, "hyperboloid, subsolution or supersolution");
    if (name == "legendre" || name == "moreau") sub->add_option("--h", o.h, "grid spacing");
    if (name == "verify-all") sub->add_option("--only", o.only, "criterion ids")->delimiter(',');
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  return run(chosen, o);
}
