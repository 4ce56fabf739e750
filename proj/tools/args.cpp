#include <ostream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace treespectra::cli {

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Green functions, Poisson kernels and boundary measures of Schrodinger operators on trees"};
  RunConfig c;
  app.add_option("command", c.command,
                 "green | density | poisson | measure | reconstruct | identities | plancherel | oracle")
      ->required();
  app.add_option("--model", c.model_path, "model document (JSON)")->required();
  app.add_option("--gamma", c.gamma, "spectral parameter E+etai; eta = 0 means E+i0");
  app.add_option("--E", c.energy, "boundary energy (E+i0)");
  app.add_option("--v", c.v, "vertex address, e.g. o or 0.1.0");
  app.add_option("--w", c.w, "second vertex address");
  app.add_option("--ray", c.rays, "ray prefix (repeat for sums of kernels)");
  app.add_option("--depth", c.depth, "ball radius, cylinder depth or truncation radius");
  app.add_option("--band", c.band, "energy window a,b or full");
  app.add_option("--panels", c.panels, "quadrature panels");
  app.add_option("--nodes", c.nodes, "Gauss-Legendre nodes per panel");
  app.add_option("--points", c.points, "density grid size");
  app.add_option("--F", c.function, "one | poly:c0,c1,... | indicator:a,b | table:x=y,...");
  app.add_option("--tol", c.tol, "tolerance deciding the exit status");
  app.add_option("--threads", c.threads, "worker threads for energy quadrature");
  app.add_option("--format", c.format, "csv | structured");
  app.add_option("--seed", c.seed, "seed for randomized suites");
  app.add_option("--samples", c.samples, "samples for the identity suite");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return run(c, out, err);
}

}  // namespace treespectra::cli
