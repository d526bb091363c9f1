// Computes best-known values for a generated suite by multi-start tabu search
// followed by decomposition runs, and prints them as a registry file.

#include <cstdio>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gqs/construction.hpp"
#include "gqs/instance_io.hpp"
#include "gqs/solver.hpp"
#include "gqs/tabu_search.hpp"

int main(int argc, char** argv) {
  using namespace gqs;
  CLI::App app{"Best-known values for a generated instance suite", "gqs-reference"};
  std::string prefix = "generated";
  std::size_t n = 500, count = 10, restarts = 200, tenure = 20, conv_len = 2500;
  std::size_t gqs_reps = 8, k = 50;
  std::uint64_t seed = 0, gqs_iterations = 20000;
  double density = 0.1;
  std::int64_t lo = -100, hi = 100;
  app.add_option("--name", prefix);
  app.add_option("--n", n);
  app.add_option("--count", count);
  app.add_option("--seed", seed);
  app.add_option("--density", density);
  app.add_option("--lo", lo);
  app.add_option("--hi", hi);
  app.add_option("--restarts", restarts, "Tabu search restarts per problem");
  app.add_option("--tenure", tenure);
  app.add_option("--conv-len", conv_len);
  app.add_option("--gqs-reps", gqs_reps, "Decomposition runs per problem");
  app.add_option("--gqs-iterations", gqs_iterations, "Oracle calls per decomposition run");
  app.add_option("--k", k);
  CLI11_PARSE(app, argc, argv);

  fmt::print("# {} x n={} density={} coefficients [{}, {}] seed={}\n", count, n, density, lo,
             hi, seed);
  fmt::print("# best of {} tabu restarts (tenure {}, conv {}) and {} decomposition runs "
             "(k={}, {} oracle calls)\n",
             restarts, tenure, conv_len, gqs_reps, k, gqs_iterations);
  for (const auto& [name, q] : generate_suite(prefix, count, n, density, lo, hi, seed)) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t tabu_hits = 0;
    Rng rng(seed ^ 0x5eedULL);
    for (std::size_t r = 0; r < restarts; ++r) {
      GainsState state(q, random_bits(n, rng));
      const double v = tabu_search(state, {tenure, conv_len, 1e-8}).best.value;
      if (v < best) {
        best = v;
        tabu_hits = 0;
      }
      tabu_hits += v == best;
    }
    std::size_t gqs_hits = 0;
    for (std::size_t r = 0; r < gqs_reps; ++r) {
      SolverParams p;
      p.k = k;
      p.seed = 1000 + r;
      p.stop.max_iterations = gqs_iterations;
      p.stop.target_value = best - 1;
      const double v = solve(q, p).best_value;
      if (v < best) {
        std::fprintf(stderr, "%s: decomposition improved %.0f -> %.0f\n", name.c_str(), best, v);
        best = v;
        gqs_hits = 0;
        tabu_hits = 0;
      }
      gqs_hits += v == best;
    }
    std::fprintf(stderr, "%s: %.0f (tabu hits %zu/%zu)\n", name.c_str(), best, tabu_hits,
                 restarts);
    fmt::print("{} {}\n", name, best);
    std::cout.flush();
  }
  return 0;
}
